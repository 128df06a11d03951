from newsadapt.prompting.assemble import (
    MissingContext,
    PromptBundle,
    TemplateUnresolvedPlaceholder,
    assemble_prompt,
    render_item,
)
from newsadapt.prompting.conditions import (
    A1,
    B0,
    B1,
    CONDITIONS,
    M1,
    PromptCondition,
    condition_grid,
    get_condition,
)
from newsadapt.prompting.output import (
    Assessment,
    PARSE_CLEAN,
    PARSE_FAILED,
    PARSE_REPAIRED,
    parse_model_output,
    render_assessment,
    render_exemplar,
)
from newsadapt.prompting.templates import (
    MissingTemplate,
    TemplateStore,
    load_static_exemplars,
    static_exemplars_from_bank,
)

__all__ = [
    "A1",
    "B0",
    "B1",
    "CONDITIONS",
    "M1",
    "Assessment",
    "MissingContext",
    "MissingTemplate",
    "PARSE_CLEAN",
    "PARSE_FAILED",
    "PARSE_REPAIRED",
    "PromptBundle",
    "PromptCondition",
    "TemplateStore",
    "TemplateUnresolvedPlaceholder",
    "assemble_prompt",
    "condition_grid",
    "get_condition",
    "load_static_exemplars",
    "parse_model_output",
    "render_assessment",
    "render_exemplar",
    "render_item",
    "static_exemplars_from_bank",
]
