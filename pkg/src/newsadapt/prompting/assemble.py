"""Prompt assembly: instructions, exemplar blocks in ranked order, test item.

Rendering is deterministic; identical inputs produce byte-identical prompt
text. Retrieved-context conditions inject exemplars in retrieval rank order,
so M1 and A1 built from the same RetrievalResult share the exact same
exemplar sequence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from newsadapt.bank.types import Exemplar, RetrievalResult
from newsadapt.ingest.types import CleanArticle
from newsadapt.prompting.conditions import (
    CONTEXT_NONE,
    CONTEXT_RETRIEVED,
    CONTEXT_STATIC,
    INSTRUCTION_ENGLISH,
    PromptCondition,
    get_condition,
)
from newsadapt.prompting.output import escape_field, render_exemplar
from newsadapt.prompting.templates import TemplateStore
from newsadapt.tokens import TokenEstimator, estimate_tokens

_PLACEHOLDER_RX = re.compile(r"\{(INSTRUCTIONS|EXEMPLARS|ITEM)\}")


class MissingContext(ValueError):
    pass


class TemplateUnresolvedPlaceholder(ValueError):
    pass


@dataclass
class PromptBundle:
    """Fully rendered prompt for one (item, condition, model) cell."""

    condition: str
    model_id: str
    article_id: str
    language: str
    prompt_text: str
    injected_exemplar_ids: list[str]
    template_version: str
    dropped_exemplar_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "model_id": self.model_id,
            "article_id": self.article_id,
            "language": self.language,
            "prompt_text": self.prompt_text,
            "injected_exemplar_ids": list(self.injected_exemplar_ids),
            "template_version": self.template_version,
            "dropped_exemplar_ids": list(self.dropped_exemplar_ids),
        }


def render_item(article: CleanArticle) -> str:
    return f"Item to assess:\nText: {escape_field(article.article_text)}"


def _context_exemplars(
    condition: PromptCondition,
    article: CleanArticle,
    context,
) -> list[Exemplar]:
    if condition.context_source == CONTEXT_NONE:
        return []
    if condition.context_source == CONTEXT_STATIC:
        if not context:
            raise MissingContext(
                f"condition {condition.name} needs a static exemplar list"
            )
        return list(context)
    if condition.context_source == CONTEXT_RETRIEVED:
        if not isinstance(context, RetrievalResult):
            raise MissingContext(
                f"condition {condition.name} needs a RetrievalResult"
            )
        exemplars = [ex for ex, _ in context.items]
        for ex in exemplars:
            if ex.language != article.language:
                raise MissingContext(
                    f"retrieved exemplar {ex.article_id!r} is {ex.language!r}, "
                    f"item is {article.language!r}"
                )
            if ex.article_id == article.article_id:
                raise MissingContext(
                    f"test article {article.article_id!r} leaked into its own context"
                )
        return exemplars
    raise MissingContext(f"unknown context source {condition.context_source!r}")


def assemble_prompt(
    condition: PromptCondition | str,
    article: CleanArticle,
    context=None,
    templates: TemplateStore | None = None,
    model=None,
    estimator: TokenEstimator = estimate_tokens,
) -> PromptBundle:
    """Render one prompt. `context` is a RetrievalResult for retrieved
    conditions, a static exemplar list for B1, and unused for B0.

    If `model` (a ModelConfig) is given and the rendered prompt exceeds its
    context budget, lowest-ranked exemplars are dropped first; the test item
    is never dropped.
    """
    if isinstance(condition, str):
        condition = get_condition(condition)
    templates = templates or TemplateStore.defaults()

    lang = "en" if condition.instruction_language == INSTRUCTION_ENGLISH else article.language
    instructions = templates.instructions_for(lang)
    exemplars = _context_exemplars(condition, article, context)
    item_block = render_item(article)

    unknown = [
        m.group(0)
        for m in re.finditer(r"\{[A-Z_]+\}", templates.prompt_template)
        if _PLACEHOLDER_RX.fullmatch(m.group(0)) is None
    ]
    if unknown:
        raise TemplateUnresolvedPlaceholder(
            f"template carries unresolved placeholders: {sorted(set(unknown))}"
        )

    dropped: list[str] = []
    while True:
        blocks = "\n\n".join(render_exemplar(ex) for ex in exemplars)
        slots = {"INSTRUCTIONS": instructions, "EXEMPLARS": blocks, "ITEM": item_block}
        text = _PLACEHOLDER_RX.sub(lambda m: slots[m.group(1)], templates.prompt_template)
        text = re.sub(r"\n{3,}", "\n\n", text).strip() + "\n"
        if model is None or estimator(text) <= model.context_budget or not exemplars:
            break
        dropped.insert(0, exemplars[-1].article_id)
        exemplars = exemplars[:-1]

    return PromptBundle(
        condition=condition.name,
        model_id=getattr(model, "model_id", "") if model is not None else "",
        article_id=article.article_id,
        language=article.language,
        prompt_text=text,
        injected_exemplar_ids=[ex.article_id for ex in exemplars],
        template_version=templates.version_hash,
        dropped_exemplar_ids=dropped,
    )
