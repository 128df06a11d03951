from newsadapt.ingest.formats import CorpusFormat
from newsadapt.ingest.parsing import (
    MalformedRow,
    OffsetOutOfRange,
    ParseDiagnostic,
    parse_annotations,
)
from newsadapt.ingest.pipeline import (
    EmptyGroup,
    InsufficientArticles,
    PipelineReport,
    build_master_table,
    clean_articles,
    exclude_binary_conflicts,
    filter_unusable,
    group_by_article,
    resolve_severity_conflicts,
    split_bank_test,
)
from newsadapt.ingest.types import (
    LABEL_NA,
    LABEL_NONE,
    LABEL_PROBLEMATIC,
    AnnotationRecord,
    BankSplit,
    CleanArticle,
)

__all__ = [
    "AnnotationRecord",
    "BankSplit",
    "CleanArticle",
    "CorpusFormat",
    "EmptyGroup",
    "InsufficientArticles",
    "LABEL_NA",
    "LABEL_NONE",
    "LABEL_PROBLEMATIC",
    "MalformedRow",
    "OffsetOutOfRange",
    "ParseDiagnostic",
    "PipelineReport",
    "build_master_table",
    "clean_articles",
    "exclude_binary_conflicts",
    "filter_unusable",
    "group_by_article",
    "parse_annotations",
    "resolve_severity_conflicts",
    "split_bank_test",
]
