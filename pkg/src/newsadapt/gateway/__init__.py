from newsadapt.gateway.cache import GenerationCache, GenerationRecord, cache_key
from newsadapt.gateway.config import DEFAULT_MODELS, ModelConfig, load_model_configs
from newsadapt.gateway.runner import (
    CellResult,
    ContextOverflow,
    MatrixResult,
    PermanentFailure,
    generate,
    make_cell_id,
    read_matrix,
    run_matrix,
    write_matrix,
)
from newsadapt.gateway.transport import (
    AuthMissing,
    HttpChatTransport,
    MockChatTransport,
    TransportError,
)

__all__ = [
    "AuthMissing",
    "CellResult",
    "ContextOverflow",
    "DEFAULT_MODELS",
    "GenerationCache",
    "GenerationRecord",
    "HttpChatTransport",
    "MatrixResult",
    "MockChatTransport",
    "ModelConfig",
    "PermanentFailure",
    "TransportError",
    "cache_key",
    "generate",
    "load_model_configs",
    "make_cell_id",
    "read_matrix",
    "run_matrix",
    "write_matrix",
]
