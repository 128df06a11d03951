"""Model endpoint configuration.

All pilot runs use temperature 0.0; the two default configs mirror the
benchmark model pair (context budgets: 1.05M and 65.5K tokens).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

DEFAULT_BASE_URL = "https://openrouter.ai/api/v1"
DEFAULT_AUTH_ENV = "OPENROUTER_API_KEY"


@dataclass(frozen=True)
class ModelConfig:
    model_id: str
    context_budget: int
    temperature: float = 0.0
    max_output_tokens: int = 1024
    base_url: str = DEFAULT_BASE_URL
    auth_env: str = DEFAULT_AUTH_ENV

    def __post_init__(self):
        if self.context_budget <= 0:
            raise ValueError("context budget must be positive")

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "context_budget": self.context_budget,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "base_url": self.base_url,
            "auth_env": self.auth_env,
        }


DEFAULT_MODELS = (
    ModelConfig(model_id="meta-llama/llama-4-maverick", context_budget=1_050_000),
    ModelConfig(model_id="mistralai/mixtral-8x22b-instruct", context_budget=65_500),
)


def load_model_configs(path: str | Path) -> list[ModelConfig]:
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(rows, dict):
        rows = rows.get("models", [])
    out = []
    for row in rows:
        out.append(
            ModelConfig(
                model_id=row["model_id"],
                context_budget=int(row["context_budget"]),
                temperature=float(row.get("temperature", 0.0)),
                max_output_tokens=int(row.get("max_output_tokens", 1024)),
                base_url=row.get("base_url", DEFAULT_BASE_URL),
                auth_env=row.get("auth_env", DEFAULT_AUTH_ENV),
            )
        )
    return out
