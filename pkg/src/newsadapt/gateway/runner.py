"""Generation dispatch and the (item x condition x model) matrix runner."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from newsadapt.bank.embedding import EmbeddingCache, EmbeddingProvider
from newsadapt.bank.retrieval import retrieve
from newsadapt.bank.types import ExemplarBank, RetrievalResult
from newsadapt.gateway.cache import GenerationCache, GenerationRecord, cache_key
from newsadapt.gateway.config import ModelConfig
from newsadapt.gateway.transport import TransportError
from newsadapt.ingest.types import CleanArticle
from newsadapt.prompting.assemble import PromptBundle, assemble_prompt
from newsadapt.prompting.conditions import (
    CONTEXT_RETRIEVED,
    CONTEXT_STATIC,
    PromptCondition,
)
from newsadapt.prompting.output import Assessment, parse_model_output
from newsadapt.prompting.templates import TemplateStore, static_exemplars_from_bank
from newsadapt.tokens import TokenEstimator, estimate_tokens

RETRY_ATTEMPTS = 5
RETRY_BASE_SECONDS = 1.0
RETRY_FACTOR = 2.0


class ContextOverflow(RuntimeError):
    pass


class PermanentFailure(RuntimeError):
    def __init__(self, message: str, status: int | None = None, attempts: int = 0):
        super().__init__(message)
        self.status = status
        self.attempts = attempts


def generate(
    bundle: PromptBundle,
    cfg: ModelConfig,
    transport,
    cache: GenerationCache | None = None,
    estimator: TokenEstimator = estimate_tokens,
    sleeper=time.sleep,
    tag: str | None = None,
) -> GenerationRecord:
    """One completion with caching and bounded exponential-backoff retries."""
    prompt_tokens = estimator(bundle.prompt_text)
    if prompt_tokens > cfg.context_budget:
        raise ContextOverflow(
            f"prompt of ~{prompt_tokens} tokens exceeds {cfg.model_id} "
            f"budget {cfg.context_budget}"
        )
    key = cache_key(cfg.model_id, bundle.prompt_text, cfg.temperature, cfg.max_output_tokens)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit

    last_error: TransportError | None = None
    for attempt in range(1, RETRY_ATTEMPTS + 1):
        started = time.perf_counter()
        try:
            text, request_id = transport.complete(cfg, bundle.prompt_text, tag=tag)
        except TransportError as exc:
            last_error = exc
            if not exc.retryable:
                raise PermanentFailure(str(exc), status=exc.status, attempts=attempt) from exc
            if attempt < RETRY_ATTEMPTS:
                sleeper(RETRY_BASE_SECONDS * (RETRY_FACTOR ** (attempt - 1)))
            continue
        record = GenerationRecord(
            cache_key=key,
            text=text,
            latency_ms=round((time.perf_counter() - started) * 1000.0, 3),
            provider_request_id=request_id,
            timestamp=time.time(),
            retry_count=attempt - 1,
            model_id=cfg.model_id,
        )
        if cache is not None:
            cache.put(record)
        return record
    raise PermanentFailure(
        f"exhausted {RETRY_ATTEMPTS} attempts: {last_error}",
        status=last_error.status if last_error else None,
        attempts=RETRY_ATTEMPTS,
    )


def make_cell_id(article_id: str, condition: str, model_id: str) -> str:
    return f"{article_id}|{condition}|{model_id}"


@dataclass
class CellResult:
    cell_id: str
    article_id: str
    language: str
    condition: str
    model_id: str
    injected_exemplar_ids: list[str]
    record: GenerationRecord
    assessment: Assessment

    def to_dict(self) -> dict:
        return {
            "cell_id": self.cell_id,
            "article_id": self.article_id,
            "language": self.language,
            "condition": self.condition,
            "model_id": self.model_id,
            "injected_exemplar_ids": list(self.injected_exemplar_ids),
            "record": self.record.to_dict(),
            "assessment": self.assessment.to_dict(),
        }

    @classmethod
    def from_dict(cls, row: dict) -> "CellResult":
        return cls(
            cell_id=row["cell_id"],
            article_id=row["article_id"],
            language=row["language"],
            condition=row["condition"],
            model_id=row["model_id"],
            injected_exemplar_ids=list(row.get("injected_exemplar_ids") or []),
            record=GenerationRecord.from_dict(row["record"]),
            assessment=Assessment.from_dict(row["assessment"]),
        )


@dataclass
class MatrixResult:
    cells: list[CellResult] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "cells_completed": len(self.cells),
            "cells_failed": len(self.failures),
            "failed_cells": sorted(f["cell_id"] for f in self.failures),
        }


def run_matrix(
    items: list[CleanArticle],
    conditions: list[PromptCondition],
    models: list[ModelConfig],
    bank: ExemplarBank,
    provider: EmbeddingProvider,
    templates: TemplateStore,
    k: int,
    transport,
    cache: GenerationCache | None = None,
    concurrency: int = 4,
    embedding_cache: EmbeddingCache | None = None,
    sleeper=time.sleep,
) -> MatrixResult:
    """One cell per (item x condition x model), deterministically ordered.

    Retrieval runs once per item and is shared by every retrieved-context
    condition, so M1 and A1 always inject the same exemplar sequence. Cell
    failures are collected, never fatal; a warm cache makes reruns exact.
    """
    embedding_cache = embedding_cache if embedding_cache is not None else EmbeddingCache()
    items_sorted = sorted(items, key=lambda a: (a.language, a.article_id))

    needs_retrieval = any(c.context_source == CONTEXT_RETRIEVED for c in conditions)
    needs_static = any(c.context_source == CONTEXT_STATIC for c in conditions)

    retrievals: dict[str, RetrievalResult] = {}
    if needs_retrieval:
        for item in items_sorted:
            retrievals[item.article_id] = retrieve(
                item, bank, provider, k, cache=embedding_cache
            )

    static_pool: dict[str, list] = {}
    if needs_static:
        for language in sorted({a.language for a in items_sorted}):
            try:
                static_pool[language] = templates.static_for(language)
            except KeyError:
                static_pool[language] = static_exemplars_from_bank(bank, language, k)

    tasks: list[tuple[str, CleanArticle, PromptCondition, ModelConfig, PromptBundle]] = []
    result = MatrixResult()
    for item in items_sorted:
        for condition in conditions:
            context = None
            if condition.context_source == CONTEXT_RETRIEVED:
                context = retrievals[item.article_id]
            elif condition.context_source == CONTEXT_STATIC:
                context = static_pool[item.language]
            for cfg in models:
                cell_id = make_cell_id(item.article_id, condition.name, cfg.model_id)
                bundle = assemble_prompt(
                    condition, item, context=context, templates=templates, model=cfg
                )
                tasks.append((cell_id, item, condition, cfg, bundle))

    def run_cell(task) -> CellResult | dict:
        cell_id, item, condition, cfg, bundle = task
        try:
            record = generate(
                bundle, cfg, transport, cache=cache, sleeper=sleeper, tag=cell_id
            )
        except (ContextOverflow, PermanentFailure) as exc:
            return {"cell_id": cell_id, "error": type(exc).__name__, "detail": str(exc)}
        assessment = parse_model_output(record.text, templates.severity_vocabulary)
        return CellResult(
            cell_id=cell_id,
            article_id=item.article_id,
            language=item.language,
            condition=condition.name,
            model_id=cfg.model_id,
            injected_exemplar_ids=bundle.injected_exemplar_ids,
            record=record,
            assessment=assessment,
        )

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        outcomes = list(pool.map(run_cell, tasks))

    for outcome in outcomes:
        if isinstance(outcome, CellResult):
            result.cells.append(outcome)
        else:
            result.failures.append(outcome)
    result.cells.sort(key=lambda c: c.cell_id)
    result.failures.sort(key=lambda f: f["cell_id"])
    return result


def write_matrix(result: MatrixResult, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.jsonl"
    with open(results_path, "w", encoding="utf-8") as fh:
        for cell in result.cells:
            fh.write(json.dumps(cell.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
    summary_path = out_dir / "summary.json"
    summary_path.write_text(
        json.dumps(result.summary(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return results_path


def read_matrix(path: str | Path) -> list[CellResult]:
    cells = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                cells.append(CellResult.from_dict(json.loads(line)))
    return cells
