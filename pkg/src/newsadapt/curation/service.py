"""HTTP+JSON service for the expert curation loop and blinded A/B rating.

All bodies are UTF-8 JSON mirroring the domain types. Experts and
evaluators authenticate with static bearer tokens from the data-dir config;
rating-mode responses never serialize condition, model, or provenance
fields.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Query, Request
from pydantic import BaseModel, Field

from newsadapt.bank.embedding import EmbeddingProvider, HashedNgramProvider
from newsadapt.bank.store import load_bank, save_bank
from newsadapt.curation.admission import (
    ContaminationAttempt,
    exemplar_from_item,
    rebuild_bank_with_admissions,
)
from newsadapt.curation.machine import (
    IllegalTransition,
    ReviewMachine,
    SelfAdjudication,
    VersionConflict,
)
from newsadapt.curation.models import (
    AdjudicationDecision,
    ExpertCorrection,
    InvalidCorrection,
    ReviewItem,
    SpanSelection,
)
from newsadapt.curation.storage import ItemStore, RatingStore
from newsadapt.evaluation.ab import AbRating, SideScores
from newsadapt.ingest.formats import DEFAULT_SEVERITY_VOCABULARY
from newsadapt.ingest.types import nfc


class ItemNotInAssignment(RuntimeError):
    pass


def provider_from_id(provider_id: str) -> EmbeddingProvider:
    """Reconstruct the offline fallback provider from its id string."""
    match = re.fullmatch(r"hashed-ngram-v1:n=(\d+):d=(\d+)", provider_id)
    if not match:
        raise ValueError(
            f"provider {provider_id!r} cannot be reconstructed from its id; "
            "configure an embedding endpoint"
        )
    return HashedNgramProvider(dim=int(match.group(2)), n=int(match.group(1)))


class ServiceConfig:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        cfg_path = self.data_dir / "config.json"
        cfg = json.loads(cfg_path.read_text(encoding="utf-8")) if cfg_path.exists() else {}
        self.expert_tokens: dict[str, str] = cfg.get("experts", {})
        self.evaluator_tokens: dict[str, str] = cfg.get("evaluators", {})
        self.severity_vocabulary: list[str] = cfg.get(
            "severity_vocabulary", list(DEFAULT_SEVERITY_VOCABULARY)
        )
        self.span_threshold: float = float(cfg.get("span_threshold", 0.5))
        self.bank_path: str | None = cfg.get("bank_path")
        self.test_ids_path: str | None = cfg.get("test_ids_path")


class CorrectionBody(BaseModel):
    severity: str
    spans: list[dict] = Field(default_factory=list)
    rationale: str = ""
    rubric: dict[str, bool] = Field(default_factory=dict)


class ReviewBody(BaseModel):
    version: int
    correction: CorrectionBody


class AdjudicateBody(BaseModel):
    version: int
    outcome: str
    correction_id: str | None = None
    note: str = ""


class SeedItemBody(BaseModel):
    item_id: str
    article_id: str
    language: str
    article_text: str
    model_assessment: dict = Field(default_factory=dict)


class SideScoresBody(BaseModel):
    overall: int = Field(ge=1, le=4)
    grounding: int = Field(ge=1, le=4)
    cultural_nuance: int = Field(ge=1, le=4)
    nongeneric: int = Field(ge=1, le=4)


class RatingBody(BaseModel):
    left: SideScoresBody
    right: SideScoresBody
    comment: str = ""


def build_app(data_dir: str | Path) -> FastAPI:
    data_dir = Path(data_dir)
    config = ServiceConfig(data_dir)
    store = ItemStore(data_dir, ReviewMachine(config.span_threshold))
    ratings = RatingStore(data_dir)

    # Evaluator-facing A/B rows, keyed by evaluator id (blinded by design).
    ab_rows: dict[str, list[dict]] = {}
    export_path = data_dir / "ab_export.jsonl"
    if export_path.exists():
        with open(export_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    row = json.loads(line)
                    ab_rows.setdefault(row["evaluator_id"], []).append(row)

    app = FastAPI(title="newsadapt curation service")

    def bearer_token(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise HTTPException(status_code=401, detail="bearer token required")
        return header[7:].strip()

    def expert_session(request: Request) -> str:
        token = bearer_token(request)
        expert_id = config.expert_tokens.get(token)
        if expert_id is None:
            raise HTTPException(status_code=403, detail="not an expert session")
        return expert_id

    def evaluator_session(request: Request) -> str:
        token = bearer_token(request)
        evaluator_id = config.evaluator_tokens.get(token)
        if evaluator_id is None:
            raise HTTPException(status_code=403, detail="not an evaluator session")
        return evaluator_id

    def item_view(item: ReviewItem) -> dict:
        return item.to_dict()

    @app.get("/queue")
    def get_queue(
        expert_id: str = Depends(expert_session),
        lang: str | None = Query(default=None),
    ):
        return {
            "items": [
                {
                    "item_id": item.item_id,
                    "language": item.language,
                    "status": item.status,
                    "version": item.version,
                }
                for item in store.queue(lang)
            ]
        }

    @app.get("/items/{item_id}")
    def get_item(item_id: str, expert_id: str = Depends(expert_session)):
        try:
            return item_view(store.get(item_id))
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown item {item_id!r}")

    @app.post("/items")
    def post_item(body: SeedItemBody, expert_id: str = Depends(expert_session)):
        item = ReviewItem(
            item_id=body.item_id,
            article_id=body.article_id,
            language=body.language,
            article_text=nfc(body.article_text),
            model_assessment=body.model_assessment,
        )
        try:
            store.seed_item(item)
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return item_view(item)

    @app.post("/items/{item_id}/review")
    def post_review(
        item_id: str, body: ReviewBody, expert_id: str = Depends(expert_session)
    ):
        try:
            item = store.get(item_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown item {item_id!r}")
        correction = ExpertCorrection(
            correction_id=f"{item_id}:{expert_id}:{len(item.reviews) + 1}",
            expert_id=expert_id,
            severity=body.correction.severity,
            spans=[SpanSelection.from_dict(s) for s in body.correction.spans],
            rationale=body.correction.rationale,
            rubric=body.correction.rubric,
        )
        try:
            correction.validate(item.article_text, config.severity_vocabulary)
            store.submit_review(item_id, correction, body.version)
        except InvalidCorrection as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except VersionConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except IllegalTransition as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return item_view(item)

    @app.post("/items/{item_id}/adjudicate")
    def post_adjudicate(
        item_id: str, body: AdjudicateBody, expert_id: str = Depends(expert_session)
    ):
        try:
            item = store.get(item_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown item {item_id!r}")
        decision = AdjudicationDecision(
            adjudicator_id=expert_id,
            outcome=body.outcome,
            correction_id=body.correction_id,
            note=body.note,
        )
        try:
            store.adjudicate(item_id, decision, body.version)
        except SelfAdjudication as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except VersionConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except IllegalTransition as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return item_view(item)

    @app.post("/bank/rebuild")
    def post_rebuild(expert_id: str = Depends(expert_session)):
        if not config.bank_path:
            raise HTTPException(status_code=409, detail="no bank_path configured")
        bank = load_bank(config.bank_path)
        test_ids: set[str] = set()
        if config.test_ids_path:
            test_ids = set(
                json.loads(Path(config.test_ids_path).read_text(encoding="utf-8"))
            )
        admitted = [exemplar_from_item(item) for item in store.admitted_items()]
        try:
            provider = provider_from_id(bank.provider_id)
            new_bank = rebuild_bank_with_admissions(bank, admitted, provider, test_ids)
        except (ContaminationAttempt, ValueError) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        base = Path(config.bank_path)
        version = 2
        while (out := base.with_name(f"{base.stem}_v{version}{base.suffix}")).exists():
            version += 1
        save_bank(new_bank, out)
        return {
            "path": str(out),
            "fingerprint": new_bank.fingerprint,
            "size": len(new_bank),
            "admitted": len(admitted),
        }

    @app.get("/rating/session")
    def get_rating_session(evaluator_id: str = Depends(evaluator_session)):
        rows = ab_rows.get(evaluator_id, [])
        done = ratings.completed_items(evaluator_id)
        items = [
            {
                "item_id": row["item_id"],
                "language": row["language"],
                "item_text": row["item_text"],
                "left_rationale": row["left_rationale"],
                "right_rationale": row["right_rationale"],
                "completed": row["item_id"] in done,
            }
            for row in rows
        ]
        return {
            "evaluator_id": evaluator_id,
            "items": items,
            "progress": {
                "completed": sum(1 for i in items if i["completed"]),
                "total": len(items),
            },
        }

    @app.post("/rating/{item_id}")
    def post_rating(
        item_id: str, body: RatingBody, evaluator_id: str = Depends(evaluator_session)
    ):
        assigned = {row["item_id"] for row in ab_rows.get(evaluator_id, [])}
        if item_id not in assigned:
            raise HTTPException(
                status_code=403,
                detail=f"item {item_id!r} is not in this evaluator's assignment",
            )
        rating = AbRating(
            evaluator_id=evaluator_id,
            item_id=item_id,
            left=SideScores(**body.left.model_dump()),
            right=SideScores(**body.right.model_dump()),
            comment=body.comment,
        )
        ratings.put(rating)
        done = ratings.completed_items(evaluator_id)
        return {
            "stored": True,
            "progress": {
                "completed": len(done),
                "total": len(ab_rows.get(evaluator_id, [])),
            },
        }

    app.state.store = store
    app.state.ratings = ratings
    app.state.config = config
    return app
