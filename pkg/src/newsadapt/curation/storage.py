"""Curation persistence: item store with an append-only audit log, plus the
append-only rating store.

State is reconstructed by replaying the audit log through the same state
machine, so the log is the single source of truth.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

from newsadapt.curation.machine import ReviewMachine, TransitionEvent
from newsadapt.curation.models import (
    AdjudicationDecision,
    ExpertCorrection,
    ReviewItem,
)
from newsadapt.evaluation.ab import AbRating


class ItemStore:
    def __init__(
        self,
        data_dir: str | Path,
        machine: ReviewMachine | None = None,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.audit_path = self.data_dir / "audit.jsonl"
        self.machine = machine or ReviewMachine()
        self.items: dict[str, ReviewItem] = {}
        self._seq = 0
        if self.audit_path.exists():
            self._replay()

    def _replay(self) -> None:
        with open(self.audit_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                event = json.loads(line)
                self._seq = max(self._seq, int(event.get("seq", 0)))
                self.apply_event(event, record=False)

    def apply_event(self, event: dict, record: bool = True) -> None:
        op = event["op"]
        if op == "seed_item":
            payload = event["payload"]
            item = ReviewItem(
                item_id=payload["item_id"],
                article_id=payload["article_id"],
                language=payload["language"],
                article_text=payload["article_text"],
                model_assessment=payload.get("model_assessment", {}),
            )
            self.items[item.item_id] = item
            return
        item = self.items[event["item_id"]]
        expected = event["version_before"]
        if op == "submit_review":
            correction = ExpertCorrection.from_dict(event["payload"]["correction"])
            self.machine.submit_review(item, correction, expected)
        elif op == "open_discussion":
            self.machine.open_discussion(item, event["actor"], expected)
        elif op == "admit":
            self.machine.admit(item, event["actor"], expected)
        elif op == "adjudicate":
            decision = AdjudicationDecision.from_dict(event["payload"]["decision"])
            self.machine.adjudicate(item, decision, expected)
        else:
            raise ValueError(f"unknown audit op {op!r}")

    def _append(self, event: dict) -> None:
        self._seq += 1
        event = {"seq": self._seq, "ts": time.time(), **event}
        with open(self.audit_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False))
            fh.write("\n")

    def seed_item(self, item: ReviewItem) -> ReviewItem:
        if item.item_id in self.items:
            raise ValueError(f"item {item.item_id!r} already exists")
        self.items[item.item_id] = item
        self._append(
            {
                "item_id": item.item_id,
                "op": "seed_item",
                "actor": "",
                "version_before": 0,
                "version_after": 0,
                "status_after": item.status,
                "payload": {
                    "item_id": item.item_id,
                    "article_id": item.article_id,
                    "language": item.language,
                    "article_text": item.article_text,
                    "model_assessment": dict(item.model_assessment),
                },
            }
        )
        return item

    def get(self, item_id: str) -> ReviewItem:
        item = self.items.get(item_id)
        if item is None:
            raise KeyError(f"unknown review item {item_id!r}")
        return item

    def queue(self, language: str | None = None) -> list[ReviewItem]:
        rows = [
            item
            for item in self.items.values()
            if language is None or item.language == language
        ]
        return sorted(rows, key=lambda i: i.item_id)

    def record(self, event: TransitionEvent) -> None:
        self._append(event.to_dict())

    def submit_review(
        self, item_id: str, correction: ExpertCorrection, expected_version: int
    ) -> ReviewItem:
        item = self.get(item_id)
        event = self.machine.submit_review(item, correction, expected_version)
        self.record(event)
        return item

    def open_discussion(self, item_id: str, actor: str, expected_version: int) -> ReviewItem:
        item = self.get(item_id)
        event = self.machine.open_discussion(item, actor, expected_version)
        self.record(event)
        return item

    def admit(self, item_id: str, actor: str, expected_version: int) -> ReviewItem:
        item = self.get(item_id)
        event = self.machine.admit(item, actor, expected_version)
        self.record(event)
        return item

    def adjudicate(
        self, item_id: str, decision: AdjudicationDecision, expected_version: int
    ) -> ReviewItem:
        item = self.get(item_id)
        event = self.machine.adjudicate(item, decision, expected_version)
        self.record(event)
        return item

    def admitted_items(self) -> list[ReviewItem]:
        return [i for i in self.queue() if i.status == "admitted"]


class RatingStore:
    """Append-only blinded A/B rating log keyed by (evaluator, item)."""

    def __init__(self, data_dir: str | Path):
        self.path = Path(data_dir) / "ratings.jsonl"
        self.ratings: dict[tuple[str, str], AbRating] = {}
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    rating = AbRating.from_dict(json.loads(line))
                    self.ratings[(rating.evaluator_id, rating.item_id)] = rating

    def put(self, rating: AbRating) -> None:
        self.ratings[(rating.evaluator_id, rating.item_id)] = rating
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rating.to_dict(), ensure_ascii=False))
            fh.write("\n")

    def completed_items(self, evaluator_id: str) -> set[str]:
        return {item for (ev, item) in self.ratings if ev == evaluator_id}

    def all(self) -> list[AbRating]:
        return [self.ratings[k] for k in sorted(self.ratings)]
