"""Review state machine with optimistic versioning.

Admission is reachable only through two concordant reviews (independent or
after discussion) or an adjudicator decision; every transition is reported
as an event for the append-only audit log.
"""

from __future__ import annotations

from dataclasses import dataclass

from newsadapt.curation.models import (
    OUTCOME_ADMIT,
    OUTCOME_EXCLUDE,
    STATUS_ADJUDICATION,
    STATUS_ADMITTED,
    STATUS_EXCLUDED,
    STATUS_IN_DISCUSSION,
    STATUS_PENDING,
    STATUS_REVIEWED_ONCE,
    AdjudicationDecision,
    ExpertCorrection,
    ReviewItem,
)
from newsadapt.evaluation.metrics import span_f1

DEFAULT_CONCORDANCE_SPAN_F1 = 0.5


class VersionConflict(RuntimeError):
    pass


class IllegalTransition(RuntimeError):
    pass


class SelfAdjudication(RuntimeError):
    pass


@dataclass
class TransitionEvent:
    item_id: str
    op: str
    actor: str
    version_before: int
    version_after: int
    status_after: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "op": self.op,
            "actor": self.actor,
            "version_before": self.version_before,
            "version_after": self.version_after,
            "status_after": self.status_after,
            "payload": self.payload,
        }


def corrections_concordant(
    a: ExpertCorrection,
    b: ExpertCorrection,
    span_threshold: float = DEFAULT_CONCORDANCE_SPAN_F1,
) -> bool:
    """Agreement rule: same severity and span token-overlap F1 at threshold.

    For two None corrections both span lists are empty, so the span term is
    the empty-empty case (1.0) and severity equality decides.
    """
    if a.severity != b.severity:
        return False
    return span_f1(a.span_texts(), b.span_texts()) >= span_threshold


class ReviewMachine:
    def __init__(self, span_threshold: float = DEFAULT_CONCORDANCE_SPAN_F1):
        self.span_threshold = span_threshold

    def _check_version(self, item: ReviewItem, expected_version: int) -> None:
        if expected_version != item.version:
            raise VersionConflict(
                f"item {item.item_id!r} is at version {item.version}, "
                f"caller expected {expected_version}"
            )

    def submit_review(
        self, item: ReviewItem, correction: ExpertCorrection, expected_version: int
    ) -> TransitionEvent:
        self._check_version(item, expected_version)
        before = item.version
        if item.status == STATUS_PENDING:
            item.reviews.append(correction)
            item.status = STATUS_REVIEWED_ONCE
        elif item.status == STATUS_REVIEWED_ONCE:
            reviewers = item.reviewer_ids()
            if correction.expert_id in reviewers:
                item.reviews.append(correction)  # reviewer revises their own take
            else:
                item.reviews.append(correction)
                latest = item.latest_by_expert()
                first, second = item.reviewer_ids()
                if corrections_concordant(
                    latest[first], latest[second], self.span_threshold
                ):
                    item.status = STATUS_ADMITTED
                    item.admitted_correction_id = latest[first].correction_id
                else:
                    item.status = STATUS_IN_DISCUSSION
        elif item.status == STATUS_IN_DISCUSSION:
            reviewers = item.reviewer_ids()
            if correction.expert_id not in reviewers and len(reviewers) >= 2:
                raise IllegalTransition(
                    f"expert {correction.expert_id!r} is not a reviewer of "
                    f"item {item.item_id!r} in discussion"
                )
            item.reviews.append(correction)
            reviewers = item.reviewer_ids()
            if len(reviewers) >= 2:
                latest = item.latest_by_expert()
                first, second = reviewers[0], reviewers[1]
                if corrections_concordant(
                    latest[first], latest[second], self.span_threshold
                ):
                    item.status = STATUS_ADMITTED
                    item.admitted_correction_id = latest[first].correction_id
        else:
            raise IllegalTransition(
                f"cannot review item {item.item_id!r} in status {item.status!r}"
            )
        item.version += 1
        return TransitionEvent(
            item_id=item.item_id,
            op="submit_review",
            actor=correction.expert_id,
            version_before=before,
            version_after=item.version,
            status_after=item.status,
            payload={"correction": correction.to_dict()},
        )

    def open_discussion(
        self, item: ReviewItem, actor: str, expected_version: int
    ) -> TransitionEvent:
        self._check_version(item, expected_version)
        if item.status != STATUS_REVIEWED_ONCE:
            raise IllegalTransition(
                f"cannot open discussion on item {item.item_id!r} in status "
                f"{item.status!r}"
            )
        before = item.version
        item.status = STATUS_IN_DISCUSSION
        item.version += 1
        return TransitionEvent(
            item_id=item.item_id,
            op="open_discussion",
            actor=actor,
            version_before=before,
            version_after=item.version,
            status_after=item.status,
            payload={},
        )

    def admit(self, item: ReviewItem, actor: str, expected_version: int) -> TransitionEvent:
        """Explicit consensus recording from discussion; requires the two
        reviewers' latest corrections to be concordant."""
        self._check_version(item, expected_version)
        if item.status != STATUS_IN_DISCUSSION:
            raise IllegalTransition(
                f"cannot admit item {item.item_id!r} from status {item.status!r}"
            )
        latest = item.latest_by_expert()
        reviewers = item.reviewer_ids()
        if len(reviewers) < 2 or not corrections_concordant(
            latest[reviewers[0]], latest[reviewers[1]], self.span_threshold
        ):
            raise IllegalTransition(
                f"item {item.item_id!r} has no recorded consensus to admit"
            )
        before = item.version
        item.status = STATUS_ADMITTED
        item.admitted_correction_id = latest[reviewers[0]].correction_id
        item.version += 1
        return TransitionEvent(
            item_id=item.item_id,
            op="admit",
            actor=actor,
            version_before=before,
            version_after=item.version,
            status_after=item.status,
            payload={},
        )

    def adjudicate(
        self, item: ReviewItem, decision: AdjudicationDecision, expected_version: int
    ) -> TransitionEvent:
        self._check_version(item, expected_version)
        if item.status not in (STATUS_IN_DISCUSSION, STATUS_ADJUDICATION):
            raise IllegalTransition(
                f"cannot adjudicate item {item.item_id!r} in status {item.status!r}"
            )
        if decision.adjudicator_id in item.reviewer_ids():
            raise SelfAdjudication(
                f"expert {decision.adjudicator_id!r} reviewed item "
                f"{item.item_id!r} and cannot adjudicate it"
            )
        if decision.outcome == OUTCOME_ADMIT:
            known = {r.correction_id for r in item.reviews}
            if decision.correction_id not in known:
                raise IllegalTransition(
                    f"adjudication names unknown correction {decision.correction_id!r}"
                )
            new_status = STATUS_ADMITTED
        elif decision.outcome == OUTCOME_EXCLUDE:
            new_status = STATUS_EXCLUDED
        else:
            raise IllegalTransition(f"unknown adjudication outcome {decision.outcome!r}")
        before = item.version
        item.status = new_status
        item.decision = decision
        if new_status == STATUS_ADMITTED:
            item.admitted_correction_id = decision.correction_id
        item.version += 1
        return TransitionEvent(
            item_id=item.item_id,
            op="adjudicate",
            actor=decision.adjudicator_id,
            version_before=before,
            version_after=item.version,
            status_after=item.status,
            payload={"decision": decision.to_dict()},
        )
