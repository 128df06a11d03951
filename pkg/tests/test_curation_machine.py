"""State machine tests including the exhaustive small-trace safety check."""

import copy
import itertools

import pytest

from newsadapt.curation.machine import (
    IllegalTransition,
    ReviewMachine,
    SelfAdjudication,
    VersionConflict,
    corrections_concordant,
)
from newsadapt.curation.models import (
    AdjudicationDecision,
    ExpertCorrection,
    InvalidCorrection,
    ReviewItem,
    SpanSelection,
)

TEXT = "alpha beta gamma delta epsilon"
VOCAB = ["Low", "Medium", "High"]


def correction(expert, severity="High", span=(0, 10), rationale="sound reasons", cid=None):
    spans = []
    if severity != "None":
        spans = [SpanSelection(span[0], span[1], TEXT[span[0] : span[1]])]
    return ExpertCorrection(
        correction_id=cid or f"{expert}-{severity}-{span[0]}-{span[1]}",
        expert_id=expert,
        severity=severity,
        spans=spans,
        rationale=rationale if severity != "None" else "",
        rubric={"grounded_in_text": True, "locally_salient_framing": True,
                "non_generic": True},
    )


def fresh_item(item_id="item-1"):
    return ReviewItem(
        item_id=item_id,
        article_id="art-1",
        language="fa",
        article_text=TEXT,
        model_assessment={"severity": "Low", "spans": ["alpha"], "rationale": "meh"},
    )


@pytest.fixture
def machine():
    return ReviewMachine()


def test_two_concordant_reviews_admit(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1"), 0)
    assert item.status == "reviewed_once"
    machine.submit_review(item, correction("e2"), 1)
    assert item.status == "admitted"
    # earliest reviewer's correction is canonical
    assert item.admitted_correction_id == correction("e1").correction_id


def test_discordant_second_review_opens_discussion(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1", severity="High"), 0)
    machine.submit_review(item, correction("e2", severity="Low"), 1)
    assert item.status == "in_discussion"


def test_consensus_in_discussion_admits(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1", severity="High"), 0)
    machine.submit_review(item, correction("e2", severity="Low"), 1)
    machine.submit_review(item, correction("e2", severity="High"), 2)
    assert item.status == "admitted"


def test_span_divergence_blocks_auto_admission(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1", span=(0, 10)), 0)
    machine.submit_review(item, correction("e2", span=(20, 28)), 1)
    # same severity but non-overlapping spans: F1 = 0 < 0.5 threshold
    assert item.status == "in_discussion"


def test_adjudication_admits_or_excludes(machine):
    for outcome, status in (("admit", "admitted"), ("exclude", "excluded")):
        item = fresh_item()
        c1 = correction("e1", severity="High")
        machine.submit_review(item, c1, 0)
        machine.submit_review(item, correction("e2", severity="Low"), 1)
        decision = AdjudicationDecision(
            adjudicator_id="e3", outcome=outcome,
            correction_id=c1.correction_id if outcome == "admit" else None,
        )
        machine.adjudicate(item, decision, 2)
        assert item.status == status
        if outcome == "admit":
            assert item.admitted_correction_id == c1.correction_id


def test_self_adjudication_rejected(machine):
    item = fresh_item()
    c1 = correction("e1", severity="High")
    machine.submit_review(item, c1, 0)
    machine.submit_review(item, correction("e2", severity="Low"), 1)
    with pytest.raises(SelfAdjudication):
        machine.adjudicate(
            item,
            AdjudicationDecision("e1", "admit", c1.correction_id),
            2,
        )
    assert item.status == "in_discussion"  # failed call left state alone


def test_version_conflict(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1"), 0)
    with pytest.raises(VersionConflict):
        machine.submit_review(item, correction("e2"), 0)
    assert item.version == 1


def test_review_after_terminal_state_illegal(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1"), 0)
    machine.submit_review(item, correction("e2"), 1)
    assert item.status == "admitted"
    with pytest.raises(IllegalTransition):
        machine.submit_review(item, correction("e3"), 2)


def test_explicit_admit_requires_consensus(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1", severity="High"), 0)
    machine.submit_review(item, correction("e2", severity="Low"), 1)
    with pytest.raises(IllegalTransition):
        machine.admit(item, "e1", 2)
    machine.submit_review(item, correction("e1", severity="Low", span=(20, 28)), 2)
    # e1 now matches e2's severity but not the span; still discordant
    assert item.status == "in_discussion"


def test_open_discussion_then_second_review(machine):
    item = fresh_item()
    machine.submit_review(item, correction("e1"), 0)
    machine.open_discussion(item, "e1", 1)
    assert item.status == "in_discussion"
    machine.submit_review(item, correction("e2"), 2)
    assert item.status == "admitted"


def test_correction_validation():
    bad_range = ExpertCorrection(
        "c1", "e1", "High",
        [SpanSelection(0, 99, "x")], "reason",
        {"grounded_in_text": True, "locally_salient_framing": True, "non_generic": True},
    )
    with pytest.raises(InvalidCorrection):
        bad_range.validate(TEXT, VOCAB)
    missing_rubric = correction("e1")
    missing_rubric.rubric = {"grounded_in_text": True}
    with pytest.raises(InvalidCorrection):
        missing_rubric.validate(TEXT, VOCAB)
    none_with_span = correction("e1", severity="None")
    none_with_span.spans = [SpanSelection(0, 5, TEXT[0:5])]
    with pytest.raises(InvalidCorrection):
        none_with_span.validate(TEXT, VOCAB)
    correction("e1").validate(TEXT, VOCAB)  # the good one passes


def test_none_corrections_concord_on_severity():
    a = correction("e1", severity="None")
    b = correction("e2", severity="None")
    assert corrections_concordant(a, b)


# --- exhaustive small-trace enumeration --------------------------------------

C_A = ("High", (0, 10))     # baseline correction
C_A2 = ("High", (0, 11))    # concordant with C_A (span F1 ≥ 0.5)
C_B = ("Low", (20, 28))     # discordant with both
CORRECTIONS = {"cA": C_A, "cA2": C_A2, "cB": C_B}

OPS = (
    [("review", e, c) for e in ("e1", "e2") for c in ("cA", "cA2", "cB")]
    + [("discuss",)]
    + [("adjudicate", a, o) for a in ("e1", "e3") for o in ("admit", "exclude")]
    + [("admit",)]
)


def apply_op(machine, item, op, counter):
    if op[0] == "review":
        _, expert, key = op
        severity, span = CORRECTIONS[key]
        c = correction(expert, severity=severity, span=span, cid=f"c{next(counter)}")
        machine.submit_review(item, c, item.version)
    elif op[0] == "discuss":
        machine.open_discussion(item, "e1", item.version)
    elif op[0] == "adjudicate":
        _, adjudicator, outcome = op
        cid = item.reviews[0].correction_id if item.reviews else "missing"
        machine.adjudicate(
            item,
            AdjudicationDecision(adjudicator, outcome,
                                 cid if outcome == "admit" else None),
            item.version,
        )
    else:
        machine.admit(item, "e1", item.version)


def path_justifies_admission(item):
    """Admission is justified by adjudication or two concordant corrections."""
    if item.decision is not None and item.decision.outcome == "admit":
        return True
    latest = item.latest_by_expert()
    reviewers = item.reviewer_ids()
    if len(reviewers) < 2:
        return False
    return corrections_concordant(latest[reviewers[0]], latest[reviewers[1]])


def test_exhaustive_traces_admit_only_with_agreement_or_adjudication():
    machine = ReviewMachine()
    counter = itertools.count()
    visited = 0
    admissions = 0

    def explore(item, depth):
        nonlocal visited, admissions
        if depth == 6:
            return
        for op in OPS:
            clone = copy.deepcopy(item)
            before = clone.to_dict()
            try:
                apply_op(machine, clone, op, counter)
            except (IllegalTransition, SelfAdjudication, VersionConflict):
                assert clone.to_dict() == before  # failed ops never mutate
                continue
            visited += 1
            if clone.status == "admitted":
                admissions += 1
                assert path_justifies_admission(clone), (op, clone.to_dict())
                continue  # terminal
            if clone.status == "excluded":
                continue
            explore(clone, depth + 1)

    explore(fresh_item(), 0)
    assert visited > 1000
    assert admissions > 10
