"""Benchmark metrics: exact match, penalized partial accuracy, unfold
accuracy, and the hole-condition/unfolding-strategy error taxonomy.

Partial accuracy is M / (G + max(0, P - G)) where G and P are the truth
and prediction hole counts and M the size of the exact-tuple multiset
intersection; over-prediction is penalized, under-prediction is not
double-counted.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .engine import HoleSpec
from .geometry import InputError

FIELDS = ("shape", "size", "location", "direction")

HOLE_CONDITIONS = ("Extra", "Missing", "Equal")
UNFOLD_STRATEGIES = ("ExtraUnfolds", "FoldDepth", "ExactUnfolds")


def _hole_tuple(h: HoleSpec, include_direction: bool) -> tuple:
    base = (h.shape, h.size, tuple(h.location))
    return base + (h.orientation,) if include_direction else base


def _attribute_values(holes: Iterable[HoleSpec], attribute: str) -> Counter:
    if attribute == "shape":
        return Counter(h.shape for h in holes)
    if attribute == "size":
        return Counter(h.size for h in holes)
    if attribute == "location":
        return Counter(tuple(h.location) for h in holes)
    if attribute == "direction":
        return Counter(h.orientation for h in holes)
    raise InputError(f"unknown attribute: {attribute!r}")


def _penalized(matched: int, g: int, p: int) -> Fraction:
    denom = g + max(0, p - g)
    if denom == 0:
        return Fraction(1)
    return Fraction(matched, denom)


def hole_match(
    pred: Sequence[HoleSpec], truth: Sequence[HoleSpec], include_direction: bool = True
) -> tuple[int, int, int]:
    """(G, P, M): truth count, prediction count, exact-tuple matches."""
    truth_ms = Counter(_hole_tuple(h, include_direction) for h in truth)
    pred_ms = Counter(_hole_tuple(h, include_direction) for h in pred)
    m = sum((truth_ms & pred_ms).values())
    return sum(truth_ms.values()), sum(pred_ms.values()), m


def partial_accuracy(
    pred: Sequence[HoleSpec], truth: Sequence[HoleSpec], include_direction: bool = True
) -> Fraction:
    g, p, m = hole_match(pred, truth, include_direction)
    return _penalized(m, g, p)


def field_partial_accuracy(
    pred: Sequence[HoleSpec],
    truth: Sequence[HoleSpec],
    attribute: str,
    include_direction: bool = True,
) -> Fraction:
    """Penalized accuracy over a single attribute's value multiset."""
    if attribute == "direction" and not include_direction:
        raise InputError("direction is not scored for text-format answers")
    truth_ms = _attribute_values(truth, attribute)
    pred_ms = _attribute_values(pred, attribute)
    m = sum((truth_ms & pred_ms).values())
    return _penalized(m, sum(truth_ms.values()), sum(pred_ms.values()))


def unfold_accuracy(
    pred_steps: Sequence[str], truth_steps: Sequence[str]
) -> tuple[bool, Fraction]:
    """(exact, step accuracy): positional matches with an extra-step penalty."""
    pred = list(pred_steps)
    truth = list(truth_steps)
    matches = sum(1 for a, b in zip(pred, truth) if a == b)
    denom = len(truth) + max(0, len(pred) - len(truth))
    acc = Fraction(1) if denom == 0 else Fraction(matches, denom)
    return pred == truth, acc


def classify_error(
    pred: Sequence[HoleSpec],
    truth: Sequence[HoleSpec],
    pred_steps: Sequence[str],
    truth_steps: Sequence[str],
    include_direction: bool = True,
) -> tuple[str, str]:
    """(hole condition, unfolding strategy) per the error taxonomy."""
    g, p, m = hole_match(pred, truth, include_direction)
    condition = "Extra" if p > g else "Missing" if p < g else "Equal"
    steps_equal = list(pred_steps) == list(truth_steps)
    holes_equal = m == g == p
    if len(pred_steps) > len(truth_steps):
        strategy = "ExtraUnfolds"
    elif steps_equal and (condition != "Equal" or holes_equal):
        strategy = "ExactUnfolds"
    elif steps_equal and condition == "Equal":
        # Right unfolds, equal hole count, wrong attributes: a layer-depth /
        # symmetry failure.
        strategy = "FoldDepth"
    else:
        strategy = "FoldDepth"
    return condition, strategy


@dataclass
class ScoreReport:
    exact_match: bool
    overall_partial: Fraction
    field_partial: dict[str, Fraction]
    unfold_exact: bool
    unfold_step_accuracy: Fraction
    extra_holes: bool
    missing_holes: bool
    error_class: tuple[str, str]
    parse_failure: bool = False
    details: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        return {
            "exact_match": self.exact_match,
            "overall_partial": float(self.overall_partial),
            "field_partial": {k: float(v) for k, v in self.field_partial.items()},
            "unfold_exact": self.unfold_exact,
            "unfold_step_accuracy": float(self.unfold_step_accuracy),
            "extra_holes": self.extra_holes,
            "missing_holes": self.missing_holes,
            "error_class": list(self.error_class),
            "parse_failure": self.parse_failure,
            **self.details,
        }


def parse_failure_report() -> ScoreReport:
    return ScoreReport(
        exact_match=False,
        overall_partial=Fraction(0),
        field_partial={},
        unfold_exact=False,
        unfold_step_accuracy=Fraction(0),
        extra_holes=False,
        missing_holes=True,
        error_class=("Missing", "FoldDepth"),
        parse_failure=True,
    )


def score_answer(
    pred_holes: Sequence[HoleSpec],
    truth_holes: Sequence[HoleSpec],
    pred_steps: Sequence[str] = (),
    truth_steps: Sequence[str] = (),
    include_direction: bool = True,
) -> ScoreReport:
    g, p, m = hole_match(pred_holes, truth_holes, include_direction)
    overall = _penalized(m, g, p)
    unfold_exact, step_acc = unfold_accuracy(pred_steps, truth_steps)
    fields = [f for f in FIELDS if include_direction or f != "direction"]
    field_partial = {
        f: field_partial_accuracy(pred_holes, truth_holes, f, include_direction) for f in fields
    }
    exact = overall == 1 and unfold_exact
    return ScoreReport(
        exact_match=exact,
        overall_partial=overall,
        field_partial=field_partial,
        unfold_exact=unfold_exact,
        unfold_step_accuracy=step_acc,
        extra_holes=p > g,
        missing_holes=p < g,
        error_class=classify_error(
            pred_holes, truth_holes, pred_steps, truth_steps, include_direction
        ),
    )


def aggregate(reports: Sequence[tuple[int, ScoreReport]]) -> dict:
    """Per-group and overall rollups (percentages) from (group, report) rows."""

    def pct(values: list) -> float:
        return round(100.0 * sum(values) / len(values), 2) if values else 0.0

    def rollup(rows: list[ScoreReport]) -> dict:
        fields: dict[str, float] = {}
        for f in FIELDS:
            vals = [float(r.field_partial[f]) for r in rows if f in r.field_partial]
            if vals:
                fields[f] = round(100.0 * sum(vals) / len(vals), 2)
        return {
            "count": len(rows),
            "exact_match_pct": pct([r.exact_match for r in rows]),
            "overall_partial_pct": pct([float(r.overall_partial) for r in rows]),
            "extra_holes_pct": pct([r.extra_holes for r in rows]),
            "missing_holes_pct": pct([r.missing_holes for r in rows]),
            "unfold_exact_pct": pct([r.unfold_exact for r in rows]),
            "unfold_steps_pct": pct([float(r.unfold_step_accuracy) for r in rows]),
            "parse_failure_pct": pct([r.parse_failure for r in rows]),
            "field_partial_pct": fields,
        }

    by_group: dict[int, list[ScoreReport]] = {}
    for group, report in reports:
        by_group.setdefault(group, []).append(report)
    return {
        "overall": rollup([r for _, r in reports]),
        "per_group": {str(g): rollup(rows) for g, rows in sorted(by_group.items())},
    }
