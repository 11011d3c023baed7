"""Exact solvers: prediction by simulation, planning by inverse search,
and the executable plan verifier used to grade planning answers.

The planning search inverts layer transforms per candidate sequence
instead of trying hole placements: for each punchable triangle of a
candidate's folded state, the set of original triangles it would pierce
is precomputed, and a target pattern is solvable iff it splits into at
most two such pierce-sets with consistent shape, size, and orientation.
Facing never changes coverage, so only forward-facing sequences are
searched; candidate states per fold count are cached across tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from .codecs import PlanningAnswer, PredictionAnswer
from .engine import (
    HolePattern,
    HoleSpec,
    InvalidFoldError,
    InvalidPunchError,
    RuleViolationError,
    derive_unfold_steps,
    punch,
    simulate,
    sort_pattern,
    unfold_all,
)
from .generate import facing_sequences
from .geometry import TRI_CENTROIDS, InputError, Transform, id_tri, tri_id, triangle_at
from .rules import FoldSpec, is_fold, validate


@dataclass(frozen=True)
class Plan:
    folds: tuple[FoldSpec, ...]
    initial_holes: tuple[HoleSpec, ...]

    def to_answer(self, task_id: str = "") -> PlanningAnswer:
        return PlanningAnswer(task_id, self.folds, self.initial_holes)


@dataclass(frozen=True)
class VerifyOutcome:
    executed_pattern: HolePattern
    matches_target: bool
    rejection_reason: str | None = None


def solve_prediction(task: dict, unfold_mode: str = "geometric") -> PredictionAnswer:
    """Ground-truth answer for a prediction/backward task by simulation."""
    if task["family"] not in ("prediction", "backward"):
        raise InputError(f"not a prediction task: {task['family']}")
    state = simulate(task["actions"])
    pattern = unfold_all(punch(state, task["holes"]))
    steps = derive_unfold_steps(task["actions"], unfold_mode)
    return PredictionAnswer(task["id"], steps, pattern)


def solve_generalization(task: dict) -> PredictionAnswer:
    """Answer pattern for scenario B of a generalization task."""
    if task["family"] != "generalization":
        raise InputError(f"not a generalization task: {task['family']}")
    state = simulate(task["actions"])
    pattern = unfold_all(punch(state, task["scenario_b_holes"]))
    return PredictionAnswer(task["id"], (), pattern)


def verify_plan(plan: Plan, task: dict) -> VerifyOutcome:
    """Execute a plan and compare its pattern against the task target."""
    if task["family"] != "planning":
        raise InputError(f"not a planning task: {task['family']}")
    target = sort_pattern(task["target_pattern"])
    required = task["required_fold_count"]

    def reject(reason: str) -> VerifyOutcome:
        return VerifyOutcome((), False, reason)

    if len(plan.folds) != required:
        return reject(f"plan has {len(plan.folds)} folds, task requires {required}")
    if not 1 <= len(plan.initial_holes) <= 2:
        return reject(f"plan must punch 1..2 holes, got {len(plan.initial_holes)}")
    violations = validate(plan.folds)
    if violations:
        ids = ", ".join(f"{v.rule_set} rule {v.rule_id}" for v in violations)
        return reject(f"fold sequence violates rules: {ids}")
    try:
        state = simulate(plan.folds, check_rules=False)
        executed = unfold_all(punch(state, plan.initial_holes))
    except (InvalidFoldError, InvalidPunchError, RuleViolationError, InputError) as exc:
        return reject(str(exc))
    return VerifyOutcome(executed, executed == target)


class _Candidate:
    """A simulated forward-facing fold sequence with its punch pierce-sets."""

    __slots__ = ("folds", "options")

    def __init__(self, folds: tuple[FoldSpec, ...], options: dict[int, tuple[tuple[int, Transform], ...]]):
        self.folds = folds
        self.options = options


@lru_cache(maxsize=None)
def _planning_candidates(fold_count: int) -> tuple[_Candidate, ...]:
    out = []
    for seq in facing_sequences(fold_count, "F"):
        folds = tuple(a for a in seq if is_fold(a))
        try:
            state = simulate(folds, check_rules=False)
        except InvalidFoldError:
            # Rule-valid but not mesh-realizable; no task can come from it.
            continue
        options: dict[int, tuple[tuple[int, Transform], ...]] = {}
        for tid in state.silhouette:
            pierced = []
            for i, fp in enumerate(state.footprints):
                if tid in fp:
                    layer = state.layers[i]
                    back = layer.pose.invert()
                    orig = triangle_at(*back.apply(TRI_CENTROIDS[tid]))
                    pierced.append((orig, layer.pose))
            options[tid] = tuple(pierced)
        out.append(_Candidate(folds, options))
    return tuple(out)


def _match_punch(
    pierced: tuple[tuple[int, Transform], ...],
    by_location: dict[int, HoleSpec],
    display_tid: int,
) -> HoleSpec | None:
    """The punch HoleSpec explaining exactly these target holes, if any."""
    shape = size = None
    orientation = None
    for orig, pose in pierced:
        hole = by_location.get(orig)
        if hole is None:
            return None
        if shape is None:
            shape, size = hole.shape, hole.size
        elif hole.shape != shape or hole.size != size:
            return None
        # hole.orientation == pose.invert().transport(phi)  =>  phi below
        phi = pose.transport_orientation(hole.orientation)
        if orientation is None:
            orientation = phi
        elif phi != orientation:
            return None
    return HoleSpec(shape, size, orientation, id_tri(display_tid))


def solve_planning(task: dict) -> Plan | None:
    """First plan (deterministic order) whose execution matches the target.

    Returns None when no rotation-free sequence of the required length can
    produce the target with at most two punches (cannot happen for
    generated tasks).
    """
    if task["family"] != "planning":
        raise InputError(f"not a planning task: {task['family']}")
    target = sort_pattern(task["target_pattern"])
    by_location = {tri_id(h.location): h for h in target}
    if len(by_location) != len(target):
        return None  # duplicate locations can never be produced by punches
    target_locs = frozenset(by_location)

    for cand in _planning_candidates(task["required_fold_count"]):
        # Punches whose pierce-set stays within the target's locations.
        usable: list[tuple[int, frozenset[int]]] = []
        for tid in sorted(cand.options):
            covered = frozenset(orig for orig, _ in cand.options[tid])
            if covered <= target_locs:
                usable.append((tid, covered))
        for tid, covered in usable:
            if covered == target_locs:
                hole = _match_punch(cand.options[tid], by_location, tid)
                if hole is not None:
                    return Plan(cand.folds, (hole,))
        for i, (t1, c1) in enumerate(usable):
            for t2, c2 in usable[i + 1 :]:
                if c1 | c2 != target_locs or c1 & c2:
                    continue
                h1 = _match_punch(cand.options[t1], by_location, t1)
                if h1 is None:
                    continue
                h2 = _match_punch(cand.options[t2], by_location, t2)
                if h2 is not None:
                    return Plan(cand.folds, (h1, h2))
    return None


def solve_task(task: dict):
    """Dispatch to the right solver; returns an answer document object."""
    family = task["family"]
    if family in ("prediction", "backward"):
        return solve_prediction(task)
    if family == "generalization":
        return solve_generalization(task)
    plan = solve_planning(task)
    if plan is None:
        raise InputError(f"task {task['id']} is unsolvable")
    return plan.to_answer(task["id"])
