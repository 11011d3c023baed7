"""Layered sheet engine: fold, rotate, punch, unfold.

A state is an immutable stack of layers.  Each layer keeps the set of
original triangle ids it carries plus the rigid pose mapping original
coordinates to current physical coordinates; physical coordinates always
stay inside the display square, so display-frame triangle addressing
applies at every step.

Folds act in the world frame: the crease is the midline (H/V) or the
diagonal (D) of the active region's bounding box, and everything on the
moving side of the crease line reflects across it.  A fold whose crease
does not land on the triangle mesh is rejected; every rule-valid
rotation-free sequence is mesh-safe, while a small fraction of
rotation-bearing sequences is not and gets resampled by the generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .geometry import (
    CENTER,
    SCALE,
    TRI_CENTROIDS,
    TRI_VERTICES,
    CreaseLine,
    IDENTITY,
    InputError,
    Transform,
    TriRef,
    id_tri,
    rotation_ccw,
    tri_id,
    tri_index,
    triangle_at,
    triangle_at_or_none,
)
from .rules import (
    Action,
    FoldSpec,
    RotationSpec,
    RuleViolation,
    encode_actions,
    is_fold,
    validate,
)

SHAPES = (
    "circle",
    "square",
    "triangle",
    "trapezoid",
    "star",
    "letter",
    "text",
    "ellipse",
    "rectangle",
)
SIZES = ("small", "large")

# Shapes whose look is rotation-invariant; excluded from rotation tasks.
ROTATION_INVARIANT_SHAPES = ("circle", "square")


class InvalidFoldError(InputError):
    pass


class InvalidPunchError(InputError):
    pass


class RuleViolationError(InvalidFoldError):
    def __init__(self, violations: Sequence[RuleViolation]):
        self.violations = tuple(violations)
        msgs = "; ".join(f"{v.rule_set} rule {v.rule_id} at step {v.index + 1}" for v in violations)
        super().__init__(f"action sequence violates rules: {msgs}")


class HoleSpec(NamedTuple):
    shape: str
    size: str
    orientation: int  # degrees counterclockwise
    location: TriRef

    def validate(self) -> "HoleSpec":
        if self.shape not in SHAPES:
            raise InputError(f"unknown shape: {self.shape!r}")
        if self.size not in SIZES:
            raise InputError(f"unknown size: {self.size!r}")
        if self.orientation not in (0, 90, 180, 270):
            raise InputError(f"orientation must be 0/90/180/270: {self.orientation}")
        TriRef(*self.location).validate()
        return self

    def sort_key(self) -> tuple:
        return (tri_index(self.location), self.shape, self.size, self.orientation)


HolePattern = tuple[HoleSpec, ...]


def sort_pattern(holes: Iterable[HoleSpec]) -> HolePattern:
    return tuple(sorted(holes, key=HoleSpec.sort_key))


class Layer(NamedTuple):
    triangles: frozenset[int]  # original triangle ids
    pose: Transform  # original -> physical coordinates


# Crease kind and a unit(ish) vector pointing toward the moving side.
AXIS_GEOMETRY: dict[str, tuple[str, tuple[int, int]]] = {
    "H1": ("h", (0, -1)),  # top folds down
    "H2": ("h", (0, 1)),
    "V1": ("v", (1, 0)),  # right folds left
    "V2": ("v", (-1, 0)),
    "D1": ("main", (1, -1)),  # TR corner folds across TL-BR
    "D2": ("anti", (-1, -1)),
    "D3": ("anti", (1, 1)),
    "D4": ("main", (-1, 1)),
}

_LINE_GRADIENT = {"h": (0, 1), "v": (1, 0), "main": (-1, 1), "anti": (1, 1)}


def _moving_sign(axis: str) -> int:
    kind, (vx, vy) = AXIS_GEOMETRY[axis]
    a, b = _LINE_GRADIENT[kind]
    return 1 if a * vx + b * vy > 0 else -1


def transport_axis(axis: str, rotation_deg: int) -> str:
    """Axis label seen after rotating the frame counterclockwise."""
    return _AXIS_TRANSPORT[rotation_deg % 360][axis]


def _build_axis_transport() -> dict[int, dict[str, str]]:
    dirs = {"h": (1, 0), "v": (0, 1), "main": (1, 1), "anti": (1, -1)}

    def canon(v: tuple[int, int]) -> tuple[int, int]:
        return v if (v[0], v[1]) > (0, 0) or v[0] > 0 else (-v[0], -v[1])

    by_data = {
        (canon(dirs[kind]), mv): axis for axis, (kind, mv) in AXIS_GEOMETRY.items()
    }
    out: dict[int, dict[str, str]] = {}
    for deg in (0, 90, 180, 270):
        m = rotation_ccw(deg, (0, 0))
        table = {}
        for axis, (kind, (vx, vy)) in AXIS_GEOMETRY.items():
            ux, uy = dirs[kind]
            u2 = canon((m.a * ux + m.b * uy, m.c * ux + m.d * uy))
            v2 = (m.a * vx + m.b * vy, m.c * vx + m.d * vy)
            table[axis] = by_data[(u2, v2)]
        out[deg] = table
    return out


_AXIS_TRANSPORT = _build_axis_transport()

# Printed unfolding remap for a 180-degree rotation (identity); the geometric
# remap swaps each direction instead.  90/270 printed tables equal geometry.
_TABLE_COMPAT_180 = {axis: axis for axis in AXIS_GEOMETRY}


@dataclass(frozen=True)
class FoldedState:
    layers: tuple[Layer, ...]  # index == depth, 0 is the bottom
    active: frozenset[int]  # display triangle ids of the active region
    net_rotation: int
    history: tuple[Action, ...]

    @staticmethod
    def flat() -> "FoldedState":
        return FoldedState(
            layers=(Layer(frozenset(range(32)), IDENTITY),),
            active=frozenset(range(32)),
            net_rotation=0,
            history=(),
        )

    @cached_property
    def footprints(self) -> tuple[frozenset[int], ...]:
        """Display triangle ids physically covered by each layer.

        Paper that has swung past the sheet outline (a folded overhang)
        has no display address and is omitted here.
        """
        out = []
        for layer in self.layers:
            ids = (
                triangle_at_or_none(*layer.pose.apply(TRI_CENTROIDS[t]))
                for t in layer.triangles
            )
            out.append(frozenset(t for t in ids if t is not None))
        return tuple(out)

    @cached_property
    def silhouette(self) -> frozenset[int]:
        cover: frozenset[int] = frozenset()
        for fp in self.footprints:
            cover |= fp
        return cover

    def coverage(self, display_tid: int) -> int:
        return sum(1 for fp in self.footprints if display_tid in fp)

    def covering_layers(self, display_tid: int) -> list[int]:
        return [i for i, fp in enumerate(self.footprints) if display_tid in fp]


def _active_bbox(active: frozenset[int]) -> tuple[int, int, int, int]:
    xs = [x for t in active for x, _ in TRI_VERTICES[t]]
    ys = [y for t in active for _, y in TRI_VERTICES[t]]
    return min(xs), max(xs), min(ys), max(ys)


def crease_for(axis: str, active: frozenset[int]) -> tuple[CreaseLine, int]:
    """Crease line and moving-side sign for a fold of the active region."""
    x0, x1, y0, y1 = _active_bbox(active)
    kind, _ = AXIS_GEOMETRY[axis]
    if kind == "h":
        line = CreaseLine("h", (y0 + y1) // 2) if (y0 + y1) % 2 == 0 else None
    elif kind == "v":
        line = CreaseLine("v", (x0 + x1) // 2) if (x0 + x1) % 2 == 0 else None
    else:
        if x1 - x0 != y1 - y0:
            raise InvalidFoldError(
                f"diagonal fold {axis} needs a square active region, got bbox {(x1 - x0)}x{(y1 - y0)}"
            )
        line = CreaseLine("main", y0 - x0) if kind == "main" else CreaseLine("anti", x0 + y1)
    if line is None or not line.on_mesh:
        raise InvalidFoldError(f"crease for {axis} does not lie on mesh edges")
    return line, _moving_sign(axis)


def apply_fold(state: FoldedState, fold: FoldSpec, check_rules: bool = True) -> FoldedState:
    if check_rules:
        violations = validate(state.history + (fold,))
        if violations:
            raise RuleViolationError(violations)
    crease, sign = crease_for(fold.axis, state.active)

    moving_active = frozenset(t for t in state.active if crease.side(TRI_CENTROIDS[t]) == sign)
    staying_active = frozenset(t for t in state.active if crease.side(TRI_CENTROIDS[t]) == -sign)
    if not moving_active or not staying_active:
        raise InvalidFoldError(f"fold {fold.encode()} does not halve the active region")

    mirror = crease.reflection()
    staying: list[Layer] = []
    moving: list[Layer] = []
    for layer in state.layers:
        stay_tris, move_tris = [], []
        for t in layer.triangles:
            side = crease.side(layer.pose.apply(TRI_CENTROIDS[t]))
            (move_tris if side == sign else stay_tris).append(t)
        if stay_tris:
            staying.append(Layer(frozenset(stay_tris), layer.pose))
        if move_tris:
            moving.append(Layer(frozenset(move_tris), mirror.compose(layer.pose)))

    if fold.facing == "F":
        layers = tuple(staying) + tuple(moving)
    else:
        layers = tuple(moving) + tuple(staying)
    return FoldedState(layers, staying_active, state.net_rotation, state.history + (fold,))


def apply_rotation(state: FoldedState, rot: RotationSpec, check_rules: bool = True) -> FoldedState:
    if check_rules:
        violations = validate(state.history + (rot,))
        if violations:
            raise RuleViolationError(violations)
    turn = rotation_ccw(rot.degrees, CENTER)
    layers = tuple(Layer(l.triangles, turn.compose(l.pose)) for l in state.layers)
    active = frozenset(triangle_at(*turn.apply(TRI_CENTROIDS[t])) for t in state.active)
    return FoldedState(
        layers,
        active,
        (state.net_rotation + rot.degrees) % 360,
        state.history + (rot,),
    )


def simulate(actions: Iterable[Action], check_rules: bool = True) -> FoldedState:
    """Fold/rotate a flat sheet through a whole action sequence.

    Rule validation runs once on the complete sequence (the rule set
    depends on whether rotations appear anywhere in it).
    """
    seq = tuple(actions)
    if check_rules and seq:
        violations = validate(seq)
        if violations:
            raise RuleViolationError(violations)
    state = FoldedState.flat()
    for action in seq:
        if is_fold(action):
            state = apply_fold(state, action, check_rules=False)
        else:
            state = apply_rotation(state, action, check_rules=False)
    return state


class PunchRecord(NamedTuple):
    hole: HoleSpec
    pierced: tuple[tuple[int, int], ...]  # (original triangle id, orientation)


@dataclass(frozen=True)
class PunchedState:
    state: FoldedState
    records: tuple[PunchRecord, ...]


def punch(state: FoldedState, holes: Sequence[HoleSpec]) -> PunchedState:
    """Punch 1..3 holes through every layer covering each punch triangle."""
    if not 1 <= len(holes) <= 3:
        raise InvalidPunchError(f"punch takes 1..3 holes, got {len(holes)}")
    seen: set[TriRef] = set()
    records = []
    for hole in holes:
        hole = HoleSpec(*hole).validate()
        if hole.location in seen:
            raise InvalidPunchError(f"duplicate punch location {tuple(hole.location)}")
        seen.add(hole.location)
        display_tid = tri_id(hole.location)
        pierced = []
        for layer in state.layers:
            back = layer.pose.invert()
            p = back.apply(TRI_CENTROIDS[display_tid])
            if not (0 < p[0] < 4 * SCALE and 0 < p[1] < 4 * SCALE):
                continue
            t = triangle_at(*p)
            if t in layer.triangles:
                pierced.append((t, back.transport_orientation(hole.orientation)))
        if not pierced:
            raise InvalidPunchError(
                f"punch location {tuple(hole.location)} is not on the folded paper"
            )
        records.append(PunchRecord(hole, tuple(pierced)))
    return PunchedState(state, tuple(records))


def unfold_all(punched: PunchedState) -> HolePattern:
    """Hole pattern after undoing every fold, expressed in the display frame.

    The paper stays rotated: original-sheet positions and orientations are
    carried forward by the net rotation, never un-rotated.
    """
    net = punched.state.net_rotation
    turn = rotation_ccw(net, CENTER)
    out = []
    for rec in punched.records:
        for t, odeg in rec.pierced:
            display_tid = triangle_at(*turn.apply(TRI_CENTROIDS[t]))
            out.append(
                HoleSpec(rec.hole.shape, rec.hole.size, (odeg + net) % 360, id_tri(display_tid))
            )
    return sort_pattern(out)


def derive_unfold_steps(actions: Iterable[Action], mode: str = "geometric") -> tuple[str, ...]:
    """Unfold step labels: folds reversed, remapped by later rotations.

    ``geometric`` transports each fold's crease and moving side through the
    net rotation that follows it; ``table-compat`` applies the published
    per-rotation remap tables instead (identical for 90/270, identity for
    180 where geometry swaps the direction).
    """
    if mode not in ("geometric", "table-compat"):
        raise InputError(f"unknown unfold mode: {mode!r}")
    seq = tuple(actions)
    labels = []
    for i, action in enumerate(seq):
        if not is_fold(action):
            continue
        axis = action.axis
        if mode == "geometric":
            net_after = sum(a.degrees for a in seq[i + 1 :] if not is_fold(a)) % 360
            axis = transport_axis(axis, net_after)
        else:
            for later in seq[i + 1 :]:
                if is_fold(later):
                    continue
                if later.degrees == 180:
                    axis = _TABLE_COMPAT_180[axis]
                else:
                    axis = transport_axis(axis, later.degrees)
        labels.append(f"{axis}-{action.facing}")
    return tuple(reversed(labels))


def run_task(actions: Iterable[Action], holes: Sequence[HoleSpec], unfold_mode: str = "geometric"):
    """Simulate, punch, unfold: (unfold step labels, final hole pattern)."""
    state = simulate(actions)
    punched = punch(state, holes)
    return derive_unfold_steps(state.history, unfold_mode), unfold_all(punched)


def conservation_ok(state: FoldedState) -> bool:
    """Original triangles stay partitioned across layers."""
    seen: set[int] = set()
    total = 0
    for layer in state.layers:
        total += len(layer.triangles)
        seen |= layer.triangles
    return total == 32 and seen == set(range(32))


def describe_state(state: FoldedState) -> str:
    """One-line-per-fact summary used by CLI diagnostics."""
    return "\n".join(
        [
            f"actions: {encode_actions(state.history) or '(flat sheet)'}",
            f"layers: {len(state.layers)}  net rotation: {state.net_rotation}",
            f"active triangles: {len(state.active)}  silhouette: {len(state.silhouette)}",
        ]
    )
