import random

import pytest

from paperfold.engine import (
    FoldedState,
    HoleSpec,
    InvalidFoldError,
    simulate,
    transport_axis,
)
from paperfold.generate import sample_holes
from paperfold.geometry import TRI_CENTROIDS, TRI_VERTICES, tri_id
from paperfold.rules import FoldSpec, RotationSpec, group_sequences


def brute_force_coverage(state: FoldedState, location) -> int:
    """Independent layer-coverage count for a punch location.

    Uses raw point-in-triangle sign tests on each layer's transported
    vertex coordinates; shares nothing with the engine's footprint path.
    """
    px, py = TRI_CENTROIDS[tri_id(location)]
    count = 0
    for layer in state.layers:
        for t in layer.triangles:
            a, b, c = (layer.pose.apply(v) for v in TRI_VERTICES[t])
            d1 = (px - b[0]) * (a[1] - b[1]) - (a[0] - b[0]) * (py - b[1])
            d2 = (px - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (py - c[1])
            d3 = (px - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (py - a[1])
            neg = d1 < 0 or d2 < 0 or d3 < 0
            pos = d1 > 0 or d2 > 0 or d3 > 0
            if not (neg and pos):
                count += 1
                break
    return count


def random_valid_state(rng: random.Random, groups=range(1, 10)) -> FoldedState:
    """A simulatable folded state from a uniformly sampled valid sequence."""
    while True:
        group = rng.choice(list(groups))
        seq = rng.choice(group_sequences(group))
        try:
            return simulate(seq, check_rules=False)
        except InvalidFoldError:
            continue


def random_punched(rng: random.Random, state: FoldedState, max_holes: int = 3):
    n = rng.randint(1, min(max_holes, len(state.silhouette)))
    return sample_holes(rng, state, n, ("circle", "star", "trapezoid"))


def body_twin(actions):
    """Rotation-free twin: fold axes transported into the body frame."""
    out = []
    rot = 0
    for action in actions:
        if isinstance(action, RotationSpec):
            rot = (rot + action.degrees) % 360
        else:
            out.append(FoldSpec(transport_axis(action.axis, (360 - rot) % 360), action.facing))
    return tuple(out)


@pytest.fixture
def rng():
    return random.Random(20240817)
