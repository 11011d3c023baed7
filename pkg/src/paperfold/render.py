"""Deterministic 2D vector renders of sheet states and hole patterns.

Output is hand-assembled SVG with integer coordinates only, so files are
byte-identical across runs and platforms.  Three semantic colors: white
paper, black folded-away regions, green hole glyphs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .engine import FoldedState, HoleSpec, apply_fold, apply_rotation
from .geometry import TRI_CENTROIDS, TRI_VERTICES, tri_id
from .rules import Action, is_fold

# 10 px per scaled unit -> 120 px cells, 480 px sheet.
PX = 10
MARGIN = 20
SHEET = 48 * PX
CANVAS = 2 * MARGIN + SHEET

WHITE = "#ffffff"
BLACK = "#000000"
GREEN = "#008000"

# Star outlines (outer radius 12 / 20, inner 5 / 8), pointing up.
_STAR_SMALL = ((0, -12), (3, -4), (11, -4), (5, 2), (7, 10), (0, 5), (-7, 10), (-5, 2), (-11, -4), (-3, -4))
_STAR_LARGE = ((0, -20), (5, -6), (19, -6), (8, 2), (12, 16), (0, 8), (-12, 16), (-8, 2), (-19, -6), (-5, -6))


def _px(v: int) -> int:
    return MARGIN + v * PX


def _points(coords: Iterable[tuple[int, int]]) -> str:
    return " ".join(f"{x},{y}" for x, y in coords)


def _glyph(shape: str, size: str) -> str:
    r = 12 if size == "small" else 20
    if shape == "circle":
        return f'<circle r="{r}" fill="{GREEN}"/>'
    if shape == "ellipse":
        return f'<ellipse rx="{r}" ry="{r * 5 // 8}" fill="{GREEN}"/>'
    if shape == "square":
        return f'<rect x="-{r}" y="-{r}" width="{2 * r}" height="{2 * r}" fill="{GREEN}"/>'
    if shape == "rectangle":
        ry = r * 5 // 8
        return f'<rect x="-{r}" y="-{ry}" width="{2 * r}" height="{2 * ry}" fill="{GREEN}"/>'
    if shape == "triangle":
        pts = ((0, -12), (10, 8), (-10, 8)) if size == "small" else ((0, -20), (17, 13), (-17, 13))
        return f'<polygon points="{_points(pts)}" fill="{GREEN}"/>'
    if shape == "trapezoid":
        h = r // 2
        return (
            f'<polygon points="{_points(((-r, h), (r, h), (h, -h), (-h, -h)))}" fill="{GREEN}"/>'
        )
    if shape == "star":
        pts = _STAR_SMALL if size == "small" else _STAR_LARGE
        return f'<polygon points="{_points(pts)}" fill="{GREEN}"/>'
    if shape == "letter":
        return (
            f'<text x="0" y="{r // 2}" font-family="monospace" font-size="{2 * r}"'
            f' text-anchor="middle" fill="{GREEN}">A</text>'
        )
    # "text" shape: a short word marker
    return (
        f'<text x="0" y="{r // 3}" font-family="monospace" font-size="{r}"'
        f' text-anchor="middle" fill="{GREEN}">TXT</text>'
    )


def _hole_element(hole: HoleSpec) -> str:
    cx, cy = TRI_CENTROIDS[tri_id(hole.location)]
    transform = f"translate({_px(cx)},{_px(cy)})"
    if hole.orientation:
        # SVG rotation is clockwise-positive on screen; orientations are CCW.
        transform += f" rotate(-{hole.orientation})"
    return f'<g transform="{transform}">{_glyph(hole.shape, hole.size)}</g>'


def render_state(state: FoldedState, holes: Sequence[HoleSpec] = ()) -> str:
    """SVG scene of a folded state: covered triangles white, vacated black."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {CANVAS} {CANVAS}"'
        f' width="{CANVAS}" height="{CANVAS}">',
        f'<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="{WHITE}"/>',
    ]
    for tid in range(32):
        fill = WHITE if tid in state.silhouette else BLACK
        pts = _points((_px(x), _px(y)) for x, y in TRI_VERTICES[tid])
        parts.append(
            f'<polygon points="{pts}" fill="{fill}" stroke="{BLACK}" stroke-width="1"/>'
        )
    parts.extend(_hole_element(h) for h in holes)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_pattern(holes: Sequence[HoleSpec]) -> str:
    """Flat unfolded sheet with the final hole pattern."""
    return render_state(FoldedState.flat(), holes)


def render_task_frames(
    actions: Iterable[Action], holes: Sequence[HoleSpec], answer: Sequence[HoleSpec] | None = None
) -> list[tuple[str, str]]:
    """(name, svg) frames: flat sheet, one per action, punched state, answer."""
    frames = [("step-00-flat.svg", render_state(FoldedState.flat()))]
    state = FoldedState.flat()
    seq = tuple(actions)
    for i, action in enumerate(seq, start=1):
        if is_fold(action):
            state = apply_fold(state, action, check_rules=False)
        else:
            state = apply_rotation(state, action, check_rules=False)
        frames.append((f"step-{i:02d}-{action.encode()}.svg", render_state(state)))
    frames.append((f"step-{len(seq) + 1:02d}-punched.svg", render_state(state, holes)))
    if answer is not None:
        frames.append(("answer.svg", render_pattern(answer)))
    return frames
