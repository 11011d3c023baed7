"""Bit-exact codecs: task/answer JSON documents and the text-grid format.

All writers emit byte-stable output (fixed key order, no floats, no
timestamps) so the generated corpus can be golden-file tested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .engine import (
    SHAPES,
    SIZES,
    FoldedState,
    HoleSpec,
    apply_fold,
    apply_rotation,
    simulate,
)
from .geometry import TriRef
from .rules import (
    Action,
    FoldSpec,
    encode_actions,
    is_fold,
    parse_action,
    parse_actions,
)

FAMILIES = ("prediction", "backward", "planning", "generalization")

# Hole-shape letters for the text mapping.  The first six follow the
# published code listing; Q/R/X are project extensions for the remaining
# shapes (square, rectangle, text).
SHAPE_LETTERS = {
    "circle": "C",
    "ellipse": "E",
    "star": "S",
    "triangle": "A",
    "trapezoid": "Z",
    "letter": "T",
    "square": "Q",
    "rectangle": "R",
    "text": "X",
}
LETTER_SHAPES = {v: k for k, v in SHAPE_LETTERS.items()}


class ParseError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require(doc: dict, key: str, path: str) -> Any:
    if key not in doc:
        raise ParseError(f"{path}.{key}", "missing field")
    return doc[key]


def hole_to_json(h: HoleSpec) -> dict:
    return {
        "shape": h.shape,
        "size": h.size,
        "orientation_deg": h.orientation,
        "position": [h.location.row, h.location.col, h.location.tri],
    }


def hole_from_json(doc: Any, path: str) -> HoleSpec:
    if not isinstance(doc, dict):
        raise ParseError(path, "hole must be an object")
    shape = _require(doc, "shape", path)
    if shape not in SHAPES:
        raise ParseError(f"{path}.shape", f"unknown shape {shape!r}")
    size = _require(doc, "size", path)
    if size not in SIZES:
        raise ParseError(f"{path}.size", f"unknown size {size!r}")
    deg = _require(doc, "orientation_deg", path)
    if deg not in (0, 90, 180, 270):
        raise ParseError(f"{path}.orientation_deg", f"bad orientation {deg!r}")
    pos = _require(doc, "position", path)
    if (
        not isinstance(pos, (list, tuple))
        or len(pos) != 3
        or not all(isinstance(v, int) for v in pos)
        or not (0 <= pos[0] < 4 and 0 <= pos[1] < 4 and pos[2] in (0, 1))
    ):
        raise ParseError(f"{path}.position", f"bad position {pos!r}")
    return HoleSpec(shape, size, deg, TriRef(*pos))


def holes_to_json(holes: Iterable[HoleSpec]) -> list[dict]:
    return [hole_to_json(h) for h in holes]


def holes_from_json(doc: Any, path: str) -> tuple[HoleSpec, ...]:
    if not isinstance(doc, list):
        raise ParseError(path, "expected a list of holes")
    return tuple(hole_from_json(h, f"{path}[{i}]") for i, h in enumerate(doc))


def actions_from_json(text: Any, path: str) -> tuple[Action, ...]:
    if not isinstance(text, str):
        raise ParseError(path, "actions must be a string")
    try:
        return parse_actions(text)
    except ValueError as exc:
        raise ParseError(path, str(exc)) from None


def steps_from_json(doc: Any, path: str) -> tuple[str, ...]:
    if isinstance(doc, str):
        doc = doc.split()
    if not isinstance(doc, list) or not all(isinstance(s, str) for s in doc):
        raise ParseError(path, "unfold steps must be a list of labels")
    out = []
    for i, label in enumerate(doc):
        try:
            action = parse_action(label)
        except ValueError:
            raise ParseError(f"{path}[{i}]", f"bad unfold label {label!r}") from None
        if not is_fold(action):
            raise ParseError(f"{path}[{i}]", f"bad unfold label {label!r}")
        out.append(label)
    return tuple(out)


# --- task documents ---------------------------------------------------------


def task_to_json(task: dict) -> dict:
    """Normalize a task into its serialized form with fixed key order."""
    doc = {
        "id": task["id"],
        "family": task["family"],
        "group": task["group"],
        "seed": task["seed"],
        "actions": task["actions"]
        if isinstance(task["actions"], str)
        else encode_actions(task["actions"]),
        "holes": holes_to_json(task["holes"]),
        "ground_truth": task["ground_truth"],
    }
    return doc


def task_from_json(doc: Any, path: str = "task") -> dict:
    if not isinstance(doc, dict):
        raise ParseError(path, "task must be an object")
    family = _require(doc, "family", path)
    if family not in FAMILIES:
        raise ParseError(f"{path}.family", f"unknown family {family!r}")
    group = _require(doc, "group", path)
    if not isinstance(group, int) or not 1 <= group <= 9:
        raise ParseError(f"{path}.group", f"bad group {group!r}")
    actions = actions_from_json(_require(doc, "actions", path), f"{path}.actions")
    holes = holes_from_json(_require(doc, "holes", path), f"{path}.holes")
    gt = _require(doc, "ground_truth", path)
    if not isinstance(gt, dict):
        raise ParseError(f"{path}.ground_truth", "must be an object")
    task = {
        "id": _require(doc, "id", path),
        "family": family,
        "group": group,
        "seed": _require(doc, "seed", path),
        "actions": actions,
        "holes": holes,
        "ground_truth": gt,
    }
    if family in ("prediction", "backward"):
        task["unfold_steps"] = steps_from_json(
            _require(gt, "unfold_steps", f"{path}.ground_truth"), f"{path}.ground_truth.unfold_steps"
        )
        task["truth_holes"] = holes_from_json(
            _require(gt, "holes", f"{path}.ground_truth"), f"{path}.ground_truth.holes"
        )
    elif family == "planning":
        task["required_fold_count"] = _require(
            gt, "required_fold_count", f"{path}.ground_truth"
        )
        task["target_pattern"] = holes_from_json(
            _require(gt, "target_pattern", f"{path}.ground_truth"),
            f"{path}.ground_truth.target_pattern",
        )
    else:  # generalization
        task["altered_attribute"] = _require(gt, "altered_attribute", f"{path}.ground_truth")
        task["scenario_a_result"] = holes_from_json(
            _require(gt, "scenario_a_result", f"{path}.ground_truth"),
            f"{path}.ground_truth.scenario_a_result",
        )
        task["scenario_b_holes"] = holes_from_json(
            _require(gt, "scenario_b_holes", f"{path}.ground_truth"),
            f"{path}.ground_truth.scenario_b_holes",
        )
        task["answer_pattern"] = holes_from_json(
            _require(gt, "answer_pattern", f"{path}.ground_truth"),
            f"{path}.ground_truth.answer_pattern",
        )
    return task


# --- answer documents -------------------------------------------------------


@dataclass(frozen=True)
class PredictionAnswer:
    task_id: str
    unfolding: tuple[str, ...]
    holes: tuple[HoleSpec, ...]

    def to_json(self) -> dict:
        return {
            "task_id": self.task_id,
            "unfolding": list(self.unfolding),
            "holes": holes_to_json(self.holes),
        }


@dataclass(frozen=True)
class PlanningAnswer:
    task_id: str
    folds: tuple[FoldSpec, ...]
    initial_holes: tuple[HoleSpec, ...]

    def to_json(self) -> dict:
        return {
            "task_id": self.task_id,
            "folds": [f.encode() for f in self.folds],
            "initial_holes": holes_to_json(self.initial_holes),
        }


def answer_from_json(doc: Any, path: str = "answer"):
    if not isinstance(doc, dict):
        raise ParseError(path, "answer must be an object")
    task_id = doc.get("task_id", "")
    if "folds" in doc or "initial_holes" in doc:
        actions = actions_from_json(
            " ".join(doc.get("folds", [])) if isinstance(doc.get("folds"), list) else doc.get("folds", ""),
            f"{path}.folds",
        )
        if not all(is_fold(a) for a in actions):
            raise ParseError(f"{path}.folds", "plan may contain folds only")
        return PlanningAnswer(
            task_id,
            tuple(actions),
            holes_from_json(doc.get("initial_holes", []), f"{path}.initial_holes"),
        )
    unfolding = steps_from_json(doc.get("unfolding", []), f"{path}.unfolding")
    return PredictionAnswer(task_id, unfolding, holes_from_json(doc.get("holes", []), f"{path}.holes"))


# --- file IO ----------------------------------------------------------------


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_json(path: Path, doc: dict) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path: Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_task(path: Path, task: dict) -> None:
    write_json(path, task_to_json(task))


def read_task(path: Path) -> dict:
    return task_from_json(read_json(path), str(path))


def write_answer(path: Path, answer) -> None:
    write_json(path, answer.to_json())


def read_answer(path: Path):
    return answer_from_json(read_json(path), str(path))


# --- text grid --------------------------------------------------------------


def grid_for_state(state: FoldedState, holes: Sequence[HoleSpec] = ()) -> list[list[str]]:
    """4x4 grid of two-character cells: 0 folded away, 1 present, letter hole."""
    cells = [["" for _ in range(4)] for _ in range(4)]
    values = {}
    for hole in holes:
        values[(hole.location.row, hole.location.col, hole.location.tri)] = SHAPE_LETTERS[
            hole.shape
        ]
    for tid in range(32):
        r, c, t = divmod(tid, 8)[0], (tid % 8) // 2, tid % 2
        mark = values.get((r, c, t))
        if mark is None:
            mark = "1" if tid in state.silhouette else "0"
        cells[r][c] += mark
    return cells


def _render_grid(cells: list[list[str]]) -> str:
    return "\n".join(" ".join(row) for row in cells)


def encode_text(
    actions: Iterable[Action], holes: Sequence[HoleSpec], per_action_steps: bool = True
) -> str:
    """Text-grid document for a prediction-style task.

    Step 1 is the flat sheet; later steps show the sheet after each action
    (or just the final state when trimmed).  The punched holes appear as
    shape letters on the last step.  Direction is never encoded.
    """
    states = [FoldedState.flat()]
    state = simulate(actions)
    if per_action_steps:
        s = FoldedState.flat()
        for action in state.history:
            if is_fold(action):
                s = apply_fold(s, action, check_rules=False)
            else:
                s = apply_rotation(s, action, check_rules=False)
            states.append(s)
    else:
        states.append(state)
    blocks = []
    for i, s in enumerate(states):
        marks = holes if i == len(states) - 1 else ()
        blocks.append(f"Step {i + 1}:\n{_render_grid(grid_for_state(s, marks))}")
    return "\n\n".join(blocks) + "\n"


def parse_text(document: str) -> list[list[list[str]]]:
    """Parse a text-grid document back into per-step cell grids."""
    steps = []
    for block in document.strip().split("\n\n"):
        lines = block.strip().splitlines()
        if not lines or not lines[0].startswith("Step "):
            raise ParseError("text", f"bad step header: {lines[:1]!r}")
        rows = []
        for line in lines[1:]:
            cells = line.split()
            if len(cells) != 4 or any(len(c) != 2 for c in cells):
                raise ParseError("text", f"bad grid row: {line!r}")
            for cell in cells:
                for ch in cell:
                    if ch not in "01" and ch not in LETTER_SHAPES:
                        raise ParseError("text", f"bad cell symbol: {ch!r}")
            rows.append(cells)
        if len(rows) != 4:
            raise ParseError("text", f"expected 4 rows, got {len(rows)}")
        steps.append(rows)
    return steps
