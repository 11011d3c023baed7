"""Reproducible task generation for the four task families.

Every task derives its own child seed from (seed, family, index, attempt),
so parallel and serial generation produce identical bytes and retries are
deterministic.  Sampled action sequences that the engine rejects (the few
rotation-bearing structures whose crease leaves the mesh) are resampled
within the same bounded-retry loop used for hole sampling.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

from . import codecs
from .engine import (
    ROTATION_INVARIANT_SHAPES,
    SHAPES,
    SIZES,
    FoldedState,
    HoleSpec,
    InvalidFoldError,
    derive_unfold_steps,
    punch,
    simulate,
    unfold_all,
)
from .geometry import ORIENTATIONS, InputError, id_tri, tri_id
from .rules import Action, encode_actions, group_sequences, is_fold

MAX_TRIES = 300

GENERALIZATION_ATTRIBUTES = ("size", "location", "direction", "shape")
#: Structures used by generalization tasks: one fold, two folds,
#: one fold + one rotation.
GENERALIZATION_GROUPS = (1, 2, 5)


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    family: str
    groups: tuple[int, ...]
    count: int
    seed: int
    hole_counts: tuple[int, ...] = (1, 2, 3)
    shapes: tuple[str, ...] = SHAPES
    facing: str = "F"
    exhaustive: bool = False

    def shape_pool(self, group: int) -> tuple[str, ...]:
        if group >= 5:
            return tuple(s for s in self.shapes if s not in ROTATION_INVARIANT_SHAPES)
        return self.shapes


@dataclass(frozen=True)
class TaskInstance:
    id: str
    family: str
    group: int
    actions: tuple[Action, ...]
    holes: tuple[HoleSpec, ...]
    ground_truth: dict
    seed: int

    def to_doc(self) -> dict:
        return codecs.task_to_json(
            {
                "id": self.id,
                "family": self.family,
                "group": self.group,
                "seed": self.seed,
                "actions": encode_actions(self.actions),
                "holes": self.holes,
                "ground_truth": self.ground_truth,
            }
        )


def child_rng(seed: int, *parts) -> random.Random:
    key = "/".join(str(p) for p in (seed,) + parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@lru_cache(maxsize=None)
def facing_sequences(group: int, facing: str) -> tuple[tuple[Action, ...], ...]:
    """Enumerated sequences whose folds all carry the given facing."""
    out = []
    for seq in group_sequences(group):
        if all(f.facing == facing for f in seq if is_fold(f)):
            out.append(seq)
    return tuple(out)


def sample_holes(
    rng: random.Random,
    state: FoldedState,
    count: int,
    shapes: Sequence[str],
) -> tuple[HoleSpec, ...]:
    spots = sorted(state.silhouette)
    count = min(count, len(spots))
    if count < 1:
        raise GenerationError("state has no punchable triangles")
    locations = rng.sample(spots, count)
    return tuple(
        HoleSpec(
            shape=rng.choice(list(shapes)),
            size=rng.choice(list(SIZES)),
            orientation=rng.choice(list(ORIENTATIONS)),
            location=id_tri(tid),
        )
        for tid in locations
    )


def _sample_simulatable(
    rng: random.Random, group: int, facing: str
) -> tuple[tuple[Action, ...], FoldedState]:
    pool = facing_sequences(group, facing)
    for _ in range(MAX_TRIES):
        seq = rng.choice(pool)
        try:
            return seq, simulate(seq)
        except InvalidFoldError:
            continue
    raise GenerationError(f"no simulatable sequence found for group {group}")


def _prediction_task(cfg: GeneratorConfig, index: int, group: int) -> TaskInstance:
    for attempt in range(MAX_TRIES):
        rng = child_rng(cfg.seed, cfg.family, index, attempt)
        try:
            actions, state = _sample_simulatable(rng, group, cfg.facing)
            n = rng.choice(list(cfg.hole_counts))
            holes = sample_holes(rng, state, n, cfg.shape_pool(group))
            pattern = unfold_all(punch(state, holes))
        except (GenerationError, InputError):
            continue
        steps = derive_unfold_steps(actions)
        return TaskInstance(
            id=f"{cfg.family}-g{group}-{index:05d}",
            family=cfg.family,
            group=group,
            actions=actions,
            holes=holes,
            ground_truth={
                "unfold_steps": list(steps),
                "holes": codecs.holes_to_json(pattern),
            },
            seed=cfg.seed,
        )
    raise GenerationError(f"could not generate task {index} for group {group}")


def _round_robin_groups(cfg: GeneratorConfig) -> list[int]:
    return [cfg.groups[i % len(cfg.groups)] for i in range(cfg.count)]


def gen_prediction(cfg: GeneratorConfig) -> list[TaskInstance]:
    if cfg.exhaustive:
        return _gen_exhaustive(cfg)
    return [_prediction_task(cfg, i, g) for i, g in enumerate(_round_robin_groups(cfg))]


def _gen_exhaustive(cfg: GeneratorConfig) -> list[TaskInstance]:
    """One task per enumerated structure; non-simulatable structures skipped."""
    tasks = []
    index = 0
    for group in cfg.groups:
        for seq in group_sequences(group):
            if cfg.count and index >= cfg.count:
                return tasks
            try:
                state = simulate(seq)
            except InvalidFoldError:
                continue
            rng = child_rng(cfg.seed, cfg.family, "exhaustive", index)
            holes = sample_holes(rng, state, rng.choice(list(cfg.hole_counts)), cfg.shape_pool(group))
            pattern = unfold_all(punch(state, holes))
            tasks.append(
                TaskInstance(
                    id=f"{cfg.family}-g{group}-{index:05d}",
                    family=cfg.family,
                    group=group,
                    actions=seq,
                    holes=holes,
                    ground_truth={
                        "unfold_steps": list(derive_unfold_steps(seq)),
                        "holes": codecs.holes_to_json(pattern),
                    },
                    seed=cfg.seed,
                )
            )
            index += 1
    return tasks


def gen_backward(cfg: GeneratorConfig) -> list[TaskInstance]:
    """Prediction pipeline with every fold facing away from the observer."""
    cfg = replace(cfg, family="backward", facing="B")
    return gen_prediction(cfg)


def gen_planning(cfg: GeneratorConfig) -> list[TaskInstance]:
    if any(g not in (1, 2, 3, 4) for g in cfg.groups):
        raise InputError("planning groups must be within 1..4 (rotation-free)")
    cfg = replace(cfg, hole_counts=tuple(c for c in cfg.hole_counts if c <= 2) or (1, 2))
    tasks = []
    for index, group in enumerate(_round_robin_groups(cfg)):
        for attempt in range(MAX_TRIES):
            rng = child_rng(cfg.seed, cfg.family, index, attempt)
            try:
                actions, state = _sample_simulatable(rng, group, "F")
                holes = sample_holes(rng, state, rng.choice(list(cfg.hole_counts)), cfg.shape_pool(group))
                pattern = unfold_all(punch(state, holes))
            except (GenerationError, InputError):
                continue
            tasks.append(
                TaskInstance(
                    id=f"{cfg.family}-g{group}-{index:05d}",
                    family=cfg.family,
                    group=group,
                    actions=actions,
                    holes=holes,
                    ground_truth={
                        "required_fold_count": len(actions),
                        "target_pattern": codecs.holes_to_json(pattern),
                    },
                    seed=cfg.seed,
                )
            )
            break
        else:
            raise GenerationError(f"could not generate planning task {index}")
    return tasks


def _alter_hole(
    rng: random.Random,
    hole: HoleSpec,
    attribute: str,
    state: FoldedState,
    shapes: Sequence[str],
) -> HoleSpec:
    if attribute == "shape":
        pool = [s for s in shapes if s != hole.shape]
        return hole._replace(shape=rng.choice(pool))
    if attribute == "size":
        return hole._replace(size="large" if hole.size == "small" else "small")
    if attribute == "direction":
        pool = [o for o in ORIENTATIONS if o != hole.orientation]
        return hole._replace(orientation=rng.choice(pool))
    # location: keep the layer coverage equal so the answer hole count matches
    current = tri_id(hole.location)
    want = state.coverage(current)
    pool = sorted(t for t in state.silhouette if t != current and state.coverage(t) == want)
    if not pool:
        raise GenerationError("no alternative location with equal coverage")
    return hole._replace(location=id_tri(rng.choice(pool)))


def gen_generalization(cfg: GeneratorConfig, attribute: str) -> list[TaskInstance]:
    if attribute not in GENERALIZATION_ATTRIBUTES:
        raise InputError(f"unknown generalization attribute: {attribute!r}")
    if any(g not in GENERALIZATION_GROUPS for g in cfg.groups):
        raise InputError(f"generalization groups must be within {GENERALIZATION_GROUPS}")
    cfg = replace(cfg, hole_counts=(1,))
    tasks = []
    for index, group in enumerate(_round_robin_groups(cfg)):
        for attempt in range(MAX_TRIES):
            rng = child_rng(cfg.seed, cfg.family, attribute, index, attempt)
            try:
                actions, state = _sample_simulatable(rng, group, cfg.facing)
                holes_a = sample_holes(rng, state, 1, cfg.shape_pool(group))
                result_a = unfold_all(punch(state, holes_a))
                holes_b = tuple(
                    _alter_hole(rng, h, attribute, state, cfg.shape_pool(group)) for h in holes_a
                )
                answer = unfold_all(punch(state, holes_b))
            except (GenerationError, InputError):
                continue
            tasks.append(
                TaskInstance(
                    id=f"{cfg.family}-{attribute}-g{group}-{index:05d}",
                    family=cfg.family,
                    group=group,
                    actions=actions,
                    holes=holes_a,
                    ground_truth={
                        "altered_attribute": attribute,
                        "scenario_a_result": codecs.holes_to_json(result_a),
                        "scenario_b_holes": codecs.holes_to_json(holes_b),
                        "answer_pattern": codecs.holes_to_json(answer),
                    },
                    seed=cfg.seed,
                )
            )
            break
        else:
            raise GenerationError(f"could not generate generalization task {index}")
    return tasks


def generate_family(cfg: GeneratorConfig, attribute: str | None = None) -> list[TaskInstance]:
    if cfg.family == "prediction":
        return gen_prediction(cfg)
    if cfg.family == "backward":
        return gen_backward(cfg)
    if cfg.family == "planning":
        return gen_planning(cfg)
    if cfg.family == "generalization":
        return gen_generalization(cfg, attribute or "size")
    raise InputError(f"unknown family: {cfg.family!r}")


#: Published corpus shape: (family, kwargs) -> expected task count.
CORPUS_SHAPE = {
    "prediction": 315,
    "planning": 400,
    "generalization": 240,
    "backward": 180,
}


def generate_corpus(seed: int) -> dict[str, list[TaskInstance]]:
    """The full benchmark-shaped corpus: 315 / 400 / 240 / 180 tasks."""
    corpus: dict[str, list[TaskInstance]] = {}
    corpus["prediction"] = gen_prediction(
        GeneratorConfig("prediction", tuple(range(1, 10)), 315, seed)
    )
    corpus["planning"] = gen_planning(GeneratorConfig("planning", (1, 2, 3, 4), 400, seed))
    gen_tasks: list[TaskInstance] = []
    per_combo = 240 // (len(GENERALIZATION_GROUPS) * len(GENERALIZATION_ATTRIBUTES))
    for attribute in GENERALIZATION_ATTRIBUTES:
        for group in GENERALIZATION_GROUPS:
            gen_tasks.extend(
                gen_generalization(
                    GeneratorConfig("generalization", (group,), per_combo, seed), attribute
                )
            )
    corpus["generalization"] = gen_tasks
    corpus["backward"] = gen_backward(
        GeneratorConfig("backward", tuple(range(1, 10)), 180, seed)
    )
    for family, tasks in corpus.items():
        if len(tasks) != CORPUS_SHAPE[family]:
            raise GenerationError(
                f"{family}: generated {len(tasks)} tasks, expected {CORPUS_SHAPE[family]}"
            )
    return corpus
