import pytest

from paperfold.codecs import dumps, task_from_json
from paperfold.engine import (
    ROTATION_INVARIANT_SHAPES,
    derive_unfold_steps,
    punch,
    simulate,
    sort_pattern,
    unfold_all,
)
from paperfold.generate import (
    GENERALIZATION_ATTRIBUTES,
    GeneratorConfig,
    gen_backward,
    gen_generalization,
    gen_planning,
    gen_prediction,
)
from paperfold.geometry import InputError, tri_id
from paperfold.rules import FoldSpec, classify_group, is_fold


def docs_bytes(tasks):
    return [dumps(t.to_doc()) for t in tasks]


def test_determinism_same_seed_same_bytes():
    cfg = GeneratorConfig("prediction", (1, 3, 7), 9, seed=7)
    assert docs_bytes(gen_prediction(cfg)) == docs_bytes(gen_prediction(cfg))


def test_different_seed_changes_output():
    a = docs_bytes(gen_prediction(GeneratorConfig("prediction", (2,), 4, seed=1)))
    b = docs_bytes(gen_prediction(GeneratorConfig("prediction", (2,), 4, seed=2)))
    assert a != b


def test_rotation_groups_exclude_invariant_shapes():
    cfg = GeneratorConfig("prediction", (5, 6, 7, 8, 9), 25, seed=3)
    for task in gen_prediction(cfg):
        for hole in task.holes:
            assert hole.shape not in ROTATION_INVARIANT_SHAPES


def test_tasks_regenerate_their_ground_truth():
    cfg = GeneratorConfig("prediction", tuple(range(1, 10)), 27, seed=11)
    for task in gen_prediction(cfg):
        assert classify_group(task.actions) == task.group
        state = simulate(task.actions)
        steps = derive_unfold_steps(task.actions)
        pattern = unfold_all(punch(state, task.holes))
        parsed = task_from_json(task.to_doc())
        assert parsed["unfold_steps"] == steps
        assert sort_pattern(parsed["truth_holes"]) == pattern


def test_exhaustive_group1_yields_all_structures():
    cfg = GeneratorConfig("prediction", (1,), 0, seed=1, exhaustive=True)
    tasks = gen_prediction(cfg)
    assert len(tasks) == 16
    assert len({t.actions for t in tasks}) == 16


def test_backward_tasks_fold_away_from_observer():
    cfg = GeneratorConfig("backward", tuple(range(1, 10)), 18, seed=5)
    tasks = gen_backward(cfg)
    assert len(tasks) == 18
    for task in tasks:
        folds = [a for a in task.actions if is_fold(a)]
        assert folds and all(f.facing == "B" for f in folds)


def test_backward_pattern_equals_forward_twin():
    cfg = GeneratorConfig("backward", tuple(range(1, 10)), 18, seed=9)
    for task in gen_backward(cfg):
        twin = tuple(
            FoldSpec(a.axis, "F") if is_fold(a) else a for a in task.actions
        )
        backward = unfold_all(punch(simulate(task.actions), task.holes))
        forward = unfold_all(punch(simulate(twin), task.holes))
        assert backward == forward


def test_planning_constraints():
    cfg = GeneratorConfig("planning", (1, 2, 3, 4), 12, seed=2)
    tasks = gen_planning(cfg)
    for task in tasks:
        assert all(is_fold(a) for a in task.actions)
        assert 1 <= len(task.holes) <= 2
        assert task.ground_truth["required_fold_count"] == len(task.actions)
        assert task.group in (1, 2, 3, 4)


def test_planning_rejects_rotation_groups():
    with pytest.raises(InputError):
        gen_planning(GeneratorConfig("planning", (5,), 1, seed=0))


@pytest.mark.parametrize("attribute", GENERALIZATION_ATTRIBUTES)
def test_generalization_single_attribute_delta(attribute):
    cfg = GeneratorConfig("generalization", (1, 2, 5), 6, seed=13)
    tasks = gen_generalization(cfg, attribute)
    assert len(tasks) == 6
    for task in tasks:
        (a,) = task.holes
        parsed = task_from_json(task.to_doc())
        (b,) = parsed["scenario_b_holes"]
        diffs = [
            name
            for name, va, vb in (
                ("shape", a.shape, b.shape),
                ("size", a.size, b.size),
                ("direction", a.orientation, b.orientation),
                ("location", a.location, b.location),
            )
            if va != vb
        ]
        assert diffs == [attribute]
        answer = unfold_all(punch(simulate(task.actions), (b,)))
        assert sort_pattern(parsed["answer_pattern"]) == answer


def test_generalization_location_preserves_hole_count():
    cfg = GeneratorConfig("generalization", (1, 2, 5), 9, seed=21)
    for task in gen_generalization(cfg, "location"):
        parsed = task_from_json(task.to_doc())
        assert len(parsed["answer_pattern"]) == len(parsed["scenario_a_result"])


def test_generalization_rejects_deep_groups():
    with pytest.raises(InputError):
        gen_generalization(GeneratorConfig("generalization", (4,), 1, seed=0), "size")


def test_holes_land_on_silhouette():
    cfg = GeneratorConfig("prediction", (4, 7), 10, seed=17)
    for task in gen_prediction(cfg):
        st = simulate(task.actions)
        for hole in task.holes:
            assert tri_id(hole.location) in st.silhouette
