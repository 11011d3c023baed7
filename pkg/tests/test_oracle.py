from paperfold.codecs import task_from_json
from paperfold.engine import HoleSpec, sort_pattern
from paperfold.generate import GeneratorConfig, gen_planning, gen_prediction
from paperfold.geometry import TriRef
from paperfold.oracle import (
    Plan,
    solve_planning,
    solve_prediction,
    solve_task,
    verify_plan,
)
from paperfold.rules import parse_actions


def h(shape="circle", size="small", deg=0, loc=(0, 0, 0)):
    return HoleSpec(shape, size, deg, TriRef(*loc))


def planning_doc(required, target, task_id="plan-test"):
    return {
        "id": task_id,
        "family": "planning",
        "group": required,
        "seed": 0,
        "actions": (),
        "holes": (),
        "ground_truth": {},
        "required_fold_count": required,
        "target_pattern": tuple(target),
    }


def test_solve_prediction_matches_ground_truth():
    cfg = GeneratorConfig("prediction", tuple(range(1, 10)), 18, seed=23)
    for task in gen_prediction(cfg):
        doc = task_from_json(task.to_doc())
        answer = solve_prediction(doc)
        assert list(answer.unfolding) == list(doc["unfold_steps"])
        assert sort_pattern(answer.holes) == sort_pattern(doc["truth_holes"])


def test_solve_planning_single_vertical_fold():
    # Two circles mirrored across the vertical midline need one V fold;
    # the mirror also flips the orientation (0 vs 180).
    target = [h(loc=(1, 0, 0)), h(deg=180, loc=(1, 3, 1))]
    plan = solve_planning(planning_doc(1, target))
    assert plan is not None
    assert len(plan.folds) == 1
    assert plan.folds[0].axis in ("V1", "V2")
    assert len(plan.initial_holes) == 1
    assert plan.initial_holes[0].shape == "circle"
    outcome = verify_plan(plan, planning_doc(1, target))
    assert outcome.matches_target


def test_solve_planning_generated_tasks_verify():
    cfg = GeneratorConfig("planning", (1, 2, 3, 4), 16, seed=31)
    for task in gen_planning(cfg):
        doc = task_from_json(task.to_doc())
        plan = solve_planning(doc)
        assert plan is not None, task.id
        outcome = verify_plan(plan, doc)
        assert outcome.matches_target, (task.id, outcome.rejection_reason)


def test_solve_planning_is_deterministic():
    cfg = GeneratorConfig("planning", (2,), 3, seed=37)
    for task in gen_planning(cfg):
        doc = task_from_json(task.to_doc())
        assert solve_planning(doc) == solve_planning(doc)


def test_solve_planning_unsat_on_odd_orbit():
    # One fold always pierces layer-count holes (>= 2); a single-hole target
    # (a mirrored pair with one hole deleted) is unsatisfiable.
    target = [h(loc=(1, 0, 0))]
    assert solve_planning(planning_doc(1, target)) is None


def test_verify_plan_rejects_wrong_fold_count():
    target = [h(loc=(1, 0, 0)), h(loc=(1, 3, 1))]
    doc = planning_doc(2, target)
    plan = Plan(tuple(parse_actions("V1-F")), (h(),))
    outcome = verify_plan(plan, doc)
    assert not outcome.matches_target
    assert "folds" in outcome.rejection_reason


def test_verify_plan_rejects_three_holes():
    doc = planning_doc(1, [h(loc=(1, 0, 0)), h(loc=(1, 3, 1))])
    plan = Plan(
        tuple(parse_actions("V1-F")),
        (h(loc=(0, 0, 0)), h(loc=(1, 0, 0)), h(loc=(2, 0, 0))),
    )
    assert "holes" in verify_plan(plan, doc).rejection_reason


def test_verify_plan_rejects_rule_invalid_sequence():
    doc = planning_doc(2, [h(loc=(1, 0, 0)), h(loc=(1, 3, 1))])
    plan = Plan(tuple(parse_actions("H1-F D1-F")), (h(),))
    outcome = verify_plan(plan, doc)
    assert not outcome.matches_target
    assert "rule" in outcome.rejection_reason


def test_verify_plan_rejects_off_paper_hole():
    doc = planning_doc(1, [h(loc=(1, 0, 0)), h(loc=(1, 3, 1))])
    plan = Plan(tuple(parse_actions("V1-F")), (h(loc=(0, 3, 1)),))
    outcome = verify_plan(plan, doc)
    assert not outcome.matches_target


def test_verify_accepts_any_matching_plan():
    # The generator's own actions/holes always verify.
    cfg = GeneratorConfig("planning", (3,), 2, seed=41)
    for task in gen_planning(cfg):
        doc = task_from_json(task.to_doc())
        own = Plan(tuple(task.actions), tuple(task.holes))
        assert verify_plan(own, doc).matches_target


def test_solve_task_dispatch():
    cfg = GeneratorConfig("planning", (1,), 1, seed=43)
    task = gen_planning(cfg)[0]
    doc = task_from_json(task.to_doc())
    answer = solve_task(doc)
    assert hasattr(answer, "folds")
