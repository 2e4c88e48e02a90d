import pathlib

import pytest
from hypothesis import given, settings, strategies as st

from downsets.priority import (
    Activation,
    EvalRule,
    Evaluator,
    PriorityLog,
    evaluator_from_rules,
    log_from_json,
    log_properties,
    log_to_json,
    prio_init,
    prio_order,
    prio_poset,
    prio_run,
    prio_step,
    prio_verify,
    toy_evaluator_pool,
)

GOLDEN = pathlib.Path(__file__).parent / "data" / "golden_priority.json"


def test_initial_state():
    log = prio_init(4)
    assert log.stage == 0
    assert log.witnesses == (0, 1, 2, 3)
    assert log.flags == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        prio_init(0)


def test_rule_guards():
    with pytest.raises(ValueError):
        EvalRule(0, 2, 0)
    with pytest.raises(ValueError):
        EvalRule(-1, 0, 0)
    with pytest.raises(ValueError):
        Activation(0, 1, "sideways", 0)


def test_conflicting_rules_rejected():
    with pytest.raises(ValueError, match="both values"):
        Evaluator((EvalRule(2, 0, 5), EvalRule(2, 1, 9)))
    # distinct witnesses do not conflict
    Evaluator((EvalRule(2, 0, 5, y=1), EvalRule(2, 1, 9, y=3)))


def test_evaluator_from_rules_schema():
    ev = evaluator_from_rules({"rules": [{"e": 1, "value": 0, "from_stage": 7}]})
    assert ev.query(1, 9, 7) == 0
    assert ev.query(1, 9, 6) is None
    with pytest.raises(ValueError, match="unknown rule keys"):
        evaluator_from_rules([{"e": 0, "value": 0, "from_stage": 0, "bogus": 1}])


def test_monotonicity_recorder_catches_flip():
    flaky = Evaluator(table=lambda e, y, s: 1 if s < 10 else 0)
    assert flaky.query(0, 0, 5) == 1
    with pytest.raises(RuntimeError, match="monotonicity"):
        flaky.query(0, 0, 12)


def test_monotonicity_recorder_catches_lapse():
    flaky = Evaluator(table=lambda e, y, s: 1 if s == 5 else None)
    assert flaky.query(0, 0, 5) == 1
    with pytest.raises(RuntimeError, match="monotonicity"):
        flaky.query(0, 0, 6)


def test_single_high_activation():
    log = prio_run(3, 2, Evaluator((EvalRule(1, 1, 0),)))
    assert log.activations == (Activation(1, 2, "high", 1),)
    assert log.witnesses == (0, 1, 2)
    assert log.flags == (0, 1, 0)


def test_single_low_activation_poset():
    log = prio_run(2, 1, Evaluator((EvalRule(0, 0, 0),)))
    assert log.activations == (Activation(0, 1, "low", 0),)
    P = prio_poset(log, 4)
    # y_0 (id 1) bounds every later pair from below
    for i in range(1, 4):
        assert P.leq(1, 2 * i) and P.leq(1, 2 * i + 1)
    assert not P.leq(0, 1) and not P.leq(1, 0)


def test_single_high_activation_poset():
    log = prio_run(3, 2, Evaluator((EvalRule(1, 1, 0),)))
    P = prio_poset(log, 5)
    # activation at stage 2: every pair from index 2 on sits below y_1 (id 3)
    for i in range(2, 5):
        assert P.leq(2 * i, 3) and P.leq(2 * i + 1, 3)
    assert not P.leq(3, 4)
    assert not P.leq(2, 3)


def test_toy_pool_timeline():
    log = prio_run(10, 500, toy_evaluator_pool())
    assert len(log.activations) == 13
    assert log.activations[0] == Activation(1, 4, "high", 1)
    assert log.activations[1] == Activation(0, 6, "low", 0)
    assert log.activations[-1] == Activation(101, 102, "high", 7)
    assert log.flags == (1, 1, 0, 1, 1, 1, 1, 1, 0, 0)
    # requirement 1 is injured by requirement 0 and comes back on a fresh witness
    r1 = [a for a in log.activations if a.requirement == 1]
    assert [a.witness for a in r1] == [1, 6]


def test_toy_pool_is_deterministic():
    a = log_to_json(prio_run(10, 500, toy_evaluator_pool()))
    b = log_to_json(prio_run(10, 500, toy_evaluator_pool()))
    assert a == b


def test_golden_transcript_byte_exact():
    got = log_to_json(prio_run(10, 500, toy_evaluator_pool()))
    assert got == GOLDEN.read_text()


def test_transcript_roundtrip():
    log = prio_run(10, 120, toy_evaluator_pool())
    again = log_from_json(log_to_json(log))
    assert again == log


def test_transcript_stage_consistency_checked():
    text = log_to_json(prio_run(3, 5, Evaluator()))
    broken = text.replace('"final_stage": 5', '"final_stage": 4')
    with pytest.raises(ValueError, match="disagrees"):
        log_from_json(broken)


def test_log_properties_on_toy():
    log = prio_run(10, 500, toy_evaluator_pool())
    assert log_properties(log) == (True, True)


def test_log_properties_flag_violation():
    # second activation's witness sits strictly between the first's witness
    # and stage, landing later: exactly what property two forbids
    fake = PriorityLog(
        10,
        (Activation(5, 8, "low", 0), Activation(6, 9, "low", 1)),
        ((tuple(range(10)), (0,) * 10),),
    )
    assert log_properties(fake) == (True, False)


def test_order_rules_on_toy():
    log = prio_run(10, 500, toy_evaluator_pool())
    # low activation (witness 0, stage 6): y_0 under everything later
    assert prio_order(log, 0, 10, ("y", "x")) == "less"
    assert prio_order(log, 0, 10, ("y", "y")) == "less"
    # high activation (witness 1, stage 4): above until witness 0 interferes
    assert prio_order(log, 1, 5, ("y", "x")) == "greater"
    assert prio_order(log, 1, 10, ("y", "x")) == "incomparable"
    assert prio_order(log, 0, 1, ("x", "x")) == "incomparable"
    assert prio_order(log, 3, 3, ("x", "x")) == "equal"
    with pytest.raises(ValueError):
        prio_order(log, 4, 2)
    with pytest.raises(ValueError):
        prio_order(log, 0, 1, ("x", "q"))


def test_verify_report_on_toy():
    ev = toy_evaluator_pool()
    log = prio_run(10, 500, ev)
    report = prio_verify(log, ev, 100)
    assert report["all_pass"] is True
    assert report["axioms"]["pass"] and report["x_antichain"]["pass"]
    assert report["properties"] == {"one": True, "two": True, "pass": True}
    assert set(report["tails"]) == {0, 1, 3, 4, 5, 6, 7}
    # requirement 0 guesses the empty interval, generated by nothing
    assert report["interval_guesses"][0] == {
        "applicable": True, "pass": True, "generators": [],
    }
    # requirement 1 guesses all of the y family, which the high activations
    # pushed strictly above x elements, so no initial interval comes out
    assert report["interval_guesses"][1]["applicable"] is False
    assert report["interval_guesses"][2]["applicable"] is False


def test_verify_catches_post_hoc_table_flip():
    def table(e, y, s):
        # defined early, then silently flipped for late stages
        if e == 0 and y == 0:
            return 1 if s <= 10 else 0
        return None

    ev = Evaluator(table=table)
    log = prio_run(1, 20, ev)
    assert len(log.activations) == 1
    with pytest.raises(RuntimeError, match="monotonicity"):
        prio_verify(log, ev, 1)


def test_poset_slice_guard():
    log = prio_run(2, 1, Evaluator())
    with pytest.raises(ValueError):
        prio_poset(log, 0)


rule_sets = st.dictionaries(
    st.integers(0, 5),
    st.tuples(st.integers(0, 1), st.integers(0, 40)),
    max_size=6,
)


@settings(max_examples=40, deadline=None)
@given(rule_sets)
def test_random_pools_always_produce_clean_logs(spec):
    ev = Evaluator(tuple(EvalRule(e, v, fs) for e, (v, fs) in spec.items()))
    log = prio_run(6, 60, ev)
    assert log_properties(log) == (True, True)
    P = prio_poset(log, 30)
    for i in range(30):
        for j in range(i + 1, 30):
            assert not P.leq(2 * i, 2 * j) and not P.leq(2 * j, 2 * i)
