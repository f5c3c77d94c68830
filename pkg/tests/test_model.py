import json
import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from conftest import small_scenario
from rsnc.model import (Scenario, Transmission, deadline_miss_ratio, dump_scenario,
                        evaluate_schedule, load_scenario, scenario_from_dict, scenario_to_dict,
                        schedule_to_dict, validate_scenario)


def tx(coded, rate, intended, B=10.0):
    return Transmission.at_rate(coded, rate, intended, B)


def test_trio_validates(trio):
    rep = validate_scenario(trio)
    assert rep.ok and not rep.warnings


def test_overlap_reported(trio):
    bad = replace(trio, has=(frozenset({0, 1, 2}),) + trio.has[1:])
    rep = validate_scenario(bad)
    assert not rep.ok
    assert "overlap at (d1,p1)" in rep.violations


def test_empty_wants_is_ok_with_warning(trio):
    empty = replace(trio, wants=(frozenset(),) * 3, deadline={}, benefit={})
    rep = validate_scenario(empty)
    assert rep.ok
    assert rep.warnings == ["nothing to schedule"]


def test_missing_and_nonpositive_entries(trio):
    d = dict(trio.deadline)
    del d[(1, 1)]
    b = dict(trio.benefit)
    b[(0, 0)] = 0.0
    rep = validate_scenario(replace(trio, deadline=d, benefit=b))
    assert "missing deadline at (d2,p2)" in rep.violations
    assert "non-positive benefit at (d1,p1)" in rep.violations


def test_trio_two_step_schedule_meets_everything(trio):
    sched = evaluate_schedule(trio, [tx({0}, 5.0, {(0, 0)}), tx({1, 2}, 2.0, {(1, 1), (2, 2)})])
    assert sched.satisfied == {(0, 0), (1, 1), (2, 2)}
    assert sched.total_benefit == 3.0
    assert deadline_miss_ratio(sched, trio) == 0.0


def test_trio_single_xor_misses_d1(trio):
    sched = evaluate_schedule(trio, [tx({0, 1, 2}, 2.0, {(0, 0), (1, 1), (2, 2)})])
    assert sched.satisfied == {(1, 1), (2, 2)}
    assert sched.decoded_at[(0, 0)] == 5.0
    assert deadline_miss_ratio(sched, trio) == pytest.approx(1 / 3)


def test_empty_schedule(trio):
    sched = evaluate_schedule(trio, [])
    assert sched.satisfied == frozenset() and sched.total_benefit == 0.0


def test_no_requests_miss_ratio_zero(trio):
    empty = replace(trio, wants=(frozenset(),) * 3, deadline={}, benefit={})
    assert deadline_miss_ratio(evaluate_schedule(empty, []), empty) == 0.0


def test_arrival_exactly_at_deadline_counts(trio):
    s = replace(trio, deadline={**trio.deadline, (0, 0): 2.0})
    assert (0, 0) in evaluate_schedule(s, [tx({0}, 5.0, {(0, 0)})]).satisfied


def test_rate_above_receiver_max_fails(trio):
    sched = evaluate_schedule(trio, [tx({1}, 5.0, {(1, 1)})])
    assert (1, 1) not in sched.satisfied
    assert (1, 1) not in sched.decoded_at


def test_side_information_grows_during_replay():
    # d1 holds nothing; after p1 arrives uncoded it can decode p1^p2
    s = Scenario(10.0, ("p1", "p2"), ("d1",), (frozenset(),), (frozenset({0, 1}),),
                 {(0, 0): 10.0, (0, 1): 10.0}, {(0, 0): 1.0, (0, 1): 1.0}, (10.0,))
    direct = evaluate_schedule(s, [tx({0, 1}, 10.0, {(0, 1)})])
    assert direct.satisfied == frozenset()
    staged = evaluate_schedule(s, [tx({0}, 10.0, {(0, 0)}), tx({0, 1}, 10.0, {(0, 1)})])
    assert staged.satisfied == {(0, 0), (0, 1)}


def test_unknown_packet_rejected(trio):
    with pytest.raises(ValueError, match="unknown packet"):
        evaluate_schedule(trio, [tx({7}, 2.0, set())])


def test_pair_in_two_transmissions_rejected(trio):
    with pytest.raises(ValueError, match="more than one"):
        evaluate_schedule(trio, [tx({0}, 5.0, {(0, 0)}), tx({0}, 5.0, {(0, 0)})])


def test_start_times(trio):
    sched = evaluate_schedule(trio, [tx({0}, 5.0, {(0, 0)}), tx({1, 2}, 2.0, {(1, 1), (2, 2)})])
    assert sched.start_times() == [0.0, 2.0]


def test_json_round_trip(tmp_path, trio):
    path = tmp_path / "s.json"
    dump_scenario(trio, path)
    assert load_scenario(path) == trio
    doc = json.loads(path.read_text())
    assert doc["destinations"][0]["wants"] == [{"packet": "p1", "deadline": 4.0, "benefit": 1.0}]


@pytest.mark.parametrize("where", ["top", "dest", "want"])
def test_json_unknown_field_rejected(trio, where):
    doc = scenario_to_dict(trio)
    target = {"top": doc, "dest": doc["destinations"][0],
              "want": doc["destinations"][0]["wants"][0]}[where]
    target["colour"] = "red"
    with pytest.raises(ValueError, match="unknown fields"):
        scenario_from_dict(doc)


def test_json_unknown_packet_rejected(trio):
    doc = scenario_to_dict(trio)
    doc["destinations"][0]["has"].append("p9")
    with pytest.raises(ValueError, match="unknown packet id"):
        scenario_from_dict(doc)


def test_schedule_export(trio):
    sched = evaluate_schedule(trio, [tx({0}, 5.0, {(0, 0)}), tx({1, 2}, 2.0, {(1, 1), (2, 2)})])
    doc = schedule_to_dict(trio, sched)
    assert doc["transmissions"][1] == {"coded": ["p2", "p3"], "rate": 2.0, "start": 2.0,
                                       "end": 7.0, "intended": [["d2", "p2"], ["d3", "p3"]]}
    assert doc["summary"]["total_benefit"] == 3.0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), order=st.permutations(range(4)))
def test_replay_invariants_under_permutation(seed, order):
    s = small_scenario(seed, 0, n=3, m=3)
    reqs = s.requests()
    txs = []
    for k, (i, j) in enumerate(reqs[:4]):
        txs.append(tx({j}, s.max_rate[i] * (0.8 if k % 2 else 1.2), {(i, j)}, s.packet_size))
    txs = [txs[p] for p in order if p < len(txs)]
    sched = evaluate_schedule(s, txs)
    t = 0.0
    arrival = {}
    for x in txs:
        t += x.duration
        for r in x.intended:
            arrival[r] = t
    for r in sched.satisfied:
        assert arrival[r] <= s.deadline[r] + 1e-9
    assert sched.total_benefit == math.fsum(s.benefit[r] for r in sorted(sched.satisfied))
