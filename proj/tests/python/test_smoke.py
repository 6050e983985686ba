import json
import math
import os
from pathlib import Path

import pytest

import fifonc

GOLDEN = Path(os.environ.get("FIFONC_GOLDEN_DIR", Path(__file__).resolve().parents[1] / "golden"))


def e1():
    tb = fifonc.ConcaveCurve.token_bucket
    return fifonc.ResidualInput(tb(1, 1), tb(1, 1), fifonc.ConvexCurve.rate_latency(3, 0))


def e2():
    foi = fifonc.ConcaveCurve([(4, 1), (1, 4)])
    return fifonc.ResidualInput(foi, fifonc.ConcaveCurve.token_bucket(1, 1), fifonc.ConvexCurve.rate_latency(3, 0))


def test_curves():
    c = fifonc.ConcaveCurve([(4, 1), (3, 1), (1, 4)])
    assert c.segments == [(3.0, 1.0), (1.0, 4.0)]
    assert c.breakpoints == [1.5]
    assert c(0) == 0
    assert c(2) == pytest.approx(6)
    assert c(1) == pytest.approx(4)
    b = fifonc.ConvexCurve.rate_latency(2, 1)
    assert b(3) == pytest.approx(4)
    assert b.pseudo_inverse(4) == pytest.approx(3)
    assert fifonc.horizontal_deviation(fifonc.ConcaveCurve.token_bucket(1, 1), fifonc.ConvexCurve.rate_latency(3, 0)) == pytest.approx(1 / 3)


@pytest.mark.parametrize("solve", [fifonc.exact_theta_opt, fifonc.heuristic_theta_opt])
def test_worked_examples(solve):
    r = solve(e1())
    assert r.theta == pytest.approx(1 / 3, abs=1e-9)
    assert r.backlog == pytest.approx(4 / 3, abs=1e-9)
    r = solve(e2())
    assert r.theta == pytest.approx(0.6, abs=1e-9)
    assert r.backlog == pytest.approx(3.4, abs=1e-9)


def test_trace_and_oracle():
    trace = json.loads(fifonc.heuristic_trace(e2()))
    assert len(trace["theta_vec"]) == 2
    theta, backlog = fifonc.oracle_search(e2())
    assert backlog == pytest.approx(3.4, rel=1e-2)
    assert backlog >= fifonc.exact_theta_opt(e2()).backlog - 1e-9


def test_generated_scenario_round_trip():
    sc = fifonc.generate_scenario(3, foi_segments=4, seed=7, iteration=3)
    assert json.loads(sc.to_json()) == json.loads((GOLDEN / "gen_n3_f4_seed7_it3.json").read_text())
    back = fifonc.Scenario.from_json(sc.to_json())
    assert back.foi == sc.foi and back.beta == sc.beta
    ex = fifonc.exact_theta_opt(sc.input())
    he = fifonc.heuristic_theta_opt(sc.input())
    di = fifonc.solve_disco(sc)
    assert ex.backlog == fifonc.backlog_bound(sc.input(), ex.theta)
    assert ex.backlog <= he.backlog + 1e-9
    assert ex.backlog <= di.backlog + 1e-9
    assert fifonc.aggregate_backlog(sc) > 0


def test_errors():
    tb = fifonc.ConcaveCurve.token_bucket
    with pytest.raises(fifonc.InstabilityError):
        fifonc.ResidualInput(tb(2, 1), tb(1, 1), fifonc.ConvexCurve.rate_latency(3, 0))
    with pytest.raises(fifonc.ParseError, match="foi.segments"):
        fifonc.Scenario.from_json((GOLDEN / "malformed.json").read_text())
    with pytest.raises(ValueError):
        fifonc.segregation_penalty([1.0], 0.0)
    assert fifonc.segregation_penalty([3, 3], 4) == pytest.approx(50)
    assert math.isclose(fifonc.theta_disco(e1(), [1.0]), 1 / 3)
