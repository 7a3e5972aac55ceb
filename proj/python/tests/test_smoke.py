import math

import numpy as np
import pytest

import ngdelay as ngd

BENCH = """source rect(width=1.5)
stage bessel2(T=0.484, alpha=1.268)^2 as input
stage nd(T=0.22)^2 as output
"""


def test_single_stage_delay():
    assert ngd.nd(0.22).group_delay(0.0) == pytest.approx(-0.22, rel=1e-14)
    assert abs(ngd.nd(0.22)(1 / 0.22)) == pytest.approx(math.sqrt(2))


def test_cascade_and_expr_agree():
    h = ngd.nd(0.22) ** 2
    assert h.equivalent(ngd.parse_expr("nd(T=0.22)^2"))
    assert (ngd.nd(0.22) * ngd.nd(0.22)).num == pytest.approx([1.0, 0.44, 0.0484])


def test_poles():
    v = ngd.neg_allpass(0.22).poles()
    assert v["classification"] == "unstable"
    assert v["poles"][0].real == pytest.approx(1 / 0.22)
    assert ngd.allpass(0.22).poles()["classification"] == "stable"


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        ngd.nd(-1.0)
    with pytest.raises(ValueError, match="missing source"):
        ngd.check_chain("stage nd(T=0.22)")
    with pytest.raises(ngd.PoleError):
        ngd.TransferFunction([1.0], [0.0, 1.0])(0.0)
    with pytest.raises(ngd.SimulationError):
        ngd.simulate_chain("source rect(width=1)\nstage nd(T=1)", method="ode")


def test_bench_chain_advance():
    assert ngd.check_chain(BENCH) == []
    w = ngd.simulate_chain(BENCH, dt=1e-3, t_end=12.0)
    assert list(w) == ["t", "source", "input", "output"]
    assert np.max(np.abs(w["output"][w["t"] < 0])) == 0.0
    r = ngd.measure_advance(w["input"], w["output"], float(w["t"][0]), 1e-3)
    assert 0.40 <= r["advance"] <= 0.55
    assert r["advance_fraction"] >= 0.20


def test_design_and_sweep():
    d = ngd.design_stage(10, 0.2, 1.0)
    assert (d["m"], d["T"], d["T_total"]) == (10, pytest.approx(0.2), pytest.approx(2.0))
    assert ngd.check_chain(d["chain"]) == []
    s = ngd.scaling_sweep([1, 2, 4, 8, 10], 0.2, 1.0, 1.0)
    assert 0.4 <= s["exponent"] <= 0.6
