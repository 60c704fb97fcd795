import math

import numpy as np
import pytest

import stabex


def test_damping_helpers():
    assert [stabex.min_q_for_p(p) for p in range(7)] == [0, 0, 0, 1, 2, 3, 3]
    assert stabex.dyadic_step_count(6, 3) == 18
    steps = stabex.dyadic_steps(64.0, 1.0)
    assert len(steps) == 18 and sum(steps) == pytest.approx(2.25)
    cheb = stabex.chebyshev_steps(64.0, 6)
    assert sum(cheb) == pytest.approx(2 * 36 / 64.0)
    assert stabex.dyadic_poly(0.0, 6, 3) == 1.0
    # (1 - 0.5)^m (K lambda - 1) <= 1 with m minimal
    m = stabex.min_damping_steps(100.0, 0.5)
    assert 0.5**m * 99 <= 1 < 0.5 ** (m - 1) * 99


def test_solve_stiff_scalar():
    lam = 1000.0
    out = stabex.solve(lambda u, t: -lam * u, np.array([1.0]), 1.0, tol=1e-3, lambda_max=lam)
    assert out["t"][0] == 0.0 and out["t"][-1] == pytest.approx(1.0)
    assert abs(out["u"][-1, 0] - math.exp(-lam)) < 1e-2
    assert "stabilizing" in out["kind"]
    cost = out["cost"]
    assert cost["alpha"] < cost["alpha0"]


def test_rhs_errors_propagate():
    def bad(u, t):
        raise ValueError("boom")

    with pytest.raises(ValueError):
        stabex.solve(bad, np.array([1.0]), 1.0)


def test_benchmark_run():
    assert "nonstiff" in stabex.benchmark_names()
    r = stabex.run_benchmark("nonstiff")
    assert r["cost"]["ratio"] == 1.0
    assert r["cost"]["stabilizing_steps"] == 0
    assert r["final_error"] <= 1e-2
    with pytest.raises(ValueError):
        stabex.run_benchmark("nope")


def test_q_table_text():
    assert stabex.q_table(6, 6) == "p,q,steps\n6,3,18\n"
