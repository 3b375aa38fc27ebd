import math

import numpy as np
import pytest

import ventcel


def test_appendix_curve_and_curvature():
    t0, t1 = ventcel.curve_interval("appendix")
    assert (t0, t1) == (-1.0, 1.0)
    x, y = ventcel.eval_curve("appendix", 0.0)
    assert x == 0.0
    assert y == pytest.approx(2.0 ** (-1.0 / 3.0), rel=1e-14)
    for t in (-0.8, 0.0, 0.5):
        rho = math.sqrt(1 + t * t)
        closed = (2 - rho) ** (5 / 3) * (1 + rho) ** (5 / 6) / (2 ** 1.5 * rho ** 2.5)
        assert ventcel.curvature("appendix", t) == pytest.approx(closed, rel=1e-10)
    assert ventcel.arc_length("appendix", 1.0) == pytest.approx(2.2115999821450521825, rel=1e-9)


def test_triangulate_square():
    m = ventcel.triangulate("square", 4)
    assert m["nodes"].shape == (25, 2)
    assert m["triangles"].shape == (32, 3)
    assert m["area"] == pytest.approx(1.0, rel=1e-12)


def test_solve_appendix_manufactured():
    r = ventcel.solve(domain="appendix", a2="inv_curvature", phi="exact_appendix", exact="exact_appendix", n=16)
    assert r["values"].shape == (r["nodes"].shape[0],)
    assert r["residual"] < 1e-10
    assert r["error_l2"] < 1e-2
    assert r["bounds"]["lambda2"] > 0


def test_convergence_order():
    r = ventcel.convergence(domain="appendix", a2="inv_curvature", phi="exact_appendix",
                            exact="exact_appendix", n=8, levels=3)
    assert len(r["rows"]) == 3
    assert r["order_l2"] > 1.8


def test_coefficient_bounds_sigma0():
    b = ventcel.coefficient_bounds("square", a2="poly:1,0.25,0,0,0,0", a0="const:0")
    assert b["sigma0"] == pytest.approx(b["M"] ** 2 / (2 * b["lambda2"]) - b["lambda0"])


def test_errors_map_to_python():
    with pytest.raises(ventcel.ConfigError, match="a2"):
        ventcel.solve(a2="sin:1")
    with pytest.raises(ventcel.ConfigError):
        ventcel.solve(bogus=1)
    with pytest.raises(ventcel.EllipticityViolation):
        ventcel.solve(domain="square", a2="const:-1", n=4)


def test_verify_suite_deterministic():
    a = ventcel.verify(7)
    b = ventcel.verify(7)
    assert a["all_pass"]
    assert a["summary"] == b["summary"]
    assert all(c["pass"] for c in a["cases"])
