import math

import numpy as np
import pytest

import polite


def test_elliptic_and_periods():
    assert polite.complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert polite.jacobi_cn(0.0, 0.5) == pytest.approx(1.0)
    assert polite.duffing_period(0.0) == pytest.approx(2 * math.pi)
    assert polite.duffing_period_series(0.1, 2) == pytest.approx(2 * math.pi * (1 - 0.0375 + 0.002226562), rel=1e-9)
    doc = polite.periods(0.1)
    assert doc["schema"] == 1
    assert doc["pass"]
    with pytest.raises(ValueError):
        polite.duffing_period(-2.0)


def test_flow_and_integrate():
    x = polite.flow_map("harmonic", np.array([1.0, 0.0]), math.pi / 2)
    assert np.allclose(x, [0.0, -1.0], atol=1e-10)
    times, states = polite.integrate("champagne", np.array([1.0, 0.0, 0.0, 0.3]), 10.0)
    assert states.shape == (len(times), 4)
    assert np.all(np.diff(times) > 0)


def test_reduction_and_reconstruction():
    s = polite.champagne_project(np.array([1.0, 0.0, 0.0, 1.0]))
    assert np.allclose(s, [1, 1, 0, 1])
    assert np.allclose(polite.champagne_reduced_field(s), [0, 0, -1, 0])
    x0 = np.array([1.0, 0.0, 0.0, 0.3])
    times = [0.0, 1.0, 5.0]
    full, reduced = polite.champagne_reconstruct(x0, times)
    for t, row in zip(times, full):
        assert np.allclose(row, polite.flow_map("champagne", x0, t), atol=1e-6)
    with pytest.raises(ValueError):
        polite.champagne_reduced_field(np.array([1.0, 1.0, 0.0, 2.0]))


def test_monodromy():
    res = polite.monodromy()
    m = np.array(res["matrix"])
    assert round(np.linalg.det(m)) == 1
    assert np.trace(m) == 2
    assert not np.array_equal(m, np.eye(2))
    assert np.array_equal(np.array(polite.monodromy(0.2, 0.0, 0.05, 0.05)["matrix"]), np.eye(2))


def test_strata_and_algebra():
    rep = polite.politeness_report("plane-field", samples=5)
    assert rep["system"] == "plane-field"
    assert any(s["properness"] == "witness" for s in rep["strata"])
    assert polite.orbit_dimension("classS", 3, np.array([1.0, 0.0, 0.0, 0.5])) == 2
    assert polite.isotropy_basis("classS", 3, np.array([1.0, 0.0, 0.0, 0.5])).shape == (4, 2)
    assert polite.sl2_classify(np.array([0.0, 1.0, -1.0])) in {"elliptic", "hyperbolic", "parabolic", "zero"}


def test_lines_and_forms():
    u, m = polite.reduce_line(np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0]))
    assert np.allclose(u, [1, 0, 0]) and np.allclose(m, [0, 1, 0])
    u2, m2 = polite.act_se_n(np.eye(3), u, u, m)
    assert np.allclose(u2, u) and np.allclose(m2, m)
    w = polite.omega(np.array([0.3, -0.2, 0.0]), np.array([1.0, 0.0, 0.0, 0.0]))
    assert np.allclose(w, -w.T)
    assert abs(polite.pfaffian(w)) > 0.5
    assert polite.check_closed(np.array([0.3, -0.2, 0.4]), np.array([1.0, 0.0, 0.0, 0.0])) < 1e-6
    assert polite.maurer_cartan_selftest() < 1e-6


def test_selftest_document():
    doc = polite.selftest()
    assert doc["values"]["total"] == 11
    assert len(doc["values"]["criteria"]) == 11
