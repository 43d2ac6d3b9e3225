import math

import numpy as np
import pytest

import polarframes as pf


def test_catalog_points_are_unit():
    assert pf.catalog_names() == ["geodesic-sphere", "clifford-torus", "equilateral-torus", "veronese"]
    for name in pf.catalog_names():
        assert abs(np.linalg.norm(pf.point(name, 0.3, -0.2)) - 1.0) < 1e-12


def test_invariants_match_catalog():
    inv = pf.invariants("veronese", 0.4, 1.0)
    assert inv["K"] == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert inv["KN"] == pytest.approx(16.0 / 9.0, abs=1e-10)
    assert inv["rank_case"] == "a"
    fd = pf.invariants("veronese", 0.4, 1.0, mode="fd")
    assert fd["K"] == pytest.approx(inv["K"], abs=1e-4)


def test_unknown_surface_raises():
    with pytest.raises(pf.UnknownSurface):
        pf.invariants("catenoid", 0.0, 0.0)
    assert issubclass(pf.UnknownSurface, pf.Error)


def test_clifford_pencil():
    h3 = np.diag([1.0, -1.0])
    zero = np.zeros((2, 2))
    p = pf.pencil(h3, zero, zero, math.pi / 4, math.pi / 2)
    assert p["detC"] == pytest.approx(0.25)
    assert pf.pencil(h3, zero, zero, math.pi / 2, math.pi / 2)["detC"] < 1e-30


def test_polar_point_is_minimal_with_zero_gauss_kronecker():
    d = pf.polar_point("equilateral-torus", 0.3, 0.9, 1.1, 1.3)
    H = d["H"]
    assert abs(H[0]) < 1e-5 and abs(H[2]) < 1e-5 and abs(H[3]) < 1e-5
    assert np.min(np.linalg.eigvalsh(d["metric"])) > 0


def test_shape_and_H():
    d = pf.shape_and_H(np.eye(4), np.diag([1.0, -1.0, 0.0, 0.0]))
    np.testing.assert_allclose(d["H"], [0.0, -1.0 / 6.0, 0.0, 0.0], atol=1e-15)


def test_rotation_law_and_eta_curvatures():
    s = pf.ConnectionScalars(lambda_=1.0, f3=1.0, f4=0.0, g3=0.0, g4=1.0)
    r = pf.rotate_frame_scalars(s, math.pi / 2)
    assert (r.f3, r.f4, r.g3, r.g4) == pytest.approx((0.0, 1.0, -1.0, 0.0), abs=1e-15)
    np.testing.assert_allclose(pf.rotation_invariants(r), [1, 1, 0, 1], atol=1e-15)
    c = pf.eta_curvatures(pf.ConnectionScalars(f3=1.0))
    assert (c["K"], c["KN"], c["R3512"]) == pytest.approx((-1.0, 16.0, -2.0))
    with pytest.raises(pf.NonpositiveLambda):
        pf.eta_curvatures(pf.ConnectionScalars(lambda_=0.0))


def test_run_reports():
    rep = pf.run({"surface": "geodesic-sphere", "suites": ["theorem1"], "timing": False})
    assert rep["verdict"] == "NOT-APPLICABLE"
    rep = pf.run(surface="equilateral-torus", suites=["theorem1"], grid={"nu": 4, "nv": 4, "ntheta": 6, "nphi": 3},
                 timing=False)
    assert rep["verdict"] == "PASS"
    assert rep["suites"][0]["checks"]["H3"]["max"] <= 1e-5
    with pytest.raises(pf.InvalidConfig):
        pf.run(suites=["nope"])
