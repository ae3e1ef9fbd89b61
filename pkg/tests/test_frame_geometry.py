import json
from fractions import Fraction

import pytest
import sympy as sp

import oracles
from twistor_lab.exact_algebra import I, ComplexScalar, PolynomialRing
from twistor_lab.frame_geometry import (
    DATA_DIR,
    CommutationCoefficients,
    DegenerateFrame,
    Frame,
    FrameGeometry,
    MetricComponents,
    bracket_residuals,
    curvature_symmetry_report,
    geometry_from_dict,
    load_geometry,
    metric_compatibility_defects,
    numeric_rank,
    object_array,
    sample_points,
    torsion_defects,
)
from twistor_lab import ren_wang_twistor as rw


@pytest.fixture(scope="module")
def sympy_real_slice_curvature():
    x1, x2, x3, x4, s = sp.symbols("x1 x2 x3 x4 s")
    rows = [[0, 0, 0, 0, 1], [1, 0, 0, 0, -x2], [0, 1, 0, 0, x1], [0, 0, 1, 0, x4], [0, 0, 0, 1, -x3]]
    return oracles.frame_curvature([x1, x2, x3, x4, s], rows)


def test_real_slice_curvature_matches_coordinate_oracle(real_curvature, sympy_real_slice_curvature):
    mine = {k: v for k, v in real_curvature.nonzero_components().items()}
    assert set(mine) == set(sympy_real_slice_curvature)
    for idx, value in sympy_real_slice_curvature.items():
        assert mine[idx] == int(value), idx


def test_commutators_of_real_slice_frame(real_slice):
    c = real_slice.geometry.commutators.nonzero()
    assert c == {(1, 2, 0): 2, (2, 1, 0): -2, (4, 3, 0): 2, (3, 4, 0): -2}


def test_bracket_residuals_vanish(real_slice):
    geom = real_slice.geometry
    assert bracket_residuals(geom.frame, geom.commutators, geom.sample_points(5)) == []


def test_christoffel_is_torsion_free_and_metric(real_slice, heisenberg):
    for geom in (real_slice.geometry, heisenberg.geometry):
        gamma = geom.christoffel
        assert torsion_defects(gamma, geom.commutators) == []
        assert metric_compatibility_defects(gamma, geom.metric, geom.frame) == []


def test_real_slice_christoffel_values(real_slice):
    gamma = real_slice.geometry.christoffel
    assert gamma[0, 1, 2] == 1 and gamma[1, 0, 2] == 1 and gamma[2, 0, 1] == -1
    assert gamma[0, 2, 1] == -1


def test_curvature_symmetries(real_curvature, heisenberg):
    assert curvature_symmetry_report(real_curvature).passed
    geom = heisenberg.geometry
    assert curvature_symmetry_report(geom.curvature, geom.metric).passed


def test_real_slice_ricci_and_scalar(real_curvature):
    for i in range(5):
        for j in range(5):
            want = [4, -2, -2, -2, -2][i] if i == j else 0
            assert real_curvature.ricci[i, j] == want
    assert real_curvature.scalar == -4


def test_contact_sectional_curvature_is_one(real_curvature):
    # g(R(xi, X) X, xi) = 1 for unit X orthogonal to xi on a K-contact manifold
    for k in range(1, 5):
        assert real_curvature.R[0, k, 0, k] == 1


def test_weyl_is_trace_free(real_curvature):
    W = real_curvature.weyl
    for j in range(5):
        for l in range(5):
            assert sum((W[i, j, i, l] for i in range(5)), ComplexScalar(0)) == 0


def test_flat_coordinate_frame_has_zero_curvature():
    frame = Frame.coordinate_frame(("a", "b", "c"))
    geom = FrameGeometry(frame, MetricComponents.identity(3, frame.ring), "flat")
    assert geom.curvature.nonzero_components() == {}


def test_polar_frame_of_the_plane_is_flat():
    # orthonormal frame d/du, u^-1 d/dv of the flat metric du^2 + u^2 dv^2 (a Laurent coefficient)
    frame = Frame(("u", "v"), ({"u": 1}, {"v": PolynomialRing(("u", "v"), ("u",))("u^-1")}), ("u",))
    geom = FrameGeometry(frame, MetricComponents.identity(2, frame.ring), "polar")
    assert geom.curvature.nonzero_components() == {}


def test_degenerate_frame_rejected():
    R = PolynomialRing(("a", "b"))
    with pytest.raises(DegenerateFrame):
        Frame(("a", "b"), ({"a": 1, "b": 1}, {"a": 1, "b": 1})).coframe
    with pytest.raises(DegenerateFrame):
        Frame(("a", "b"), ({"a": R("a")}, {"b": 1})).coframe


def test_commutation_coefficients_must_be_antisymmetric():
    c = object_array((2, 2, 2))
    c[...] = ComplexScalar(0)
    c[0, 1, 0] = ComplexScalar(1)
    with pytest.raises(ValueError):
        CommutationCoefficients(c)


def test_metric_must_be_symmetric():
    R = PolynomialRing(("a",))
    with pytest.raises(ValueError):
        MetricComponents(((R(1), R(2)), (R(3), R(1))))


def test_sample_points_are_reproducible_and_avoid_laurent_zeros():
    a = sample_points(("x", "zeta"), 20, seed=3, laurent=("zeta",))
    b = sample_points(("x", "zeta"), 20, seed=3, laurent=("zeta",))
    assert a == b
    assert all(not pt["zeta"].is_zero() for pt in a)


def test_numeric_rank_of_phi(heisenberg):
    assert set(numeric_rank(heisenberg.phi, heisenberg.geometry.sample_points())) == {4}


def test_geometry_file_round_trip():
    data = json.loads((DATA_DIR / "real_slice.json").read_text())
    geom = geometry_from_dict(data)
    assert geom.frame.basis == rw.real_slice_frame().basis
    assert load_geometry(DATA_DIR / "real_slice.json").curvature.scalar == -4


def test_heisenberg_metric_entries(heisenberg):
    g = heisenberg.g
    assert g[0][0] == 1 and g[1][4] == -I and g[2][3] == I and g[1][1] == 0


def test_heisenberg_curvature_matches_coordinate_oracle(heisenberg):
    y00, y01, y10, y11, t = sp.symbols("y00 y01 y10 y11 t")
    rows = [[0, 0, 0, 0, 1], [1, 0, 0, 0, -y11], [0, 1, 0, 0, y10], [0, 0, 1, 0, -y01], [0, 0, 0, 1, y00]]
    G = [[1, 0, 0, 0, 0], [0, 0, 0, 0, -sp.I], [0, 0, 0, sp.I, 0], [0, 0, sp.I, 0, 0], [0, -sp.I, 0, 0, 0]]
    oracle = oracles.frame_curvature([y00, y01, y10, y11, t], rows, G)
    mine = heisenberg.geometry.curvature.nonzero_components()
    assert set(mine) == set(oracle)
    for idx, value in oracle.items():
        re, im = sp.re(value), sp.im(value)
        assert mine[idx] == ComplexScalar(Fraction(str(re)), Fraction(str(im))), idx
