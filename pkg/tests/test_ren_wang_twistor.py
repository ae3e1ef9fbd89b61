import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistor_lab import ren_wang_twistor as rw
from twistor_lab.exact_algebra import I, ComplexScalar, PolynomialRing
from twistor_lab.frame_geometry import load_geometry, DATA_DIR

q = st.fractions(min_value=-20, max_value=20, max_denominator=20)
cq = st.builds(ComplexScalar, q, q)
nonzero_cq = cq.filter(lambda z: not z.is_zero())
ZETA = PolynomialRing(("zeta",), ("zeta",))


def line(y00=0, y01=0, y10=0, y11=0, t=0):
    return rw.TwistorLineParams(((y00, y01), (y10, y11)), t)


def vec(a00=0, a01=0, a10=0, a11=0, b=0):
    return rw.TangentVector5(((a00, a01), (a10, a11)), b)


# --- charts -------------------------------------------------------------------

def test_transition_example():
    assert rw.transition(rw.ChartPoint("W", (1, 1, 1, 1))) == rw.ChartPoint("W~", (1, 1, 1, 3))


def test_transition_fixes_fibre_over_zero_section():
    p = rw.transition(rw.ChartPoint("W", (4, 0, 0, 7)))
    assert p == rw.ChartPoint("W~", (Fraction(1, 4), 0, 0, 7))


@settings(max_examples=100)
@given(nonzero_cq, cq, cq, cq)
def test_transition_round_trip(z, w0, w1, w2):
    p = rw.ChartPoint("W", (z, w0, w1, w2))
    assert rw.transition(rw.transition(p)) == p


@pytest.mark.parametrize("chart", ["W", "W~"])
def test_transition_out_of_domain(chart):
    with pytest.raises(rw.OutOfDomain):
        rw.transition(rw.ChartPoint(chart, (0, 1, 2, 3)))


def test_chart_point_validation():
    with pytest.raises(ValueError):
        rw.ChartPoint("V", (1, 1, 1, 1))
    with pytest.raises(ValueError):
        rw.ChartPoint("W", (1, 1, 1))


# --- Jacobian and normal bundle ------------------------------------------------

def test_jacobian_last_row():
    R = rw.chart_ring()
    row = rw.jacobian()[3]
    assert row == [R("-2*zeta^-2*w0*w1"), R("2*zeta^-1*w1"), R("2*zeta^-1*w0"), R.const(1)]


def test_jacobian_at_unit_point_matches_finite_differences():
    point = {"zeta": 1, "w0": 1, "w1": 1, "w2": 1}
    exact = [[e.substitute(point).constant_value() for e in row] for row in rw.jacobian()]
    assert exact == [[-1, 0, 0, 0], [-1, 1, 0, 0], [-1, 0, 1, 0], [-2, 2, 2, 1]]

    def phi(v):
        z, w0, w1, w2 = v
        return (1 / z, w0 / z, w1 / z, w2 + 2 * w0 * w1 / z)

    h = 1e-6
    base = [1.0, 1.0, 1.0, 1.0]
    for c in range(4):
        up, dn = list(base), list(base)
        up[c] += h
        dn[c] -= h
        fd = [(a - b) / (2 * h) for a, b in zip(phi(up), phi(dn))]
        for r in range(4):
            assert abs(fd[r] - float(exact[r][c].re)) < 1e-6


def test_jacobian_on_zero_section_is_diagonal():
    J = rw.jacobian_on_line()
    expected = [ZETA("-zeta^-2"), ZETA("zeta^-1"), ZETA("zeta^-1"), ZETA.const(1)]
    assert rw.diagonal_entries(J) == expected


def test_jacobian_on_nonzero_line_is_not_diagonal():
    with pytest.raises(rw.NotSplitDiagonal):
        rw.diagonal_entries(rw.jacobian_on_line(line(y00=1, y11=1)))


def test_normal_bundle_of_zero_section():
    nb = rw.normal_bundle_degrees(rw.diagonal_entries(rw.jacobian_on_line()))
    assert nb.tangent_degree == 2
    assert nb.as_counter() == {1: 2, 0: 1}


def test_normal_bundle_three_dimensional_case():
    nb = rw.normal_bundle_degrees([ZETA("zeta^-2"), ZETA("zeta^-1"), ZETA("zeta^-1")])
    assert nb.tangent_degree == 2 and nb.normal_degrees == (1, 1)


def test_normal_bundle_trivial_and_errors():
    assert rw.normal_bundle_degrees([1, 1, 1, 1]) == rw.NormalBundle(0, (0, 0, 0))
    with pytest.raises(rw.NotSplitDiagonal):
        rw.normal_bundle_degrees([ZETA("zeta^-1 + 1"), ZETA.const(1)])
    R = PolynomialRing(("zeta", "w"), ("zeta",))
    with pytest.raises(rw.NotSplitDiagonal):
        rw.normal_bundle_degrees([R("w*zeta"), R.const(1)])


# --- twistor lines ----------------------------------------------------------

def test_eta_examples():
    assert rw.eta_map(line(t=5), 2) == rw.ChartPoint("W", (2, 0, 0, 5))
    assert rw.eta_map(line(y00=1), 0) == rw.ChartPoint("W", (0, 1, 0, 0))


@settings(max_examples=30)
@given(cq)
def test_origin_line_is_zero_section(z):
    p = rw.eta_map(rw.TwistorLineParams.origin(), z)
    assert p.coords[1:] == (0, 0, 0)


@settings(max_examples=50)
@given(st.lists(cq, min_size=5, max_size=5), nonzero_cq)
def test_line_agrees_across_charts(params, z):
    x = line(*params)
    assert rw.transition(rw.eta_map(x, z)) == rw.eta_map_tilde(x, z.reciprocal())


def test_symbolic_chart_compatibility_and_translation():
    assert rw.verify_chart_compatibility().passed
    assert rw.verify_translated_line().passed
    assert rw.verify_translated_line(line(1, 2, 3, 4, 5)).passed


def test_infinity_point_is_tilde_origin():
    x = line(1, 2, 3, 4, 5)
    assert rw.eta_map(x, rw.INFINITY) == rw.eta_map_tilde(x, 0)


# --- incidence ------------------------------------------------------------

def test_incidence_examples():
    o = rw.TwistorLineParams.origin()
    r = rw.incidence(o, vec(a01=1))
    assert r.outcome == "incident" and r.witness == 0
    r = rw.incidence(o, vec(a00=1, a11=1))
    assert r.outcome == "not_incident" and r.det == 1
    r = rw.incidence(o, vec(a00=1))
    assert r.outcome == "incident" and r.witness == rw.INFINITY
    assert rw.incidence(o, vec()).outcome == "degenerate"
    assert rw.incidence(o, vec(b=1)).outcome == "not_incident"


@pytest.mark.parametrize("v", [vec(a01=1), vec(a00=1), vec(a00=1, a11=1), vec(), vec(b=1)])
def test_incidence_examples_agree_with_oracle(v):
    o = rw.TwistorLineParams.origin()
    assert rw.numeric_incidence_oracle(o, v) == rw.incidence(o, v).outcome


def test_rank_one_direction_with_linear_condition_meets():
    x = line(1, 2, -1, 3, 0)
    # a = ((2, 4), (1, 2)) has det 0 and common root zeta = -1/2
    _, lin = rw.incidence_conditions(x, vec(2, 4, 1, 2, 0))
    v = vec(2, 4, 1, 2, -lin)
    r = rw.incidence(x, v)
    assert r.outcome == "incident" and r.witness == Fraction(-1, 2)
    assert rw.intersection_point_agrees(x, v, r)


@settings(max_examples=100)
@given(st.lists(cq, min_size=5, max_size=5), st.tuples(cq, cq), st.tuples(cq, cq))
def test_incident_witness_is_common_point(params, u, w):
    x = line(*params)
    v0 = vec(u[0] * w[0], u[0] * w[1], u[1] * w[0], u[1] * w[1], 0)
    _, lin = rw.incidence_conditions(x, v0)
    v = vec(*[c for row in v0.a for c in row], -lin)
    r = rw.incidence(x, v)
    assert r.meets
    if r.outcome == "incident":
        assert rw.eta_map(x, r.witness) == rw.eta_map(x.displaced(v), r.witness)


def test_incidence_suite_matches_oracle():
    result = rw.run_incidence_suite(1000, 42)
    assert result["agree"] == 1000
    assert result["det_zero"] >= 200
    assert result["point_failures"] == 0
    assert not result["disagreements"]


def test_random_pairs_are_bounded_and_seeded():
    a = rw.random_incidence_pairs(50, 3)
    assert a == rw.random_incidence_pairs(50, 3)
    for x, v, _ in a:
        for c in x.flat():
            for part in (c.re, c.im):
                assert abs(part.numerator) <= 50 and part.denominator <= 50


# --- null cone ---------------------------------------------------------------

def _theta_at(x):
    y00, y01, y10, y11, t = x.flat()
    return (y11, -y10, y01, -y00, ComplexScalar(1))


def test_null_cone_at_origin():
    nc = rw.recover_null_cone(rw.TwistorLineParams.origin())
    assert nc.linear == (0, 0, 0, 0, 1)
    h = Fraction(1, 2)
    Q = [[0] * 5 for _ in range(5)]
    Q[0][3] = Q[3][0] = h
    Q[1][2] = Q[2][1] = -h
    assert [list(r) for r in nc.quadratic] == Q
    assert nc.quadratic_rank() == 4


@settings(max_examples=25, deadline=None)
@given(st.lists(cq, min_size=5, max_size=5))
def test_null_cone_linear_form_is_theta(params):
    x = line(*params)
    nc = rw.recover_null_cone(x)
    assert nc.linear == _theta_at(x)
    assert nc.quadratic_rank() == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(cq, min_size=5, max_size=5), st.lists(cq, min_size=4, max_size=4), st.booleans())
def test_null_cone_membership_matches_metric(params, a, force):
    """Oracle: g = theta^2 + g0 written directly in coordinates."""
    x = line(*params)
    if force:
        # land on det a = 0 and theta(v) = 0
        a = [a[0], a[1], a[0] * 2, a[1] * 2]
    th = _theta_at(x)
    b = -sum((th[k] * a[k] for k in range(4)), ComplexScalar(0)) if force else a[0] + 1
    v = vec(*a, b)
    flat = v.flat()
    theta_v = sum((th[k] * flat[k] for k in range(5)), ComplexScalar(0))
    g0_vv = -2 * I * (flat[0] * flat[3] - flat[1] * flat[2])
    expected = (theta_v * theta_v + g0_vv).is_zero() and theta_v.is_zero()
    nc = rw.recover_null_cone(x)
    assert nc.contains(v) == expected
    if force:
        assert expected
    scaled = rw.NullConeData(tuple(c * 3 for c in nc.linear),
                             tuple(tuple(c * (-5 * I) for c in row) for row in nc.quadratic))
    assert scaled.contains(v) == nc.contains(v)


def test_symbolic_null_cone_forms():
    linear, quadratic, report = rw.symbolic_null_cone()
    assert report.passed
    R = PolynomialRing(rw.COMPLEX_COORDS + rw.A_NAMES + ("zeta",), ("zeta",))
    assert quadratic == R("a00*a11 - a01*a10")
    assert linear == R("b + y11*a00 - y10*a01 + y01*a10 - y00*a11")


# --- Heisenberg ------------------------------------------------------------

def test_heisenberg_report(heisenberg):
    report = rw.verify_heisenberg(heisenberg)
    assert report.passed
    assert report["dtheta = -2(theta^14 - theta^23)"].passed


def test_displayed_phi_sign():
    report = rw.displayed_phi_report()
    assert report.passed


def test_heisenberg_phi_is_diagonal(heisenberg):
    diag = [heisenberg.phi[i][i] for i in range(5)]
    assert diag == [0, I, I, -I, -I]


# --- real slice ------------------------------------------------------------

def test_real_slice_report(real_slice):
    assert rw.verify_real_slice(real_slice).passed


def test_real_slice_theta_pullback():
    th = {k: v * rw.THETA_SCALE for k, v in rw.contact_form_coordinates().items()}
    pulled = rw.pullback_one_form(th, rw.real_slice_inclusion(), rw.REAL_COORDS)
    R = PolynomialRing(rw.REAL_COORDS)
    assert pulled == {"x1": R("x2"), "x2": R("-x1"), "x3": R("-x4"), "x4": R("x3"), "s": R.const(1)}


def test_pushforward_matrix():
    assert rw.verify_pushforward_matrix().passed
    P = rw.pushforward_matrix()
    assert P[0][0] == -2 * I
    assert (P[1][1], P[4][1]) == (1, 1)
    assert (P[1][2], P[4][2]) == (I, -I)


def test_curvature_table(real_slice):
    geometry = real_slice.geometry
    report = rw.verify_curvature_table(geometry)
    assert report.passed, report.failures()
    table = rw.expected_curvature_table()
    assert table[(1, 2, 1, 2)] == -3 and table[(4, 3, 4, 3)] == -3
    assert geometry.curvature.nonzero_components() == {k: v for k, v in table.items()}


def test_ricci_and_scalar(real_slice):
    assert rw.verify_ricci_scalar(real_slice.geometry).passed


def test_itoh_conditions(real_slice):
    report = rw.verify_itoh_conditions(real_slice.geometry)
    assert report.passed
    assert len([c for c in report.checks if c.name.startswith("W1")]) == 6


def test_itoh_conditions_from_data_file():
    geometry = load_geometry(DATA_DIR / "real_slice.json")
    assert rw.verify_itoh_conditions(geometry).passed


def test_standard_form():
    report = rw.standard_form_check()
    assert report.passed
    assert report["ds coefficient"].expected == "2"


# --- CR image ---------------------------------------------------------------

def test_cr_origin():
    p = rw.eta_map(rw.real_slice_line(0, 0, 0, 0, 0), 0)
    assert p == rw.ChartPoint("W", (0, 0, 0, 0))
    assert rw.cr_image_membership(p)


def test_cr_suite():
    result = rw.run_cr_suite(100, 7)
    assert result == {"count": 100, "on_image": 100, "perturbed_off_image": 100}


@settings(max_examples=40)
@given(st.lists(q, min_size=5, max_size=5), cq)
def test_cr_equation_float_oracle(pt, z):
    """Evaluate the image equation in floating point from an independent parametrisation."""
    x1, x2, x3, x4, s = (float(v) for v in pt)
    zf = complex(z)
    y00, y01, y10, y11 = complex(x1, x2), complex(-x3, x4), complex(x3, x4), complex(x1, -x2)
    t = -2j * s
    w0, w1 = y00 + zf * y01, y10 + zf * y11
    w2 = t - (w0 * y11 + y01 * w1)
    lhs = w2.real
    rhs = (abs(w1) ** 2 - abs(w0) ** 2 - 2 * (w0 * w1 * zf.conjugate()).real) / (1 + abs(zf) ** 2)
    assert cmath.isclose(lhs, rhs, abs_tol=1e-7 * (1 + abs(rhs)))
    assert rw.cr_image_membership(rw.eta_map(rw.real_slice_line(*pt), z))


def test_cr_requires_w_chart():
    with pytest.raises(ValueError):
        rw.cr_image_defect(rw.ChartPoint("W~", (0, 0, 0, 0)))


# --- patching comparison and product ---------------------------------------

def test_gundry_comparison():
    report = rw.gundry_comparison()
    assert report.passed
    assert report["phi_0,0 = 2 y11"].passed and report["phi_0,1 = 2 y01"].passed
    assert report["theta_1 - theta = 0"].passed


def test_product_example():
    report = rw.product_example()
    assert report.passed
    assert report["contact-form condition fails"].passed


def test_random_seeded_pairs_use_every_kind():
    kinds = {k for _, _, k in rw.random_incidence_pairs(10, 0)}
    assert kinds == {"generic", "rank1_incident", "rank1_random", "infinity", "t_direction"}


# --- JSON encoding ---------------------------------------------------------

def test_line_and_vector_json_encoding():
    data = json.loads('{"y": [["3/4", "1/2+2/3I"], ["-I", 0]], "t": "5"}')
    x = rw.TwistorLineParams.from_dict(data)
    assert x.flat() == (Fraction(3, 4), ComplexScalar(Fraction(1, 2), Fraction(2, 3)), -I, 0, 5)
    v = rw.TangentVector5.from_dict({"a": [["1", "0"], ["0", "-2/7I"]], "b": "1+I"})
    assert v.b == 1 + I and v.a[1][1] == ComplexScalar(0, Fraction(-2, 7))


@settings(max_examples=50)
@given(st.lists(cq, min_size=5, max_size=5))
def test_line_and_vector_json_round_trip(params):
    x = line(*params)
    assert rw.TwistorLineParams.from_dict(json.loads(json.dumps(x.to_dict()))) == x
    v = vec(*params)
    assert rw.TangentVector5.from_dict(json.loads(json.dumps(v.to_dict()))) == v
