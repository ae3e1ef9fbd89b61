import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistor_lab import ren_wang_twistor as rw
from twistor_lab.contact_structures import (
    AlmostContactData,
    InvalidParameters,
    TransformParameters,
    ZeroOneForm,
    contact_volume,
    equivalent_transform,
    exterior_derivative_one_form,
    is_contact_metric,
    is_k_contact,
    load_structure,
    nabla_xi,
    same_equivalence_class,
    verify_axioms,
)
from twistor_lab.exact_algebra import I, ComplexScalar, NotInvertible
from twistor_lab.frame_geometry import DATA_DIR

AXIOMS = (
    "rank phi = 2n",
    "phi(xi) = 0",
    "theta(phi X) = 0",
    "phi^2 = -id + theta (x) xi",
    "theta(xi) = 1",
    "theta = g(., xi)",
    "g(phi X, phi Y) = g(X, Y) - theta(X) theta(Y)",
)

nonzero_q = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda q: q != 0)
q = st.fractions(min_value=-9, max_value=9, max_denominator=9)

HEISENBERG = rw.heisenberg_structure()


def _coordinate_dtheta(structure, theta_coords):
    """Oracle: (d theta)_{mu nu} = d_mu theta_nu - d_nu theta_mu, contracted with the frame."""
    frame = structure.geometry.frame
    coords = frame.coordinates
    ring = frame.ring
    n = len(coords)
    dcoord = [[ring(theta_coords[nu]).differentiate(coords[mu]) - ring(theta_coords[mu]).differentiate(coords[nu])
               for nu in range(n)] for mu in range(n)]
    M = frame.component_matrix()
    return [[sum((M[i][mu] * M[j][nu] * dcoord[mu][nu] for mu in range(n) for nu in range(n)), ring.zero())
             for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("name", ["heisenberg", "real_slice"])
def test_examples_satisfy_all_axioms(name, request):
    a = request.getfixturevalue(name)
    report = verify_axioms(a)
    assert [c.name for c in report.checks] == list(AXIOMS)
    assert report.passed


def test_zero_phi_breaks_phi_squared(heisenberg):
    zero = [[0] * 5 for _ in range(5)]
    broken = AlmostContactData(heisenberg.geometry, zero, heisenberg.xi, heisenberg.theta)
    report = verify_axioms(broken)
    assert not report["phi^2 = -id + theta (x) xi"].passed
    assert not report["rank phi = 2n"].passed
    assert report["phi(xi) = 0"].passed


def test_exterior_derivative_matches_coordinate_formula(heisenberg, real_slice):
    th = rw.contact_form_coordinates()
    d = exterior_derivative_one_form(heisenberg.theta, heisenberg.geometry)
    oracle = _coordinate_dtheta(heisenberg, [th[c] for c in rw.COMPLEX_COORDS])
    assert all(d[i, j] == oracle[i][j] for i in range(5) for j in range(5))
    assert d[1, 4] == -2 and d[2, 3] == 2
    coframe0 = real_slice.geometry.frame.coframe[0]
    d = exterior_derivative_one_form(real_slice.theta, real_slice.geometry)
    oracle = _coordinate_dtheta(real_slice, coframe0)
    assert all(d[i, j] == oracle[i][j] for i in range(5) for j in range(5))
    # constant coefficients equal to minus the commutation coefficients onto e0
    c = real_slice.geometry.commutators
    assert all(d[i, j] == -c[i, j, 0] for i in range(5) for j in range(5))


def test_dt_on_product_is_closed():
    a = rw.product_structure()
    d = exterior_derivative_one_form(a.theta, a.geometry)
    assert all(x.is_zero() for x in d.flat)


@pytest.mark.parametrize("name", ["heisenberg", "real_slice"])
def test_examples_are_k_contact(name, request):
    a = request.getfixturevalue(name)
    assert is_contact_metric(a).passed
    assert is_k_contact(a).passed


def test_contact_volume_is_nonzero(heisenberg):
    assert not contact_volume(heisenberg).is_zero()


def test_nabla_xi_is_minus_phi(heisenberg, real_slice):
    for a in (heisenberg, real_slice):
        N = nabla_xi(a)
        assert all(N[i][j] == -a.phi[i][j] for i in range(5) for j in range(5))


def test_product_fails_contact_but_xi_is_killing():
    a = rw.product_structure()
    report = is_contact_metric(a)
    assert not report["theta ^ dtheta ^ dtheta != 0"].passed
    k = is_k_contact(a)
    assert k["xi is Killing"].passed and not k["contact metric"].passed and not k.passed


def test_displayed_phi_sign_only_matches_with_reversed_identity():
    report = rw.displayed_phi_report()
    assert report.passed


def test_identity_transform(heisenberg):
    b = equivalent_transform(heisenberg, TransformParameters(1, 1, [0] * 5))
    assert (b.phi, b.xi, b.theta, b.g) == (heisenberg.phi, heisenberg.xi, heisenberg.theta, heisenberg.g)


def test_transform_example_passes_axioms(heisenberg):
    b = equivalent_transform(heisenberg, TransformParameters(2, 3, [0, 1, 0, 0, 0]))
    assert verify_axioms(b).passed
    assert b.theta_of(b.xi) == 1
    assert b.theta[0] == 2 and b.xi[1] == 1 and b.xi[0] == Fraction(1, 2)


@settings(max_examples=30, deadline=None)
@given(nonzero_q, nonzero_q, st.lists(st.tuples(q, q), min_size=4, max_size=4))
def test_transform_closure(f, F, x0):
    X0 = [0] + [ComplexScalar(re, im) for re, im in x0]
    b = equivalent_transform(HEISENBERG, TransformParameters(f, F, X0))
    assert verify_axioms(b).passed
    assert b.theta_of(b.xi) == 1


@settings(max_examples=15, deadline=None)
@given(nonzero_q, nonzero_q, st.lists(st.tuples(q, q), min_size=4, max_size=4))
def test_equivalence_recovers_the_witness(f, F, x0):
    a = HEISENBERG
    X0 = (ComplexScalar(0),) + tuple(ComplexScalar(re, im) for re, im in x0)
    b = equivalent_transform(a, TransformParameters(f, F, X0))
    decision = same_equivalence_class(a, b)
    assert decision.equivalent
    w = decision.witness
    assert w.f == f and w.F == F and tuple(w.X0) == X0


def test_inverse_transform_recovers_theta(heisenberg):
    b = equivalent_transform(heisenberg, TransformParameters(Fraction(3, 2), 5, [0, 1, I, 0, 2]))
    c = equivalent_transform(b, TransformParameters(Fraction(2, 3), 1, [0] * 5))
    assert c.theta == heisenberg.theta
    assert same_equivalence_class(heisenberg, c).equivalent


def test_same_structure_witness_is_trivial(heisenberg):
    decision = same_equivalence_class(heisenberg, heisenberg)
    assert decision.equivalent
    assert decision.witness.f == 1 and decision.witness.F == 1 and all(x == 0 for x in decision.witness.X0)


def test_dt_structure_is_not_equivalent(heisenberg):
    dt = heisenberg.geometry.frame.one_form_components([0, 0, 0, 0, 1])
    other = AlmostContactData(heisenberg.geometry, heisenberg.phi, heisenberg.xi, dt)
    assert not same_equivalence_class(heisenberg, other).equivalent


def test_zero_theta_raises(heisenberg):
    zero = AlmostContactData(heisenberg.geometry, heisenberg.phi, heisenberg.xi, [0] * 5)
    with pytest.raises(ZeroOneForm):
        same_equivalence_class(zero, heisenberg)


def test_invalid_parameters(heisenberg):
    with pytest.raises(InvalidParameters):
        equivalent_transform(heisenberg, TransformParameters(1, 1, [1, 0, 0, 0, 0]))
    with pytest.raises(InvalidParameters):
        equivalent_transform(heisenberg, TransformParameters(0, 1, [0] * 5))


def test_non_constant_f_needs_pointwise_mode(heisenberg):
    ring = heisenberg.ring
    f = ring("1 + y00^2")
    with pytest.raises(NotInvertible):
        equivalent_transform(heisenberg, TransformParameters(f, 1, [0] * 5))
    point = {"y00": 2, "y01": 1, "y10": -1, "y11": 3, "t": 0}
    b = equivalent_transform(heisenberg, TransformParameters(f, 1, [0] * 5), at=point)
    assert b.theta[0] == 5
    assert verify_axioms(b).passed


def test_structure_files_match_builtins(heisenberg, real_slice):
    for path, ref in (("heisenberg.json", heisenberg), ("real_slice.json", real_slice)):
        a = load_structure(DATA_DIR / path)
        assert (a.phi, a.xi, a.theta, a.g) == (ref.phi, ref.xi, ref.theta, ref.g)


@pytest.mark.parametrize("seed", range(3))
def test_rank_of_phi_for_transformed_structures(seed, heisenberg):
    rng = random.Random(seed)
    X0 = [0] + [ComplexScalar(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(4)]
    b = equivalent_transform(heisenberg, TransformParameters(rng.randint(1, 5), rng.randint(1, 5), X0))
    assert verify_axioms(b)["rank phi = 2n"].passed
