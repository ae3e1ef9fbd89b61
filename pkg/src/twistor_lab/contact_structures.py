"""Almost contact, contact metric and K-contact structures in frame components.

A structure is stored as frame components over a ``FrameGeometry``:
``phi[i][j]`` is ``phi^i_j`` (so ``phi(e_j) = phi^i_j e_i``), ``xi[i]`` the
components of the Reeb candidate, ``theta[i] = theta(e_i)`` and the metric is
the geometry's ``g_{ij} = g(e_i, e_j)``.  Every identity is checked on the
frame fields, which is equivalent to checking it for arbitrary vector fields
because all of them are tensorial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from .exact_algebra import FieldElement, NotInvertible, PolynomialRing, is_zero
from .forms import one_form, two_form_from_matrix, wedge
from .frame_geometry import (
    FrameGeometry,
    MetricComponents,
    _parse_entry,
    geometry_from_dict,
    numeric_rank,
    object_array,
)
from .reports import Report


class InvalidParameters(ValueError):
    pass


class ZeroOneForm(ValueError):
    pass


Matrix = Tuple[Tuple[FieldElement, ...], ...]


def _mat(rows, ring: PolynomialRing) -> Matrix:
    return tuple(tuple(ring(x) for x in row) for row in rows)


def _vec(values, ring: PolynomialRing) -> Tuple[FieldElement, ...]:
    return tuple(ring(x) for x in values)


@dataclass(frozen=True)
class AlmostContactData:
    """The quadruple ``(phi, xi, theta, g)`` in the frame of ``geometry``."""

    geometry: FrameGeometry
    phi: Matrix
    xi: Tuple[FieldElement, ...]
    theta: Tuple[FieldElement, ...]
    name: str = "structure"

    def __post_init__(self):
        ring = self.ring
        object.__setattr__(self, "phi", _mat(self.phi, ring))
        object.__setattr__(self, "xi", _vec(self.xi, ring))
        object.__setattr__(self, "theta", _vec(self.theta, ring))
        n = self.dimension
        if len(self.phi) != n or any(len(r) != n for r in self.phi) or len(self.xi) != n or len(self.theta) != n:
            raise ValueError("structure components do not match the frame dimension")

    @property
    def ring(self) -> PolynomialRing:
        return self.geometry.frame.ring

    @property
    def dimension(self) -> int:
        return self.geometry.dimension

    @property
    def g(self) -> Matrix:
        return self.geometry.metric.g

    def with_metric(self, g_rows) -> "AlmostContactData":
        geometry = FrameGeometry(self.geometry.frame, MetricComponents(_mat(g_rows, self.ring)), self.geometry.name)
        return replace(self, geometry=geometry)

    # small linear-algebra helpers --------------------------------------------
    def phi_of(self, v: Sequence) -> List[FieldElement]:
        n = self.dimension
        return [sum((self.phi[i][j] * v[j] for j in range(n)), self.ring.zero()) for i in range(n)]

    def theta_of(self, v: Sequence) -> FieldElement:
        return sum((self.theta[i] * v[i] for i in range(self.dimension)), self.ring.zero())

    def g_of(self, u: Sequence, v: Sequence) -> FieldElement:
        return self.geometry.metric.pair(u, v)


def _matmul(a, b, ring):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ring.zero()) for j in range(n)] for i in range(n)]


def _flatten(x, prefix=()):
    if isinstance(x, (list, tuple)):
        for k, item in enumerate(x):
            yield from _flatten(item, prefix + (k,))
    else:
        yield prefix, x


def _first_mismatch(lhs, rhs):
    for (idx, x), (_, y) in zip(_flatten(lhs), _flatten(rhs)):
        if x != y:
            return idx, x, y
    return None


def _record(report: Report, name: str, lhs, rhs, expected_text: str):
    miss = _first_mismatch(lhs, rhs)
    if miss is None:
        report.add(name, True, expected_text, expected_text)
    else:
        idx, a, b = miss
        report.add(name, False, expected_text, f"component {idx}: {a} vs {b}")


# ---------------------------------------------------------------------------
# Definitions as checks
# ---------------------------------------------------------------------------

def verify_axioms(a: AlmostContactData, points=None) -> Report:
    """The seven defining conditions of an almost contact structure."""
    n = a.dimension
    ring = a.ring
    report = Report(f"almost contact axioms for {a.name}")
    points = points if points is not None else a.geometry.sample_points()
    ranks = numeric_rank(a.phi, points)
    target = n - 1
    report.add("rank phi = 2n", all(r == target for r in ranks), str(target),
               str(target) if all(r == target for r in ranks) else f"ranks {sorted(set(ranks))}")
    zero_vec = [ring.zero()] * n
    _record(report, "phi(xi) = 0", a.phi_of(a.xi), zero_vec, "0")
    theta_phi = [a.theta_of([a.phi[i][j] for i in range(n)]) for j in range(n)]
    _record(report, "theta(phi X) = 0", theta_phi, zero_vec, "0")
    phi2 = _matmul(a.phi, a.phi, ring)
    target_phi2 = [[(-1 if i == j else 0) + a.xi[i] * a.theta[j] for j in range(n)] for i in range(n)]
    target_phi2 = [[ring(x) for x in row] for row in target_phi2]
    _record(report, "phi^2 = -id + theta (x) xi", phi2, target_phi2, "-id + theta (x) xi")
    one = a.theta_of(a.xi)
    report.add("theta(xi) = 1", one == 1, "1", str(one))
    lowered_xi = a.geometry.metric.lower(a.xi)
    _record(report, "theta = g(., xi)", list(a.theta), lowered_xi, "g(., xi)")
    g = a.g
    phit_g_phi = [[sum((a.phi[k][i] * g[k][l] * a.phi[l][j] for k in range(n) for l in range(n)
                        if not is_zero(a.phi[k][i]) and not is_zero(a.phi[l][j])), ring.zero())
                   for j in range(n)] for i in range(n)]
    rhs = [[g[i][j] - a.theta[i] * a.theta[j] for j in range(n)] for i in range(n)]
    _record(report, "g(phi X, phi Y) = g(X, Y) - theta(X) theta(Y)", phit_g_phi, rhs, "g - theta (x) theta")
    return report


def exterior_derivative_one_form(theta: Sequence[FieldElement], geometry: FrameGeometry) -> np.ndarray:
    """``d theta(e_i, e_j) = e_i(theta_j) - e_j(theta_i) - theta([e_i, e_j])``."""
    frame = geometry.frame
    c = geometry.commutators
    ring = frame.ring
    theta = [ring(t) for t in theta]
    n = frame.dimension
    d = object_array((n, n))
    for i in range(n):
        d[i, i] = ring.zero()
        for j in range(i + 1, n):
            v = frame.apply(i, theta[j]) - frame.apply(j, theta[i])
            for k in range(n):
                if not is_zero(c[i, j, k]):
                    v = v - c[i, j, k] * theta[k]
            d[i, j] = v
            d[j, i] = -v
    return d


def contact_volume(a: AlmostContactData):
    """The coefficient of ``theta^0 ^ ... ^ theta^4`` in ``theta ^ dtheta ^ dtheta``."""
    dtheta = two_form_from_matrix(exterior_derivative_one_form(a.theta, a.geometry))
    top = wedge(wedge(one_form(a.theta), dtheta), dtheta)
    return top.get(tuple(range(a.dimension)), a.ring.zero())


def is_contact_metric(a: AlmostContactData, points=None) -> Report:
    """Contact form, Reeb field, and ``g(X, phi Y) = 1/2 dtheta(X, Y)``."""
    n = a.dimension
    ring = a.ring
    report = Report(f"contact metric conditions for {a.name}")
    axioms = verify_axioms(a, points)
    report.add("almost contact axioms", axioms.passed, "all hold",
               "all hold" if axioms.passed else ", ".join(c.name for c in axioms.failures()))
    points = points if points is not None else a.geometry.sample_points()
    vol = contact_volume(a)
    nonzero = [not vol.evaluate(pt).is_zero() for pt in points]
    report.add("theta ^ dtheta ^ dtheta != 0", all(nonzero), "nonzero at sample points", str(vol))
    dtheta = exterior_derivative_one_form(a.theta, a.geometry)
    report.add("theta(xi) = 1", a.theta_of(a.xi) == 1, "1", str(a.theta_of(a.xi)))
    ixi = [sum((a.xi[i] * dtheta[i, j] for i in range(n)), ring.zero()) for j in range(n)]
    _record(report, "dtheta(xi, .) = 0", ixi, [ring.zero()] * n, "0")
    g = a.g
    g_phi = [[sum((g[i][k] * a.phi[k][j] for k in range(n)), ring.zero()) for j in range(n)] for i in range(n)]
    half_d = [[dtheta[i, j] * Fraction(1, 2) for j in range(n)] for i in range(n)]
    _record(report, "g(X, phi Y) = dtheta(X, Y)/2", g_phi, half_d, "dtheta/2")
    return report


def nabla_xi(a: AlmostContactData) -> List[List[FieldElement]]:
    """``N[k][i]``: the ``e_k`` component of ``nabla_{e_i} xi``."""
    frame = a.geometry.frame
    gamma = a.geometry.christoffel
    n = a.dimension
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            acc = frame.apply(i, a.xi[k])
            for j in range(n):
                if not is_zero(a.xi[j]) and not is_zero(gamma[k, i, j]):
                    acc = acc + gamma[k, i, j] * a.xi[j]
            out[k][i] = acc
    return out


def killing_form(a: AlmostContactData) -> List[List[FieldElement]]:
    """``(L_xi g)(e_i, e_j) = g(nabla_i xi, e_j) + g(e_i, nabla_j xi)``."""
    N = nabla_xi(a)
    g = a.g
    n = a.dimension
    ring = a.ring
    low = [[sum((g[j][k] * N[k][i] for k in range(n)), ring.zero()) for j in range(n)] for i in range(n)]
    return [[low[i][j] + low[j][i] for j in range(n)] for i in range(n)]


def is_k_contact(a: AlmostContactData, points=None) -> Report:
    """Contact metric plus Killing Reeb field; ``nabla xi = -phi`` is checked alongside."""
    n = a.dimension
    ring = a.ring
    report = Report(f"K-contact conditions for {a.name}")
    contact = is_contact_metric(a, points)
    report.add("contact metric", contact.passed, "holds",
               "holds" if contact.passed else "not contact metric: " + ", ".join(c.name for c in contact.failures()))
    _record(report, "xi is Killing", killing_form(a), [[ring.zero()] * n for _ in range(n)], "L_xi g = 0")
    minus_phi = [[-a.phi[k][i] for i in range(n)] for k in range(n)]
    _record(report, "nabla xi = -phi", nabla_xi(a), minus_phi, "-phi")
    return report


# ---------------------------------------------------------------------------
# The equivalence transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformParameters:
    """``f`` and ``F`` nonvanishing functions, ``X0`` a field in the kernel of ``theta``."""

    f: object
    F: object
    X0: Tuple = field(default=())


def _as_field(x, ring):
    return ring(x)


def validate_parameters(a: AlmostContactData, p: TransformParameters, points=None) -> None:
    ring = a.ring
    f, F = _as_field(p.f, ring), _as_field(p.F, ring)
    X0 = [ring(x) for x in (p.X0 or [0] * a.dimension)]
    if len(X0) != a.dimension:
        raise InvalidParameters("X0 has the wrong number of components")
    if not a.theta_of(X0).is_zero():
        raise InvalidParameters("X0 must lie in the kernel of theta")
    points = points if points is not None else a.geometry.sample_points()
    for name, fn in (("f", f), ("F", F)):
        if fn.is_zero() or any(fn.evaluate(pt).is_zero() for pt in points):
            raise InvalidParameters(f"{name} vanishes at a sample point")


def equivalent_transform(a: AlmostContactData, p: TransformParameters, at: Mapping | None = None) -> AlmostContactData:
    """Apply the four transformation formulas to ``a``.

    ``f`` must be a unit of the coordinate ring (in practice a nonzero
    constant) so that ``f^-1`` is again a polynomial.  When ``at`` is given,
    every component is evaluated at that point first and the result describes
    the transformed tensors at that point only.
    """
    validate_parameters(a, p)
    ring = a.ring
    n = a.dimension
    f, F = _as_field(p.f, ring), _as_field(p.F, ring)
    X0 = [ring(x) for x in (p.X0 or [0] * n)]
    phi, xi, theta, g = a.phi, a.xi, a.theta, a.g
    if at is not None:
        ev = lambda x: ring.const(x.evaluate(at))  # noqa: E731
        f, F = ev(f), ev(F)
        X0 = [ev(x) for x in X0]
        phi = tuple(tuple(ev(x) for x in row) for row in phi)
        xi = tuple(ev(x) for x in xi)
        theta = tuple(ev(x) for x in theta)
        g = tuple(tuple(ev(x) for x in row) for row in g)
    try:
        f_inv = f.inverse()
    except NotInvertible as exc:
        raise NotInvertible("f is not invertible in the coordinate ring; pass a point to evaluate pointwise") from exc
    phi_X0 = [sum((phi[i][j] * X0[j] for j in range(n)), ring.zero()) for i in range(n)]
    new_phi = [[phi[i][j] - f * phi_X0[i] * theta[j] for j in range(n)] for i in range(n)]
    new_xi = [X0[i] + f_inv * xi[i] for i in range(n)]
    new_theta = [f * t for t in theta]
    gX0 = [sum((g[i][j] * X0[j] for j in range(n)), ring.zero()) for i in range(n)]
    gX0X0 = sum((gX0[i] * X0[i] for i in range(n)), ring.zero())
    coeff = -F + f * f + f * f * F * gX0X0
    fF = f * F
    new_g = [[F * g[i][j] - fF * gX0[i] * theta[j] - fF * theta[i] * gX0[j] + coeff * theta[i] * theta[j]
              for j in range(n)] for i in range(n)]
    geometry = FrameGeometry(a.geometry.frame, MetricComponents(_mat(new_g, ring)), a.geometry.name)
    return AlmostContactData(geometry, new_phi, new_xi, new_theta, name=f"{a.name}'")


@dataclass
class EquivalenceDecision:
    equivalent: bool
    witness: TransformParameters | None
    reason: str

    def __bool__(self):
        return self.equivalent


def same_equivalence_class(a: AlmostContactData, b: AlmostContactData) -> EquivalenceDecision:
    """Look for ``(f, F, X0)`` carrying ``a`` to ``b``; explain the first obstruction otherwise."""
    n = a.dimension
    ring = a.ring
    if b.geometry.frame.coordinates != a.geometry.frame.coordinates:
        raise ValueError("both structures must be expressed over the same frame")
    pivot = next((k for k in range(n) if not a.theta[k].is_zero()), None)
    if pivot is None:
        raise ZeroOneForm("theta of the first structure vanishes identically")
    try:
        f = b.theta[pivot].divide_exact(a.theta[pivot])
    except NotInvertible:
        return EquivalenceDecision(False, None, f"theta ratio at e{pivot} is not a polynomial")
    for k in range(n):
        if b.theta[k] != f * a.theta[k]:
            return EquivalenceDecision(False, None, f"inconsistent theta ratio at e{k}")
    if not f.is_unit():
        return EquivalenceDecision(False, None, f"ratio f = {f} is not invertible")
    f_inv = f.inverse()
    X0 = [b.xi[i] - f_inv * a.xi[i] for i in range(n)]
    if not a.theta_of(X0).is_zero():
        return EquivalenceDecision(False, None, "xi' - xi/f is not in the kernel of theta")
    proj = [[ring.const(1 if i == k else 0) - a.theta[k] * a.xi[i] for i in range(n)] for k in range(n)]
    F = None
    for i, j in product(range(n), repeat=2):
        ga = a.g_of(proj[i], proj[j])
        if ga.is_zero():
            continue
        gb = b.g_of(proj[i], proj[j])
        try:
            F = gb.divide_exact(ga)
        except NotInvertible:
            return EquivalenceDecision(False, None, "metric ratio on ker theta is not a polynomial")
        break
    if F is None or F.is_zero():
        return EquivalenceDecision(False, None, "could not determine the conformal factor F")
    witness = TransformParameters(f, F, tuple(X0))
    try:
        rebuilt = equivalent_transform(a, witness)
    except (InvalidParameters, NotInvertible) as exc:
        return EquivalenceDecision(False, None, f"candidate parameters rejected: {exc}")
    for label, x, y in (("phi", rebuilt.phi, b.phi), ("xi", rebuilt.xi, b.xi),
                        ("theta", rebuilt.theta, b.theta), ("g", rebuilt.g, b.g)):
        if _first_mismatch(x, y) is not None:
            return EquivalenceDecision(False, None, f"{label} does not match the transform with the candidate witness")
    return EquivalenceDecision(True, witness, "transform reproduces the second structure")


# ---------------------------------------------------------------------------
# Loading from files
# ---------------------------------------------------------------------------

def structure_from_dict(data: Mapping) -> AlmostContactData:
    """Geometry description plus a ``structure`` block with ``phi``, ``xi`` and ``theta``."""
    geometry = geometry_from_dict(data)
    ring = geometry.frame.ring
    block = data["structure"]
    phi = [[_parse_entry(x, ring) for x in row] for row in block["phi"]]
    xi = [_parse_entry(x, ring) for x in block["xi"]]
    theta = [_parse_entry(x, ring) for x in block["theta"]]
    return AlmostContactData(geometry, phi, xi, theta, name=data.get("name", "structure"))


def load_structure(path) -> AlmostContactData:
    with open(path, encoding="utf-8") as fh:
        return structure_from_dict(json.load(fh))
