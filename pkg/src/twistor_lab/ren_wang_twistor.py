"""The Ren-Wang twistor space and the structures it induces on C^5 and R^5.

Charts ``W`` and ``W~`` carry coordinates ``(zeta, w0, w1, w2)`` and
``(zeta^, w0^, w1^, w2^)``; they are glued along ``zeta != 0`` by
``(zeta, w0, w1, w2) -> (1/zeta, w0/zeta, w1/zeta, w2 + 2 w0 w1 / zeta)``.
Points of the parameter space are ``(y_AA', t)`` with the flattening
``i = 2A + A' + 1`` (``y00, y01, y10, y11`` are ``y^1 .. y^4``).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .contact_structures import (
    AlmostContactData,
    exterior_derivative_one_form,
    is_contact_metric,
    is_k_contact,
    verify_axioms,
)
from .exact_algebra import (
    ComplexScalar,
    FieldElement,
    I,
    ONE,
    ZERO,
    PolynomialRing,
    determinant,
    format_scalar,
    inverse_matrix,
    mat_mul,
    parse_scalar,
    rank,
)
from .forms import is_zero_form, one_form, two_form_from_matrix, wedge
from .frame_geometry import Frame, FrameGeometry, MetricComponents, curvature_symmetry_report
from .reports import Report
from .two_form_calculus import TwoFormBasis, pairing_block

Y_NAMES = ("y00", "y01", "y10", "y11")
COMPLEX_COORDS = Y_NAMES + ("t",)
REAL_COORDS = ("x1", "x2", "x3", "x4", "s")
CHART_VARS = ("zeta", "w0", "w1", "w2")
INFINITY = "infinity"


class OutOfDomain(ValueError):
    pass


class NotSplitDiagonal(ValueError):
    pass


def _c(x) -> ComplexScalar:
    return ComplexScalar.coerce(x)


# ---------------------------------------------------------------------------
# Charts and the transition map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartPoint:
    chart: str  # "W" or "W~"
    coords: Tuple[ComplexScalar, ComplexScalar, ComplexScalar, ComplexScalar]

    def __post_init__(self):
        if self.chart not in ("W", "W~"):
            raise ValueError("chart must be 'W' or 'W~'")
        object.__setattr__(self, "coords", tuple(_c(x) for x in self.coords))
        if len(self.coords) != 4:
            raise ValueError("a chart point has four coordinates")


def transition(p: ChartPoint) -> ChartPoint:
    """Move a point to the other chart (defined off ``zeta = 0`` / ``zeta^ = 0``)."""
    z, w0, w1, w2 = p.coords
    if z.is_zero():
        raise OutOfDomain("the gluing map is undefined where the fibre coordinate vanishes")
    zi = z.reciprocal()
    if p.chart == "W":
        return ChartPoint("W~", (zi, zi * w0, zi * w1, w2 + 2 * zi * w0 * w1))
    return ChartPoint("W", (zi, zi * w0, zi * w1, w2 - 2 * zi * w0 * w1))


def chart_ring() -> PolynomialRing:
    return PolynomialRing(CHART_VARS, laurent=("zeta",))


def transition_polynomials() -> Tuple[FieldElement, ...]:
    R = chart_ring()
    z, w0, w1, w2 = R.gens()
    zi = z ** -1
    return (zi, zi * w0, zi * w1, w2 + 2 * zi * w0 * w1)


def jacobian() -> List[List[FieldElement]]:
    """``J[r][c] = d(output r)/d(input c)`` for the gluing map."""
    return [[p.differentiate(v) for v in CHART_VARS] for p in transition_polynomials()]


def jacobian_on_line(line: Optional["TwistorLineParams"] = None) -> List[List[FieldElement]]:
    """The Jacobian restricted to ``C_0`` (default) or to the line of ``line``, as Laurent polynomials in zeta."""
    J = jacobian()
    if line is None:
        sub = {"w0": 0, "w1": 0, "w2": 0}
    else:
        pts = eta_polynomials_W(line)
        sub = {"w0": pts[1], "w1": pts[2], "w2": pts[3]}
    ring = PolynomialRing(("zeta",), ("zeta",))
    return [[ring(e.substitute(sub)) for e in row] for row in J]


@dataclass(frozen=True)
class NormalBundle:
    tangent_degree: int
    normal_degrees: Tuple[int, ...]

    def as_counter(self) -> Counter:
        return Counter(self.normal_degrees)


def normal_bundle_degrees(diagonal: Sequence[FieldElement], tangent_index: int = 0,
                          variable: str = "zeta") -> NormalBundle:
    """Splitting degrees from a diagonal transition matrix of monomials ``c * zeta^k``.

    A summand with transition ``zeta^k`` has degree ``-k``.  The entry at
    ``tangent_index`` belongs to the tangent bundle of the curve and is
    reported separately.
    """
    degrees = []
    for entry in diagonal:
        if not isinstance(entry, FieldElement):
            entry = PolynomialRing((variable,), (variable,)).const(entry)
        if not entry.is_monomial():
            raise NotSplitDiagonal(f"entry {entry} is not a single monomial")
        ((exp, _),) = entry.terms.items()
        used = {v: e for v, e in zip(entry.variables, exp) if e}
        if set(used) - {variable}:
            raise NotSplitDiagonal(f"entry {entry} depends on variables other than {variable}")
        degrees.append(-used.get(variable, 0))
    tangent = degrees[tangent_index]
    normal = tuple(sorted((d for k, d in enumerate(degrees) if k != tangent_index), reverse=True))
    return NormalBundle(tangent, normal)


def diagonal_entries(matrix: Sequence[Sequence[FieldElement]]) -> List[FieldElement]:
    n = len(matrix)
    for i in range(n):
        for j in range(n):
            if i != j and not matrix[i][j].is_zero():
                raise NotSplitDiagonal(f"off-diagonal entry ({i},{j}) = {matrix[i][j]}")
    return [matrix[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# Twistor lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistorLineParams:
    y: Tuple[Tuple[ComplexScalar, ComplexScalar], Tuple[ComplexScalar, ComplexScalar]]
    t: ComplexScalar

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(tuple(_c(v) for v in row) for row in self.y))
        object.__setattr__(self, "t", _c(self.t))

    @classmethod
    def origin(cls) -> "TwistorLineParams":
        return cls(((0, 0), (0, 0)), 0)

    def flat(self) -> Tuple[ComplexScalar, ...]:
        """``(y^1, y^2, y^3, y^4, t)`` with ``i = 2A + A' + 1``."""
        return (self.y[0][0], self.y[0][1], self.y[1][0], self.y[1][1], self.t)

    def assignment(self) -> Dict[str, ComplexScalar]:
        return dict(zip(COMPLEX_COORDS, self.flat()))

    def displaced(self, v: "TangentVector5") -> "TwistorLineParams":
        return TwistorLineParams(tuple(tuple(self.y[A][B] + v.a[A][B] for B in range(2)) for A in range(2)),
                                 self.t + v.b)

    def to_dict(self) -> Dict[str, object]:
        """Numbers as rational strings such as ``"3/4"`` or ``"1/2+2/3I"``."""
        return {"y": [[format_scalar(v) for v in row] for row in self.y], "t": format_scalar(self.t)}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "TwistorLineParams":
        return cls(tuple(tuple(_parse(v) for v in row) for row in data["y"]), _parse(data["t"]))


@dataclass(frozen=True)
class TangentVector5:
    a: Tuple[Tuple[ComplexScalar, ComplexScalar], Tuple[ComplexScalar, ComplexScalar]]
    b: ComplexScalar

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(tuple(_c(v) for v in row) for row in self.a))
        object.__setattr__(self, "b", _c(self.b))

    def flat(self) -> Tuple[ComplexScalar, ...]:
        return (self.a[0][0], self.a[0][1], self.a[1][0], self.a[1][1], self.b)

    def to_dict(self) -> Dict[str, object]:
        return {"a": [[format_scalar(v) for v in row] for row in self.a], "b": format_scalar(self.b)}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "TangentVector5":
        return cls(tuple(tuple(_parse(v) for v in row) for row in data["a"]), _parse(data["b"]))


def _parse(value) -> ComplexScalar:
    return parse_scalar(value) if isinstance(value, str) else _c(value)


def _pairing(w, wt):
    return w[0] * wt[1] + wt[0] * w[1]


def eta_map(line: TwistorLineParams, zeta) -> ChartPoint:
    """The point of the line over ``zeta``; ``zeta = INFINITY`` gives the ``W~`` point at ``zeta^ = 0``."""
    y, t = line.y, line.t
    if isinstance(zeta, str) and zeta == INFINITY:
        return eta_map_tilde(line, ZERO)
    z = _c(zeta)
    y0 = (y[0][0], y[1][0])
    y1 = (y[0][1], y[1][1])
    w = (y0[0] + z * y1[0], y0[1] + z * y1[1])
    return ChartPoint("W", (z, w[0], w[1], t - _pairing(w, y1)))


def eta_map_tilde(line: TwistorLineParams, zeta_hat) -> ChartPoint:
    """The same line written in ``W~``: polynomial in ``zeta^``."""
    y, t = line.y, line.t
    zh = _c(zeta_hat)
    return ChartPoint("W~", (zh, zh * y[0][0] + y[0][1], zh * y[1][0] + y[1][1],
                             t + y[0][0] * y[1][1] + y[0][1] * y[1][0] + 2 * zh * y[0][0] * y[1][0]))


def line_ring() -> PolynomialRing:
    return PolynomialRing(COMPLEX_COORDS + ("zeta",), laurent=("zeta",))


def eta_polynomials_W(line: Optional[TwistorLineParams] = None) -> Tuple[FieldElement, ...]:
    """The W-chart parametrisation, symbolic in ``(y, t, zeta)`` or in ``zeta`` alone for a given line."""
    R = line_ring()
    y00, y01, y10, y11, t, z = R.gens()
    out = (z, y00 + z * y01, y10 + z * y11, t - (y00 * y11 + y01 * y10 + 2 * z * y01 * y11))
    if line is not None:
        sub = line.assignment()
        ring = PolynomialRing(("zeta",), ("zeta",))
        out = tuple(ring(p.substitute(sub)) for p in out)
    return out


def eta_polynomials_W_tilde() -> Tuple[FieldElement, ...]:
    """The W~-chart parametrisation in terms of ``zeta^`` (named ``zeta`` here)."""
    R = line_ring()
    y00, y01, y10, y11, t, z = R.gens()
    return (z, z * y00 + y01, z * y10 + y11, t + y00 * y11 + y01 * y10 + 2 * z * y00 * y10)


def verify_chart_compatibility() -> Report:
    """The gluing map carries the W parametrisation onto the W~ one (``zeta^ = 1/zeta``)."""
    report = Report("line parametrisations agree across charts")
    w = eta_polynomials_W()
    sub = dict(zip(CHART_VARS, w))
    image = [p.substitute(sub) for p in transition_polynomials()]
    R = line_ring()
    z = R.var("zeta")
    tilde = [p.substitute({"zeta": z ** -1}) for p in eta_polynomials_W_tilde()]
    for k, (a, b) in enumerate(zip(image, tilde)):
        report.add(f"component {k}", a == b, str(b), str(a))
    for k, p in enumerate(eta_polynomials_W_tilde()):
        report.add(f"W~ component {k} is polynomial", all(e >= 0 for exp in p.terms for e in exp),
                   "no negative powers", str(p))
    return report


def translation_maps() -> Tuple[Tuple[FieldElement, ...], Tuple[FieldElement, ...]]:
    """Chart expressions of the fibre-preserving map sending ``C_0`` to ``C_(y,t)``.

    In W: ``(zeta, w) -> (zeta, w0 + y00 + zeta y01, w1 + y10 + zeta y11,
    w2 + c(zeta) - 2 y11 w0 - 2 y01 w1)``, and the matching polynomial map in W~.
    """
    R = PolynomialRing(CHART_VARS + COMPLEX_COORDS, laurent=("zeta",))
    z, w0, w1, w2, y00, y01, y10, y11, t = R.gens()
    tw = (z, w0 + y00 + z * y01, w1 + y10 + z * y11,
          w2 + t - (y00 * y11 + y01 * y10 + 2 * z * y01 * y11) - 2 * y11 * w0 - 2 * y01 * w1)
    tt = (z, w0 + z * y00 + y01, w1 + z * y10 + y11,
          w2 + t + y00 * y11 + y01 * y10 + 2 * z * y00 * y10 + 2 * y10 * w0 + 2 * y00 * w1)
    return tw, tt


def verify_translated_line(line: Optional[TwistorLineParams] = None) -> Report:
    """Show the Jacobian along ``C_(y,t)`` is conjugate to the one along ``C_0``.

    With ``A`` and ``A~`` the Jacobians of the translation maps on ``C_0`` (both
    holomorphic with determinant 1 on their charts) the identity
    ``J|C_(y,t) * A = A~(1/zeta) * J|C_0`` gives the same splitting type.  With
    ``line=None`` the identity is checked symbolically in ``(y, t)``.
    """
    tw, tt = translation_maps()
    ring = tw[0].variables
    on_c0 = {"w0": 0, "w1": 0, "w2": 0}
    A = [[p.differentiate(v).substitute(on_c0) for v in CHART_VARS] for p in tw]
    At = [[p.differentiate(v).substitute(on_c0) for v in CHART_VARS] for p in tt]
    R = PolynomialRing(ring, laurent=("zeta",))
    z = R.var("zeta")
    At_inv_zeta = [[R(e).substitute({"zeta": z ** -1}) for e in row] for row in At]
    J = jacobian()
    images = dict(zip(CHART_VARS[1:], [p.substitute(on_c0) for p in tw[1:]]))
    J_line = [[R(e).substitute(images) for e in row] for row in J]
    J0 = [[R(e).substitute(on_c0) for e in row] for row in J]
    lhs = mat_mul(J_line, [[R(e) for e in row] for row in A])
    rhs = mat_mul(At_inv_zeta, J0)
    if line is not None:
        sub = line.assignment()
        lhs = [[e.substitute(sub) for e in row] for row in lhs]
        rhs = [[e.substitute(sub) for e in row] for row in rhs]
        A = [[R(e).substitute(sub) for e in row] for row in A]
        At = [[R(e).substitute(sub) for e in row] for row in At]
    report = Report("translated line conjugation")
    ok = all(lhs[i][j] == rhs[i][j] for i in range(4) for j in range(4))
    report.add("J on line times A equals A~ times J on C0", ok, "equal", "equal" if ok else "differ")
    for name, M in (("A", A), ("A~", At)):
        det = determinant([[R(e) for e in row] for row in M])
        report.add(f"det {name} = 1", det == 1, "1", str(det))
        no_neg = all(e >= 0 for row in M for x in row for exp in R(x).terms for e in [exp[R.variables.index('zeta')]])
        report.add(f"{name} holomorphic in its chart", no_neg, "polynomial in the fibre coordinate",
                   "polynomial" if no_neg else "has poles")
    return report


# ---------------------------------------------------------------------------
# Incidence of neighbouring lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IncidenceResult:
    outcome: str  # "incident", "not_incident", "degenerate"
    witness: Union[ComplexScalar, str, None]
    det: ComplexScalar
    linear: ComplexScalar

    @property
    def meets(self) -> bool:
        return self.outcome in ("incident", "degenerate")


def incidence_conditions(x: TwistorLineParams, v: TangentVector5) -> Tuple[ComplexScalar, ComplexScalar]:
    """``(det a, b - y00 a11 - y10 a01 + y01 a10 + y11 a00)``."""
    a, y, b = v.a, x.y, v.b
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    lin = b - y[0][0] * a[1][1] - y[1][0] * a[0][1] + y[0][1] * a[1][0] + y[1][1] * a[0][0]
    return det, lin


def incidence(x: TwistorLineParams, v: TangentVector5) -> IncidenceResult:
    """Decide whether the lines of ``x`` and ``x + v`` meet, with a witness in CP^1."""
    det, lin = incidence_conditions(x, v)
    a = v.a
    if all(a[i][j].is_zero() for i in range(2) for j in range(2)):
        if v.b.is_zero():
            return IncidenceResult("degenerate", None, det, lin)
        return IncidenceResult("not_incident", None, det, lin)
    if not det.is_zero() or not lin.is_zero():
        return IncidenceResult("not_incident", None, det, lin)
    if not a[0][1].is_zero():
        zeta = -a[0][0] / a[0][1]
    elif not a[1][1].is_zero():
        zeta = -a[1][0] / a[1][1]
    else:
        zeta = INFINITY
    return IncidenceResult("incident", zeta, det, lin)


def intersection_point_agrees(x: TwistorLineParams, v: TangentVector5, result: IncidenceResult) -> bool:
    """The witness really is a common point of both lines (exact)."""
    if result.outcome != "incident":
        return True
    return eta_map(x, result.witness) == eta_map(x.displaced(v), result.witness)


def numeric_incidence_oracle(x: TwistorLineParams, v: TangentVector5, tol: float = 1e-9) -> str:
    """Independent floating-point search for a common point in both charts.

    Every component of ``eta(x + v, zeta) - eta(x, zeta)`` is affine in
    ``zeta``; the oracle reads off the two coefficients numerically, looks for a
    common root in W, and separately tests ``zeta^ = 0`` in W~.  Returns
    ``"incident"``, ``"not_incident"`` or ``"degenerate"`` (meets everywhere).
    """
    y = [complex(c) for c in x.flat()]
    d = [complex(c) for c in x.displaced(v).flat()]

    def eta_f(p, z):
        y00, y01, y10, y11, t = p
        return (y00 + z * y01, y10 + z * y11, t - (y00 * y11 + y01 * y10 + 2 * z * y01 * y11))

    def eta_tilde_f(p, zh):
        y00, y01, y10, y11, t = p
        return (zh * y00 + y01, zh * y10 + y11, t + y00 * y11 + y01 * y10 + 2 * zh * y00 * y10)

    diff0 = [u - w for u, w in zip(eta_f(d, 0), eta_f(y, 0))]
    diff1 = [u - w for u, w in zip(eta_f(d, 1), eta_f(y, 1))]
    coeffs = [(c0, c1 - c0) for c0, c1 in zip(diff0, diff1)]
    scale = 1.0 + max(abs(c) for pair in coeffs for c in pair)
    small = lambda z: abs(z) <= tol * scale  # noqa: E731
    if all(small(c0) and small(c1) for c0, c1 in coeffs):
        return "degenerate"
    candidates = [-c0 / c1 for c0, c1 in coeffs if not small(c1)]
    found = False
    for z in candidates:
        zscale = scale * (1.0 + abs(z))
        if all(abs(c0 + c1 * z) <= tol * zscale for c0, c1 in coeffs):
            found = True
            break
    if not candidates and all(small(c0) for c0, _ in coeffs):
        found = True
    if not found:
        at_infinity = [u - w for u, w in zip(eta_tilde_f(d, 0), eta_tilde_f(y, 0))]
        found = all(small(c) for c in at_infinity)
    return "incident" if found else "not_incident"


def _rand_q(rng: random.Random, bound: int = 50) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _rand_c(rng: random.Random, complex_part: bool) -> ComplexScalar:
    return ComplexScalar(_rand_q(rng), _rand_q(rng) if complex_part else 0)


def random_incidence_pairs(count: int, seed: int) -> List[Tuple[TwistorLineParams, TangentVector5, str]]:
    """Seeded mix of generic pairs and pairs forced onto ``det a = 0``.

    Categories cycle through: generic, rank-one ``a`` with the linear condition
    imposed, rank-one ``a`` with random ``b``, rank-one ``a`` meeting only at
    infinity, and the zero vector/pure ``t`` direction.  Every input has
    numerators and denominators bounded by 50.
    """
    rng = random.Random(seed)
    kinds = ["generic", "rank1_incident", "rank1_random", "rank1_incident", "infinity", "generic",
             "rank1_random", "rank1_incident", "generic", "t_direction"]
    out = []
    for n in range(count):
        kind = kinds[n % len(kinds)]
        cplx = rng.random() < 0.5
        x = TwistorLineParams(((_rand_c(rng, cplx), _rand_c(rng, cplx)), (_rand_c(rng, cplx), _rand_c(rng, cplx))),
                              _rand_c(rng, cplx))
        if kind == "generic":
            a = ((_rand_c(rng, cplx), _rand_c(rng, cplx)), (_rand_c(rng, cplx), _rand_c(rng, cplx)))
            b = _rand_c(rng, cplx)
        elif kind == "infinity":
            a = ((_rand_c(rng, cplx), ZERO), (_rand_c(rng, cplx), ZERO))
            b = ZERO
        elif kind == "t_direction":
            a = ((ZERO, ZERO), (ZERO, ZERO))
            b = ZERO if rng.random() < 0.5 else _rand_c(rng, cplx)
        else:
            # rank one: a_{AA'} = u_A * w_{A'}; small factors keep the bound
            u = (_rand_small(rng), _rand_small(rng))
            w = (_rand_small(rng), _rand_small(rng))
            a = ((u[0] * w[0], u[0] * w[1]), (u[1] * w[0], u[1] * w[1]))
            b = _rand_c(rng, cplx)
        v = TangentVector5(a, b)
        if kind in ("rank1_incident", "infinity"):
            _, lin = incidence_conditions(x, v)
            v = TangentVector5(a, v.b - lin)
        out.append((x, v, kind))
    return out


def _rand_small(rng: random.Random) -> ComplexScalar:
    return ComplexScalar(Fraction(rng.randint(-7, 7), rng.randint(1, 7)))


def run_incidence_suite(count: int = 1000, seed: int = 42, tol: float = 1e-9) -> Dict[str, object]:
    pairs = random_incidence_pairs(count, seed)
    agree = 0
    forced = 0
    disagreements = []
    point_failures = 0
    outcomes = Counter()
    for x, v, kind in pairs:
        exact = incidence(x, v)
        if exact.det.is_zero():
            forced += 1
        outcomes[exact.outcome] += 1
        oracle = numeric_incidence_oracle(x, v, tol)
        if oracle == exact.outcome:
            agree += 1
        else:
            disagreements.append((x, v, exact.outcome, oracle))
        if not intersection_point_agrees(x, v, exact):
            point_failures += 1
    return {"count": count, "agree": agree, "det_zero": forced, "outcomes": dict(outcomes),
            "disagreements": disagreements, "point_failures": point_failures}


# ---------------------------------------------------------------------------
# Null cone recovery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NullConeData:
    """``linear[k]`` is the coefficient of ``d(COMPLEX_COORDS[k])``; ``quadratic`` is 5x5 symmetric."""

    linear: Tuple[ComplexScalar, ...]
    quadratic: Tuple[Tuple[ComplexScalar, ...], ...]

    def quadratic_rank(self) -> int:
        return rank([list(r) for r in self.quadratic])

    def contains(self, v: TangentVector5) -> bool:
        vec = v.flat()
        lin = sum((c * x for c, x in zip(self.linear, vec)), ZERO)
        quad = sum((self.quadratic[i][j] * vec[i] * vec[j] for i in range(5) for j in range(5)), ZERO)
        return lin.is_zero() and quad.is_zero()


A_NAMES = ("a00", "a01", "a10", "a11", "b")


def _displacement_ring() -> PolynomialRing:
    return PolynomialRing(COMPLEX_COORDS + A_NAMES + ("zeta",), laurent=("zeta",))


def symbolic_null_cone() -> Tuple[FieldElement, FieldElement, Report]:
    """Derive the linear and quadratic conditions from the line parametrisation itself.

    Returns ``(linear, quadratic, report)`` as polynomials in ``y, t, a, b``.
    The quadratic condition is the resultant of the first two displacement
    components; the linear one is the third component restricted to their
    common root, rewritten without ``zeta``.
    """
    R = _displacement_ring()
    g = dict(zip(R.variables, R.gens()))
    z = g["zeta"]
    base = eta_polynomials_W()
    shifted = {n: g[n] + g[a] for n, a in zip(Y_NAMES, A_NAMES[:4])}
    shifted["t"] = g["t"] + g["b"]
    diff = [R(p).substitute(shifted) - R(p) for p in base[1:]]
    # resultant of the two affine equations c0 + zeta c1
    c = [d.coefficients(("zeta",)) for d in diff[:2]]
    get = lambda m, k: m.get((k,), R.zero())  # noqa: E731
    quadratic = R(get(c[0], 0)) * R(get(c[1], 1)) - R(get(c[0], 1)) * R(get(c[1], 0))
    on_locus = {"a00": -z * g["a01"], "a10": -z * g["a11"]}
    third = diff[2].substitute(on_locus)
    parts = third.coefficients(("zeta",))
    linear = R.zero()
    for (k,), coeff in parts.items():
        coeff = R(coeff)
        if k == 0:
            linear = linear + coeff
        elif k == 1:
            # zeta * a01 = -a00 and zeta * a11 = -a10 on the locus
            linear = linear + coeff.substitute({"a01": -g["a00"], "a11": -g["a10"]})
        else:
            raise AssertionError("displacement is affine in zeta")
    report = Report("null cone derivation")
    report.add("linear condition reproduces the restricted displacement",
               R(linear).substitute(on_locus) == third, str(third), str(R(linear).substitute(on_locus)))
    report.add("third displacement has no quadratic terms on the locus", third.degree("zeta") <= 1, "<= 1",
               str(third.degree("zeta")))
    return R(linear), R(quadratic), report


def recover_null_cone(x: TwistorLineParams) -> NullConeData:
    linear, quadratic, _ = symbolic_null_cone()
    sub = x.assignment()
    lin = linear.substitute(sub)
    coeffs = []
    for name in A_NAMES:
        d = lin.differentiate(name)
        coeffs.append(d.constant_value())
    Q = [[ZERO] * 5 for _ in range(5)]
    for i, ni in enumerate(A_NAMES):
        for j, nj in enumerate(A_NAMES):
            second = quadratic.differentiate(ni).differentiate(nj)
            Q[i][j] = second.constant_value() * Fraction(1, 2)
    return NullConeData(tuple(coeffs), tuple(tuple(r) for r in Q))


# ---------------------------------------------------------------------------
# The complex Heisenberg structure
# ---------------------------------------------------------------------------

def heisenberg_frame() -> Frame:
    R = PolynomialRing(COMPLEX_COORDS)
    y00, y01, y10, y11, t = R.gens()
    basis = (
        {"t": 1},
        {"y00": 1, "t": -y11},
        {"y01": 1, "t": y10},
        {"y10": 1, "t": -y01},
        {"y11": 1, "t": y00},
    )
    return Frame(COMPLEX_COORDS, basis)


def contact_form_coordinates() -> Dict[str, FieldElement]:
    """``theta = dt + y11 dy00 - y10 dy01 + y01 dy10 - y00 dy11`` as coordinate coefficients."""
    R = PolynomialRing(COMPLEX_COORDS)
    y00, y01, y10, y11, t = R.gens()
    return {"y00": y11, "y01": -y10, "y10": y01, "y11": -y00, "t": R.const(1)}


def degenerate_metric_coordinates() -> List[List[ComplexScalar]]:
    """``g0 = -2i (dy00 dy11 - dy01 dy10)`` with the symmetrised product."""
    G = [[ZERO] * 5 for _ in range(5)]
    G[0][3] = G[3][0] = -I
    G[1][2] = G[2][1] = I
    return G


def _bilinear_to_frame(frame: Frame, G) -> List[List[FieldElement]]:
    ring = frame.ring
    M = frame.component_matrix()
    n = len(M)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero()
            for c in range(n):
                if M[i][c].is_zero():
                    continue
                for d in range(n):
                    if M[j][d].is_zero() or _is_zero_entry(G[c][d]):
                        continue
                    acc = acc + M[i][c] * M[j][d] * G[c][d]
            row.append(acc)
        out.append(row)
    return out


def _is_zero_entry(x) -> bool:
    return x.is_zero()


def heisenberg_coordinate_metric() -> List[List[FieldElement]]:
    """``g = theta^2 + g0`` in coordinate components."""
    R = PolynomialRing(COMPLEX_COORDS)
    th = contact_form_coordinates()
    vec = [th[c] for c in COMPLEX_COORDS]
    G0 = degenerate_metric_coordinates()
    return [[vec[i] * vec[j] + R.const(G0[i][j]) for j in range(5)] for i in range(5)]


def displayed_phi() -> List[List[ComplexScalar]]:
    """The sign convention for phi as commonly displayed: ``diag(0, -i, -i, i, i)``."""
    return [[I * d if i == j else ZERO for j, _ in enumerate(range(5))] for i, d in enumerate((0, -1, -1, 1, 1))]


def heisenberg_structure() -> AlmostContactData:
    """The complex K-contact structure on C^5 in the frame ``e_0 = d/dt, e_1 .. e_4``.

    ``phi`` is ``diag(0, i, i, -i, -i)``: the sign is fixed by requiring
    ``g(X, phi Y) = dtheta(X, Y)/2`` with ``dtheta(X, Y) = X theta(Y) -
    Y theta(X) - theta([X, Y])``.
    """
    frame = heisenberg_frame()
    ring = frame.ring
    theta_frame = frame.one_form_components([contact_form_coordinates()[c] for c in COMPLEX_COORDS])
    g_frame = _bilinear_to_frame(frame, heisenberg_coordinate_metric())
    metric = MetricComponents(tuple(tuple(ring(x) for x in row) for row in g_frame))
    geometry = FrameGeometry(frame, metric, "complex Heisenberg")
    xi = frame.to_frame_components([0, 0, 0, 0, 1])  # d/dt
    phi = [[-x for x in row] for row in displayed_phi()]
    return AlmostContactData(geometry, phi, xi, theta_frame, name="complex Heisenberg")


def verify_heisenberg(structure: Optional[AlmostContactData] = None) -> Report:
    a = structure or heisenberg_structure()
    report = Report("complex Heisenberg structure")
    report.extend(verify_axioms(a), "axioms/")
    report.extend(is_contact_metric(a), "contact-metric/")
    report.extend(is_k_contact(a), "k-contact/")
    d = exterior_derivative_one_form(a.theta, a.geometry)
    expected = {(1, 4): -2, (2, 3): 2}
    actual = two_form_from_matrix(d)
    ok = set(actual) == set(expected) and all(actual[k] == v for k, v in expected.items())
    report.add("dtheta = -2(theta^14 - theta^23)", ok, "{(1,4): -2, (2,3): 2}",
               "{" + ", ".join(f"{k}: {v}" for k, v in actual.items()) + "}")
    c = a.geometry.commutators.nonzero()
    report.add("[e1,e4] = 2 e0", c.get((1, 4, 0)) == 2, "2", str(c.get((1, 4, 0))))
    report.add("[e2,e3] = -2 e0", c.get((2, 3, 0)) == -2, "-2", str(c.get((2, 3, 0))))
    report.add("only these brackets", set(c) == {(1, 4, 0), (4, 1, 0), (2, 3, 0), (3, 2, 0)},
               "4 nonzero", str(len(c)))
    g_t_free = all(x.differentiate("t").is_zero() for row in a.g for x in row)
    report.add("metric components independent of t", g_t_free, "True", str(g_t_free))
    return report


def displayed_phi_report() -> Report:
    """The displayed sign of phi satisfies the algebraic axioms but the compatibility identity only up to sign."""
    a = heisenberg_structure()
    flipped = AlmostContactData(a.geometry, displayed_phi(), a.xi, a.theta, name="displayed phi")
    axioms = verify_axioms(flipped)
    contact = is_contact_metric(flipped)
    n = 5
    d = exterior_derivative_one_form(a.theta, a.geometry)
    g = a.g
    g_phi = [[sum((g[i][k] * flipped.phi[k][j] for k in range(n)), a.ring.zero()) for j in range(n)] for i in range(n)]
    reversed_ok = all(g_phi[i][j] == -d[i, j] * Fraction(1, 2) for i in range(n) for j in range(n))
    report = Report("displayed phi sign")
    report.add("axioms hold", axioms.passed, "True", str(axioms.passed))
    as_displayed = contact["g(X, phi Y) = dtheta(X, Y)/2"].passed
    report.add("compatibility fails as displayed", not as_displayed, "fails", "holds" if as_displayed else "fails")
    report.add("compatibility holds with reversed sign", reversed_ok, "True", str(reversed_ok))
    return report


# ---------------------------------------------------------------------------
# The real slice
# ---------------------------------------------------------------------------

def real_slice_inclusion() -> Dict[str, FieldElement]:
    """Complex coordinates as polynomials in ``(x1, x2, x3, x4, s)``."""
    R = PolynomialRing(REAL_COORDS)
    x1, x2, x3, x4, s = R.gens()
    return {"y00": x1 + x2 * I, "y01": -x3 + x4 * I, "y10": x3 + x4 * I, "y11": x1 - x2 * I, "t": s * (-2 * I)}


THETA_SCALE = I * Fraction(1, 2)  # theta~ = (i/2) theta
XI_SCALE = -2 * I                 # xi~ = -2i xi
METRIC_SCALE = I * Fraction(1, 2)  # g0~ = (i/2) g0


def pullback_one_form(coeffs: Dict[str, FieldElement], inclusion: Dict[str, FieldElement],
                      target: Sequence[str]) -> Dict[str, FieldElement]:
    R = PolynomialRing(tuple(target))
    out = {c: R.zero() for c in target}
    for name, coeff in coeffs.items():
        pulled = R(coeff.substitute(inclusion))
        for c in target:
            dc = R(inclusion[name]).differentiate(c)
            if not dc.is_zero():
                out[c] = out[c] + pulled * dc
    return out


def real_slice_frame() -> Frame:
    R = PolynomialRing(REAL_COORDS)
    x1, x2, x3, x4, s = R.gens()
    basis = (
        {"s": 1},
        {"x1": 1, "s": -x2},
        {"x2": 1, "s": x1},
        {"x3": 1, "s": x4},
        {"x4": 1, "s": -x3},
    )
    return Frame(REAL_COORDS, basis)


def real_slice_phi_displayed() -> List[List[int]]:
    """The block-diagonal matrix as commonly displayed for the real slice."""
    M = [[0] * 5 for _ in range(5)]
    M[1][2], M[2][1] = 1, -1
    M[3][4], M[4][3] = -1, 1
    return M


def real_slice() -> AlmostContactData:
    """The real K-contact structure in the frame ``e_0 = d/ds, e_1 = d1 - x2 ds, ...``.

    The metric is orthonormal in this frame and ``theta^0`` is the restricted
    contact form.  ``phi`` carries the same sign convention as
    ``heisenberg_structure`` (the negative of the displayed block matrix).
    """
    frame = real_slice_frame()
    ring = frame.ring
    geometry = FrameGeometry(frame, MetricComponents.identity(5, ring), "real slice")
    theta = [1, 0, 0, 0, 0]
    xi = frame.to_frame_components([0, 0, 0, 0, 1])
    phi = [[-x for x in row] for row in real_slice_phi_displayed()]
    return AlmostContactData(geometry, phi, xi, theta, name="real slice")


def pushforward_matrix() -> List[List[ComplexScalar]]:
    """``P[b][a]``: component of the image of real frame vector ``a`` on complex frame vector ``b``."""
    P = [[ZERO] * 5 for _ in range(5)]
    P[0][0] = -2 * I
    P[1][1], P[4][1] = ONE, ONE
    P[1][2], P[4][2] = I, -I
    P[2][3], P[3][3] = -ONE, ONE
    P[2][4], P[3][4] = I, I
    return P


def verify_pushforward_matrix() -> Report:
    """Check ``P`` against the inclusion: push each real frame vector forward and expand in the complex frame."""
    report = Report("push-forward of the real frame")
    inc = real_slice_inclusion()
    rf, cf = real_slice_frame(), heisenberg_frame()
    Rr = PolynomialRing(REAL_COORDS)
    P = pushforward_matrix()
    for a_idx, vec in enumerate(rf.basis):
        # coordinate components of the pushed vector: d(y_c)(E_a) = E_a(y_c)
        pushed = [rf.apply(a_idx, Rr(inc[c])) for c in COMPLEX_COORDS]
        expected = [Rr.zero() for _ in COMPLEX_COORDS]
        for b_idx, cvec in enumerate(cf.basis):
            if P[b_idx][a_idx].is_zero():
                continue
            for k, c in enumerate(COMPLEX_COORDS):
                expected[k] = expected[k] + Rr(cvec[c].substitute(inc)) * P[b_idx][a_idx]
        ok = all(x == y for x, y in zip(pushed, expected))
        report.add(f"image of E{a_idx}", ok, "matches", "matches" if ok else "differs")
    return report


def real_slice_from_complex() -> Dict[str, object]:
    """Transport the scaled complex tensors to the real frame with the constant matrix ``P``."""
    a = heisenberg_structure()
    P = pushforward_matrix()
    Pinv = inverse_matrix(P)
    n = 5
    theta_c = [THETA_SCALE * x.constant_value() for x in a.theta]
    xi_c = [XI_SCALE * x.constant_value() for x in a.xi]
    g_c = [[THETA_SCALE * THETA_SCALE * (1 if (i == 0 and j == 0) else 0)
            + METRIC_SCALE * degenerate_frame_entry(i, j) for j in range(n)] for i in range(n)]
    phi_c = [[x.constant_value() for x in row] for row in a.phi]
    theta_r = [sum((theta_c[b] * P[b][k] for b in range(n)), ZERO) for k in range(n)]
    g_r = mat_mul([list(r) for r in zip(*P)], mat_mul(g_c, P))
    xi_r = [sum((Pinv[k][b] * xi_c[b] for b in range(n)), ZERO) for k in range(n)]
    phi_r = mat_mul(Pinv, mat_mul(phi_c, P))
    return {"theta": theta_r, "g": g_r, "xi": xi_r, "phi": phi_r}


def degenerate_frame_entry(i: int, j: int) -> ComplexScalar:
    """``g0(e_i, e_j)`` in the Heisenberg frame."""
    if {i, j} == {1, 4}:
        return -I
    if {i, j} == {2, 3}:
        return I
    return ZERO


def verify_real_slice(structure: Optional[AlmostContactData] = None) -> Report:
    a = structure or real_slice()
    report = Report("real slice structure")
    report.extend(verify_axioms(a), "axioms/")
    report.extend(is_contact_metric(a), "contact-metric/")
    report.extend(is_k_contact(a), "k-contact/")
    # pullback of the scaled complex contact form
    th = contact_form_coordinates()
    scaled = {k: v * THETA_SCALE for k, v in th.items()}
    pulled = pullback_one_form(scaled, real_slice_inclusion(), REAL_COORDS)
    coframe0 = dict(zip(REAL_COORDS, a.geometry.frame.coframe[0]))
    ok = all(pulled[c] == coframe0[c] for c in REAL_COORDS)
    report.add("pullback of scaled theta equals theta^0 of the real frame", ok,
               ", ".join(f"{c}: {coframe0[c]}" for c in REAL_COORDS),
               ", ".join(f"{c}: {pulled[c]}" for c in REAL_COORDS))
    expected_theta = {"x1": "x2", "x2": "-x1", "x3": "-x4", "x4": "x3", "s": "1"}
    R = PolynomialRing(REAL_COORDS)
    ok = all(coframe0[c] == R(v) for c, v in expected_theta.items())
    report.add("theta = ds + x2 dx1 - x1 dx2 - x4 dx3 + x3 dx4", ok, str(expected_theta),
               str({c: str(coframe0[c]) for c in REAL_COORDS}))
    report.extend(verify_pushforward_matrix(), "pushforward/")
    transported = real_slice_from_complex()
    for key, mine in (("theta", [x.constant_value() for x in a.theta]),
                      ("xi", [x.constant_value() for x in a.xi]),
                      ("g", [[x.constant_value() for x in row] for row in a.g]),
                      ("phi", [[x.constant_value() for x in row] for row in a.phi])):
        other = transported[key]
        report.add(f"transported {key} matches", other == mine, str(mine), str(other))
    c = a.geometry.commutators.nonzero()
    expected_c = {(1, 2, 0): 2, (2, 1, 0): -2, (4, 3, 0): 2, (3, 4, 0): -2}
    ok = set(c) == set(expected_c) and all(c[k] == v for k, v in expected_c.items())
    report.add("commutation coefficients", ok, str(expected_c), str({k: str(v) for k, v in c.items()}))
    return report


EXPECTED_CURVATURE = {
    (0, 1, 0, 1): 1, (1, 2, 1, 2): -3, (1, 2, 3, 4): 2, (1, 3, 2, 4): 1, (1, 4, 2, 3): -1,
    (0, 2, 0, 2): 1, (2, 3, 1, 4): -1, (2, 4, 1, 3): 1,
}

SIGMA = {0: 0, 1: 4, 2: 3, 3: 2, 4: 1}


def expected_curvature_table() -> Dict[Tuple[int, int, int, int], int]:
    """Listed components closed under the index symmetries and ``sigma = (1 4)(2 3)``."""
    table: Dict[Tuple[int, int, int, int], int] = {}

    def put(idx, v):
        if idx in table and table[idx] != v:
            raise AssertionError(f"inconsistent table at {idx}")
        table[idx] = v

    frontier = list(EXPECTED_CURVATURE.items())
    while frontier:
        (i, j, k, l), v = frontier.pop()
        images = [((i, j, k, l), v), ((j, i, k, l), -v), ((i, j, l, k), -v), ((k, l, i, j), v),
                  ((SIGMA[i], SIGMA[j], SIGMA[k], SIGMA[l]), v)]
        for idx, val in images:
            if idx not in table:
                put(idx, val)
                frontier.append((idx, val))
            elif table[idx] != val:
                raise AssertionError(f"inconsistent table at {idx}")
    return table


WEYL_COMBINATIONS = (
    ("W1212+2W1234+W3434", ((1, (1, 2, 1, 2)), (2, (1, 2, 3, 4)), (1, (3, 4, 3, 4)))),
    ("W1313-2W1324+W2424", ((1, (1, 3, 1, 3)), (-2, (1, 3, 2, 4)), (1, (2, 4, 2, 4)))),
    ("W1414+2W1423+W2323", ((1, (1, 4, 1, 4)), (2, (1, 4, 2, 3)), (1, (2, 3, 2, 3)))),
    ("W1213-W1224+W3413-W3424", ((1, (1, 2, 1, 3)), (-1, (1, 2, 2, 4)), (1, (3, 4, 1, 3)), (-1, (3, 4, 2, 4)))),
    ("W1214+W1223+W3414+W3423", ((1, (1, 2, 1, 4)), (1, (1, 2, 2, 3)), (1, (3, 4, 1, 4)), (1, (3, 4, 2, 3)))),
    ("W1314+W1323-W2414-W2423", ((1, (1, 3, 1, 4)), (1, (1, 3, 2, 3)), (-1, (2, 4, 1, 4)), (-1, (2, 4, 2, 3)))),
)


def verify_curvature_table(geometry: FrameGeometry) -> Report:
    curv = geometry.curvature
    table = expected_curvature_table()
    report = Report("real slice curvature")
    for idx, v in sorted(EXPECTED_CURVATURE.items()):
        got = curv.R[idx]
        name = "R_" + "".join(map(str, idx))
        report.add(name, got == v, str(v), str(got))
    extra = {idx: val for idx, val in curv.nonzero_components().items() if idx not in table}
    missing = [idx for idx, val in table.items() if curv.R[idx] != val]
    report.add("no other nonzero components", not extra and not missing, "table closed under symmetries",
               "ok" if not extra and not missing else f"extra {sorted(extra)[:3]} missing {missing[:3]}")
    report.extend(curvature_symmetry_report(curv), "symmetry/")
    sigma_ok = all(curv.R[i, j, k, l] == curv.R[SIGMA[i], SIGMA[j], SIGMA[k], SIGMA[l]]
                   for (i, j, k, l) in curv.nonzero_components())
    report.add("invariant under sigma = (1 4)(2 3)", sigma_ok, "True", str(sigma_ok))
    gamma = geometry.christoffel
    for (k, i, j), v in (((0, 1, 2), 1), ((1, 0, 2), 1), ((2, 0, 1), -1)):
        report.add(f"Gamma^{k}_{i}{j}", gamma[k, i, j] == v, str(v), str(gamma[k, i, j]))
    vanish = all(gamma[k, i, j].is_zero() for k in range(1, 5) for i in range(1, 5) for j in range(1, 5))
    report.add("Gamma vanishes with no index 0", vanish, "True", str(vanish))
    return report


def verify_ricci_scalar(geometry: FrameGeometry) -> Report:
    curv = geometry.curvature
    report = Report("real slice Ricci and scalar curvature")
    expected = [4, -2, -2, -2, -2]
    for i in range(5):
        for j in range(5):
            want = expected[i] if i == j else 0
            if i <= j:
                report.add(f"Ric_{i}{j}", curv.ricci[i, j] == want, str(want), str(curv.ricci[i, j]))
    report.add("s", curv.scalar == -4, "-4", str(curv.scalar))
    report.add("W_1212", curv.weyl[1, 2, 1, 2] == -2, "-2", str(curv.weyl[1, 2, 1, 2]))
    return report


def verify_itoh_conditions(geometry: FrameGeometry) -> Report:
    """Vanishing contact/anti-self-dual curvature, the six Weyl equations, and ``s = -4``.

    Uses the orientation in which ``theta^1 ^ theta^2 ^ theta^4 ^ theta^3`` is
    positive, i.e. ``orientation=-1`` relative to ``theta^1234``.
    """
    curv = geometry.curvature
    R, W = curv.R, curv.weyl
    basis = TwoFormBasis(-1)
    report = Report("CR integrability conditions on the real slice")
    mixed = [(i, j, k) for i in range(1, 5) for j in range(1, 5) for k in range(1, 5) if not R[0, i, j, k].is_zero()]
    report.add("R_0ijk = 0", not mixed, "0", "0" if not mixed else f"nonzero at {mixed[0]}")
    r0m = pairing_block(R, basis, "0", "-")
    rm0 = pairing_block(R, basis, "-", "0")
    report.add("R^0_- = 0", all(x.is_zero() for x in r0m.flat), "0", str([str(x) for x in r0m.flat]))
    report.add("R^-_0 = 0", all(x.is_zero() for x in rm0.flat), "0", str([str(x) for x in rm0.flat]))
    for name, terms in WEYL_COMBINATIONS:
        total = sum((W[idx] * coeff for coeff, idx in terms), geometry.frame.ring.zero())
        report.add(name, total.is_zero(), "0", str(total))
    wmm = pairing_block(W, basis, "-", "-")
    report.add("W^-_- = 0", all(x.is_zero() for x in wmm.flat), "0", str([str(x) for x in wmm.flat]))
    report.add("s = -4", curv.scalar == -4, "-4", str(curv.scalar))
    # Sanity: under the standard orientation the Weyl block is not zero, so the flip matters.
    w_std = pairing_block(W, TwoFormBasis(1), "-", "-")
    report.notes.append("standard orientation W^-_- zero: " + str(all(x.is_zero() for x in w_std.flat)))
    return report


def standard_form_check() -> Report:
    """``2 theta = dZ - Y1 dX1 - Y2 dX2`` under the stated coordinate change."""
    R = PolynomialRing(REAL_COORDS)
    x1, x2, x3, x4, s = R.gens()
    Z = 2 * s + 2 * x1 * x2 - 2 * x3 * x4
    Y1, X1, Y2, X2 = 2 * x1, 2 * x2, 2 * x3, -2 * x4
    rhs = {c: Z.differentiate(c) - Y1 * X1.differentiate(c) - Y2 * X2.differentiate(c) for c in REAL_COORDS}
    theta = dict(zip(REAL_COORDS, real_slice_frame().coframe[0]))
    report = Report("standard contact form")
    for c in REAL_COORDS:
        report.add(f"d{c} coefficient", rhs[c] == theta[c] * 2, str(theta[c] * 2), str(rhs[c]))
    return report


# ---------------------------------------------------------------------------
# The CR image of the real slice
# ---------------------------------------------------------------------------

def real_slice_line(x1, x2, x3, x4, s) -> TwistorLineParams:
    x1, x2, x3, x4, s = (_c(v) for v in (x1, x2, x3, x4, s))
    return TwistorLineParams(((x1 + I * x2, -x3 + I * x4), (x3 + I * x4, x1 - I * x2)), -2 * I * s)


def cr_image_defect(p: ChartPoint) -> Fraction:
    """``Re(w2)(1 + |zeta|^2) - (|w1|^2 - |w0|^2 - 2 Re(w0 w1 conj(zeta)))``."""
    if p.chart != "W":
        raise ValueError("the image equation is written in the W chart")
    z, w0, w1, w2 = p.coords
    return w2.re * (1 + z.norm2()) - (w1.norm2() - w0.norm2() - 2 * (w0 * w1 * z.conjugate()).re)


def cr_image_membership(p: ChartPoint) -> bool:
    return cr_image_defect(p) == 0


def run_cr_suite(count: int = 100, seed: int = 7) -> Dict[str, int]:
    rng = random.Random(seed)
    on, off = 0, 0
    for _ in range(count):
        pt = [Fraction(rng.randint(-30, 30), rng.randint(1, 30)) for _ in range(5)]
        zeta = ComplexScalar(Fraction(rng.randint(-30, 30), rng.randint(1, 30)),
                             Fraction(rng.randint(-30, 30), rng.randint(1, 30)))
        line = real_slice_line(*pt)
        if cr_image_membership(eta_map(line, zeta)):
            on += 1
        shift = Fraction(rng.randint(1, 30), rng.randint(1, 30)) * (1 if rng.random() < 0.5 else -1)
        moved = TwistorLineParams(line.y, line.t + shift)
        if not cr_image_membership(eta_map(moved, zeta)):
            off += 1
    return {"count": count, "on_image": on, "perturbed_off_image": off}


# ---------------------------------------------------------------------------
# Comparison with the patching description
# ---------------------------------------------------------------------------

def gundry_comparison() -> Report:
    """Recover the contact form from the patching function ``f = 2 lam^-1 W0 W1`` by residues."""
    R = PolynomialRing(COMPLEX_COORDS + ("lam",), laurent=("lam",))
    y00, y01, y10, y11, t, lam = R.gens()
    omega = (y00 + lam * y01, y10 + lam * y11)  # the line in W with zeta = lam
    Rf = PolynomialRing(("O0", "O1", "lam"), laurent=("lam",))
    O0, O1, L = Rf.gens()
    f = 2 * L ** -1 * O0 * O1
    restrict = {"O0": omega[0], "O1": omega[1]}
    phi = []
    integrands = []
    for name in ("O0", "O1"):
        integrand = R(f.differentiate(name).substitute(restrict)) * lam ** -1
        integrands.append(integrand)
        phi.append(integrand.residue("lam"))
    report = Report("patching-function comparison")
    Ry = PolynomialRing(COMPLEX_COORDS)
    report.add("phi_0,0 = 2 y11", phi[0] == Ry("2*y11"), "2*y11", str(phi[0]))
    report.add("phi_0,1 = 2 y01", phi[1] == Ry("2*y01"), "2*y01", str(phi[1]))
    s_coord = Ry(eta_polynomials_W()[3].substitute({"zeta": 0}))
    report.add("s = t - y00 y11 - y10 y01", s_coord == Ry("t - y00*y11 - y10*y01"), "t - y00*y11 - y10*y01",
               str(s_coord))
    # theta_1 = ds + phi_{0,A} dx^{A1'} with x^{AA'} = y_{A (1-A')}, so dx^{01'} = dy00, dx^{11'} = dy10
    theta1 = {c: s_coord.differentiate(c) for c in COMPLEX_COORDS}
    theta1["y00"] = theta1["y00"] + Ry(phi[0])
    theta1["y10"] = theta1["y10"] + Ry(phi[1])
    theta = {c: Ry(v) for c, v in contact_form_coordinates().items()}
    # compare with theta^0 read off the Heisenberg coframe as well
    coframe0 = dict(zip(COMPLEX_COORDS, heisenberg_frame().coframe[0]))
    diff_ok = all((theta1[c] - theta[c]).is_zero() for c in COMPLEX_COORDS)
    report.add("theta_1 - theta = 0", diff_ok, "0",
               ", ".join(f"{c}: {theta1[c] - theta[c]}" for c in COMPLEX_COORDS))
    report.add("theta_1 equals the Heisenberg coframe theta^0",
               all(theta1[c] == coframe0[c] for c in COMPLEX_COORDS), "equal", "equal")
    naive = (R(f.substitute(restrict)) * lam ** -1).residue("lam")
    report.notes.append(f"residue of f|*lam^-1 itself is {naive}; the derivative integrands are "
                        f"{integrands[0]} and {integrands[1]}")
    report.add("derivative integrand for A=0", integrands[0] == R("2*y11*lam^-1 + 2*y10*lam^-2"),
               "2*y11*lam^-1 + 2*y10*lam^-2", str(integrands[0]))
    return report


# ---------------------------------------------------------------------------
# Product example
# ---------------------------------------------------------------------------

PRODUCT_COORDS = ("t", "z1", "z2", "z3", "z4")


def product_structure() -> AlmostContactData:
    """Flat C^4 x C with ``theta = dt``, ``xi = d/dt`` and a compatible complex structure on C^4."""
    frame = Frame.coordinate_frame(PRODUCT_COORDS)
    ring = frame.ring
    geometry = FrameGeometry(frame, MetricComponents.identity(5, ring), "product")
    J = [[0] * 5 for _ in range(5)]
    J[2][1], J[1][2] = 1, -1
    J[4][3], J[3][4] = 1, -1
    return AlmostContactData(geometry, J, [1, 0, 0, 0, 0], [1, 0, 0, 0, 0], name="product")


def product_example() -> Report:
    a = product_structure()
    report = Report("product example")
    d = exterior_derivative_one_form(a.theta, a.geometry)
    td = wedge(one_form(a.theta), two_form_from_matrix(d))
    report.add("theta ^ dtheta = 0", is_zero_form(td), "0", str(td))
    report.add("dtheta = 0 (ker theta integrable)", all(x.is_zero() for x in d.flat), "0", "0")
    curv = a.geometry.curvature
    flat = not curv.nonzero_components()
    report.add("curvature = 0", flat, "0", "0" if flat else str(len(curv.nonzero_components())))
    basis = TwoFormBasis(1)
    report.add("R^0_- = 0", all(x.is_zero() for x in pairing_block(curv.R, basis, "0", "-").flat), "0", "0")
    report.add("W^-_- = 0", all(x.is_zero() for x in pairing_block(curv.weyl, basis, "-", "-").flat), "0", "0")
    report.add("almost contact axioms", verify_axioms(a).passed, "True", str(verify_axioms(a).passed))
    cm = is_contact_metric(a)
    cf = cm["theta ^ dtheta ^ dtheta != 0"]
    report.add("contact-form condition fails", not cf.passed, "fails", "fails" if not cf.passed else "holds")
    kc = is_k_contact(a)
    report.add("xi is Killing", kc["xi is Killing"].passed, "True", str(kc["xi is Killing"].passed))
    report.add("not K-contact because not contact", not kc.passed and not kc["contact metric"].passed,
               "not K-contact", "K-contact" if kc.passed else "not K-contact")
    return report
