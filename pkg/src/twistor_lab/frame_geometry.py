"""Levi-Civita calculus in a (possibly non-holonomic) frame.

Conventions used throughout:

* ``c[i, j, k]`` is ``c_{ij}^k`` with ``[e_i, e_j] = c_{ij}^k e_k``.
* ``Gamma[k, i, j]`` is ``Gamma^k_{ij}`` with ``nabla_{e_i} e_j = Gamma^k_{ij} e_k``.
* ``R[l, k, i, j]`` is ``R_{lkij} = g(R(e_i, e_j) e_k, e_l)`` where
  ``R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]``.
  With this choice ``R[a, b, a, b]`` is the sectional curvature of an
  orthonormal pair.
* Ricci is ``R_{ij} = g^{kl} R_{ikjl}``, which is ``sum_k R_{ikjk}`` for an
  orthonormal frame, and the scalar curvature is ``g^{ij} R_{ij}``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .exact_algebra import (
    ComplexScalar,
    FieldElement,
    NotInvertible,
    PolynomialRing,
    determinant,
    inverse_matrix,
    is_zero,
    parse_polynomial,
    rank,
)
from .reports import Report

SAMPLE_SEED = 20240605
SAMPLE_COUNT = 20


class DegenerateFrame(ValueError):
    """The frame's component matrix is not invertible over the polynomial ring."""


def object_array(shape) -> np.ndarray:
    return np.empty(shape, dtype=object)


def _add(acc, term):
    return term if acc is None else acc + term


# ---------------------------------------------------------------------------
# Frames and metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Vector fields ``e_0 .. e_{n-1}`` given by their coordinate components.

    ``basis[i]`` maps a coordinate name to the coefficient of ``d/d(coordinate)``
    in ``e_i``; missing coordinates mean a zero coefficient.
    """

    coordinates: Tuple[str, ...]
    basis: Tuple[Mapping[str, FieldElement], ...]
    laurent: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "laurent", frozenset(self.laurent))
        ring = self.ring
        clean = []
        for vec in self.basis:
            unknown = set(vec).difference(self.coordinates)
            if unknown:
                raise ValueError(f"frame vector uses unknown coordinate(s) {sorted(unknown)}")
            clean.append({c: ring(vec.get(c, 0)) for c in self.coordinates})
        object.__setattr__(self, "basis", tuple(clean))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def ring(self) -> PolynomialRing:
        return PolynomialRing(self.coordinates, self.laurent)

    @classmethod
    def coordinate_frame(cls, coordinates: Sequence[str], laurent=()) -> "Frame":
        ring = PolynomialRing(coordinates, laurent)
        basis = [{c: ring.const(1 if c == d else 0) for c in coordinates} for d in coordinates]
        return cls(tuple(coordinates), tuple(basis), frozenset(laurent))

    def component_matrix(self) -> List[List[FieldElement]]:
        """Rows are the frame vectors, columns the coordinate directions."""
        return [[vec[c] for c in self.coordinates] for vec in self.basis]

    def apply(self, i: int, f: FieldElement) -> FieldElement:
        """The derivative ``e_i(f)`` of a function along the i-th frame field."""
        f = self.ring(f)
        acc = self.ring.zero()
        for coord, comp in self.basis[i].items():
            if not comp.is_zero():
                d = f.differentiate(coord)
                if not d.is_zero():
                    acc = acc + comp * d
        return acc

    @cached_property
    def coframe(self) -> List[List[FieldElement]]:
        """``coframe[k][c]`` is the ``d(coordinate c)`` coefficient of ``theta^k``."""
        m = self.component_matrix()
        det = determinant(m)
        if is_zero(det):
            raise DegenerateFrame("frame component matrix has zero determinant")
        try:
            inv = inverse_matrix(m)
        except NotInvertible as exc:
            raise DegenerateFrame(f"frame determinant {det} is not a unit of the coordinate ring") from exc
        n = len(m)
        return [[inv[c][k] for c in range(n)] for k in range(n)]

    def to_frame_components(self, coordinate_components: Sequence) -> List[FieldElement]:
        """Express a vector field given in coordinates in terms of ``e_k``."""
        ring = self.ring
        v = [ring(x) for x in coordinate_components]
        return [sum((row[c] * v[c] for c in range(len(v))), ring.zero()) for row in self.coframe]

    def one_form_components(self, coordinate_components: Sequence) -> List[FieldElement]:
        """Frame components ``alpha(e_i)`` of a 1-form ``sum_c a_c d(coordinate c)``."""
        ring = self.ring
        a = [ring(x) for x in coordinate_components]
        return [sum((vec[c] * a[k] for k, c in enumerate(self.coordinates)), ring.zero())
                for vec in self.basis]

    def evaluate_matrix(self, point: Mapping[str, object]):
        return [[comp.evaluate(point) for comp in row] for row in self.component_matrix()]


@dataclass(frozen=True)
class MetricComponents:
    """Frame components ``g_{ij}`` together with the exact inverse ``g^{ij}``."""

    g: Tuple[Tuple[FieldElement, ...], ...]
    inverse: Tuple[Tuple[FieldElement, ...], ...] = field(default=None)

    def __post_init__(self):
        g = tuple(tuple(row) for row in self.g)
        n = len(g)
        for i in range(n):
            if len(g[i]) != n:
                raise ValueError("metric must be square")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i},{j})")
        object.__setattr__(self, "g", g)
        if self.inverse is None:
            try:
                inv = inverse_matrix([list(r) for r in g])
            except NotInvertible as exc:
                raise NotInvertible(f"metric is degenerate: {exc}") from exc
            object.__setattr__(self, "inverse", tuple(tuple(r) for r in inv))

    @classmethod
    def from_rows(cls, rows, ring: PolynomialRing) -> "MetricComponents":
        return cls(tuple(tuple(ring(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int, ring: PolynomialRing) -> "MetricComponents":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], ring)

    @property
    def dimension(self) -> int:
        return len(self.g)

    def is_identity(self) -> bool:
        return all(self.g[i][j] == (1 if i == j else 0)
                   for i in range(self.dimension) for j in range(self.dimension))

    def pair(self, u: Sequence, v: Sequence):
        acc = None
        for i, ui in enumerate(u):
            if is_zero(ui):
                continue
            for j, vj in enumerate(v):
                if is_zero(vj) or is_zero(self.g[i][j]):
                    continue
                acc = _add(acc, self.g[i][j] * ui * vj)
        return acc if acc is not None else self.g[0][0] * 0

    def lower(self, v: Sequence) -> List:
        n = self.dimension
        return [sum((self.g[i][j] * v[j] for j in range(n)), self.g[0][0] * 0) for i in range(n)]


@dataclass(frozen=True)
class CommutationCoefficients:
    """``c[i, j, k] = c_{ij}^k``; antisymmetric in ``(i, j)``."""

    c: np.ndarray

    def __post_init__(self):
        n = self.c.shape[0]
        for i, j, k in product(range(n), repeat=3):
            if self.c[i, j, k] != -self.c[j, i, k]:
                raise ValueError(f"commutation coefficients not antisymmetric at ({i},{j},{k})")

    @property
    def dimension(self) -> int:
        return self.c.shape[0]

    def __getitem__(self, idx):
        return self.c[idx]

    def nonzero(self) -> Dict[Tuple[int, int, int], FieldElement]:
        n = self.dimension
        return {(i, j, k): self.c[i, j, k] for i, j, k in product(range(n), repeat=3)
                if not is_zero(self.c[i, j, k])}


def commutators_from_frame(frame: Frame) -> CommutationCoefficients:
    """Expand ``[e_i, e_j]`` in the frame itself."""
    n = frame.dimension
    coframe = frame.coframe  # raises DegenerateFrame
    ring = frame.ring
    coords = frame.coordinates
    c = object_array((n, n, n))
    for i in range(n):
        for k in range(n):
            c[i, i, k] = ring.zero()
    for i in range(n):
        for j in range(i + 1, n):
            bracket = [frame.apply(i, frame.basis[j][x]) - frame.apply(j, frame.basis[i][x]) for x in coords]
            for k in range(n):
                acc = ring.zero()
                for x in range(len(coords)):
                    if not bracket[x].is_zero() and not coframe[k][x].is_zero():
                        acc = acc + coframe[k][x] * bracket[x]
                c[i, j, k] = acc
                c[j, i, k] = -acc
    return CommutationCoefficients(c)


def bracket_residuals(frame: Frame, c: CommutationCoefficients, points) -> List[str]:
    """Compare ``[e_i, e_j]`` with ``c_{ij}^k e_k`` coordinatewise at sample points."""
    n = frame.dimension
    problems = []
    for i in range(n):
        for j in range(i + 1, n):
            for x in frame.coordinates:
                lhs = frame.apply(i, frame.basis[j][x]) - frame.apply(j, frame.basis[i][x])
                rhs = frame.ring.zero()
                for k in range(n):
                    rhs = rhs + c[i, j, k] * frame.basis[k][x]
                for pt in points:
                    if lhs.evaluate(pt) != rhs.evaluate(pt):
                        problems.append(f"[e{i},e{j}] component {x} at {pt}")
                        break
    return problems


# ---------------------------------------------------------------------------
# Connection and curvature
# ---------------------------------------------------------------------------

def christoffel(g: MetricComponents, c: CommutationCoefficients, f: Frame) -> np.ndarray:
    """``Gamma[k, i, j]`` of the Levi-Civita connection (Koszul formula in a frame)."""
    n = f.dimension
    ring = f.ring
    zero = ring.zero()
    # c_{ijl} = c_{ij}^m g_{ml}
    c_low = object_array((n, n, n))
    for i, j, l in product(range(n), repeat=3):
        acc = zero
        for m in range(n):
            if not is_zero(c[i, j, m]) and not is_zero(g.g[m][l]):
                acc = acc + c[i, j, m] * g.g[m][l]
        c_low[i, j, l] = acc
    dg = [[[f.apply(a, g.g[b][d]) for d in range(n)] for b in range(n)] for a in range(n)]
    lowered = object_array((n, n, n))  # Gamma_{l,ij} times 2
    for l, i, j in product(range(n), repeat=3):
        lowered[l, i, j] = (dg[i][l][j] + dg[j][i][l] - dg[l][i][j]
                            + c_low[l, j, i] + c_low[l, i, j] + c_low[i, j, l])
    gamma = object_array((n, n, n))
    half = Fraction(1, 2)
    for k, i, j in product(range(n), repeat=3):
        acc = zero
        for l in range(n):
            if not is_zero(g.inverse[k][l]) and not is_zero(lowered[l, i, j]):
                acc = acc + g.inverse[k][l] * lowered[l, i, j]
        gamma[k, i, j] = acc * half
    return gamma


@dataclass(frozen=True)
class CurvatureTensor:
    """Lowered Riemann tensor with its Ricci, scalar and Weyl parts."""

    R: np.ndarray
    ricci: np.ndarray
    scalar: object
    weyl: np.ndarray

    @property
    def dimension(self) -> int:
        return self.R.shape[0]

    def __getitem__(self, idx):
        return self.R[idx]

    def nonzero_components(self) -> Dict[Tuple[int, int, int, int], object]:
        n = self.dimension
        return {idx: self.R[idx] for idx in product(range(n), repeat=4) if not is_zero(self.R[idx])}


def riemann_up(gamma: np.ndarray, c: CommutationCoefficients, f: Frame) -> np.ndarray:
    """``R^l_{kij}`` including the frame-derivative terms."""
    n = f.dimension
    zero = f.ring.zero()
    up = object_array((n, n, n, n))
    for l, k, i, j in product(range(n), repeat=4):
        if i == j:
            up[l, k, i, j] = zero
            continue
        if j < i:
            up[l, k, i, j] = -up[l, k, j, i]
            continue
        acc = f.apply(i, gamma[l, j, k]) - f.apply(j, gamma[l, i, k])
        for m in range(n):
            a, b = gamma[m, j, k], gamma[l, i, m]
            if not is_zero(a) and not is_zero(b):
                acc = acc + a * b
            a, b = gamma[m, i, k], gamma[l, j, m]
            if not is_zero(a) and not is_zero(b):
                acc = acc - a * b
            a, b = c[i, j, m], gamma[l, m, k]
            if not is_zero(a) and not is_zero(b):
                acc = acc - a * b
        up[l, k, i, j] = acc
    return up


def lower_first(up: np.ndarray, g: MetricComponents) -> np.ndarray:
    n = up.shape[0]
    out = object_array(up.shape)
    for l, k, i, j in product(range(n), repeat=4):
        acc = None
        for m in range(n):
            if not is_zero(g.g[l][m]) and not is_zero(up[m, k, i, j]):
                acc = _add(acc, g.g[l][m] * up[m, k, i, j])
        out[l, k, i, j] = acc if acc is not None else g.g[0][0] * 0
    return out


def ricci_and_scalar(R: np.ndarray, g: MetricComponents):
    n = R.shape[0]
    zero = g.g[0][0] * 0
    ric = object_array((n, n))
    for i, j in product(range(n), repeat=2):
        acc = zero
        for k, l in product(range(n), repeat=2):
            if not is_zero(g.inverse[k][l]) and not is_zero(R[i, k, j, l]):
                acc = acc + g.inverse[k][l] * R[i, k, j, l]
        ric[i, j] = acc
    s = zero
    for i, j in product(range(n), repeat=2):
        if not is_zero(g.inverse[i][j]) and not is_zero(ric[i, j]):
            s = s + g.inverse[i][j] * ric[i, j]
    return ric, s


def weyl(R: np.ndarray, ric: np.ndarray, s, g: MetricComponents) -> np.ndarray:
    """Weyl tensor with the five-dimensional constants 1/3 and s/12."""
    n = R.shape[0]
    third = Fraction(1, 3)
    s12 = s * Fraction(1, 12)
    G = g.g
    support = [(a, b) for a in range(n) for b in range(n) if not is_zero(G[a][b])]
    W = R.copy()

    def bump(idx, term):
        W[idx] = W[idx] + term

    # only index pairs where the metric is nonzero contribute to the correction terms
    for a, b in support:
        gab = G[a][b] * third
        for x in range(n):
            for y in range(n):
                # ric[j,k] G[i,l] with (i,l) = (a,b), and the three companions
                bump((a, x, y, b), ric[x, y] * gab)
                bump((x, a, b, y), ric[x, y] * gab)
                bump((a, x, b, y), -(ric[x, y] * gab))
                bump((x, a, y, b), -(ric[x, y] * gab))
        for c, d in support:
            term = s12 * G[a][b] * G[c][d]
            bump((a, c, b, d), term)
            bump((a, c, d, b), -term)
    return W


def riemann(gamma: np.ndarray, c: CommutationCoefficients, f: Frame, g: MetricComponents) -> CurvatureTensor:
    R = lower_first(riemann_up(gamma, c, f), g)
    ric, s = ricci_and_scalar(R, g)
    return CurvatureTensor(R, ric, s, weyl(R, ric, s, g))


def curvature_from_components(R: np.ndarray, g: MetricComponents | None = None) -> CurvatureTensor:
    """Wrap a pointwise lowered tensor (e.g. a random algebraic curvature tensor)."""
    n = R.shape[0]
    if g is None:
        g = MetricComponents(tuple(tuple(ComplexScalar(1 if i == j else 0) for j in range(n)) for i in range(n)))
    ric, s = ricci_and_scalar(R, g)
    return CurvatureTensor(R, ric, s, weyl(R, ric, s, g))


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

def curvature_symmetry_report(curv: CurvatureTensor, g: MetricComponents | None = None) -> Report:
    """Pair antisymmetries, pair symmetry, first Bianchi and Weyl trace-freeness."""
    R, W = curv.R, curv.weyl
    n = curv.dimension
    report = Report("curvature symmetries")
    bad = {"antisymmetry": None, "pair symmetry": None, "first Bianchi": None, "Weyl trace": None}
    for i, j, k, l in product(range(n), repeat=4):
        r = R[i, j, k, l]
        if bad["antisymmetry"] is None and (r != -R[j, i, k, l] or r != -R[i, j, l, k]):
            bad["antisymmetry"] = (i, j, k, l)
        if bad["pair symmetry"] is None and r != R[k, l, i, j]:
            bad["pair symmetry"] = (i, j, k, l)
        if bad["first Bianchi"] is None and not is_zero(r + R[i, k, l, j] + R[i, l, j, k]):
            bad["first Bianchi"] = (i, j, k, l)
    for i, j in product(range(n), repeat=2):
        if g is None:
            tr = sum((W[i, k, j, k] for k in range(n)), W[0, 0, 0, 0] * 0)
        else:
            tr = W[0, 0, 0, 0] * 0
            for k, l in product(range(n), repeat=2):
                if not is_zero(g.inverse[k][l]):
                    tr = tr + g.inverse[k][l] * W[i, k, j, l]
        if not is_zero(tr):
            bad["Weyl trace"] = (i, j)
            break
    for name, witness in bad.items():
        report.add(name, witness is None, "holds", "holds" if witness is None else f"fails at {witness}")
    return report


def torsion_defects(gamma: np.ndarray, c: CommutationCoefficients) -> List[Tuple[int, int, int]]:
    n = c.dimension
    return [(k, i, j) for k, i, j in product(range(n), repeat=3)
            if gamma[k, i, j] - gamma[k, j, i] != c[i, j, k]]


def metric_compatibility_defects(gamma: np.ndarray, g: MetricComponents, f: Frame) -> List[Tuple[int, int, int]]:
    """Indices where ``e_i(g_jk) - Gamma^l_ij g_lk - Gamma^l_ik g_jl`` is not identically zero."""
    n = f.dimension
    out = []
    for i, j, k in product(range(n), repeat=3):
        acc = f.apply(i, g.g[j][k])
        for l in range(n):
            acc = acc - gamma[l, i, j] * g.g[l][k] - gamma[l, i, k] * g.g[j][l]
        if not is_zero(acc):
            out.append((i, j, k))
    return out


# ---------------------------------------------------------------------------
# Geometry bundle, sample points and file loading
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameGeometry:
    """A frame plus metric, with connection and curvature computed on demand."""

    frame: Frame
    metric: MetricComponents
    name: str = "geometry"

    def __post_init__(self):
        if self.metric.dimension != self.frame.dimension:
            raise ValueError("metric and frame dimensions differ")

    @property
    def dimension(self) -> int:
        return self.frame.dimension

    @cached_property
    def commutators(self) -> CommutationCoefficients:
        return commutators_from_frame(self.frame)

    @cached_property
    def christoffel(self) -> np.ndarray:
        return christoffel(self.metric, self.commutators, self.frame)

    @cached_property
    def curvature(self) -> CurvatureTensor:
        return riemann(self.christoffel, self.commutators, self.frame, self.metric)

    def sample_points(self, count: int = SAMPLE_COUNT, seed: int = SAMPLE_SEED):
        return sample_points(self.frame.coordinates, count, seed, self.frame.laurent)


def sample_points(coordinates: Sequence[str], count: int = SAMPLE_COUNT, seed: int = SAMPLE_SEED,
                  laurent=()) -> List[Dict[str, ComplexScalar]]:
    """Deterministic pseudo-random rational points (nonzero on Laurent coordinates)."""
    rng = random.Random(seed)
    laurent = set(laurent)
    points = []
    for _ in range(count):
        pt = {}
        for c in coordinates:
            while True:
                value = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                if value or c not in laurent:
                    break
            pt[c] = ComplexScalar(value)
        points.append(pt)
    return points


def numeric_rank(matrix_of_fields, points) -> List[int]:
    """Exact rank of a FieldElement matrix evaluated at each point."""
    if all(x.is_constant() for row in matrix_of_fields for x in row):
        r = rank([[x.constant_value() for x in row] for row in matrix_of_fields])
        return [r for _ in points]
    return [rank([[x.evaluate(pt) for x in row] for row in matrix_of_fields]) for pt in points]


def _parse_entry(value, ring: PolynomialRing) -> FieldElement:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if isinstance(value, float) and not value.is_integer():
            raise ValueError("floating point entries are not accepted; use a rational string")
        return ring.const(int(value))
    if isinstance(value, str):
        return parse_polynomial(value, ring.variables, ring.laurent)
    raise ValueError(f"cannot parse geometry entry {value!r}")


def geometry_from_dict(data: Mapping) -> FrameGeometry:
    """Build a geometry from the declarative description used by the JSON files.

    Keys: ``coordinates`` (list), optional ``laurent`` (list), ``frame`` (list of
    ``{coordinate: polynomial string}``), ``metric`` (square list of strings)
    and optional ``name``.
    """
    coords = tuple(data["coordinates"])
    laurent = frozenset(data.get("laurent", ()))
    ring = PolynomialRing(coords, laurent)
    basis = tuple({c: _parse_entry(v, ring) for c, v in vec.items()} for vec in data["frame"])
    frame = Frame(coords, basis, laurent)
    metric = MetricComponents(tuple(tuple(_parse_entry(x, ring) for x in row) for row in data["metric"]))
    return FrameGeometry(frame, metric, data.get("name", "geometry"))


def load_geometry(path) -> FrameGeometry:
    with open(path, encoding="utf-8") as fh:
        return geometry_from_dict(json.load(fh))


DATA_DIR = Path(__file__).resolve().parent / "data"
