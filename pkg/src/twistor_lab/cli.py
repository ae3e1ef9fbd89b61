"""``twistor-lab verify <suite>``: run the verification suites and report the outcome.

Exit codes: 0 every check passed, 1 some check failed, 2 usage error,
3 internal computation error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import ren_wang_twistor as rw
from .contact_structures import (
    AlmostContactData,
    TransformParameters,
    equivalent_transform,
    load_structure,
    same_equivalence_class,
    verify_axioms,
)
from .exact_algebra import ComplexScalar, ZERO, format_scalar
from .frame_geometry import FrameGeometry, curvature_from_components, load_geometry
from .reports import Report
from .two_form_calculus import (
    check_beta_curvature_condition,
    random_bianchi_tensor,
    random_symmetric_matrix,
    ricci_relations,
    verify_trace_free_ricci_identities,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3
DEFAULT_SEED = 42
SEED_ENV = "TWISTOR_LAB_SEED"
STATUSES = ("pass", "fail", "error")
GEOMETRY_SUITES = ("heisenberg", "real-slice", "itoh")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    expected: str
    actual: str
    paper_ref: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    checks: Tuple[CheckResult, ...]
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_dict(self) -> Dict:
        return {"suite": self.suite, "seed": self.seed, "checks": [asdict(c) for c in self.checks],
                "elapsed_ms": self.elapsed_ms}

    @classmethod
    def from_dict(cls, data: Dict) -> "SuiteReport":
        return cls(data["suite"], int(data["seed"]), tuple(CheckResult(**c) for c in data["checks"]),
                   int(data["elapsed_ms"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SuiteReport":
        return cls.from_dict(json.loads(text))


def render_report(r: SuiteReport, fmt: str = "text") -> bytes:
    if fmt == "json":
        return r.to_json().encode("utf-8")
    if fmt != "text":
        raise UsageError(f"unknown format {fmt!r}")
    lines = [f"suite {r.suite} (seed {r.seed})"]
    for c in r.checks:
        mark = "✓" if c.status == "pass" else "✗"
        line = f"{mark} {c.name}  [{c.paper_ref}]"
        if c.status != "pass":
            line += f"\n    expected: {c.expected}\n    actual:   {c.actual}"
        lines.append(line)
    passed = sum(c.status == "pass" for c in r.checks)
    lines.append(f"{passed}/{len(r.checks)} checks passed")
    if r.elapsed_ms:
        lines.append(f"elapsed {r.elapsed_ms} ms")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Assembling suites
# ---------------------------------------------------------------------------

Group = Tuple[Report, str]


def _results(groups: Sequence[Group], prefix: str = "") -> List[CheckResult]:
    out = []
    for report, ref in groups:
        for check in report.checks:
            out.append(CheckResult(f"{prefix}{report.title}: {check.name}", "pass" if check.passed else "fail",
                                   str(check.expected), str(check.actual), ref))
    return out


def _count_check(report: Report, name: str, good: int, total: int) -> None:
    report.add(name, good == total, f"{total}/{total}", f"{good}/{total}")


def _rational(rng: random.Random, bound: int = 9, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def _random_line(rng: random.Random) -> rw.TwistorLineParams:
    c = lambda: ComplexScalar(_rational(rng), _rational(rng))  # noqa: E731
    return rw.TwistorLineParams(((c(), c()), (c(), c())), c())


def gluing_reports(seed: int, samples: int) -> List[Group]:
    rng = random.Random(seed)
    report = Report("gluing map")
    image = rw.transition(rw.ChartPoint("W", (1, 1, 1, 1)))
    report.add("(1,1,1,1) in W maps to (1,1,1,3)", image == rw.ChartPoint("W~", (1, 1, 1, 3)), "1, 1, 1, 3",
               ", ".join(format_scalar(x) for x in image.coords))
    good = 0
    for _ in range(samples):
        z = ComplexScalar(_rational(rng, nonzero=True), _rational(rng))
        p = rw.ChartPoint("W", (z, ComplexScalar(_rational(rng), _rational(rng)),
                                ComplexScalar(_rational(rng), _rational(rng)), ComplexScalar(_rational(rng))))
        good += rw.transition(rw.transition(p)) == p
    _count_check(report, "round trip through both charts", good, samples)
    try:
        rw.transition(rw.ChartPoint("W", (0, 1, 1, 1)))
        raised = False
    except rw.OutOfDomain:
        raised = True
    report.add("undefined over zeta = 0", raised, "OutOfDomain", "OutOfDomain" if raised else "no error")

    bundle = Report("normal bundle")
    J0 = rw.jacobian_on_line()
    expected = ["-zeta^-2", "zeta^-1", "zeta^-1", "1"]
    try:
        diag = rw.diagonal_entries(J0)
        is_diag = True
    except rw.NotSplitDiagonal:
        diag, is_diag = [J0[i][i] for i in range(4)], False
    bundle.add("Jacobian on C0 is diagonal", is_diag, "diagonal", "diagonal" if is_diag else "not diagonal")
    bundle.add("Jacobian on C0", [str(d) for d in diag] == expected, ", ".join(expected),
               ", ".join(str(d) for d in diag))
    row = [str(x) for x in rw.jacobian()[3]]
    want = ["-2*zeta^-2*w0*w1", "2*zeta^-1*w1", "2*zeta^-1*w0", "1"]
    bundle.add("last row of the Jacobian", row == want, ", ".join(want), ", ".join(row))
    nb = rw.normal_bundle_degrees(diag)
    bundle.add("tangent degree", nb.tangent_degree == 2, "2", str(nb.tangent_degree))
    bundle.add("normal degrees", nb.as_counter() == Counter({1: 2, 0: 1}), "1, 1, 0",
               ", ".join(map(str, nb.normal_degrees)))
    translated = rw.verify_translated_line()
    groups = [(report, "gluing of the two charts"), (bundle, "normal bundle of the zero section"),
              (translated, "normal bundle along translated lines"),
              (rw.verify_chart_compatibility(), "twistor line parametrisation")]
    for k in range(3):
        line = _random_line(rng)
        r = rw.verify_translated_line(line)
        r.title = f"translated line {k}"
        groups.append((r, "normal bundle along translated lines"))
    return groups


def null_cone_reports(seed: int, samples: int) -> List[Group]:
    rng = random.Random(seed + 1)
    _, _, derivation = rw.symbolic_null_cone()
    report = Report("null cone")
    theta = rw.contact_form_coordinates()
    G = rw.heisenberg_coordinate_metric()
    lin_ok = rank_ok = cross_ok = 0
    for _ in range(samples):
        x = _random_line(rng)
        data = rw.recover_null_cone(x)
        at = x.assignment()
        theta_x = tuple(theta[c].evaluate(at) for c in rw.COMPLEX_COORDS)
        lin_ok += data.linear == theta_x
        rank_ok += data.quadratic_rank() == 4
        # one generic and one null vector
        for null in (False, True):
            u = (ComplexScalar(_rational(rng)), ComplexScalar(_rational(rng)))
            w = (ComplexScalar(_rational(rng)), ComplexScalar(_rational(rng)))
            a = ((u[0] * w[0], u[0] * w[1]), (u[1] * w[0], u[1] * w[1])) if null else \
                ((ComplexScalar(_rational(rng)), ComplexScalar(_rational(rng))),
                 (ComplexScalar(_rational(rng)), ComplexScalar(_rational(rng))))
            v = rw.TangentVector5(a, ComplexScalar(_rational(rng)))
            if null:
                _, lin = rw.incidence_conditions(x, v)
                v = rw.TangentVector5(a, v.b - lin)
            vec = v.flat()
            gvv = sum((G[i][j].evaluate(at) * vec[i] * vec[j] for i in range(5) for j in range(5)), ZERO)
            tv = sum((t * c for t, c in zip(theta_x, vec)), ZERO)
            cross_ok += data.contains(v) == (gvv.is_zero() and tv.is_zero())
    _count_check(report, "linear form equals theta at x", lin_ok, samples)
    _count_check(report, "quadratic form has rank 4", rank_ok, samples)
    _count_check(report, "null cone equals {g(v,v) = 0, theta(v) = 0}", cross_ok, 2 * samples)
    origin = rw.recover_null_cone(rw.TwistorLineParams.origin())
    report.add("linear form at the origin is dt", origin.linear == (ZERO,) * 4 + (ComplexScalar(1),),
               "0, 0, 0, 0, 1", ", ".join(format_scalar(x) for x in origin.linear))
    return [(derivation, "null cone from the line parametrisation"), (report, "null cone: hyperplane and quadric")]


def suite_heisenberg(seed: int, samples: Optional[int], structure: Optional[AlmostContactData] = None) -> List[Group]:
    n = samples or 20
    groups: List[Group] = [(rw.verify_heisenberg(structure), "complex Heisenberg contact metric structure")]
    if structure is None:
        groups.append((rw.displayed_phi_report(), "sign convention for phi"))
    groups += gluing_reports(seed, n)
    groups += null_cone_reports(seed, n)
    return groups


def suite_real_slice(seed: int, samples: Optional[int], structure: Optional[AlmostContactData] = None) -> List[Group]:
    a = structure or rw.real_slice()
    n = samples or 100
    groups: List[Group] = [
        (rw.verify_real_slice(a), "real slice K-contact structure"),
        (rw.verify_curvature_table(a.geometry), "real slice curvature table"),
        (rw.verify_ricci_scalar(a.geometry), "real slice Ricci and scalar curvature"),
        (rw.standard_form_check(), "standard contact form on R^5"),
    ]
    cr = rw.run_cr_suite(n, seed)
    report = Report("CR image")
    _count_check(report, "real-slice points satisfy the image equation", cr["on_image"], n)
    _count_check(report, "perturbed points violate the image equation", cr["perturbed_off_image"], n)
    origin = rw.eta_map(rw.real_slice_line(0, 0, 0, 0, 0), 0)
    report.add("origin", rw.cr_image_membership(origin), "True", str(rw.cr_image_membership(origin)))
    groups.append((report, "CR image of the real slice"))
    return groups


def suite_itoh(seed: int, samples: Optional[int], geometry: Optional[FrameGeometry] = None) -> List[Group]:
    geometry = geometry or rw.real_slice().geometry
    return [(rw.verify_itoh_conditions(geometry), "CR integrability conditions")]


def suite_incidence(seed: int, samples: Optional[int]) -> List[Group]:
    n = samples or 1000
    res = rw.run_incidence_suite(n, seed)
    report = Report("incidence")
    _count_check(report, "exact conditions agree with the two-chart oracle", res["agree"], n)
    report.add("pairs with det a = 0", res["det_zero"] * 5 >= n, f">= {-(-n // 5)}", str(res["det_zero"]))
    _count_check(report, "witness is a common point", n - res["point_failures"], n)
    O = rw.TwistorLineParams.origin()
    cases = (
        ("a01 = 1 meets at zeta = 0", rw.TangentVector5(((0, 1), (0, 0)), 0), "incident", ComplexScalar(0)),
        ("a = identity does not meet", rw.TangentVector5(((1, 0), (0, 1)), 0), "not_incident", None),
        ("a00 = 1 meets at infinity", rw.TangentVector5(((1, 0), (0, 0)), 0), "incident", rw.INFINITY),
        ("zero vector is degenerate", rw.TangentVector5(((0, 0), (0, 0)), 0), "degenerate", None),
        ("pure t direction does not meet", rw.TangentVector5(((0, 0), (0, 0)), 1), "not_incident", None),
    )
    for name, v, outcome, witness in cases:
        r = rw.incidence(O, v)
        ok = r.outcome == outcome and r.witness == witness
        report.add(name, ok, f"{outcome} {witness}", f"{r.outcome} {r.witness}")
    return [(report, "incidence of neighbouring twistor lines")]


FAMILIES = ("generic", "passing", "weyl_only", "shape_only")


def suite_appendix_a(seed: int, samples: Optional[int]) -> List[Group]:
    n = samples or 100
    rng = random.Random(seed)
    report = Report("beta-plane condition")
    agree = relations = passing = symbolic_agree = 0
    symbolic_n = min(n, 20)
    for k in range(n):
        family = FAMILIES[k % len(FAMILIES)]
        curv = curvature_from_components(random_bianchi_tensor(rng, family, complex_entries=k % 2 == 1))
        sampled = check_beta_curvature_condition(curv, "sampled", samples=25, seed=seed + k)
        agree += sampled.checks["agrees with block test"].passed
        if k < symbolic_n:
            symbolic = check_beta_curvature_condition(curv, "symbolic")
            symbolic_agree += symbolic.checks["agrees with block test"].passed
        if family == "passing":
            passing += 1
            relations += ricci_relations(curv).passed
    _count_check(report, "sampled condition agrees with block test", agree, n)
    _count_check(report, "symbolic condition agrees with block test", symbolic_agree, symbolic_n)
    _count_check(report, "Ricci relations in the passing family", relations, passing)
    return [(report, "beta-plane curvature condition")]


def suite_appendix_b(seed: int, samples: Optional[int]) -> List[Group]:
    return [(rw.gundry_comparison(), "patching function and contact form")]


def suite_lemma_2_3(seed: int, samples: Optional[int]) -> List[Group]:
    n = samples or 200
    rng = random.Random(seed)
    a = rw.heisenberg_structure()
    report = Report("equivalence transform")
    closed = normalised = recovered = 0
    for _ in range(n):
        f, F = _rational(rng, nonzero=True), _rational(rng, nonzero=True)
        X0 = [0] + [ComplexScalar(_rational(rng), _rational(rng)) for _ in range(4)]
        b = equivalent_transform(a, TransformParameters(f, F, X0))
        closed += verify_axioms(b).passed
        normalised += b.theta_of(b.xi) == 1
        recovered += bool(same_equivalence_class(a, b))
    _count_check(report, "transformed structures satisfy the axioms", closed, n)
    _count_check(report, "theta'(xi') = 1", normalised, n)
    _count_check(report, "transform is recognised as equivalent", recovered, n)
    ident = equivalent_transform(a, TransformParameters(1, 1, [0] * 5))
    same = ident.phi == a.phi and ident.xi == a.xi and ident.theta == a.theta and ident.g == a.g
    report.add("f = F = 1, X0 = 0 is the identity", same, "identity", "identity" if same else "changed")
    # theta = dt written on the Heisenberg frame is not a multiple of theta
    frame = a.geometry.frame
    dt = frame.one_form_components([0, 0, 0, 0, 1])
    other = AlmostContactData(a.geometry, a.phi, a.xi, dt, name="theta = dt")
    decision = same_equivalence_class(a, other)
    report.add("theta = dt is not equivalent", not decision.equivalent, "not equivalent", decision.reason)
    return [(report, "equivalence transform of almost contact structures")]


def suite_lemma_3_1(seed: int, samples: Optional[int]) -> List[Group]:
    n = samples or 100
    rng = random.Random(seed)
    report = Report("trace-free Ricci operator")
    counts = Counter()
    for _ in range(n):
        K = random_symmetric_matrix(rng)
        r = verify_trace_free_ricci_identities(K)
        for check in r.checks:
            counts[check.name] += check.passed
    for name in ("anticommutator lands in contact forms", "minus-minus block is scalar"):
        _count_check(report, name, counts[name], n)
    return [(report, "trace-free Ricci operator on two-forms")]


def suite_product(seed: int, samples: Optional[int]) -> List[Group]:
    return [(rw.product_example(), "product example")]


SUITES: Dict[str, Callable[..., List[Group]]] = {
    "heisenberg": suite_heisenberg,
    "real-slice": suite_real_slice,
    "itoh": suite_itoh,
    "incidence": suite_incidence,
    "appendix-a": suite_appendix_a,
    "appendix-b": suite_appendix_b,
    "lemma-2-3": suite_lemma_2_3,
    "lemma-3-1": suite_lemma_3_1,
    "product": suite_product,
}


def _load_geometry_option(suite: str, path: str):
    if suite not in GEOMETRY_SUITES:
        raise UsageError(f"--geometry is only accepted by {', '.join(GEOMETRY_SUITES)}")
    try:
        if suite == "itoh":
            return load_geometry(path)
        return load_structure(path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load {path}: {exc}") from exc


def run_suite(name: str, seed: int = DEFAULT_SEED, samples: Optional[int] = None,
              geometry: Optional[str] = None, timing: bool = False) -> SuiteReport:
    if name != "all" and name not in SUITES:
        raise UsageError(f"unknown suite {name!r}")
    if samples is not None and samples < 1:
        raise UsageError("--samples must be at least 1")
    start = time.perf_counter()
    if name == "all":
        if geometry is not None:
            raise UsageError("--geometry cannot be combined with 'all'")
        checks = []
        for suite, fn in SUITES.items():
            checks += _results(fn(seed, samples), prefix=f"{suite}/")
    else:
        extra = () if geometry is None else (_load_geometry_option(name, geometry),)
        checks = _results(SUITES[name](seed, samples, *extra))
    checks.sort(key=lambda c: c.name)
    names = [c.name for c in checks]
    if len(set(names)) != len(names):
        raise AssertionError("duplicate check names")
    elapsed = int((time.perf_counter() - start) * 1000) if timing else 0
    return SuiteReport(name, seed, tuple(checks), elapsed)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twistor-lab", description="Exact verification suites for the twistor examples.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=list(SUITES) + ["all"])
    verify.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    verify.add_argument("--samples", type=int, default=None, help="number of random samples for randomised suites")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--geometry", default=None, help="JSON description replacing the built-in example")
    verify.add_argument("--timing", action="store_true", help="record elapsed time (makes output nondeterministic)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        seed = args.seed if args.seed is not None else _default_seed()
        report = run_suite(args.suite, seed, args.samples, args.geometry, args.timing)
    except UsageError as exc:
        print(f"twistor-lab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - any failure inside a suite is an internal error
        print(f"twistor-lab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.buffer.write(render_report(report, args.format))
    sys.stdout.flush()
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
