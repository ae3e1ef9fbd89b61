"""Exact scalars, Laurent polynomials and small exact linear algebra.

Every quantity in the package lives in Q(i): a ``ComplexScalar`` is a pair of
``Fraction`` objects, and a ``FieldElement`` is a sparse Laurent polynomial
with ``ComplexScalar`` coefficients.  Floating point never enters this module.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Rational = Fraction

Exponent = Tuple[int, ...]


class PoleAtPoint(ZeroDivisionError):
    """A Laurent variable with a negative power was evaluated at zero."""


class UnknownVariable(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


class PolynomialParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

class ComplexScalar:
    """Exact complex rational ``re + im*I``.

    Instances are treated as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "ComplexScalar":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value) -> "ComplexScalar":
        if isinstance(value, ComplexScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._make(Fraction(value), _ZERO)
        if isinstance(value, str):
            return parse_scalar(value)
        raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, ComplexScalar):
            if not other.re and not other.im:
                return self
            if not self.re and not self.im:
                return other
            return ComplexScalar._make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return ComplexScalar._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ComplexScalar):
            return ComplexScalar._make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return ComplexScalar._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return ComplexScalar._make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, ComplexScalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            if (not a and not b) or (not c and not d):
                return ComplexScalar._make(_ZERO, _ZERO)
            if not b and not d:
                return ComplexScalar._make(a * c, _ZERO)
            return ComplexScalar._make(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return ComplexScalar._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return ComplexScalar._make(self.re / other, self.im / other)
        if isinstance(other, ComplexScalar):
            return self * other.reciprocal()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    def __neg__(self):
        return ComplexScalar._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> "ComplexScalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return ComplexScalar._make(self.re / n, -self.im / n)

    def conjugate(self) -> "ComplexScalar":
        return ComplexScalar._make(self.re, -self.im)

    def norm2(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, ComplexScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, FieldElement):
            return other == self
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexScalar({str(self)!r})"

    def __str__(self):
        return format_scalar(self)


_ZERO = Fraction(0)
ZERO = ComplexScalar(0)
ONE = ComplexScalar(1)
I = ComplexScalar(0, 1)

ScalarLike = Union[int, Fraction, ComplexScalar]


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(z: ComplexScalar) -> str:
    """Canonical rendering used in reports: ``-3``, ``8/3``, ``1/2+2/3I``, ``-I``."""
    if not z.im:
        return _fmt_fraction(z.re)
    if z.im == 1:
        im = "I"
    elif z.im == -1:
        im = "-I"
    else:
        im = _fmt_fraction(z.im) + "I"
    if not z.re:
        return im
    sep = "" if im.startswith("-") else "+"
    return f"{_fmt_fraction(z.re)}{sep}{im}"


def parse_scalar(text: str) -> ComplexScalar:
    """Parse the rational-string encoding (``"3/4"``, ``"1/2+2/3I"``, ``"-I"``)."""
    value = parse_polynomial(text, variables=())
    if not value.is_constant():
        raise PolynomialParseError(f"not a scalar: {text!r}")
    return value.constant_value()


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

def _coerce_scalar(value) -> ComplexScalar:
    if isinstance(value, ComplexScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexScalar._make(Fraction(value), _ZERO)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


class FieldElement:
    """Sparse multivariate Laurent polynomial over Q(i).

    ``variables`` is the ordered tuple of coordinate names; ``laurent`` the
    subset allowed to carry negative exponents.  Terms are kept sorted
    lexicographically by exponent vector and zero coefficients are never
    stored, so two elements over the same variables are equal exactly when
    their term maps coincide.  Binary operations on elements with different
    variable lists work over the union of the two lists.
    """

    __slots__ = ("variables", "laurent", "terms")

    def __init__(self, terms: Mapping[Exponent, ScalarLike] | None = None,
                 variables: Sequence[str] = (), laurent: Iterable[str] = ()):
        self.variables = tuple(variables)
        self.laurent = frozenset(laurent)
        unknown = self.laurent.difference(self.variables)
        if unknown:
            raise UnknownVariable(f"Laurent flag on undeclared variable(s) {sorted(unknown)}")
        n = len(self.variables)
        laurent_mask = tuple(v in self.laurent for v in self.variables)
        clean: Dict[Exponent, ComplexScalar] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} variables")
            for e, lau, name in zip(exp, laurent_mask, self.variables):
                if e < 0 and not lau:
                    raise ValueError(f"negative exponent on non-Laurent variable {name!r}")
            c = _coerce_scalar(coeff)
            if not c.is_zero():
                clean[exp] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def _raw(cls, terms: Dict[Exponent, ComplexScalar], variables: Tuple[str, ...],
             laurent: frozenset) -> "FieldElement":
        obj = object.__new__(cls)
        obj.variables = variables
        obj.laurent = laurent
        obj.terms = dict(sorted(terms.items()))
        return obj

    # constructors ----------------------------------------------------------
    @classmethod
    def constant(cls, value, variables: Sequence[str] = (), laurent: Iterable[str] = ()):
        c = _coerce_scalar(value)
        n = len(tuple(variables))
        return cls({(0,) * n: c} if not c.is_zero() else {}, variables, laurent)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str], laurent: Iterable[str] = ()):
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(name)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls({exp: ONE}, variables, laurent)

    def _like(self, terms: Dict[Exponent, ComplexScalar]) -> "FieldElement":
        return FieldElement._raw({e: c for e, c in terms.items() if not c.is_zero()},
                                 self.variables, self.laurent)

    # alignment -------------------------------------------------------------
    def with_variables(self, variables: Sequence[str], laurent: Iterable[str] = ()) -> "FieldElement":
        """Re-express over a larger variable list (which must contain every used variable)."""
        variables = tuple(variables)
        laurent = frozenset(laurent) | self.laurent
        if variables == self.variables and laurent == self.laurent:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        for v, k in zip(self.variables, range(len(self.variables))):
            if v not in pos and any(e[k] for e in self.terms):
                raise UnknownVariable(f"variable {v!r} is used but missing from {variables}")
        laurent = laurent & frozenset(variables)
        new_terms = {}
        for exp, c in self.terms.items():
            target = [0] * len(variables)
            for v, e in zip(self.variables, exp):
                if e:
                    target[pos[v]] = e
            new_terms[tuple(target)] = c
        return FieldElement(new_terms, variables, laurent)

    def _aligned(self, other: "FieldElement"):
        if self.variables == other.variables:
            return self, other
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        laurent = self.laurent | other.laurent
        return self.with_variables(variables, laurent), other.with_variables(variables, laurent)

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction, ComplexScalar)):
            return FieldElement.constant(other, self.variables, self.laurent)
        return None

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return a._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw({e: -c for e, c in self.terms.items()}, self.variables, self.laurent)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ComplexScalar)):
            c = _coerce_scalar(other)
            if c.is_zero():
                return self._like({})
            return FieldElement._raw({e: v * c for e, v in self.terms.items()},
                                     self.variables, self.laurent)
        if not isinstance(other, FieldElement):
            return NotImplemented
        a, b = self._aligned(other)
        terms: Dict[Exponent, ComplexScalar] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                terms[e] = terms[e] + p if e in terms else p
        return a._like(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, ComplexScalar)):
            return self * _coerce_scalar(other).reciprocal()
        if isinstance(other, FieldElement):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement.constant(1, self.variables, self.laurent)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # units -------------------------------------------------------------------
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """True when the element is invertible in the Laurent ring (c * monomial in Laurent variables)."""
        if len(self.terms) != 1:
            return False
        (exp,) = self.terms
        return all(e == 0 or v in self.laurent for v, e in zip(self.variables, exp))

    def inverse(self) -> "FieldElement":
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit of the Laurent polynomial ring")
        ((exp, c),) = self.terms.items()
        return FieldElement._raw({tuple(-e for e in exp): c.reciprocal()}, self.variables, self.laurent)

    def divide_exact(self, divisor: "FieldElement | ScalarLike") -> "FieldElement":
        """Exact quotient ``self / divisor``; raises ``NotInvertible`` when there is a remainder.

        Units divide directly.  Other divisors use multivariate long division in
        lex order, which for a single divisor leaves a zero remainder exactly
        when the division is exact.
        """
        d = self._coerce(divisor)
        if d is None:
            raise TypeError("unsupported divisor")
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a, d = self._aligned(d)
        if d.is_unit():
            return a * d.inverse()
        if any(e < 0 for exp in list(a.terms) + list(d.terms) for e in exp):
            raise NotInvertible("long division is only supported for ordinary polynomials")
        lead_exp, lead_c = max(d.terms.items())
        quotient: Dict[Exponent, ComplexScalar] = {}
        rem = a
        while not rem.is_zero():
            exp, c = max(rem.terms.items())
            shift = tuple(x - y for x, y in zip(exp, lead_exp))
            if any(s < 0 for s in shift):
                raise NotInvertible(f"{self} is not divisible by {divisor}")
            q = c / lead_c
            quotient[shift] = quotient.get(shift, ZERO) + q
            rem = rem - FieldElement._raw({shift: q}, a.variables, a.laurent) * d
        return a._like(quotient)

    # calculus ----------------------------------------------------------------
    def differentiate(self, var: str) -> "FieldElement":
        if var not in self.variables:
            raise UnknownVariable(f"{var!r} is not a variable of this element ({self.variables})")
        k = self.variables.index(var)
        terms = {}
        for exp, c in self.terms.items():
            e = exp[k]
            if e:
                new = exp[:k] + (e - 1,) + exp[k + 1:]
                terms[new] = c * e
        return self._like(terms)

    def residue(self, var: str) -> "FieldElement":
        """Coefficient of ``var**-1``, as an element over the remaining variables."""
        if var not in self.laurent:
            raise UnknownVariable(f"{var!r} is not a Laurent variable of this element")
        k = self.variables.index(var)
        rest = self.variables[:k] + self.variables[k + 1:]
        terms = {exp[:k] + exp[k + 1:]: c for exp, c in self.terms.items() if exp[k] == -1}
        return FieldElement(terms, rest, self.laurent - {var})

    def evaluate(self, assignment: Mapping[str, ScalarLike]) -> ComplexScalar:
        values = []
        for k, v in enumerate(self.variables):
            if v in assignment:
                values.append(_coerce_scalar(assignment[v]))
            elif any(exp[k] for exp in self.terms):
                raise UnknownVariable(f"no value assigned to {v!r}")
            else:
                values.append(ZERO)
        total = ZERO
        for exp, c in self.terms.items():
            term = c
            for val, e, name in zip(values, exp, self.variables):
                if e > 0:
                    term = term * val ** e
                elif e < 0:
                    if val.is_zero():
                        raise PoleAtPoint(f"{name!r} = 0 with exponent {e}")
                    term = term * val ** e
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, "FieldElement | ScalarLike"]) -> "FieldElement":
        """Replace variables by elements; untouched variables are kept."""
        keep = [v for v in self.variables if v not in mapping]
        lau = [v for v in keep if v in self.laurent]
        subs = {}
        variables = tuple(keep)
        laurent = frozenset(lau)
        for name, value in mapping.items():
            if name not in self.variables:
                continue
            if isinstance(value, FieldElement):
                variables = variables + tuple(v for v in value.variables if v not in variables)
                laurent = laurent | value.laurent
            subs[name] = value
        base = {v: FieldElement.variable(v, variables, laurent) for v in keep}
        for name, value in subs.items():
            if isinstance(value, FieldElement):
                base[name] = value.with_variables(variables, laurent)
            else:
                base[name] = FieldElement.constant(value, variables, laurent)
        cache: Dict[Tuple[str, int], FieldElement] = {}

        def power(name, e):
            key = (name, e)
            if key not in cache:
                cache[key] = base[name] ** e
            return cache[key]

        total = FieldElement({}, variables, laurent)
        for exp, c in self.terms.items():
            term = FieldElement.constant(c, variables, laurent)
            for name, e in zip(self.variables, exp):
                if e:
                    term = term * power(name, e)
            total = total + term
        return total

    # inspection --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> ComplexScalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values())) if self.terms else ZERO

    def constant_term(self) -> ComplexScalar:
        return self.terms.get((0,) * len(self.variables), ZERO)

    def used_variables(self) -> Tuple[str, ...]:
        return tuple(v for k, v in enumerate(self.variables) if any(e[k] for e in self.terms))

    def degree(self, var: str) -> int:
        k = self.variables.index(var)
        return max((e[k] for e in self.terms), default=0)

    def coefficients(self, var_names: Sequence[str]) -> Dict[Exponent, "FieldElement"]:
        """Split into ``{exponents of var_names: coefficient over the other variables}``."""
        idx = [self.variables.index(v) for v in var_names]
        rest_idx = [k for k in range(len(self.variables)) if k not in idx]
        rest = tuple(self.variables[k] for k in rest_idx)
        rest_lau = self.laurent & frozenset(rest)
        groups: Dict[Exponent, Dict[Exponent, ComplexScalar]] = {}
        for exp, c in self.terms.items():
            key = tuple(exp[k] for k in idx)
            groups.setdefault(key, {})[tuple(exp[k] for k in rest_idx)] = c
        return {k: FieldElement(v, rest, rest_lau) for k, v in sorted(groups.items())}

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def canonical_key(self):
        """Variable-order independent key (used for hashing and equality across rings)."""
        return frozenset(
            (tuple(sorted((v, e) for v, e in zip(self.variables, exp) if e)), c)
            for exp, c in self.terms.items()
        )

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if self.variables == other.variables:
                return self.terms == other.terms
            return self.canonical_key() == other.canonical_key()
        if isinstance(other, (int, Fraction, ComplexScalar)):
            c = _coerce_scalar(other)
            return self.is_constant() and self.constant_value() == c
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(self.canonical_key())

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"FieldElement({str(self)!r}, variables={self.variables})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.terms.items():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exp) if e
            )
            if not mono:
                pieces.append(format_scalar(c))
                continue
            if c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            elif c.is_real() or not c.re:
                pieces.append(f"{format_scalar(c)}*{mono}")
            else:
                pieces.append(f"({format_scalar(c)})*{mono}")
        out = pieces[0]
        for p in pieces[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out


class PolynomialRing:
    """Convenience factory for elements over a fixed variable list."""

    def __init__(self, variables: Sequence[str], laurent: Iterable[str] = ()):
        self.variables = tuple(variables)
        self.laurent = frozenset(laurent)

    def gens(self) -> Tuple[FieldElement, ...]:
        return tuple(self.var(v) for v in self.variables)

    def var(self, name: str) -> FieldElement:
        return FieldElement.variable(name, self.variables, self.laurent)

    def const(self, value) -> FieldElement:
        return FieldElement.constant(value, self.variables, self.laurent)

    def zero(self) -> FieldElement:
        return FieldElement({}, self.variables, self.laurent)

    def __call__(self, value) -> FieldElement:
        if isinstance(value, str):
            return parse_polynomial(value, self.variables, self.laurent)
        if isinstance(value, FieldElement):
            return value.with_variables(self.variables, self.laurent)
        return self.const(value)

    def __repr__(self):
        return f"PolynomialRing({self.variables}, laurent={sorted(self.laurent)})"


def poly_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Parsing: integers/rationals, I, identifiers, + - * / ^ and parentheses.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, ident, sym = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        elif sym is not None:
            if sym not in "+-*/^()":
                raise PolynomialParseError(f"unexpected character {sym!r} in {text!r}")
            tokens.append(("op", sym))
    return tokens


class _Parser:
    def __init__(self, text, ring: PolynomialRing):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val = self.take()
        if kind != "op" or val != sym:
            raise PolynomialParseError(f"expected {sym!r} in {self.text!r}")

    def parse(self) -> FieldElement:
        if not self.tokens:
            raise PolynomialParseError("empty expression")
        value = self.expr()
        if self.i != len(self.tokens):
            raise PolynomialParseError(f"trailing input in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        raise PolynomialParseError(f"division by non-constant or zero in {self.text!r}")
                    value = value * rhs.constant_value().reciprocal()
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                value = value * self.unary()  # implicit multiplication: 2x, 2/3I
            else:
                return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise PolynomialParseError(f"exponent must be an integer in {self.text!r}")
            try:
                return base ** (sign * val)
            except NotInvertible as exc:
                raise PolynomialParseError(str(exc)) from exc
        return base

    def primary(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            if val == "I":
                return self.ring.const(I)
            if val not in self.ring.variables:
                raise PolynomialParseError(f"unknown variable {val!r} in {self.text!r}")
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolynomialParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_polynomial(text: str, variables: Sequence[str] = (), laurent: Iterable[str] = ()) -> FieldElement:
    """Parse e.g. ``"ds"``-free polynomial strings like ``"x2 - 2/3I*zeta^-1"``."""
    return _Parser(text, PolynomialRing(variables, laurent)).parse()


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

def is_zero(x) -> bool:
    if isinstance(x, (ComplexScalar, FieldElement)):
        return x.is_zero()
    return x == 0


def identity_matrix(n: int, one=ONE, zero=ZERO):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = a[i][0] * b[0][j]
            for k in range(1, m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


def determinant(matrix):
    """Laplace expansion; works for any commutative ring entries (n <= 6 in practice)."""
    n = len(matrix)
    if n == 0:
        return ONE
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        entry = matrix[0][j]
        if is_zero(entry):
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return matrix[0][0] * 0
    return total


def inverse_matrix(matrix):
    """Exact inverse via the adjugate; the determinant must be a unit."""
    n = len(matrix)
    det = determinant(matrix)
    if is_zero(det):
        raise NotInvertible("singular matrix (determinant is zero)")
    if isinstance(det, FieldElement):
        det_inv = det.inverse()
    else:
        det_inv = _coerce_scalar(det).reciprocal()
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(matrix) if k != i]
            c = determinant(minor) if minor else ONE
            if (i + j) % 2:
                c = -c
            adj[j][i] = c * det_inv
    return adj


def row_reduce(matrix):
    """Reduced row echelon form over Q(i); returns (rref rows, pivot columns)."""
    rows = [[_coerce_scalar(x) for x in row] for row in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(rows)) if not rows[k][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].reciprocal()
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not rows[k][col].is_zero():
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(row_reduce(matrix)[1])


def nullspace(matrix, ncols: int | None = None):
    """Basis of the right kernel of a scalar matrix, as lists of ComplexScalar."""
    if not matrix:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    rows, pivots = row_reduce(matrix)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * n
        vec[f] = ONE
        for r, p in enumerate(pivots):
            vec[p] = -rows[r][f]
        basis.append(vec)
    return basis
