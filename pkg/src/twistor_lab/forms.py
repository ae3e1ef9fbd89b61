"""Exterior forms in frame components.

A k-form is a dict mapping a strictly increasing index tuple ``(i1, ..., ik)``
to its coefficient on ``theta^i1 ^ ... ^ theta^ik``.  With this convention
``(theta^a ^ theta^b)(e_a, e_b) = 1`` and a 2-form's matrix of values is
``alpha[a][b] = coefficient of (a, b)`` for ``a < b``.
"""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

from .exact_algebra import is_zero

Form = Dict[Tuple[int, ...], object]


def _sort_sign(indices: Sequence[int]):
    """Sort indices, returning (sign, sorted tuple); sign 0 when an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def one_form(components: Sequence) -> Form:
    return {(i,): c for i, c in enumerate(components) if not is_zero(c)}


def two_form_from_matrix(matrix) -> Form:
    n = len(matrix)
    return {(i, j): matrix[i][j] for i in range(n) for j in range(i + 1, n) if not is_zero(matrix[i][j])}


def wedge(a: Form, b: Form) -> Form:
    out: Form = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            sign, key = _sort_sign(ia + ib)
            if sign == 0:
                continue
            term = ca * cb if sign > 0 else -(ca * cb)
            out[key] = out[key] + term if key in out else term
    return {k: v for k, v in sorted(out.items()) if not is_zero(v)}


def is_zero_form(a: Form) -> bool:
    return all(is_zero(v) for v in a.values())
