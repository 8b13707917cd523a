"""Exact real-root counting and Hurwitz stability for rational polynomials.

Polynomials are coefficient lists in increasing degree, ``[a0, a1, ..., ad]``.
Floats are converted to :class:`~fractions.Fraction` without rounding, so the
verdicts are exact for every IEEE input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List

from .distributions import DomainError

__all__ = [
    "to_exact",
    "trim",
    "derivative",
    "poly_rem",
    "poly_gcd",
    "sturm_chain",
    "count_real_roots",
    "count_distinct_roots",
    "is_real_rooted",
    "routh_first_column",
    "is_hurwitz_stable",
]

Poly = List[Fraction]


def to_exact(coeffs: Iterable) -> Poly:
    return [Fraction(c) for c in coeffs]


def trim(p: Poly) -> Poly:
    """Drop zero leading coefficients (at the high-degree end)."""
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def derivative(p: Poly) -> Poly:
    return [k * c for k, c in enumerate(p)][1:]


def poly_rem(a: Poly, b: Poly) -> Poly:
    """Remainder of ``a`` divided by ``b`` (``b`` trimmed, nonzero)."""
    a = trim(a)
    db, lead = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        q = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        a = trim(a)
    return a


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_rem(a, b)
    if not a:
        return a
    return [c / a[-1] for c in a]


def sturm_chain(p: Poly) -> list[Poly]:
    p = trim(p)
    chain = [p, derivative(p)]
    while chain[-1]:
        nxt = [-c for c in poly_rem(chain[-2], chain[-1])]
        if not nxt:
            break
        chain.append(nxt)
    return [q for q in chain if q]


def _sign_changes(signs: Iterable[int]) -> int:
    nonzero = [s for s in signs if s]
    return sum(1 for x, y in zip(nonzero, nonzero[1:]) if x != y)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def count_real_roots(p: Iterable) -> int:
    """Number of distinct real zeros, by Sturm's theorem on (-inf, inf)."""
    p = trim(to_exact(p))
    if not p:
        raise DomainError("the zero polynomial has no finite root count")
    chain = sturm_chain(p)
    at_pos = [_sign(q[-1]) for q in chain]
    at_neg = [_sign(q[-1]) * (-1) ** (len(q) - 1) for q in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def count_distinct_roots(p: Iterable) -> int:
    """Number of distinct complex zeros: degree of the squarefree part."""
    p = trim(to_exact(p))
    if not p:
        raise DomainError("the zero polynomial has no finite root count")
    g = poly_gcd(p, derivative(p))
    return (len(p) - 1) - (len(g) - 1 if g else 0)


def is_real_rooted(p: Iterable) -> bool:
    """True iff every complex zero of ``p`` is real (constants count as real-rooted)."""
    p = trim(to_exact(p))
    if not p:
        raise DomainError("the zero polynomial has no well-defined zeros")
    return count_real_roots(p) == count_distinct_roots(p)


def routh_first_column(p: Iterable) -> list[Fraction] | None:
    """First column of the Routh array, or None if a zero pivot appears."""
    p = trim(to_exact(p))
    if not p:
        raise DomainError("the zero polynomial has no well-defined zeros")
    desc = p[::-1]
    rows = [desc[0::2], desc[1::2]]
    degree = len(p) - 1
    if degree == 0:
        return [desc[0]]
    width = len(rows[0])
    rows = [r + [Fraction(0)] * (width - len(r)) for r in rows]
    column = [rows[0][0]]
    for _ in range(degree):
        upper, lower = rows[-2], rows[-1]
        pivot = lower[0]
        if pivot == 0:
            return None
        column.append(pivot)
        nxt = [
            (pivot * upper[i + 1] - upper[0] * lower[i + 1]) / pivot
            for i in range(width - 1)
        ] + [Fraction(0)]
        rows.append(nxt)
    return column


def is_hurwitz_stable(p: Iterable) -> bool:
    """True iff all zeros lie in the open left half-plane.

    A zero pivot in the Routh array means a zero on or symmetric about the
    imaginary axis, which is never strictly stable.
    """
    column = routh_first_column(p)
    if column is None:
        return False
    signs = {_sign(c) for c in column}
    return len(signs) == 1
