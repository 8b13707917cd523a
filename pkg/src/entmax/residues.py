"""Residue-class decomposition of sum laws and structural tests on the parts.

Writing ``P(z) = sum_j z**j P_j(z**r_mod)``, the coefficients of ``P_j`` are the
unnormalized law of ``K = (S - j) / r_mod`` on the event ``S = j (mod r_mod)``.
For ternary summands and ``r_mod = 2`` these are the even and odd parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from . import polyroots
from .distributions import (
    FLOAT,
    RATIONAL,
    CoeffSeq,
    DomainError,
    SumConfig,
    backend_of,
    binomial_entropy,
    shannon_entropy,
    sum_law,
)

__all__ = [
    "FLOAT_SLACK",
    "ResidueSplit",
    "ParityEntropyReport",
    "residue_decompose",
    "interleave",
    "parity_split",
    "is_log_concave",
    "ulc_violations",
    "is_ulc",
    "real_rooted",
    "hurwitz_stable",
    "conditional_entropy_report",
]

# Relative slack for the float backend, biased toward accepting the inequality.
FLOAT_SLACK = 1e-12


@dataclass(frozen=True)
class ResidueSplit:
    r_mod: int
    parts: tuple
    part_masses: tuple

    def part(self, j: int) -> CoeffSeq:
        return self.parts[j]

    def __len__(self) -> int:
        return self.r_mod


@dataclass(frozen=True)
class ParityEntropyReport:
    """Conditional entropies of ``K`` given the parity ``J`` of ``S_n``.

    When a parity class has zero mass its conditional entropy is reported as
    0.0 and the matching ``*_empty`` flag is set.
    """

    n: int
    w: float
    h_even: float
    h_odd: float
    bound_even: float
    bound_odd: float
    even_empty: bool = False
    odd_empty: bool = False

    @property
    def conditional_entropy(self) -> float:
        return self.w * self.h_even + (1.0 - self.w) * self.h_odd

    @property
    def conditional_bound(self) -> float:
        return self.w * self.bound_even + (1.0 - self.w) * self.bound_odd

    def within_bounds(self, tol: float = 1e-9) -> bool:
        return self.h_even <= self.bound_even + tol and self.h_odd <= self.bound_odd + tol


def _as_coeffseq(seq) -> CoeffSeq:
    return seq if isinstance(seq, CoeffSeq) else CoeffSeq(seq)


def residue_decompose(seq, r_mod: int) -> ResidueSplit:
    """Split ``seq`` into the ``r_mod`` subsequences ``seq[j::r_mod]``.

    Part ``j`` gets ULC order ``ceil((D - j + 1) / r_mod) - 1`` where ``D`` is
    the declared order of ``seq``; for a law of ``n`` summands on ``{0..r_mod}``
    this is ``n`` for part 0 and ``n - 1`` for the others.
    """
    if r_mod < 2:
        raise DomainError(f"residue modulus must be at least 2, got {r_mod}")
    seq = _as_coeffseq(seq)
    if len(seq) == 0:
        raise DomainError("cannot decompose an empty sequence")
    top = seq.order
    parts = []
    for j in range(r_mod):
        coeffs = seq.coeffs[j::r_mod]
        order = max(-(-(top - j + 1) // r_mod) - 1, len(coeffs) - 1, 0)
        parts.append(CoeffSeq(coeffs, order, seq.backend))
    masses = tuple(p.total() for p in parts)
    return ResidueSplit(r_mod, tuple(parts), masses)


def interleave(split: ResidueSplit) -> list:
    """Inverse of :func:`residue_decompose`."""
    length = sum(len(p) for p in split.parts)
    out = [None] * length
    for j, part in enumerate(split.parts):
        out[j::split.r_mod] = list(part.coeffs)
    return out


def parity_split(config: SumConfig) -> ResidueSplit:
    """Even and odd parts ``(e_0..e_n)`` and ``(o_0..o_{n-1})`` of a ternary sum law."""
    if not isinstance(config, SumConfig):
        config = SumConfig(config)
    if config.r != 2:
        raise DomainError(f"parity split needs a ternary alphabet, got size {config.r + 1}")
    return residue_decompose(sum_law(config), 2)


def _exact_scaled(seq: Sequence) -> list[int]:
    # Inequalities below are homogeneous of degree 2, so a common positive
    # scale does not change them; integers make the comparisons cheap.
    fr = [Fraction(c) for c in seq]
    denom = reduce(math.lcm, (c.denominator for c in fr), 1)
    return [c.numerator * (denom // c.denominator) for c in fr]


def _prepared(seq):
    backend = backend_of(seq)
    values = list(seq.coeffs if isinstance(seq, CoeffSeq) else seq)
    if any(v < 0 for v in values):
        raise DomainError("structural tests need nonnegative coefficients")
    if backend == FLOAT:
        return [float(v) for v in values], False
    return _exact_scaled(values), True


def _holds(lhs, rhs, exact: bool) -> bool:
    if exact:
        return lhs >= rhs
    return lhs >= rhs - FLOAT_SLACK * max(abs(lhs), abs(rhs))


def is_log_concave(seq) -> bool:
    """u_k**2 >= u_{k-1} u_{k+1} at every interior index."""
    u, exact = _prepared(seq)
    return all(_holds(u[k] * u[k], u[k - 1] * u[k + 1], exact) for k in range(1, len(u) - 1))


def ulc_violations(seq, m: int | None = None) -> list[int]:
    """Indices k in 1..m-1 where the ULC(m) product inequality fails."""
    if m is None:
        m = seq.order if isinstance(seq, CoeffSeq) else len(seq) - 1
    u, exact = _prepared(seq)
    if m < len(u) - 1:
        raise DomainError(f"ULC order {m} is smaller than the degree {len(u) - 1}")
    u = u + [0] * (m + 1 - len(u))
    bad = []
    for k in range(1, m):
        lhs = k * (m - k) * u[k] * u[k]
        rhs = (k + 1) * (m - k + 1) * u[k - 1] * u[k + 1]
        if not _holds(lhs, rhs, exact):
            bad.append(k)
    return bad


def is_ulc(seq, m: int | None = None) -> bool:
    """Ultra-log-concavity of order ``m`` in product form.

    ``k (m-k) u_k**2 >= (k+1)(m-k+1) u_{k-1} u_{k+1}`` for ``k = 1..m-1``, with
    entries beyond the sequence taken as zero.  ``m`` defaults to the declared
    order of a :class:`CoeffSeq`, else ``len(seq) - 1``.
    """
    return not ulc_violations(seq, m)


def _poly_of(seq):
    return list(seq.coeffs if isinstance(seq, CoeffSeq) else seq)


def real_rooted(seq) -> bool:
    """Whether the polynomial with coefficients ``seq`` has only real zeros (exact)."""
    return polyroots.is_real_rooted(_poly_of(seq))


def hurwitz_stable(seq) -> bool:
    """Whether every zero lies in the open left half-plane (exact Routh-Hurwitz)."""
    return polyroots.is_hurwitz_stable(_poly_of(seq))


def conditional_entropy_report(config: SumConfig) -> ParityEntropyReport:
    """Entropies of ``K | J = 0`` and ``K | J = 1`` with their binomial bounds."""
    if not isinstance(config, SumConfig):
        config = SumConfig(config)
    split = parity_split(config)
    even, odd = split.parts
    w = float(split.part_masses[0] / (split.part_masses[0] + split.part_masses[1]))
    even_empty = split.part_masses[0] == 0
    odd_empty = split.part_masses[1] == 0
    n = config.n
    return ParityEntropyReport(
        n=n,
        w=w,
        h_even=0.0 if even_empty else shannon_entropy(even),
        h_odd=0.0 if odd_empty else shannon_entropy(odd),
        bound_even=binomial_entropy(n),
        bound_odd=binomial_entropy(n - 1),
        even_empty=even_empty,
        odd_empty=odd_empty,
    )
