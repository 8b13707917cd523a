"""Finite probability mass functions, their convolution, and Shannon entropy.

Two arithmetic backends share every operation:

* ``"rational"`` -- entries are :class:`fractions.Fraction` (or ``int``), all
  arithmetic is exact;
* ``"float"`` -- IEEE doubles, convolution through :func:`numpy.convolve`.

Sequences of plain ``int`` are backend-neutral and adopt the backend of the
other operand.  Entropies are always returned as floats, in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "RATIONAL",
    "FLOAT",
    "EntmaxError",
    "DomainError",
    "ConfigurationError",
    "FinitePmf",
    "SumConfig",
    "CoeffSeq",
    "BinomialRef",
    "as_scalar",
    "backend_of",
    "convolve",
    "sum_law",
    "shannon_entropy",
    "binary_entropy",
    "binomial_entropy",
]

RATIONAL = "rational"
FLOAT = "float"

SUM_TOL = 1e-12
# Negative float entries above this are rounding dust and get clamped to zero.
NEG_DUST = -1e-15

Scalar = Union[Fraction, int, float]


class EntmaxError(Exception):
    """Base class for errors raised by this package."""


class DomainError(EntmaxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(EntmaxError, ValueError):
    """Operands are individually valid but cannot be combined."""


def as_scalar(value, backend: str) -> Scalar:
    """Coerce ``value`` to the scalar type of ``backend``.

    The rational backend accepts ints, Fractions, decimal or fraction strings
    (``"1/3"``, ``"0.15"``) and floats (converted exactly).
    """
    kind = type(value)
    if backend == RATIONAL:
        if kind is Fraction:
            return value
        if isinstance(value, bool):
            raise DomainError(f"not a number: {value!r}")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, (float, str)):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError(f"not a rational number: {value!r}") from exc
        raise DomainError(f"not a number: {value!r}")
    if backend == FLOAT:
        if kind is float:
            return value
        if isinstance(value, str):
            try:
                return float(Fraction(value))
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError(f"not a number: {value!r}") from exc
        if isinstance(value, bool) or not isinstance(value, (int, float, Fraction, np.number)):
            raise DomainError(f"not a number: {value!r}")
        return float(value)
    raise ConfigurationError(f"unknown backend {backend!r}")


def _infer_backend(values: Iterable) -> str | None:
    kinds = set()
    for v in values:
        if isinstance(v, Fraction):
            kinds.add(RATIONAL)
        elif isinstance(v, (float, np.floating)):
            kinds.add(FLOAT)
        elif isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            continue
        else:
            raise DomainError(f"not a number: {v!r}")
    if len(kinds) > 1:
        raise ConfigurationError("sequence mixes Fraction and float entries")
    return kinds.pop() if kinds else None


@dataclass(frozen=True)
class FinitePmf:
    """Law of one summand on ``{0, ..., r}``; ``probs[j] = P(X = j)``."""

    probs: tuple
    backend: str = FLOAT

    def __init__(self, probs: Iterable, backend: str | None = None):
        raw = list(probs)
        if not raw:
            raise DomainError("a pmf needs at least one entry")
        if backend is None:
            backend = _infer_backend(raw) or RATIONAL
        values = tuple(as_scalar(p, backend) for p in raw)
        if any(p < 0 for p in values):
            raise DomainError(f"negative probability in {list(raw)}")
        total = sum(values)
        if backend == RATIONAL:
            if total != 1:
                raise DomainError(f"probabilities sum to {total}, not 1")
        elif abs(math.fsum(values) - 1.0) > SUM_TOL:
            raise DomainError(f"probabilities sum to {math.fsum(values)!r}, not 1")
        object.__setattr__(self, "probs", values)
        object.__setattr__(self, "backend", backend)

    @property
    def r(self) -> int:
        """Largest symbol value."""
        return len(self.probs) - 1

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, k):
        return self.probs[k]

    def to_backend(self, backend: str) -> FinitePmf:
        if backend == self.backend:
            return self
        if backend == FLOAT:
            return FinitePmf([float(p) for p in self.probs], FLOAT)
        return FinitePmf([Fraction(p) for p in self.probs], RATIONAL)


@dataclass(frozen=True)
class SumConfig:
    """Independent summands ``X_1, ..., X_n`` sharing the alphabet ``{0..r}``."""

    pmfs: tuple

    def __init__(self, pmfs: Iterable):
        members = tuple(p if isinstance(p, FinitePmf) else FinitePmf(p) for p in pmfs)
        if not members:
            raise DomainError("a configuration needs at least one pmf")
        sizes = {len(p) for p in members}
        if len(sizes) != 1:
            raise DomainError(f"pmfs have differing alphabet sizes {sorted(sizes)}")
        backends = {p.backend for p in members}
        if len(backends) != 1:
            raise ConfigurationError("pmfs use different backends")
        object.__setattr__(self, "pmfs", members)

    @property
    def n(self) -> int:
        return len(self.pmfs)

    @property
    def r(self) -> int:
        return self.pmfs[0].r

    @property
    def backend(self) -> str:
        return self.pmfs[0].backend

    def __len__(self) -> int:
        return len(self.pmfs)

    def __iter__(self):
        return iter(self.pmfs)

    def __getitem__(self, i):
        return self.pmfs[i]

    def to_backend(self, backend: str) -> SumConfig:
        return SumConfig(p.to_backend(backend) for p in self.pmfs)

    def as_lists(self) -> list[list]:
        return [list(p.probs) for p in self.pmfs]


@dataclass(frozen=True)
class CoeffSeq:
    """Nonnegative coefficient sequence with a declared ULC order.

    ``order`` may exceed ``len(coeffs) - 1``; the missing tail is zero.
    """

    coeffs: tuple
    order: int
    backend: str

    def __init__(self, coeffs: Iterable, order: int | None = None, backend: str | None = None):
        raw = list(coeffs)
        if backend is None:
            backend = _infer_backend(raw) or RATIONAL
        values = tuple(as_scalar(c, backend) for c in raw)
        if any(c < 0 for c in values):
            raise DomainError("coefficient sequences must be nonnegative")
        if order is None:
            order = max(len(values) - 1, 0)
        if order < len(values) - 1:
            raise DomainError(f"declared order {order} is below degree bound {len(values) - 1}")
        object.__setattr__(self, "coeffs", values)
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "backend", backend)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def total(self) -> Scalar:
        if self.backend == FLOAT:
            return math.fsum(self.coeffs)
        return sum(self.coeffs, Fraction(0))

    def normalized(self) -> CoeffSeq:
        s = self.total()
        if s == 0:
            raise DomainError("cannot normalize an all-zero sequence")
        return CoeffSeq((c / s for c in self.coeffs), self.order, self.backend)

    def to_float(self) -> list[float]:
        return [float(c) for c in self.coeffs]


@dataclass(frozen=True)
class BinomialRef:
    """The symmetric binomial law Bin(m, 1/2)."""

    m: int

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("binomial order must be nonnegative")

    def pmf(self, backend: str = RATIONAL) -> CoeffSeq:
        denom = 2**self.m
        if backend == RATIONAL:
            probs = [Fraction(math.comb(self.m, k), denom) for k in range(self.m + 1)]
        else:
            probs = [math.comb(self.m, k) / denom for k in range(self.m + 1)]
        return CoeffSeq(probs, self.m, backend)


def _entries(x) -> list:
    if isinstance(x, (FinitePmf, CoeffSeq)):
        return list(x)
    if isinstance(x, np.ndarray):
        return [float(v) for v in x]
    return list(x)


def backend_of(x) -> str | None:
    """Backend of a pmf, coefficient sequence or plain sequence (None if neutral)."""
    if isinstance(x, (FinitePmf, CoeffSeq)):
        return x.backend
    if isinstance(x, np.ndarray):
        return FLOAT
    return _infer_backend(x)


def _common_backend(*operands) -> str:
    found = {b for b in map(backend_of, operands) if b is not None}
    if len(found) > 1:
        raise ConfigurationError("operands use different arithmetic backends")
    return found.pop() if found else RATIONAL


def _convolve_exact(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    # Integer convolution over a common denominator; one gcd per output entry.
    dp = reduce(math.lcm, (c.denominator for c in p), 1)
    dq = reduce(math.lcm, (c.denominator for c in q), 1)
    ip = [c.numerator * (dp // c.denominator) for c in p]
    iq = [c.numerator * (dq // c.denominator) for c in q]
    out = [0] * (len(ip) + len(iq) - 1)
    for i, a in enumerate(ip):
        if a:
            for j, b in enumerate(iq):
                out[i + j] += a * b
    denom = dp * dq
    return [Fraction(v, denom) for v in out]


def _clamp_dust(values: np.ndarray) -> np.ndarray:
    if values.size and values.min() < NEG_DUST:
        raise DomainError(f"convolution produced a negative entry {values.min()!r}")
    return np.where(values < 0.0, 0.0, values)


def convolve(p, q) -> CoeffSeq:
    """Coefficients of the product of the generating polynomials of ``p`` and ``q``."""
    backend = _common_backend(p, q)
    a, b = _entries(p), _entries(q)
    if not a or not b:
        raise DomainError("cannot convolve an empty sequence")
    if backend == RATIONAL:
        out = _convolve_exact([Fraction(x) for x in a], [Fraction(x) for x in b])
    else:
        out = _clamp_dust(np.convolve(np.asarray(a, float), np.asarray(b, float))).tolist()
    return CoeffSeq(out, None, backend)


def sum_law(config: SumConfig | Iterable) -> CoeffSeq:
    """Law of ``S_n = X_1 + ... + X_n``; entry ``s`` is ``P(S_n = s)``."""
    if not isinstance(config, SumConfig):
        config = SumConfig(config)
    if config.backend == RATIONAL:
        law = reduce(_convolve_exact, (p.probs for p in config.pmfs))
    else:
        law = np.ones(1)
        for p in config.pmfs:
            law = np.convolve(law, p.probs)
        law = _clamp_dust(law).tolist()
    return CoeffSeq(law, config.n * config.r, config.backend)


def _xlog2x_sum(probs: Sequence[float]) -> float:
    # 0 * log2(0) is taken as 0 by definition.
    return -math.fsum(p * math.log2(p) for p in probs if p > 0.0)


def shannon_entropy(p) -> float:
    """Shannon entropy in bits of ``p`` after normalization."""
    entries = _entries(p)
    if any(e < 0 for e in entries):
        raise DomainError("entropy needs nonnegative entries")
    if backend_of(entries) == RATIONAL or backend_of(p) == RATIONAL:
        total = sum((Fraction(e) for e in entries), Fraction(0))
        if total == 0:
            raise DomainError("entropy of an all-zero sequence is undefined")
        probs = [float(Fraction(e) / total) for e in entries]
    else:
        total = math.fsum(float(e) for e in entries)
        if total == 0.0:
            raise DomainError("entropy of an all-zero sequence is undefined")
        probs = [float(e) / total for e in entries]
    h = _xlog2x_sum(probs)
    return min(max(h, 0.0), math.log2(len(probs)))


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1 - p) log2 (1 - p)."""
    if not 0 <= p <= 1:
        raise DomainError(f"binary entropy needs p in [0, 1], got {p!r}")
    p = float(p)
    return _xlog2x_sum((p, 1.0 - p))


def binomial_entropy(m: int) -> float:
    """Entropy in bits of Bin(m, 1/2), summed exactly over k = 0..m."""
    if m < 0:
        raise DomainError("binomial order must be nonnegative")
    # H = m - 2^-m * sum_k C(m,k) log2 C(m,k)
    weighted = math.fsum(
        (math.comb(m, k) / 2.0**m) * math.log2(math.comb(m, k)) for k in range(m + 1)
    )
    return m - weighted
