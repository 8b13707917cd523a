"""Closed-form entropy maximum for sums of independent finite-alphabet variables.

For ``n`` independent summands on ``{0, ..., r}`` the maximal entropy of the sum
is (proved for ``r = 2``, conjectured for ``r >= 3``)

    w0 H(B_n) + (1 - w0) (H(B_{n-1}) + log2(r - 1)) + h(w0),
    w0 = 1 / (1 + (r - 1) 2**(H(B_{n-1}) - H(B_n))),

with ``B_m ~ Bin(m, 1/2)``.  This module evaluates it, builds a configuration
attaining it, and searches for the maximum numerically as an independent check.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .distributions import (
    FLOAT,
    RATIONAL,
    DomainError,
    FinitePmf,
    SumConfig,
    binary_entropy,
    binomial_entropy,
    shannon_entropy,
    sum_law,
)

__all__ = [
    "ClosedForm",
    "MaxReport",
    "GridMax",
    "optimal_weight",
    "concave_weight_opt",
    "closed_form",
    "conjectured_max",
    "ternary_bound",
    "attaining_config",
    "numeric_maximize",
    "brute_force_grid",
    "GRID_LIMIT",
]

GRID_LIMIT = 10**8
LN2 = math.log(2.0)

DEFAULT_STARTS = 32
MAX_ITER = 2000
# Improvement threshold (bits) below which a local search is considered converged.
FTOL_BITS = 1e-12
# Entries below this are rounded to zero before the boundary re-optimization.
POLISH_CUTOFF = 1e-7


@dataclass(frozen=True)
class ClosedForm:
    n: int
    r: int
    w0: float
    bound_bits: float


@dataclass(frozen=True)
class MaxReport:
    closed_form: ClosedForm
    attaining_entropy: float
    numeric_best: float
    numeric_config: SumConfig
    gap_bits: float
    starts_used: int
    seed: int
    best_start: int = 0


class GridMax(NamedTuple):
    bits: float
    config: SumConfig


def concave_weight_opt(a: float, b: float) -> float:
    """Maximizer of ``g(w) = h(w) + w a + (1 - w) b`` on ``[0, 1]``.

    Setting ``g'(w) = log2((1 - w) / w) + a - b`` to zero gives
    ``w* = 1 / (1 + 2**(b - a))``.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("weights need finite entropies")
    d = b - a
    # Logistic form, stable for large |d|.
    if d >= 0:
        t = 2.0**-d
        return t / (1.0 + t)
    return 1.0 / (1.0 + 2.0**d)


def optimal_weight(n: int, r: int) -> float:
    """Optimal mass ``w0`` on the residue class 0 (mod r)."""
    if n < 1:
        raise DomainError(f"need at least one summand, got n={n}")
    if r < 2:
        raise DomainError(f"the mixing weight needs r >= 2, got r={r}")
    return concave_weight_opt(binomial_entropy(n), binomial_entropy(n - 1) + math.log2(r - 1))


def closed_form(n: int, r: int) -> ClosedForm:
    if n < 1:
        raise DomainError(f"need at least one summand, got n={n}")
    if r < 1:
        raise DomainError(f"alphabet {{0..r}} needs r >= 1, got r={r}")
    hn = binomial_entropy(n)
    if r == 1:
        return ClosedForm(n, r, 1.0, hn)
    w0 = optimal_weight(n, r)
    bound = w0 * hn + (1.0 - w0) * (binomial_entropy(n - 1) + math.log2(r - 1)) + binary_entropy(w0)
    return ClosedForm(n, r, w0, bound)


def conjectured_max(n: int, r: int) -> float:
    """Maximum entropy (bits) of a sum of ``n`` independent variables on ``{0..r}``."""
    return closed_form(n, r).bound_bits


def ternary_bound(n: int) -> float:
    """Sharp upper bound on ``H(S_n)`` for ternary summands."""
    return conjectured_max(n, 2)


def attaining_config(n: int, r: int = 2, backend: str = FLOAT) -> SumConfig:
    """Configuration whose sum has entropy equal to :func:`conjectured_max`.

    ``n - 1`` summands are uniform on ``{0, r}``.  The last puts ``w0/2`` on each
    of ``0`` and ``r`` and spreads ``1 - w0`` evenly over ``1..r-1``.  For
    ``r >= 3`` this construction is the natural extension of the ternary one
    and is checked numerically rather than taken as given.  ``r = 1`` gives
    ``n`` fair coins.

    In the rational backend ``w0`` is the exact value of its float
    approximation, so the parity structure stays exact.
    """
    if n < 1:
        raise DomainError(f"need at least one summand, got n={n}")
    if r < 1:
        raise DomainError(f"alphabet {{0..r}} needs r >= 1, got r={r}")
    if backend == RATIONAL:
        half = Fraction(1, 2)
        w0 = Fraction(optimal_weight(n, r)) if r >= 2 else Fraction(1)
        zero = Fraction(0)
    else:
        half, zero = 0.5, 0.0
        w0 = optimal_weight(n, r) if r >= 2 else 1.0
    endpoint = [half] + [zero] * (r - 1) + [half]
    last = [w0 * half] + [(1 - w0) / (r - 1)] * (r - 1) + [w0 * half] if r >= 2 else endpoint
    pmfs = [FinitePmf(endpoint, backend) for _ in range(n - 1)]
    pmfs.append(FinitePmf(last, backend))
    return SumConfig(pmfs)


# ---------------------------------------------------------------------------
# Numerical maximization over product laws.


def _softmax(theta: np.ndarray) -> np.ndarray:
    z = np.exp(theta - theta.max())
    return z / z.sum()


class _Objective:
    """Entropy of the sum law as a function of free logits.

    Each summand ``i`` keeps logits only on its support ``supports[i]``; the
    last logit of each block is minus the sum of the others (zero-sum gauge).
    """

    def __init__(self, n: int, r: int, supports: list[np.ndarray]):
        self.n, self.r = n, r
        self.supports = supports
        self.sizes = [len(s) - 1 for s in supports]
        self.offsets = np.cumsum([0] + self.sizes)

    @property
    def dim(self) -> int:
        return int(self.offsets[-1])

    def pmfs(self, x: np.ndarray) -> list[np.ndarray]:
        out = []
        for i, supp in enumerate(self.supports):
            free = x[self.offsets[i]:self.offsets[i + 1]]
            theta = np.append(free, -free.sum())
            p = np.zeros(self.r + 1)
            p[supp] = _softmax(theta)
            out.append(p)
        return out

    def encode(self, pmfs: list[np.ndarray]) -> np.ndarray:
        blocks = []
        for p, supp in zip(pmfs, self.supports):
            theta = np.log(np.maximum(p[supp], 1e-300))
            theta = theta - theta.mean()
            blocks.append(theta[:-1])
        return np.concatenate(blocks) if blocks else np.zeros(0)

    def entropy(self, x: np.ndarray) -> float:
        law = _sum_law_np(self.pmfs(x))
        return _entropy_np(law)

    def neg_value_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        pmfs = self.pmfs(x)
        n = len(pmfs)
        # prefix[i] = p_0 * ... * p_{i-1}, suffix[i] = p_i * ... * p_{n-1}
        prefix = [np.ones(1)]
        for p in pmfs:
            prefix.append(np.convolve(prefix[-1], p))
        suffix = [np.ones(1)] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = np.convolve(pmfs[i], suffix[i + 1])
        law = prefix[-1]
        pos = law > 0
        logq = np.zeros_like(law)
        logq[pos] = np.log2(law[pos])
        value = -float(np.dot(law[pos], logq[pos]))
        # dH/dq_s; entries with q_s = 0 only occur on the boundary and get the
        # finite part of the derivative.
        dq = -(logq + 1.0 / LN2)
        grad = np.empty(self.dim)
        for i, supp in enumerate(self.supports):
            others = np.convolve(prefix[i], suffix[i + 1])
            # d law[s] / d p_i[j] = others[s - j]
            dp = np.correlate(dq, others, mode="valid")
            p = pmfs[i][supp]
            g = dp[supp]
            dtheta = p * (g - np.dot(p, g))
            # zero-sum gauge: theta_last = -sum(free)
            grad[self.offsets[i]:self.offsets[i + 1]] = dtheta[:-1] - dtheta[-1]
        return -value, -grad


def _sum_law_np(pmfs: list[np.ndarray]) -> np.ndarray:
    law = np.ones(1)
    for p in pmfs:
        law = np.convolve(law, p)
    return np.where(law < 0.0, 0.0, law)


def _entropy_np(law: np.ndarray) -> float:
    q = law[law > 0]
    q = q / q.sum()
    return float(-np.dot(q, np.log2(q)))


def _local_search(obj: _Objective, x0: np.ndarray) -> np.ndarray:
    if obj.dim == 0:
        return x0
    res = minimize(
        obj.neg_value_and_grad,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": MAX_ITER, "ftol": FTOL_BITS, "gtol": 1e-10},
    )
    x = res.x
    if not np.all(np.isfinite(x)) or not res.success and res.nit == 0:
        # Derivative-free fallback when the gradient route stalls immediately.
        res = minimize(
            lambda y: -obj.entropy(y),
            x0,
            method="Nelder-Mead",
            options={"maxiter": MAX_ITER * max(1, obj.dim), "fatol": FTOL_BITS, "xatol": 1e-10},
        )
        x = res.x
    return x


def _optimize_start(n: int, r: int, rng: np.random.Generator) -> tuple[float, list[np.ndarray]]:
    full = [np.arange(r + 1) for _ in range(n)]
    start = [rng.dirichlet(np.ones(r + 1)) for _ in range(n)]
    obj = _Objective(n, r, full)
    x = _local_search(obj, obj.encode(start))
    pmfs = obj.pmfs(x)
    best_h, best = _entropy_np(_sum_law_np(pmfs)), pmfs

    # Boundary polish: drop negligible entries and re-optimize on the support.
    supports = [np.flatnonzero(p >= POLISH_CUTOFF) for p in pmfs]
    if any(len(s) < r + 1 for s in supports):
        trimmed = []
        for p, s in zip(pmfs, supports):
            q = np.zeros(r + 1)
            q[s] = p[s] / p[s].sum()
            trimmed.append(q)
        pobj = _Objective(n, r, supports)
        px = _local_search(pobj, pobj.encode(trimmed))
        polished = pobj.pmfs(px)
        h = _entropy_np(_sum_law_np(polished))
        if h > best_h:
            best_h, best = h, polished
    return best_h, best


def _start_rng(seed: int, index: int) -> np.random.Generator:
    # Independent substream per (seed, start index); order of execution is irrelevant.
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _thread_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("ENTMAX_THREADS", "0") or 0)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def numeric_maximize(
    n: int,
    r: int,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
    threads: int | None = None,
) -> MaxReport:
    """Multi-start local ascent of ``H(S_n)`` over products of simplices.

    Each start draws every summand from Dirichlet(1), maximizes by L-BFGS on
    softmax logits with the analytic gradient, then re-optimizes on the
    support left after zeroing entries below ``POLISH_CUTOFF``.  The best start
    wins, ties going to the lowest start index, so the report depends only on
    ``(n, r, starts, seed)``.
    """
    if n < 1:
        raise DomainError(f"need at least one summand, got n={n}")
    if r < 1:
        raise DomainError(f"alphabet {{0..r}} needs r >= 1, got r={r}")
    if starts < 1:
        raise DomainError("need at least one start")

    def run(k: int):
        return _optimize_start(n, r, _start_rng(seed, k))

    workers = min(_thread_count(threads), starts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(starts)))
    else:
        results = [run(k) for k in range(starts)]

    best_k = 0
    for k, (h, _) in enumerate(results):
        if h > results[best_k][0]:
            best_k = k
    best_h, best_pmfs = results[best_k]
    config = SumConfig(FinitePmf((p / p.sum()).tolist(), FLOAT) for p in best_pmfs)
    cf = closed_form(n, r)
    attained = shannon_entropy(sum_law(attaining_config(n, r)))
    return MaxReport(
        closed_form=cf,
        attaining_entropy=attained,
        numeric_best=best_h,
        numeric_config=config,
        gap_bits=cf.bound_bits - best_h,
        starts_used=starts,
        seed=seed,
        best_start=best_k,
    )


# ---------------------------------------------------------------------------
# Exhaustive grid oracle.


def _simplex_grid(r: int, steps: int) -> np.ndarray:
    """All pmfs on ``{0..r}`` with entries in ``{0, 1/steps, ..., 1}``."""
    rows = []
    for cuts in itertools.combinations(range(steps + r), r):
        bounds = (-1,) + cuts + (steps + r,)
        rows.append([bounds[i + 1] - bounds[i] - 1 for i in range(r + 1)])
    return np.asarray(rows, dtype=float) / steps


def grid_size(n: int, r: int, grid_step: float) -> int:
    steps = _grid_steps(grid_step)
    return math.comb(steps + r, r) ** n


def _grid_steps(grid_step: float) -> int:
    if not 0 < grid_step <= 1:
        raise DomainError(f"grid step must lie in (0, 1], got {grid_step!r}")
    steps = round(1.0 / grid_step)
    if abs(steps * grid_step - 1.0) > 1e-9:
        raise DomainError(f"grid step {grid_step!r} does not divide 1")
    return steps


def _entropy_rows(laws: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(laws > 0, laws * np.log2(np.where(laws > 0, laws, 1.0)), 0.0)
    return -terms.sum(axis=1)


def brute_force_grid(n: int, r: int, grid_step: float, limit: int = GRID_LIMIT) -> GridMax:
    """Exhaustive maximum of ``H(S_n)`` over pmfs on a simplex grid.

    The result lower-bounds the true maximum.  Configurations are enumerated as
    multisets (the sum law is symmetric in the summands); the first maximizer
    in enumeration order is returned.
    """
    if n < 1 or r < 1:
        raise DomainError("need n >= 1 and r >= 1")
    size = grid_size(n, r, grid_step)
    if size > limit:
        raise DomainError(
            f"grid has {size:.3e} configurations, above the limit of {limit:.0e}; "
            "use a coarser grid_step"
        )
    grid = _simplex_grid(r, _grid_steps(grid_step))
    m = len(grid)
    best_h, best_idx = -1.0, None
    for head in itertools.combinations_with_replacement(range(m), n - 1):
        partial = np.ones(1)
        for i in head:
            partial = np.convolve(partial, grid[i])
        lo = head[-1] if head else 0
        tail = grid[lo:]
        # laws[t] = partial * tail[t], vectorized over the last summand
        laws = np.zeros((len(tail), len(partial) + r))
        for j, c in enumerate(partial):
            if c:
                laws[:, j:j + r + 1] += c * tail
        h = _entropy_rows(laws)
        t = int(np.argmax(h))
        if h[t] > best_h + 1e-15:
            best_h, best_idx = float(h[t]), head + (lo + t,)
    config = SumConfig(FinitePmf(grid[i].tolist(), FLOAT) for i in best_idx)
    return GridMax(best_h, config)
