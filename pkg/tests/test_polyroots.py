from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entmax.distributions import DomainError
from entmax.polyroots import (
    count_distinct_roots,
    count_real_roots,
    is_hurwitz_stable,
    is_real_rooted,
    poly_gcd,
    routh_first_column,
)


def from_roots(roots):
    """Integer coefficients (increasing degree) of prod (z - root)."""
    coeffs = [1]
    for a in roots:
        coeffs = [(coeffs[i - 1] if i > 0 else 0) - a * (coeffs[i] if i < len(coeffs) else 0)
                  for i in range(len(coeffs) + 1)]
    return coeffs


def numeric_roots(coeffs):
    c = np.trim_zeros(np.asarray(coeffs, float), "b")
    return np.roots(c[::-1])


@pytest.mark.parametrize(
    "coeffs, real",
    [
        ([1, 2, 1], True),
        ([1, 0, 1], False),
        ([5], True),
        ([0, 0, 1], True),
        ([-1, 0, 1], True),
        ([1, 1, 1, 1], False),
        ([0.003375, 0.044091, 0.369325, 0.000729], False),
    ],
)
def test_real_rooted_cases(coeffs, real):
    assert is_real_rooted(coeffs) is real


def test_counterexample_root_structure():
    p0 = [Fraction(s) for s in ("0.003375", "0.044091", "0.369325", "0.000729")]
    assert count_real_roots(p0) == 1
    assert count_distinct_roots(p0) == 3
    roots = numeric_roots([float(c) for c in p0])
    assert sum(abs(r.imag) < 1e-9 for r in roots) == 1


def test_multiple_roots_counted_once():
    p = from_roots([-1, -1, -1, 2])
    assert count_real_roots(p) == 2
    assert count_distinct_roots(p) == 2
    assert is_real_rooted(p)
    assert poly_gcd(p, [0, 1]) == [1]


def test_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        is_real_rooted([0, 0])
    with pytest.raises(DomainError):
        is_hurwitz_stable([0])


@settings(max_examples=100)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6))
def test_real_roots_by_construction(roots):
    assert is_real_rooted(from_roots(roots))
    assert count_real_roots(from_roots(roots)) == len(set(roots))


@settings(max_examples=100)
@given(st.lists(st.integers(-5, 5), max_size=4), st.integers(-4, 4), st.integers(1, 4))
def test_complex_pair_detected(roots, re, im):
    # (z - re)^2 + im^2 has the conjugate pair re +- i im
    quad = [re * re + im * im, -2 * re, 1]
    p = np.convolve(from_roots(roots), quad).tolist()
    assert not is_real_rooted([int(c) for c in p])


@pytest.mark.parametrize(
    "coeffs, stable",
    [
        ([1, 1], True),
        ([0, 1], False),
        ([1, 1, 1, 1], False),
        ([2, 3, 1], True),
        ([1, -3, 1], False),
        ([1, 0, 1], False),
        ([3], True),
    ],
)
def test_hurwitz_cases(coeffs, stable):
    assert is_hurwitz_stable(coeffs) is stable


def test_unit_cube_sum_has_imaginary_roots():
    # 1 + z + z^2 + z^3 = (1 + z)(1 + z^2)
    roots = numeric_roots([1, 1, 1, 1])
    assert min(abs(r - 1j) for r in roots) < 1e-9
    assert routh_first_column([1, 1, 1, 1]) is None


@settings(max_examples=200)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_hurwitz_matches_numeric_roots(coeffs):
    roots = numeric_roots(coeffs)
    margin = np.max(roots.real)
    # skip cases numerically too close to the axis for np.roots to decide
    if abs(margin) < 1e-6:
        return
    assert is_hurwitz_stable(coeffs) is bool(margin < 0)


@settings(max_examples=100)
@given(st.lists(st.integers(1, 20), min_size=3, max_size=3))
def test_positive_quadratics_stable(abc):
    assert is_hurwitz_stable(abc)
