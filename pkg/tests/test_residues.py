import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entmax.distributions import (
    FLOAT,
    RATIONAL,
    BinomialRef,
    CoeffSeq,
    DomainError,
    FinitePmf,
    SumConfig,
    binomial_entropy,
    convolve,
    shannon_entropy,
    sum_law,
)
from entmax.maximizer import attaining_config
from entmax.residues import (
    conditional_entropy_report,
    hurwitz_stable,
    interleave,
    is_log_concave,
    is_ulc,
    parity_split,
    real_rooted,
    residue_decompose,
    ulc_violations,
)

P0 = [0.003375, 0.044091, 0.369325, 0.000729]
THIRD = Fraction(1, 3)


def frac_pmf(ws):
    t = sum(ws)
    return FinitePmf([Fraction(w, t) for w in ws], RATIONAL)


ternary_weights = st.lists(st.integers(0, 40), min_size=3, max_size=3).filter(lambda w: sum(w) > 0)
ternary_configs = st.lists(ternary_weights, min_size=1, max_size=6).map(
    lambda rows: SumConfig(frac_pmf(w) for w in rows)
)


def product_of_linear(pairs):
    """Coefficients of prod (a + b z) with a, b >= 0: real roots in (-inf, 0]."""
    seq = [Fraction(1)]
    for a, b in pairs:
        seq = list(convolve(seq, [Fraction(a), Fraction(b)]))
    return seq


class TestResidueDecompose:
    def test_simple_parity(self):
        split = residue_decompose([1, 1, 1, 1], 2)
        assert [list(p) for p in split.parts] == [[1, 1], [1, 1]]

    def test_counterexample_parts(self):
        p = CoeffSeq(["0.15", "0.06", "0.70", "0.09"], backend=RATIONAL)
        split = residue_decompose(convolve(convolve(p, p), p), 3)
        expected = [
            ["0.003375", "0.044091", "0.369325", "0.000729"],
            ["0.00405", "0.23292", "0.133758"],
            ["0.04887", "0.145872", "0.01701"],
        ]
        assert [list(part) for part in split.parts] == [[Fraction(x) for x in e] for e in expected]
        assert [part.order for part in split.parts] == [3, 2, 2]
        assert sum(split.part_masses) == 1

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_even_support(self, n):
        law = sum_law([[Fraction(1, 2), 0, Fraction(1, 2)]] * n)
        even, odd = residue_decompose(law, 2).parts
        assert even.coeffs == BinomialRef(n).pmf().coeffs
        assert list(odd) == [0] * n
        assert (even.order, odd.order) == (n, n - 1)

    def test_modulus_validated(self):
        with pytest.raises(DomainError):
            residue_decompose([1, 2], 1)
        with pytest.raises(DomainError):
            residue_decompose([], 2)

    @given(st.lists(st.integers(0, 100), min_size=1, max_size=30), st.integers(2, 7))
    def test_reconstruction(self, seq, r_mod):
        split = residue_decompose(seq, r_mod)
        assert interleave(split) == [Fraction(x) for x in seq]
        assert sum(split.part_masses) == sum(seq)


class TestParitySplit:
    def test_single_variable(self):
        split = parity_split(SumConfig([FinitePmf([0.2, 0.3, 0.5])]))
        assert [list(p) for p in split.parts] == [[0.2, 0.5], [0.3]]

    def test_two_uniform(self):
        # (1 + z + z^2)^2 / 9 = (1 + 2z + 3z^2 + 2z^3 + z^4) / 9
        split = parity_split(SumConfig([frac_pmf([1, 1, 1])] * 2))
        assert list(split.parts[0]) == [Fraction(1, 9), Fraction(3, 9), Fraction(1, 9)]
        assert list(split.parts[1]) == [Fraction(2, 9), Fraction(2, 9)]

    def test_attaining_n4(self):
        even, odd = parity_split(attaining_config(4, 2, RATIONAL)).parts
        assert even.normalized().coeffs == BinomialRef(4).pmf().coeffs
        assert odd.normalized().coeffs == BinomialRef(3).pmf().coeffs

    def test_requires_ternary(self):
        with pytest.raises(DomainError):
            parity_split(SumConfig([FinitePmf([0.5, 0.5])]))

    @settings(max_examples=150)
    @given(ternary_configs)
    def test_parts_are_ulc(self, config):
        even, odd = parity_split(config).parts
        assert is_ulc(even, config.n)
        assert is_ulc(odd, config.n - 1)


class TestLogConcavity:
    @pytest.mark.parametrize(
        "seq, expected",
        [([1, 2, 1], True), ([1, 0, 1], False), (P0, True), ([3], True), ([0, 0, 0], True)],
    )
    def test_cases(self, seq, expected):
        assert is_log_concave(seq) is expected

    def test_counterexample_interior_inequalities(self):
        assert P0[1] ** 2 > P0[0] * P0[2]
        assert P0[2] ** 2 > P0[1] * P0[3]

    def test_float_slack_accepts_equality_case(self):
        third = 1 / 3
        # exact equality in the reals, off by rounding in floats
        assert is_log_concave([third * third, third * 1.0, 1.0])


class TestUlc:
    def test_binomial_coefficients(self):
        assert is_ulc([1, 4, 6, 4, 1], 4)
        assert is_ulc(BinomialRef(7).pmf(), 7)
        assert is_ulc(BinomialRef(7).pmf(FLOAT), 7)

    def test_counterexample_fails_at_k1(self):
        assert not is_ulc(P0, 3)
        assert ulc_violations(P0, 3) == [1]
        exact = [Fraction(s) for s in ("0.003375", "0.044091", "0.369325", "0.000729")]
        assert ulc_violations(exact, 3) == [1]
        assert exact[1] ** 2 < 3 * exact[0] * exact[2]

    def test_order_too_small(self):
        with pytest.raises(DomainError):
            is_ulc([1, 2, 1], 1)

    def test_trailing_zeros_implicit(self):
        # (1, 1) padded to order 3 is (1, 1, 0, 0): k=1 needs 1*2*1 >= 2*3*1*0
        assert is_ulc([1, 1], 3)
        assert not is_ulc([1, 0, 1], 2)

    def test_declared_order_default(self):
        seq = CoeffSeq([1, 2], order=3)
        # k=1: 1*2*4 >= 2*3*1*0
        assert is_ulc(seq)
        assert ulc_violations(seq) == []

    @settings(max_examples=150)
    @given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(any), min_size=1, max_size=7))
    def test_newton_real_rooted_implies_ulc(self, pairs):
        seq = product_of_linear(pairs)
        assert real_rooted(seq)
        assert is_ulc(seq, len(pairs))

    @settings(max_examples=150)
    @given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(any), min_size=1, max_size=7))
    def test_yu_entropy_bound(self, pairs):
        seq = product_of_linear(pairs)
        m = len(pairs)
        assert is_ulc(seq, m)
        assert shannon_entropy(seq) <= binomial_entropy(m) + 1e-9

    @settings(max_examples=150)
    @given(st.lists(st.integers(1, 50), min_size=3, max_size=8))
    def test_ulc_implies_log_concave_for_positive(self, seq):
        if is_ulc(seq, len(seq) - 1):
            assert is_log_concave(seq)


class TestRoots:
    def test_examples(self):
        assert real_rooted([1, 2, 1])
        assert not real_rooted([1, 0, 1])
        assert not real_rooted(P0)
        assert hurwitz_stable([0.2, 0.3, 0.5])
        assert not hurwitz_stable([0, 1])
        assert not hurwitz_stable([1, 1, 1, 1])

    def test_zero_polynomial(self):
        with pytest.raises(DomainError):
            real_rooted([0.0, 0.0])
        with pytest.raises(DomainError):
            hurwitz_stable([0])

    @settings(max_examples=100)
    @given(
        st.lists(st.integers(1, 20), max_size=4),
        st.lists(st.tuples(st.integers(1, 20), st.integers(1, 20)), max_size=3),
    )
    def test_hermite_biehler_consequence(self, linear, quadratic):
        # prod (z + a) prod (z^2 + b z + c), a, b, c > 0, is Hurwitz stable
        seq = [Fraction(1)]
        for a in linear:
            seq = list(convolve(seq, [a, 1]))
        for b, c in quadratic:
            seq = list(convolve(seq, [c, b, 1]))
        assert hurwitz_stable(seq)
        even, odd = residue_decompose(seq, 2).parts
        assert real_rooted(even)
        if any(odd):
            assert real_rooted(odd)


class TestConditionalEntropy:
    def test_attaining_config_hits_bounds(self):
        for n in range(1, 8):
            rep = conditional_entropy_report(attaining_config(n))
            assert rep.h_even == pytest.approx(binomial_entropy(n), abs=1e-12)
            assert rep.h_odd == pytest.approx(binomial_entropy(n - 1), abs=1e-12)

    def test_even_only(self):
        rep = conditional_entropy_report(SumConfig([FinitePmf([0.3, 0.0, 0.7])] * 3))
        assert rep.w == 1.0
        assert rep.h_odd == 0.0
        assert rep.odd_empty and not rep.even_empty

    def test_two_uniform(self):
        rep = conditional_entropy_report(SumConfig([frac_pmf([1, 1, 1])] * 2))
        assert rep.w == pytest.approx(5 / 9, abs=1e-15)
        assert rep.h_even == pytest.approx(shannon_entropy([1 / 5, 3 / 5, 1 / 5]), abs=1e-15)
        assert rep.h_odd == pytest.approx(1.0, abs=1e-15)
        assert rep.bound_even == 1.5 and rep.bound_odd == 1.0

    @settings(max_examples=150)
    @given(ternary_configs)
    def test_corollary_bounds(self, config):
        rep = conditional_entropy_report(config.to_backend(FLOAT))
        assert 0.0 <= rep.w <= 1.0
        assert rep.within_bounds(1e-9)
        # chain rule: H(S) = h(w) + H(K | J)
        h = shannon_entropy(sum_law(config))
        hw = shannon_entropy([rep.w, 1 - rep.w])
        assert h == pytest.approx(hw + rep.conditional_entropy, abs=1e-12)
        assert rep.conditional_entropy <= rep.conditional_bound + 1e-9
