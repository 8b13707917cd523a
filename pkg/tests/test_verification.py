from fractions import Fraction

import numpy as np
import pytest

from entmax.distributions import FLOAT, RATIONAL, BinomialRef, sum_law
from entmax.maximizer import optimal_weight
from entmax.residues import is_ulc, parity_split
from entmax.verification import (
    CLAIMS,
    check_figure,
    check_parity_proposition,
    check_theorem,
    figure_distribution,
    random_ternary_config,
    reproduce_counterexample,
    run_claims,
)


@pytest.mark.parametrize("backend", [RATIONAL, FLOAT])
def test_counterexample(backend):
    res = reproduce_counterexample(backend)
    assert res.passed
    assert res.claim_id == "example-r3"
    d = res.details
    assert d["P0[1].observed"] == pytest.approx(0.044091, abs=1e-12)
    assert d["P2[2].expected"] == 0.01701
    assert d["P0.real_rooted.observed"] is False
    assert d["P0.ulc_violations.observed"] == [1]
    if backend == RATIONAL:
        assert d["exact_match"] and d["max_abs_error"] == 0.0
    else:
        assert d["max_abs_error"] <= 1e-12


def test_counterexample_cubic_is_stable():
    # all three zeros of 0.15 + 0.06z + 0.70z^2 + 0.09z^3 have negative real part
    roots = np.roots([0.09, 0.70, 0.06, 0.15])
    assert np.all(roots.real < 0)
    assert reproduce_counterexample().details["p.hurwitz_stable"] is True


@pytest.mark.parametrize("n", [1, 2, 4])
def test_theorem_check(n):
    res = check_theorem(n, starts=16, seed=0)
    assert res.passed, res.details
    assert res.claim_id == f"thm-main-n{n}"
    assert res.details["equality_error"] <= 1e-9
    assert -1e-9 <= res.details["gap_bits"] <= 1e-4


def test_theorem_check_reproducible():
    assert check_theorem(3, starts=8, seed=4).details == check_theorem(3, starts=8, seed=4).details


def test_parity_proposition_small():
    res = check_parity_proposition(trials=200, n_max=5, seed=1)
    assert res.passed, res.details
    assert res.details["ulc_violations"] == 0
    assert res.details["entropy_bound_violations"] == 0
    assert res.details == check_parity_proposition(trials=200, n_max=5, seed=1).details


def test_uniform_config_parts_ulc():
    third = Fraction(1, 3)
    split = parity_split([[third] * 3] * 3)
    assert is_ulc(split.parts[0], 3) and is_ulc(split.parts[1], 2)


def test_no_middle_mass():
    split = parity_split([[Fraction(1, 2), 0, Fraction(1, 2)]] * 4)
    even, odd = split.parts
    assert list(odd) == [0] * 4 and is_ulc(odd, 3)
    assert even.coeffs == BinomialRef(4).pmf().coeffs and is_ulc(even, 4)


def test_sampler_backends_describe_same_config():
    a = random_ternary_config(5, np.random.default_rng(3), backend=RATIONAL)
    b = random_ternary_config(5, np.random.default_rng(3), backend=FLOAT)
    assert a.to_backend(FLOAT) == b
    assert all(sum(p) == 1 for p in a)


def test_sampler_produces_zeros():
    rng = np.random.default_rng(0)
    zeros = sum(x == 0 for _ in range(200) for p in random_ternary_config(3, rng) for x in p)
    assert zeros > 0


def test_figure_n4():
    fig = figure_distribution(4)
    w0 = Fraction(optimal_weight(4, 2))
    assert list(fig.pmf[0::2]) == [w0 * c / 16 for c in (1, 4, 6, 4, 1)]
    assert list(fig.pmf[1::2]) == [(1 - w0) * c / 8 for c in (1, 3, 3, 1)]
    assert fig.residue_class[:3] == ("even", "odd", "even")
    assert check_figure(4).passed


def test_figure_n1():
    fig = figure_distribution(1, FLOAT)
    assert list(fig.pmf) == pytest.approx([1 / 3] * 3, abs=1e-15)
    assert [row[2] for row in fig.rows()] == ["even", "odd", "even"]


def test_run_claims_subset_and_unknown():
    res = run_claims(["example-r3", "fig-1", "thm-main-n2"], starts=8)
    assert [r.claim_id for r in res] == ["example-r3", "fig-1", "thm-main-n2"]
    assert all(r.passed for r in res)
    with pytest.raises(ValueError):
        run_claims(["nope"])
    assert "prop-parity" in CLAIMS and "thm-main-n8" in CLAIMS
