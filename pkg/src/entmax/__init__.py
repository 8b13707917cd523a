"""Maximum entropy of sums of independent finite-alphabet random variables."""

from .distributions import (
    FLOAT,
    RATIONAL,
    BinomialRef,
    CoeffSeq,
    ConfigurationError,
    DomainError,
    EntmaxError,
    FinitePmf,
    SumConfig,
    binary_entropy,
    binomial_entropy,
    convolve,
    shannon_entropy,
    sum_law,
)
from .maximizer import (
    ClosedForm,
    GridMax,
    MaxReport,
    attaining_config,
    brute_force_grid,
    closed_form,
    concave_weight_opt,
    conjectured_max,
    numeric_maximize,
    optimal_weight,
    ternary_bound,
)
from .residues import (
    ParityEntropyReport,
    ResidueSplit,
    conditional_entropy_report,
    hurwitz_stable,
    interleave,
    is_log_concave,
    is_ulc,
    parity_split,
    real_rooted,
    residue_decompose,
)
from .verification import (
    CheckResult,
    check_figure,
    check_parity_proposition,
    check_theorem,
    figure_distribution,
    reproduce_counterexample,
    run_claims,
)

__version__ = "0.1.0"
