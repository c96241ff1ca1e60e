"""Path counts and line-crossing probabilities for biased monotone lattice walks."""

from .crossprob import (
    BiasSpec,
    LineSpec,
    ProbResult,
    alpha_beta_bounds,
    phi,
    phi_asymptotic,
    phi_p0,
    phi_series,
    psi,
)
from .errors import ConfigError, DomainError
from .exactcomb import (
    CountTable,
    binom,
    catalan_M,
    check_identity_zero,
    dp_count,
    first_passage_N,
    partial_sum_prop21,
    s_convolution_check,
)
from .gfroots import RootResult, domain_bound, solve_G, solve_H, solve_phi0
from .walksim import SimEstimate, StopRule, TrialStream, estimate, run_crossing_trial, run_hitting_trial, sweep_alpha

__version__ = "0.1.0"
