"""Sample-free predictives and second-order Dirichlets for logit-space Gaussians."""

from ._kernels import BACKEND
from .errors import (
    CovarianceError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    LogitSimplexError,
    MatchingError,
    MomentOverflowError,
    NegativeVarianceError,
    NumericalError,
    ValidationError,
)
from .gaussian import Activation, LogitGaussian, SimplexVector, validate, validate_simplex
from .metrics import (
    accuracy,
    auroc,
    binary_log_prob,
    correctness_log_prob,
    ece,
    kl_simplex,
    log_prob_score,
)
from .losses import bce_loss, ce_loss, het_bce_loss, regularised_ce_loss
from .moments import (
    MomentPair,
    exp_moments,
    normcdf_moments,
    pushforward_moments,
    sigmoid_moments,
)
from .monte_carlo import McConfig, mc_moment_oracle, mc_simplex_stats, sample_logits
from .predictives import (
    closed_form_predictive,
    laplace_bridge_predictive,
    mc_predictive,
    mean_field_softmax_predictive,
    shekhovtsov_flach_predictive,
)
from .second_order import (
    DirichletParams,
    dirichlet_expected_entropy,
    dirichlet_mean,
    dirichlet_mutual_information,
    match_beta,
    match_dirichlet,
    max_probability,
    mc_expected_entropy,
    mc_mutual_information,
    predictive_entropy,
)
from .specfun import digamma, log_sum_exp, norm_cdf, owens_t, sigmoid

__version__ = "0.1.0"
