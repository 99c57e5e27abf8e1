"""Survival probabilities of weighted random walks and Gaussian processes on a clock."""

from .analysis import (BoundsReport, FitResult, beta0, beta1, c_of, fit_exponential_rate,
                       fit_polynomial_exponent, fit_subexp_rate, lambda_bounds)
from .fredholm import NonConvergenceError, PowerIterResult, build_kernel, lambda_beta, verify_fredholm
from .gaussian_exact import (discrete_gaussian_survival, gaussian_survival_curve, ou_grid_survival,
                             pair_orthant_prob, trivariate_orthant_prob)
from .model import (IncrementDistribution, TimeChange, WalkSpec, WeightFunction, kappa_eval,
                    parse_time_change, parse_weight, sigma_eval)
from .rng import RngStreamConfig
from .simulate import SurvivalEstimate, enumerate_exact, simulate_survival, survival_curve

__version__ = "0.1.0"
