"""Discriminate between beta and Kumaraswamy models for data on (0, 1)."""
__version__ = "0.1.0"

from ._backend import BACKEND
from .discrim import (AsymptoticMoments, SampleSizePlan, SelectionReport,
                      asymptotic_moments, min_sample_size, pcs, select, t_statistic)
from .dist import BetaParams, KwParams, Model, Sample, cdf, density, loglik, quantile, sample
from .distances import DistanceReport, distance_report, hellinger, ks_distance
from .errors import (BetaKwError, ConvergenceError, DomainError, EvaluationError,
                     InfeasibleError, InputError)
from .fit import FitResult, fit, fit_beta, fit_kw
from .mc import McConfig, McResult, reproduce_table, simulate_pcs
from .pseudo import PseudoTruePair, pseudo_true

__all__ = [
    "BACKEND", "AsymptoticMoments", "SampleSizePlan", "SelectionReport",
    "asymptotic_moments", "min_sample_size", "pcs", "select", "t_statistic",
    "BetaParams", "KwParams", "Model", "Sample", "cdf", "density", "loglik",
    "quantile", "sample", "DistanceReport", "distance_report", "hellinger",
    "ks_distance", "BetaKwError", "ConvergenceError", "DomainError",
    "EvaluationError", "InfeasibleError", "InputError", "FitResult", "fit",
    "fit_beta", "fit_kw", "McConfig", "McResult", "reproduce_table",
    "simulate_pcs", "PseudoTruePair", "pseudo_true",
]
