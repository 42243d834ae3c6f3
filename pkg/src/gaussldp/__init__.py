"""Large-deviation rate functions for Gaussian AR(1) and MA(1) statistics."""

from .model import Ar1Params, Ma1Params, simulate, stat_s, stat_w, yule_walker
from .rates import (
    rate_i1,
    rate_i2,
    rate_j,
    rate_js,
    rate_k_phi,
    rate_ks,
    rate_sample_mean_ar1,
    rate_sample_mean_ma1,
    rate_yule_walker,
)

__version__ = "0.1.0"

__all__ = [
    "Ar1Params",
    "Ma1Params",
    "simulate",
    "stat_s",
    "stat_w",
    "yule_walker",
    "rate_i1",
    "rate_i2",
    "rate_j",
    "rate_js",
    "rate_k_phi",
    "rate_ks",
    "rate_sample_mean_ar1",
    "rate_sample_mean_ma1",
    "rate_yule_walker",
]
