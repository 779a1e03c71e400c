"""Figures of merit for carving runs and scaling-law extraction.

The protocol-level quantities are the normalized average fidelity
F_avg = sum(F_i P_i)/sum(P_i), the total heralding probability
P_tot = sum(P_i), and the fidelity-weighted probability sum(F_i P_i),
which reaches 1 only when every heralded state is perfect and no photon
is lost.  For the two-pass protocol the average fidelity admits the
closed form (1 - eps1^2/2) - (17/16)/C^2 with eps1 = 1 - 2*kappa1/kappa,
exposed here as an analytic cross-check against the simulation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .carving import CarveResult
from .cavity import epsilon1


@dataclass(frozen=True)
class MetricsReport:
    """Aggregated figures of merit for one carving run, with the analytic
    average-fidelity prediction alongside for comparison."""

    f_avg: float
    p_total: float
    f_weighted: float
    f_avg_analytic: float
    epsilon1: float


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares power law y = coefficient * x**exponent fitted on
    log-log axes; r_squared is the coefficient of determination of the
    log-space fit."""

    exponent: float
    coefficient: float
    r_squared: float


def analytic_average_fidelity(eps1: float, cooperativity: float) -> float:
    """Closed-form average fidelity of the two-pass protocol,
    (1 - eps1^2/2) - (17/16)/C^2."""
    if not (cooperativity > 0.0):
        raise ValueError(f"cooperativity = {cooperativity} must be > 0")
    return (1.0 - eps1**2 / 2.0) - (17.0 / 16.0) / cooperativity**2


def aggregate(result: CarveResult) -> MetricsReport:
    """Collapse a carving run into its figure-of-merit report.

    Zero-probability outcomes are excluded from the normalized average;
    if no outcome can herald at all there is nothing to average and a
    ValueError is raised.
    """
    if result.p_total <= 0.0:
        raise ValueError("all outcome probabilities are zero: no heralding possible")
    eps1 = epsilon1(result.params)
    return MetricsReport(
        f_avg=result.f_avg,
        p_total=result.p_total,
        f_weighted=result.f_weighted,
        f_avg_analytic=analytic_average_fidelity(eps1, result.params.cooperativity),
        epsilon1=eps1,
    )


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> PowerLawFit:
    """Fit y = coefficient * x**exponent by linear least squares on
    (log x, log y).

    Requires at least 3 strictly positive samples; the deficits this is
    used on span decades, so the log-log fit recovers exponents robustly
    without nonlinear optimization.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d sequences of equal length")
    if x.size < 3:
        raise ValueError(f"need at least 3 samples, got {x.size}")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ValueError("power-law fit requires strictly positive xs and ys")

    log_x = np.log(x)
    log_y = np.log(y)
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residuals = log_y - (slope * log_x + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((log_y - log_y.mean()) ** 2))
    if ss_tot == 0.0:
        # Constant data: the flat fit is exact.
        r_squared = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return PowerLawFit(
        exponent=float(slope),
        coefficient=float(np.exp(intercept)),
        r_squared=r_squared,
    )
