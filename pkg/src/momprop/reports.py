"""Fit reports and posterior moment summaries shared by all fitters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

TERMINATED_CONVERGED = "converged"
TERMINATED_MAX_ITER = "max_iter"


@dataclass
class FitReport:
    """Outcome of one iterative fit.

    params maps q-density names (e.g. "beta", "sigma2") to the fitted
    approximation objects. trace holds the flattened monitored parameter
    vector after each sweep; convergence is declared at the first sweep
    whose vector differs from the previous one by less than eps in the
    max norm.
    """

    method: str
    params: dict[str, Any]
    iterations: int
    converged: bool
    termination: str
    trace: list[np.ndarray] = field(default_factory=list)
    wrong_basin: bool = False


@dataclass
class MomentSummary:
    """First two posterior moments of the coefficient-like block, plus an
    optional scalar block (e.g. a variance parameter), tagged by method."""

    method: str
    mean: np.ndarray
    cov: np.ndarray
    scalar_mean: float | None = None
    scalar_var: float | None = None
    mc_se: np.ndarray | None = None

    def __post_init__(self):
        self.mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        self.cov = np.atleast_2d(np.asarray(self.cov, dtype=float))


def converged_report(method: str, params: dict[str, Any], iterations: int,
                     trace: list[np.ndarray]) -> FitReport:
    return FitReport(method=method, params=params, iterations=iterations,
                     converged=True, termination=TERMINATED_CONVERGED,
                     trace=trace)


def max_iter_report(method: str, params: dict[str, Any], iterations: int,
                    trace: list[np.ndarray]) -> FitReport:
    return FitReport(method=method, params=params, iterations=iterations,
                     converged=False, termination=TERMINATED_MAX_ITER,
                     trace=trace)
