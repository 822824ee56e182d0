"""Accuracy metric, moment-error metrics, density grids, and the toy
conditioned-Gaussian comparison of mean-field vs moment-propagation fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .exceptions import DomainError, NumericError
from .moments import GaussianApprox, require_spd, symmetrize
from .reports import MomentSummary

GRID_POINTS = 4001
GRID_SD_SPAN = 10.0
IG_TAIL_QUANTILE = 1e-6


@dataclass
class DensityGrid:
    """A 1-D marginal density tabulated on an ascending grid."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.points = np.atleast_1d(np.asarray(self.points, dtype=float))
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.points.shape != self.values.shape:
            raise DomainError("points and values length mismatch")
        if np.any(np.diff(self.points) <= 0):
            raise DomainError("grid points must be strictly ascending")
        if np.any(self.values < 0):
            raise DomainError("density values must be nonnegative")

    def mass(self) -> float:
        return float(np.trapezoid(self.values, self.points))


def accuracy(p_grid: DensityGrid, q_grid: DensityGrid) -> float:
    """L1 overlap score 1 - 0.5 * int |p - q|, in [0, 1] up to grid error."""
    if p_grid.points.shape != q_grid.points.shape or not np.allclose(
            p_grid.points, q_grid.points, rtol=0.0, atol=0.0):
        raise DomainError("accuracy needs both densities on the same grid")
    l1 = np.trapezoid(np.abs(p_grid.values - q_grid.values), p_grid.points)
    return float(1.0 - 0.5 * l1)


def moment_errors(approx: MomentSummary, reference: MomentSummary
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise mean error and sd error (sd from covariance diagonals)."""
    if approx.mean.shape != reference.mean.shape:
        raise DomainError("moment summaries have different dimensions")
    mean_err = approx.mean - reference.mean
    sd_err = np.sqrt(np.diag(approx.cov)) - np.sqrt(np.diag(reference.cov))
    return mean_err, sd_err


def gaussian_density(points: np.ndarray, mean: float, var: float) -> DensityGrid:
    return DensityGrid(points, stats.norm.pdf(points, mean, np.sqrt(var)))


def t_density(points: np.ndarray, loc: float, scale: float,
              dof: float) -> DensityGrid:
    return DensityGrid(points, stats.t.pdf(points, dof, loc, np.sqrt(scale)))


def ig_density(points: np.ndarray, shape: float, scale: float) -> DensityGrid:
    return DensityGrid(points, stats.invgamma.pdf(points, shape, scale=scale))


def gaussian_grid_range(mean: float, var: float) -> tuple[float, float]:
    sd = np.sqrt(var)
    return mean - GRID_SD_SPAN * sd, mean + GRID_SD_SPAN * sd


def ig_grid_range(shape: float, scale: float) -> tuple[float, float]:
    dist = stats.invgamma(shape, scale=scale)
    return float(dist.ppf(IG_TAIL_QUANTILE)), float(dist.ppf(1 - IG_TAIL_QUANTILE))


def make_points(lo: float, hi: float, n: int = GRID_POINTS) -> np.ndarray:
    if not hi > lo:
        raise DomainError("empty grid range")
    return np.linspace(lo, hi, n)


@dataclass
class ToyGaussianSpec:
    """A d-dimensional Gaussian posterior split into two blocks at index split."""

    mu: np.ndarray
    Sigma: np.ndarray
    split: int

    def __post_init__(self):
        self.mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        self.Sigma = require_spd(self.Sigma, "Sigma")
        d = self.mu.shape[0]
        if not 1 <= self.split < d:
            raise DomainError("split must satisfy 1 <= split < dim")


def toy_gaussian_mp(spec: ToyGaussianSpec, eps: float = 1e-10,
                    max_iter: int = 10_000
                    ) -> tuple[GaussianApprox, GaussianApprox,
                               GaussianApprox, GaussianApprox]:
    """Block-marginal fits for a known joint Gaussian.

    MFVB fixes each block's covariance at the conditional (Schur-complement)
    covariance; the moment-propagation covariance iteration

        C_i <- S_ii + S_i,-i S_-i,-i^-1 (C_-i - S_-i,-i) S_-i,-i^-1 S_-i,i

    converges back to the true marginal blocks. Returns (mp_1, mp_2,
    mfvb_1, mfvb_2).
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    d1 = spec.split
    S11 = spec.Sigma[:d1, :d1]
    S22 = spec.Sigma[d1:, d1:]
    S12 = spec.Sigma[:d1, d1:]
    S22_inv = np.linalg.inv(S22)
    S11_inv = np.linalg.inv(S11)
    schur1 = symmetrize(S11 - S12 @ S22_inv @ S12.T)
    schur2 = symmetrize(S22 - S12.T @ S11_inv @ S12)
    # start from the mean-field solution and iterate the MP sweep
    C1, C2 = schur1.copy(), schur2.copy()
    for _ in range(max_iter):
        C1_new = symmetrize(S11 + S12 @ S22_inv @ (C2 - S22) @ S22_inv @ S12.T)
        C2_new = symmetrize(S22 + S12.T @ S11_inv @ (C1_new - S11) @ S11_inv @ S12)
        delta = max(np.max(np.abs(C1_new - C1)), np.max(np.abs(C2_new - C2)))
        C1, C2 = C1_new, C2_new
        if delta < eps:
            break
    else:
        raise NumericError("toy MP iteration did not converge",
                           last_iterate=(C1, C2))
    mu1, mu2 = spec.mu[:d1], spec.mu[d1:]
    return (GaussianApprox(mu1, C1), GaussianApprox(mu2, C2),
            GaussianApprox(mu1, schur1), GaussianApprox(mu2, schur2))
