"""Deterministic synthetic datasets for the three models.

Every generator is a pure function of its seed. A fixed five-point
intercept-only dataset is included for regression-testing the linear
fitters against known values.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from .exceptions import DomainError

# Fixed reference sample (n=5 draws from N(0.5, 10), rounded to 2 dp),
# fit with an intercept-only design.
FIXED_LINEAR_Y = np.array([-1.48, 1.08, -2.14, 5.54, 1.54])


def fixed_linear_dataset() -> tuple[np.ndarray, np.ndarray]:
    return FIXED_LINEAR_Y.copy(), np.ones((5, 1))


def generate_linear(n: int, p: int, seed: int, beta: np.ndarray | None = None,
                    sigma: float = 1.0, intercept: bool = False
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian design, y = X beta + sigma * noise."""
    if n < 1 or p < 1:
        raise DomainError("n and p must be >= 1")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if intercept:
        X[:, 0] = 1.0
    if beta is None:
        beta = np.ones(p) / np.sqrt(p)
    beta = np.asarray(beta, dtype=float)
    y = X @ beta + sigma * rng.standard_normal(n)
    return y, X


def generate_probit(n: int, p: int, seed: int, beta: np.ndarray | None = None,
                    intercept: bool = True, max_tries: int = 100
                    ) -> tuple[np.ndarray, np.ndarray]:
    """iid rows with finite mean/covariance; labels drawn through the
    probit link. Redraws labels (deterministically) until both classes
    appear."""
    if n < 2 or p < 1:
        raise DomainError("need n >= 2 and p >= 1")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if intercept:
        X[:, 0] = 1.0
    if beta is None:
        beta = np.ones(p) / np.sqrt(p)
    beta = np.asarray(beta, dtype=float)
    probs = ndtr(X @ beta)
    for _ in range(max_tries):
        y = (rng.random(n) < probs).astype(float)
        if 0.0 < y.mean() < 1.0:
            return y, X
    raise DomainError("could not generate both classes; check beta scale")


def generate_mvn(n: int, p: int, seed: int, mu: np.ndarray | None = None,
                 Sigma: np.ndarray | None = None) -> np.ndarray:
    """iid rows from N(mu, Sigma); defaults mu = 0, Sigma = I + 0.5 off-diagonal."""
    if n < 1 or p < 1:
        raise DomainError("n and p must be >= 1")
    rng = np.random.default_rng(seed)
    if mu is None:
        mu = np.zeros(p)
    if Sigma is None:
        Sigma = 0.5 * np.ones((p, p)) + 0.5 * np.eye(p)
    mu = np.asarray(mu, dtype=float)
    Sigma = np.asarray(Sigma, dtype=float)
    L = np.linalg.cholesky(Sigma)
    return mu + rng.standard_normal((n, p)) @ L.T
