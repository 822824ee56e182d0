"""Bayesian linear regression with a g-prior on coefficients.

Model: y | beta, sigma2 ~ N(X beta, sigma2 I), beta | sigma2 ~ N(0,
g sigma2 (X^T X)^-1), sigma2 ~ IG(A, B). The posterior is available in
closed form (t for beta, inverse-gamma for sigma2), which makes this model
a testbed for approximate fitters:

* mean-field coordinate ascent (Gaussian x inverse-gamma factors),
* moment propagation with a Gaussian coefficient density ("approach 1"),
* moment propagation with a t coefficient density ("approach 2"),
  whose fixed point recovers the exact posterior.

All fitters monitor convergence as the max-norm change of the flattened
q-parameter vector between sweeps, stopping below eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .moments import (GaussianApprox, InverseGammaApprox, StudentTApprox,
                      ig_mean_var, ig_moment_match, symmetrize)
from .reports import (FitReport, MomentSummary, converged_report,
                      max_iter_report)


@dataclass
class LinearData:
    y: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        self.y = np.atleast_1d(np.asarray(self.y, dtype=float))
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        if self.X.shape[0] != self.y.shape[0]:
            raise DomainError("y and X row counts differ")
        if self.X.shape[0] < 1:
            raise DomainError("need at least one observation")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass
class LinearPrior:
    g: float
    A: float
    B: float

    def __post_init__(self):
        for name in ("g", "A", "B"):
            if not getattr(self, name) > 0:
                raise DomainError(f"prior hyperparameter {name} must be > 0")


@dataclass
class LinearConstants:
    beta_hat: np.ndarray
    u: float
    sigma_hat_u2: float
    XtX: np.ndarray
    XtX_inv: np.ndarray


def linear_constants(data: LinearData, prior: LinearPrior) -> LinearConstants:
    """OLS estimate, shrinkage factor u = g/(1+g), and shrunk residual variance."""
    XtX = symmetrize(data.X.T @ data.X)
    try:
        np.linalg.cholesky(XtX)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError("X is rank deficient") from exc
    XtX_inv = symmetrize(np.linalg.inv(XtX))
    Xty = data.X.T @ data.y
    beta_hat = XtX_inv @ Xty
    u = prior.g / (1.0 + prior.g)
    sigma_hat_u2 = (data.y @ data.y - u * Xty @ XtX_inv @ Xty) / data.n
    sigma_hat_u2 = max(sigma_hat_u2, 0.0)
    return LinearConstants(beta_hat=beta_hat, u=u, sigma_hat_u2=sigma_hat_u2,
                           XtX=XtX, XtX_inv=XtX_inv)


def linear_exact_posterior(data: LinearData, prior: LinearPrior
                           ) -> tuple[StudentTApprox, InverseGammaApprox]:
    """Closed-form posterior: beta | y is t, sigma2 | y is inverse-gamma."""
    c = linear_constants(data, prior)
    n = data.n
    shape = prior.A + n / 2.0
    scale = prior.B + n * c.sigma_hat_u2 / 2.0
    beta = StudentTApprox(loc=c.u * c.beta_hat,
                          scale=(scale / shape) * c.u * c.XtX_inv,
                          dof=2.0 * prior.A + n)
    sigma2 = InverseGammaApprox(shape=shape, scale=scale)
    return beta, sigma2


def _eqb_terms(data: LinearData, c: LinearConstants, prior: LinearPrior,
               mu: np.ndarray) -> float:
    resid = data.y - data.X @ mu
    return (prior.B + 0.5 * resid @ resid
            + mu @ c.XtX @ mu / (2.0 * prior.g))


def _check_sigma2_matching_exists(data: LinearData, prior: LinearPrior):
    if not prior.A + (data.n + data.p) / 2.0 > 2.0:
        raise DomainError(
            "sigma2 moment matching needs A + (n + p)/2 > 2; "
            f"got A={prior.A}, n={data.n}, p={data.p}")


def linear_mfvb_fit(data: LinearData, prior: LinearPrior, eps: float = 1e-6,
                    max_iter: int = 500, init: tuple[float, float] | None = None
                    ) -> FitReport:
    """Coordinate-ascent mean-field fit with q(beta) Gaussian, q(sigma2) IG."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    c = linear_constants(data, prior)
    n, p = data.n, data.p
    At = prior.A + (n + p) / 2.0
    Bt = prior.B + 0.5 * data.y @ data.y
    if init is not None:
        At, Bt = float(init[0]), float(init[1])
    trace: list[np.ndarray] = []
    prev = None
    mu = Sig = None
    for it in range(1, max_iter + 1):
        mu = c.u * c.beta_hat
        Sig = symmetrize((Bt / At) * c.u * c.XtX_inv)
        At = prior.A + (n + p) / 2.0
        Bt = _eqb_terms(data, c, prior, mu) + np.trace(c.XtX @ Sig) / (2.0 * c.u)
        xi = np.concatenate([mu, Sig.ravel(), [At, Bt]])
        trace.append(xi)
        if prev is not None and np.max(np.abs(xi - prev)) < eps:
            params = {"beta": GaussianApprox(mu, Sig),
                      "sigma2": InverseGammaApprox(At, Bt)}
            return converged_report("mfvb", params, it, trace)
        prev = xi
    params = {"beta": GaussianApprox(mu, Sig),
              "sigma2": InverseGammaApprox(At, Bt)}
    return max_iter_report("mfvb", params, max_iter, trace)


def linear_mp1_fit(data: LinearData, prior: LinearPrior, eps: float = 1e-6,
                   max_iter: int = 500, init: tuple[float, float] | None = None
                   ) -> FitReport:
    """Moment propagation with a Gaussian coefficient density.

    Per sweep: q(beta) matches the first two moments of beta obtained by
    averaging its full conditional over q(sigma2); q(sigma2) then matches
    the mean/variance of sigma2 obtained by averaging its inverse-gamma
    full conditional over q(beta) (laws of total expectation/variance).
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    _check_sigma2_matching_exists(data, prior)
    c = linear_constants(data, prior)
    n, p = data.n, data.p
    c1 = prior.A + (n + p) / 2.0
    At = c1
    Bt = prior.B + 0.5 * data.y @ data.y
    if init is not None:
        At, Bt = float(init[0]), float(init[1])
    trace: list[np.ndarray] = []
    prev = None
    mu = Sig = None
    for it in range(1, max_iter + 1):
        mu = c.u * c.beta_hat
        Sig = symmetrize((Bt / (At - 1.0)) * c.u * c.XtX_inv)
        XS = c.XtX @ Sig
        EqB = _eqb_terms(data, c, prior, mu) + np.trace(XS) / (2.0 * c.u)
        VqB = np.trace(XS @ XS) / (2.0 * c.u**2)
        Es2 = EqB / (c1 - 1.0)
        Vs2 = (EqB**2 / ((c1 - 1.0) ** 2 * (c1 - 2.0))
               + VqB / ((c1 - 1.0) * (c1 - 2.0)))
        ig = ig_moment_match(Es2, Vs2)
        At, Bt = ig.shape, ig.scale
        xi = np.concatenate([mu, Sig.ravel(), [At, Bt]])
        trace.append(xi)
        if prev is not None and np.max(np.abs(xi - prev)) < eps:
            params = {"beta": GaussianApprox(mu, Sig),
                      "sigma2": InverseGammaApprox(At, Bt)}
            return converged_report("mp1", params, it, trace)
        prev = xi
    params = {"beta": GaussianApprox(mu, Sig),
              "sigma2": InverseGammaApprox(At, Bt)}
    return max_iter_report("mp1", params, max_iter, trace)


def linear_mp2_fit(data: LinearData, prior: LinearPrior, eps: float = 1e-6,
                   max_iter: int = 500, init: tuple[float, float] | None = None
                   ) -> FitReport:
    """Moment propagation with a t coefficient density.

    Additionally matches the second moment of the centered quadratic form
    (beta - u beta_hat)^T (X^T X / u) (beta - u beta_hat), which pins the
    degrees of freedom; at the fixed point the q-densities coincide with
    the exact posterior.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    _check_sigma2_matching_exists(data, prior)
    c = linear_constants(data, prior)
    n, p = data.n, data.p
    c1 = prior.A + (n + p) / 2.0
    At = c1
    Bt = prior.B + 0.5 * data.y @ data.y
    if init is not None:
        At, Bt = float(init[0]), float(init[1])
    trace: list[np.ndarray] = []
    prev = None
    mu = Sig = None
    nu = None
    for it in range(1, max_iter + 1):
        mu = c.u * c.beta_hat
        Sig = symmetrize((Bt / At) * c.u * c.XtX_inv)
        nu = 2.0 * At
        XS = c.XtX @ Sig
        tr1 = np.trace(XS)
        tr2 = np.trace(XS @ XS)
        EqB = (_eqb_terms(data, c, prior, mu)
               + nu * tr1 / (2.0 * c.u * (nu - 2.0)))
        VqB = (nu**2 * tr2 / ((nu - 2.0) * (nu - 4.0))
               + nu**2 * tr1**2 / ((nu - 2.0) ** 2 * (nu - 4.0))
               ) / (2.0 * c.u**2)
        Es2 = EqB / (c1 - 1.0)
        Vs2 = (EqB**2 / ((c1 - 1.0) ** 2 * (c1 - 2.0))
               + VqB / ((c1 - 1.0) * (c1 - 2.0)))
        ig = ig_moment_match(Es2, Vs2)
        At, Bt = ig.shape, ig.scale
        xi = np.concatenate([mu, Sig.ravel(), [nu, At, Bt]])
        trace.append(xi)
        if prev is not None and np.max(np.abs(xi - prev)) < eps:
            params = {"beta": StudentTApprox(mu, Sig, nu),
                      "sigma2": InverseGammaApprox(At, Bt)}
            return converged_report("mp2", params, it, trace)
        prev = xi
    params = {"beta": StudentTApprox(mu, Sig, nu),
              "sigma2": InverseGammaApprox(At, Bt)}
    return max_iter_report("mp2", params, max_iter, trace)


def linear_moment_summary(beta, sigma2: InverseGammaApprox,
                          method: str) -> MomentSummary:
    """Posterior mean/covariance of beta and mean/variance of sigma2."""
    if isinstance(beta, StudentTApprox):
        mean, cov = beta.loc, beta.cov
    else:
        mean, cov = beta.mean, beta.cov
    s_mean, s_var = ig_mean_var(sigma2)
    return MomentSummary(method=method, mean=mean, cov=cov,
                         scalar_mean=s_mean, scalar_var=s_var)
