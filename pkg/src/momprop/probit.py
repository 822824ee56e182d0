"""Probit regression: Laplace, mean-field VB, moment propagation, delta-method
VB, and a data-augmentation Gibbs oracle.

The likelihood is prod_i Phi(z_i^T beta) with z_i = (2 y_i - 1) x_i and
prior beta ~ N(0, D^-1). With auxiliary variables a_i | beta ~ N(z_i^T
beta, 1) truncated to a_i > 0, the full conditionals are Gaussian, which
drives both the Gibbs sampler and the MFVB/MP updates.

Moment propagation keeps q(beta) Gaussian but never commits q(a) to a
parametric family: only E_q(a) and (implicitly) V_q(a) enter. Within each
sweep every zeta/xi evaluation uses the pre-update (mu_beta, Sigma_beta)
and the two new values are written together, so the n x n V_q(a) is never
materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize
from scipy.special import log_ndtr, ndtr, ndtri

from .exceptions import DomainError, NumericError
from .moments import GaussianApprox, require_spd, symmetrize
from .reports import (FitReport, MomentSummary, converged_report,
                      max_iter_report)
from .specfun import DEFAULT_XI_CONFIG, XiConfig, _zeta_orders, xi


@dataclass
class ProbitData:
    y: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        self.y = np.atleast_1d(np.asarray(self.y, dtype=float))
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        if self.X.shape[0] != self.y.shape[0]:
            raise DomainError("y and X row counts differ")
        if not np.all(np.isin(self.y, (0.0, 1.0))):
            raise DomainError("y must be binary 0/1")
        self.Z = (2.0 * self.y - 1.0)[:, None] * self.X

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass
class ProbitPrior:
    D: np.ndarray

    def __post_init__(self):
        self.D = require_spd(np.atleast_2d(self.D), "D")

    @classmethod
    def ridge(cls, lam: float, p: int) -> "ProbitPrior":
        if not lam > 0:
            raise DomainError("lambda must be positive")
        return cls(D=lam * np.eye(p))


@dataclass
class AuxiliaryMoments:
    mean_a: np.ndarray


def _workspace(data: ProbitData, prior: ProbitPrior):
    """S = (Z^T Z + D)^-1 and its Cholesky factor."""
    M = symmetrize(data.Z.T @ data.Z + prior.D)
    cho = cho_factor(M)
    S = symmetrize(cho_solve(cho, np.eye(data.p)))
    return S


def _zeta12(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = _zeta_orders(2, t)
    return z[1], z[2]


def probit_laplace_fit(data: ProbitData, prior: ProbitPrior, eps: float = 1e-6,
                       max_iter: int = 500,
                       init: np.ndarray | None = None) -> FitReport:
    """Newton ascent of log p(y, beta); returns the mode and inverse negative
    Hessian [Z^T diag(-zeta_2(Z beta)) Z + D]^-1."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    Z, D = data.Z, prior.D
    beta = (np.zeros(data.p) if init is None
            else np.asarray(init, dtype=float).copy())

    def objective(b):
        return float(np.sum(log_ndtr(Z @ b)) - 0.5 * b @ D @ b)

    f_cur = objective(beta)
    trace: list[np.ndarray] = []
    for it in range(1, max_iter + 1):
        z1, z2 = _zeta12(Z @ beta)
        grad = Z.T @ z1 - D @ beta
        H = symmetrize(Z.T @ (z2[:, None] * Z) - D)
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError("singular Hessian in Newton step") from exc
        # damped Newton: halve until the objective does not decrease
        scale = 1.0
        for _ in range(30):
            cand = beta - scale * step
            f_new = objective(cand)
            if f_new >= f_cur - 1e-12 * abs(f_cur):
                break
            scale *= 0.5
        beta, f_cur = cand, f_new
        trace.append(beta.copy())
        if np.max(np.abs(scale * step)) < eps:
            z2 = _zeta12(Z @ beta)[1]
            cov = np.linalg.inv(symmetrize(Z.T @ (-z2[:, None] * Z) + D))
            params = {"beta": GaussianApprox(beta, symmetrize(cov))}
            return converged_report("laplace", params, it, trace)
    z2 = _zeta12(Z @ beta)[1]
    cov = np.linalg.inv(symmetrize(Z.T @ (-z2[:, None] * Z) + D))
    params = {"beta": GaussianApprox(beta, symmetrize(cov))}
    return max_iter_report("laplace", params, max_iter, trace)


def probit_mfvb_fit(data: ProbitData, prior: ProbitPrior, eps: float = 1e-6,
                    max_iter: int = 500,
                    init_mu: np.ndarray | None = None) -> FitReport:
    """Mean-field fit; the coefficient covariance is S at every iteration and
    the converged mean coincides with the posterior mode."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    Z = data.Z
    S = _workspace(data, prior)
    SZt = S @ Z.T
    mu = (SZt @ np.ones(data.n) if init_mu is None
          else np.asarray(init_mu, dtype=float).copy())
    trace: list[np.ndarray] = []
    prev = None
    mu_a = None
    for it in range(1, max_iter + 1):
        mu_a = Z @ mu
        mu = SZt @ (mu_a + _zeta_orders(1, mu_a)[1])
        xi_vec = np.concatenate([mu, mu_a])
        trace.append(xi_vec)
        if prev is not None and np.max(np.abs(xi_vec - prev)) < eps:
            params = {"beta": GaussianApprox(mu, S),
                      "aux": AuxiliaryMoments(mean_a=mu_a)}
            return converged_report("mfvb", params, it, trace)
        prev = xi_vec
    params = {"beta": GaussianApprox(mu, S),
              "aux": AuxiliaryMoments(mean_a=mu_a)}
    return max_iter_report("mfvb", params, max_iter, trace)


def _xi12(variant: str, m: np.ndarray, v: np.ndarray,
          cfg: XiConfig) -> tuple[np.ndarray, np.ndarray]:
    """Smoothed zeta_1 / zeta_2 at (m_i, v_i), by second-order delta method
    or by the series/quadrature evaluator."""
    if variant == "dm":
        z = _zeta_orders(4, m)
        return z[1] + 0.5 * z[3] * v, z[2] + 0.5 * z[4] * v
    if variant == "quad":
        return (np.atleast_1d(xi(1, m, v, cfg)),
                np.atleast_1d(xi(2, m, v, cfg)))
    raise DomainError(f"unknown MP variant {variant!r}; use 'dm' or 'quad'")


def probit_mp_fit(data: ProbitData, prior: ProbitPrior, variant: str = "dm",
                  eps: float = 1e-6, max_iter: int = 500,
                  xi_cfg: XiConfig = DEFAULT_XI_CONFIG,
                  init_mu: np.ndarray | None = None,
                  init_Sigma: np.ndarray | None = None) -> FitReport:
    """Moment-propagation fit with q(beta) Gaussian and nonparametric q(a).

    variant selects how the Gaussian-smoothed xi_1, xi_2 are evaluated:
    "dm" (second-order delta method, needs zeta up to order 4) or "quad"
    (series/trapezoid evaluator).
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    variant = variant.lower()
    Z = data.Z
    S = _workspace(data, prior)
    SZt = S @ Z.T
    mu = (SZt @ np.ones(data.n) if init_mu is None
          else np.asarray(init_mu, dtype=float).copy())
    Sig = S.copy() if init_Sigma is None else require_spd(init_Sigma, "init Sigma")
    trace: list[np.ndarray] = []
    prev = None
    mu_a = None
    for it in range(1, max_iter + 1):
        m = Z @ mu
        v = np.einsum("ij,jk,ik->i", Z, Sig, Z)
        x1, x2 = _xi12(variant, m, v, xi_cfg)
        z2m = _zeta_orders(2, m)[2]
        # zeta_2 lies in (-1, 0); equality with 0 only through underflow at
        # huge positive predictors, which is harmless in the updates below.
        if not (np.all(z2m > -1.0) and np.all(z2m <= 0.0)):
            raise NumericError("zeta_2 left (-1, 0); iteration is invalid",
                               last_iterate=mu)
        mu_a = m + x1
        ZS = Z @ S
        w2 = 1.0 + x2
        term2 = ZS.T @ (w2[:, None] * ZS)
        G = Z.T @ ((1.0 + z2m)[:, None] * ZS)
        term3 = G.T @ Sig @ G
        new_mu = SZt @ mu_a
        new_Sig = symmetrize(S + term2 + term3)
        mu, Sig = new_mu, new_Sig
        xi_vec = np.concatenate([mu, Sig.ravel(), mu_a])
        trace.append(xi_vec)
        if prev is not None and np.max(np.abs(xi_vec - prev)) < eps:
            params = {"beta": GaussianApprox(mu, Sig),
                      "aux": AuxiliaryMoments(mean_a=mu_a)}
            return converged_report(f"mp-{variant}", params, it, trace)
        prev = xi_vec
    params = {"beta": GaussianApprox(mu, Sig),
              "aux": AuxiliaryMoments(mean_a=mu_a)}
    return max_iter_report(f"mp-{variant}", params, max_iter, trace)


def _dmvb_sigma(Z: np.ndarray, D: np.ndarray, mu: np.ndarray) -> np.ndarray:
    z2 = _zeta_orders(2, Z @ mu)[2]
    return np.linalg.inv(symmetrize(Z.T @ (-z2[:, None] * Z) + D))


def dmvb_objective_grad(data: ProbitData, prior: ProbitPrior,
                        mu: np.ndarray) -> tuple[float, np.ndarray]:
    """Profiled delta-method ELBO (covariance solved out) and its gradient."""
    Z, D = data.Z, prior.D
    t = Z @ mu
    z = _zeta_orders(3, t)
    M = symmetrize(Z.T @ (-z[2][:, None] * Z) + D)
    sign, logdet = np.linalg.slogdet(M)
    if sign <= 0:
        raise NumericError("profiled covariance lost positive definiteness",
                           last_iterate=mu)
    val = float(np.sum(log_ndtr(t)) - 0.5 * mu @ D @ mu - 0.5 * logdet)
    Sig = np.linalg.inv(M)
    h = np.einsum("ij,jk,ik->i", Z, Sig, Z)
    grad = Z.T @ z[1] - D @ mu + 0.5 * Z.T @ (h * z[3])
    return val, grad


def probit_dmvb_fit(data: ProbitData, prior: ProbitPrior, eps: float = 1e-6,
                    max_iter: int = 500,
                    init_mu: np.ndarray | None = None) -> FitReport:
    """Quasi-Newton ascent of the profiled delta-method ELBO.

    The contract is on the returned stationary point: max-norm of the
    gradient below eps.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    mu0 = (np.zeros(data.p) if init_mu is None
           else np.asarray(init_mu, dtype=float))

    def neg(muv):
        val, grad = dmvb_objective_grad(data, prior, muv)
        return -val, -grad

    res = minimize(neg, mu0, jac=True, method="BFGS",
                   options={"gtol": eps, "maxiter": max_iter})
    mu = res.x
    grad_norm = float(np.max(np.abs(res.jac)))
    Sig = symmetrize(_dmvb_sigma(data.Z, prior.D, mu))
    params = {"beta": GaussianApprox(mu, Sig)}
    if grad_norm < 10.0 * eps:
        return converged_report("dmvb", params, int(res.nit), [])
    rep = max_iter_report("dmvb", params, int(res.nit), [])
    rep.termination = f"optimizer stopped: {res.message} (|grad|={grad_norm:.2e})"
    return rep


def _truncnorm_positive(rng: np.random.Generator, m: np.ndarray) -> np.ndarray:
    """Draws from N(m, 1) conditioned on being positive (inverse-CDF form)."""
    u = rng.random(m.shape[0])
    q = np.clip((1.0 - u) * ndtr(m), 1e-300, 1.0 - 1e-16)
    return m - ndtri(q)


def probit_gibbs_oracle(data: ProbitData, prior: ProbitPrior,
                        n_samples: int = 50_000, n_warmup: int = 5_000,
                        seed: int = 0, n_batches: int = 50) -> MomentSummary:
    """Albert-Chib data-augmentation Gibbs sampler.

    a_i | beta ~ N(z_i^T beta, 1) truncated to (0, inf); beta | a ~
    N(S Z^T a, S). Returns the empirical posterior mean and covariance of
    beta with batch-means Monte Carlo standard errors for the mean.
    """
    if n_samples < 1000:
        raise DomainError("need at least 1000 samples")
    Z = data.Z
    S = _workspace(data, prior)
    SZt = S @ Z.T
    L = np.linalg.cholesky(S)
    rng = np.random.default_rng(seed)
    beta = np.zeros(data.p)
    draws = np.empty((n_samples, data.p))
    for t in range(n_warmup + n_samples):
        a = _truncnorm_positive(rng, Z @ beta)
        beta = SZt @ a + L @ rng.standard_normal(data.p)
        if t >= n_warmup:
            draws[t - n_warmup] = beta
    mean = draws.mean(axis=0)
    cov = np.cov(draws.T, ddof=1).reshape(data.p, data.p)
    batch_means = draws[: n_samples - n_samples % n_batches].reshape(
        n_batches, -1, data.p).mean(axis=1)
    mc_se = batch_means.std(axis=0, ddof=1) / np.sqrt(n_batches)
    return MomentSummary(method="gibbs", mean=mean, cov=cov, mc_se=mc_se)


def probit_moment_summary(beta: GaussianApprox, method: str) -> MomentSummary:
    return MomentSummary(method=method, mean=beta.mean, cov=beta.cov)
