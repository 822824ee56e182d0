"""Command-line front end: fit, compare, and generate subcommands.

Reports are JSON (schema field "schema": 1) with every numeric finite or
null (a warning entry names any replaced value). Exit codes: 0 success
(including non-converged fits, flagged in the body), 2 usage, 3 I/O,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import datagen, diagnostics
from .diagnostics import DensityGrid, ToyGaussianSpec, toy_gaussian_mp
from .exceptions import DomainError, NumericError
from .linear import (LinearData, LinearPrior, linear_exact_posterior,
                     linear_mfvb_fit, linear_moment_summary, linear_mp1_fit,
                     linear_mp2_fit)
from .moments import (GaussianApprox, InverseGammaApprox,
                      InverseWishartApprox, StudentTApprox, ig_mean_var)
from .mvn import (MVNData, MVNPrior, iw_diag_marginal, mvn_exact_posterior,
                  mvn_mfvb_fit, mvn_moment_summary, mvn_mp_fit)
from .probit import (ProbitData, ProbitPrior, probit_dmvb_fit,
                     probit_gibbs_oracle, probit_laplace_fit,
                     probit_mfvb_fit, probit_moment_summary, probit_mp_fit)
from .reports import MomentSummary

SCHEMA_VERSION = 1

VALID_METHODS = {
    "linear": ("exact", "mfvb", "mp1", "mp2"),
    "mvn": ("exact", "mfvb", "mp"),
    "probit": ("laplace", "mfvb", "mp-dm", "mp-quad", "dmvb", "gibbs"),
    "toy": ("mp", "mfvb"),
}


class UsageError(Exception):
    pass


class InputError(Exception):
    """I/O or parse failure on user-supplied files."""


# ---------------------------------------------------------------------------
# input handling


def _read_csv(path: str) -> tuple[list[str], np.ndarray]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    data = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(f"{path}: row {i} has {len(row)} fields, "
                             f"expected {len(header)}")
        try:
            data.append([float(v) for v in row])
        except ValueError as exc:
            bad = next(j for j, v in enumerate(row, start=1)
                       if not _is_float(v))
            raise InputError(f"{path}: row {i}, col {bad}: "
                             f"not a number: {row[bad - 1]!r}") from exc
    if not data:
        raise InputError(f"{path}: no data rows")
    return header, np.array(data)


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _load_xy(path: str, intercept: bool) -> tuple[np.ndarray, np.ndarray]:
    header, data = _read_csv(path)
    if "y" not in header:
        raise InputError(f"{path}: header must contain a 'y' column")
    yi = header.index("y")
    y = data[:, yi]
    X = np.delete(data, yi, axis=1)
    if intercept:
        X = np.column_stack([np.ones(X.shape[0]), X])
    if X.shape[1] == 0:
        raise InputError(f"{path}: no predictor columns "
                         "(pass --intercept for an intercept-only fit)")
    return y, X


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _load_mvn(data_path: str | None, summary_path: str | None) -> MVNData:
    if summary_path:
        doc = _load_json(summary_path)
        for key in ("n", "xbar", "S"):
            if key not in doc:
                raise InputError(f"{summary_path}: missing key {key!r}")
        return MVNData(n=doc["n"], xbar=doc["xbar"], S=doc["S"])
    if data_path:
        _, data = _read_csv(data_path)
        return MVNData.from_raw(data)
    raise UsageError("mvn needs --data (raw CSV) or --summary (JSON)")


def _load_toy(summary_path: str | None) -> ToyGaussianSpec:
    if not summary_path:
        raise UsageError("toy needs --summary (JSON with mu, Sigma, split)")
    doc = _load_json(summary_path)
    for key in ("mu", "Sigma", "split"):
        if key not in doc:
            raise InputError(f"{summary_path}: missing key {key!r}")
    return ToyGaussianSpec(mu=doc["mu"], Sigma=doc["Sigma"],
                           split=int(doc["split"]))


# ---------------------------------------------------------------------------
# JSON encoding


def _jsonify(obj, warnings: list[str], path: str = ""):
    """Floats become finite-or-null; arrays become nested lists."""
    if isinstance(obj, dict):
        return {k: _jsonify(v, warnings, f"{path}.{k}" if path else k)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v, warnings, f"{path}[{i}]")
                for i, v in enumerate(obj)]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist(), warnings, path)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if not np.isfinite(x):
            warnings.append(f"non-finite value at {path} replaced by null")
            return None
        return x
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _q_to_json(q: dict) -> dict:
    out = {}
    for name, approx in q.items():
        if isinstance(approx, GaussianApprox):
            out[name] = {"family": "gaussian", "mean": approx.mean,
                         "cov": approx.cov}
        elif isinstance(approx, StudentTApprox):
            out[name] = {"family": "student_t", "loc": approx.loc,
                         "scale": approx.scale, "dof": approx.dof}
        elif isinstance(approx, InverseGammaApprox):
            out[name] = {"family": "inverse_gamma", "shape": approx.shape,
                         "scale": approx.scale}
        elif isinstance(approx, InverseWishartApprox):
            out[name] = {"family": "inverse_wishart",
                         "scale_matrix": approx.scale_matrix,
                         "dof": approx.dof}
        elif isinstance(approx, MomentSummary):
            out[name] = {"family": "empirical", "mean": approx.mean,
                         "cov": approx.cov, "mc_se": approx.mc_se}
        else:  # auxiliary moments and similar small records
            out[name] = {"family": "moments",
                         **{k: v for k, v in vars(approx).items()}}
    return out


def _summary_to_json(s: MomentSummary | None) -> dict | None:
    if s is None:
        return None
    doc = {"mean": s.mean, "cov": s.cov}
    if s.scalar_mean is not None:
        doc["scalar_mean"] = s.scalar_mean
        doc["scalar_var"] = s.scalar_var
    if s.mc_se is not None:
        doc["mc_se"] = s.mc_se
    return doc


# ---------------------------------------------------------------------------
# fitting dispatch


@dataclass
class RunConfig:
    model: str
    method: str
    eps: float = 1e-6
    max_iter: int = 500
    g: float = 1e4
    A: float = 0.01
    B: float = 0.01
    lambda0: float = 0.01
    nu0: float | None = None
    psi0_scale: float = 1.0
    lam: float = 0.01
    seed: int = 0
    n_samples: int = 50_000
    n_warmup: int = 5_000
    intercept: bool = False
    data: str | None = None
    summary: str | None = None
    init_from: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.model not in VALID_METHODS:
            raise UsageError(f"unknown model {self.model!r}")
        if self.method not in VALID_METHODS[self.model]:
            raise UsageError(
                f"method {self.method!r} is not valid for model "
                f"{self.model!r}; choose from "
                f"{', '.join(VALID_METHODS[self.model])}")


@dataclass
class FitOutcome:
    q: dict
    summary: MomentSummary | None
    iterations: int
    converged: bool
    termination: str
    wall_time_s: float
    trace: list | None = None
    wrong_basin: bool | None = None


def _init_params(cfg: RunConfig, model: str, method: str):
    if not cfg.init_from:
        return None
    doc = _load_json(cfg.init_from)
    q = doc.get("q", {})
    if model == "linear":
        s2 = q.get("sigma2")
        if s2 is None:
            raise InputError("--init-from report lacks q.sigma2")
        return (s2["shape"], s2["scale"])
    if model == "mvn":
        sig = q.get("Sigma")
        if sig is None:
            raise InputError("--init-from report lacks q.Sigma")
        return (sig["dof"], np.array(sig["scale_matrix"]))
    if model == "probit":
        beta = q.get("beta")
        if beta is None:
            raise InputError("--init-from report lacks q.beta")
        mu = np.array(beta["mean"])
        cov = np.array(beta["cov"]) if "cov" in beta else None
        return (mu, cov)
    return None


def run_fit(cfg: RunConfig) -> FitOutcome:
    cfg.validate()
    t0 = time.perf_counter()
    init = _init_params(cfg, cfg.model, cfg.method)

    if cfg.model == "linear":
        if not cfg.data:
            raise UsageError("linear needs --data CSV")
        y, X = _load_xy(cfg.data, cfg.intercept)
        data = LinearData(y, X)
        prior = LinearPrior(g=cfg.g, A=cfg.A, B=cfg.B)
        if cfg.method == "exact":
            beta, s2 = linear_exact_posterior(data, prior)
            summ = linear_moment_summary(beta, s2, "exact")
            return FitOutcome({"beta": beta, "sigma2": s2}, summ, 0, True,
                              "closed_form", time.perf_counter() - t0)
        fitter = {"mfvb": linear_mfvb_fit, "mp1": linear_mp1_fit,
                  "mp2": linear_mp2_fit}[cfg.method]
        rep = fitter(data, prior, eps=cfg.eps, max_iter=cfg.max_iter,
                     init=init)
        summ = linear_moment_summary(rep.params["beta"],
                                     rep.params["sigma2"], cfg.method)
        return FitOutcome(rep.params, summ, rep.iterations, rep.converged,
                          rep.termination, time.perf_counter() - t0,
                          trace=[t.tolist() for t in rep.trace])

    if cfg.model == "mvn":
        data = _load_mvn(cfg.data, cfg.summary)
        prior = MVNPrior(lambda0=cfg.lambda0, nu0=cfg.nu0,
                         Psi0=cfg.psi0_scale * np.eye(data.p))
        if cfg.method == "exact":
            mu_t, Sig_iw = mvn_exact_posterior(data, prior)
            summ = mvn_moment_summary(mu_t, "exact")
            return FitOutcome({"mu": mu_t, "Sigma": Sig_iw}, summ, 0, True,
                              "closed_form", time.perf_counter() - t0)
        fitter = {"mfvb": mvn_mfvb_fit, "mp": mvn_mp_fit}[cfg.method]
        rep = fitter(data, prior, eps=cfg.eps, max_iter=cfg.max_iter,
                     init=init)
        summ = mvn_moment_summary(rep.params["mu"], cfg.method)
        return FitOutcome(rep.params, summ, rep.iterations, rep.converged,
                          rep.termination, time.perf_counter() - t0,
                          trace=[t.tolist() for t in rep.trace],
                          wrong_basin=rep.wrong_basin)

    if cfg.model == "probit":
        if not cfg.data:
            raise UsageError("probit needs --data CSV")
        y, X = _load_xy(cfg.data, cfg.intercept)
        data = ProbitData(y, X)
        prior = ProbitPrior.ridge(cfg.lam, data.p)
        if cfg.method == "gibbs":
            summ = probit_gibbs_oracle(data, prior, n_samples=cfg.n_samples,
                                       n_warmup=cfg.n_warmup, seed=cfg.seed)
            return FitOutcome({"beta": summ}, summ, cfg.n_samples, True,
                              "sampling", time.perf_counter() - t0)
        init_mu = init[0] if init else None
        init_Sigma = init[1] if init else None
        if cfg.method == "laplace":
            rep = probit_laplace_fit(data, prior, eps=cfg.eps,
                                     max_iter=cfg.max_iter, init=init_mu)
        elif cfg.method == "mfvb":
            rep = probit_mfvb_fit(data, prior, eps=cfg.eps,
                                  max_iter=cfg.max_iter, init_mu=init_mu)
        elif cfg.method == "dmvb":
            rep = probit_dmvb_fit(data, prior, eps=cfg.eps,
                                  max_iter=cfg.max_iter, init_mu=init_mu)
        else:
            variant = cfg.method.split("-", 1)[1]
            rep = probit_mp_fit(data, prior, variant=variant, eps=cfg.eps,
                                max_iter=cfg.max_iter, init_mu=init_mu,
                                init_Sigma=init_Sigma)
        summ = probit_moment_summary(rep.params["beta"], cfg.method)
        return FitOutcome(rep.params, summ, rep.iterations, rep.converged,
                          rep.termination, time.perf_counter() - t0,
                          trace=[t.tolist() for t in rep.trace])

    # toy conditioned Gaussian
    spec = _load_toy(cfg.summary)
    q1, q2, m1, m2 = toy_gaussian_mp(spec, eps=min(cfg.eps, 1e-10),
                                     max_iter=max(cfg.max_iter, 10_000))
    if cfg.method == "mp":
        blocks = {"block1": q1, "block2": q2}
    else:
        blocks = {"block1": m1, "block2": m2}
    d1 = spec.split
    cov = np.zeros((spec.mu.shape[0], spec.mu.shape[0]))
    cov[:d1, :d1] = blocks["block1"].cov
    cov[d1:, d1:] = blocks["block2"].cov
    summ = MomentSummary(method=cfg.method, mean=spec.mu, cov=cov)
    return FitOutcome(blocks, summ, 0, True, "closed_form",
                      time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# marginal densities for accuracy comparisons


def _marginals(model: str, q: dict, summary: MomentSummary
               ) -> list[tuple[str, str, tuple]]:
    """(name, family, params) for each scalar marginal of a fitted q."""
    out: list[tuple[str, str, tuple]] = []

    def vector_block(name_prefix: str, approx):
        if isinstance(approx, StudentTApprox):
            for j in range(approx.dim):
                out.append((f"{name_prefix}{j}", "t",
                            (approx.loc[j], approx.scale[j, j], approx.dof)))
        elif isinstance(approx, GaussianApprox):
            for j in range(approx.dim):
                out.append((f"{name_prefix}{j}", "normal",
                            (approx.mean[j], approx.cov[j, j])))
        elif isinstance(approx, MomentSummary):
            for j in range(approx.mean.shape[0]):
                out.append((f"{name_prefix}{j}", "normal",
                            (approx.mean[j], approx.cov[j, j])))

    if model == "linear":
        vector_block("beta", q["beta"])
        ig = q["sigma2"]
        out.append(("sigma2", "ig", (ig.shape, ig.scale)))
    elif model == "mvn":
        vector_block("mu", q["mu"])
        iw = q["Sigma"]
        for j in range(iw.dim):
            ig = iw_diag_marginal(iw, j)
            out.append((f"Sigma{j}{j}", "ig", (ig.shape, ig.scale)))
    elif model == "probit":
        vector_block("beta", q["beta"])
    else:
        raise UsageError("compare does not support the toy model")
    return out


def _density_on(points: np.ndarray, family: str, params: tuple) -> DensityGrid:
    if family == "normal":
        return diagnostics.gaussian_density(points, *params)
    if family == "t":
        return diagnostics.t_density(points, *params)
    if family == "ig":
        return diagnostics.ig_density(points, *params)
    raise UsageError(f"unknown density family {family}")


def _range_of(family: str, params: tuple) -> tuple[float, float]:
    if family == "normal":
        return diagnostics.gaussian_grid_range(*params)
    if family == "t":
        loc, scale, dof = params
        var = dof / (dof - 2.0) * scale if dof > 2 else 4.0 * scale
        return diagnostics.gaussian_grid_range(loc, var)
    if family == "ig":
        return diagnostics.ig_grid_range(*params)
    raise UsageError(f"unknown density family {family}")


def run_compare(cfg: RunConfig, methods: list[str], reference: str) -> dict:
    if len(methods) < 2:
        raise UsageError("compare needs at least two methods")
    all_methods = list(dict.fromkeys(methods + [reference]))
    for m in all_methods:
        probe = RunConfig(**{**vars(cfg), "method": m,
                             "extra": dict(cfg.extra)})
        probe.validate()

    threads = max(1, int(os.environ.get("MOMPROP_THREADS", "1")))

    def one(method: str) -> tuple[str, FitOutcome]:
        sub = RunConfig(**{**vars(cfg), "method": method,
                           "extra": dict(cfg.extra)})
        return method, run_fit(sub)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = dict(pool.map(one, all_methods))
    else:
        outcomes = dict(one(m) for m in all_methods)

    ref = outcomes[reference]
    ref_marg = _marginals(cfg.model, ref.q, ref.summary)
    grids = {}
    for name, family, params in ref_marg:
        lo, hi = _range_of(family, params)
        points = diagnostics.make_points(lo, hi)
        grids[name] = (points, _density_on(points, family, params))

    table = {}
    for method in methods:
        out = outcomes[method]
        accs = {}
        for name, family, params in _marginals(cfg.model, out.q, out.summary):
            if name not in grids:
                continue
            points, ref_grid = grids[name]
            accs[name] = diagnostics.accuracy(
                ref_grid, _density_on(points, family, params))
        mean_err, sd_err = diagnostics.moment_errors(out.summary, ref.summary)
        table[method] = {
            "accuracy": accs,
            "mean_err": mean_err,
            "sd_err": sd_err,
            "iterations": out.iterations,
            "converged": out.converged,
            "wall_time_s": out.wall_time_s,
        }
    return {"schema": SCHEMA_VERSION, "model": cfg.model,
            "reference": reference, "methods": table}


# ---------------------------------------------------------------------------
# generate


def run_generate(args) -> None:
    model = args.model
    path = args.out
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        if model == "linear":
            if args.fixed:
                y, X = datagen.fixed_linear_dataset()
            else:
                beta = _parse_vector(args.beta)
                y, X = datagen.generate_linear(args.n, args.p, args.seed,
                                               beta=beta, sigma=args.sigma)
            writer.writerow(["y"] + [f"x{j + 1}" for j in range(X.shape[1])])
            for yi, xi in zip(y, X):
                writer.writerow([repr(float(yi))] + [repr(float(v)) for v in xi])
        elif model == "probit":
            beta = _parse_vector(args.beta)
            y, X = datagen.generate_probit(args.n, args.p, args.seed,
                                           beta=beta,
                                           intercept=not args.no_intercept)
            writer.writerow(["y"] + [f"x{j + 1}" for j in range(X.shape[1])])
            for yi, xi in zip(y, X):
                writer.writerow([int(yi)] + [repr(float(v)) for v in xi])
        elif model == "mvn":
            X = datagen.generate_mvn(args.n, args.p, args.seed)
            writer.writerow([f"x{j + 1}" for j in range(X.shape[1])])
            for xi in X:
                writer.writerow([repr(float(v)) for v in xi])
        else:
            raise UsageError(f"generate does not support model {model!r}")


def _parse_vector(text: str | None) -> np.ndarray | None:
    if not text:
        return None
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# rendering


def _round_sig(x: float, sig: int = 4) -> float:
    if x == 0 or not np.isfinite(x):
        return x
    from math import floor, log10
    return round(x, -int(floor(log10(abs(x)))) + sig - 1)


def _pretty_fit(doc: dict) -> str:
    lines = [f"model: {doc['model']}   method: {doc['method']}",
             f"converged: {doc['converged']}   iterations: {doc['iterations']}"]
    moments = doc.get("moments") or {}
    if "mean" in moments:
        mean = [_round_sig(v) for v in moments["mean"]]
        sds = [_round_sig(float(np.sqrt(moments["cov"][j][j])))
               for j in range(len(mean))]
        lines.append("coef   mean        sd")
        for j, (m, s) in enumerate(zip(mean, sds)):
            lines.append(f"[{j}]   {m:<10} {s:<10}")
    if moments.get("scalar_mean") is not None:
        lines.append(f"scalar mean: {_round_sig(moments['scalar_mean'])}   "
                     f"variance: {_round_sig(moments['scalar_var'])}")
    lines.append(f"wall time: {doc['wall_time_s']:.4g} s")
    return "\n".join(lines)


def _emit_density(outcome: FitOutcome, model: str, name: str,
                  path: str | None) -> None:
    for mname, family, params in _marginals(model, outcome.q, outcome.summary):
        if mname == name:
            lo, hi = _range_of(family, params)
            points = diagnostics.make_points(lo, hi)
            grid = _density_on(points, family, params)
            fh = open(path, "w", newline="") if path else sys.stdout
            try:
                writer = csv.writer(fh)
                writer.writerow(["point", "value"])
                for pt, val in zip(grid.points, grid.values):
                    writer.writerow([repr(float(pt)), repr(float(val))])
            finally:
                if path:
                    fh.close()
            return
    raise UsageError(f"no marginal named {name!r}; available: "
                     f"{', '.join(m[0] for m in _marginals(model, outcome.q, outcome.summary))}")


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="input CSV (header row required)")
    p.add_argument("--summary", help="JSON summary input (mvn/toy)")
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--g", type=float, default=1e4)
    p.add_argument("--A", type=float, default=0.01)
    p.add_argument("--B", type=float, default=0.01)
    p.add_argument("--lambda0", type=float, default=0.01)
    p.add_argument("--nu0", type=float, default=None)
    p.add_argument("--psi0-scale", type=float, default=1.0,
                   help="Psi0 = scale * I")
    p.add_argument("--lambda", dest="lam", type=float, default=0.01,
                   help="probit ridge prior precision")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=50_000)
    p.add_argument("--n-warmup", type=int, default=5_000)
    p.add_argument("--intercept", action="store_true",
                   help="prepend a column of ones to the design")
    p.add_argument("--out", help="write the JSON report here (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="momprop")
    sub = ap.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit one method and emit a JSON report")
    fit.add_argument("--model", required=True,
                     choices=("linear", "mvn", "probit", "toy"))
    fit.add_argument("--method", required=True)
    _add_common(fit)
    fit.add_argument("--trace", action="store_true",
                     help="include the per-iteration parameter trace")
    fit.add_argument("--emit-density", metavar="NAME",
                     help="write a density grid CSV for one marginal")
    fit.add_argument("--density-out", help="path for --emit-density output")
    fit.add_argument("--init-from", help="JSON report to initialize from")
    fit.add_argument("--pretty", action="store_true",
                     help="print a rounded human-readable summary")

    cmp_p = sub.add_parser("compare", help="fit several methods and score "
                                           "them against a reference")
    cmp_p.add_argument("--model", required=True,
                       choices=("linear", "mvn", "probit"))
    cmp_p.add_argument("--methods", required=True,
                       help="comma-separated method list")
    cmp_p.add_argument("--reference", default=None,
                       help="reference method (default: exact, or gibbs "
                            "for probit)")
    _add_common(cmp_p)

    gen = sub.add_parser("generate", help="write a synthetic dataset CSV")
    gen.add_argument("--model", required=True,
                     choices=("linear", "mvn", "probit"))
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--p", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--beta", help="comma-separated true coefficients")
    gen.add_argument("--sigma", type=float, default=1.0)
    gen.add_argument("--fixed", action="store_true",
                     help="emit the fixed five-point reference dataset "
                          "(linear only)")
    gen.add_argument("--no-intercept", action="store_true")
    gen.add_argument("--out", required=True)
    return ap


def _cfg_from_args(args) -> RunConfig:
    return RunConfig(
        model=args.model, method=getattr(args, "method", ""),
        eps=args.eps, max_iter=args.max_iter, g=args.g, A=args.A, B=args.B,
        lambda0=args.lambda0, nu0=args.nu0, psi0_scale=args.psi0_scale,
        lam=args.lam, seed=args.seed, n_samples=args.n_samples,
        n_warmup=args.n_warmup, intercept=args.intercept, data=args.data,
        summary=args.summary, init_from=getattr(args, "init_from", None))


def _write_report(doc: dict, out: str | None, pretty: bool) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc}") from exc
        if pretty:
            print(_pretty_fit(doc))
    else:
        print(_pretty_fit(doc) if pretty else text)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "generate":
            run_generate(args)
            return 0
        cfg = _cfg_from_args(args)
        if args.command == "fit":
            outcome = run_fit(cfg)
            warnings: list[str] = []
            doc = {
                "schema": SCHEMA_VERSION,
                "model": cfg.model,
                "method": cfg.method,
                "converged": outcome.converged,
                "iterations": outcome.iterations,
                "termination": outcome.termination,
                "q": _q_to_json(outcome.q),
                "moments": _summary_to_json(outcome.summary),
                "wall_time_s": outcome.wall_time_s,
            }
            if outcome.wrong_basin is not None:
                doc["wrong_basin"] = outcome.wrong_basin
            if args.trace and outcome.trace is not None:
                doc["trace"] = outcome.trace
            doc = _jsonify(doc, warnings)
            if warnings:
                doc["warnings"] = warnings
            if args.emit_density:
                _emit_density(outcome, cfg.model, args.emit_density,
                              args.density_out)
            _write_report(doc, args.out, args.pretty)
            return 0
        # compare
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        reference = args.reference or ("gibbs" if args.model == "probit"
                                       else "exact")
        doc = run_compare(cfg, methods, reference)
        warnings = []
        doc = _jsonify(doc, warnings)
        if warnings:
            doc["warnings"] = warnings
        _write_report(doc, args.out, pretty=False)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
