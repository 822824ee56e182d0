"""Probit scaling study: distance between the moment-propagation fit and
the Laplace fit as the sample size grows, plus a Gibbs cross-check.

Usage: python scripts/probit_study.py [--seeds N] [--gibbs]
"""

from __future__ import annotations

import argparse

import numpy as np

import momprop as mp
from momprop.datagen import generate_probit


def scaling_study(n_seeds: int) -> None:
    ns = [100, 400, 1600]
    beta_true = np.array([0.5, 1.0])
    mean_err = {n: [] for n in ns}
    cov_err = {n: [] for n in ns}
    for seed in range(n_seeds):
        for n in ns:
            y, X = generate_probit(n, 2, seed=seed, beta=beta_true)
            data = mp.ProbitData(y, X)
            prior = mp.ProbitPrior.ridge(0.01, 2)
            lap = mp.probit_laplace_fit(data, prior, eps=1e-10)
            dm = mp.probit_mp_fit(data, prior, variant="dm", eps=1e-8,
                                  max_iter=2000)
            mode, V = lap.params["beta"].mean, lap.params["beta"].cov
            mean_err[n].append(np.linalg.norm(dm.params["beta"].mean - mode))
            cov_err[n].append(np.linalg.norm(dm.params["beta"].cov - V, "fro")
                              / np.linalg.norm(V, "fro"))
    print(f"median over {n_seeds} seeds:")
    print(f"{'n':>6s} {'|mean diff|':>12s} {'rel cov diff':>13s}")
    meds = []
    for n in ns:
        m = float(np.median(mean_err[n]))
        c = float(np.median(cov_err[n]))
        meds.append(m)
        print(f"{n:6d} {m:12.5f} {c:13.5f}")
    slope = np.polyfit(np.log(ns), np.log(meds), 1)[0]
    print(f"log-log slope of the mean distance: {slope:.3f} "
          "(about -1 expected)")


def gibbs_check() -> None:
    y, X = generate_probit(200, 3, seed=7)
    data = mp.ProbitData(y, X)
    prior = mp.ProbitPrior.ridge(0.01, 3)
    oracle = mp.probit_gibbs_oracle(data, prior, n_samples=50_000,
                                    n_warmup=5_000, seed=1)
    print("\nGibbs oracle (n=200, p=3): mean",
          np.round(oracle.mean, 4), "MC-SE", np.round(oracle.mc_se, 5))
    for variant in ("dm", "quad"):
        rep = mp.probit_mp_fit(data, prior, variant=variant)
        gap = np.abs(rep.params["beta"].mean - oracle.mean)
        print(f"mp-{variant}: |diff| = {np.round(gap, 5)} "
              f"(3 MC-SE = {np.round(3 * oracle.mc_se, 5)})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--gibbs", action="store_true",
                    help="also run the Gibbs cross-check")
    args = ap.parse_args()
    scaling_study(args.seeds)
    if args.gibbs:
        gibbs_check()
