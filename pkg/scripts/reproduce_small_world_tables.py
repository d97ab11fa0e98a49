#!/usr/bin/env python3
"""Replicate the small-world correlation grids and the method comparison.

Runs the spectral estimator over rewired sphere-neighborhood graphs, and at
n=200 compares it against the SDP relaxation and anchored least squares,
reporting the numerical rank of the SDP solution.
"""

import argparse

import numpy as np

from angsync.baselines import SdpOptions, estimate_lsqr, estimate_sdp
from angsync.core import rho1
from angsync.eig import EigOptions, estimate_eig
from angsync.generators import SmallWorldParams, gen_small_world

GRIDS = {
    (100, 0.3): [(0.8, 0.923), (0.6, 0.775), (0.4, 0.563), (0.3, 0.314), (0.2, 0.095)],
    (400, 0.2): [(0.8, 0.960), (0.4, 0.817), (0.3, 0.643), (0.2, 0.282), (0.1, 0.145)],
}

COMPARISON = [(1.0, 1.0, 1.0, 1.0, 1), (0.7, 0.787, 0.977, 0.986, 1),
              (0.4, 0.046, 0.839, 0.893, 3), (0.3, 0.103, 0.560, 0.767, 3),
              (0.2, 0.227, 0.314, 0.308, 4), (0.15, 0.091, 0.114, 0.102, 5)]


def correlation_grids(trials, seed0):
    for (n, eps), grid in GRIDS.items():
        print(f"\nsmall-world grid: n={n}, epsilon={eps}, {trials} trials per p")
        print(f"{'p':>5} {'2mp^2/n':>8} {'rho1':>7} {'ref':>6}")
        for k, (p, ref) in enumerate(grid):
            vals, m_sum = [], 0
            for t in range(trials):
                seed = seed0 + 300 * k + t
                graph, truth = gen_small_world(SmallWorldParams(n=n, epsilon=eps,
                                                                p=p, seed=seed))
                est = estimate_eig(graph, EigOptions(tol=1e-6, max_iters=4000, seed=seed))
                vals.append(rho1(est.theta_hat, truth.theta))
                m_sum += graph.m
            m_avg = m_sum / trials
            print(f"{p:>5} {2 * m_avg * p * p / n:>8.2f} {np.mean(vals):>7.3f} {ref:>6.3f}")


def method_comparison(trials, seed0):
    n, eps = 200, 0.3
    print(f"\nmethod comparison: n={n}, epsilon={eps}, {trials} trials per p")
    print(f"{'p':>5} {'lsqr':>7} {'eig':>7} {'sdp':>7} {'rank':>5}"
          f"   (reference: lsqr/eig/sdp/rank)")
    for k, (p, rl, re_, rs, rk) in enumerate(COMPARISON):
        a, b, c, ranks = [], [], [], []
        for t in range(trials):
            seed = seed0 + 211 * k + t
            graph, truth = gen_small_world(SmallWorldParams(n=n, epsilon=eps,
                                                            p=p, seed=seed))
            a.append(rho1(estimate_lsqr(graph).theta_hat, truth.theta))
            b.append(rho1(estimate_eig(graph, EigOptions(tol=1e-6, max_iters=4000,
                                                         seed=seed)).theta_hat,
                          truth.theta))
            est, rank = estimate_sdp(graph, SdpOptions(seed=seed))
            c.append(rho1(est.theta_hat, truth.theta))
            ranks.append(rank)
        print(f"{p:>5} {np.mean(a):>7.3f} {np.mean(b):>7.3f} {np.mean(c):>7.3f} "
              f"{int(np.median(ranks)):>5}   ({rl}/{re_}/{rs}/{rk})")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--skip-comparison", action="store_true")
    args = ap.parse_args()
    correlation_grids(args.trials, args.seed)
    if not args.skip_comparison:
        method_comparison(args.trials, args.seed + 10**6)


if __name__ == "__main__":
    main()
