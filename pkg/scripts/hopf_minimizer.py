#!/usr/bin/env python3
"""Conformal descent on the round 3-sphere data and its squashed family.

Starting from a perturbed conformal factor, projected gradient descent drives
the functional back to the value of the constant factor: the sphere constant
for unit fiber length, and the closed-form value of the squashed metric
otherwise.  The final factor is constant to within the reported oscillation.
"""

from __future__ import annotations

import argparse

import numpy as np

import eqyamabe as eq


def run(ell: float, grid: int) -> None:
    metric = eq.hopf_metric(ell)
    L = metric.base.length
    result = eq.minimize_conformal(
        metric,
        eq.MinimizerConfig(grid_size=grid),
        u0=lambda s: 1.0 + 0.3 * np.cos(2.0 * np.pi * s / L),
    )
    u = result.u_star.values
    osc = (np.max(u) - np.min(u)) / np.mean(u)
    closed = eq.functional_J_closed(metric.base, metric.F, ell)
    print(
        f"ell={ell:<5g} mu_upper={result.mu_upper:.8f}  closed-form J={closed:.8f}  "
        f"iters={len(result.trace):>5}  u oscillation={osc:.2e}  "
        f"monotone={bool(np.all(np.diff(result.trace) <= 1e-12))}"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=200)
    parser.add_argument("--ells", default="1.0 0.5 0.25")
    args = parser.parse_args()
    print(f"sphere constant: {eq.SIGMA_S3:.8f}")
    for ell in (float(tok) for tok in args.ells.split()):
        run(ell, args.grid)


if __name__ == "__main__":
    main()
