"""Survival under the piecewise exponential clock against the N^-log2 floor."""

import argparse

import numpy as np

from survwalk.gaussian_exact import gaussian_survival_curve
from survwalk.model import TimeChange


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--N", type=int, default=10_000)
    args = ap.parse_args()

    curve = gaussian_survival_curve(TimeChange.piecewise_exp(args.q), args.N)
    print("N,p,N_pow_minus_log2,ratio")
    for n in np.unique(np.geomspace(10, args.N, 25).astype(int)):
        floor = n ** -np.log(2.0)
        print(f"{n},{curve[n - 1]:.10g},{floor:.10g},{curve[n - 1] / floor:.4f}")


if __name__ == "__main__":
    main()
