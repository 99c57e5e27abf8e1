"""Table of the OU decay rate lambda_beta against its closed-form bounds."""

import argparse
import csv
import math
import sys

import numpy as np

from survwalk.analysis import lambda_bounds
from survwalk.fredholm import lambda_beta


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta-min", type=float, default=0.25)
    ap.add_argument("--beta-max", type=float, default=8.0)
    ap.add_argument("--count", type=int, default=32)
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["beta", "lambda_hat", "lower", "upper", "half_beta", "log2_gap", "iterations"])
    for beta in np.geomspace(args.beta_min, args.beta_max, args.count):
        res = lambda_beta(beta)
        b = lambda_bounds(beta)
        out.writerow(["%.6g" % beta, "%.10f" % res.lambda_hat, "%.10f" % b.lower, "%.10f" % b.upper,
                      "%.6g" % (beta / 2), "%.3e" % (math.log(2) - res.lambda_hat), res.iterations])


if __name__ == "__main__":
    main()
