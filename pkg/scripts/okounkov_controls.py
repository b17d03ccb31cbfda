"""Body volume estimates for the reduced controls at a few levels.

The c-fold veronese body is the simplex scaled by c, volume c^d/d!.
"""

import argparse
import math

from gradedlab.okounkov import body_estimate, semigroup_sample
from gradedlab.series import make_example

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", default="25,50,100,200")
    ap.add_argument("--dmax", type=int, default=3)
    args = ap.parse_args()
    levels = [int(x) for x in args.levels.split(",")]
    print("example d N count_based hull_based expected")
    for d in range(1, args.dmax + 1):
        for name, c in (("P_d_full", 1), ("veronese", 2)):
            L = make_example(name, d=d, c=c)
            sample = semigroup_sample(L, horizon=max(levels), levels=levels)
            for N in levels:
                est = body_estimate(sample, d, N)
                print(name, d, N, f"{float(est.count_based):.5f}", est.hull_based,
                      f"{c**d / math.factorial(d):.5f}")
