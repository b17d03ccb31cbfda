"""Sweep every progression (a, r) with r <= RMAX and certify that
dim L_n / n^d has two accumulation points, for E25 and the E1 colengths."""

import argparse
from fractions import Fraction

from gradedlab.asymptotics import analyze, auto_horizon, divergence_certificate, lacunary_indices
from gradedlab.families import make_family_E1
from gradedlab.lacunary import LacunarySeq
from gradedlab.series import make_example


def sweep(kind, d, rmax, eps):
    seq = LacunarySeq()
    obj = make_example("E25", d=d, seq=seq) if kind == "E25" else make_family_E1(d, seq)
    for r in range(1, rmax + 1):
        for a in range(r):
            horizon = auto_horizon(seq, r)
            rep = analyze(obj.growth, d, a, r, horizon, extra=lacunary_indices(seq, a, r, horizon))
            cert = divergence_certificate(obj.growth, d, a, r, seq, obj.sigma_targets, eps)
            yield a, r, rep.verdict, cert


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=("E25", "E1"), default="E25")
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--rmax", type=int, default=6)
    ap.add_argument("--eps", default="1/20")
    args = ap.parse_args()
    print("a r verdict n_hi value_hi n_lo value_lo gap")
    for a, r, verdict, c in sweep(args.kind, args.d, args.rmax, Fraction(args.eps)):
        print(a, r, verdict, c.n_hi, f"{float(c.value_hi):.5f}", c.n_lo, f"{float(c.value_lo):.5f}",
              f"{float(c.gap):.5f}")
