"""Record E1 colength ratios at lacunary witness indices by enumeration.

For each d the colength of I_n is counted from the monomial box (no closed
form involved) at n = i_j - 1 (sigma small relative to n) and n = i_j
(sigma = n/2). The ratios colength/n^d drift toward 2/d! and
(1 + 2^-d)/d! respectively; the table is written to results/e1_oracle.csv.
"""

import argparse
import math
from fractions import Fraction
from pathlib import Path

from gradedlab.export import to_csv
from gradedlab.families import make_family_E1
from gradedlab.lacunary import LacunarySeq
from gradedlab.monomial import colength

OUT = Path(__file__).resolve().parent.parent / "results" / "e1_oracle.csv"


def rows(dims=(1, 2), top_j=5):
    seq = LacunarySeq()
    for d in dims:
        fam = make_family_E1(d, seq)
        targets = {"zero": Fraction(2, math.factorial(d)),
                   "half": Fraction(2**d + 1, 2**d * math.factorial(d))}
        for j in range(3, top_j + 1):
            t = seq.threshold(j)
            for kind, n in (("zero", t - 1), ("half", t)):
                c = colength(fam.ring, fam.ideal(n))
                assert c == fam.growth(n), (d, n)
                ratio = Fraction(c, n**d)
                yield [d, kind, n, seq.sigma(n), c, f"{float(ratio):.6f}",
                       targets[kind], f"{float(abs(ratio - targets[kind])):.6f}"]


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--top-j", type=int, default=5)
    ap.add_argument("--output", default=str(OUT))
    args = ap.parse_args()
    header = ["d", "side", "n", "sigma", "colength", "ratio", "target", "distance"]
    text = to_csv(header, rows(top_j=args.top_j))
    Path(args.output).write_text(text)
    print(text, end="")
