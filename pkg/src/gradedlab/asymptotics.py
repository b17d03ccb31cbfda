"""Windowed liminf/limsup of f(n)/n^q along arithmetic progressions.

Values are exact rationals. Dense sampling stops at DENSE_LIMIT; past it the
progression is sampled on a grid plus caller-supplied indices (typically
lacunary witnesses, which a uniform grid would miss).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .lacunary import LacunarySeq, WitnessNotFound, witness_near_half, witness_near_zero

DENSE_LIMIT = 10_000
GRID_POINTS = 2_000
DEFAULT_TOL = Fraction(1, 100)
TAIL_FRACTION = Fraction(1, 2)
# gap defaults to this multiple of tol
GAP_FACTOR = 10

VERDICTS = ("converged", "diverged", "inconclusive", "identically zero")


@dataclass
class LimitReport:
    a: int
    r: int
    q: int
    n_min: int
    n_max: int
    tail_start: int
    liminf_est: Fraction
    limsup_est: Fraction
    verdict: str
    tol: Fraction
    gap: Fraction
    witnesses: dict[str, int]
    samples: int
    values: list[tuple[int, int, Fraction]] = field(default_factory=list, repr=False)

    @property
    def spread(self) -> Fraction:
        return self.limsup_est - self.liminf_est

    @property
    def limit_est(self) -> Fraction | None:
        if self.verdict == "identically zero":
            return Fraction(0)
        if self.verdict != "converged":
            return None
        return (self.liminf_est + self.limsup_est) / 2

    def to_json(self) -> dict:
        from .export import rational

        limit = self.limit_est
        return {
            "progression": [self.a, self.r],
            "q": self.q,
            "window": [self.n_min, self.n_max],
            "tail_start": self.tail_start,
            "samples": self.samples,
            "liminf_est": rational(self.liminf_est),
            "limsup_est": rational(self.limsup_est),
            "limit_est": None if limit is None else rational(limit),
            "verdict": self.verdict,
            "tol": rational(self.tol),
            "gap": rational(self.gap),
            "witnesses": dict(self.witnesses),
            "approx": {"liminf": round(float(self.liminf_est), 6),
                       "limsup": round(float(self.limsup_est), 6)},
        }


def _validate(q: int, a: int, r: int, n_max: int) -> None:
    if r < 1:
        raise ValueError("r must be >= 1")
    if not 0 <= a < r:
        raise ValueError("need 0 <= a < r")
    if q < 0:
        raise ValueError("q must be >= 0")
    if n_max < 10 * r:
        raise ValueError(f"n_max must be >= 10*r = {10 * r}")


def sample_indices(a: int, r: int, n_max: int, extra: Iterable[int] = (),
                   dense_limit: int = DENSE_LIMIT, grid_points: int = GRID_POINTS) -> list[int]:
    """Progression indices in [1, n_max]: dense up to dense_limit, then a grid, plus extras."""
    first = a if a >= 1 else r
    dense_end = min(n_max, dense_limit)
    picked = set(range(first, dense_end + 1, r))
    if n_max > dense_limit:
        lo = dense_limit + 1
        lo += (a - lo) % r
        count = (n_max - lo) // r + 1
        if count > 0:
            step = max(1, count // grid_points)
            picked.update(lo + k * r for k in range(0, count, step))
            picked.add(lo + (count - 1) * r)
    picked.update(n for n in extra if 1 <= n <= n_max and n % r == a % r)
    return sorted(picked)


def lacunary_indices(seq: LacunarySeq, a: int, r: int, n_max: int) -> list[int]:
    """Progression points just past and just before each threshold up to n_max."""
    seq.extend_past(n_max)
    out = []
    for t in seq.thresholds:
        if t > n_max + r:
            break
        out.append(t + (a - t) % r)
        out.append(t - ((t - a) % r or r))
    return sorted(n for n in set(out) if 1 <= n <= n_max)


def auto_horizon(seq: LacunarySeq, r: int) -> int:
    """Covers thresholds i_1..i_4 plus one period of slack."""
    return seq.threshold(4) + r


def evaluate(f: Callable[[int], int], q: int, ns: list[int], threads: int = 1) -> list[tuple[int, int, Fraction]]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(f, ns))
    else:
        vals = [f(n) for n in ns]
    return [(n, int(v), Fraction(int(v), n**q)) for n, v in zip(ns, vals)]


def analyze(f: Callable[[int], int], q: int, a: int, r: int, n_max: int,
            tol: Fraction = DEFAULT_TOL, gap: Fraction | None = None,
            extra: Iterable[int] = (), tail_fraction: Fraction = TAIL_FRACTION,
            threads: int = 1) -> LimitReport:
    """Estimate liminf and limsup of f(n)/n^q over the upper part of the window.

    converged: tail spread <= tol. diverged: spread > gap, with both extremes
    attained in the tail. Otherwise inconclusive.
    """
    _validate(q, a, r, n_max)
    tol = Fraction(tol)
    gap = Fraction(gap) if gap is not None else GAP_FACTOR * tol
    if gap < tol:
        raise ValueError("gap must be >= tol")
    ns = sample_indices(a, r, n_max, extra)
    rows = evaluate(f, q, ns, threads)
    n_min = ns[0]
    tail_start = math.ceil(n_max - (n_max - n_min) * Fraction(tail_fraction))
    tail = [row for row in rows if row[0] >= tail_start]
    if all(v == 0 for _, v, _ in rows):
        zero = Fraction(0)
        return LimitReport(a, r, q, n_min, n_max, tail_start, zero, zero, "identically zero",
                           tol, gap, {}, len(rows), rows)
    lo_row = min(tail, key=lambda t: (t[2], t[0]))
    hi_row = max(tail, key=lambda t: (t[2], -t[0]))
    lo, hi = lo_row[2], hi_row[2]
    if len(tail) < 2:
        verdict = "inconclusive"
    elif hi - lo <= tol:
        verdict = "converged"
    elif hi - lo > gap:
        verdict = "diverged"
    else:
        verdict = "inconclusive"
    witnesses = {"liminf": lo_row[0], "limsup": hi_row[0]}
    return LimitReport(a, r, q, n_min, n_max, tail_start, lo, hi, verdict, tol, gap,
                       witnesses, len(rows), rows)


def stability(f: Callable[[int], int], q: int, a: int, r: int, n_max: int,
              tol: Fraction = DEFAULT_TOL) -> tuple[bool, Fraction | None]:
    """Re-run with the window doubled; stable when the verdict holds and the limit drifts < tol/2."""
    first = analyze(f, q, a, r, n_max, tol)
    second = analyze(f, q, a, r, 2 * n_max, tol)
    if first.verdict != second.verdict:
        return False, None
    if first.limit_est is None:
        return True, None
    drift = abs(second.limit_est - first.limit_est)
    return drift < Fraction(tol) / 2, drift


@dataclass
class DivergenceCertificate:
    a: int
    r: int
    q: int
    eps: Fraction
    n_hi: int
    n_lo: int
    value_hi: Fraction
    value_lo: Fraction
    target_hi: Fraction
    target_lo: Fraction
    kinds: dict[str, str]
    trace: list[dict] = field(default_factory=list, repr=False)

    @property
    def gap(self) -> Fraction:
        """Certified separation of the two accumulation windows."""
        return self.value_hi - self.value_lo

    def to_json(self) -> dict:
        from .export import rational

        return {
            "progression": [self.a, self.r], "q": self.q, "eps": rational(self.eps),
            "n_hi": self.n_hi, "n_lo": self.n_lo,
            "value_hi": rational(self.value_hi), "value_lo": rational(self.value_lo),
            "target_hi": rational(self.target_hi), "target_lo": rational(self.target_lo),
            "kinds": dict(self.kinds), "gap": rational(self.gap),
            "approx": {"value_hi": round(float(self.value_hi), 6),
                       "value_lo": round(float(self.value_lo), 6)},
        }


_SEARCH = {"half": witness_near_half, "zero": witness_near_zero}


def _chase(f, q, a, r, seq, kind, target, eps, max_rounds, trace) -> tuple[int, Fraction]:
    # tighten the sigma/n bound and push past the last index until f(n)/n^q lands within eps
    search = _SEARCH[kind]
    inner, m = eps, max(1, a)
    for _ in range(max_rounds):
        n = search(seq, a, r, m, inner)
        value = Fraction(f(n), n**q)
        ok = abs(value - target) < eps
        trace.append({"kind": kind, "n": n, "value": value, "ok": ok})
        if ok:
            return n, value
        inner, m = inner / 2, n
    raise WitnessNotFound(f"{kind}: target {target} not reached in {max_rounds} rounds", trace)


def divergence_certificate(f: Callable[[int], int], q: int, a: int, r: int, seq: LacunarySeq,
                           targets: Mapping[str, Fraction], eps: Fraction,
                           max_rounds: int = 40) -> DivergenceCertificate:
    """Explicit progression indices near the two accumulation targets.

    ``targets`` maps a witness kind ("half": sigma(n)/n near 1/2, "zero":
    sigma(n)/n near 0) to the value f(n)/n^q approaches along those witnesses.
    Both values are recomputed from scratch before returning.
    """
    if set(targets) != {"half", "zero"}:
        raise ValueError("targets must give values for the 'half' and 'zero' witness kinds")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r < 1 or not 0 <= a < r:
        raise ValueError("need r >= 1 and 0 <= a < r")
    trace: list[dict] = []
    found = {kind: _chase(f, q, a, r, seq, kind, Fraction(t), eps, max_rounds, trace)
             for kind, t in sorted(targets.items())}
    hi_kind = max(targets, key=lambda k: (Fraction(targets[k]), k))
    lo_kind = "zero" if hi_kind == "half" else "half"
    (n_hi, v_hi), (n_lo, v_lo) = found[hi_kind], found[lo_kind]
    for n, v, kind in ((n_hi, v_hi, hi_kind), (n_lo, v_lo, lo_kind)):
        again = Fraction(f(n), n**q)
        if again != v or n % r != a or abs(again - Fraction(targets[kind])) >= eps:
            raise AssertionError(f"certificate failed re-validation at n={n}")
    return DivergenceCertificate(a, r, q, eps, n_hi, n_lo, v_hi, v_lo,
                                 Fraction(targets[hi_kind]), Fraction(targets[lo_kind]),
                                 {"hi": hi_kind, "lo": lo_kind}, trace)
