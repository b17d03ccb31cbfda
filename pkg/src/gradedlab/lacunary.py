"""The lacunary step function sigma(n) and its witness searches.

Thresholds i_1 = 2 < i_2 < ... are even with i_{j+1} > 2^j i_j, and
sigma(n) = i_j / 2 on [i_j, i_{j+1}), with sigma(1) = 1. Along any arithmetic
progression sigma(n)/n comes arbitrarily close to both 1/2 (just after a
threshold) and 0 (just before one).
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

# witness searches give up after this many thresholds
MAX_THRESHOLD_INDEX = 64


class WitnessNotFound(RuntimeError):
    def __init__(self, message: str, trace: list[dict]):
        super().__init__(message)
        self.trace = trace


def next_threshold(j: int, i_j: int) -> int:
    """Smallest even integer exceeding 2^j * i_j."""
    return (2**j) * i_j + 2


@dataclass
class LacunarySeq:
    """Threshold prefix of sigma, extended on demand by :func:`next_threshold`.

    Extension is guarded by a lock, so a shared instance may be read from
    several threads.
    """

    thresholds: list[int] = field(default_factory=lambda: [2])
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        self.thresholds = [int(t) for t in self.thresholds] or [2]
        validate_thresholds(self.thresholds)

    @classmethod
    def minimal(cls, count: int = 4) -> "LacunarySeq":
        seq = cls()
        seq.extend(count)
        return seq

    @classmethod
    def from_json(cls, data: dict) -> "LacunarySeq":
        if set(data) != {"thresholds"}:
            raise ValueError("expected an object with the single key 'thresholds'")
        return cls(list(data["thresholds"]))

    def to_json(self) -> dict:
        return {"thresholds": list(self.thresholds)}

    def extend(self, count: int) -> None:
        """Make sure at least ``count`` thresholds are stored."""
        with self._lock:
            while len(self.thresholds) < count:
                j = len(self.thresholds)
                self.thresholds.append(next_threshold(j, self.thresholds[-1]))

    def extend_past(self, n: int) -> None:
        """Make sure the last stored threshold exceeds n."""
        while self.thresholds[-1] <= n:
            self.extend(len(self.thresholds) + 1)

    def threshold(self, j: int) -> int:
        """i_j, 1-based."""
        if j < 1:
            raise ValueError("thresholds are indexed from 1")
        self.extend(j)
        return self.thresholds[j - 1]

    def block_index(self, n: int) -> int:
        """The j with i_j <= n < i_{j+1} (n >= 2)."""
        self.extend_past(n)
        return bisect.bisect_right(self.thresholds, n)

    def sigma(self, n: int) -> int:
        return sigma(self, n)


def validate_thresholds(ts: list[int]) -> None:
    if ts[0] != 2:
        raise ValueError("the first threshold must be 2")
    for j, (a, b) in enumerate(zip(ts, ts[1:]), start=1):
        if b % 2:
            raise ValueError(f"threshold {b} is odd")
        if b <= 2**j * a:
            raise ValueError(f"threshold i_{j + 1}={b} must exceed 2^{j}*i_{j}={2**j * a}")


def sigma(seq: LacunarySeq, n: int) -> int:
    if n < 1:
        raise ValueError("sigma is defined for n >= 1")
    if n == 1:
        return 1
    return seq.threshold(seq.block_index(n)) // 2


def sigma_ratio(seq: LacunarySeq, n: int) -> Fraction:
    return Fraction(sigma(seq, n), n)


def witness_near_half(seq: LacunarySeq, a: int, r: int, m: int, eps: Fraction) -> int:
    """n = a (mod r), n > m, |sigma(n)/n - 1/2| < eps.

    Walks thresholds upward and takes n = i_j + k with 0 <= k < r on the
    progression, for the first j where that n is valid (n > m, n >= a,
    n < i_{j+1}, and the ratio bound holds exactly).
    """
    eps = _check(a, r, eps)
    half = Fraction(1, 2)
    trace = []
    for j in range(1, MAX_THRESHOLD_INDEX + 1):
        i_j = seq.threshold(j)
        i_next = seq.threshold(j + 1)
        n = i_j + (a - i_j) % r
        ratio = Fraction(i_j, 2 * n)
        ok = n > m and n >= a and n < i_next and abs(ratio - half) < eps
        trace.append({"j": j, "n": n, "ratio": ratio, "ok": ok})
        if ok:
            return n
    raise WitnessNotFound("no near-1/2 witness within the threshold horizon", trace)


def witness_near_zero(seq: LacunarySeq, a: int, r: int, m: int, eps: Fraction) -> int:
    """n = a (mod r), n > m, sigma(n)/n < eps.

    Takes n = i_{j+1} - k with 0 < k <= r on the progression, for the first j
    where n > m, n >= max(a, i_j) and the ratio bound holds exactly.
    """
    eps = _check(a, r, eps)
    trace = []
    for j in range(1, MAX_THRESHOLD_INDEX + 1):
        i_j = seq.threshold(j)
        i_next = seq.threshold(j + 1)
        k = (i_next - a) % r or r
        n = i_next - k
        ratio = Fraction(i_j, 2 * n) if n > 0 else None
        ok = n > m and n >= a and n >= i_j and ratio is not None and ratio < eps
        trace.append({"j": j, "n": n, "ratio": ratio, "ok": ok})
        if ok:
            return n
    raise WitnessNotFound("no near-0 witness within the threshold horizon", trace)


def _check(a: int, r: int, eps) -> Fraction:
    if r < 1:
        raise ValueError("r must be positive")
    if a < 0:
        raise ValueError("a must be nonnegative")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return eps


def blind_scan(seq: LacunarySeq, a: int, r: int, m: int, eps, target: str, limit: int = 10_000) -> int | None:
    """First n on the progression with n > m meeting the target bound, or None.

    Plain enumeration; used to cross-check the constructive searches.
    """
    eps = _check(a, r, eps)
    goal = Fraction(1, 2) if target == "half" else Fraction(0)
    start = max(a, m + 1)
    start += (a - start) % r
    for n in range(start, limit + 1, r):
        if abs(sigma_ratio(seq, n) - goal) < eps:
            return n
    return None


def sigma_table(seq: LacunarySeq, ns: Iterable[int]) -> list[tuple[int, int]]:
    return [(n, sigma(seq, n)) for n in ns]
