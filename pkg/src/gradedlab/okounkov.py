"""Value semigroups and Newton-Okounkov body estimates for monomial series.

On a relation-free ring a monomial basis of L_n has distinct values under
the lex monomial valuation (dehomogenize, then read off the exponents), so
|S_n| = dim L_n. The body is sampled at level m*N and rescaled by 1/N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .hull import affine_dimension, hull_volume
from .monomial import ExpVec, count_distinct, unique_rows
from .series import GradedSeries, index

HULL_MAX_DIM = 3


class NonReducedModel(ValueError):
    pass


@dataclass(frozen=True)
class MonomialValuation:
    """Lex monomial valuation on the affine chart where ``dehomogenize`` is set to 1."""

    nvars: int
    dehomogenize: int = 0

    def __post_init__(self):
        if not 0 <= self.dehomogenize < self.nvars:
            raise ValueError("dehomogenizing variable out of range")

    @property
    def dimension(self) -> int:
        return self.nvars - 1

    def values(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, self.nvars)
        return np.delete(arr, self.dehomogenize, axis=1)

    def value_of(self, m: ExpVec | Iterable[int]) -> tuple[int, ...]:
        exps = m.exponents if isinstance(m, ExpVec) else tuple(m)
        if len(exps) != self.nvars:
            raise ValueError("monomial has the wrong number of variables")
        return tuple(int(e) for i, e in enumerate(exps) if i != self.dehomogenize)

    def value_of_sum(self, monomials: Iterable) -> tuple[int, ...]:
        """Value of a sum of distinct monomials (nonzero coefficients): the lex-least value."""
        vals = [self.value_of(m) for m in monomials]
        if not vals:
            raise ValueError("the zero polynomial has no value")
        return min(vals)


@dataclass
class ValueSemigroupSample:
    levels: dict[int, np.ndarray]
    index: int
    horizon: int
    valuation: MonomialValuation
    label: str = ""

    def sizes(self) -> list[tuple[int, int]]:
        return [(n, int(self.levels[n].shape[0])) for n in sorted(self.levels)]


@dataclass
class OkounkovBodyEstimate:
    level: int
    q: int
    scale: int
    points: np.ndarray = field(repr=False)
    count_based: Fraction
    hull_based: Fraction | None
    hull_reason: str | None = None

    @property
    def ratio(self) -> Fraction | None:
        if not self.hull_based:
            return None
        return self.count_based / self.hull_based

    def cloud(self) -> list[tuple[Fraction, ...]]:
        """The points gamma/N of the rescaled body sample."""
        return [tuple(Fraction(int(x), self.scale) for x in row) for row in self.points]


def require_reduced(L: GradedSeries) -> None:
    if not L.ring.is_reduced:
        raise NonReducedModel("Okounkov pipeline requires a reduced (relation-free) model")


def level_values(L: GradedSeries, v: MonomialValuation, n: int) -> np.ndarray:
    """S_n as a lex-descending array of distinct values; checks |S_n| = dim L_n."""
    require_reduced(L)
    basis = L.basis_array(n)
    uniq = unique_rows(v.values(basis))
    dim = count_distinct(basis)
    if uniq.shape[0] != dim:
        raise AssertionError(f"|S_{n}| = {uniq.shape[0]} but dim L_{n} = {dim}")
    return uniq


def semigroup_sample(L: GradedSeries, v: MonomialValuation | None = None, horizon: int = 20,
                     levels: Iterable[int] | None = None) -> ValueSemigroupSample:
    """Sample S_n at the given levels (default 0..horizon)."""
    require_reduced(L)
    v = v if v is not None else MonomialValuation(L.ring.nvars)
    wanted = sorted(set(levels)) if levels is not None else list(range(horizon + 1))
    if any(n < 0 or n > horizon for n in wanted):
        raise ValueError("sampled levels must lie in 0..horizon")
    sample = {n: level_values(L, v, n) for n in wanted}
    m = index(L, horizon).value
    return ValueSemigroupSample(sample, m, horizon, v, L.label)


def check_additivity(sample: ValueSemigroupSample, horizon: int | None = None) -> list[dict]:
    """S_m + S_n inside S_{m+n} for sampled m <= n with m + n <= horizon."""
    horizon = sample.horizon if horizon is None else horizon
    sampled = sorted(n for n in sample.levels if n >= 1)
    keys = {n: {tuple(row) for row in sample.levels[n].tolist()} for n in sampled}
    bad = []
    for i, m in enumerate(sampled):
        for n in sampled[i:]:
            if m + n > horizon or (m + n) not in keys:
                continue
            A, B = sample.levels[m], sample.levels[n]
            if A.shape[0] == 0 or B.shape[0] == 0:
                continue
            sums = unique_rows((A[:, None, :] + B[None, :, :]).reshape(-1, A.shape[1]))
            for row in sums.tolist():
                if tuple(row) not in keys[m + n]:
                    bad.append({"m": m, "n": n, "witness": row})
                    break
    return bad


def body_estimate(sample: ValueSemigroupSample, q: int, N: int) -> OkounkovBodyEstimate:
    """Count- and hull-based volume estimates from S_{mN} rescaled by 1/N.

    The hull estimate is exact, and only produced when the cloud is
    full-dimensional of dimension q <= 3.
    """
    if N < 1:
        raise ValueError("level N must be positive")
    level = sample.index * N
    if level > sample.horizon:
        raise ValueError(f"level m*N = {level} exceeds the sampled horizon {sample.horizon}")
    if level not in sample.levels:
        raise ValueError(f"level {level} was not sampled")
    if not any(arr.shape[0] for n, arr in sample.levels.items() if n >= 1):
        raise ValueError("no nonzero piece")
    pts = sample.levels[level]
    if pts.shape[0] == 0:
        raise ValueError("no nonzero piece")
    ambient = pts.shape[1]
    if q > ambient:
        raise ValueError(f"q={q} exceeds the valuation dimension {ambient}")
    count = Fraction(pts.shape[0], N**q)
    hull, reason = None, None
    adim = affine_dimension(pts)
    if adim != q:
        reason = f"affine dimension {adim} differs from q={q}"
    elif q != ambient:
        reason = f"cloud of dimension {q} sits in a {ambient}-dimensional value group"
    elif q > HULL_MAX_DIM:
        reason = f"exact hull only for dimension <= {HULL_MAX_DIM}"
    else:
        hull = hull_volume(pts) / N**q
    return OkounkovBodyEstimate(level, q, N, pts, count, hull, reason)
