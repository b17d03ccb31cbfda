"""Monomial graded linear series and closed-form growth models.

A :class:`GradedSeries` gives, for each n, a monomial k-basis of L_n inside
the degree ``scale * n`` piece of a monomial quotient ring. A
:class:`GrowthModel` is a bare growth function n -> dim L_n for examples
whose geometry is not modelled.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .lacunary import LacunarySeq, sigma
from .monomial import (
    ExpVec,
    QuotientRing,
    count_distinct,
    decode,
    encode,
    monomial_array,
    to_expvecs,
    unique_rows,
)

NEG_INF = float("-inf")

# precision (bits) for deciding ceil(log n)
LOG_PRECISION = 128
_IV_LOCK = threading.Lock()


class BoundaryUndecided(ArithmeticError):
    """Raised when e^t versus n cannot be separated at the working precision."""


@dataclass(frozen=True, eq=False)
class GradedSeries:
    ring: QuotientRing
    scale: int
    basis_rule: Callable[[int], np.ndarray]
    label: str
    params: dict = field(default_factory=dict)
    # exact closed-form count, when the example has one; tests tie it to basis_rule
    dim_formula: Callable[[int], int] | None = None
    # accumulation targets of dim/n^q keyed by lacunary witness kind ("half"/"zero")
    sigma_targets: dict[str, Fraction] | None = None

    def basis_array(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("n must be nonnegative")
        return np.asarray(self.basis_rule(n), dtype=np.int64).reshape(-1, self.ring.nvars)

    def basis(self, n: int) -> list[ExpVec]:
        arr = self.basis_array(n)
        return to_expvecs(unique_rows(arr))

    def growth(self, n: int) -> int:
        return self.dim_formula(n) if self.dim_formula is not None else dim_piece(self, n)


@dataclass(frozen=True, eq=False)
class GrowthModel:
    formula_rule: Callable[[int], int]
    label: str
    params: dict = field(default_factory=dict)

    def growth(self, n: int) -> int:
        value = self.formula_rule(n)
        if value < 0:
            raise ValueError(f"{self.label}: negative value {value} at n={n}")
        return value


@dataclass(frozen=True)
class HorizonEstimate:
    """An invariant read off from pieces 1..horizon; never extrapolated."""

    value: int | float
    horizon: int
    method: str
    horizon_limited: bool = True

    def to_json(self) -> dict:
        value = "-inf" if self.value == NEG_INF else self.value
        return {"value": value, "horizon": self.horizon, "method": self.method,
                "horizon_limited": self.horizon_limited}


def dim_piece(L: GradedSeries, n: int) -> int:
    """dim_k L_n by enumerating the basis rule and counting distinct monomials."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return count_distinct(L.basis_array(n))


def growth_function(obj) -> Callable[[int], int]:
    return obj.growth


# ---------------------------------------------------------------- T sets

@dataclass(frozen=True)
class IntSet:
    """Decidable subset of the positive integers, parsed from a short spec.

    Specs: ``all``, ``none``, ``evens``, ``odds``, ``squares``,
    ``multiples:K``, ``powers:P``, ``set:1,4,9``, ``not:<spec>``.
    """

    spec: str

    def __post_init__(self):
        pred, infinite, coinfinite = self._parse(self.spec)
        object.__setattr__(self, "_pred", pred)
        object.__setattr__(self, "_flags", (infinite, coinfinite))

    @staticmethod
    def _parse(spec: str):
        spec = spec.strip()
        if spec.startswith("not:"):
            inner = IntSet(spec[4:])
            return (lambda n: not inner.contains(n)), not inner.coinfinite, not inner.infinite
        if spec == "all":
            return (lambda n: True), True, False
        if spec == "none":
            return (lambda n: False), False, True
        if spec == "evens":
            return (lambda n: n % 2 == 0), True, True
        if spec == "odds":
            return (lambda n: n % 2 == 1), True, True
        if spec == "squares":
            return (lambda n: math.isqrt(n) ** 2 == n), True, True
        m = re.fullmatch(r"multiples:(\d+)", spec)
        if m:
            k = int(m.group(1))
            if k < 1:
                raise ValueError("multiples:K needs K >= 1")
            return (lambda n: n % k == 0), True, k > 1
        m = re.fullmatch(r"powers:(\d+)", spec)
        if m:
            p = int(m.group(1))
            if p < 2:
                raise ValueError("powers:P needs P >= 2")
            return (lambda n: is_power_of(n, p)), True, True
        m = re.fullmatch(r"set:([\d,]*)", spec)
        if m:
            members = frozenset(int(t) for t in m.group(1).split(",") if t)
            return (lambda n: n in members), False, True
        raise ValueError(f"unknown set spec {spec!r}")

    def contains(self, n: int) -> bool:
        return self._pred(n)

    __contains__ = contains

    @property
    def infinite(self) -> bool:
        return self._flags[0]

    @property
    def coinfinite(self) -> bool:
        return self._flags[1]


def is_power_of(n: int, p: int) -> bool:
    """n = p^k for some k >= 0, by repeated exact division."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


# ---------------------------------------------------------------- logs

def _exp_at_least(t: int, n: int) -> bool:
    """Decide e^t >= n exactly for integers t >= 0, n >= 1."""
    if t == 0:
        return n <= 1
    # the interval context keeps its own global precision, so set it under a lock
    with _IV_LOCK:
        saved = mpmath.iv.prec
        mpmath.iv.prec = LOG_PRECISION
        try:
            iv = mpmath.iv.exp(mpmath.iv.mpf(t))
            lo, hi = iv.a, iv.b
        finally:
            mpmath.iv.prec = saved
    if lo >= n:
        return True
    if hi < n:
        return False
    raise BoundaryUndecided(f"cannot decide e^{t} >= {n} at {LOG_PRECISION} bits")


def ceil_log(n: int, halve: bool = False) -> int:
    """ceil(ln n), or ceil(ln(n)/2) when ``halve``; decided with interval arithmetic."""
    if n < 1:
        raise ValueError("log needs n >= 1")
    step = 2 if halve else 1
    k = max(0, math.ceil(math.log(n) / step))
    while not _exp_at_least(k * step, n):
        k += 1
    while k > 0 and _exp_at_least((k - 1) * step, n):
        k -= 1
    return k


# ---------------------------------------------------------------- examples

def _names(count: int, prefix: str = "x", start: int = 0) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(start, start + count))


def _unit_row(nvars: int) -> np.ndarray:
    return np.zeros((1, nvars), dtype=np.int64)


def _binom(top: int, k: int) -> int:
    return math.comb(top, k) if top >= 0 else 0


def _example_25(d: int, seq: LacunarySeq) -> GradedSeries:
    # S = k[x0, x1, ..., x_{d+1}] / (x1^2); L_n = x0^n M_n  +  x1 x0^(n - sigma(n)) M_(n + sigma(n) - 1)
    # where M_i are degree-i monomials in x0, x2, ..., x_{d+1}
    ring = QuotientRing.with_square_zero(_names(d + 2), "x1")
    v = d + 2

    def rule(n: int) -> np.ndarray:
        if n == 0:
            return _unit_row(v)
        s = sigma(seq, n)
        first = monomial_array(d + 1, n)
        second = monomial_array(d + 1, n + s - 1)
        out = np.zeros((first.shape[0] + second.shape[0], v), dtype=np.int64)
        k = first.shape[0]
        out[:k, 0] = first[:, 0] + n
        out[:k, 2:] = first[:, 1:]
        out[k:, 0] = second[:, 0] + n - s
        out[k:, 1] = 1
        out[k:, 2:] = second[:, 1:]
        return out

    def formula(n: int) -> int:
        if n == 0:
            return 1
        return math.comb(d + n, d) + math.comb(d + n + sigma(seq, n) - 1, d)

    fact = math.factorial(d)
    targets = {
        "half": Fraction(1, fact) * (1 + Fraction(3, 2) ** d),
        "zero": Fraction(2, fact),
    }
    return GradedSeries(ring, 2, rule, "E25", {"d": d, "threshold_prefix": list(seq.thresholds)}, formula, targets)


def _example_2(T: IntSet) -> GradedSeries:
    # double line S = k[x0, x1, x2]/(x1^2); L_n spanned by x1 x0^i x2^j (i + j = n),
    # padded by x0^(n-1) into degree 2n
    ring = QuotientRing.with_square_zero(_names(3), "x1")

    def rule(n: int) -> np.ndarray:
        if n == 0:
            return _unit_row(3)
        if n not in T:
            return np.zeros((0, 3), dtype=np.int64)
        i = np.arange(n, -1, -1, dtype=np.int64)
        return np.stack([n - 1 + i, np.ones_like(i), n - i], axis=1)

    def formula(n: int) -> int:
        if n == 0:
            return 1
        return n + 1 if n in T else 0

    return GradedSeries(ring, 2, rule, "E2", {"T": T.spec}, formula)


def _t21_series(T: IntSet) -> GradedSeries:
    # L_n spanned by x0^(n-t) x1 x2^t, 0 <= t <= lambda(n), padded by x0^(n-1)
    if not (T.infinite and T.coinfinite):
        raise ValueError("T21 needs T infinite with infinite complement")
    ring = QuotientRing.with_square_zero(_names(3), "x1")

    def lam(n: int) -> int:
        return ceil_log(n) if n in T else ceil_log(n, halve=True)

    def rule(n: int) -> np.ndarray:
        if n == 0:
            return _unit_row(3)
        t = np.arange(lam(n) + 1, dtype=np.int64)
        return np.stack([2 * n - 1 - t, np.ones_like(t), t], axis=1)

    def formula(n: int) -> int:
        return 1 if n == 0 else lam(n) + 1

    return GradedSeries(ring, 2, rule, "T21", {"T": T.spec, "log": "natural"}, formula)


def _projective_full(d: int, c: int = 1, label: str = "P_d_full") -> GradedSeries:
    ring = QuotientRing.polynomial(_names(d + 1))

    def rule(n: int) -> np.ndarray:
        return monomial_array(d + 1, c * n)

    def formula(n: int) -> int:
        return math.comb(c * n + d, d)

    params = {"d": d} if label == "P_d_full" else {"d": d, "c": c}
    return GradedSeries(ring, c, rule, label, params, formula)


def _example_16_model(d: int, p: int) -> GrowthModel:
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")

    def rule(n: int) -> int:
        if n == 0:
            return 1
        return math.comb(d + n - 1, d - 1) if is_power_of(n, p) else 0

    return GrowthModel(rule, "E16_model", {"d": d, "p": p})


def _example_3_model(d: int, a: tuple[int, ...], correction: tuple[int, ...]) -> GrowthModel:
    if d < 2:
        raise ValueError("E3_model needs d > 1")
    if not a or any(x < 1 for x in a):
        raise ValueError("a_i must be positive integers")
    if not correction:
        raise ValueError("correction must be a nonempty periodic list")

    def rule(n: int) -> int:
        if n == 0:
            return 1
        lam = sum(1 for x in a if n % x == 0)
        return lam * math.comb(d + n - 1, d - 1) + correction[n % len(correction)]

    return GrowthModel(rule, "E3_model", {"d": d, "a": list(a), "correction": list(correction),
                                           "period": math.lcm(*a)})


def double_hyperplane_line_bundle(d: int, a: int) -> GrowthModel:
    """h^0 of O(a) restricted to the double hyperplane in P^(d+1)."""

    def rule(n: int) -> int:
        if n == 0:
            return 1
        if a < 0:
            return 0
        if a == 0:
            return 1
        return _binom(n * a + d + 1, d + 1) - _binom(n * a - 2 + d + 1, d + 1)

    return GrowthModel(rule, "double_hyperplane_line_bundle", {"d": d, "a": a})


EXAMPLES = ("E25", "E2", "T21", "E16_model", "E3_model", "P_d_full", "veronese",
            "double_hyperplane_line_bundle")

ALIASES = {
    "e25": "E25", "e2": "E2", "t21": "T21", "e16": "E16_model", "e16_model": "E16_model",
    "e3": "E3_model", "e3_model": "E3_model", "pd_full": "P_d_full", "p_d_full": "P_d_full",
    "veronese": "veronese", "dhl": "double_hyperplane_line_bundle",
    "double_hyperplane_line_bundle": "double_hyperplane_line_bundle",
}


def canonical_name(name: str) -> str:
    key = name.lower()
    if key not in ALIASES:
        raise KeyError(f"unknown example {name!r}; valid: {', '.join(EXAMPLES)}")
    return ALIASES[key]


def make_example(name: str, d: int = 1, T: str | IntSet = "all", p: int = 2,
                 a: tuple[int, ...] = (1, 2), c: int = 2, line_degree: int = 1,
                 correction: tuple[int, ...] = (0,),
                 seq: LacunarySeq | None = None) -> GradedSeries | GrowthModel:
    """Build a named example series or growth model."""
    name = canonical_name(name)
    if d < 1:
        raise ValueError("d must be >= 1")
    if isinstance(T, str):
        T = IntSet(T)
    if name == "E25":
        return _example_25(d, seq if seq is not None else LacunarySeq())
    if name == "E2":
        return _example_2(T)
    if name == "T21":
        return _t21_series(T)
    if name == "E16_model":
        return _example_16_model(d, p)
    if name == "E3_model":
        return _example_3_model(d, tuple(a), tuple(correction))
    if name == "P_d_full":
        return _projective_full(d)
    if name == "veronese":
        if c < 1:
            raise ValueError("veronese needs c >= 1")
        return _projective_full(d, c, "veronese")
    return double_hyperplane_line_bundle(d, line_degree)


# ---------------------------------------------------------------- invariants

def check_basis(L: GradedSeries, n: int) -> list[str]:
    """Problems with the basis of L_n (wrong degree, zero, repeated); empty if fine."""
    arr = L.basis_array(n)
    problems = []
    if n == 0 and not (arr.shape[0] == 1 and not arr.any()):
        problems.append("L_0 is not spanned by 1")
    bad = arr.sum(axis=1) != L.scale * n
    if bad.any():
        problems.append(f"degree != {L.scale * n}: {arr[bad][0].tolist()}")
    zero = L.ring.zero_mask(arr)
    if zero.any():
        problems.append(f"zero in quotient: {arr[zero][0].tolist()}")
    if count_distinct(arr) != arr.shape[0]:
        problems.append("repeated basis monomials")
    return problems


def check_multiplicative(L: GradedSeries, horizon: int) -> list[dict]:
    """Exhaustive test of L_m * L_n inside L_{m+n} on monomials, m + n <= horizon.

    Products vanishing in the quotient are skipped. Exponent rows are packed
    into int64 keys with a radix above every exponent sum, so keys add like
    exponent vectors.
    """
    radix = L.scale * horizon + 1
    nvars = L.ring.nvars
    bases = {n: L.basis_array(n) for n in range(horizon + 1)}
    keys = {n: encode(b, radix) for n, b in bases.items()}
    targets = {n: np.sort(k) for n, k in keys.items()}
    rels = L.ring.relation_array
    pure = all(len(r.support) == 1 for r in L.ring.relations)
    violations = []
    for m in range(1, horizon // 2 + 1):
        for n in range(m, horizon - m + 1):
            a, b = bases[m], bases[n]
            if a.shape[0] == 0 or b.shape[0] == 0:
                continue
            prods = (keys[m][:, None] + keys[n][None, :]).ravel()
            if pure:
                zero = np.zeros(prods.shape[0], dtype=bool)
                for r in rels:
                    col = int(np.flatnonzero(r)[0])
                    zero |= ((a[:, col][:, None] + b[:, col][None, :]) >= r[col]).ravel()
            else:
                zero = L.ring.zero_mask(decode(prods, radix, nvars))
            prods = np.unique(prods[~zero])
            if prods.shape[0] == 0:
                continue
            t = targets[m + n]
            pos = np.minimum(np.searchsorted(t, prods), max(t.shape[0] - 1, 0))
            found = t[pos] == prods if t.shape[0] else np.zeros(prods.shape[0], dtype=bool)
            if not found.all():
                witness = decode(prods[~found][:1], radix, nvars)[0]
                violations.append({"m": m, "n": n, "witness": witness.tolist()})
    return violations


def index(L, horizon: int) -> HorizonEstimate:
    """gcd of the degrees 1 <= n <= horizon with L_n != 0."""
    support = [n for n in range(1, horizon + 1) if L.growth(n) > 0]
    if not support:
        raise ValueError("no nonzero piece up to the horizon")
    return HorizonEstimate(math.gcd(*support), horizon, "gcd-of-support")


def lattice_rank_applicable(ring: QuotientRing) -> bool:
    """Rank method is used for relation-free rings and rings whose relations are pure powers."""
    return all(len(r.support) == 1 for r in ring.relations)


def exact_rank(matrix) -> int:
    rows = [[Fraction(int(x)) for x in row] for row in matrix]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def kodaira_iitaka(L, horizon: int) -> HorizonEstimate:
    """Kodaira-Iitaka dimension from pieces 1..horizon.

    For monomial series: (rank of the lattice spanned by exponent vectors of
    non-nilpotent basis monomials) - 1, or -inf when there are none. The rank
    is that of the accumulated Gram matrix, computed exactly. Outside that
    setting only an empirical log-log growth slope is reported.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if not isinstance(L, GradedSeries) or not lattice_rank_applicable(L.ring):
        return HorizonEstimate(empirical_growth_exponent(L, horizon), horizon, "empirical")
    v = L.ring.nvars
    gram = [[0] * v for _ in range(v)]
    seen = False
    for n in range(1, horizon + 1):
        arr = L.basis_array(n)
        arr = arr[~L.ring.nilpotent_mask(arr)]
        if arr.shape[0] == 0:
            continue
        seen = True
        peak = int(arr.max())
        if arr.shape[0] * peak * peak < 2**62:
            level = arr.T @ arr
        else:
            level = arr.T.astype(object) @ arr.astype(object)
        for i in range(v):
            for j in range(v):
                gram[i][j] += int(level[i, j])
    if not seen:
        return HorizonEstimate(NEG_INF, horizon, "lattice-rank")
    return HorizonEstimate(exact_rank(gram) - 1, horizon, "lattice-rank")


def empirical_growth_exponent(L, horizon: int) -> float:
    """Least-squares slope of log dim against log n over the upper half of the horizon."""
    ns = [n for n in range(max(2, horizon // 2), horizon + 1) if L.growth(n) > 0]
    if len(ns) < 2:
        return NEG_INF
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray([L.growth(n) for n in ns], dtype=float))
    return round(float(np.polyfit(x, y, 1)[0]), 6)
