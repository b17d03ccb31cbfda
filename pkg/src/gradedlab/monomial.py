"""Exact monomial arithmetic in polynomial rings modulo monomial ideals.

Everything here is monomial-spanned, so k-dimensions reduce to counting
exponent vectors. Bulk work is done on integer numpy arrays whose rows are
exponent vectors; the public API speaks :class:`ExpVec`.

Canonical listings use the lex monomial order with the ring's declared
variable order, largest first (x0^2 > x0*x1 > x0*x2 > ...).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

INFINITE = math.inf

# dense boolean boxes above this many cells fall back to pairwise methods
BOX_LIMIT = 40_000_000

_ARRAY_CACHE: dict[tuple[int, int], np.ndarray] = {}
_ARRAY_CACHE_ROWS = 200_000


@dataclass(frozen=True, order=True)
class ExpVec:
    """Exponent vector of a monomial, with its total degree."""

    exponents: tuple[int, ...]
    degree: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "degree", sum(exps))

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, i):
        return self.exponents[i]

    def __mul__(self, other: "ExpVec") -> "ExpVec":
        if len(self) != len(other):
            raise ValueError("exponent vectors of different length")
        return ExpVec(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, e: int) -> "ExpVec":
        return ExpVec(tuple(e * a for a in self.exponents))

    def divides(self, other: "ExpVec") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.exponents) if e)

    def to_json(self) -> list[int]:
        return list(self.exponents)

    @classmethod
    def zero(cls, nvars: int) -> "ExpVec":
        return cls((0,) * nvars)

    @classmethod
    def unit(cls, nvars: int, i: int, power: int = 1) -> "ExpVec":
        exps = [0] * nvars
        exps[i] = power
        return cls(tuple(exps))


def as_array(monomials: Iterable[ExpVec | Sequence[int]], nvars: int) -> np.ndarray:
    rows = [tuple(m) for m in monomials]
    if not rows:
        return np.zeros((0, nvars), dtype=np.int64)
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != nvars:
        raise ValueError(f"expected exponent vectors of length {nvars}")
    return arr


def to_expvecs(arr: np.ndarray) -> list[ExpVec]:
    return [ExpVec(tuple(row)) for row in arr.tolist()]


def monomial_array(nvars: int, degree: int) -> np.ndarray:
    """All exponent vectors of the given total degree, lex-descending.

    Built recursively on the first exponent; small results are cached and
    returned read-only.
    """
    if degree < 0:
        return np.zeros((0, nvars), dtype=np.int64)
    key = (nvars, degree)
    cached = _ARRAY_CACHE.get(key)
    if cached is not None:
        return cached
    if nvars == 0:
        out = np.zeros((1 if degree == 0 else 0, 0), dtype=np.int64)
    elif nvars == 1:
        out = np.array([[degree]], dtype=np.int64)
    else:
        blocks = []
        for first in range(degree, -1, -1):
            rest = monomial_array(nvars - 1, degree - first)
            block = np.empty((rest.shape[0], nvars), dtype=np.int64)
            block[:, 0] = first
            block[:, 1:] = rest
            blocks.append(block)
        out = np.concatenate(blocks)
    if out.shape[0] <= _ARRAY_CACHE_ROWS:
        out.flags.writeable = False
        _ARRAY_CACHE[key] = out
    return out


def encode(arr: np.ndarray, radix: int) -> np.ndarray:
    """Pack exponent rows into int64 keys; key order equals lex order of rows."""
    nvars = arr.shape[1]
    if radix ** max(nvars, 1) >= 2**62:
        raise OverflowError("exponent box too large for int64 keys")
    weights = radix ** np.arange(nvars - 1, -1, -1, dtype=np.int64)
    return arr @ weights


def decode(keys: np.ndarray, radix: int, nvars: int) -> np.ndarray:
    out = np.empty((keys.shape[0], nvars), dtype=np.int64)
    rest = keys.copy()
    for col in range(nvars - 1, -1, -1):
        rest, out[:, col] = np.divmod(rest, radix)
    return out


def count_distinct(arr: np.ndarray) -> int:
    if arr.shape[0] == 0:
        return 0
    radix = int(arr.max()) + 1
    try:
        keys = encode(arr, radix)
    except OverflowError:
        return int(np.unique(arr, axis=0).shape[0])
    return int(np.unique(keys).shape[0])


def unique_rows(arr: np.ndarray) -> np.ndarray:
    """Distinct rows, lex-descending."""
    if arr.shape[0] == 0:
        return arr.copy()
    radix = int(arr.max()) + 1
    try:
        keys = encode(arr, radix)
    except OverflowError:
        return sort_lex_desc(np.unique(arr, axis=0))
    return decode(np.unique(keys)[::-1], radix, arr.shape[1])


def sort_lex_desc(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] <= 1:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order[::-1]]


def _divisible_mask(arr: np.ndarray, divisors: np.ndarray, chunk: int = 4_000_000) -> np.ndarray:
    """mask[i] is True iff some row of ``divisors`` divides ``arr[i]``."""
    out = np.zeros(arr.shape[0], dtype=bool)
    if divisors.shape[0] == 0 or arr.shape[0] == 0:
        return out
    step = max(1, chunk // max(1, divisors.size))
    for lo in range(0, arr.shape[0], step):
        block = arr[lo:lo + step]
        out[lo:lo + step] = np.any(np.all(block[:, None, :] >= divisors[None, :, :], axis=2), axis=1)
    return out


def _upward_closure(points: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Boolean box marking every cell lying above some point (componentwise)."""
    box = np.zeros(shape, dtype=bool)
    inside = np.all(points < np.asarray(shape, dtype=np.int64), axis=1) if points.size else np.zeros(0, bool)
    pts = points[inside]
    if pts.shape[0]:
        box[tuple(pts.T)] = True
    for axis in range(len(shape)):
        np.logical_or.accumulate(box, axis=axis, out=box)
    return box


def _minimal_rows(arr: np.ndarray) -> np.ndarray:
    """Minimal elements of a set of exponent vectors under divisibility."""
    if arr.shape[0] <= 1:
        return arr.copy()
    shape = tuple(int(c) + 1 for c in arr.max(axis=0))
    if math.prod(shape) <= BOX_LIMIT:
        closure = _upward_closure(arr, shape)
        has_pred = np.zeros(shape, dtype=bool)
        for axis in range(len(shape)):
            src = [slice(None)] * len(shape)
            dst = [slice(None)] * len(shape)
            src[axis] = slice(0, shape[axis] - 1)
            dst[axis] = slice(1, shape[axis])
            has_pred[tuple(dst)] |= closure[tuple(src)]
        return np.argwhere(closure & ~has_pred).astype(np.int64)
    uniq = np.unique(arr, axis=0)
    uniq = uniq[np.argsort(uniq.sum(axis=1), kind="stable")]
    kept: list[np.ndarray] = []
    for row in uniq:
        if kept and np.any(np.all(row[None, :] >= np.asarray(kept), axis=1)):
            continue
        kept.append(row)
    return np.asarray(kept, dtype=np.int64)


@dataclass(frozen=True)
class QuotientRing:
    """k[variables] modulo a monomial ideal of relations (standard grading).

    An empty relation list is the polynomial ring. Power-series rings are
    modelled by the same data; only the counting is "local".
    """

    variable_names: tuple[str, ...]
    relations: tuple[ExpVec, ...] = ()

    def __post_init__(self):
        names = tuple(self.variable_names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        rels = tuple(r if isinstance(r, ExpVec) else ExpVec(tuple(r)) for r in self.relations)
        for r in rels:
            if len(r) != len(names):
                raise ValueError(f"relation {r.exponents} has wrong length")
            if r.degree == 0:
                raise ValueError("the unit relation gives the zero ring")
        arr = _minimal_rows(as_array(rels, len(names))) if rels else np.zeros((0, len(names)), np.int64)
        object.__setattr__(self, "variable_names", names)
        object.__setattr__(self, "relations", tuple(to_expvecs(sort_lex_desc(arr))))

    @classmethod
    def polynomial(cls, names: Sequence[str]) -> "QuotientRing":
        return cls(tuple(names))

    @classmethod
    def with_square_zero(cls, names: Sequence[str], nilpotent: str) -> "QuotientRing":
        names = tuple(names)
        return cls(names, (ExpVec.unit(len(names), names.index(nilpotent), 2),))

    @property
    def nvars(self) -> int:
        return len(self.variable_names)

    @property
    def grading(self) -> str:
        return "standard"

    @property
    def is_reduced(self) -> bool:
        """True for relation-free rings.

        Monomial quotients with relations always contain nilpotents.
        """
        return not self.relations

    @cached_property
    def relation_array(self) -> np.ndarray:
        return as_array(self.relations, self.nvars)

    def index(self, name: str) -> int:
        return self.variable_names.index(name)

    def monomial(self, exps: Sequence[int] | dict[str, int]) -> ExpVec:
        if isinstance(exps, dict):
            vec = [0] * self.nvars
            for name, e in exps.items():
                vec[self.index(name)] = e
            return ExpVec(tuple(vec))
        m = ExpVec(tuple(exps))
        if len(m) != self.nvars:
            raise ValueError("wrong number of exponents")
        return m

    def parse(self, text: str) -> ExpVec:
        """Parse ``"x0^2*x1"``-style text; ``"1"`` is the unit monomial."""
        vec = [0] * self.nvars
        text = text.replace(" ", "")
        if text in ("", "1"):
            return ExpVec(tuple(vec))
        for factor in text.split("*"):
            match = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
            if not match:
                raise ValueError(f"cannot parse factor {factor!r}")
            vec[self.index(match.group(1))] += int(match.group(2) or 1)
        return ExpVec(tuple(vec))

    def format(self, m: ExpVec) -> str:
        parts = []
        for name, e in zip(self.variable_names, m.exponents):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def zero_mask(self, arr: np.ndarray) -> np.ndarray:
        return _divisible_mask(arr, self.relation_array)

    def is_zero(self, m: ExpVec) -> bool:
        return any(r.divides(m) for r in self.relations)

    def is_nilpotent(self, m: ExpVec) -> bool:
        # m^e is zero for large e iff some relation's support lies in supp(m)
        supp = m.support
        return any(r.support <= supp for r in self.relations)

    def nilpotent_mask(self, arr: np.ndarray) -> np.ndarray:
        if not self.relations:
            return np.zeros(arr.shape[0], dtype=bool)
        supports = (self.relation_array > 0).astype(np.int64)
        return _divisible_mask((arr > 0).astype(np.int64), supports)

    def standard_array(self, degree: int) -> np.ndarray:
        arr = monomial_array(self.nvars, degree)
        if self.relations:
            arr = arr[~self.zero_mask(arr)]
        return arr

    def standard_monomials(self, degree: int) -> list[ExpVec]:
        return to_expvecs(self.standard_array(degree))


class MonomialIdeal:
    """Monomial ideal in a :class:`QuotientRing`.

    Generators are stored minimized, without monomials that vanish in the
    quotient, in lex-descending order. The zero ideal has no generators.
    Instances are immutable; the generator array is the source of truth.
    """

    def __init__(self, ring: QuotientRing, generators: Iterable[ExpVec | Sequence[int]] = ()):
        arr = as_array(generators, ring.nvars)
        self.ring = ring
        self._array = _normalize(ring, arr)
        self._array.flags.writeable = False

    @classmethod
    def from_array(cls, ring: QuotientRing, arr: np.ndarray) -> "MonomialIdeal":
        ideal = cls.__new__(cls)
        ideal.ring = ring
        ideal._array = _normalize(ring, arr)
        ideal._array.flags.writeable = False
        return ideal

    @classmethod
    def unit(cls, ring: QuotientRing) -> "MonomialIdeal":
        return cls(ring, (ExpVec.zero(ring.nvars),))

    @classmethod
    def maximal_power(cls, ring: QuotientRing, n: int) -> "MonomialIdeal":
        return cls.from_array(ring, monomial_array(ring.nvars, n))

    def __eq__(self, other):
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.ring == other.ring and np.array_equal(self._array, other._array)

    def __hash__(self):
        return hash((self.ring, self._array.tobytes()))

    def __repr__(self):
        gens = ", ".join(self.ring.format(g) for g in self.generators[:8])
        more = ", ..." if len(self._array) > 8 else ""
        return f"MonomialIdeal({gens}{more})"

    @cached_property
    def generators(self) -> tuple[ExpVec, ...]:
        return tuple(to_expvecs(self._array))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def is_zero(self) -> bool:
        return self._array.shape[0] == 0

    def __contains__(self, m: ExpVec) -> bool:
        return ideal_contains(self, m)

    @cached_property
    def pure_power_bounds(self) -> tuple[int, ...] | None:
        """Per variable, the least e with v^e in I + relations; None if some variable has none."""
        bounds = []
        allgens = np.concatenate([self.array, self.ring.relation_array])
        for v in range(self.ring.nvars):
            others = np.delete(allgens, v, axis=1)
            pure = allgens[np.all(others == 0, axis=1), v] if allgens.shape[0] else np.zeros(0, np.int64)
            if pure.size == 0:
                return None
            bounds.append(int(pure.min()))
        return tuple(bounds)

    @property
    def is_cofinite(self) -> bool:
        return self.pure_power_bounds is not None

    @cached_property
    def _box(self) -> np.ndarray | None:
        bounds = self.pure_power_bounds
        if bounds is None or math.prod(bounds) > BOX_LIMIT:
            return None
        allgens = np.concatenate([self.array, self.ring.relation_array])
        return _upward_closure(allgens, bounds)

    def contains_array(self, arr: np.ndarray) -> np.ndarray:
        """Membership mask; monomials vanishing in the quotient count as members."""
        box = self._box
        if box is None:
            return _divisible_mask(arr, self.array) | self.ring.zero_mask(arr)
        bounds = np.asarray(box.shape, dtype=np.int64)
        out = np.any(arr >= bounds, axis=1)
        inside = ~out
        out[inside] = box[tuple(arr[inside].T)]
        return out


def _normalize(ring: QuotientRing, arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.int64).reshape(-1, ring.nvars)
    if ring.relations and arr.shape[0]:
        arr = arr[~ring.zero_mask(arr)]
    return sort_lex_desc(_minimal_rows(arr)) if arr.shape[0] else arr


def standard_monomials(ring: QuotientRing, degree: int) -> list[ExpVec]:
    """Monomials of the given degree that survive in the quotient, lex-descending."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return ring.standard_monomials(degree)


def ideal_product(A: MonomialIdeal, B: MonomialIdeal) -> MonomialIdeal:
    if A.ring != B.ring:
        raise ValueError("ideals live in different rings")
    a, b = A.array, B.array
    nvars = A.ring.nvars
    if a.shape[0] == 0 or b.shape[0] == 0:
        return MonomialIdeal(A.ring)
    radix = int(a.max() + b.max()) + 1
    try:
        # the encoding is linear and carry-free below radix, so keys add like exponents
        keys = encode(a, radix)[:, None] + encode(b, radix)[None, :]
        sums = decode(np.unique(keys), radix, nvars)
    except OverflowError:
        sums = np.unique((a[:, None, :] + b[None, :, :]).reshape(-1, nvars), axis=0)
    return MonomialIdeal.from_array(A.ring, sums)


def ideal_contains(I: MonomialIdeal, m: ExpVec) -> bool:
    if len(m) != I.ring.nvars:
        raise ValueError("monomial has wrong number of exponents")
    return bool(np.any(np.all(I.array <= np.asarray(m.exponents, dtype=np.int64), axis=1)))


def hilbert_function(ring: QuotientRing, I: MonomialIdeal) -> list[int] | None:
    """Per-degree counts of standard monomials outside I; None when infinite.

    The list is trimmed after the last nonzero degree.
    """
    if I.ring != ring:
        raise ValueError("ideal belongs to a different ring")
    bounds = I.pure_power_bounds
    if bounds is None:
        return None
    box = I._box
    if box is None:
        return _hilbert_by_degree(ring, I)
    outside = ~box
    degrees = np.indices(box.shape, dtype=np.int64).sum(axis=0)
    counts = np.bincount(degrees[outside], minlength=1)
    counts = counts.tolist()
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    if counts == [0]:
        return []
    return counts


def _hilbert_by_degree(ring: QuotientRing, I: MonomialIdeal) -> list[int]:
    # degree-by-degree walk: the outside set is an order ideal, so a monomial
    # of degree D is outside iff it is not a generator and all its divisors
    # of degree D-1 are outside
    counts = []
    prev = np.zeros((1, ring.nvars), dtype=np.int64)
    if I.contains_array(prev)[0]:
        return []
    counts.append(1)
    gens = I.array
    while True:
        cand = (prev[:, None, :] + np.eye(ring.nvars, dtype=np.int64)[None, :, :]).reshape(-1, ring.nvars)
        cand = np.unique(cand, axis=0)
        cand = cand[~ring.zero_mask(cand)]
        if gens.shape[0]:
            cand = cand[~_divisible_mask(cand, gens)]
        if cand.shape[0] == 0:
            return counts
        counts.append(int(cand.shape[0]))
        prev = cand


def colength(ring: QuotientRing, I: MonomialIdeal) -> int | float:
    """Length of R/I as a count of standard monomials outside I, or INFINITE."""
    counts = hilbert_function(ring, I)
    if counts is None:
        return INFINITE
    return int(sum(counts))
