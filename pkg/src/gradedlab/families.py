"""Graded families of monomial ideals in local monomial quotient rings.

The main instance is I_n = (N_n, y N_{n - sigma(n)}) in k[[x_1..x_d, y]]/(y^2),
with N_i the degree-i monomials in the x's. Its colength is exactly
C(n+d-1, d) + C(n-sigma(n)+d-1, d), counted from the basis
{N_i : i < n} and {y N_j : j < n - sigma(n)} of R/I_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .lacunary import LacunarySeq, sigma
from .monomial import INFINITE, MonomialIdeal, QuotientRing, colength, ideal_product, monomial_array


@dataclass(frozen=True, eq=False)
class GradedIdealFamily:
    ring: QuotientRing
    rule: Callable[[int], MonomialIdeal]
    label: str
    params: dict = field(default_factory=dict)
    # closed-form colength; cross-checked against enumeration by colength_sequence
    colength_formula: Callable[[int], int] | None = None
    sigma_targets: dict[str, Fraction] | None = None

    def ideal(self, n: int) -> MonomialIdeal:
        if n < 0:
            raise ValueError("n must be nonnegative")
        return self.rule(n)

    def growth(self, n: int) -> int:
        if self.colength_formula is not None:
            return self.colength_formula(n)
        value = colength(self.ring, self.ideal(n))
        if value == INFINITE:
            raise ValueError(f"{self.label}: I_{n} is not m-primary")
        return value


@dataclass
class FamilyReport:
    ok: bool
    horizon: int
    violations: list[dict]
    non_primary: list[int]
    checked_pairs: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "horizon": self.horizon, "violations": self.violations,
                "non_primary": self.non_primary, "checked_pairs": self.checked_pairs}


def local_ring(d: int) -> QuotientRing:
    names = tuple(f"x{i}" for i in range(1, d + 1)) + ("y",)
    return QuotientRing.with_square_zero(names, "y")


def _x_monomials(d: int, degree: int, y: int) -> np.ndarray:
    block = monomial_array(d, degree)
    out = np.empty((block.shape[0], d + 1), dtype=np.int64)
    out[:, :d] = block
    out[:, d] = y
    return out


def make_family_E1(d: int, seq: LacunarySeq | None = None) -> GradedIdealFamily:
    if d < 1:
        raise ValueError("d must be >= 1")
    seq = seq if seq is not None else LacunarySeq()
    ring = local_ring(d)

    def rule(n: int) -> MonomialIdeal:
        if n == 0:
            return MonomialIdeal.unit(ring)
        gens = np.concatenate([_x_monomials(d, n, 0), _x_monomials(d, n - sigma(seq, n), 1)])
        return MonomialIdeal.from_array(ring, gens)

    def formula(n: int) -> int:
        if n == 0:
            return 0
        return math.comb(n + d - 1, d) + math.comb(n - sigma(seq, n) + d - 1, d)

    fact = math.factorial(d)
    targets = {"zero": Fraction(2, fact), "half": Fraction(1, fact) * (1 + Fraction(1, 2) ** d)}
    return GradedIdealFamily(ring, rule, "E1", {"d": d, "threshold_prefix": list(seq.thresholds)},
                             formula, targets)


def make_family_powers(d: int) -> GradedIdealFamily:
    """I_n = m^n in the same local ring."""
    ring = local_ring(d)

    def rule(n: int) -> MonomialIdeal:
        return MonomialIdeal.maximal_power(ring, n)

    return GradedIdealFamily(ring, rule, "powers", {"d": d})


def make_family_bad(d: int) -> GradedIdealFamily:
    """I_n = m^(n^2): I_1 I_1 = m^2 is not inside I_2 = m^4."""
    ring = local_ring(d)

    def rule(n: int) -> MonomialIdeal:
        return MonomialIdeal.maximal_power(ring, n * n)

    return GradedIdealFamily(ring, rule, "bad", {"d": d})


FAMILIES = {"e1": make_family_E1, "powers": make_family_powers, "bad": make_family_bad}


def make_family(name: str, d: int, seq: LacunarySeq | None = None) -> GradedIdealFamily:
    key = name.lower()
    if key not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; valid: {', '.join(FAMILIES)}")
    if key == "e1":
        return make_family_E1(d, seq)
    return FAMILIES[key](d)


def check_family(F: GradedIdealFamily, horizon: int, max_violations: int = 10) -> FamilyReport:
    """Exhaustively verify I_0 = R and I_m I_n inside I_{m+n} for 1 <= m <= n, m + n <= horizon.

    Containment is tested on the minimized generators of each product.
    Violations are reported in (m, n) order with a witness generator.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    violations: list[dict] = []
    if F.ideal(0) != MonomialIdeal.unit(F.ring):
        violations.append({"m": 0, "n": 0, "witness": None})
    ideals = {n: F.ideal(n) for n in range(1, horizon + 1)}
    non_primary = [n for n, I in ideals.items() if not I.is_cofinite]
    pairs = 0
    for m in range(1, horizon // 2 + 1):
        for n in range(m, horizon - m + 1):
            if len(violations) >= max_violations:
                break
            pairs += 1
            prod = ideal_product(ideals[m], ideals[n])
            if prod.is_zero:
                continue
            inside = ideals[m + n].contains_array(prod.array)
            if not inside.all():
                witness = prod.array[~inside][0]
                violations.append({"m": m, "n": n, "witness": witness.tolist()})
    ok = not violations and not non_primary
    return FamilyReport(ok, horizon, violations, non_primary, pairs)


@dataclass
class ColengthRow:
    n: int
    colength: int
    model: int | None = None


def colength_sequence(F: GradedIdealFamily, horizon: int, start: int = 1) -> list[ColengthRow]:
    """Exact colengths l(R/I_n) by enumeration, with the closed form alongside when known.

    Raises if some I_n is not m-primary, or if enumeration and closed form disagree.
    """
    rows = []
    for n in range(start, horizon + 1):
        value = colength(F.ring, F.ideal(n))
        if value == INFINITE:
            raise ValueError(f"I_{n} is not m-primary")
        model = F.colength_formula(n) if F.colength_formula is not None else None
        if model is not None and model != value:
            raise AssertionError(f"colength mismatch at n={n}: enumerated {value}, closed form {model}")
        rows.append(ColengthRow(n, int(value), model))
    return rows


def e1_quotient_basis(d: int, seq: LacunarySeq, n: int) -> np.ndarray:
    """The monomials N_i (i < n) and y N_j (j < n - sigma(n)), lex-descending."""
    blocks = [_x_monomials(d, i, 0) for i in range(n)]
    blocks += [_x_monomials(d, j, 1) for j in range(n - sigma(seq, n))]
    arr = np.concatenate(blocks) if blocks else np.zeros((0, d + 1), np.int64)
    order = np.lexsort(arr.T[::-1])[::-1]
    return arr[order]


def outside_monomials(I: MonomialIdeal) -> np.ndarray:
    """Standard monomials not in a cofinite ideal, lex-descending."""
    bounds = I.pure_power_bounds
    if bounds is None:
        raise ValueError("ideal is not cofinite")
    grid = np.argwhere(np.ones(bounds, dtype=bool)).astype(np.int64)
    keep = ~I.contains_array(grid)
    arr = grid[keep]
    return arr[np.lexsort(arr.T[::-1])[::-1]]
