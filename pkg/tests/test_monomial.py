import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gradedlab.families import make_family_E1
from gradedlab.lacunary import LacunarySeq
from gradedlab.monomial import (
    INFINITE,
    ExpVec,
    MonomialIdeal,
    QuotientRing,
    colength,
    count_distinct,
    hilbert_function,
    ideal_contains,
    ideal_product,
    monomial_array,
    standard_monomials,
    unique_rows,
)


@pytest.fixture
def S3():
    return QuotientRing.with_square_zero(("x0", "x1", "x2"), "x1")


def test_expvec_degree_and_ops():
    m = ExpVec((2, 0, 3))
    assert m.degree == 5
    assert (m * ExpVec((1, 1, 0))).exponents == (3, 1, 3)
    assert (m**2).exponents == (4, 0, 6)
    assert ExpVec((1, 0, 1)).divides(m)
    assert not ExpVec((0, 1, 0)).divides(m)
    with pytest.raises(ValueError):
        ExpVec((1, -1))


def test_standard_monomials_degree_two(S3):
    got = [S3.format(m) for m in standard_monomials(S3, 2)]
    assert got == ["x0^2", "x0*x1", "x0*x2", "x1*x2", "x2^2"]


def test_degree_zero_is_unit(S3):
    assert standard_monomials(S3, 0) == [ExpVec((0, 0, 0))]


def test_polynomial_ring_count():
    R = QuotientRing.polynomial(("x0", "x1", "x2", "x3"))
    assert len(standard_monomials(R, 3)) == 20


def test_listing_is_lex_descending(S3):
    got = [m.exponents for m in standard_monomials(S3, 4)]
    assert got == sorted(got, reverse=True)


@pytest.mark.parametrize("v", range(1, 7))
def test_standard_count_is_binomial(v):
    R = QuotientRing.polynomial(tuple(f"x{i}" for i in range(v)))
    for n in range(31):
        assert R.standard_array(n).shape[0] == math.comb(n + v - 1, v - 1)


@given(st.integers(1, 4), st.integers(0, 6))
def test_standard_matches_oracle(v, n):
    names = tuple(f"x{i}" for i in range(v))
    R = QuotientRing.with_square_zero(names, "x0")
    got = {m.exponents for m in standard_monomials(R, n)}
    assert got == oracles.standard(v, n, [(2,) + (0,) * (v - 1)])


def test_product_examples(S3):
    x1 = MonomialIdeal(S3, [(0, 1, 0)])
    assert ideal_product(x1, x1).is_zero
    a = MonomialIdeal(S3, [(2, 0, 0)])
    b = MonomialIdeal(S3, [(3, 0, 0)])
    assert ideal_product(a, b).generators == (ExpVec((5, 0, 0)),)


def test_product_J2_squared():
    R = QuotientRing.with_square_zero(("x0", "x1", "x2"), "x1")
    J2 = MonomialIdeal(R, [(2, 0, 0), (1, 1, 0)])
    got = ideal_product(J2, J2)
    assert [R.format(g) for g in got.generators] == ["x0^4", "x0^3*x1"]


def test_product_rejects_other_ring(S3):
    other = QuotientRing.polynomial(("x0", "x1", "x2"))
    with pytest.raises(ValueError):
        ideal_product(MonomialIdeal(S3, [(1, 0, 0)]), MonomialIdeal(other, [(1, 0, 0)]))


def test_contains_examples(S3):
    I = MonomialIdeal(S3, [(3, 0, 0), (1, 1, 0)])
    assert ideal_contains(I, ExpVec((5, 1, 0)))
    assert not ideal_contains(MonomialIdeal(S3, [(3, 0, 0)]), ExpVec((2, 0, 0)))


def test_contains_E1_d2_n6():
    F = make_family_E1(2, LacunarySeq())
    I6 = F.ideal(6)
    assert not ideal_contains(I6, ExpVec((1, 1, 1)))
    assert ideal_contains(I6, ExpVec((2, 1, 1)))


def test_colength_examples():
    R = QuotientRing.with_square_zero(("x1", "x2", "y"), "y")
    assert colength(R, MonomialIdeal(R, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])) == 1
    assert colength(R, MonomialIdeal(R, [(1, 0, 0)])) == INFINITE
    R1 = QuotientRing.with_square_zero(("x1", "y"), "y")
    I4 = MonomialIdeal(R1, [(4, 0), (3, 1)])
    assert colength(R1, I4) == 7
    assert hilbert_function(R1, I4) == [1, 2, 2, 2]


def test_colength_of_unit_and_zero_ideal():
    R = QuotientRing.with_square_zero(("x", "y"), "y")
    assert colength(R, MonomialIdeal.unit(R)) == 0
    assert colength(R, MonomialIdeal(R)) == INFINITE


def test_nilpotent_bounded_variable_needs_no_power():
    # y^2 = 0 already, so (x^3) has finite colength
    R = QuotientRing.with_square_zero(("x", "y"), "y")
    assert colength(R, MonomialIdeal(R, [(3, 0)])) == 6


def test_parse_and_format_roundtrip(S3):
    m = S3.parse("x0^2*x2")
    assert m.exponents == (2, 0, 1)
    assert S3.format(m) == "x0^2*x2"
    assert S3.format(ExpVec((0, 0, 0))) == "1"


def test_nilpotency_by_support(S3):
    assert S3.is_nilpotent(ExpVec((3, 1, 0)))
    assert not S3.is_nilpotent(ExpVec((3, 0, 5)))
    assert S3.is_zero(ExpVec((0, 2, 1)))


# ---------------------------------------------------------------- properties

exps = st.lists(st.integers(0, 4), min_size=3, max_size=3).map(tuple)
gen_sets = st.lists(exps, min_size=1, max_size=5)


@given(gen_sets, gen_sets)
def test_product_minimal_nonzero_and_contains_pairs(A, B):
    R = QuotientRing.with_square_zero(("x0", "x1", "x2"), "x1")
    IA, IB = MonomialIdeal(R, A), MonomialIdeal(R, B)
    P = ideal_product(IA, IB)
    gens = [g.exponents for g in P.generators]
    for g in gens:
        assert not R.is_zero(ExpVec(g))
        assert not any(h != g and oracles.divides(h, g) for h in gens)
    for a in IA.generators:
        for b in IB.generators:
            ab = a * b
            if not R.is_zero(ab):
                assert ideal_contains(P, ab)
    rel = [(0, 2, 0)]
    want = oracles.product({g.exponents for g in IA.generators},
                           {g.exponents for g in IB.generators}, rel)
    assert set(gens) == want


@given(gen_sets)
def test_generators_minimized(G):
    R = QuotientRing.polynomial(("x0", "x1", "x2"))
    I = MonomialIdeal(R, G)
    assert {g.exponents for g in I.generators} == oracles.minimize(G)


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(1, 5), st.lists(exps, max_size=4))
def test_colength_matches_oracle(p0, p2, extra):
    R = QuotientRing.with_square_zero(("x0", "x1", "x2"), "x1")
    gens = [(p0, 0, 0), (0, 0, p2)] + extra
    I = MonomialIdeal(R, gens)
    want = oracles.colength(3, gens, [(0, 2, 0)], 6)
    assert colength(R, I) == want
    counts = hilbert_function(R, I)
    assert sum(counts) == want
    assert not counts or counts[-1] > 0


@given(st.lists(exps, max_size=4))
def test_non_cofinite_is_infinite(extra):
    # no pure power of x2 can appear, since every generator involves x0
    R = QuotientRing.polynomial(("x0", "x1", "x2"))
    gens = [(1 + a, b, c) for a, b, c in extra] or [(1, 0, 0)]
    assert colength(R, MonomialIdeal(R, gens)) == INFINITE


@settings(max_examples=40)
@given(st.lists(exps, min_size=1, max_size=6))
def test_contains_array_matches_divisibility(G):
    R = QuotientRing.polynomial(("x0", "x1", "x2"))
    I = MonomialIdeal(R, G)
    grid = np.argwhere(np.ones((6, 6, 6), dtype=bool)).astype(np.int64)
    got = I.contains_array(grid)
    want = [any(oracles.divides(g, tuple(row)) for g in G) for row in grid.tolist()]
    assert got.tolist() == want


@pytest.mark.parametrize("d", [1, 2, 3])
def test_E1_hilbert_function_stabilizes(d):
    F = make_family_E1(d, LacunarySeq())
    for n in range(1, 61):
        counts = hilbert_function(F.ring, F.ideal(n))
        assert counts is not None and counts[-1] > 0
        # nothing survives in degree n + 1: every degree-n monomial or y * degree n-1 lies in I_n
        assert len(counts) <= n + 1
        assert sum(counts) == colength(F.ring, F.ideal(n))


def test_unique_rows_and_count_distinct():
    arr = np.array([[1, 0], [0, 2], [1, 0], [3, 3]], dtype=np.int64)
    assert unique_rows(arr).tolist() == [[3, 3], [1, 0], [0, 2]]
    assert count_distinct(arr) == 3


def test_monomial_array_cached_is_readonly():
    arr = monomial_array(3, 4)
    assert not arr.flags.writeable
    assert arr.shape[0] == math.comb(6, 2)
