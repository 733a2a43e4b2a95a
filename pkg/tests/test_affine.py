from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import eval_poly
from spectral_pdt import families, gf2
from spectral_pdt.affine import (AffineSubspace, Member, all_leaf_values, decompose, eval_bucket,
                                 leaf_profile, leaf_spectrum, materialize, nonzero_fraction,
                                 poly_sparsity, project_to_support_span, sampled_leaf_profile)
from spectral_pdt.errors import EmptyPolynomialError, InconsistentConstraints
from spectral_pdt.gf2 import Gf2Basis, row_reduce
from spectral_pdt.spectrum import BooleanFunction, Spectrum, inverse_wht, wht


def test_decompose_and_gamma_11(AND):
    dec = decompose(wht(AND), row_reduce([0b11], 2))
    assert dec.l == 2 and dec.s == 4
    b0, b1 = dec.buckets
    assert b0.rep == 0b00 and sorted(b0.members, key=lambda m: m.alpha) == [
        Member(0b00, 0, 2), Member(0b11, 1, -2)]
    assert b1.rep == 0b01 and sorted(b1.members, key=lambda m: m.alpha) == [
        Member(0b00, 0, 2), Member(0b11, 1, 2)]


def test_decompose_empty_gamma():
    sp = wht(families.address(2))
    dec = decompose(sp, Gf2Basis((), 6))
    assert dec.l == len(sp)
    assert all(b.members == (Member(0, 0, sp[b.rep]),) for b in dec.buckets)


def test_decompose_address_two_buckets():
    dec = decompose(wht(families.address(1)), row_reduce([0b010, 0b001], 3))
    assert [b.rep for b in dec.buckets] == [0b001, 0b101]
    for bucket in dec.buckets:
        for m in bucket.members:
            assert gf2.in_span(m.alpha, dec.gamma)


def test_eval_bucket_examples(AND):
    dec = decompose(wht(AND), row_reduce([0b11], 2))
    rep00 = dec.buckets[0]
    assert eval_bucket(rep00, 0) == 0
    assert eval_bucket(rep00, 1) == 4
    single = decompose(wht(AND), Gf2Basis((), 2)).buckets[3]
    assert eval_bucket(single, 0) == eval_bucket(single, 0) == -2


def test_leaf_spectrum_examples(AND):
    dec = decompose(wht(AND), row_reduce([0b11], 2))
    assert dict(leaf_spectrum(dec, 1).items()) == {0b00: 4}
    assert dict(leaf_spectrum(dec, 0).items()) == {0b01: 4}
    sp = wht(families.address(2))
    assert leaf_spectrum(decompose(sp, Gf2Basis((), 6)), 0) == sp


def test_materialize_examples(AND):
    g = materialize(AND, AffineSubspace.from_constraints([(0b11, 1)], 2))
    assert g.n == 1 and list(g.signs()) == [1, 1]
    f = families.address(1)
    assert materialize(f, AffineSubspace.whole(3)) == f
    chi = families.parity(0b11, 2)
    g = materialize(chi, AffineSubspace.from_constraints([(0b10, 0)], 2))
    assert list(g.signs()) == [1, -1]


def test_nonzero_fraction_examples():
    assert nonzero_fraction([(0b11, 1)], 2) == 1
    assert nonzero_fraction([(0, 1), (0b1, 1)], 1) == Fraction(1, 2)
    # 1 + x1 + x2 - x1 x2 takes the values 2, 2, 2, -2
    p = [(0b00, 1), (0b10, 1), (0b01, 1), (0b11, -1)]
    assert [eval_poly(p, x) for x in range(4)] == [2, 2, 2, -2]
    assert nonzero_fraction(p, 2) == 1
    with pytest.raises(EmptyPolynomialError):
        nonzero_fraction([(1, 2), (1, -2)], 2)


def test_affine_subspace_canonicalisation():
    V = AffineSubspace.from_constraints([(0b110, 1), (0b011, 0), (0b101, 1)], 3)
    assert V.codim == 2
    assert all(V.contains(x) == (gf2.dot(6, x) == 1 and gf2.dot(3, x) == 0) for x in range(8))
    assert V.contains(V.point())
    with pytest.raises(InconsistentConstraints):
        AffineSubspace.from_constraints([(0b110, 1), (0b011, 0), (0b101, 0)], 3)
    assert AffineSubspace.from_json(V.to_json(), 3) == V


@st.composite
def restriction_cases(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    forms = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=n))
    return families.random_function(n, seed), row_reduce(forms, n)


def _subspace(gamma, b):
    r = gamma.rank
    return AffineSubspace.from_constraints(
        ((row, (b >> (r - 1 - i)) & 1) for i, row in enumerate(gamma.rows)), gamma.ambient_n)


@given(restriction_cases())
def test_leaf_matches_materialized_restriction(case):
    f, gamma = case
    sp = wht(f)
    dec = decompose(sp, gamma)
    r = gamma.rank
    free = [q for q in range(f.n - 1, -1, -1) if not (gamma.pivot_mask >> q) & 1]
    for b in range(1 << r):
        leaf = leaf_spectrum(dec, b)
        g = wht(materialize(f, _subspace(gamma, b)))
        compressed = {}
        for mask, c in leaf.items():
            key = 0
            for q in free:
                key = (key << 1) | ((mask >> q) & 1)
            assert c % (1 << r) == 0
            compressed[key] = c >> r if c > 0 else -((-c) >> r)
        assert dict(g.items()) == compressed
        assert sorted(abs(c) for c in g.coeffs.values()) == sorted(abs(c) >> r for c in leaf.coeffs.values())
        # the leaf is itself a +/-1 function agreeing with f on V_b
        h = inverse_wht(leaf)
        V = _subspace(gamma, b)
        assert all(h(x) == f(x) for x in range(f.size) if V.contains(x))


@given(restriction_cases())
def test_bucket_conservation_and_parseval(case):
    f, gamma = case
    sp = wht(f)
    dec = decompose(sp, gamma)
    assert sum(b.k for b in dec.buckets) == len(sp)
    for b in range(1 << gamma.rank):
        assert sum(eval_bucket(bk, b) ** 2 for bk in dec.buckets) == 4 ** f.n
    for bucket in dec.buckets:
        for m in bucket.members:
            assert (m.alpha ^ bucket.rep) in sp.coeffs


@given(restriction_cases(max_n=10))
def test_leaf_support_average_bound(case):
    f, gamma = case
    sp = wht(f)
    dec = decompose(sp, gamma)
    counts, constant = leaf_profile(dec)
    # mean leaf sparsity >= l^2 / s
    assert int(counts.sum()) * len(sp) >= (1 << gamma.rank) * dec.l ** 2
    for b in range(0, 1 << gamma.rank, max(1, (1 << gamma.rank) // 8)):
        leaf = leaf_spectrum(dec, b)
        assert counts[b] == len(leaf)
        assert bool(constant[b]) == leaf.is_constant()
    bs = np.arange(1 << gamma.rank)[::3]
    c2, k2 = sampled_leaf_profile(dec, bs)
    assert np.array_equal(c2, counts[bs]) and np.array_equal(k2, constant[bs])


def test_all_leaf_values_matches_pointwise():
    f = families.address(2)
    dec = decompose(wht(f), row_reduce([0b110000, 0b001100], 6))
    vals = all_leaf_values(dec)
    for b in range(4):
        leaf = leaf_spectrum(dec, b)
        for j, bucket in enumerate(dec.buckets):
            assert vals[j, b] == leaf[bucket.residual]


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_project_to_support_span(n, seed):
    f = families.random_parity_junta(n, min(n, 3), seed)
    sp = wht(f)
    basis, g_sp = project_to_support_span(sp)
    g = inverse_wht(g_sp)
    for x in range(f.size):
        z = 0
        for row in basis.rows:
            z = (z << 1) | gf2.dot(row, x)
        assert g(z) == f(x)


@given(st.lists(st.tuples(st.integers(0, 63), st.integers(-5, 5)), min_size=1, max_size=12))
def test_uncertainty_principle_against_pointwise(poly):
    m = 6
    s = poly_sparsity(poly)
    if s == 0:
        with pytest.raises(EmptyPolynomialError):
            nonzero_fraction(poly, m)
        return
    nonzero = sum(eval_poly(poly, x) != 0 for x in range(1 << m))
    frac = nonzero_fraction(poly, m)
    assert frac == Fraction(nonzero, 1 << m)
    assert frac >= Fraction(1, s)
