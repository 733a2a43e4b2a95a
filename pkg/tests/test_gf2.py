import pytest
from hypothesis import given, strategies as st

from oracles import rank_by_enumeration, span_by_enumeration
from spectral_pdt import gf2
from spectral_pdt.errors import InputError
from spectral_pdt.gf2 import (Gf2Basis, coset_partition, extend_to_full_basis, in_span, rank,
                              row_reduce, solve_affine_point)


def forms_strategy(n, max_size=8):
    return st.lists(st.integers(0, (1 << n) - 1), max_size=max_size)


def test_row_reduce_examples():
    b = row_reduce([0b110, 0b011, 0b101], 3)
    assert b.rank == 2
    assert span_by_enumeration(b.rows) == span_by_enumeration([0b110, 0b011])
    assert row_reduce([], 5).rows == ()
    assert row_reduce([0b000], 3).rows == ()


def test_row_reduce_is_canonical_rref():
    b = row_reduce([0b110, 0b011], 3)
    assert b.rows == (0b101, 0b011)
    assert row_reduce(b.rows, 3) == b


@pytest.mark.parametrize("forms,expected", [
    ([0b010, 0b110, 0b001, 0b101], 3),
    ([0b111], 1),
    ([0b011, 0b011], 1),
])
def test_rank_examples(forms, expected):
    assert rank_by_enumeration(forms) == expected
    assert rank(forms, 3) == expected


def test_in_span_examples():
    assert in_span(0b101, row_reduce([0b110, 0b011], 3))
    assert in_span(0, row_reduce([0b100], 3))
    assert in_span(0, Gf2Basis((), 3))
    assert not in_span(0b100, row_reduce([0b011], 3))


def test_mask_out_of_range_rejected():
    with pytest.raises(InputError):
        row_reduce([0b1000], 3)
    with pytest.raises(InputError):
        in_span(8, Gf2Basis((), 3))


def test_coset_partition_examples():
    classes = coset_partition({0b000, 0b010, 0b001}, row_reduce([0b011], 3))
    assert classes == [(0b000, frozenset({0})), (0b001, frozenset({0b001, 0b010}))]
    assert coset_partition({0}, Gf2Basis((), 3)) == [(0, frozenset({0}))]
    classes = coset_partition({0b010, 0b110, 0b001, 0b101}, row_reduce([0b010, 0b001], 3))
    assert classes == [(0b001, frozenset({0b010, 0b001})), (0b101, frozenset({0b110, 0b101}))]


def test_extend_to_full_basis_examples():
    full = extend_to_full_basis(row_reduce([0b11], 2))
    assert full[0] == 0b11 and rank(full, 2) == 2
    assert extend_to_full_basis(Gf2Basis((), 3)) == [0b100, 0b010, 0b001]
    b = row_reduce([0b100, 0b010, 0b001], 3)
    assert extend_to_full_basis(b) == list(b.rows)


def test_solve_affine_point_examples():
    x = solve_affine_point([(0b110, 1), (0b010, 0)], 3)
    assert x == 0b100
    assert gf2.dot(0b110, x) == 1 and gf2.dot(0b010, x) == 0
    assert solve_affine_point([(0b011, 0), (0b011, 1)], 3) is None
    assert solve_affine_point([], 3) == 0


@given(forms=forms_strategy(5), perm_seed=st.randoms())
def test_rank_bounds_and_invariance(forms, perm_seed):
    nonzero = {f for f in forms if f}
    r = rank(forms, 5)
    assert r <= min(len(nonzero), 5)
    shuffled = list(forms) + list(forms)
    perm_seed.shuffle(shuffled)
    assert rank(shuffled, 5) == r
    assert r == rank_by_enumeration(forms)


@given(forms=forms_strategy(6, 6))
def test_in_span_matches_enumeration(forms):
    basis = row_reduce(forms, 6)
    span = span_by_enumeration(forms)
    for v in range(1 << 6):
        assert in_span(v, basis) == (v in span)
        assert in_span(v, basis) == (rank(list(basis.rows) + [v], 6) == basis.rank)


@given(forms=forms_strategy(6, 6))
def test_reduce_combine_round_trip(forms):
    basis = row_reduce(forms, 6)
    for v in range(1 << 6):
        residual, coords = basis.reduce(v)
        assert residual & basis.pivot_mask == 0
        assert residual ^ basis.combine(coords) == v


@given(support=st.sets(st.integers(0, 63), min_size=1, max_size=20), forms=forms_strategy(6, 4))
def test_coset_partition_properties(support, forms):
    basis = row_reduce(forms, 6)
    classes = coset_partition(support, basis)
    assert sum(len(m) for _, m in classes) == len(support)
    label = {v: rep for rep, members in classes for v in members}
    for a in support:
        for b in support:
            assert (label[a] == label[b]) == in_span(a ^ b, basis)
    for rep, members in classes:
        assert rep == min(members)


@given(forms=forms_strategy(6, 6))
def test_extend_to_full_basis_properties(forms):
    basis = row_reduce(forms, 6)
    full = extend_to_full_basis(basis)
    assert rank(full, 6) == 6
    head = row_reduce(full[: basis.rank], 6)
    assert all(in_span(row, head) for row in basis.rows)


@given(pairs=st.lists(st.tuples(st.integers(0, 31), st.integers(0, 1)), max_size=7))
def test_solve_affine_point_matches_search(pairs):
    solutions = [x for x in range(32) if all(gf2.dot(g, x) == b for g, b in pairs)]
    x = solve_affine_point(pairs, 5)
    if solutions:
        assert x in solutions
    else:
        assert x is None


@given(forms=forms_strategy(5, 5))
def test_annihilator(forms):
    basis = row_reduce(forms, 5)
    ann = gf2.annihilator(basis)
    assert ann.rank == 5 - basis.rank
    for g in ann.rows:
        for v in basis.rows:
            assert gf2.dot(g, v) == 0


def test_hex_serialisation():
    assert gf2.format_form(5, 3) == "n=3, mask=0x5"
    assert gf2.form_from_hex("0x5", 3) == 5
    with pytest.raises(InputError):
        gf2.form_from_hex("0x8", 3)


def test_max_n_env_override(monkeypatch):
    monkeypatch.setenv("SPECTRAL_PDT_MAX_N", "4")
    assert gf2.max_n() == 4
    with pytest.raises(InputError):
        gf2.check_n(5)
    monkeypatch.setenv("SPECTRAL_PDT_MAX_N", "99")
    assert gf2.max_n() == 24
