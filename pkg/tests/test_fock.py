import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ising_svoa.fock import (
    Sector,
    Truncation,
    Vector,
    apply_mode,
    basis,
    basis_at_level,
    basis_upto,
    dimension,
    dumps_basis_table,
    gram,
    gram_closed_form,
    level,
    monomial_vector,
    parity,
    parity_split,
    vacuum,
)
from oracles import Fermion, ns_dims, ns_parity_dims, oracle_state, r_dims

NS, R = Sector.NS, Sector.R
F = Fraction
NS_BASIS = basis_upto(NS, 4)
R_BASIS = basis_upto(R, 4)


def vec(sector, mono):
    return Vector.basis_vector(sector, mono)


def test_contraction_examples():
    assert apply_mode(F(1, 2), monomial_vector(NS, [F(-1, 2)])) == vacuum(NS)
    v = apply_mode(F(-1, 2), monomial_vector(NS, [F(-3, 2)]))
    assert v == -monomial_vector(NS, [F(-3, 2), F(-1, 2)])
    assert apply_mode(0, apply_mode(0, vacuum(R))) == vacuum(R) * F(1, 2)


def test_basis_examples():
    assert basis(NS, 0) == [()]
    assert basis(NS, 2) == [(3, 1)]
    assert basis(R, F(1, 16) + 1) == [(2,), (2, 0)]
    assert dimension(NS, 4) == 2
    assert dimension(NS, 1) == 0
    assert dimension(R, F(1, 16)) == 2


def test_gram_examples():
    w = vec(NS, (3, 1))
    assert gram(w, w) == 1
    assert gram(vacuum(R), vec(R, (0,))) == 0
    assert gram(vec(R, (0,)), vec(R, (0,))) == F(1, 2)


def test_parity_dims_against_oracle():
    even, odd = parity_split(NS, Truncation(4))
    ref_even, ref_odd = ns_parity_dims(4)
    assert even == ref_even and odd == ref_odd
    assert [even[F(w)] for w in range(5)] == [1, 0, 1, 1, 2]
    assert [odd[F(w, 2)] for w in (1, 3, 5)] == [1, 1, 1]


def test_dims_against_oracle():
    t = Truncation(8)
    assert {lev: len(basis_at_level(NS, lev)) for lev in t.levels(NS)} == ns_dims(8)
    ref = r_dims(8)
    assert {lev + R.offset: len(basis_at_level(R, lev)) for lev in t.levels(R)} == ref
    assert [ref[F(1, 16) + k] for k in range(3)] == [2, 2, 2]


def _modes(sector):
    if sector is NS:
        return [F(k, 2) for k in range(-9, 10, 2)]
    return [F(k) for k in range(-4, 5)]


@pytest.mark.parametrize("sector", [NS, R])
def test_car(sector):
    modes = _modes(sector)
    for mono in basis_upto(sector, 3):
        v = vec(sector, mono)
        for m in modes:
            for n in modes:
                lhs = apply_mode(m, apply_mode(n, v)) + apply_mode(n, apply_mode(m, v))
                assert lhs == (v if m + n == 0 else Vector(sector))


@pytest.mark.parametrize("sector", [NS, R])
def test_modes_match_independent_fermion(sector):
    oracle = Fermion(ramond=sector is R)
    for mono in basis_upto(sector, 4):
        v = vec(sector, mono)
        for m in _modes(sector):
            assert oracle_state(apply_mode(m, v).terms) == oracle.act(m, oracle_state(v.terms))


@pytest.mark.parametrize("sector", [NS, R])
def test_gram_diagonal_and_symmetric(sector):
    bs = basis_upto(sector, 4)
    for a in bs:
        for b in bs:
            g = gram(vec(sector, a), vec(sector, b))
            assert g == gram(vec(sector, b), vec(sector, a))
            assert g == gram_closed_form(sector, a, b)


@given(st.sampled_from(NS_BASIS), st.sampled_from(NS_BASIS), st.sampled_from(_modes(NS)))
def test_adjointness_ns(a, b, n):
    u, v = vec(NS, a), vec(NS, b)
    assert gram(apply_mode(n, u), v) == gram(u, apply_mode(-n, v))


@given(st.sampled_from(R_BASIS), st.sampled_from(R_BASIS), st.sampled_from(_modes(R)))
def test_adjointness_r(a, b, n):
    u, v = vec(R, a), vec(R, b)
    assert gram(apply_mode(n, u), v) == gram(u, apply_mode(-n, v))


@given(st.sampled_from(NS_BASIS), st.sampled_from(_modes(NS)))
def test_grading_shift(a, m):
    w = apply_mode(m, vec(NS, a))
    assert all(level(k) == level(a) - m for k in w.terms)


@given(st.sampled_from(NS_BASIS + R_BASIS))
def test_monomial_invariants(mono):
    assert list(mono) == sorted(set(mono), reverse=True)
    assert parity(mono) == len(mono) % 2


def test_wrong_mode_rejected():
    with pytest.raises(ValueError):
        apply_mode(1, vacuum(NS))
    with pytest.raises(ValueError):
        apply_mode(F(1, 2), vacuum(R))


def test_truncation_levels():
    t = Truncation(F(3, 2))
    assert t.levels(NS) == [0, F(1, 2), 1, F(3, 2)]
    assert t.levels(R) == [0, 1]
    v = vec(NS, (3, 1)) + vec(NS, (1,))
    cut, complete = v.truncated(1)
    assert cut == vec(NS, (1,)) and not complete


def test_basis_table_json():
    rows = json.loads(dumps_basis_table(NS, Truncation(2)))
    assert [r["dims"] for r in rows] == [1, 1, 0, 1, 1]
    assert rows[4]["monomials"] == [["-3/2", "-1/2"]]
    assert dumps_basis_table(NS, Truncation(2)) == dumps_basis_table("ns", Truncation(2))
