from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ising_svoa.fock import Sector, Truncation, Vector, basis_upto, gram, level, vacuum
from ising_svoa.scalar import INV_SQRT2
from ising_svoa.virasoro import (
    bracket_residual,
    character,
    highest_weight_vectors,
    l_exact,
    ramond_split,
    v_minus,
    v_plus,
    virasoro_character,
)
from ising_svoa.fock import apply_mode
from oracles import Fermion, ns_parity_dims, oracle_state, twisted_half_dims

NS, R = Sector.NS, Sector.R
F = Fraction
OMEGA = Vector.basis_vector(NS, (3, 1), F(1, 2))


def test_examples():
    x = Vector.basis_vector(NS, (1,))
    assert l_exact(0, x) == x * F(1, 2)
    assert l_exact(0, vacuum(R)) == vacuum(R) * F(1, 16)
    assert l_exact(2, OMEGA) == vacuum(NS) * F(1, 4)


@pytest.mark.parametrize("sector", [NS, R])
@pytest.mark.parametrize("n", range(-4, 5))
def test_matches_definition_oracle(sector, n):
    oracle = Fermion(ramond=sector is R)
    for mono in basis_upto(sector, 5):
        v = Vector.basis_vector(sector, mono)
        assert oracle_state(l_exact(n, v).terms) == oracle.virasoro(n, oracle_state(v.terms))


@pytest.mark.parametrize("m,n", [(1, -1), (2, -2), (3, -3), (0, 3), (0, -4), (2, 1)])
def test_brackets(m, n):
    for sector in (NS, R):
        rep = bracket_residual(m, n, Truncation(6), sector)
        assert rep.ok and rep.rows


@pytest.mark.parametrize("sector", [NS, R])
def test_l0_diagonal(sector):
    for mono in basis_upto(sector, 6):
        v = Vector.basis_vector(sector, mono)
        assert l_exact(0, v) == v * (level(mono) + sector.offset)


@given(st.sampled_from(basis_upto(NS, 4)), st.sampled_from(basis_upto(NS, 4)), st.integers(-4, 4))
def test_contravariance(a, b, n):
    u, v = Vector.basis_vector(NS, a), Vector.basis_vector(NS, b)
    assert gram(l_exact(n, u), v) == gram(u, l_exact(-n, v))


def test_highest_weight_ns():
    hw = highest_weight_vectors(NS, Truncation(8))
    assert [h for h, _ in hw] == [0, F(1, 2)]
    assert hw[0][1] == vacuum(NS) and hw[1][1] == Vector.basis_vector(NS, (1,))


def test_highest_weight_r():
    hw = highest_weight_vectors(R, Truncation(6))
    assert [h for h, _ in hw] == [F(1, 16), F(1, 16)]
    for v in (v_plus(), v_minus()):
        assert l_exact(1, v).is_zero() and l_exact(2, v).is_zero()
    assert apply_mode(0, v_plus()) == v_plus() * INV_SQRT2


def test_ramond_split():
    split = ramond_split(Truncation(8))
    ref = twisted_half_dims(8)
    assert split.dims("+") == ref and split.dims("-") == ref
    assert [ref[F(1, 16) + k] for k in range(4)] == [1, 1, 1, 2]
    assert all(split.direct.values())


def test_characters():
    t = Truncation(8)
    even, odd = ns_parity_dims(8)
    assert character("[0]", t) == {w: d for w, d in even.items() if w.denominator == 1}
    assert virasoro_character("[0]", t) == character("[0]", t)
    assert virasoro_character("[1/2]", t) == character("[1/2]", t)
    assert character("[1/2]", t) == {w: d for w, d in odd.items() if w.denominator == 2}
    with pytest.raises(ValueError):
        character("V", t)
