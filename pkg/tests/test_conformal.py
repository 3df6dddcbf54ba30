import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ising_svoa import linalg
from ising_svoa.conformal import (
    TensorSpace,
    TruncationError,
    candidate_to_json,
    commutant_basis,
    commutant_multiplicity,
    complement,
    embed,
    is_conformal_vector,
    is_rational_cc_half,
    miyamoto_decompose,
    parse_candidate,
    tensor,
    tensor_action,
    tensor_basis,
    tensor_bracket_residual,
    tensor_dims,
    total_omega,
)
from ising_svoa.fock import Sector, Truncation, Vector, basis_upto
from ising_svoa.virasoro import character
from ising_svoa.zhu import OMEGA, VACUUM, X
from oracles import convolve, ns_dims, ns_parity_dims

NS = Sector.NS
F = Fraction
E = embed(OMEGA, 0, 2)
W6 = 6


def rotated_omega(c, s):
    """Virasoro vector of the fermion c psi^1 + s psi^2 (c^2 + s^2 = 1)."""
    y = tensor(X, VACUUM) * c + tensor(VACUUM, X) * s
    return tensor_action(y, -2, y) * F(1, 2)


ROT = rotated_omega(F(3, 5), F(4, 5))


def test_tensor_virasoro_c1():
    w = total_omega(2)
    for m, n in [(2, -2), (1, -1), (3, -3), (2, 1), (0, -3)]:
        assert tensor_bracket_residual(w, 1, m, n, 4) == 0


def test_vacuum_field_is_identity():
    vac = TensorSpace(2).vacuum()
    for lev in Truncation(3).levels(NS):
        for key in tensor_basis(2, lev):
            v = Vector.basis_vector(vac.space, key)
            assert tensor_action(vac, -1, v) == v
            assert tensor_action(vac, 0, v).is_zero()


def test_factor_fermions_anticommute():
    a, b = tensor(X, VACUUM), tensor(VACUUM, X)
    for lev in Truncation(3).levels(NS):
        for key in tensor_basis(2, lev):
            v = Vector.basis_vector(a.space, key)
            for m in range(-3, 3):
                for n in range(-3, 3):
                    s = tensor_action(a, m, tensor_action(b, n, v)) + tensor_action(b, n, tensor_action(a, m, v))
                    assert s.is_zero()


def test_koszul_sign():
    # (1 (x) x)_{-1} acting on (x (x) 1) passes the odd first factor
    v = tensor(X, VACUUM)
    assert tensor_action(tensor(VACUUM, X), -1, v) == -tensor(X, X)
    assert tensor_action(tensor(X, VACUUM), -1, tensor(VACUUM, X)) == tensor(X, X)


def test_conformal_examples():
    assert is_conformal_vector(embed(OMEGA)).central_charge == F(1, 2)
    assert is_conformal_vector(E).central_charge == F(1, 2)
    bad = is_conformal_vector(embed(OMEGA * 2))
    assert not bad.ok and bad.violated == "e_1 e = 2e"
    assert is_conformal_vector(total_omega(2)).central_charge == 1
    assert is_conformal_vector(ROT).central_charge == F(1, 2)


def test_candidate_must_be_even_weight_two():
    with pytest.raises(ValueError):
        is_conformal_vector(tensor(X, VACUUM))


def test_rationality():
    assert is_rational_cc_half(embed(OMEGA))
    assert is_rational_cc_half(E)
    assert is_rational_cc_half(ROT)
    with pytest.raises(ValueError):
        is_rational_cc_half(total_omega(2))
    with pytest.raises(TruncationError):
        is_rational_cc_half(E, 4)


def test_complement():
    assert is_conformal_vector(complement(E)).central_charge == F(1, 2)
    assert tensor_action(total_omega(2), 2, E).is_zero()
    assert is_conformal_vector(complement(ROT)).central_charge == F(1, 2)


def test_decompose_omega_tensor_one():
    dec = miyamoto_decompose(E, W6)
    full = tensor_dims(2, W6)
    assert dec.semisimple
    assert all(d == 0 for d in dec.dims("1/16").values())
    for lev in full:
        assert sum(len(s) for s in dec.spaces[lev].values()) == full[lev]
    even, _ = ns_parity_dims(W6)
    zero = {w: d for w, d in even.items() if w.denominator == 1}
    assert dec.dims("0") == convolve(zero, ns_dims(W6), W6)


def test_tau_identity_and_involution():
    dec = miyamoto_decompose(E, 4)
    tau = dec.tau()
    for lev in Truncation(4).levels(NS):
        for key in tensor_basis(2, lev):
            v = Vector.basis_vector(E.space, key)
            assert tau(v) == v
            assert tau(tau(v)) == v


def test_rotated_decomposition():
    dec = miyamoto_decompose(ROT, W6)
    assert dec.semisimple
    assert dec.dims("0") == miyamoto_decompose(E, W6).dims("0")
    assert all(d == 0 for d in dec.dims("1/16").values())


def _sample_keys(max_level):
    return [k for lev in Truncation(max_level).levels(NS) for k in tensor_basis(2, lev)]


SIGMA_DEC = miyamoto_decompose(ROT, 4)


@settings(max_examples=30)
@given(st.sampled_from(_sample_keys(2)), st.sampled_from(_sample_keys(2)), st.integers(-2, 2))
def test_involutions_are_automorphisms(ka, kv, n):
    space = ROT.space
    a, v = Vector.basis_vector(space, ka), Vector.basis_vector(space, kv)
    w = tensor_action(a, n, v)
    if w.is_zero() or max(w.levels()) > 4:
        return
    for g in (SIGMA_DEC.tau(), SIGMA_DEC.sigma()):
        assert g(w) == tensor_action(g(a), n, g(v))


def test_sigma_squares_to_identity():
    sig = SIGMA_DEC.sigma()
    for key in _sample_keys(3):
        v = Vector.basis_vector(ROT.space, key)
        assert sig(sig(v)) == v


def test_total_omega_decomposition():
    """For the full Virasoro vector the fractional part of L_0 is the parity."""
    dec = miyamoto_decompose(total_omega(2), 4, require_rational=False)
    full = tensor_dims(2, 4)
    assert dec.semisimple
    for lev in full:
        side = "0" if lev.denominator == 1 else "1/2"
        assert dec.dims(side)[lev] == full[lev]
        assert dec.dims("1/16")[lev] == 0


def test_commutants():
    t0 = commutant_multiplicity(E, "0", W6)
    th = commutant_multiplicity(E, "1/2", W6)
    t16 = commutant_multiplicity(E, "1/16", W6)
    m = character("M", Truncation(W6))
    assert t0 == m
    assert th == {w: (m.get(w - F(1, 2), 0)) for w in t0}
    assert all(d == 0 for d in t16.values())


def test_commutants_are_disjoint():
    b0 = commutant_basis(E, F(0), 4)
    bh = commutant_basis(E, F(1, 2), 4)
    for lev in b0:
        if b0[lev] and bh[lev]:
            assert linalg.rank(b0[lev] + bh[lev]) == len(b0[lev]) + len(bh[lev])


def test_candidate_json_round_trip():
    for e in (E, ROT, embed(OMEGA)):
        obj = candidate_to_json(e)
        assert parse_candidate(json.dumps(obj)) == e
    text = '{"factors": 2, "terms": [{"monomials": [["-3/2", "-1/2"], []], "scalar": "1/2"}]}'
    assert parse_candidate(text) == E


@pytest.mark.parametrize(
    "bad",
    [
        '{"terms": []}',
        '{"factors": 2, "terms": [{"monomials": [["-3/2"]], "scalar": "1"}]}',
        '{"factors": 1, "terms": [{"monomials": [["-3/4"]], "scalar": "1"}]}',
        '{"factors": 1, "terms": [{"monomials": [["-1/2"]], "scalar": "one"}]}',
    ],
)
def test_candidate_json_errors(bad):
    with pytest.raises(ValueError):
        parse_candidate(bad)


def test_three_factors():
    e = embed(OMEGA, 1, 3)
    assert is_conformal_vector(e).central_charge == F(1, 2)
    assert is_conformal_vector(total_omega(3)).central_charge == F(3, 2)
    with pytest.raises(ValueError):
        TensorSpace(4)


def test_single_factor_matches_m():
    e = embed(OMEGA)
    for mono in basis_upto(NS, 3):
        v = embed(Vector.basis_vector(NS, mono))
        assert tensor_action(e, 1, v) == v * sum(F(d, 2) for d in mono)
