"""Check suites behind the command-line interface.

Each function returns a plain report dict with an ``ok`` flag, the truncation
actually used and the slack (how far below the truncation results are
claimed).  Values are Python numbers/Fractions/Scalars; :mod:`ising_svoa.cli`
turns them into canonical text.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import conformal as cf
from . import zhu
from .cache import OperatorCache
from .fields import (
    AdjointField,
    adjoint_phase,
    invariance_residual,
    sample_jacobi,
    sigma_conjugate,
    state_action,
    twisted_vertex_modes,
)
from .fock import (
    Sector,
    Truncation,
    Vector,
    apply_mode,
    basis_at_level,
    basis_table,
    basis_upto,
    format_monomial,
    gram,
    level,
    parity,
)
from .scalar import INV_SQRT2, half
from .virasoro import bracket_residual, character, l_exact, v_minus, v_plus

NS, R = Sector.NS, Sector.R
SPACES = ("M", "N", "[0]", "[1/2]", "[1/16]+", "[1/16]-")


class InsufficientTruncation(ValueError):
    """The requested check needs a larger ``max_weight``."""


def _need(trunc: Truncation, weight, what: str):
    if trunc.max_weight < weight:
        raise InsufficientTruncation(f"{what} needs max_weight >= {weight}")


def _modes(mono) -> list[str]:
    return [str(Fraction(-d, 2)) for d in mono]


# --- dims ---------------------------------------------------------------------


def dims_report(space: str, trunc: Truncation, with_basis: bool = False) -> dict:
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}; expected one of {', '.join(SPACES)}")
    table = character(space, trunc)
    rep = {
        "command": "dims",
        "space": space,
        "max_weight": trunc.max_weight,
        "slack": Fraction(0),
        "rows": [{"space": space, "weight": w, "dim": d} for w, d in sorted(table.items())],
        "ok": True,
    }
    if with_basis and space in ("M", "N"):
        rep["basis"] = basis_table(NS if space == "M" else R, trunc)
    return rep


# --- virasoro -------------------------------------------------------------------


def virasoro_report(sectors, trunc: Truncation, mode_range: int = 4, cache: OperatorCache | None = None) -> dict:
    """Brackets of the explicit ``L_n`` for ``|m|, |n| <= mode_range`` and
    agreement of the vertex-operator modes ``omega_{n+1}`` with ``L_n``."""
    cache = cache or OperatorCache()
    rows, field_rows = [], []
    slack = Fraction(0)
    for sector in sectors:
        for m in range(-mode_range, mode_range + 1):
            for n in range(-mode_range, mode_range + 1):
                rep = bracket_residual(m, n, trunc, sector)
                slack = max(slack, rep.slack)
                per_weight: dict = {}
                for _, w, _, res in rep.rows:
                    per_weight[w] = max(per_weight.get(w, Fraction(0)), res)
                rows.extend(
                    {"sector": sector.value, "m": m, "n": n, "weight": w, "residual_norm": r}
                    for w, r in sorted(per_weight.items())
                )
        for n in range(-mode_range, mode_range + 1):
            entry = cache.matrix(sector, zhu.OMEGA, n + 1, trunc.max_weight)
            agree = True
            for mono in basis_upto(sector, trunc.max_weight):
                v = Vector.basis_vector(sector, mono)
                if entry.apply(v) != l_exact(n, v).truncated(trunc.max_weight)[0]:
                    agree = False
                    break
            field_rows.append({"sector": sector.value, "n": n, "fields_equal_L": agree})
    ok = all(r["residual_norm"] == 0 for r in rows) and all(r["fields_equal_L"] for r in field_rows)
    return {
        "command": "virasoro-check",
        "central_charge": Fraction(1, 2),
        "max_weight": trunc.max_weight,
        "slack": slack,
        "rows": rows,
        "fields": field_rows,
        "ok": ok,
    }


# --- jacobi -----------------------------------------------------------------------


def jacobi_report(variant: str, trunc: Truncation, samples: int, seed: int) -> dict:
    if variant not in ("ns", "twisted"):
        raise ValueError("variant must be 'ns' or 'twisted'")
    results = sample_jacobi(variant, trunc, samples, seed)
    rows = [
        {
            "a": _modes(r.a),
            "b": _modes(r.b),
            "p": r.p,
            "q": r.q,
            "r": r.r,
            "residual": r.residual,
            "vectors": r.checked,
        }
        for r in results
    ]
    return {
        "command": "jacobi-check",
        "variant": variant,
        "max_weight": trunc.max_weight,
        "slack": Fraction(0),
        "samples": samples,
        "seed": seed,
        "rows": rows,
        "ok": all(r.residual == 0 for r in results),
    }


# --- zhu -----------------------------------------------------------------------------


def zhu_report(trunc: Truncation) -> dict:
    """A(V) for the Ising SVOA: one dimensional, spanned by the vacuum."""
    _need(trunc, 2, "the untwisted Zhu algebra check")
    bound = min(trunc.max_weight, Fraction(6))
    dim = zhu.untwisted_dim(bound)
    odd_rows = []
    for mono in basis_upto(NS, min(trunc.max_weight, Fraction(6))):
        if not parity(mono):
            continue
        a, u = zhu.untwisted_witness(mono)
        exact = zhu.circ(a, u) == Vector.basis_vector(NS, mono)
        odd_rows.append(
            {
                "monomial": format_monomial(NS, mono),
                "reduced": zhu.reduce_untwisted(Vector.basis_vector(NS, mono)),
                "witness_exact": exact,
            }
        )
    omega_image = zhu.reduce_untwisted(zhu.OMEGA)
    ok = dim == 1 and all(r["reduced"] == 0 and r["witness_exact"] for r in odd_rows)
    return {
        "command": "zhu",
        "max_weight": trunc.max_weight,
        "slack": trunc.max_weight - bound,
        "dim": dim,
        "basis": ["1"],
        "table": {"1*1": "1"},
        "minimal_poly": "t" if omega_image == 0 else f"t-{omega_image}",
        "generator": "omega",
        "characters": [zhu.chi_untwisted(zhu.OMEGA)],
        "odd_reductions": odd_rows,
        "ok": ok,
    }


def zhu_twisted_report(trunc: Truncation) -> dict:
    _need(trunc, 2, "the twisted Zhu algebra check")
    bound = min(trunc.max_weight, Fraction(6))
    table = zhu.algebra_table_t()
    upper = zhu.twisted_quotient_dim(bound)
    xx_star = zhu.star_t(zhu.X, zhu.X)
    xx_circ = zhu.circ_t(zhu.X, zhu.X)
    omega_image = zhu.reduce_t(zhu.OMEGA)
    products = {
        "x*_t x = 1/2 1": xx_star == zhu.VACUUM * Fraction(1, 2),
        "x o_t x = 2(omega - 1/16 1)": xx_circ == (zhu.OMEGA - zhu.VACUUM * Fraction(1, 16)) * 2,
        "omega = 1/16 in A_t": omega_image == (Fraction(1, 16), 0),
        "x o_t x in O_t": zhu.o_t_membership(xx_circ, 4).member is True,
    }
    ok = (
        table.dim == 2
        and upper == 2
        and table.table["x*x"] == (Fraction(1, 2), 0)
        and zhu.minimal_poly_check(table)
        and all(products.values())
    )
    return {
        "command": "zhu-twisted",
        "max_weight": trunc.max_weight,
        "slack": trunc.max_weight - bound,
        "dim": table.dim,
        "quotient_dim_upper_bound": upper,
        "basis": table.basis,
        "table": {k: list(v) for k, v in table.table.items()},
        "minimal_poly": table.minimal_poly,
        "characters": table.characters,
        "omega_image": list(omega_image),
        "products": products,
        "ok": ok,
    }


def fusion_report() -> dict:
    mat = zhu.fusion_matrix()
    return {
        "command": "fusion",
        "max_weight": Fraction(1),
        "slack": Fraction(0),
        "labels": ["+", "-"],
        "matrix": mat,
        "ok": mat == [[1, 0], [0, 1]],
    }


# --- twisted action -------------------------------------------------------------------


def twisted_action_report(trunc: Truncation, cache: OperatorCache | None = None) -> dict:
    """Zero modes of ``x`` and ``omega`` on the top vectors ``v^+-``, before and
    after sigma-conjugation."""
    cache = cache or OperatorCache()
    x0 = cache.matrix(R, zhu.X, Fraction(-1, 2), trunc.max_weight)
    w0 = cache.matrix(R, zhu.OMEGA, 1, trunc.max_weight)
    conj = sigma_conjugate(twisted_vertex_modes(zhu.X))
    out = {}
    for name, v in (("v_plus", v_plus()), ("v_minus", v_minus())):
        out[name] = {
            "x_eigenvalue": _eigenvalue(x0.apply(v), v),
            "omega_eigenvalue": _eigenvalue(w0.apply(v), v),
            "sigma_x_eigenvalue": _eigenvalue(conj.zero_mode(v), v),
        }
    ok = (
        out["v_plus"]["x_eigenvalue"] == INV_SQRT2
        and out["v_minus"]["x_eigenvalue"] == -INV_SQRT2
        and out["v_plus"]["sigma_x_eigenvalue"] == -INV_SQRT2
        and out["v_minus"]["sigma_x_eigenvalue"] == INV_SQRT2
        and all(o["omega_eigenvalue"] == Fraction(1, 16) for o in out.values())
    )
    return {
        "command": "twisted-action",
        "max_weight": trunc.max_weight,
        "slack": Fraction(0),
        "v_plus_eigenvalue": out["v_plus"]["x_eigenvalue"],
        "v_minus_eigenvalue": out["v_minus"]["x_eigenvalue"],
        "tops": out,
        "ok": ok,
    }


def _eigenvalue(w: Vector, v: Vector):
    """``lam`` with ``w = lam v``, or None if ``w`` is not proportional to ``v``."""
    k = next(iter(v.terms))
    lam = w.coeff(k) / v.coeff(k)
    return lam if w == v * lam else None


# --- invariant form --------------------------------------------------------------------


def psi_adjoint_rows(max_index=Fraction(9, 2), level_bound=Fraction(4)) -> list[dict]:
    """``<psi_n u, v> = <u, psi_{-n} v>`` on all basis pairs, plus agreement of
    the adjoint field of ``psi_{-1/2}1`` with ``psi_{-n}``."""
    rows = []
    basis = basis_upto(NS, level_bound)
    n = -half(max_index)
    while n <= max_index:
        worst = Fraction(0)
        field_ok = True
        adj = AdjointField(zhu.X)
        for mu in basis:
            u = Vector.basis_vector(NS, mu)
            pu = apply_mode(n, u)
            for mv in basis:
                v = Vector.basis_vector(NS, mv)
                d = gram(pu, v) - gram(u, apply_mode(-n, v))
                worst = max(worst, abs(d))
            if adj.apply(n - Fraction(1, 2), u) != apply_mode(-n, u):
                field_ok = False
        rows.append({"n": n, "residual": worst, "adjoint_field_is_psi_minus_n": field_ok})
        n += 1
    return rows


def invariance_rows(samples: int, seed: int, state_weight=Fraction(3), level_bound=Fraction(4)) -> list[dict]:
    rng = random.Random(seed)
    states = basis_upto(NS, state_weight)
    vecs = basis_upto(NS, level_bound)
    rows = []
    while len(rows) < samples:
        a, u = rng.choice(states), rng.choice(vecs)
        m = rng.randint(-3, 3)
        target = level(u) + level(a) - m - 1
        cands = basis_at_level(NS, target) if target >= 0 else []
        if not cands:
            continue
        v = rng.choice(cands)
        A, U, V = (Vector.basis_vector(NS, x) for x in (a, u, v))
        res = max(invariance_residual(A, U, V, m, s) for s in (1, -1))
        lhs = gram(state_action(NS, A, m, U), V)
        rows.append(
            {"a": _modes(a), "u": _modes(u), "v": _modes(v), "m": m, "pairing": lhs, "residual": res}
        )
    return rows


def lambda_rows(state_weight=Fraction(4), probe_level=Fraction(3)) -> list[dict]:
    """Both choices ``lambda = e^{+-pi i}`` give the same adjoint modes."""
    rows = []
    probes = [Vector.basis_vector(NS, m) for m in basis_upto(NS, probe_level)]
    for a in basis_upto(NS, state_weight):
        A = Vector.basis_vector(NS, a)
        h = level(a)
        same_phase = adjoint_phase(h, 1) == adjoint_phase(h, -1)
        plus, minus = AdjointField(A, 1), AdjointField(A, -1)
        same_modes = all(
            plus.apply(m, v) == minus.apply(m, v) for m in range(-3, 4) for v in probes
        )
        rows.append({"a": _modes(a), "weight": h, "phase": adjoint_phase(h), "independent": same_phase and same_modes})
    return rows


def form_report(trunc: Truncation, samples: int = 50, seed: int = 0) -> dict:
    _need(trunc, 4, "the invariant form check")
    adj = psi_adjoint_rows()
    inv = invariance_rows(samples, seed)
    lam = lambda_rows()
    ok = (
        all(r["residual"] == 0 and r["adjoint_field_is_psi_minus_n"] for r in adj)
        and all(r["residual"] == 0 for r in inv)
        and all(r["independent"] for r in lam)
    )
    return {
        "command": "form-check",
        "max_weight": trunc.max_weight,
        "slack": Fraction(0),
        "seed": seed,
        "psi_adjoint": adj,
        "invariance": inv,
        "lambda_independence": lam,
        "ok": ok,
    }


# --- conformal --------------------------------------------------------------------------


def default_candidate(factors: int = 2) -> Vector:
    """``omega (x) 1 (x) ...``."""
    return cf.embed(zhu.OMEGA, 0, factors)


def conformal_report(e: Vector, test: str, trunc: Truncation, h_values=("0", "1/2", "1/16")) -> dict:
    rep = {
        "command": "conformal",
        "test": test,
        "candidate": cf.candidate_to_json(e),
        "max_weight": trunc.max_weight,
        "slack": Fraction(0),
    }
    res = cf.is_conformal_vector(e)
    rep["central_charge"] = res.central_charge
    rep["violated"] = res.violated
    if test == "axioms":
        rep["ok"] = res.ok
        if res.ok:
            comp = cf.complement(e)
            omega_2e = cf.tensor_action(cf.total_omega(e.space.factors), 2, e)
            if omega_2e.is_zero() and not comp.is_zero():
                cres = cf.is_conformal_vector(comp)
                rep["complement_central_charge"] = cres.central_charge
                rep["ok"] = cres.central_charge == Fraction(e.space.factors, 2) - res.central_charge
        return rep
    if trunc.max_weight < cf.RATIONAL_WEIGHT:
        raise InsufficientTruncation("the rationality test needs max_weight >= 6")
    if res.central_charge != Fraction(1, 2):
        rep["ok"] = False
        rep["rational"] = None
        return rep
    rational = cf.is_rational_cc_half(e, trunc.max_weight)
    rep["rational"] = rational
    if test == "rational":
        rep["ok"] = rational
        return rep
    if not rational:
        rep["ok"] = False
        return rep
    if test == "decompose":
        dec = cf.miyamoto_decompose(e, trunc.max_weight, require_rational=False)
        full = cf.tensor_dims(e.space.factors, trunc.max_weight)
        rows = []
        for lev in sorted(dec.spaces):
            rows.append(
                {
                    "weight": lev,
                    "dim": full[lev],
                    "V_e(0)": len(dec.spaces[lev]["0"]),
                    "V_e(1/2)": len(dec.spaces[lev]["1/2"]),
                    "V_e(1/16)": len(dec.spaces[lev]["1/16"]),
                    "complete": dec.complete[lev],
                }
            )
        rep["rows"] = rows
        rep["tau_is_identity"] = all(r["V_e(1/16)"] == 0 for r in rows)
        rep["ok"] = dec.semisimple
        return rep
    if test == "commutant":
        rows = []
        tables = {h: cf.commutant_multiplicity(e, h, trunc.max_weight) for h in h_values}
        for lev in trunc.levels(NS):
            rows.append({"weight": lev, **{f"T_e({h})": tables[h][lev] for h in h_values}})
        rep["rows"] = rows
        rep["ok"] = True
        return rep
    raise ValueError(f"unknown conformal test {test!r}")
