"""Virasoro operators of central charge 1/2 on the NS and R Fock spaces.

On NS ``L_n = 1/2 sum_{k > -n/2} (n + 2k) psi_{-k} psi_{n+k}`` with
``k in Z + 1/2``; on R the same with ``phi`` and ``k in Z``, plus ``1/16``
on ``L_0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .fock import (
    Sector,
    Truncation,
    Vector,
    apply_mode_doubled,
    basis_at_level,
    parity,
)
from .scalar import INV_SQRT2

CENTRAL_CHARGE = Fraction(1, 2)


@lru_cache(maxsize=None)
def _l_on_monomial(sector: Sector, n: int, mono: tuple) -> tuple:
    lev2 = sum(mono)  # doubled level
    out = Vector(sector)
    start = -n + 1
    want = 1 if sector is Sector.NS else 0
    if start % 2 != want:
        start += 1
    top = lev2 - 2 * n
    v = Vector.basis_vector(sector, mono)
    for K in range(start, top + 1, 2):
        w = apply_mode_doubled(2 * n + K, v)
        if w.is_zero():
            continue
        w = apply_mode_doubled(-K, w)
        if not w.is_zero():
            out.iadd(w, Fraction(n + K, 2))
    if sector is Sector.R and n == 0:
        out.iadd(v, Fraction(1, 16))
    return tuple(out.terms.items())


def l_exact(n: int, v: Vector) -> Vector:
    """``L_n v`` on the full Fock space (no truncation involved)."""
    out = Vector(v.space)
    for mono, c in v.terms.items():
        for m2, d in _l_on_monomial(v.space, n, mono):
            out.iadd(Vector.basis_vector(v.space, m2, d), c)
    return out


@dataclass
class Applied:
    """Result of a truncated application plus its completeness flag."""

    vector: Vector
    complete: bool


def l_apply(n: int, v: Vector, trunc: Truncation) -> Applied:
    """``L_n v`` restricted to levels <= ``trunc.max_weight``."""
    w, complete = l_exact(n, v).truncated(trunc.max_weight)
    return Applied(w, complete)


def l_series(ns, v: Vector) -> Vector:
    """``L_{n_1} L_{n_2} ... v`` for ``ns = (n_1, n_2, ...)``."""
    for n in reversed(list(ns)):
        v = l_exact(n, v)
    return v


@dataclass
class BracketReport:
    m: int
    n: int
    max_weight: Fraction
    slack: int
    rows: list = field(default_factory=list)  # (sector, weight, monomial, residual_norm)

    @property
    def ok(self) -> bool:
        return all(r[3] == 0 for r in self.rows)

    @property
    def max_residual(self) -> Fraction:
        return max((r[3] for r in self.rows), default=Fraction(0))


def bracket_residual(m: int, n: int, trunc: Truncation, sector=Sector.NS) -> BracketReport:
    """Residual of ``[L_m, L_n] = (m-n) L_{m+n} + c/12 (m^3-m) delta_{m+n,0}``
    on every basis vector of level <= max_weight.

    The operators act on the full Fock space, so intermediate vectors are
    never cut off and no slack is needed.
    """
    sector = Sector.parse(sector)
    slack = 0
    rep = BracketReport(m, n, trunc.max_weight, slack)
    central = CENTRAL_CHARGE * Fraction(m**3 - m, 12) if m + n == 0 else Fraction(0)
    for lev in trunc.levels(sector):
        if lev > trunc.max_weight - slack:
            break
        for mono in basis_at_level(sector, lev):
            v = Vector.basis_vector(sector, mono)
            lhs = l_exact(m, l_exact(n, v)) - l_exact(n, l_exact(m, v))
            rhs = l_exact(m + n, v) * (m - n)
            if central:
                rhs.iadd(v, central)
            res = lhs - rhs
            rep.rows.append((sector, lev + sector.offset, mono, res.norm()))
    return rep


# --- block matrices -------------------------------------------------------


def block_matrix(op, sector: Sector, lev_in, lev_out) -> list[list]:
    """Matrix of a vector map between two level blocks (rows = output basis)."""
    src = basis_at_level(sector, lev_in)
    dst = basis_at_level(sector, lev_out)
    index = {m: i for i, m in enumerate(dst)}
    mat = [[Fraction(0)] * len(src) for _ in dst]
    for j, mono in enumerate(src):
        w = op(Vector.basis_vector(sector, mono))
        for m2, c in w.terms.items():
            mat[index[m2]][j] = c
    return mat


def _combine(sector, lev, coeffs) -> Vector:
    b = basis_at_level(sector, lev)
    return Vector(sector, {m: c for m, c in zip(b, coeffs) if c})


def highest_weight_vectors(sector, trunc: Truncation) -> list[tuple[Fraction, Vector]]:
    """Basis of the joint kernel of L_1, L_2 on each level block.

    L_1 and L_2 generate all L_n with n >= 1, so their kernels suffice; every
    returned vector is checked to be an L_0 eigenvector.
    """
    sector = Sector.parse(sector)
    out = []
    for lev in trunc.levels(sector):
        dim = len(basis_at_level(sector, lev))
        if dim == 0:
            continue
        rows = []
        for k in (1, 2):
            if lev - k >= 0 and basis_at_level(sector, lev - k):
                rows.extend(block_matrix(lambda v, k=k: l_exact(k, v), sector, lev, lev - k))
        for coeffs in linalg.nullspace(rows, dim):
            v = _combine(sector, lev, coeffs)
            h = lev + sector.offset
            assert l_exact(0, v) == v * h
            out.append((h, v))
    return out


def v_plus() -> Vector:
    """``phi_0 v_0 + v_0 / sqrt2``."""
    return Vector(Sector.R, {(0,): Fraction(1), (): INV_SQRT2})


def v_minus() -> Vector:
    """``phi_0 v_0 - v_0 / sqrt2``."""
    return Vector(Sector.R, {(0,): Fraction(1), (): -INV_SQRT2})


def generate_submodule(seed: Vector, trunc: Truncation) -> dict:
    """Span of all ``L_{-n_1}...L_{-n_k} seed`` per level, as row-reduced bases.

    Returns {level: list of coefficient rows over ``basis_at_level``}.
    """
    sector = seed.space
    seed_level = min(seed.levels())
    spans: dict = {}

    def add(lev, v: Vector):
        b = basis_at_level(sector, lev)
        row = [v.coeff(m) for m in b]
        cur = spans.get(lev, [])
        if linalg.rank(cur + [row]) > len(cur):
            spans[lev] = linalg.rref(cur + [row])[0]
            return True
        return False

    add(seed_level, seed)
    lev = seed_level
    while lev <= trunc.max_weight:
        for row in list(spans.get(lev, [])):
            v = _combine(sector, lev, row)
            for n in range(1, int(trunc.max_weight - lev) + 1):
                add(lev + n, l_exact(-n, v))
        lev += 1
    return {k: v for k, v in spans.items() if k <= trunc.max_weight}


@dataclass
class RamondSplit:
    plus: dict
    minus: dict
    direct: dict  # level -> bool (ranks add up to the full dimension)

    def dims(self, which: str) -> dict:
        side = self.plus if which == "+" else self.minus
        return {lev + Sector.R.offset: len(side.get(lev, [])) for lev in sorted(self.direct)}


def ramond_split(trunc: Truncation) -> RamondSplit:
    """N = [1/16]^+ (+) [1/16]^- generated from v^+ and v^-."""
    plus = generate_submodule(v_plus(), trunc)
    minus = generate_submodule(v_minus(), trunc)
    direct = {}
    for lev in trunc.levels(Sector.R):
        p, q = plus.get(lev, []), minus.get(lev, [])
        full = len(basis_at_level(Sector.R, lev))
        direct[lev] = linalg.rank(p + q) == len(p) + len(q) == full
        if not direct[lev]:
            raise AssertionError(f"N is not the direct sum of [1/16]^+- at level {lev}")
    return RamondSplit(plus, minus, direct)


def character(space: str, trunc: Truncation) -> dict:
    """Graded dimensions of ``M``, ``N``, ``[0]``, ``[1/2]``, ``[1/16]+``, ``[1/16]-``."""
    if space in ("M", "N"):
        sector = Sector.NS if space == "M" else Sector.R
        return {
            lev + sector.offset: len(basis_at_level(sector, lev)) for lev in trunc.levels(sector)
        }
    if space in ("[0]", "[1/2]"):
        want = 0 if space == "[0]" else 1
        return {
            lev: sum(1 for m in basis_at_level(Sector.NS, lev) if parity(m) == want)
            for lev in trunc.levels(Sector.NS)
            if (2 * lev) % 2 == want
        }
    if space in ("[1/16]+", "[1/16]-"):
        return ramond_split(trunc).dims(space[-1])
    raise ValueError(f"unknown space {space!r}")


def virasoro_character(space: str, trunc: Truncation) -> dict:
    """Same table as :func:`character`, but [0] and [1/2] computed as the
    Virasoro submodules generated by their highest weight vectors."""
    if space not in ("[0]", "[1/2]"):
        return character(space, trunc)
    seed = Vector.basis_vector(Sector.NS, () if space == "[0]" else (1,))
    spans = generate_submodule(seed, trunc)
    start = Fraction(0) if space == "[0]" else Fraction(1, 2)
    out = {}
    lev = start
    while lev <= trunc.max_weight:
        out[lev] = len(spans.get(lev, []))
        lev += 1
    return out
