"""Tensor powers ``M^{(x)k}`` and conformal vectors inside them.

A tensor basis key is a tuple of ``k`` NS monomials.  States act through

    (a^1 (x) ... (x) a^k)_n = sum_{i_1 + ... + i_k = n - k + 1} sign (a^1)_{i_1} (x) ... (x) (a^k)_{i_k}

where moving ``a^l`` past ``v^1 ... v^{l-1}`` costs the Koszul sign
``(-1)^{p(a^l) (p(v^1) + ... + p(v^{l-1}))}``.  For a weight-2 state ``e`` the
operators ``L^e_n = e_{n+1}`` are the candidate Virasoro modes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .fields import mode_action
from .fock import Sector, Truncation, Vector, basis_at_level, level, parity
from .scalar import format_scalar, half, parse_scalar

NS = Sector.NS
MAX_FACTORS = 3
DEFAULT_TENSOR_WEIGHT = Fraction(6)
RATIONAL_WEIGHT = Fraction(6)
RATIONAL_COEFFS = ((64, ((-2, -2, -2))), (93, (-3, -3)), (-264, (-4, -2)), (-108, (-6,)))
FRACTIONAL_PARTS = {Fraction(0): "0", Fraction(1, 2): "1/2", Fraction(1, 16): "1/16"}


@dataclass(frozen=True)
class TensorSpace:
    """Tag for ``M^{(x)k}``; vectors in it are keyed by k-tuples of monomials."""

    factors: int

    def __post_init__(self):
        if not 1 <= self.factors <= MAX_FACTORS:
            raise ValueError(f"between 1 and {MAX_FACTORS} tensor factors are supported")

    def __str__(self):
        return f"M^{self.factors}"

    def vacuum(self) -> Vector:
        return Vector.basis_vector(self, ((),) * self.factors)

    def levels(self, max_weight) -> list[Fraction]:
        return Truncation(max_weight).levels(NS)


def key_parity(key: tuple) -> int:
    return sum(parity(m) for m in key) % 2


def key_level(key: tuple) -> Fraction:
    return sum((level(m) for m in key), Fraction(0))


@lru_cache(maxsize=None)
def tensor_basis(k: int, lev: Fraction) -> tuple:
    """All k-tuples of NS monomials of total level ``lev``."""
    lev = Fraction(lev)
    if k == 1:
        return tuple((m,) for m in basis_at_level(NS, lev))
    out = []
    first = Fraction(0)
    while first <= lev:
        for m in basis_at_level(NS, first):
            out.extend((m,) + rest for rest in tensor_basis(k - 1, lev - first))
        first += Fraction(1, 2)
    return tuple(out)


def tensor_dims(k: int, max_weight) -> dict:
    return {lev: len(tensor_basis(k, lev)) for lev in Truncation(max_weight).levels(NS)}


def embed(v: Vector, position: int = 0, factors: int = 1) -> Vector:
    """Place an NS vector into slot ``position`` of ``M^{(x)factors}``, vacua elsewhere."""
    space = TensorSpace(factors)
    out = Vector(space)
    for m, c in v.terms.items():
        key = tuple(m if i == position else () for i in range(factors))
        out.terms[key] = c
    return out


def tensor(*vs: Vector) -> Vector:
    """``v_1 (x) ... (x) v_k`` for NS vectors."""
    space = TensorSpace(len(vs))
    terms = {(): Fraction(1)}
    for v in vs:
        if v.space is not NS:
            raise ValueError("tensor factors must be NS vectors")
        terms = {k + (m,): c * d for k, c in terms.items() for m, d in v.terms.items()}
    return Vector(space, terms)


# --- modes -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _tmode(a: tuple, n: Fraction, v: tuple) -> tuple:
    """``a_n v`` for tensor basis keys; returns a tuple of (key, coeff)."""
    a1, v1 = a[0], v[0]
    if len(a) == 1:
        w = mode_action(NS, a1, n, Vector.basis_vector(NS, v1))
        return tuple(((m,), c) for m, c in w.terms.items())
    ra, rv = a[1:], v[1:]
    sign = -1 if (key_parity(ra) * parity(v1)) % 2 else 1
    # mode indices on M are integers; the rest must land at level >= 0
    lo = math.ceil(n - key_level(rv) - key_level(ra))
    hi = math.floor(level(v1) + level(a1) - 1)
    out: dict = {}
    for i in [-1] if not a1 else range(lo, hi + 1):
        j = n - 1 - i
        w = mode_action(NS, a1, i, Vector.basis_vector(NS, v1))
        if not w.is_zero():
            rest = _tmode(ra, j, rv)
            for m, c in w.terms.items():
                for key, d in rest:
                    kk = (m,) + key
                    s = out.get(kk, 0) + sign * c * d
                    if s:
                        out[kk] = s
                    else:
                        out.pop(kk, None)
    return tuple(out.items())


def tensor_action(a: Vector, n, v: Vector) -> Vector:
    """``a_n v`` for states ``a`` and vectors ``v`` of the same tensor space."""
    if a.space != v.space or not isinstance(a.space, TensorSpace):
        raise ValueError("tensor_action needs two vectors of one tensor space")
    n = Fraction(n)
    out = Vector(v.space)
    t = out.terms
    for ka, ca in a.terms.items():
        for kv, cv in v.terms.items():
            for key, d in _tmode(ka, n, kv):
                s = t.get(key, 0) + ca * cv * d
                if s:
                    t[key] = s
                else:
                    t.pop(key, None)
    return out


@dataclass
class TensorField:
    """Modes of ``Y(a, z)`` on a tensor space."""

    state: Vector
    trunc: Truncation | None = None

    def apply(self, n, v: Vector) -> Vector:
        w = tensor_action(self.state, n, v)
        return w.truncated(self.trunc.max_weight)[0] if self.trunc else w


def tensor_vertex_modes(a: Vector, trunc: Truncation | None = None) -> TensorField:
    return TensorField(a, trunc)


def virasoro_modes(e: Vector):
    """``n -> (v -> L^e_n v)`` with ``L^e_n = e_{n+1}``."""
    return lambda n, v: tensor_action(e, n + 1, v)


def total_omega(factors: int) -> Vector:
    """Sum of the factor Virasoro vectors."""
    from .zhu import OMEGA

    out = Vector(TensorSpace(factors))
    for i in range(factors):
        out.iadd(embed(OMEGA, i, factors))
    return out


def tensor_bracket_residual(e: Vector, c, m: int, n: int, max_weight) -> Fraction:
    """Max residual of the Virasoro bracket for ``L^e`` on basis vectors of level
    at most ``max_weight``."""
    L = virasoro_modes(e)
    k = e.space.factors
    central = Fraction(c) * Fraction(m**3 - m, 12) if m + n == 0 else 0
    worst = Fraction(0)
    for lev in Truncation(max_weight).levels(NS):
        for key in tensor_basis(k, lev):
            v = Vector.basis_vector(e.space, key)
            res = L(m, L(n, v)) - L(n, L(m, v)) - L(m + n, v) * (m - n)
            if central:
                res.iadd(v, -central)
            worst = max(worst, res.norm())
    return worst


# --- conformal vectors ------------------------------------------------------


@dataclass
class ConformalResult:
    """``central_charge`` is set iff all three conditions hold."""

    central_charge: Fraction | None
    violated: str | None = None

    @property
    def ok(self) -> bool:
        return self.central_charge is not None


def _check_candidate(e: Vector):
    if not isinstance(e.space, TensorSpace):
        raise ValueError("candidate must live in a tensor space")
    if e.is_zero():
        raise ValueError("candidate is zero")
    if e.levels() != {Fraction(2)} or any(key_parity(k) for k in e.terms):
        raise ValueError("candidate must be even of weight 2")


def is_conformal_vector(e: Vector) -> ConformalResult:
    """``e_1 e = 2e``, ``e_2 e = 0`` and ``e_3 e = (c/2) 1``."""
    _check_candidate(e)
    if tensor_action(e, 1, e) != e * 2:
        return ConformalResult(None, "e_1 e = 2e")
    if not tensor_action(e, 2, e).is_zero():
        return ConformalResult(None, "e_2 e = 0")
    w = tensor_action(e, 3, e)
    vac = e.space.vacuum()
    coeff = w.coeff(next(iter(vac.terms)))
    if w != vac * coeff:
        return ConformalResult(None, "e_3 e in C1")
    return ConformalResult(2 * coeff)


def rationality_vector(e: Vector) -> Vector:
    """``64 (L_{-2})^3 1 + 93 (L_{-3})^2 1 - 264 L_{-4} L_{-2} 1 - 108 L_{-6} 1``."""
    L = virasoro_modes(e)
    vac = e.space.vacuum()
    out = Vector(e.space)
    for coef, modes in RATIONAL_COEFFS:
        v = vac
        for n in reversed(modes):
            v = L(n, v)
        out.iadd(v, coef)
    return out


def is_rational_cc_half(e: Vector, max_weight=RATIONAL_WEIGHT) -> bool:
    if half(max_weight) < RATIONAL_WEIGHT:
        raise TruncationError("the rationality test lives at weight 6")
    res = is_conformal_vector(e)
    if res.central_charge != Fraction(1, 2):
        raise ValueError(f"not a conformal vector of central charge 1/2 ({res.violated or res.central_charge})")
    return rationality_vector(e).is_zero()


class TruncationError(ValueError):
    """The requested check needs a larger truncation."""


def complement(e: Vector) -> Vector:
    """``omega - e`` for the total Virasoro vector ``omega``."""
    return total_omega(e.space.factors) - e


# --- eigenspace decomposition ------------------------------------------------


def _block(op, space: TensorSpace, lev) -> list[list]:
    keys = tensor_basis(space.factors, lev)
    index = {k: i for i, k in enumerate(keys)}
    mat = [[Fraction(0)] * len(keys) for _ in keys]
    for j, k in enumerate(keys):
        for k2, c in op(Vector.basis_vector(space, k)).terms.items():
            mat[index[k2]][j] = c
    return mat


def _shifted(mat, lam):
    return [[x - (lam if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(mat)]


def _candidates(lev: Fraction) -> list[Fraction]:
    out = []
    for h in FRACTIONAL_PARTS:
        lam = h
        while lam <= lev:
            out.append(lam)
            lam += 1
    return sorted(out)


@dataclass
class Decomposition:
    """Per-level ``L^e_0`` eigenvectors grouped by fractional part of the eigenvalue."""

    e: Vector
    max_weight: Fraction
    spaces: dict = field(default_factory=dict)  # level -> {"0"|"1/2"|"1/16": [coeff rows]}
    eigen: dict = field(default_factory=dict)  # level -> {eigenvalue: dim}
    complete: dict = field(default_factory=dict)  # level -> bool

    def dims(self, h: str) -> dict:
        return {lev: len(s[h]) for lev, s in self.spaces.items()}

    @property
    def semisimple(self) -> bool:
        return all(self.complete.values())

    def _sign_op(self, signs: dict):
        space = self.e.space
        cache = {}

        def op(v: Vector) -> Vector:
            out = Vector(space)
            for lev in sorted(v.levels()):
                if lev not in cache:
                    rows, diag = [], []
                    for h, vecs in self.spaces[lev].items():
                        if h not in signs and vecs:
                            raise ValueError(f"operator undefined on V_e({h})")
                        rows.extend(vecs)
                        diag.extend([signs.get(h, 0)] * len(vecs))
                    cache[lev] = (rows, diag)
                rows, diag = cache[lev]
                keys = tensor_basis(space.factors, lev)
                target = [v.coeff(k) for k in keys]
                coeffs = linalg.solve_in_span(rows, target)
                for row, s, c in zip(rows, diag, coeffs):
                    if c:
                        for k, x in zip(keys, row):
                            if x:
                                out.iadd(Vector.basis_vector(space, k, x), s * c)
            return out

        return op

    def tau(self):
        """``+1`` on ``V_e(0) + V_e(1/2)``, ``-1`` on ``V_e(1/16)``."""
        return self._sign_op({"0": 1, "1/2": 1, "1/16": -1})

    def sigma(self):
        """``+1`` on ``V_e(0)``, ``-1`` on ``V_e(1/2)``; needs ``V_e(1/16) = 0``."""
        return self._sign_op({"0": 1, "1/2": -1})


def miyamoto_decompose(e: Vector, max_weight=DEFAULT_TENSOR_WEIGHT, require_rational=True) -> Decomposition:
    """Exact ``L^e_0`` eigenspaces on every level up to ``max_weight``.

    Eigenvalues are searched in ``{0, 1/2, 1/16} + N`` below the level; the block
    is semisimple iff the kernels found fill it.
    """
    max_weight = half(max_weight)
    if require_rational and not is_rational_cc_half(e, max(max_weight, RATIONAL_WEIGHT)):
        raise ValueError("e is not a rational conformal vector of central charge 1/2")
    dec = Decomposition(e, max_weight)
    L0 = lambda v: tensor_action(e, 1, v)  # noqa: E731
    for lev in Truncation(max_weight).levels(NS):
        n = len(tensor_basis(e.space.factors, lev))
        spaces = {h: [] for h in FRACTIONAL_PARTS.values()}
        eig = {}
        if n:
            mat = _block(L0, e.space, lev)
            for lam in _candidates(lev):
                ker = linalg.nullspace(_shifted(mat, lam), n)
                if ker:
                    eig[lam] = len(ker)
                    spaces[FRACTIONAL_PARTS[lam - (lam // 1)]].extend(ker)
        dec.spaces[lev] = spaces
        dec.eigen[lev] = eig
        dec.complete[lev] = sum(eig.values()) == n
    return dec


_H_VALUES = {"0": Fraction(0), "1/2": Fraction(1, 2), "1/16": Fraction(1, 16)}


def commutant_multiplicity(e: Vector, h, max_weight=DEFAULT_TENSOR_WEIGHT) -> dict:
    """``dim T_e(h)_n``: vectors with ``L^e_0 v = h v`` killed by ``L^e_1, L^e_2``."""
    h = _H_VALUES.get(str(h), None) if not isinstance(h, Fraction) else h
    if h not in _H_VALUES.values():
        raise ValueError("h must be one of 0, 1/2, 1/16")
    return {lev: len(b) for lev, b in commutant_basis(e, h, max_weight).items()}


def commutant_basis(e: Vector, h: Fraction, max_weight=DEFAULT_TENSOR_WEIGHT) -> dict:
    L = virasoro_modes(e)
    space = e.space
    out = {}
    for lev in Truncation(half(max_weight)).levels(NS):
        keys = tensor_basis(space.factors, lev)
        if not keys:
            out[lev] = []
            continue
        rows = _shifted(_block(lambda v: L(0, v), space, lev), h)
        for k in (1, 2):
            if lev - k < 0:
                continue
            low = tensor_basis(space.factors, lev - k)
            index = {kk: i for i, kk in enumerate(low)}
            block = [[Fraction(0)] * len(keys) for _ in low]
            for j, key in enumerate(keys):
                for k2, c in L(k, Vector.basis_vector(space, key)).terms.items():
                    block[index[k2]][j] = c
            rows.extend(block)
        out[lev] = linalg.nullspace(rows, len(keys))
    return out


def rows_to_vector(space: TensorSpace, lev, row) -> Vector:
    keys = tensor_basis(space.factors, lev)
    return Vector(space, {k: c for k, c in zip(keys, row) if c})


# --- candidate JSON -----------------------------------------------------------


def parse_candidate(text_or_obj) -> Vector:
    """``{"factors": k, "terms": [{"monomials": [[modes...], ...], "scalar": "p/q"}]}``.

    Each inner list gives the creation modes of one factor, e.g. ``["-3/2", "-1/2"]``.
    """
    from .fock import monomial_vector

    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    try:
        k = int(obj["factors"])
        space = TensorSpace(k)
        out = Vector(space)
        for term in obj["terms"]:
            monos = term["monomials"]
            if len(monos) != k:
                raise ValueError("each term needs one monomial per factor")
            c = parse_scalar(str(term.get("scalar", "1")))
            out.iadd(tensor(*(monomial_vector(NS, [half(x) for x in m]) for m in monos)), c)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed candidate: {exc}") from exc
    return out


def candidate_to_json(e: Vector) -> dict:
    terms = []
    for key, c in sorted(e.terms.items()):
        terms.append(
            {"monomials": [[str(Fraction(-d, 2)) for d in m] for m in key], "scalar": format_scalar(c)}
        )
    return {"factors": e.space.factors, "terms": terms}
