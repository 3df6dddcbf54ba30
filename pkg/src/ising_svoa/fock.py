"""Free-fermion Fock spaces.

Two sectors:

* NS: the space ``M`` spanned by ``psi_{-n_1} ... psi_{-n_k} |0>`` with
  ``n_1 > ... > n_k > 0`` in ``Z + 1/2``;
* R: the space ``N`` spanned by ``phi_{-n_1} ... phi_{-n_k} v_0`` with
  ``n_1 > ... > n_k >= 0`` integers, where a trailing ``0`` is one factor
  ``phi_0``.

A monomial is the tuple of *doubled* creation indices ``(2 n_1, ..., 2 n_k)``,
strictly decreasing.  The ground-state weight of the sector (0 or 1/16) is
kept on the :class:`Sector`, never on the monomial; "level" below always means
weight above the ground state.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .scalar import abs_bound, doubled, format_scalar, half


class Sector(enum.Enum):
    NS = "NS"
    R = "R"

    @property
    def offset(self) -> Fraction:
        return Fraction(0) if self is Sector.NS else Fraction(1, 16)

    def mode_ok(self, d: int) -> bool:
        """Is the doubled index ``d`` a legal mode index for this sector?"""
        return (d % 2 == 1) if self is Sector.NS else (d % 2 == 0)

    @classmethod
    def parse(cls, s) -> "Sector":
        if isinstance(s, Sector):
            return s
        key = str(s).upper()
        if key in ("NS", "M"):
            return cls.NS
        if key in ("R", "N"):
            return cls.R
        raise ValueError(f"unknown sector {s!r}")


@dataclass(frozen=True)
class Truncation:
    """Weight cutoff measured from the sector's ground state."""

    max_weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "max_weight", half(self.max_weight))

    def levels(self, sector: "Sector | None" = None) -> list[Fraction]:
        step = 1 if sector is Sector.R else Fraction(1, 2)
        out, w = [], Fraction(0)
        while w <= self.max_weight:
            out.append(w)
            w += step
        return out


Monomial = tuple  # strictly decreasing tuple of doubled creation indices


def level(mono: Monomial) -> Fraction:
    return Fraction(sum(mono), 2)


def parity(mono: Monomial) -> int:
    return len(mono) % 2


def format_monomial(sector: Sector, mono: Monomial) -> str:
    name = "psi" if sector is Sector.NS else "phi"
    ground = "|0>" if sector is Sector.NS else "v0"
    if not mono:
        return ground
    return "".join(f"{name}({Fraction(-d, 2)})" for d in mono) + ground


class Vector:
    """Finite linear combination of monomials of one space.

    ``space`` is a :class:`Sector` for single-fermion spaces or any other
    hashable tag (the tensor spaces use their own).  Zero coefficients are
    never stored.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space, terms=None):
        self.space = space
        self.terms = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    self.terms[k] = self.terms.get(k, 0) + c
            self.terms = {k: c for k, c in self.terms.items() if c}

    @classmethod
    def basis_vector(cls, space, mono, coeff=1) -> "Vector":
        v = cls(space)
        if coeff:
            v.terms[mono] = Fraction(coeff) if isinstance(coeff, int) else coeff
        return v

    def _check(self, other: "Vector"):
        if other.space != self.space:
            raise ValueError(f"space mismatch: {self.space} vs {other.space}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        out = Vector(self.space)
        out.terms = dict(self.terms)
        out.iadd(other)
        return out

    def iadd(self, other: "Vector", scale=1) -> "Vector":
        """In-place ``self += scale * other``; returns self."""
        self._check(other)
        t = self.terms
        for k, c in other.terms.items():
            n = t.get(k, 0) + scale * c
            if n:
                t[k] = n
            else:
                t.pop(k, None)
        return self

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        out = Vector(self.space)
        out.terms = dict(self.terms)
        return out.iadd(other, -1)

    def __neg__(self):
        out = Vector(self.space)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __mul__(self, c) -> "Vector":
        out = Vector(self.space)
        if c:
            out.terms = {k: c * v for k, v in self.terms.items()}
            out.terms = {k: v for k, v in out.terms.items() if v}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.space == other.space and (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Vector is mutable")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, mono):
        return self.terms.get(mono, Fraction(0))

    def copy(self) -> "Vector":
        out = Vector(self.space)
        out.terms = dict(self.terms)
        return out

    def norm(self) -> Fraction:
        """Max-abs size of the coefficients (exact, zero iff the vector is)."""
        return max((abs_bound(c) for c in self.terms.values()), default=Fraction(0))

    def levels(self) -> set:
        return {_key_level(k) for k in self.terms}

    def truncated(self, max_level) -> "tuple[Vector, bool]":
        """Drop components above ``max_level``; flag True iff nothing dropped."""
        keep = {k: c for k, c in self.terms.items() if _key_level(k) <= max_level}
        out = Vector(self.space)
        out.terms = keep
        return out, len(keep) == len(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"Vector({_space_name(self.space)}, 0)"
        parts = [
            f"({format_scalar(c)})*{_format_key(self.space, k)}"
            for k, c in sorted(self.terms.items())
        ]
        return f"Vector({_space_name(self.space)}, " + " + ".join(parts) + ")"


def _key_level(key) -> Fraction:
    if key and isinstance(key[0], tuple):
        return sum((level(m) for m in key), Fraction(0))
    return level(key)


def _space_name(space) -> str:
    return space.value if isinstance(space, Sector) else str(space)


def _format_key(space, key) -> str:
    if isinstance(space, Sector):
        return format_monomial(space, key)
    return "(" + " x ".join(format_monomial(Sector.NS, m) for m in key) + ")"


def vacuum(sector: Sector) -> Vector:
    return Vector.basis_vector(Sector.parse(sector), ())


def monomial_vector(sector, modes: Iterable = ()) -> Vector:
    """Vector for the product of creation operators with the given (negative)
    mode indices applied to the ground state, in the order written."""
    sector = Sector.parse(sector)
    v = vacuum(sector)
    for m in reversed(list(modes)):
        v = apply_mode(m, v, sector)
    return v


# --- mode action ---------------------------------------------------------


@lru_cache(maxsize=None)
def _mode_on_monomial(sector: Sector, d: int, mono: Monomial):
    """Doubled mode ``d`` applied to a monomial: returns (coeff, monomial) or None."""
    if d < 0:
        c = -d
        if c in mono:
            return None
        p = 0
        while p < len(mono) and mono[p] > c:
            p += 1
        sign = -1 if p % 2 else 1
        return Fraction(sign), mono[:p] + (c,) + mono[p:]
    if d > 0:
        if d not in mono:
            return None
        p = mono.index(d)
        sign = -1 if p % 2 else 1
        return Fraction(sign), mono[:p] + mono[p + 1 :]
    # phi_0: moves to the trailing slot; phi_0 phi_0 = 1/2
    p = len(mono) - (1 if mono and mono[-1] == 0 else 0)
    sign = -1 if p % 2 else 1
    if mono and mono[-1] == 0:
        return Fraction(sign, 2), mono[:-1]
    return Fraction(sign), mono + (0,)


def apply_mode_doubled(d: int, v: Vector) -> Vector:
    sector = v.space
    out = {}
    for mono, c in v.terms.items():
        r = _mode_on_monomial(sector, d, mono)
        if r is None:
            continue
        s, m2 = r
        n = out.get(m2, 0) + s * c
        if n:
            out[m2] = n
        else:
            out.pop(m2, None)
    w = Vector(sector)
    w.terms = out
    return w


def apply_mode(index, v: Vector, sector=None) -> Vector:
    """Apply the fermion mode ``psi_index`` (NS) or ``phi_index`` (R) to ``v``."""
    if sector is not None and Sector.parse(sector) is not v.space:
        raise ValueError("vector does not live in the requested sector")
    if not isinstance(v.space, Sector):
        raise ValueError("apply_mode acts on single-fermion sectors only")
    d = doubled(index)
    if not v.space.mode_ok(d):
        raise ValueError(f"mode {index} is not a {v.space.value} mode index")
    return apply_mode_doubled(d, v)


# --- bases ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _strict_parts(total: int, max_part: int, step_parity: int, allow_zero: bool):
    """Strictly decreasing tuples of ints of the given parity summing to total,
    every part <= max_part.  Lexicographically decreasing order."""
    out = []
    if total == 0:
        out.append(())
        if allow_zero:
            out.append((0,))
        return tuple(out)
    top = min(max_part, total)
    for p in range(top, 0, -1):
        if p % 2 != step_parity:
            continue
        for rest in _strict_parts(total - p, p - 1, step_parity, allow_zero):
            out.append((p,) + rest)
    return tuple(out)


def basis_at_level(sector: Sector, lev) -> list:
    sector = Sector.parse(sector)
    d = 2 * Fraction(lev)
    if d.denominator != 1 or d < 0:
        return []
    d = int(d)
    if sector is Sector.NS:
        return list(_strict_parts(d, d, 1, False))
    if d % 2:
        return []
    return list(_strict_parts(d, d, 0, True))


def basis(sector, weight) -> list:
    """All monomials of exactly the given (absolute) weight, lexicographic order."""
    sector = Sector.parse(sector)
    return basis_at_level(sector, Fraction(weight) - sector.offset)


def dimension(sector, weight) -> int:
    return len(basis(sector, weight))


def basis_upto(sector, max_level) -> list:
    sector = Sector.parse(sector)
    out = []
    for lev in Truncation(max_level).levels(sector):
        out.extend(basis_at_level(sector, lev))
    return out


def parity_split(sector, trunc: Truncation) -> tuple[dict, dict]:
    """Per-weight dimensions of the even and odd (monomial-length) parts."""
    sector = Sector.parse(sector)
    even, odd = {}, {}
    for lev in trunc.levels(sector):
        b = basis_at_level(sector, lev)
        w = lev + sector.offset
        even[w] = sum(1 for m in b if parity(m) == 0)
        odd[w] = sum(1 for m in b if parity(m) == 1)
    return even, odd


def graded_dims(sector, trunc: Truncation) -> dict:
    sector = Sector.parse(sector)
    return {lev + sector.offset: len(basis_at_level(sector, lev)) for lev in trunc.levels(sector)}


# --- contravariant form --------------------------------------------------


def _pair_monomials(sector: Sector, left: Monomial, right: Vector):
    """<left | right> by moving the creation modes of ``left`` across."""
    w = right
    for d in left:
        w = apply_mode_doubled(d, w)
        if w.is_zero():
            return Fraction(0)
    return w.coeff(())


def gram(u: Vector, v: Vector):
    """The symmetric contravariant form with <ground|ground> = 1."""
    if u.space is not v.space or not isinstance(u.space, Sector):
        raise ValueError("gram needs two vectors of the same sector")
    total = Fraction(0)
    for mono, c in u.terms.items():
        p = _pair_monomials(u.space, mono, v)
        if p:
            total = total + c * p
    return total


def gram_closed_form(sector: Sector, m1: Monomial, m2: Monomial) -> Fraction:
    """Diagonal closed form: 1 on NS, 1/2 for R monomials carrying phi_0."""
    if m1 != m2:
        return Fraction(0)
    if sector is Sector.R and m1 and m1[-1] == 0:
        return Fraction(1, 2)
    return Fraction(1)


# --- serialization -------------------------------------------------------


def basis_table(sector, trunc: Truncation) -> list[dict]:
    sector = Sector.parse(sector)
    rows = []
    for lev in trunc.levels(sector):
        b = basis_at_level(sector, lev)
        rows.append(
            {
                "sector": sector.value,
                "weight": str(lev + sector.offset),
                "monomials": [[str(Fraction(-d, 2)) for d in m] for m in b],
                "dims": len(b),
            }
        )
    return rows


def dumps_basis_table(sector, trunc: Truncation) -> str:
    return json.dumps(basis_table(sector, trunc), sort_keys=True)


def vector_to_json(v: Vector) -> dict:
    return {
        "space": _space_name(v.space),
        "terms": [
            [list(k) if not (k and isinstance(k[0], tuple)) else [list(m) for m in k], format_scalar(c)]
            for k, c in sorted(v.terms.items())
        ],
    }

