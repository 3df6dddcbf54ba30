"""Vertex operators of the Ising SVOA on M (untwisted) and on N (twisted).

Modes are indexed by ``Y(a, z) = sum_t a_t z^{-t-1}``; ``a_t`` shifts the
level by ``wt(a) - t - 1``.  On M every ``t`` is an integer; on N a state of
parity ``q`` has ``t in q/2 + Z``.

Writing ``x = psi_{-1/2}|0>`` its field is ``psi(z)`` on M (``x_t = psi_{t+1/2}``)
and ``phi(z)`` on N (``x_t = phi_{t+1/2}``).  A basis monomial with top mode
``psi_{-j+1/2}`` is ``x_{-j} b`` and its modes follow from the twisted
Borcherds identity for ``x`` (exponent ``h = 0`` on M, ``h = 1/2`` on N)::

    (x_{-j} b)_t = sum_i (-1)^i C(-j, i) [ x_{-j+h-i} b_{t-h+i}
                                         - (-1)^{p(b)+j} b_{t-j-h-i} x_{h+i} ]
                   - sum_{l>=1} C(h, l) (x_{-j+l} b)_{t-l}

which is the coefficient of ``z_0^{j-1} z_1^{h}`` in the (twisted) Jacobi
identity.  For ``h = 0`` the last sum is empty and this is the ordinary
``(-j)``-th normal product.  See ``docs/twisted_modes.md`` for the derivation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .fock import (
    Sector,
    Truncation,
    Vector,
    apply_mode_doubled,
    basis_at_level,
    basis_upto,
    gram,
    level,
    parity,
)
from .scalar import gen_binomial, half
from .virasoro import l_exact

NS, R = Sector.NS, Sector.R


def _floor(x: Fraction) -> int:
    return math.floor(x)


def _x_mode(module: Sector, t: Fraction, v: Vector) -> Vector:
    """``x_t v`` where ``x = psi_{-1/2}|0>``: the fermion mode ``t + 1/2``."""
    return apply_mode_doubled(int(2 * t) + 1, v)


def _h(module: Sector) -> Fraction:
    return Fraction(0) if module is NS else Fraction(1, 2)


@lru_cache(maxsize=None)
def _mode_mono(module: Sector, a: tuple, t: Fraction, v: tuple) -> tuple:
    """``a_t v`` for basis monomials ``a`` (in M) and ``v`` (in the module)."""
    out = _mode_mono_vec(module, a, t, Vector.basis_vector(module, v))
    return tuple(out.terms.items())


def _mode_mono_vec(module: Sector, a: tuple, t: Fraction, v: Vector) -> Vector:
    out = Vector(module)
    if not a:
        return v.copy() if t == -1 else out
    (lev_v,) = v.levels()
    wt_a = level(a)
    if lev_v + wt_a - t - 1 < 0:
        return out
    h = _h(module)
    j = (a[0] + 1) // 2
    b = a[1:]
    wt_b = level(b)
    sign_b = -1 if (parity(b) + j) % 2 else 1
    # first sum: i ranges while b_{t-h+i} v can be nonzero
    imax = _floor(lev_v + wt_b - t + h - 1)
    for i in range(0, imax + 1):
        coef = gen_binomial(-j, i) * (-1 if i % 2 else 1)
        if not coef:
            continue
        w = mode_action(module, b, t - h + i, v)
        if not w.is_zero():
            w = _x_mode(module, Fraction(-j) + h - i, w)
            out.iadd(w, coef)
    # second sum: x_{h+i} v is an annihilator, nonzero for small i only
    imax = _floor(lev_v - h - Fraction(1, 2))
    for i in range(0, imax + 1):
        coef = gen_binomial(-j, i) * (-1 if i % 2 else 1)
        if not coef:
            continue
        w = _x_mode(module, h + i, v)
        if w.is_zero():
            continue
        w = mode_action(module, b, t - j - h - i, w)
        out.iadd(w, -sign_b * coef)
    # twisted correction: states x_{-j+l} b live in M and have lower weight
    if h:
        vb = Vector.basis_vector(NS, b)
        lmax = _floor(wt_b + j - Fraction(1, 2))
        for l in range(1, lmax + 1):
            coef = gen_binomial(h, l)
            c = _x_mode(NS, Fraction(-j + l), vb)
            if c.is_zero():
                continue
            out.iadd(state_action(module, c, t - l, v), -coef)
    return out


def mode_action(module: Sector, a: tuple, t, v: Vector) -> Vector:
    """``a_t v`` for a basis monomial ``a`` of M acting on a module vector."""
    t = Fraction(t)
    out = Vector(module)
    for mono, c in v.terms.items():
        for m2, d in _mode_mono(module, a, t, mono):
            n = out.terms.get(m2, 0) + c * d
            if n:
                out.terms[m2] = n
            else:
                out.terms.pop(m2, None)
    return out


def state_action(module: Sector, a: Vector, t, v: Vector) -> Vector:
    """``a_t v`` for an arbitrary state ``a`` of M (linear in ``a``)."""
    if a.space is not NS:
        raise ValueError("states must live in the NS space M")
    out = Vector(module)
    for mono, c in a.terms.items():
        out.iadd(mode_action(module, mono, t, v), c)
    return out


def _check_index(module: Sector, par: int, t: Fraction):
    t2 = 2 * t
    if t2.denominator != 1:
        raise ValueError(f"mode index {t} is not a half-integer")
    want_half = module is R and par == 1
    if (int(t2) % 2 == 1) != want_half:
        raise ValueError(f"mode index {t} illegal for parity {par} on {module.value}")


def _homogeneous(a: Vector) -> tuple[Fraction, int]:
    ws = a.levels()
    ps = {parity(m) for m in a.terms}
    if len(ws) != 1 or len(ps) != 1:
        raise ValueError("state must be homogeneous in weight and parity")
    return ws.pop(), ps.pop()


# --- field objects --------------------------------------------------------


class Field:
    """Common interface: ``apply(t, v)``, ``weight``, ``parity``, ``module``."""

    module: Sector
    weight: Fraction
    parity: int

    def apply(self, t, v: Vector) -> Vector:  # pragma: no cover - interface
        raise NotImplementedError

    def zero_mode(self, v: Vector) -> Vector:
        return self.apply(self.weight - 1, v)

    def mode_window(self, trunc: Truncation) -> list[Fraction]:
        """Indices whose mode can act nontrivially within the truncation."""
        lo = self.weight - 1 - trunc.max_weight
        hi = self.weight - 1 + trunc.max_weight
        step = Fraction(1)
        start = Fraction(math.ceil(lo))
        if self.module is R and self.parity == 1:
            start = Fraction(math.floor(lo)) + Fraction(1, 2)
            if start < lo:
                start += 1
        out, t = [], start
        while t <= hi:
            out.append(t)
            t += step
        return out

    def matrix(self, t, lev_in) -> list[list]:
        lev_out = lev_in + self.weight - Fraction(t) - 1
        src = basis_at_level(self.module, lev_in)
        dst = basis_at_level(self.module, lev_out)
        idx = {m: i for i, m in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for jj, m in enumerate(src):
            for m2, c in self.apply(t, Vector.basis_vector(self.module, m)).terms.items():
                mat[idx[m2]][jj] = c
        return mat


@dataclass
class FieldModes(Field):
    """Modes of ``Y(a, z)`` (on M) or ``Y_N(a, z)`` (on N) for a state ``a``."""

    state: Vector
    module: Sector = NS
    weight: Fraction = field(init=False)
    parity: int = field(init=False)

    def __post_init__(self):
        if self.state.is_zero():
            self.weight, self.parity = Fraction(0), 0
        else:
            self.weight, self.parity = _homogeneous(self.state)

    @property
    def twisted(self) -> bool:
        return self.module is R

    def apply(self, t, v: Vector) -> Vector:
        t = Fraction(t)
        _check_index(self.module, self.parity, t)
        if v.space is not self.module:
            raise ValueError("vector lives in the wrong module")
        return state_action(self.module, self.state, t, v)


def vertex_modes(a: Vector, trunc: Truncation | None = None) -> FieldModes:
    """Y(a, z) on M."""
    return FieldModes(a, NS)


def twisted_vertex_modes(a: Vector, trunc: Truncation | None = None) -> FieldModes:
    """Y_N(a, z) on the Ramond space N."""
    return FieldModes(a, R)


@dataclass
class IdentityField(Field):
    module: Sector = NS
    weight: Fraction = Fraction(0)
    parity: int = 0

    def apply(self, t, v):
        return v.copy() if Fraction(t) == -1 else Vector(v.space)


@dataclass
class ProductField(Field):
    """The ``n``-th normal product ``A o_n B`` of two fields on M."""

    left: Field
    right: Field
    n: int
    module: Sector = NS
    weight: Fraction = field(init=False)
    parity: int = field(init=False)

    def __post_init__(self):
        if self.left.module is not NS or self.right.module is not NS:
            raise ValueError("normal products are implemented on M only")
        self.weight = self.left.weight + self.right.weight - self.n - 1
        self.parity = (self.left.parity + self.right.parity) % 2

    def apply(self, m, v: Vector) -> Vector:
        m = Fraction(m)
        A, B, n = self.left, self.right, self.n
        pab = A.parity * B.parity
        sign = -1 if (n + pab) % 2 else 1
        out = Vector(v.space)
        for mono, c in v.terms.items():
            u = Vector.basis_vector(v.space, mono)
            lev = level(mono)
            # B_{m+i} u vanishes once its output level is negative; same for A_i u
            i1 = _floor(lev + B.weight - m - 1)
            i2 = _floor(lev + A.weight - 1)
            for i in range(0, max(i1, i2) + 1):
                coef = gen_binomial(n, i) * (-1 if i % 2 else 1)
                if not coef:
                    continue
                if i <= i1:
                    w = B.apply(m + i, u)
                    if not w.is_zero():
                        out.iadd(A.apply(n - i, w), coef * c)
                if i <= i2:
                    w = A.apply(i, u)
                    if not w.is_zero():
                        out.iadd(B.apply(n + m - i, w), -sign * coef * c)
        return out


def borcherds_product(A: Field, B: Field, n: int) -> ProductField:
    return ProductField(A, B, n)


@dataclass
class ScaledField(Field):
    inner: Field
    factor: object
    module: Sector = field(init=False)
    weight: Fraction = field(init=False)
    parity: int = field(init=False)

    def __post_init__(self):
        self.module = self.inner.module
        self.weight = self.inner.weight
        self.parity = self.inner.parity

    def apply(self, t, v):
        return self.inner.apply(t, v) * self.factor


# --- adjoint operators ----------------------------------------------------


def adjoint_phase(h, sign: int = 1) -> int:
    """``lambda^{h - 2h^2}`` for ``lambda = exp(sign * pi i)``.

    The exponent is an integer whenever ``h`` is a half-integer, so both
    choices of ``lambda`` give the same real sign.
    """
    h = half(h)
    e = sign * (h - 2 * h * h)
    if e.denominator != 1:
        raise ValueError(f"phase for weight {h} is not real")
    return -1 if int(e) % 2 else 1


@dataclass
class AdjointField(Field):
    """Modes of ``Y(e^{z L_1} (lambda z^{-2})^{L_0} lambda^{-2 L_0^2} a, z^{-1})``::

        a*_m = (-1)^{h - 2h^2} sum_k (L_1^k a)_{2h - k - m - 2} / k!
    """

    state: Vector
    lam_sign: int = 1
    module: Sector = NS
    weight: Fraction = field(init=False)
    parity: int = field(init=False)
    _pieces: list = field(init=False, repr=False)

    def __post_init__(self):
        self.weight, self.parity = _homogeneous(self.state)
        self._pieces = []
        cur, k = self.state, 0
        while not cur.is_zero():
            self._pieces.append((k, cur * Fraction(1, math.factorial(k))))
            cur = l_exact(1, cur)
            k += 1

    def apply(self, m, v: Vector) -> Vector:
        m = Fraction(m)
        h = self.weight
        ph = adjoint_phase(h, self.lam_sign)
        out = Vector(v.space)
        for k, piece in self._pieces:
            out.iadd(state_action(NS, piece, 2 * h - k - m - 2, v), ph)
        return out


def adjoint_modes(a: Vector, trunc: Truncation | None = None, lam_sign: int = 1) -> AdjointField:
    return AdjointField(a, lam_sign)


# --- sigma conjugation ----------------------------------------------------


def sigma(a: Vector) -> Vector:
    """Canonical involution of M: -1 on odd monomials."""
    return Vector(a.space, {m: (-c if parity(m) else c) for m, c in a.terms.items()})


def sigma_conjugate(F: FieldModes) -> FieldModes:
    """``Y^sigma(a, z) = Y(sigma a, z)``."""
    return FieldModes(sigma(F.state), F.module)


# --- Jacobi identity ------------------------------------------------------


@dataclass
class JacobiResult:
    a: tuple
    b: tuple
    p: Fraction
    q: Fraction
    r: int
    variant: str
    complete: bool
    residual: Fraction | None
    checked: int = 0


def jacobi_residual(a: tuple, b: tuple, p, q, r: int, variant: str, trunc: Truncation) -> JacobiResult:
    """Mode form of the (twisted) Jacobi identity on every basis vector of
    level <= max_weight::

        sum_i (-1)^i C(r,i) (a_{p+r-i} b_{q+i} - (-1)^{r+p(a,b)} b_{q+r-i} a_{p+i})
            = sum_i C(p,i) (a_{r+i} b)_{p+q-i}

    The states ``a_{r+i} b`` must fit in the truncation; otherwise the result
    is marked incomplete and nothing is compared.
    """
    module = NS if variant in ("untwisted", "ns") else R
    variant = "untwisted" if module is NS else "twisted"
    p, q, r = Fraction(p), Fraction(q), int(r)
    pa, pb = parity(a), parity(b)
    _check_index(module, pa, p)
    _check_index(module, pb, q)
    wa, wb = level(a), level(b)
    if wa + wb - r - 1 > trunc.max_weight:
        return JacobiResult(a, b, p, q, r, variant, False, None)
    A = Vector.basis_vector(NS, a)
    B = Vector.basis_vector(NS, b)
    sign = -1 if (r + pa * pb) % 2 else 1
    # states a_{r+i} b, i >= 0, until they vanish
    states = []
    i = 0
    while wa + wb - (r + i) - 1 >= 0:
        states.append(state_action(NS, A, r + i, B))
        i += 1
    worst = Fraction(0)
    checked = 0
    for lev in trunc.levels(module):
        for mono in basis_at_level(module, lev):
            v = Vector.basis_vector(module, mono)
            lhs = Vector(module)
            imax = max(_floor(lev + wb - q - 1), _floor(lev + wa - p - 1), -1)
            for i in range(imax + 1):
                coef = gen_binomial(r, i) * (-1 if i % 2 else 1)
                if not coef:
                    continue
                w = mode_action(module, b, q + i, v)
                if not w.is_zero():
                    lhs.iadd(mode_action(module, a, p + r - i, w), coef)
                w = mode_action(module, a, p + i, v)
                if not w.is_zero():
                    lhs.iadd(mode_action(module, b, q + r - i, w), -sign * coef)
            rhs = Vector(module)
            for i, st in enumerate(states):
                if st.is_zero():
                    continue
                coef = gen_binomial(p, i)
                rhs.iadd(state_action(module, st, p + q - i, v), coef)
            worst = max(worst, (lhs - rhs).norm())
            checked += 1
    return JacobiResult(a, b, p, q, r, variant, True, worst, checked)


def skew_symmetry_residual(a: tuple, b: tuple, n: int) -> Fraction:
    """``a_n b - (-1)^{p(a,b)} sum_k (-1)^{n+k+1} L_{-1}^k b_{n+k} a / k!`` on M."""
    A = Vector.basis_vector(NS, a)
    B = Vector.basis_vector(NS, b)
    lhs = state_action(NS, A, n, B)
    rhs = Vector(NS)
    sgn = -1 if parity(a) * parity(b) else 1
    k = 0
    while level(a) + level(b) - (n + k) - 1 >= 0:
        w = state_action(NS, B, n + k, A)
        for _ in range(k):
            w = l_exact(-1, w)
        s = -1 if (n + k + 1) % 2 else 1
        rhs.iadd(w, Fraction(sgn * s, math.factorial(k)))
        k += 1
    return (lhs - rhs).norm()


def invariance_residual(a: Vector, u: Vector, v: Vector, m, lam_sign: int = 1) -> Fraction:
    """``<a_m u, v> - <u, a*_m v>``."""
    lhs = gram(state_action(NS, a, m, u), v)
    rhs = gram(u, AdjointField(a, lam_sign).apply(m, v))
    d = lhs - rhs
    return abs(d) if not hasattr(d, "sq") else max(abs(d.rat), abs(d.sq))


def top_level_action(a: Vector, w: Vector) -> Vector:
    """The zero mode ``o(a) = a_{wt(a)-1}`` of ``Y_N(a, z)`` on ``w``."""
    F = twisted_vertex_modes(a)
    return F.zero_mode(w)


def sample_jacobi(variant: str, trunc: Truncation, samples: int, seed: int = 0, max_state_weight=3):
    """Random ``(a, b, p, q, r)`` within the safe window, each checked exactly.

    States are basis monomials of M of weight <= ``max_state_weight``; ``p``,
    ``q`` respect the index parity of the module and ``r`` is drawn from
    ``[-3, 2]``.  Draws whose auxiliary states would exceed the truncation
    are skipped, so every returned result is complete.
    """
    module = NS if variant in ("untwisted", "ns") else R
    rng = random.Random(seed)
    states = [m for m in basis_upto(NS, half(max_state_weight)) if m]
    out = []
    while len(out) < samples:
        a, b = rng.choice(states), rng.choice(states)
        r = rng.randint(-3, 2)
        p = Fraction(rng.randint(-3, 3))
        q = Fraction(rng.randint(-3, 3))
        if module is R:
            p += Fraction(parity(a), 2)
            q += Fraction(parity(b), 2)
        res = jacobi_residual(a, b, p, q, r, variant, trunc)
        if res.complete:
            out.append(res)
    return out
