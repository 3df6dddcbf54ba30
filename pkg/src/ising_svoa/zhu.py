"""Zhu algebras A(V) and A_t(V) of the Ising SVOA V = M, bimodule products
and fusion dimensions for the twisted top levels.

All products are residues ``Res_z Y(a, z) (1+z)^e / z^k b``, which expand to
``sum_j C(e, j) a_{j-k} b`` and terminate because ``a_n b = 0`` for large n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import linalg
from .fields import state_action, twisted_vertex_modes
from .fock import Sector, Vector, apply_mode_doubled, basis_upto, level, parity
from .scalar import INV_SQRT2, gen_binomial
from .virasoro import v_minus, v_plus

NS = Sector.NS

VACUUM = Vector.basis_vector(NS, ())
X = Vector.basis_vector(NS, (1,))
OMEGA = Vector.basis_vector(NS, (3, 1), Fraction(1, 2))


def _homogeneous(a: Vector) -> tuple[Fraction, int]:
    ws = a.levels()
    ps = {parity(m) for m in a.terms}
    if len(ws) != 1 or len(ps) != 1:
        raise ValueError("Zhu products need a state homogeneous in weight and parity")
    return ws.pop(), ps.pop()


def residue(a: Vector, b: Vector, exponent, pole: int) -> Vector:
    """``Res_z Y(a, z) (1+z)^exponent z^{-pole} b``."""
    wa, _ = _homogeneous(a)
    wb = max(b.levels()) if b else Fraction(0)
    out = Vector(NS)
    j = 0
    # a_{j-pole} b vanishes once wt(a) + wt(b) - (j - pole) - 1 < 0
    while wa + wb - (j - pole) - 1 >= 0:
        c = gen_binomial(exponent, j)
        if c:
            out.iadd(state_action(NS, a, j - pole, b), c)
        j += 1
    return out


def _split(fn):
    """Extend a product to inhomogeneous first arguments by linearity."""

    def wrapped(a: Vector, b: Vector) -> Vector:
        groups: dict = {}
        for m, c in a.terms.items():
            groups.setdefault((level(m), parity(m)), {})[m] = c
        out = Vector(NS)
        for terms in groups.values():
            out.iadd(fn(Vector(NS, terms), b))
        return out

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_split
def star(a: Vector, b: Vector) -> Vector:
    """Kac-Wang ``a * b``: zero for odd ``a``."""
    w, p = _homogeneous(a)
    if p:
        return Vector(NS)
    return residue(a, b, w, 1)


@_split
def circ(a: Vector, b: Vector) -> Vector:
    """Kac-Wang ``a o b``."""
    w, p = _homogeneous(a)
    if p:
        return residue(a, b, w - Fraction(1, 2), 1)
    return residue(a, b, w, 2)


@_split
def star_t(a: Vector, b: Vector) -> Vector:
    w, _ = _homogeneous(a)
    return residue(a, b, w, 1)


@_split
def circ_t(a: Vector, b: Vector) -> Vector:
    w, _ = _homogeneous(a)
    return residue(a, b, w, 2)


# --- reductions -----------------------------------------------------------


def reduce_t(v: Vector) -> tuple:
    """Coordinates of ``v + O_t(V)`` on ``(iota(1), iota(psi_{-1/2}1))``.

    A monomial with top mode ``psi_{-n+1/2}``, ``n >= 2``, is rewritten with
    ``Res psi(z) (1+z)^{1/2} z^{-n} u in O_t(V)``::

        psi_{-n+1/2} u == - sum_{i>=1} C(1/2, i) psi_{-n+i+1/2} u

    Every term on the right has a strictly smaller top mode, so the loop ends
    on multiples of the vacuum and of ``psi_{-1/2}1``.
    """
    work = dict(v.terms)
    c_vac, c_x = Fraction(0), Fraction(0)
    while work:
        mono = max(work)  # lexicographically largest monomial first
        c = work.pop(mono)
        if mono == ():
            c_vac += c
            continue
        if mono == (1,):
            c_x += c
            continue
        top, rest = mono[0], mono[1:]
        n = (top + 1) // 2
        u = Vector.basis_vector(NS, rest)
        i = 1
        while -n + i + Fraction(1, 2) <= level(rest):
            w = apply_mode_doubled(2 * (-n + i) + 1, u)
            coef = gen_binomial(Fraction(1, 2), i)
            for m2, d in w.terms.items():
                x = work.get(m2, 0) - c * coef * d
                if x:
                    work[m2] = x
                else:
                    work.pop(m2, None)
            i += 1
    return (c_vac, c_x)


def reduce_untwisted(v: Vector):
    """Coordinate of ``v + O(V)`` on ``iota(1)``.

    ``psi_{-k-1/2} u = (psi_{-k-1/2}1) o u`` for every ``u`` (see
    :func:`untwisted_witness`), so everything except the vacuum lies in O(V).
    """
    return v.coeff(())


def untwisted_witness(mono: tuple) -> tuple[Vector, Vector]:
    """``(a, u)`` with ``a o u`` equal to the monomial (which must be non-empty)."""
    if not mono:
        raise ValueError("the vacuum is not in O(V)")
    return Vector.basis_vector(NS, mono[:1]), Vector.basis_vector(NS, mono[1:])


# --- span cross-checks ----------------------------------------------------


@dataclass
class Membership:
    member: bool | None  # None: bound too small to decide
    witness: list = field(default_factory=list)  # [(a, b, coeff)]
    certificate: str = ""


def span_generators(product_fn, bound) -> list:
    """All ``product_fn(a, b)`` for basis ``a, b`` with ``wt a + wt b <= bound``."""
    gens = []
    states = basis_upto(NS, bound)
    for a, b in product(states, states):
        if level(a) + level(b) > bound:
            continue
        w = product_fn(Vector.basis_vector(NS, a), Vector.basis_vector(NS, b))
        if not w.is_zero():
            gens.append(((a, b), w))
    return gens


def _membership(v: Vector, gens, bound, characters) -> Membership:
    keys = sorted({m for _, w in gens for m in w.terms} | set(v.terms))
    cols = [[w.coeff(k) for k in keys] for _, w in gens]
    sol = linalg.solve_in_span(cols, [v.coeff(k) for k in keys])
    if sol is not None:
        wit = [(ab[0], ab[1], c) for (ab, _), c in zip(gens, sol) if c]
        return Membership(True, wit, f"span of products with wt a + wt b <= {bound}")
    for name, chi in characters:
        if chi(v):
            return Membership(False, [], f"{name} is nonzero, and it vanishes on the ideal")
    return Membership(None, [], f"not in span at bound {bound}; no separating functional")


def chi_twisted(sign: int):
    """Top-level character of [1/16]^+- : the eigenvalue of ``o(v)`` on ``v^+-``."""
    top = v_plus() if sign > 0 else v_minus()

    def chi(v: Vector):
        out = Fraction(0)
        for m, c in v.terms.items():
            w = twisted_vertex_modes(Vector.basis_vector(NS, m)).zero_mode(top)
            # top level is one-dimensional: read the eigenvalue off the v_0 slot
            out = out + c * _ratio(w, top)
        return out

    return chi


def _ratio(w: Vector, top: Vector):
    if w.is_zero():
        return Fraction(0)
    k = next(iter(top.terms))
    lam = w.coeff(k) / top.coeff(k)
    assert w == top * lam, "top level is not preserved"
    return lam


def o_t_membership(v: Vector, bound=6, gens=None) -> Membership:
    """Exact test of ``v`` in span{a o_t b : wt a + wt b <= bound}."""
    if gens is None:
        gens = span_generators(circ_t, bound)
    return _membership(v, gens, bound, [("chi+", chi_twisted(1)), ("chi-", chi_twisted(-1))])


def o_membership(v: Vector, bound=6, gens=None) -> Membership:
    if gens is None:
        gens = span_generators(circ, bound)
    return _membership(v, gens, bound, [("chi", chi_untwisted)])


def chi_untwisted(v: Vector):
    """Action of ``o(v)`` on the top level C1 of M (odd states act by 0)."""
    out = Fraction(0)
    for m, c in v.terms.items():
        if parity(m):
            continue
        a = Vector.basis_vector(NS, m)
        w = state_action(NS, a, level(m) - 1, VACUUM)
        out += c * w.coeff(())
    return out


def generalized_o_t(a: Vector, b: Vector, m: int) -> Vector:
    """``Res Y(a,z) (1+z)^{wt a} z^{-2-m} b``, in O_t(V) for m >= 0."""
    w, _ = _homogeneous(a)
    return residue(a, b, w, 2 + m)


# --- the twisted Zhu algebra ---------------------------------------------


@dataclass
class ZhuTable:
    dim: int
    basis: list
    table: dict
    minimal_poly: str
    characters: list  # eigenvalue of iota(x) on each simple module
    spanning_set: int


def algebra_table_t() -> ZhuTable:
    """Multiplication table of A_t(V) on ``(1, x)``, ``x = iota(psi_{-1/2}1)``."""
    gens = {"1": VACUUM, "x": X}
    table = {}
    for (na, a), (nb, b) in product(gens.items(), gens.items()):
        table[f"{na}*{nb}"] = reduce_t(star_t(a, b))
    # x^2 = s * 1 + t * x: minimal polynomial t^2 - t*T - s
    s, tt = table["x*x"]
    # lower bound on dim from the two top-level characters
    chis = [chi_twisted(1), chi_twisted(-1)]
    m = [[chi(g) for g in gens.values()] for chi in chis]
    dim = linalg.rank(m)
    if dim == 2 and tt == 0 and s:
        poly = f"t^2-{s}" if s > 0 else f"t^2+{-s}"
    else:
        poly = _poly_text(s, tt)
    roots = [chi(X) for chi in chis]
    return ZhuTable(dim, ["1", "x"], table, poly, roots, len(gens))


def _poly_text(s, t) -> str:
    return f"t^2-({t})*t-({s})"


def minimal_poly_check(table: ZhuTable) -> bool:
    """Each character value r satisfies r^2 = x*x coefficient (exact)."""
    s, t = table.table["x*x"]
    return all(r * r == s + t * r for r in table.characters)


# --- bimodule products ----------------------------------------------------


def bimodule_product(a: Vector, u: Vector, which: str) -> Vector:
    """Products of the (twisted) Frenkel-Zhu bimodule on U = M."""
    w, p = _homogeneous(a)
    if which == "circ":
        return residue(a, u, w - Fraction(p, 2), 2 - p)
    if which == "star_left":
        return Vector(NS) if p else residue(a, u, w, 1)
    if which == "star_right":
        return Vector(NS) if p else residue(a, u, w - 1, 1)
    if which == "circ_t":
        return residue(a, u, w, 2)
    if which == "star_t_left":
        return residue(a, u, w, 1)
    if which == "star_t_right":
        out = Vector(NS)
        for m, c in u.terms.items():
            s = -1 if p * parity(m) else 1
            out.iadd(residue(a, Vector.basis_vector(NS, m), w - 1, 1), s * c)
        return out
    raise ValueError(f"unknown product {which!r}")


bimodule_products = bimodule_product


def _action_matrix(a: Vector, which: str) -> list[list]:
    """Matrix of ``u -> a . u`` on A_t(U) = (iota(1), iota(x)), columns = inputs."""
    cols = [reduce_t(bimodule_product(a, g, which)) for g in (VACUUM, X)]
    return [[cols[j][i] for j in range(2)] for i in range(2)]


def fusion_dim(eps: int, delta: int) -> int:
    """dim Hom_{A_t}(A_t(M) (x)_{A_t} W1(0), W2(0)) with W1 = [1/16]^eps,
    W2 = [1/16]^delta.

    A functional ``f`` on A_t(M) gives a hom iff it kills
    ``(R(x) - eps/sqrt2) A_t(M)`` (the balancing relations of the tensor
    product) and intertwines the left action: ``f L(x) = delta/sqrt2 f``.
    """
    left = _action_matrix(X, "star_t_left")
    right = _action_matrix(X, "star_t_right")
    e = INV_SQRT2 * eps
    d = INV_SQRT2 * delta
    rows = []
    for M, lam in ((right, e), (left, d)):
        # f (M - lam) = 0  <=>  (M - lam)^T f = 0
        for j in range(2):
            rows.append([M[i][j] - (lam if i == j else 0) for i in range(2)])
    return len(linalg.nullspace(rows, 2))


def fusion_matrix() -> list[list[int]]:
    return [[fusion_dim(e, d) for d in (1, -1)] for e in (1, -1)]


def _quotient_dim(product_fn, bound) -> int:
    """dim V_{<=bound} modulo the span of the products that land in V_{<=bound}.

    This bounds the Zhu algebra from above: the span lies inside the ideal.
    """
    bound = Fraction(bound)
    gens = [w for _, w in span_generators(product_fn, bound) if max(w.levels()) <= bound]
    keys = basis_upto(NS, bound)
    rows = [[w.coeff(k) for k in keys] for w in gens]
    return len(keys) - linalg.rank(rows)


def untwisted_dim(bound=6) -> int:
    return _quotient_dim(circ, bound)


def twisted_quotient_dim(bound=6) -> int:
    return _quotient_dim(circ_t, bound)
