"""The invariant map on the slice, its factorization, and fibers over three strata.

For a slice point ``P`` with blocks ``x``, ``v``, ``v*`` and band ``a`` the
characteristic polynomial factors as

    det(lam - P) = chi_x(lam) * Q(lam; a) + d_{k+1} * v* adj(lam - x) v

where ``k = m - n`` and ``Q`` is the characteristic polynomial of the lower
``k x k`` block (the Toeplitz band plus the subdiagonal constants).  ``Q`` is
monic in ``lam`` and triangular in ``a``: the coefficient of ``lam^{k-j}`` is
``(-1)^j d_j a_j`` plus a polynomial in ``a_1 .. a_{j-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import FactorizationError, LoopSliceError, PreconditionError
from .exactnum.linalg import charpoly, inverse, mat_mul, nullspace
from .exactnum.multipoly import MultiPoly, poly_adjugate, poly_det
from .exactnum.poly import Poly, discriminant, poly_divmod, rational_roots, resultant
from .exactnum.rational import rat, rat_str
from .slodowy import LAM, SliceChart, SlicePoint, build_slice_chart

GENERIC = "generic"
RESULTANT_ZERO = "resultant-zero"
DOUBLE_ROOT = "double-root"


@dataclass(frozen=True)
class InvariantPair:
    f: Poly
    g: Poly

    def __post_init__(self):
        for p in (self.f, self.g):
            if p.is_zero() or p.lc != 1:
                raise PreconditionError("invariant polynomials must be monic")

    def to_json(self) -> dict:
        return {"f": [rat_str(c) for c in self.f.coeffs], "g": [rat_str(c) for c in self.g.coeffs]}


def invariant_map(p: SlicePoint) -> InvariantPair:
    """Characteristic polynomials of ``x`` and of the whole slice matrix."""
    return InvariantPair(charpoly(p.x), charpoly(p.matrix()))


# ---------------------------------------------------------------------------
# symbolic factorization


def _lam_poly(p: MultiPoly) -> Poly:
    """Read a polynomial in ``lam`` alone as a :class:`Poly`."""
    idx = p.index(LAM)
    coeffs: dict[int, Fraction] = {}
    for e, c in p.terms.items():
        if any(x for i, x in enumerate(e) if i != idx):
            raise PreconditionError("polynomial involves more than lam")
        coeffs[e[idx]] = c
    top = max(coeffs, default=-1)
    return Poly([coeffs.get(i, 0) for i in range(top + 1)])


@dataclass(frozen=True)
class Factorization:
    chart: SliceChart
    d: tuple[Fraction, ...]
    q_band: MultiPoly = field(compare=False)
    char_poly: MultiPoly = field(compare=False)
    chi_x: MultiPoly = field(compare=False)
    pairing: MultiPoly = field(compare=False)

    def residual(self) -> MultiPoly:
        return self.char_poly - self.chi_x * self.q_band - self.pairing * self.d[-1]

    def holds(self) -> bool:
        return self.residual().is_zero()

    def q_is_linear_in_a(self) -> bool:
        a_idx = [self.q_band.index(a) for a in self.chart.a_names]
        return all(sum(e[i] for i in a_idx) <= 1 for e in self.q_band.terms)


@lru_cache(maxsize=None)
def factorization(n: int, m: int) -> Factorization:
    """Symbolic determinant of the slice matrix split into its two parts."""
    chart = build_slice_chart(n, m)
    ring = chart.ring
    gens = dict(zip(ring, MultiPoly.gens(ring)))
    lam = gens[LAM]
    sym = chart.symbolic_matrix()
    size = len(sym)
    char_mat = [[(lam if i == j else 0) - sym[i][j] for j in range(size)] for i in range(size)]
    char_poly = poly_det(char_mat)
    k = chart.k
    # q-band: characteristic polynomial of the lower block
    lower = [row[n:] for row in char_mat[n:]]
    q_band = poly_det(lower)
    if n:
        x_char = [row[:n] for row in char_mat[:n]]
        chi_x = poly_det(x_char)
        adj = poly_adjugate(x_char)
        pairing = MultiPoly(ring)
        for i in range(n):
            for j in range(n):
                pairing = pairing + gens[chart.vstar_names[i]] * adj[i][j] * gens[chart.v_names[j]]
    else:
        chi_x = MultiPoly.const(ring, 1)
        pairing = MultiPoly(ring)
    d: list[Fraction] = []
    for j in range(1, k + 1):
        coeff = q_band.coeff(LAM, k - j)
        a_mono = MultiPoly.monomial(ring, [int(nm == chart.a_names[j - 1]) for nm in ring])
        lin = next(
            (c for e, c in coeff.terms.items() if MultiPoly(ring, {e: 1}) == a_mono),
            Fraction(0),
        )
        d.append((-1) ** j * lin)
    rest = char_poly - chi_x * q_band
    if pairing.is_zero():
        if not rest.is_zero():
            raise FactorizationError("no pairing term but the identity has a remainder", rest)
        d_last = Fraction(0)
    else:
        e0, c0 = next(iter(pairing.terms.items()))
        d_last = rest.terms.get(e0, Fraction(0)) / c0
    fac = Factorization(chart, tuple(d) + (d_last,), q_band, char_poly, chi_x, pairing)
    if not fac.holds():
        raise FactorizationError("no constants make the factorization identity hold", fac.residual())
    return fac


def derive_constants(n: int, m: int) -> tuple[Fraction, ...]:
    """``(d_1, ..., d_{m-n+1})`` making the factorization identity exact."""
    if not (0 <= n < m):
        raise PreconditionError(f"need n < m, got n={n}, m={m}")
    return factorization(n, m).d


@lru_cache(maxsize=None)
def _band_poly(k: int) -> tuple[tuple[str, ...], MultiPoly]:
    """``Q(lam; a)`` for a band of size ``k`` in its own small ring."""
    chart = build_slice_chart(0, k)
    ring = tuple(chart.a_names) + (LAM,)
    gens = dict(zip(ring, MultiPoly.gens(ring)))
    lam = gens[LAM]
    vals = {nm: gens[nm] for nm in chart.a_names}
    mat = chart.assemble(vals, lambda c: MultiPoly.const(ring, c))
    lower = [[(lam if i == j else 0) - mat[i][j] for j in range(k)] for i in range(k)]
    return ring, poly_det(lower)


@lru_cache(maxsize=None)
def pairing_constant(n: int, m: int) -> Fraction:
    """``d_{m-n+1}`` from one numeric specialization (``x = 0``, ``a = 0``).

    With ``v = e_1`` and ``v* = e_1`` the identity reads
    ``det(lam - P) = lam^m + d_{k+1} lam^{n-1}``.
    """
    chart = build_slice_chart(n, m)
    vals = {c: 0 for c in chart.coords}
    vals[chart.v_names[0]] = 1
    vals[chart.vstar_names[0]] = 1
    cp = charpoly(SlicePoint(chart, vals).matrix())
    rest = cp - Poly.monomial(1, m)
    if rest.is_zero():
        raise FactorizationError("pairing term vanishes")
    if rest.degree != n - 1 or any(rest.coeff(i) for i in range(n - 1)):
        raise FactorizationError("pairing term has an unexpected shape", rest)
    return rest.coeff(n - 1)


def solve_band(q: Poly, k: int) -> list[Fraction]:
    """The ``a`` with ``Q(lam; a) = q``, solved one coefficient at a time."""
    if q.degree != k or q.lc != 1:
        raise PreconditionError(f"quotient must be monic of degree {k}")
    ring, band = _band_poly(k)
    names = ring[:-1]
    known: dict[str, Fraction] = {}
    for j in range(1, k + 1):
        coeff = band.coeff(LAM, k - j)
        if known:
            coeff = coeff.subs(known)
        name = names[j - 1]
        if coeff.degree_in(name) != 1 or coeff.free_variables() - {name}:
            raise FactorizationError(f"band coefficient of lam^{k - j} is not affine in {name}", coeff)
        slope = coeff.coeff(name, 1).constant_term()
        const = coeff.coeff(name, 0).constant_term()
        known[name] = (q.coeff(k - j) - const) / slope
    return [known[nm] for nm in names]


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class FiberDescription:
    stratum: str
    point: SlicePoint
    structure: str
    f: Poly
    g: Poly
    weights: tuple[Fraction, ...]
    special_index: int | None = None

    def flat_point(self) -> tuple[Fraction, ...]:
        return self.point.flat()

    def point_str(self) -> str:
        return "(" + ", ".join(_num_str(c) for c in self.flat_point()) + ")"

    def to_json(self) -> dict:
        p = self.point
        out = {
            "stratum": self.stratum,
            "structure": self.structure,
            "n": p.chart.n,
            "m": p.chart.m,
            "f": [rat_str(c) for c in self.f.coeffs],
            "g": [rat_str(c) for c in self.g.coeffs],
            "x": [[rat_str(c) for c in row] for row in p.x],
            "a": [rat_str(c) for c in p.a],
            "v": [rat_str(c) for c in p.v],
            "vstar": [rat_str(c) for c in p.vstar],
            "point": [rat_str(c) for c in self.flat_point()],
            "point_text": self.point_str(),
            "weights": [rat_str(c) for c in self.weights],
        }
        if self.special_index is not None:
            out["special_index"] = self.special_index
        return out


def _num_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _check_shapes(f: Poly, g: Poly) -> tuple[int, int]:
    InvariantPair(f, g)
    n, m = f.degree, g.degree
    if not (1 <= n < m):
        raise PreconditionError(f"need 1 <= deg f < deg g, got {n} and {m}")
    return n, m


def _quotient_data(f: Poly, g: Poly, n: int, m: int):
    q, r = poly_divmod(g, f)
    a = solve_band(q, m - n)
    return r, a, pairing_constant(n, m)


def _verify(point: SlicePoint, f: Poly, g: Poly):
    inv = invariant_map(point)
    if inv.f != f or inv.g != g:
        raise LoopSliceError(f"reconstructed point maps to ({inv.f}, {inv.g}), not ({f}, {g})")


def generic_fiber(f: Poly, g: Poly) -> FiberDescription:
    """Base point over ``(f, g)`` when ``f`` has distinct rational roots and ``res(f, g) != 0``."""
    n, m = _check_shapes(f, g)
    if discriminant(f) == 0:
        raise PreconditionError("f has a repeated root; use double_root_fiber")
    if resultant(f, g) == 0:
        raise PreconditionError("f and g share a root; use resultant_stratum_fiber")
    roots = _simple_rational_roots(f, n)
    r, a, d = _quotient_data(f, g, n, m)
    fp = f.derivative()
    e = tuple(r(lam) / (d * fp(lam)) for lam in roots)
    x = [[roots[i] if i == j else 0 for j in range(n)] for i in range(n)]
    point = SlicePoint.from_parts(build_slice_chart(n, m), x, [1] * n, e, a)
    _verify(point, f, g)
    return FiberDescription(GENERIC, point, "free GL_n-torsor", f, g, e)


def _simple_rational_roots(f: Poly, n: int) -> list[Fraction]:
    rr = rational_roots(f)
    if sum(k for _, k in rr) != n:
        raise PreconditionError("f does not split over the rationals")
    if any(k > 1 for _, k in rr):
        raise PreconditionError("f has a repeated root")
    return [root for root, _ in rr]


def resultant_stratum_fiber(f: Poly, g: Poly) -> FiberDescription:
    """Base family over the resultant hyperplane.

    Exactly one root ``lam_i0`` of ``f`` kills the remainder ``r``; the slot
    ``i0`` carries the pair ``(X, Y) = (v_i0, v*_i0)`` subject to ``XY = 0``.
    The returned base point takes ``X = Y = 0``.
    """
    n, m = _check_shapes(f, g)
    if discriminant(f) == 0:
        raise PreconditionError("f has a repeated root")
    if resultant(f, g) != 0:
        raise PreconditionError("resultant is nonzero; use generic_fiber")
    roots = _simple_rational_roots(f, n)
    r, a, d = _quotient_data(f, g, n, m)
    killed = [i for i, lam in enumerate(roots) if r(lam) == 0]
    if len(killed) != 1:
        raise PreconditionError(f"{len(killed)} roots of f kill the remainder; only one is supported")
    i0 = killed[0]
    fp = f.derivative()
    e = tuple(r(lam) / (d * fp(lam)) for lam in roots)
    x = [[roots[i] if i == j else 0 for j in range(n)] for i in range(n)]
    v = [0 if i == i0 else 1 for i in range(n)]
    point = SlicePoint.from_parts(build_slice_chart(n, m), x, v, e, a)
    _verify(point, f, g)
    return FiberDescription(RESULTANT_ZERO, point, "(GL_n x +)/G_m", f, g, e, i0)


def resultant_fiber_point(desc: FiberDescription, X, Y) -> SlicePoint:
    """Point of the base family with ``(v_i0, v*_i0) = (X, Y)``."""
    if desc.stratum != RESULTANT_ZERO:
        raise PreconditionError("not a resultant-stratum description")
    p = desc.point
    v, vs = list(p.v), list(p.vstar)
    v[desc.special_index], vs[desc.special_index] = rat(X), rat(Y)
    return SlicePoint.from_parts(p.chart, p.x, v, vs, p.a)


def in_fiber(point: SlicePoint, f: Poly, g: Poly) -> bool:
    inv = invariant_map(point)
    return inv.f == f and inv.g == g


def double_root_fiber(f: Poly, g: Poly) -> FiberDescription:
    """Base point when ``f`` has one double rational root and ``res(f, g) != 0``.

    ``x`` is a Jordan block at the double root followed by the simple roots,
    ``v = (0, 1, ..., 1)``, and ``v*`` comes from the partial fraction
    expansion of ``r / (d f)``.
    """
    n, m = _check_shapes(f, g)
    if resultant(f, g) == 0:
        raise PreconditionError("f and g share a root")
    rr = rational_roots(f)
    if sum(k for _, k in rr) != n:
        raise PreconditionError("f does not split over the rationals")
    doubles = [root for root, k in rr if k == 2]
    if len(doubles) != 1 or any(k > 2 for _, k in rr):
        raise PreconditionError("f must have exactly one double root and otherwise simple roots")
    lam0 = doubles[0]
    rest = [root for root, k in rr if k == 1]
    r, a, d = _quotient_data(f, g, n, m)
    p = Poly.from_roots(rest)
    pp = p.derivative()
    h0 = r(lam0) / (d * p(lam0))
    h1 = (r.derivative()(lam0) * p(lam0) - r(lam0) * pp(lam0)) / (d * p(lam0) ** 2)
    fp = f.derivative()
    tail = [r(lam) / (d * fp(lam)) for lam in rest]
    x = [[Fraction(0)] * n for _ in range(n)]
    x[0][0] = x[1][1] = lam0
    x[0][1] = Fraction(1)
    for i, lam in enumerate(rest):
        x[i + 2][i + 2] = lam
    v = [0] + [1] * (n - 1)
    vs = [h0, h1] + tail
    point = SlicePoint.from_parts(build_slice_chart(n, m), x, v, vs, a)
    _verify(point, f, g)
    return FiberDescription(DOUBLE_ROOT, point, "GL_n", f, g, tuple(vs))


def fiber(f: Poly, g: Poly) -> FiberDescription:
    """Dispatch to the stratum containing ``(f, g)``."""
    _check_shapes(f, g)
    if discriminant(f) == 0:
        return double_root_fiber(f, g)
    if resultant(f, g) == 0:
        return resultant_stratum_fiber(f, g)
    return generic_fiber(f, g)


# ---------------------------------------------------------------------------
# the GL_n action on fibers


def transport(point: SlicePoint, A: Sequence[Sequence]) -> SlicePoint:
    """``(x, v, v*, a) -> (A x A^-1, A v, v* A^-1, a)``."""
    A = [[rat(c) for c in row] for row in A]
    Ainv = inverse(A)
    x = mat_mul(mat_mul(A, point.x), Ainv)
    v = [sum((A[i][j] * point.v[j] for j in range(len(A))), Fraction(0)) for i in range(len(A))]
    vs = [sum((point.vstar[i] * Ainv[i][j] for i in range(len(A))), Fraction(0)) for j in range(len(A))]
    return SlicePoint.from_parts(point.chart, x, v, vs, point.a)


def _eigenbasis(x, roots) -> list[list[Fraction]]:
    n = len(x)
    cols = []
    for lam in roots:
        shifted = [[x[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        ker = nullspace(shifted)
        if len(ker) != 1:
            raise PreconditionError("x is not regular semisimple")
        cols.append(ker[0])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def relate_points(p1: SlicePoint, p2: SlicePoint) -> list[list[Fraction]]:
    """An invertible ``A`` with ``transport(p1, A) == p2`` (diagonalizable ``x``)."""
    if p1.chart != p2.chart:
        raise PreconditionError("points live on different charts")
    if invariant_map(p1) != invariant_map(p2):
        raise PreconditionError("points lie in different fibers")
    n = p1.chart.n
    roots = _simple_rational_roots(charpoly(p1.x), n)
    g1, g2 = _eigenbasis(p1.x, roots), _eigenbasis(p2.x, roots)
    c1 = mat_mul(inverse(g1), [[c] for c in p1.v])
    c2 = mat_mul(inverse(g2), [[c] for c in p2.v])
    diag = []
    for i in range(n):
        if c1[i][0] == 0 or c2[i][0] == 0:
            raise PreconditionError("v has a vanishing eigen-coordinate")
        diag.append(c2[i][0] / c1[i][0])
    t = [[diag[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    A = mat_mul(mat_mul(g2, t), inverse(g1))
    if transport(p1, A) != p2:
        raise LoopSliceError("no conjugation relates the two points")
    return A
