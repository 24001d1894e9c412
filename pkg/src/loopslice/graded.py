"""Graded dimensions, Poincare series and truncated cohomology rings.

Shift convention: ``M[k]^d = M^{d+k}``, so shifting by ``k`` moves a class
from degree ``d`` to degree ``d - k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import LoopSliceError, PreconditionError
from .exactnum.linalg import rank
from .exactnum.multipoly import MultiPoly, elementary_symmetric


class GradedDims:
    """Finite map degree -> positive dimension."""

    __slots__ = ("dims",)

    def __init__(self, dims: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = dims.items() if isinstance(dims, Mapping) else dims
        out: dict[int, int] = {}
        for d, k in items:
            if k < 0:
                raise PreconditionError("graded dimensions are nonnegative")
            if k:
                out[int(d)] = out.get(int(d), 0) + int(k)
        self.dims = dict(sorted(out.items()))

    @classmethod
    def concentrated(cls, degrees: Iterable[int]) -> "GradedDims":
        out: dict[int, int] = {}
        for d in degrees:
            out[d] = out.get(d, 0) + 1
        return cls(out)

    def shift(self, k: int) -> "GradedDims":
        return GradedDims({d - k: v for d, v in self.dims.items()})

    def truncate_le(self, k: int) -> "GradedDims":
        return GradedDims({d: v for d, v in self.dims.items() if d <= k})

    def truncate_ge(self, k: int) -> "GradedDims":
        return GradedDims({d: v for d, v in self.dims.items() if d >= k})

    def __add__(self, other: "GradedDims") -> "GradedDims":
        out = dict(self.dims)
        for d, v in other.dims.items():
            out[d] = out.get(d, 0) + v
        return GradedDims(out)

    def total(self) -> int:
        return sum(self.dims.values())

    def degrees(self) -> list[int]:
        return [d for d, v in self.dims.items() for _ in range(v)]

    def __getitem__(self, d: int) -> int:
        return self.dims.get(d, 0)

    def __eq__(self, other):
        if not isinstance(other, GradedDims):
            return NotImplemented
        return self.dims == other.dims

    def __hash__(self):
        return hash(tuple(self.dims.items()))

    def __repr__(self):
        return f"GradedDims({self.dims})"

    def to_json(self) -> list[list[int]]:
        return [[d, v] for d, v in self.dims.items()]


class PoincareSeries:
    """``numerator(s) / prod_d (1 - s^d)``; the numerator may have negative powers."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Mapping[int, int], denominator: Sequence[int]):
        if any(d <= 0 for d in denominator):
            raise PreconditionError("denominator degrees must be positive")
        self.numerator = {k: v for k, v in sorted(numerator.items()) if v}
        self.denominator = tuple(sorted(denominator))

    def coefficients(self, order: int) -> dict[int, int]:
        """Expansion up to and including degree ``order``."""
        lo = min(self.numerator, default=0)
        width = order - lo + 1
        if width <= 0:
            return {}
        series = [0] * width
        for k, v in self.numerator.items():
            if k - lo < width:
                series[k - lo] += v
        for d in self.denominator:
            for i in range(d, width):
                series[i] += series[i - d]
        return {lo + i: c for i, c in enumerate(series) if c}

    def min_degree(self) -> int:
        if not self.numerator:
            raise PreconditionError("the zero series has no minimal degree")
        return min(self.numerator)

    def leading_coefficient(self) -> int:
        return self.numerator[self.min_degree()]

    def __mul__(self, other: "PoincareSeries") -> "PoincareSeries":
        num: dict[int, int] = {}
        for a, x in self.numerator.items():
            for b, y in other.numerator.items():
                num[a + b] = num.get(a + b, 0) + x * y
        return PoincareSeries(num, self.denominator + other.denominator)

    def shift(self, k: int) -> "PoincareSeries":
        return PoincareSeries({d - k: v for d, v in self.numerator.items()}, self.denominator)

    def __add__(self, other: "PoincareSeries") -> "PoincareSeries":
        """Sum over the common denominator (product of both)."""
        num: dict[int, int] = {}
        for series, extra in ((self, other.denominator), (other, self.denominator)):
            for k, v in _times_one_minus(series.numerator, extra).items():
                num[k] = num.get(k, 0) + v
        return PoincareSeries(num, self.denominator + other.denominator)

    def to_json(self) -> dict:
        return {
            "numerator": [[k, v] for k, v in self.numerator.items()],
            "denominator": list(self.denominator),
        }

    def __repr__(self):
        return f"PoincareSeries({self.numerator}, {self.denominator})"


def _times_one_minus(numerator: Mapping[int, int], degrees: Sequence[int]) -> dict[int, int]:
    """``numerator * prod_d (1 - s^d)``."""
    out = dict(numerator)
    for d in degrees:
        nxt = dict(out)
        for k, v in out.items():
            nxt[k + d] = nxt.get(k + d, 0) - v
        out = nxt
    return out


def polynomial_ring_series(degrees: Sequence[int]) -> PoincareSeries:
    return PoincareSeries({0: 1}, degrees)


@dataclass(frozen=True)
class TruncPolyRing:
    """``Q[y_1, ..., y_r] / (y_i^{b_i})`` with graded generators."""

    variables: tuple[str, ...]
    degrees: tuple[int, ...]
    bounds: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.variables) == len(self.degrees) == len(self.bounds)):
            raise PreconditionError("variables, degrees and bounds must align")

    def monomials(self) -> list[tuple[int, ...]]:
        return list(product(*(range(b) for b in self.bounds)))

    def degree_of(self, exps: Sequence[int]) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    def basis(self, degree: int) -> list[tuple[int, ...]]:
        return [e for e in self.monomials() if self.degree_of(e) == degree]

    def reduce(self, p: MultiPoly) -> MultiPoly:
        return MultiPoly(
            self.variables,
            {e: c for e, c in p.terms.items() if all(x < b for x, b in zip(e, self.bounds))},
        )

    def gen(self, name: str) -> MultiPoly:
        return MultiPoly.gens(self.variables)[self.variables.index(name)]

    def graded_dims(self) -> GradedDims:
        return GradedDims.concentrated(self.degree_of(e) for e in self.monomials())

    def top_degree(self) -> int:
        return self.degree_of([b - 1 for b in self.bounds])

    def multiplication_matrix(self, element: MultiPoly, degree: int, elem_degree: int) -> list[list[Fraction]]:
        """Matrix of ``y -> element * y`` from degree ``degree`` to ``degree + elem_degree``."""
        src = self.basis(degree)
        dst = self.basis(degree + elem_degree)
        index = {e: i for i, e in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for j, e in enumerate(src):
            prod_ = self.reduce(element * MultiPoly.monomial(self.variables, e))
            for ee, c in prod_.terms.items():
                mat[index[ee]][j] += c
        return mat

    def tensor(self, other: "TruncPolyRing") -> "TruncPolyRing":
        return TruncPolyRing(
            self.variables + other.variables,
            self.degrees + other.degrees,
            self.bounds + other.bounds,
        )


def proj_cohomology(n: int, name: str = "alpha") -> TruncPolyRing:
    """``H^*(P^{n-1}) = Q[alpha] / alpha^n`` with ``deg alpha = 2``."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    return TruncPolyRing((name,), (2,), (n,))


def cone_of_c1(n: int, m: int) -> tuple[GradedDims, GradedDims]:
    """Cokernel and kernel of multiplication by ``alpha + beta`` on ``H^*(P^{n-1} x P^{m-1})``.

    The cokernel is indexed by target degree, the kernel by source degree.
    """
    ring = proj_cohomology(n, "alpha").tensor(proj_cohomology(m, "beta"))
    c1 = ring.gen("alpha") + ring.gen("beta")
    coker: dict[int, int] = {}
    ker: dict[int, int] = {}
    top = ring.top_degree()
    for d in range(0, top + 1, 2):
        src = len(ring.basis(d))
        dst = len(ring.basis(d + 2))
        rk = rank(ring.multiplication_matrix(c1, d, 2)) if src and dst else 0
        ker[d] = src - rk
        coker[d + 2] = dst - rk
    coker[0] = len(ring.basis(0))
    return GradedDims(coker), GradedDims(ker)


def cone(n: int, m: int) -> GradedDims:
    """Cohomology of the cone: cokernel plus kernel placed one degree higher."""
    coker, ker = cone_of_c1(n, m)
    return coker + GradedDims({d + 1: v for d, v in ker.dims.items()})


def _require_lt(n: int, m: int):
    if not (1 <= n < m):
        raise PreconditionError(f"need 1 <= n < m, got n={n}, m={m}")


def stalk_ic(n: int, m: int) -> GradedDims:
    """``tau_{<= -1}`` of the cone shifted by ``[m + n - 1]``.

    Raises if it differs from either closed form,
    ``H^*(P^{n-1})[m+n-1]`` or ``tau_{<= 2n-2} H^*(P^{m-1})[m+n-1]``.
    """
    _require_lt(n, m)
    stalk = cone(n, m).shift(m + n - 1).truncate_le(-1)
    for name, form in stalk_closed_forms(n, m).items():
        if stalk != form:
            raise LoopSliceError(f"stalk {stalk} differs from closed form {name}: {form}")
    return stalk


def stalk_closed_forms(n: int, m: int) -> dict[str, GradedDims]:
    return {
        "proj_n": proj_cohomology(n).graded_dims().shift(m + n - 1),
        "truncated_proj_m": proj_cohomology(m).graded_dims().truncate_le(2 * n - 2).shift(m + n - 1),
    }


def decomposition_remainder(n: int, m: int) -> list[int]:
    """Shifts ``k`` of the summands ``C[k]`` from ``tau_{>= 2n} H^*(P^{m-1})[m+n-1]``."""
    _require_lt(n, m)
    rest = proj_cohomology(m).graded_dims().truncate_ge(2 * n).shift(m + n - 1)
    # a class in degree d is a copy of C[-d]
    return sorted((-d for d in rest.degrees()), reverse=True)


def ext_poincare(n: int, m: int) -> PoincareSeries:
    """``sum_{j<n} (A (x) A')`` shifted by ``2j + 1 - m - n``.

    ``A`` and ``A'`` are polynomial rings with generators in degrees
    ``2, 4, ..., 2m`` and ``2, 4, ..., 2n``.
    """
    _require_lt(n, m)
    numerator: dict[int, int] = {}
    for j in range(n):
        deg = -(2 * j + 1 - m - n)
        numerator[deg] = numerator.get(deg, 0) + 1
    denom = [2 * i for i in range(1, m + 1)] + [2 * i for i in range(1, n + 1)]
    return PoincareSeries(numerator, denom)


@dataclass(frozen=True)
class AlgebraCheck:
    ok: bool
    free_series: dict
    module_series: dict
    first_mismatch: int | None
    euler_ok: bool


def _series_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        if x:
            for j in range(len(a) - i):
                out[i + j] += x * b[j]
    return out


def _geometric(d: int, order: int) -> list[int]:
    return [1 if i % d == 0 else 0 for i in range(order + 1)]


def euler_expansion_holds(rank_: int) -> bool:
    """``prod (a + tau_i) = a^r + e_1 a^{r-1} + ... + e_r`` with ``e_i`` elementary symmetric."""
    names = ("a",) + tuple(f"tau_{i + 1}" for i in range(rank_))
    gens = MultiPoly.gens(names)
    a, taus = gens[0], gens[1:]
    lhs = MultiPoly.const(names, 1)
    for t in taus:
        lhs = lhs * (a + t)
    rhs = MultiPoly(names)
    for i in range(rank_ + 1):
        rhs = rhs + elementary_symmetric(taus, i) * a ** (rank_ - i)
    return lhs == rhs


def gl1_algebra_report(m: int, order: int = 30, rank_: int | None = None) -> AlgebraCheck:
    """Compare the free ring on ``a, e_1..e_{r-1}, x, y`` with ``A + sum A x^k + sum A y^k``.

    ``deg a = 2``, ``deg e_i = 2i``, ``deg x = deg y = m`` and
    ``A = Q[a, e_1, ..., e_r]``; ``r`` defaults to ``m``.
    """
    if m < 1:
        raise PreconditionError("m must be at least 1")
    r = m if rank_ is None else rank_
    one = [1] + [0] * order
    free = one
    for d in [2] + [2 * i for i in range(1, r)] + [m, m]:
        free = _series_mul(free, _geometric(d, order))
    a_ring = one
    for d in [2] + [2 * i for i in range(1, r + 1)]:
        a_ring = _series_mul(a_ring, _geometric(d, order))
    # 1 + 2 (s^m + s^2m + ...)
    powers = [0] * (order + 1)
    powers[0] = 1
    for k in range(m, order + 1, m):
        powers[k] += 2
    module = _series_mul(a_ring, powers)
    mismatch = next((i for i in range(order + 1) if free[i] != module[i]), None)
    euler = euler_expansion_holds(r)
    return AlgebraCheck(
        mismatch is None and euler,
        {i: c for i, c in enumerate(free) if c},
        {i: c for i, c in enumerate(module) if c},
        mismatch,
        euler,
    )


def gl1_algebra_check(m: int, order: int = 30, rank_: int | None = None) -> bool:
    return gl1_algebra_report(m, order, rank_).ok


def euler_elimination_holds(m: int, order: int = 30) -> bool:
    """Trading ``e_m`` for ``xy`` turns the series of ``A[x, y]/(xy - euler)`` into the free one.

    ``A[x, y] / (xy - euler)`` has series ``A(s) (1 - s^{2m}) / (1 - s^m)^2``.
    """
    one = [1] + [0] * order
    a_ring = one
    for d in [2] + [2 * i for i in range(1, m + 1)]:
        a_ring = _series_mul(a_ring, _geometric(d, order))
    quotient = _series_mul(a_ring, _geometric(m, order))
    quotient = _series_mul(quotient, _geometric(m, order))
    relation = [0] * (order + 1)
    relation[0] = 1
    if 2 * m <= order:
        relation[2 * m] = -1
    quotient = _series_mul(quotient, relation)
    free = one
    for d in [2] + [2 * i for i in range(1, m)] + [m, m]:
        free = _series_mul(free, _geometric(d, order))
    return quotient == free


def localization_hom(k: int, n: int) -> GradedDims:
    """Stored fixture: ``C[-kn]`` for ``k >= 0`` and ``C[2k - kn]`` for ``k <= 0``."""
    shift = -k * n if k >= 0 else 2 * k - k * n
    return GradedDims({-shift: 1})


def free_module_shifts(k: int, m: int) -> PoincareSeries:
    """``A[-|k| m]`` over ``A = Q[a, e_1, ..., e_m]``."""
    return polynomial_ring_series([2] + [2 * i for i in range(1, m + 1)]).shift(-abs(k) * m)
