"""Principal sl2-triples and the slice f + z(e) inside gl_m for the pair (GL_n, GL_m)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PreconditionError, SchemaError
from .exactnum.linalg import commutator, nullspace
from .exactnum.multipoly import MultiPoly
from .exactnum.rational import rat, rat_str

LAM = "lam"


def _int_matrix(k: int) -> list[list[int]]:
    return [[0] * k for _ in range(k)]


def _bracket(a, b):
    k = len(a)
    ab = [[sum(a[i][p] * b[p][j] for p in range(k)) for j in range(k)] for i in range(k)]
    ba = [[sum(b[i][p] * a[p][j] for p in range(k)) for j in range(k)] for i in range(k)]
    return [[ab[i][j] - ba[i][j] for j in range(k)] for i in range(k)]


@dataclass(frozen=True)
class Sl2Triple:
    e: tuple[tuple[int, ...], ...]
    h: tuple[tuple[int, ...], ...]
    f: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.e)

    def check(self) -> bool:
        """``[e,f] = h``, ``[h,e] = 2e``, ``[h,f] = -2f``."""
        e, h, f = self.e, self.h, self.f
        k = self.size
        two_e = [[2 * x for x in row] for row in e]
        minus_two_f = [[-2 * x for x in row] for row in f]
        if not k:
            return True
        return (
            _bracket(e, f) == [list(r) for r in h]
            and _bracket(h, e) == two_e
            and _bracket(h, f) == minus_two_f
        )


def principal_sl2(k: int) -> Sl2Triple:
    """``e`` unit superdiagonal, ``h = diag(k-1, k-3, ..., 1-k)``, ``f_{i+1,i} = i(k-i)``."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    e, h, f = _int_matrix(k), _int_matrix(k), _int_matrix(k)
    for i in range(k - 1):
        e[i][i + 1] = 1
        f[i + 1][i] = (i + 1) * (k - i - 1)
    for i in range(k):
        h[i][i] = k - 1 - 2 * i
    freeze = lambda mat: tuple(tuple(r) for r in mat)
    return Sl2Triple(freeze(e), freeze(h), freeze(f))


def embed_lower(mat: Sequence[Sequence[int]], m: int) -> list[list[int]]:
    """Place a ``k x k`` matrix in the lower-right corner of an ``m x m`` zero matrix."""
    k = len(mat)
    out = _int_matrix(m)
    off = m - k
    for i in range(k):
        for j in range(k):
            out[off + i][off + j] = mat[i][j]
    return out


def embedded_triple(n: int, m: int) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Principal triple of ``gl_{m-n}`` inside ``gl_m`` (zero when ``m == n``)."""
    if n > m:
        raise PreconditionError("need n <= m")
    if n == m:
        z = _int_matrix(m)
        return z, [r[:] for r in z], [r[:] for r in z]
    tri = principal_sl2(m - n)
    return embed_lower(tri.e, m), embed_lower(tri.h, m), embed_lower(tri.f, m)


def centralizer_basis(e: Sequence[Sequence]) -> list[list[list[Fraction]]]:
    """Basis of ``{z : [e, z] = 0}`` from the kernel of ``z -> ez - ze``."""
    m = len(e)
    eq = []
    for i in range(m):
        for j in range(m):
            # (ez - ze)_{ij} = sum_p e_ip z_pj - z_ip e_pj
            row = [Fraction(0)] * (m * m)
            for p in range(m):
                row[p * m + j] += e[i][p]
                row[i * m + p] -= e[p][j]
            eq.append(row)
    basis = nullspace(eq, m * m)
    return [[vec[i * m:(i + 1) * m] for i in range(m)] for vec in basis]


@dataclass(frozen=True)
class SliceChart:
    """Coordinates on the slice for ``n < m``.

    ``positions`` records where each coordinate sits in the ``m x m`` matrix
    (for ``a_i`` the entry in row ``n``, the first row of the lower block).
    Indices are 0-based.
    """

    n: int
    m: int
    coords: tuple[str, ...]
    c: tuple[int, ...]
    positions: Mapping[str, tuple[int, int]] = field(compare=False)

    @property
    def k(self) -> int:
        return self.m - self.n

    @property
    def x_names(self) -> list[list[str]]:
        return [[f"x_{i + 1}_{j + 1}" for j in range(self.n)] for i in range(self.n)]

    @property
    def v_names(self) -> list[str]:
        return [f"v_{i + 1}" for i in range(self.n)]

    @property
    def vstar_names(self) -> list[str]:
        return [f"vs_{i + 1}" for i in range(self.n)]

    @property
    def a_names(self) -> list[str]:
        return [f"a_{i + 1}" for i in range(self.k)]

    @property
    def ring(self) -> tuple[str, ...]:
        """Variables of the symbolic matrix: the coordinates and ``lam``."""
        return self.coords + (LAM,)

    def symbolic_matrix(self) -> list[list[MultiPoly]]:
        gens = dict(zip(self.ring, MultiPoly.gens(self.ring)))
        return self.assemble(gens, lambda c: MultiPoly.const(self.ring, c))

    def assemble(self, values: Mapping[str, object], const=lambda c: c) -> list:
        """Fill the slice matrix from coordinate values (numbers or polynomials)."""
        n, m, k = self.n, self.m, self.k
        out = [[const(0) for _ in range(m)] for _ in range(m)]
        for i in range(n):
            for j in range(n):
                out[i][j] = values[self.x_names[i][j]]
            out[i][m - 1] = values[self.v_names[i]]
            out[n][i] = values[self.vstar_names[i]]
        for t in range(k):
            for s in range(k - t):
                out[n + s][n + s + t] = values[self.a_names[t]]
        for i, ci in enumerate(self.c):
            out[n + i + 1][n + i] = const(ci)
        return out

    def grading(self) -> dict[str, int]:
        return {name: grading_of(self, name) for name in self.coords}


def build_slice_chart(n: int, m: int) -> SliceChart:
    """Chart for ``f + z(e)``: ``n^2 + 2n + (m - n)`` coordinates."""
    if not (0 <= n < m):
        raise PreconditionError(f"need 0 <= n < m, got n={n}, m={m}")
    k = m - n
    tri = principal_sl2(k)
    c = tuple(tri.f[i + 1][i] for i in range(k - 1))
    positions: dict[str, tuple[int, int]] = {}
    coords: list[str] = []
    for i in range(n):
        for j in range(n):
            name = f"x_{i + 1}_{j + 1}"
            coords.append(name)
            positions[name] = (i, j)
    for i in range(n):
        positions[f"v_{i + 1}"] = (i, m - 1)
        coords.append(f"v_{i + 1}")
    for i in range(n):
        positions[f"vs_{i + 1}"] = (n, i)
        coords.append(f"vs_{i + 1}")
    for t in range(k):
        positions[f"a_{t + 1}"] = (n, n + t)
        coords.append(f"a_{t + 1}")
    return SliceChart(n, m, tuple(coords), c, positions)


def grading_of(chart: SliceChart, coordinate: str) -> int:
    """``2 +`` the ``ad(h)``-weight at the coordinate's matrix position."""
    if coordinate not in chart.positions:
        raise PreconditionError(f"unknown coordinate {coordinate!r}")
    _, h, _ = embedded_triple(chart.n, chart.m)
    i, j = chart.positions[coordinate]
    return 2 + h[i][i] - h[j][j]


@dataclass(frozen=True)
class SlicePoint:
    chart: SliceChart
    values: Mapping[str, Fraction] = field(compare=False)

    def __post_init__(self):
        missing = [c for c in self.chart.coords if c not in self.values]
        extra = [c for c in self.values if c not in self.chart.coords]
        if missing or extra:
            raise PreconditionError(f"slice point has missing {missing} / unknown {extra} coordinates")
        object.__setattr__(self, "values", {c: rat(self.values[c]) for c in self.chart.coords})

    def __eq__(self, other):
        if not isinstance(other, SlicePoint):
            return NotImplemented
        return self.chart == other.chart and self.values == other.values

    def __hash__(self):
        return hash((self.chart, tuple(self.values[c] for c in self.chart.coords)))

    @classmethod
    def from_parts(cls, chart: SliceChart, x, v, vstar, a) -> "SlicePoint":
        vals: dict[str, Fraction] = {}
        for i in range(chart.n):
            for j in range(chart.n):
                vals[chart.x_names[i][j]] = rat(x[i][j])
            vals[chart.v_names[i]] = rat(v[i])
            vals[chart.vstar_names[i]] = rat(vstar[i])
        for t in range(chart.k):
            vals[chart.a_names[t]] = rat(a[t])
        return cls(chart, vals)

    @classmethod
    def zero(cls, chart: SliceChart) -> "SlicePoint":
        return cls(chart, {c: Fraction(0) for c in chart.coords})

    @property
    def x(self) -> list[list[Fraction]]:
        return [[self.values[nm] for nm in row] for row in self.chart.x_names]

    @property
    def v(self) -> list[Fraction]:
        return [self.values[nm] for nm in self.chart.v_names]

    @property
    def vstar(self) -> list[Fraction]:
        return [self.values[nm] for nm in self.chart.vstar_names]

    @property
    def a(self) -> list[Fraction]:
        return [self.values[nm] for nm in self.chart.a_names]

    def matrix(self) -> list[list[Fraction]]:
        return self.chart.assemble(self.values, Fraction)

    def flat(self) -> tuple[Fraction, ...]:
        """Coordinates in the order x (row-major), a, v, v*."""
        x = [c for row in self.x for c in row]
        return tuple(x + self.a + self.v + self.vstar)

    def in_slice(self) -> bool:
        """``[e, P - f] = 0``."""
        e, _, f = embedded_triple(self.chart.n, self.chart.m)
        p = self.matrix()
        diff = [[p[i][j] - f[i][j] for j in range(len(p))] for i in range(len(p))]
        return all(x == 0 for row in commutator(e, diff) for x in row)

    def to_json(self) -> dict:
        return {
            "n": self.chart.n,
            "m": self.chart.m,
            "coordinates": {c: rat_str(self.values[c]) for c in self.chart.coords},
        }

    @classmethod
    def from_json(cls, data) -> "SlicePoint":
        try:
            chart = build_slice_chart(int(data["n"]), int(data["m"]))
            coords = data["coordinates"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError("slice point needs 'n', 'm' and 'coordinates'") from exc
        if not isinstance(coords, dict):
            raise SchemaError("'coordinates' must be an object")
        return cls(chart, {k: rat(v) for k, v in coords.items()})


def chart_summary(chart: SliceChart) -> dict:
    """Symbolic matrix (as strings) and the grading table."""
    mat = chart.assemble({c: c for c in chart.coords}, str)
    return {
        "n": chart.n,
        "m": chart.m,
        "matrix": mat,
        "structure_constants": list(chart.c),
        "grading": chart.grading(),
        "dimension": len(chart.coords),
    }


def centralizer_dimension(n: int, m: int) -> int:
    e, _, _ = embedded_triple(n, m)
    return len(centralizer_basis(e))


__all__ = [
    "SliceChart",
    "SlicePoint",
    "Sl2Triple",
    "build_slice_chart",
    "centralizer_basis",
    "centralizer_dimension",
    "chart_summary",
    "embedded_triple",
    "grading_of",
    "principal_sl2",
]
