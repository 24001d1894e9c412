"""Matrices over k((t)), Smith form over k[[t]] and orbit normal forms of lattice pairs.

Two settings are covered.

* ``GL``: pairs ``(v, v*)`` with ``v`` of shape ``m x n`` and ``v*`` of shape
  ``n x m``.  A transform ``(L, R)`` with ``L`` in ``GL_m(O)`` and ``R`` in
  ``GL_n(O)`` acts by ``v -> L v R`` and ``v* -> R^-1 v* L^-1``.
* ``OSp``: a single ``2m x 2n`` matrix ``v = [[v1, v3], [v2, v4]]`` from the
  orthogonal space ``k^n + (k^n)^*`` to the symplectic space
  ``k^m + (k^m)^*``.  Its adjoint is ``v* = [[-v4^t, v3^t], [-v2^t, v1^t]]``.
  A transform ``(g, h)`` acts by ``v -> g v h^-1``; :class:`OUnitTransform`
  stores ``left = g`` and ``right = h^-1``.

All reductions work modulo ``V(O)``: entries in ``O`` carry no orbit
information and are dropped from the normal forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import IntegralityError, PrecisionError, PreconditionError, SchemaError
from .exactnum.laurent import EXACT, TruncatedLaurent
from .exactnum.rational import rat

TL = TruncatedLaurent
DEFAULT_PRECISION = 8
_ZERO = TL.zero()
_ONE = TL.const(1)


def _entry(x) -> TruncatedLaurent:
    if isinstance(x, TruncatedLaurent):
        return x
    if isinstance(x, dict):
        return TL.from_json(x)
    return TL.const(rat(x))


class FMatrix:
    """Rectangular matrix with :class:`TruncatedLaurent` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(_entry(x) for x in row) for row in entries)
        r = len(data) if rows is None else rows
        c = (len(data[0]) if data else 0) if cols is None else cols
        if len(data) != r or any(len(row) != c for row in data):
            raise PreconditionError("matrix rows have inconsistent lengths")
        self.rows, self.cols, self.entries = r, c, data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FMatrix":
        return cls([[_ZERO] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "FMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["FMatrix"]]) -> "FMatrix":
        rows = []
        for block_row in blocks:
            for i in range(block_row[0].rows):
                rows.append([x for b in block_row for x in b.entries[i]])
        return cls(rows, sum(b[0].rows for b in blocks), sum(b.cols for b in blocks[0]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> TruncatedLaurent:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[TruncatedLaurent]]:
        return [list(row) for row in self.entries]

    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        if self.cols != other.rows:
            raise PreconditionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        for row in self.entries:
            new = []
            for col in cols:
                acc = _ZERO
                for x, y in zip(row, col):
                    if x.coeffs and y.coeffs or x.prec != EXACT or y.prec != EXACT:
                        acc = acc + x * y
                new.append(acc)
            out.append(new)
        return FMatrix(out, self.rows, other.cols)

    def __add__(self, other: "FMatrix") -> "FMatrix":
        self._same_shape(other)
        return FMatrix([[x + y for x, y in zip(a, b)] for a, b in zip(self.entries, other.entries)], *self.shape)

    def __sub__(self, other: "FMatrix") -> "FMatrix":
        self._same_shape(other)
        return FMatrix([[x - y for x, y in zip(a, b)] for a, b in zip(self.entries, other.entries)], *self.shape)

    def __neg__(self) -> "FMatrix":
        return FMatrix([[-x for x in row] for row in self.entries], *self.shape)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise PreconditionError(f"shape mismatch {self.shape} vs {other.shape}")

    def scale(self, c) -> "FMatrix":
        c = _entry(c)
        return FMatrix([[c * x for x in row] for row in self.entries], *self.shape)

    def transpose(self) -> "FMatrix":
        return FMatrix([list(col) for col in zip(*self.entries)] if self.rows else [], self.cols, self.rows)

    @property
    def T(self) -> "FMatrix":
        return self.transpose()

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "FMatrix":
        return FMatrix([row[c0:c1] for row in self.entries[r0:r1]], r1 - r0, c1 - c0)

    def trace(self) -> TruncatedLaurent:
        acc = _ZERO
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    def precision(self):
        """Common (minimum) precision of the entries."""
        return min((x.prec for row in self.entries for x in row), default=EXACT)

    def min_valuation(self):
        return min((x.val for row in self.entries for x in row if x.coeffs), default=EXACT)

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self.entries for x in row)

    def polar_part(self) -> "FMatrix":
        return FMatrix([[x.polar_part() for x in row] for row in self.entries], *self.shape)

    def congruent_mod_O(self, other: "FMatrix") -> bool:
        """``self - other`` lies in ``V(O)``."""
        return (self - other).is_integral()

    def agrees_with(self, other: "FMatrix") -> bool:
        self._same_shape(other)
        return all(x.agrees_with(y) for a, b in zip(self.entries, other.entries) for x, y in zip(a, b))

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return self.entries == other.entries and self.shape == other.shape

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"FMatrix({[[str(x) for x in row] for row in self.entries]})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[x.to_json() for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data) -> "FMatrix":
        if isinstance(data, list):
            data = {"entries": data}
        if not isinstance(data, dict) or "entries" not in data:
            raise SchemaError("matrix must be an object with an 'entries' list")
        entries = data["entries"]
        if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
            raise SchemaError("'entries' must be a list of rows")
        rows = data.get("rows", len(entries))
        cols = data.get("cols", len(entries[0]) if entries else 0)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise SchemaError("declared rows/cols disagree with 'entries'")
        return cls([[TL.from_json(x) for x in row] for row in entries], rows, cols)


def laurent_det(a: FMatrix) -> TruncatedLaurent:
    """Determinant by expansion over column subsets (fine for small sizes)."""
    if a.rows != a.cols:
        raise PreconditionError("determinant of a non-square matrix")
    n = a.rows
    dp = {0: _ONE}
    for row in range(n):
        nxt: dict[int, TruncatedLaurent] = {}
        for mask, acc in dp.items():
            for col in range(n):
                if mask >> col & 1:
                    continue
                entry = a.entries[row][col]
                if entry.is_zero() and entry.prec == EXACT:
                    continue
                term = acc * entry
                if bin(mask >> (col + 1)).count("1") % 2:
                    term = -term
                key = mask | 1 << col
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, _ZERO)


@dataclass(frozen=True)
class Coweight:
    """Weakly decreasing integer vector indexing an orbit."""

    entries: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(x) for x in self.entries)
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise PreconditionError(f"coweight must be weakly decreasing, got {vals}")
        object.__setattr__(self, "entries", vals)

    @classmethod
    def from_parts(cls, a: Iterable[int], b: Iterable[int], n: int) -> "Coweight":
        """``(a_1, ..., a_r, 0, ..., 0, -b_1, ..., -b_s)`` of length ``n``."""
        a = sorted(a, reverse=True)
        b = sorted(b)
        zeros = n - len(a) - len(b)
        if zeros < 0:
            raise PreconditionError("r + s exceeds n")
        return cls(tuple(a) + (0,) * zeros + tuple(-x for x in b))

    @property
    def positive(self) -> tuple[int, ...]:
        return tuple(x for x in self.entries if x > 0)

    @property
    def negative(self) -> tuple[int, ...]:
        """The ``b_j`` (as positive integers) in increasing order."""
        return tuple(-x for x in self.entries if x < 0)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def to_json(self) -> list[int]:
        return list(self.entries)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


GL = "GL"
OSP = "OSp"


def osp_adjoint(v: FMatrix) -> FMatrix:
    """``v* = [[-v4^t, v3^t], [-v2^t, v1^t]]`` for ``v = [[v1, v3], [v2, v4]]``."""
    if v.rows % 2 or v.cols % 2:
        raise PreconditionError("OSp matrices have even dimensions")
    m, n = v.rows // 2, v.cols // 2
    v1, v3 = v.block(0, m, 0, n), v.block(0, m, n, 2 * n)
    v2, v4 = v.block(m, 2 * m, 0, n), v.block(m, 2 * m, n, 2 * n)
    return FMatrix.from_blocks([[-v4.T, v3.T], [-v2.T, v1.T]])


@dataclass(frozen=True)
class LatticePair:
    v: FMatrix
    vstar: FMatrix
    context: str = GL

    def __post_init__(self):
        if self.context not in (GL, OSP):
            raise PreconditionError(f"unknown context {self.context!r}")
        if self.vstar.shape != (self.v.cols, self.v.rows):
            raise PreconditionError(f"v* has shape {self.vstar.shape}, expected {(self.v.cols, self.v.rows)}")

    @classmethod
    def gl(cls, v, vstar) -> "LatticePair":
        v = v if isinstance(v, FMatrix) else FMatrix(v)
        vstar = vstar if isinstance(vstar, FMatrix) else FMatrix(vstar)
        return cls(v, vstar, GL)

    @classmethod
    def osp(cls, v) -> "LatticePair":
        v = v if isinstance(v, FMatrix) else FMatrix(v)
        return cls(v, osp_adjoint(v), OSP)

    @property
    def n(self) -> int:
        return self.v.cols if self.context == GL else self.v.cols // 2

    @property
    def m(self) -> int:
        return self.v.rows if self.context == GL else self.v.rows // 2

    def to_json(self) -> dict:
        if self.context == OSP:
            return {"context": "osp", "v": self.v.to_json()}
        return {"context": "gl", "v": self.v.to_json(), "vstar": self.vstar.to_json()}

    @classmethod
    def from_json(cls, data, context: str | None = None) -> "LatticePair":
        if not isinstance(data, dict) or "v" not in data:
            raise SchemaError("lattice pair must be an object with key 'v'")
        ctx = (context or data.get("context") or ("gl" if "vstar" in data else "osp")).lower()
        v = FMatrix.from_json(data["v"])
        if ctx == "osp":
            return cls.osp(v)
        if ctx != "gl":
            raise SchemaError(f"unknown context {ctx!r}")
        if "vstar" not in data:
            raise SchemaError("GL pairs need a 'vstar' matrix")
        vstar = FMatrix.from_json(data["vstar"])
        if vstar.shape != (v.cols, v.rows):
            raise SchemaError("vstar shape must be the transpose of v's shape")
        return cls(v, vstar, GL)


@dataclass(frozen=True)
class OUnitTransform:
    """``left``/``right`` with their inverses; ``v -> left @ v @ right``."""

    left: FMatrix
    right: FMatrix
    left_inv: FMatrix
    right_inv: FMatrix

    def apply(self, p: LatticePair) -> LatticePair:
        v = self.left @ p.v @ self.right
        if p.context == OSP:
            return LatticePair.osp(v)
        return LatticePair(v, self.right_inv @ p.vstar @ self.left_inv, GL)

    def apply_matrix(self, v: FMatrix) -> FMatrix:
        return self.left @ v @ self.right

    def is_valid(self) -> bool:
        """Entries in O, inverses correct, unit determinants."""
        for a, ainv in ((self.left, self.left_inv), (self.right, self.right_inv)):
            if not (a.is_integral() and ainv.is_integral()):
                return False
            if not (a @ ainv).agrees_with(FMatrix.identity(a.rows)):
                return False
            d = laurent_det(a)
            if d.is_zero() or d.val != 0:
                return False
        return True

    def compose(self, first: "OUnitTransform") -> "OUnitTransform":
        """Transform equal to applying ``first`` and then ``self``."""
        return OUnitTransform(
            self.left @ first.left,
            first.right @ self.right,
            first.left_inv @ self.left_inv,
            self.right_inv @ first.right_inv,
        )


# ---------------------------------------------------------------------------
# elementary operations with bookkeeping


def _row_axpy(mat, i, k, c):
    src = mat[k]
    mat[i] = [x + c * y if y.coeffs or y.prec != EXACT else x for x, y in zip(mat[i], src)]


def _col_axpy(mat, j, k, c):
    for row in mat:
        y = row[k]
        if y.coeffs or y.prec != EXACT:
            row[j] = row[j] + c * y


def _row_scale(mat, i, u):
    mat[i] = [u * x for x in mat[i]]


def _col_scale(mat, j, u):
    for row in mat:
        row[j] = u * row[j]


def _col_swap(mat, i, j):
    for row in mat:
        row[i], row[j] = row[j], row[i]


def _ident(n):
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


class _Tracker:
    """Working matrix ``W`` plus accumulated ``left``/``right`` and inverses.

    Row operations on ``W`` are left multiplications; the matching inverse
    column operation is applied to ``left_inv`` and to the optional follower
    ``vs`` (which transforms as ``right_inv @ vs @ left_inv``).
    """

    def __init__(self, w: FMatrix, vs: FMatrix | None = None):
        self.w = w.to_lists()
        self.p, self.q = w.rows, w.cols
        self.vs = vs.to_lists() if vs is not None else None
        self.left, self.left_inv = _ident(self.p), _ident(self.p)
        self.right, self.right_inv = _ident(self.q), _ident(self.q)

    def _followers_cols(self):
        return [self.left_inv] + ([self.vs] if self.vs is not None else [])

    def _followers_rows(self):
        return [self.right_inv] + ([self.vs] if self.vs is not None else [])

    def row_add(self, i, k, c):
        """Row ``i`` += ``c`` * row ``k``."""
        if c.is_zero() and c.prec == EXACT:
            return
        _row_axpy(self.w, i, k, c)
        _row_axpy(self.left, i, k, c)
        for mat in self._followers_cols():
            _col_axpy(mat, k, i, -c)

    def row_scale(self, i, u, uinv):
        _row_scale(self.w, i, u)
        _row_scale(self.left, i, u)
        for mat in self._followers_cols():
            _col_scale(mat, i, uinv)

    def row_swap(self, i, j):
        if i == j:
            return
        for mat in (self.w, self.left):
            mat[i], mat[j] = mat[j], mat[i]
        for mat in self._followers_cols():
            _col_swap(mat, i, j)

    def col_add(self, j, k, c):
        """Column ``j`` += ``c`` * column ``k``."""
        if c.is_zero() and c.prec == EXACT:
            return
        _col_axpy(self.w, j, k, c)
        _col_axpy(self.right, j, k, c)
        for mat in self._followers_rows():
            _row_axpy(mat, k, j, -c)

    def col_scale(self, j, u, uinv):
        _col_scale(self.w, j, u)
        _col_scale(self.right, j, u)
        for mat in self._followers_rows():
            _row_scale(mat, j, uinv)

    def col_swap(self, i, j):
        if i == j:
            return
        _col_swap(self.w, i, j)
        _col_swap(self.right, i, j)
        for mat in self._followers_rows():
            mat[i], mat[j] = mat[j], mat[i]

    def transform(self) -> OUnitTransform:
        return OUnitTransform(
            FMatrix(self.left, self.p, self.p),
            FMatrix(self.right, self.q, self.q),
            FMatrix(self.left_inv, self.p, self.p),
            FMatrix(self.right_inv, self.q, self.q),
        )

    def matrix(self) -> FMatrix:
        return FMatrix(self.w, self.p, self.q)

    def follower(self) -> FMatrix:
        return FMatrix(self.vs, self.q, self.p)


class _DirectView:
    """The tracker's working matrix (GL ``v``)."""

    def __init__(self, tr: _Tracker):
        self.tr = tr
        self.nrows, self.ncols = tr.p, tr.q

    def get(self, i, j):
        return self.tr.w[i][j]

    def add_row(self, i, k, c):
        self.tr.row_add(i, k, c)

    def add_col(self, j, k, c):
        self.tr.col_add(j, k, c)

    def scale_row(self, i, u, uinv):
        self.tr.row_scale(i, u, uinv)

    def scale_col(self, j, u, uinv):
        self.tr.col_scale(j, u, uinv)

    def swap_rows(self, i, j):
        self.tr.row_swap(i, j)

    def swap_cols(self, i, j):
        self.tr.col_swap(i, j)


class _OSpV1View:
    """Block ``v1`` of an OSp matrix, moved by ``GL_m x GL_n`` Levi elements.

    A row operation ``A`` on ``v1`` is the symplectic element
    ``diag(A, A^-t)``; a column operation ``B`` is ``diag(B, B^-t)`` on the
    orthogonal side.
    """

    def __init__(self, tr: _Tracker, m: int, n: int):
        self.tr, self.m, self.n = tr, m, n
        self.nrows, self.ncols = m, n

    def get(self, i, j):
        return self.tr.w[i][j]

    def add_row(self, i, k, c):
        self.tr.row_add(i, k, c)
        self.tr.row_add(self.m + k, self.m + i, -c)

    def add_col(self, j, k, c):
        self.tr.col_add(j, k, c)
        self.tr.col_add(self.n + k, self.n + j, -c)

    def scale_row(self, i, u, uinv):
        self.tr.row_scale(i, u, uinv)
        self.tr.row_scale(self.m + i, uinv, u)

    def scale_col(self, j, u, uinv):
        self.tr.col_scale(j, u, uinv)
        self.tr.col_scale(self.n + j, uinv, u)

    def swap_rows(self, i, j):
        self.tr.row_swap(i, j)
        self.tr.row_swap(self.m + i, self.m + j)

    def swap_cols(self, i, j):
        self.tr.col_swap(i, j)
        self.tr.col_swap(self.n + i, self.n + j)


class _DualView:
    """The partner ``v*`` of a view, moved by the contragredient operations."""

    def __init__(self, primal, getter: Callable[[int, int], TruncatedLaurent]):
        self.primal = primal
        self.getter = getter
        self.nrows, self.ncols = primal.ncols, primal.nrows

    def get(self, i, j):
        return self.getter(i, j)

    def add_row(self, i, k, c):
        self.primal.add_col(k, i, -c)

    def add_col(self, j, k, c):
        self.primal.add_row(k, j, -c)

    def scale_row(self, i, u, uinv):
        self.primal.scale_col(i, uinv, u)

    def scale_col(self, j, u, uinv):
        self.primal.scale_row(j, uinv, u)

    def swap_rows(self, i, j):
        self.primal.swap_cols(i, j)

    def swap_cols(self, i, j):
        self.primal.swap_rows(i, j)


def _select_pivot(get, rows: Iterable[int], cols: Sequence[int]):
    """Lowest-valuation entry, ties broken row-major.

    Returns ``(val, i, j)`` or ``None`` when every entry looks like zero.
    Raises :class:`PrecisionError` when an apparent zero known only to a
    negative order could hide a lower valuation.
    """
    best = None
    zmin = EXACT
    for i in rows:
        for j in cols:
            x = get(i, j)
            if x.coeffs:
                if best is None or x.val < best[0]:
                    best = (x.val, i, j)
            elif x.prec < zmin:
                zmin = x.prec
    if zmin < 0 and (best is None or zmin <= best[0]):
        raise PrecisionError(f"an entry known only modulo t^{zmin} blocks the pivot choice")
    return best


def _pivot_unit(x: TruncatedLaurent, precision: int):
    u = x.shift(-x.val)
    return u, u.invert(precision)


def _smith(view, start: int = 0, stop_nonneg: bool = False, precision: int = DEFAULT_PRECISION) -> list[int]:
    """Diagonalize ``view`` from index ``start`` on; returns the ``a_i``.

    Pivot ``k`` becomes ``t^-a_k`` at ``(k, k)`` and its row and column are
    cleared.  With ``stop_nonneg`` the loop stops once the remaining block is
    integral, which is all that matters modulo ``V(O)``.
    """
    exps: list[int] = []
    k = start
    while k < min(view.nrows, view.ncols):
        piv = _select_pivot(view.get, range(k, view.nrows), range(k, view.ncols))
        if piv is None or (stop_nonneg and piv[0] >= 0):
            break
        val, i, j = piv
        view.swap_rows(k, i)
        view.swap_cols(k, j)
        u, uinv = _pivot_unit(view.get(k, k), precision)
        view.scale_row(k, uinv, u)
        for i in range(k + 1, view.nrows):
            x = view.get(i, k)
            if x.coeffs:
                view.add_row(i, k, -x.shift(-val))
        for j in range(k + 1, view.ncols):
            x = view.get(k, j)
            if x.coeffs:
                view.add_col(j, k, -x.shift(-val))
        exps.append(-val)
        k += 1
    return exps


def smith_diagonalize(v: FMatrix, precision: int = DEFAULT_PRECISION) -> tuple[OUnitTransform, list[int]]:
    """Return ``(T, a)`` with ``T.left @ v @ T.right`` diagonal ``t^-a_i``.

    ``a`` is weakly decreasing; its length is the rank found at the available
    precision.  The remaining rows and columns are (apparent) zeros.
    """
    tr = _Tracker(v)
    exps = _smith(_DirectView(tr), precision=precision)
    return tr.transform(), exps


def check_integrality(p: LatticePair) -> bool:
    """Whether ``v* v`` and ``v v*`` both have entries in ``O``."""
    return (p.vstar @ p.v).is_integral() and (p.v @ p.vstar).is_integral()


def _require_integral(p: LatticePair):
    if not check_integrality(p):
        raise IntegralityError("v* v or v v* has an entry outside O")


def _gl_reduce(vview, vsview, precision: int) -> tuple[list[int], list[int]]:
    """Shared GL reduction on a pair of views; returns ``(a, b)``."""
    n, m = vview.ncols, vview.nrows
    a = _smith(vview, 0, stop_nonneg=True, precision=precision)
    r = len(a)
    for i in range(n):
        for j in range(m):
            if i >= r and j >= r:
                continue
            need = max(a[i] if i < r else 0, a[j] if j < r else 0)
            x = vsview.get(i, j)
            if x.coeffs:
                if x.val < need:
                    raise IntegralityError(f"v* entry ({i}, {j}) has valuation {x.val} < {need}")
            elif x.prec < 0:
                raise PrecisionError(f"v* entry ({i}, {j}) is undetermined at precision {x.prec}")
    b = _smith(vsview, r, stop_nonneg=True, precision=precision)
    # reverse the complementary block so the b's sit bottom-right, increasing
    for t in range((n - r) // 2):
        vsview.swap_rows(r + t, n - 1 - t)
    for t in range((m - r) // 2):
        vsview.swap_cols(r + t, m - 1 - t)
    return a, b


def gl_normal_form(p: LatticePair, precision: int = DEFAULT_PRECISION) -> tuple[Coweight, OUnitTransform]:
    """Orbit index of a GL pair and a transform reaching the block normal form.

    ``T.apply(p)`` agrees with :func:`gl_normal_form_pair` of the returned
    coweight modulo ``(V(O), V*(O))``.
    """
    if p.context != GL:
        raise PreconditionError("gl_normal_form needs a GL pair")
    n, m = p.n, p.m
    if n > m:
        raise PreconditionError(f"need n <= m, got n={n}, m={m}")
    _require_integral(p)
    tr = _Tracker(p.v, p.vstar)
    vview = _DirectView(tr)
    vsview = _DualView(vview, lambda i, j: tr.vs[i][j])
    a, b = _gl_reduce(vview, vsview, precision)
    return Coweight.from_parts(a, b, n), tr.transform()


def orbit_index(p: LatticePair, precision: int = DEFAULT_PRECISION) -> Coweight:
    if p.context == OSP:
        return sp_so_normal_form(p.v, precision)
    return gl_normal_form(p, precision)[0]


def gl_normal_form_pair(cw: Coweight, m: int) -> LatticePair:
    """The block normal form of a GL coweight of length ``n`` inside ``m x n``."""
    n = len(cw)
    if n > m:
        raise PreconditionError("need n <= m")
    a, b = cw.positive, cw.negative
    v = [[_ZERO] * n for _ in range(m)]
    vs = [[_ZERO] * m for _ in range(n)]
    for i, x in enumerate(a):
        v[i][i] = TL.monomial(1, -x)
    s = len(b)
    for t, x in enumerate(b):
        vs[n - s + t][m - s + t] = TL.monomial(1, -x)
    return LatticePair(FMatrix(v, m, n), FMatrix(vs, n, m), GL)


# ---------------------------------------------------------------------------
# the orthosymplectic setting


def osp_block_form(a: Sequence[int], b: Sequence[int], n: int, m: int) -> FMatrix:
    """``[[diag(t^-a), 0], [0, v4]]`` with ``diag(t^-b)`` bottom-right of ``v4``."""
    if len(a) + len(b) > n or n > m:
        raise PreconditionError("need r + s <= n <= m")
    w = [[_ZERO] * (2 * n) for _ in range(2 * m)]
    for i, x in enumerate(sorted(a, reverse=True)):
        w[i][i] = TL.monomial(1, -x)
    s = len(b)
    for t, x in enumerate(sorted(b)):
        w[2 * m - s + t][2 * n - s + t] = TL.monomial(1, -x)
    return FMatrix(w, 2 * m, 2 * n)


class _OSpOps:
    """Group generators acting on an OSp working matrix through a tracker."""

    def __init__(self, tr: _Tracker, m: int, n: int):
        self.tr, self.m, self.n = tr, m, n
        self.levi = _OSpV1View(tr, m, n)

    def sym2_lower(self, j, k, y):
        """``[[I, 0], [Y, I]]`` with ``Y_jk = Y_kj = y``: ``v2 += Y v1``."""
        self.tr.row_add(self.m + j, k, y)
        if j != k:
            self.tr.row_add(self.m + k, j, y)

    def sym2_upper(self, j, k, y):
        """``[[I, Y], [0, I]]``: ``v1 += Y v2``."""
        self.tr.row_add(j, self.m + k, y)
        if j != k:
            self.tr.row_add(k, self.m + j, y)

    def wedge2_upper(self, k, j, z):
        """``h = [[I, Z], [0, I]]`` with ``Z_kj = z = -Z_jk``; ``v3 -= v1 Z``."""
        self.tr.col_add(self.n + j, k, -z)
        self.tr.col_add(self.n + k, j, z)

    def wedge2_lower(self, k, j, z):
        """``h = [[I, 0], [Z, I]]`` with ``Z_kj = z = -Z_jk``; ``v1 -= v3 Z``."""
        self.tr.col_add(j, self.n + k, -z)
        self.tr.col_add(k, self.n + j, z)

    def weyl_orth(self, j):
        """Swap ``e_j`` and ``e_j^*`` on the orthogonal side."""
        self.tr.col_swap(j, self.n + j)

    def weyl_symp(self, i):
        """``e_i -> e_i^*``, ``e_i^* -> -e_i`` on the symplectic side."""
        self.tr.row_swap(i, self.m + i)
        self.tr.row_scale(i, TL.const(-1), TL.const(-1))


def _osp_reduce(v: FMatrix, precision: int):
    if v.rows % 2 or v.cols % 2:
        raise PreconditionError("OSp matrices have even dimensions")
    m, n = v.rows // 2, v.cols // 2
    if n > m:
        raise PreconditionError(f"need n <= m, got n={n}, m={m}")
    _require_integral(LatticePair.osp(v))
    tr = _Tracker(v)
    ops = _OSpOps(tr, m, n)
    w = tr.w
    levi = ops.levi
    a: list[int] = []
    for k in range(n):
        rows = [i for i in range(k, m)] + [m + i for i in range(k, m)]
        cols = [j for j in range(k, n)] + [n + j for j in range(k, n)]
        piv = _select_pivot(lambda i, j: w[i][j], rows, cols)
        if piv is None or piv[0] >= 0:
            break
        val, i, j = piv
        if j >= n:
            j -= n
            ops.weyl_orth(j)
        if i >= m:
            i -= m
            ops.weyl_symp(i)
        levi.swap_rows(k, i)
        levi.swap_cols(k, j)
        u, uinv = _pivot_unit(w[k][k], precision)
        levi.scale_row(k, uinv, u)
        for i in range(k + 1, m):
            x = w[i][k]
            if x.coeffs:
                levi.add_row(i, k, -x.shift(-val))
        for j in range(k + 1, n):
            x = w[k][j]
            if x.coeffs:
                levi.add_col(j, k, -x.shift(-val))
        for j in range(k + 1, n):
            x = w[k][n + j]
            if x.coeffs:
                ops.wedge2_upper(k, j, x.shift(-val))
        for j in range(k, m):
            x = w[m + j][k]
            if x.coeffs:
                ops.sym2_lower(j, k, -x.shift(-val))
        a.append(-val)
    r = len(a)
    # telescoping symmetrization of v2 and v3 over the pivot indices
    for i in range(r):
        for j in range(i, m):
            x = w[m + j][i]
            if x.coeffs:
                ops.sym2_lower(j, i, -x.shift(a[i]))
        for j in range(i + 1, n):
            x = w[i][n + j]
            if x.coeffs:
                ops.wedge2_upper(i, j, x.shift(a[i]))
    for i in range(m):
        for j in range(n):
            for x, where in ((w[m + i][j], "v2"), (w[i][n + j], "v3")):
                try:
                    ok = x.is_integral()
                except PrecisionError:
                    raise
                if not ok:
                    raise IntegralityError(f"{where} entry ({i}, {j}) stays non-integral")
    v4t = _DualView(levi, lambda i, j: w[m + j][n + i])
    a2, b = _gl_reduce(levi, v4t, precision)
    return a2, b, tr


def sp_so_reduce(v: FMatrix, precision: int = DEFAULT_PRECISION) -> tuple[Coweight, OUnitTransform, list[int], list[int]]:
    """Full OSp reduction.

    Returns the coweight, the transform ``(g, h^-1)``, and the lists ``a`` and
    ``b`` such that ``T.apply_matrix(v)`` agrees with
    :func:`osp_block_form` ``(a, b)`` modulo ``V(O)``.
    """
    a, b, tr = _osp_reduce(v, precision)
    n = v.cols // 2
    merged = sorted(list(a) + list(b), reverse=True)
    cw = Coweight(tuple(merged) + (0,) * (n - len(merged)))
    return cw, tr.transform(), a, b


def sp_so_normal_form(v: FMatrix | LatticePair, precision: int = DEFAULT_PRECISION) -> Coweight:
    """Orbit index ``(a_1, ..., a_r, 0, ..., 0)`` of an OSp matrix."""
    if isinstance(v, LatticePair):
        if v.context != OSP:
            raise PreconditionError("sp_so_normal_form needs an OSp pair")
        v = v.v
    return sp_so_reduce(v, precision)[0]


# ---------------------------------------------------------------------------
# moment map


def moment_map(p: LatticePair, g: FMatrix, side: str | None = None) -> Fraction:
    """``res omega(v, g.v)`` for a Lie algebra element ``g`` over ``O``.

    GL: ``omega((x, x*), (y, y*)) = res tr(x* y - y* x)``; ``X`` in ``gl_m``
    acts by ``(X x, -x* X)`` and ``Y`` in ``gl_n`` by ``(-x Y, Y x*)``.
    OSp: ``omega(v, w) = res tr(v* w)``; ``X`` in ``sp_2m`` acts by ``X v``
    and ``Y`` in ``so_2n`` by ``-v Y``.  ``side`` is ``"target"`` (the
    ``m`` side) or ``"source"``; by default it is read off the shape of ``g``.
    """
    if g.rows != g.cols:
        raise PreconditionError("Lie algebra element must be square")
    if not g.is_integral():
        raise PreconditionError("the Lie algebra element must have entries in O")
    tgt, src = p.v.rows, p.v.cols
    if side is None:
        side = "target" if g.rows == tgt else "source"
    if side not in ("target", "source"):
        raise PreconditionError(f"unknown side {side!r}")
    if g.rows != (tgt if side == "target" else src):
        raise PreconditionError("Lie algebra element has the wrong size")
    x, xs = p.v, p.vstar
    if p.context == GL:
        if side == "target":
            y, ys = g @ x, -(xs @ g)
        else:
            y, ys = -(x @ g), g @ xs
        value = (xs @ y).trace() - (ys @ x).trace()
    else:
        w = g @ x if side == "target" else -(x @ g)
        value = (xs @ w).trace()
    return value.residue()


# ---------------------------------------------------------------------------
# random O-unit transforms


def _rand_poly(rng: random.Random, max_deg: int = 2, bound: int = 2) -> TruncatedLaurent:
    deg = rng.randint(0, max_deg)
    return TL(0, [rng.randint(-bound, bound) for _ in range(deg + 1)])


_UNITS = (1, -1, 2, Fraction(1, 2), -2, 3)


def _rand_unit(rng: random.Random):
    c = rng.choice(_UNITS)
    return TL.const(c), TL.const(1 / Fraction(c))


def random_gl_ops(tr_view, rng: random.Random, steps: int):
    """Apply ``steps`` random elementary O-operations through a view."""
    p, q = tr_view.nrows, tr_view.ncols
    for _ in range(steps):
        kind = rng.randrange(6)
        if kind == 0 and p > 1:
            i, k = rng.sample(range(p), 2)
            tr_view.add_row(i, k, _rand_poly(rng))
        elif kind == 1 and q > 1:
            j, k = rng.sample(range(q), 2)
            tr_view.add_col(j, k, _rand_poly(rng))
        elif kind == 2:
            u, uinv = _rand_unit(rng)
            tr_view.scale_row(rng.randrange(p), u, uinv)
        elif kind == 3:
            u, uinv = _rand_unit(rng)
            tr_view.scale_col(rng.randrange(q), u, uinv)
        elif kind == 4 and p > 1:
            tr_view.swap_rows(*rng.sample(range(p), 2))
        elif kind == 5 and q > 1:
            tr_view.swap_cols(*rng.sample(range(q), 2))


def random_gl_transform(n: int, m: int, rng: random.Random, steps: int | None = None) -> OUnitTransform:
    """Random element of ``GL_m(O) x GL_n(O)`` with polynomial entries."""
    tr = _Tracker(FMatrix.zeros(m, n))
    random_gl_ops(_DirectView(tr), rng, steps if steps is not None else 3 * (n + m))
    return tr.transform()


def random_osp_transform(n: int, m: int, rng: random.Random, steps: int | None = None) -> OUnitTransform:
    """Random element of ``Sp_2m(O) x O_2n(O)`` from Sym^2, Lambda^2, Levi and Weyl generators."""
    tr = _Tracker(FMatrix.zeros(2 * m, 2 * n))
    ops = _OSpOps(tr, m, n)
    for _ in range(steps if steps is not None else 3 * (n + m)):
        kind = rng.randrange(5)
        if kind == 0:
            random_gl_ops(ops.levi, rng, 1)
        elif kind == 1:
            j, k = rng.randrange(m), rng.randrange(m)
            (ops.sym2_lower if rng.random() < 0.5 else ops.sym2_upper)(j, k, _rand_poly(rng))
        elif kind == 2 and n > 1:
            k, j = rng.sample(range(n), 2)
            (ops.wedge2_upper if rng.random() < 0.5 else ops.wedge2_lower)(k, j, _rand_poly(rng))
        elif kind == 3:
            ops.weyl_orth(rng.randrange(n))
        elif kind == 4:
            ops.weyl_symp(rng.randrange(m))
    return tr.transform()
