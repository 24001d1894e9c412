"""Sparse multivariate (Laurent) polynomials over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..errors import PreconditionError
from .rational import rat


class MultiPoly:
    """Map from exponent tuples to nonzero Fractions over a fixed variable list.

    Exponents may be negative, which is how characters with negative weights
    and Laurent polynomials in ``q`` are stored.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            c = rat(c)
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def gens(cls, variables: Sequence[str]) -> tuple["MultiPoly", ...]:
        variables = tuple(variables)
        n = len(variables)
        return tuple(cls(variables, {tuple(int(i == j) for j in range(n)): 1}) for i in range(n))

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MultiPoly":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(variables, {tuple(exps): c})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise PreconditionError("polynomials live in different rings")
            return other
        return MultiPoly.const(self.variables, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = rat(other)
            return MultiPoly(self.variables, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise PreconditionError("only monomials have negative powers")
            (e, c), = self.terms.items()
            return MultiPoly(self.variables, {tuple(k * x for x in e): Fraction(1) / c ** (-k)})
        out = MultiPoly.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(self.variables, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise PreconditionError(f"unknown variable {name!r}") from None

    def degree_in(self, name: str) -> int:
        i = self.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def collect(self, name: str) -> dict[int, "MultiPoly"]:
        """Split by the power of ``name``; coefficients keep the same ring."""
        i = self.index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[e2] = c
        return {k: MultiPoly(self.variables, t) for k, t in out.items()}

    def coeff(self, name: str, power: int) -> "MultiPoly":
        return self.collect(name).get(power, MultiPoly(self.variables))

    def subs(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute numbers or same-ring polynomials for some variables."""
        idx = {self.index(k): v for k, v in values.items()}
        out = MultiPoly(self.variables)
        cache: dict[tuple[int, int], object] = {}
        for e, c in self.terms.items():
            term = MultiPoly.monomial(self.variables, [0 if i in idx else x for i, x in enumerate(e)], c)
            scalar = Fraction(1)
            for i, val in idx.items():
                k = e[i]
                if k == 0:
                    continue
                key = (i, k)
                if key not in cache:
                    cache[key] = _power(val, k)
                factor = cache[key]
                if isinstance(factor, MultiPoly):
                    term = term * factor
                else:
                    scalar *= factor
            out = out + term * scalar
        return out

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Full numeric evaluation; every variable that occurs must be given."""
        total = Fraction(0)
        order = [values.get(v) for v in self.variables]
        for e, c in self.terms.items():
            term = c
            for k, val in zip(e, order):
                if k:
                    if val is None:
                        raise PreconditionError("evaluation point misses a variable")
                    term *= Fraction(val) ** k
            total += term
        return total

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def free_variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(v for v, k in zip(self.variables, e) if k)
        return used

    def leading_term(self, names: Sequence[str]) -> tuple[tuple, "MultiPoly"]:
        """Lexicographically largest exponent in ``names`` and its coefficient.

        The coefficient is a polynomial in the remaining variables.
        """
        idx = [self.index(n) for n in names]
        lead = max(tuple(e[i] for i in idx) for e in self.terms)
        coeff = {}
        for e, c in self.terms.items():
            if tuple(e[i] for i in idx) == lead:
                e2 = list(e)
                for i in idx:
                    e2[i] = 0
                coeff[tuple(e2)] = c
        return lead, MultiPoly(self.variables, coeff)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _power(val, k: int):
    if isinstance(val, MultiPoly):
        return val ** k
    return Fraction(val) ** k


def poly_det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by expansion over row prefixes, memoised on column subsets."""
    n = len(matrix)
    if n == 0:
        raise PreconditionError("empty matrix has no ring to live in")
    variables = matrix[0][0].variables
    # dp[mask] = signed sum over injective maps of the first popcount(mask) rows
    dp: dict[int, MultiPoly] = {0: MultiPoly.const(variables, 1)}
    for row in range(n):
        nxt: dict[int, MultiPoly] = {}
        for mask, acc in dp.items():
            if acc.is_zero():
                continue
            for col in range(n):
                if mask >> col & 1:
                    continue
                entry = matrix[row][col]
                if entry.is_zero():
                    continue
                # sign = (-1)^(number of chosen columns greater than col)
                inversions = bin(mask >> (col + 1)).count("1")
                term = acc * entry
                if inversions % 2:
                    term = -term
                key = mask | 1 << col
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, MultiPoly(variables))


def poly_adjugate(matrix: Sequence[Sequence[MultiPoly]]) -> list[list[MultiPoly]]:
    n = len(matrix)
    variables = matrix[0][0].variables
    if n == 1:
        return [[MultiPoly.const(variables, 1)]]
    adj = [[MultiPoly(variables)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[matrix[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = poly_det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def elementary_symmetric(xs: Iterable[MultiPoly], k: int) -> MultiPoly:
    xs = list(xs)
    variables = xs[0].variables
    # coefficients of prod (1 + x_i z)
    e = [MultiPoly.const(variables, 1)] + [MultiPoly(variables)] * len(xs)
    for x in xs:
        for j in range(len(xs), 0, -1):
            e[j] = e[j] + e[j - 1] * x
    return e[k]
