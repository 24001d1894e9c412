"""Graded restriction of GL_m representations to GL_n.

The last ``m - n`` character variables are specialized along the principal
sl2 of ``gl_{m-n}``: ``x_{n+1}, ..., x_m -> q^{k-1}, q^{k-3}, ..., q^{1-k}``.
The result is peeled into GL_n characters with Laurent polynomial
multiplicities in ``q``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import LoopSliceError, PreconditionError, SchemaError
from .exactnum.multipoly import MultiPoly

Character = dict  # exponent tuple -> int


@dataclass(frozen=True, order=True)
class DominantWeight:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise PreconditionError(f"weight {list(parts)} is not weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts: Iterable[int]) -> "DominantWeight":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "DominantWeight":
        """Accepts ``"[2,1,0]"`` or ``"2,1,0"``."""
        s = text.strip()
        if not s.startswith("["):
            s = f"[{s}]"
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"cannot parse weight {text!r}") from exc
        if not isinstance(data, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in data):
            raise SchemaError("a weight must be a list of integers")
        return cls(tuple(data))

    @property
    def rank(self) -> int:
        return len(self.parts)

    def size(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.parts) + ")"

    def to_json(self) -> list[int]:
        return list(self.parts)


def standard(m: int) -> DominantWeight:
    return DominantWeight((1,) + (0,) * (m - 1))


def trivial(n: int) -> DominantWeight:
    return DominantWeight((0,) * n)


def determinant(m: int) -> DominantWeight:
    return DominantWeight((1,) * m)


def _interlacing(lam: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    """All ``mu`` of length ``len(lam) - 1`` with ``lam_i >= mu_i >= lam_{i+1}``."""
    ranges = [range(lam[i + 1], lam[i] + 1) for i in range(len(lam) - 1)]
    return product(*ranges)


@lru_cache(maxsize=None)
def _character(lam: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    if not lam:
        return (((), 1),)
    out: dict[tuple[int, ...], int] = {}
    total = sum(lam)
    for mu in _interlacing(lam):
        last = total - sum(mu)
        for exps, c in _character(mu):
            key = exps + (last,)
            out[key] = out.get(key, 0) + c
    return tuple(sorted(out.items()))


def character_dict(weight: DominantWeight) -> Character:
    """Weight multiplicities via the Gelfand-Tsetlin branching recursion."""
    return dict(_character(weight.parts))


def variable_names(rank: int) -> tuple[str, ...]:
    return tuple(f"x_{i + 1}" for i in range(rank))


def gl_character(weight: DominantWeight | Sequence[int], rank: int | None = None) -> MultiPoly:
    """Character of the irreducible GL_rank module with highest weight ``weight``."""
    if not isinstance(weight, DominantWeight):
        weight = DominantWeight(tuple(weight))
    if rank is not None and rank != weight.rank:
        raise PreconditionError(f"weight has length {weight.rank}, expected rank {rank}")
    return MultiPoly(variable_names(weight.rank), character_dict(weight))


def sl2_exponents(k: int) -> list[int]:
    """``k-1, k-3, ..., 1-k``."""
    return [k - 1 - 2 * j for j in range(k)]


class GradedMultiplicity:
    """GL_n highest weight -> Laurent polynomial in ``q`` (stored as exponent -> coefficient)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[DominantWeight, Mapping[int, int]]):
        clean: dict[DominantWeight, dict[int, int]] = {}
        for w, poly in terms.items():
            if w.rank != n:
                raise PreconditionError(f"weight {w} does not have rank {n}")
            p = {int(e): int(c) for e, c in sorted(poly.items()) if c}
            if any(c < 0 for c in p.values()):
                raise LoopSliceError(f"negative multiplicity for {w}: {p}")
            if p:
                clean[w] = p
        self.n = n
        self.terms = dict(sorted(clean.items(), reverse=True))

    def __eq__(self, other):
        if not isinstance(other, GradedMultiplicity):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self):
        return f"GradedMultiplicity({self.n}, {self.terms})"

    def at_q_equals_one(self) -> dict[DominantWeight, int]:
        return {w: sum(p.values()) for w, p in self.terms.items()}

    def is_bar_invariant(self) -> bool:
        return all(p == {-e: c for e, c in p.items()} for p in self.terms.values())

    def character(self) -> dict[tuple[tuple[int, ...], int], int]:
        """Reassembled character as ``(x exponents, q exponent) -> coefficient``."""
        out: dict = {}
        for w, poly in self.terms.items():
            for exps, c in character_dict(w).items():
                for e, k in poly.items():
                    key = (exps, e)
                    out[key] = out.get(key, 0) + c * k
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "components": [
                {"weight": w.to_json(), "multiplicity": [[e, c] for e, c in p.items()]}
                for w, p in self.terms.items()
            ],
        }

    def __str__(self):
        def poly(p):
            return " + ".join(f"{c}*q^{e}" if c != 1 else f"q^{e}" for e, c in sorted(p.items(), reverse=True))

        return "\n".join(f"{w}: {poly(p)}" for w, p in self.terms.items())


def specialized_character(weight: DominantWeight, n: int) -> dict:
    """Character with ``x_{n+1..m}`` sent to powers of ``q``; keys ``(x exps, q exp)``."""
    m = weight.rank
    if not (0 <= n < m):
        raise PreconditionError(f"need 0 <= n < m, got n={n}, m={m}")
    shifts = sl2_exponents(m - n)
    out: dict = {}
    for exps, c in character_dict(weight).items():
        qe = sum(e * s for e, s in zip(exps[n:], shifts))
        key = (exps[:n], qe)
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def graded_restriction(weight: DominantWeight | Sequence[int], n: int) -> GradedMultiplicity:
    """Peel GL_n characters off the specialized character by lex-leading monomial."""
    if not isinstance(weight, DominantWeight):
        weight = DominantWeight(tuple(weight))
    remaining = specialized_character(weight, n)
    result: dict[DominantWeight, dict[int, int]] = {}
    while remaining:
        lead = max(exps for exps, _ in remaining)
        coeff = {qe: c for (exps, qe), c in remaining.items() if exps == lead}
        if any(c < 0 for c in coeff.values()):
            raise LoopSliceError(f"peeling produced a negative coefficient at {lead}: {coeff}")
        # the lex-leading monomial of a symmetric function is dominant
        mu = DominantWeight(lead)
        result[mu] = coeff
        for exps, c in character_dict(mu).items():
            for qe, k in coeff.items():
                key = (exps, qe)
                val = remaining.get(key, 0) - c * k
                if val:
                    remaining[key] = val
                else:
                    remaining.pop(key, None)
    out = GradedMultiplicity(n, result)
    if out.character() != specialized_character(weight, n):
        raise LoopSliceError("graded restriction does not reassemble the specialized character")
    return out


def expected_standard_restriction(m: int, n: int) -> GradedMultiplicity:
    """``std_n * 1 + trivial * (q^{k-1} + q^{k-3} + ... + q^{1-k})``, ``k = m - n``."""
    terms: dict[DominantWeight, dict[int, int]] = {}
    if n:
        terms[standard(n)] = {0: 1}
    triv = trivial(n)
    for e in sl2_exponents(m - n):
        terms.setdefault(triv, {})
        terms[triv][e] = terms[triv].get(e, 0) + 1
    return GradedMultiplicity(n, terms)


# Brute-force oracle: weight multisets from semistandard tableaux.

def _ssyt_weights(shape: Sequence[int], letters: int) -> dict[tuple[int, ...], int]:
    """Content vectors of all semistandard tableaux of a partition shape."""
    shape = [s for s in shape if s > 0]
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    out: dict[tuple[int, ...], int] = {}
    filling: dict[tuple[int, int], int] = {}

    def place(idx: int):
        if idx == len(cells):
            content = [0] * letters
            for v in filling.values():
                content[v] += 1
            key = tuple(content)
            out[key] = out.get(key, 0) + 1
            return
        r, c = cells[idx]
        lo = 0
        if c > 0:
            lo = max(lo, filling[(r, c - 1)])
        if r > 0:
            lo = max(lo, filling[(r - 1, c)] + 1)
        for v in range(lo, letters):
            filling[(r, c)] = v
            place(idx + 1)
        filling.pop((r, c), None)

    place(0)
    return out


def weight_multiset(weight: DominantWeight) -> dict[tuple[int, ...], int]:
    """Weights of the irreducible module, twisting by a power of det for negative entries."""
    shift = -min(weight.parts + (0,))
    shape = [p + shift for p in weight.parts]
    return {tuple(e - shift for e in k): v for k, v in _ssyt_weights(shape, weight.rank).items()}


def classical_branching(weight: DominantWeight, n: int) -> dict[DominantWeight, int]:
    """Ungraded restriction to GL_n from weight multisets alone."""
    remaining: dict[tuple[int, ...], int] = {}
    for k, v in weight_multiset(weight).items():
        remaining[k[:n]] = remaining.get(k[:n], 0) + v
    out: dict[DominantWeight, int] = {}
    while remaining:
        # a weight maximal in dominance order is a highest weight; pick the lex-largest dominant one
        top = max(k for k in remaining if all(a >= b for a, b in zip(k, k[1:])))
        mult = remaining[top]
        if mult < 0:
            raise LoopSliceError("weight multiset decomposition failed")
        mu = DominantWeight(top)
        out[mu] = mult
        for k, v in weight_multiset(mu).items():
            val = remaining.get(k, 0) - mult * v
            if val:
                remaining[k] = val
            else:
                remaining.pop(k, None)
    return out


__all__ = [
    "DominantWeight",
    "GradedMultiplicity",
    "character_dict",
    "classical_branching",
    "determinant",
    "expected_standard_restriction",
    "gl_character",
    "graded_restriction",
    "sl2_exponents",
    "specialized_character",
    "standard",
    "trivial",
    "weight_multiset",
]
