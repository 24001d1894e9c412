"""Exact arithmetic kernels: rationals, polynomials and truncated Laurent series."""

from .laurent import EXACT, TruncatedLaurent, t_power
from .linalg import charpoly, det, identity, inverse, mat_mul, nullspace, rank, rref, transpose
from .multipoly import MultiPoly, elementary_symmetric, poly_adjugate, poly_det
from .poly import (
    Poly,
    discriminant,
    poly_divmod,
    poly_gcd,
    rational_roots,
    resultant,
    sylvester_matrix,
)
from .rational import demote, parse_rational, rat, rat_str

__all__ = [
    "EXACT",
    "MultiPoly",
    "Poly",
    "TruncatedLaurent",
    "charpoly",
    "demote",
    "det",
    "discriminant",
    "elementary_symmetric",
    "identity",
    "inverse",
    "mat_mul",
    "nullspace",
    "parse_rational",
    "poly_adjugate",
    "poly_det",
    "poly_divmod",
    "poly_gcd",
    "rank",
    "rat",
    "rat_str",
    "rational_roots",
    "resultant",
    "rref",
    "sylvester_matrix",
    "t_power",
    "transpose",
]
