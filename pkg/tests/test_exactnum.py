from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from loopslice.errors import PrecisionError, PreconditionError
from loopslice.exactnum import (
    EXACT,
    MultiPoly,
    Poly,
    TruncatedLaurent as TL,
    charpoly,
    det,
    discriminant,
    elementary_symmetric,
    inverse,
    nullspace,
    parse_rational,
    poly_det,
    poly_divmod,
    poly_gcd,
    rank,
    rat,
    rat_str,
    rational_roots,
    resultant,
    t_power,
)

LAM = sympy.Symbol("lam")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polys(min_deg=0, max_deg=12, nonzero=False):
    def build(coeffs):
        return Poly(coeffs)

    s = st.lists(small_q, min_size=min_deg + 1, max_size=max_deg + 1).map(build)
    if nonzero:
        s = s.filter(lambda p: not p.is_zero())
    return s


def to_sympy(p: Poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * LAM**k for k, c in enumerate(p.coeffs))


# rationals

def test_parse_and_format_rationals():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == Fraction(-4)
    assert rat_str(Fraction(-2, 4)) == "-1/2"
    assert rat_str(3) == "3/1"
    assert rat("7/14") == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["1.5", "a/b", "1/0", ""])
def test_parse_rational_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


# univariate polynomials

def test_divmod_examples():
    assert poly_divmod(Poly([1, -3, 1]), Poly([-1, 1])) == (Poly([-2, 1]), Poly([-1]))
    f = Poly([3, 0, 1, 2])
    assert poly_divmod(f, f) == (Poly([1]), Poly([]))
    assert poly_divmod(Poly([1, 0, 0, 1]), Poly([1, -2, 1])) == (Poly([2, 1]), Poly([-1, 3]))


def test_divmod_by_zero():
    with pytest.raises((PreconditionError, ZeroDivisionError)):
        poly_divmod(Poly([1, 1]), Poly([]))


@settings(max_examples=150, deadline=None)
@given(polys(), polys(nonzero=True))
def test_divmod_round_trip(g, f):
    q, r = poly_divmod(g, f)
    assert q * f + r == g
    assert r.is_zero() or r.degree < f.degree


def test_resultant_examples():
    assert resultant(Poly([-1, 1]), Poly([1, -3, 1])) == -1
    assert resultant(Poly([-1, 1]), Poly.from_roots([1, 2])) == 0
    assert resultant(Poly([0, 0, 1]), Poly([3, 1])) == 9


def test_discriminant_examples():
    assert discriminant(Poly([1, -3, 1])) == 5
    assert discriminant(Poly([1, -2, 1])) == 0
    assert discriminant(Poly([1, 0, 1])) == -4
    with pytest.raises(PreconditionError):
        discriminant(Poly([3]))


@settings(max_examples=80, deadline=None)
@given(polys(1, 5, nonzero=True), polys(1, 5, nonzero=True))
def test_resultant_matches_sylvester_oracle_and_gcd(f, g):
    # sympy.resultant has sign slips for some inputs, so its Sylvester determinant is the oracle
    from sympy.polys.subresultants_qq_zz import sylvester

    if f.degree < 1 or g.degree < 1:
        return
    ours = resultant(f, g)
    theirs = sylvester(to_sympy(f), to_sympy(g), LAM).det()
    assert ours == Fraction(int(sympy.numer(theirs)), int(sympy.denom(theirs)))
    assert (ours == 0) == (poly_gcd(f, g).degree > 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(small_q, min_size=1, max_size=4), polys(1, 5, nonzero=True), small_q.filter(bool))
def test_resultant_root_product(roots, g, lead):
    f = Poly.from_roots(roots) * lead
    if g.degree < 1:
        return
    expected = lead ** g.degree
    for r in roots:
        expected *= g(r)
    assert resultant(f, g) == expected


@settings(max_examples=80, deadline=None)
@given(polys(1, 6, nonzero=True))
def test_discriminant_normalization(f):
    if f.degree < 1:
        return
    d = f.degree
    expected = (-1) ** (d * (d - 1) // 2) * resultant(f, f.derivative()) / f.lc
    assert discriminant(f) == expected
    theirs = sympy.discriminant(to_sympy(f), LAM)
    assert discriminant(f) == Fraction(int(sympy.numer(theirs)), int(sympy.denom(theirs)))


def test_rational_roots():
    f = Poly.from_roots([Fraction(1, 2), -3, -3])
    assert rational_roots(f) == [(Fraction(-3), 2), (Fraction(1, 2), 1)] or sorted(rational_roots(f)) == [
        (Fraction(-3), 2),
        (Fraction(1, 2), 1),
    ]
    assert rational_roots(Poly([1, 0, 1])) == []


# linear algebra

matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_det_and_charpoly_match_sympy(a):
    m = sympy.Matrix(a)
    assert det(a) == int(m.det())
    cp = charpoly(a)
    expected = m.charpoly(LAM).as_expr()
    assert sympy.expand(to_sympy(cp) - expected) == 0


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_inverse_or_kernel(a):
    n = len(a)
    if det(a) != 0:
        inv = inverse(a)
        prod = [[sum(Fraction(a[i][k]) * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    else:
        ker = nullspace(a, n)
        assert len(ker) == n - rank(a) > 0
        for vec in ker:
            assert all(sum(a[i][k] * vec[k] for k in range(n)) == 0 for i in range(n))


# multivariate polynomials

def test_multipoly_arithmetic():
    x, y = MultiPoly.gens(("x", "y"))
    p = (x + y) ** 2
    assert p == x * x + 2 * x * y + y * y
    assert p.degree_in("x") == 2
    assert p.subs({"y": 1}).evaluate({"x": 2}) == 9
    assert p.coeff("x", 1) == 2 * y
    assert (x ** -1 * x) == MultiPoly.const(("x", "y"), 1)


def test_poly_det_matches_sympy():
    names = ("a", "b", "c", "d", "e")
    a, b, c, d, e = MultiPoly.gens(names)
    one = MultiPoly.const(names, 1)
    mat = [[a, b, one], [c, d, e], [one, a, b]]
    sa, sb, sc, sd, se = sympy.symbols(names)
    expected = sympy.Matrix([[sa, sb, 1], [sc, sd, se], [1, sa, sb]]).det()
    ours = poly_det(mat)
    sym = sum(
        sympy.Rational(cf.numerator, cf.denominator) * sympy.Mul(*(s**k for s, k in zip((sa, sb, sc, sd, se), ex)))
        for ex, cf in ours.terms.items()
    )
    assert sympy.expand(sym - expected) == 0


def test_elementary_symmetric():
    xs = MultiPoly.gens(("x1", "x2", "x3"))
    assert elementary_symmetric(xs, 0) == MultiPoly.const(("x1", "x2", "x3"), 1)
    assert elementary_symmetric(xs, 2) == xs[0] * xs[1] + xs[0] * xs[2] + xs[1] * xs[2]


# truncated Laurent series

def test_laurent_examples():
    t = t_power
    assert (t(-1) + 3 + t(1)).residue() == 1
    assert (t(-2) * (1 + t(1))).valuation() == -2
    one_minus_t = TL(0, [1, -1])
    inv = one_minus_t.invert(6)
    assert [inv.coefficient(k) for k in range(6)] == [1] * 6
    assert inv.prec == 6


def test_exact_monomial_inverse_is_exact():
    x = TL.monomial(Fraction(2), -3)
    assert x.invert() == TL.monomial(Fraction(1, 2), 3)
    assert x.invert().prec == EXACT


def test_precision_propagation():
    a = TL(-1, [1, 2], prec=3)  # t^-1 + 2 + O(t^3)
    b = TL(0, [1], prec=5)
    assert (a + b).prec == 3
    assert (a * b).prec == min(3 + 0, 5 - 1)
    assert a.invert().prec == 3 - 2 * (-1)


def test_residue_and_integrality_need_precision():
    unknown = TL.zero(prec=-3)
    with pytest.raises(PrecisionError):
        unknown.residue()
    with pytest.raises(PrecisionError):
        unknown.is_integral()
    with pytest.raises((PreconditionError, PrecisionError, ZeroDivisionError)):
        TL.zero().invert()


def test_laurent_json_round_trip():
    x = TL(-2, [1, Fraction(-1, 3), 0, 5], prec=4)
    assert TL.from_json(x.to_json()) == x
    assert x.to_json() == {"val": -2, "coeffs": ["1/1", "-1/3", "0/1", "5/1"], "prec": 4} or TL.from_json(
        x.to_json()
    ).agrees_with(x)
    exact = TL.const(3)
    assert exact.to_json()["prec"] is None
    assert TL.from_json(exact.to_json()) == exact


units = st.tuples(
    st.integers(-4, 4),
    st.lists(small_q, min_size=1, max_size=6).filter(lambda c: c[0] != 0),
    st.integers(1, 8),
)


@settings(max_examples=500, deadline=None)
@given(units)
def test_inverse_times_self_is_one(data):
    val, coeffs, rel = data
    x = TL(val, coeffs, prec=val + rel)
    y = x.invert()
    prod = x * y
    assert prod.prec == rel
    assert prod.agrees_with(TL.const(1))


@settings(max_examples=200, deadline=None)
@given(units, units)
def test_multiplication_commutes_and_valuations_add(a, b):
    x = TL(a[0], a[1], prec=a[0] + a[2])
    y = TL(b[0], b[1], prec=b[0] + b[2])
    assert x * y == y * x
    assert (x * y).valuation() == x.valuation() + y.valuation()
