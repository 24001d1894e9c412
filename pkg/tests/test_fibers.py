import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from loopslice.errors import PreconditionError
from loopslice.exactnum import Poly, charpoly, resultant
from loopslice.fibers import (
    DOUBLE_ROOT,
    GENERIC,
    RESULTANT_ZERO,
    InvariantPair,
    derive_constants,
    double_root_fiber,
    factorization,
    fiber,
    generic_fiber,
    in_fiber,
    invariant_map,
    relate_points,
    resultant_fiber_point,
    resultant_stratum_fiber,
    transport,
)
from loopslice.slodowy import SlicePoint, build_slice_chart

SHAPES = [(n, m) for m in range(2, 5) for n in range(1, m)]

# frozen after the sympy identity check below
EXPECTED_D = {
    (1, 2): (1, -1),
    (2, 3): (1, -1),
    (3, 4): (1, -1),
    (1, 3): (2, -1, -1),
    (2, 4): (2, -1, -1),
    (1, 4): (3, -4, 4, -4),
}


def _sympy_matrix(n, m):
    chart = build_slice_chart(n, m)
    syms = {c: sympy.Symbol(c) for c in chart.coords}
    mat = sympy.Matrix(chart.assemble(syms, sympy.Integer))
    return chart, syms, mat


@pytest.mark.parametrize("n,m", SHAPES)
def test_factorization_identity_against_sympy(n, m):
    chart, syms, P = _sympy_matrix(n, m)
    lam = sympy.Symbol("lam")
    d = derive_constants(n, m)
    assert d == EXPECTED_D[(n, m)]
    k = m - n
    full = (lam * sympy.eye(m) - P).det()
    x = P[:n, :n]
    chi = (lam * sympy.eye(n) - x).det()
    band = (lam * sympy.eye(k) - P[n:, n:]).det()
    v = sympy.Matrix([syms[c] for c in chart.v_names])
    vs = sympy.Matrix([[syms[c] for c in chart.vstar_names]])
    pairing = (vs * (lam * sympy.eye(n) - x).adjugate() * v)[0, 0]
    assert sympy.expand(full - chi * band - d[-1] * pairing) == 0
    # d_j is the signed coefficient of a_j lam^{k-j} in the band
    band_poly = sympy.Poly(sympy.expand(band), lam)
    for j in range(1, k + 1):
        coeff = sympy.expand(band_poly.coeff_monomial(lam ** (k - j)))
        assert (-1) ** j * coeff.coeff(syms[f"a_{j}"]).subs({s: 0 for s in syms.values()}) == d[j - 1]


def test_band_is_nonlinear_beyond_one_a():
    assert factorization(1, 2).q_is_linear_in_a()
    assert factorization(2, 3).q_is_linear_in_a()
    assert not factorization(1, 3).q_is_linear_in_a()


def test_invariant_map_examples():
    chart = build_slice_chart(1, 2)
    p = SlicePoint.from_parts(chart, [[1]], [1], [1], [2])
    assert invariant_map(p) == InvariantPair(Poly([-1, 1]), Poly([1, -3, 1]))
    assert invariant_map(SlicePoint.zero(chart)) == InvariantPair(Poly([0, 1]), Poly([0, 0, 1]))
    c23 = build_slice_chart(2, 3)
    q = SlicePoint.from_parts(c23, [[1, 1], [0, 1]], [0, 1], [-2, -3], [-2])
    assert invariant_map(q) == InvariantPair(Poly([1, -2, 1]), Poly([1, 0, 0, 1]))


def test_invariant_pair_requires_monic():
    with pytest.raises(PreconditionError):
        InvariantPair(Poly([1, 2]), Poly([0, 0, 1]))


# generic stratum

def test_generic_worked_example():
    desc = generic_fiber(Poly([-1, 1]), Poly([1, -3, 1]))
    assert desc.stratum == GENERIC
    assert desc.point.flat() == (1, 2, 1, 1)
    assert desc.point_str() == "(1, 2, 1, 1)"
    assert desc.to_json()["point_text"] == "(1, 2, 1, 1)"


def test_generic_quadratic_f():
    f = Poly.from_roots([1, 2])
    g = Poly.from_roots([0, 3, 5])
    desc = generic_fiber(f, g)
    assert charpoly(desc.point.matrix()) == g
    assert desc.point.v == [1, 1]


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([(1, 2), (1, 3), (2, 3), (2, 4)]),
    st.lists(st.fractions(-6, 6, max_denominator=3), min_size=2, max_size=2, unique=True),
    st.lists(st.fractions(-5, 5, max_denominator=2), min_size=4, max_size=4),
)
def test_generic_round_trip(shape, roots, gcoeffs):
    n, m = shape
    f = Poly.from_roots(roots[:n])
    g = Poly(gcoeffs[:m] + [1])
    if resultant(f, g) == 0:
        return
    desc = generic_fiber(f, g)
    assert invariant_map(desc.point) == InvariantPair(f, g)
    # independent oracle for the characteristic polynomial
    lam = sympy.Symbol("lam")
    mat = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in desc.point.matrix()])
    expected = sum(sympy.Rational(c.numerator, c.denominator) * lam**i for i, c in enumerate(g.coeffs))
    assert sympy.expand(mat.charpoly(lam).as_expr() - expected) == 0


def test_generic_errors():
    with pytest.raises(PreconditionError):
        generic_fiber(Poly([-2, 0, 1]), Poly([1, 0, 0, 1]))  # irrational roots
    with pytest.raises(PreconditionError):
        generic_fiber(Poly([-1, 1]), Poly.from_roots([1, 2]))  # shared root
    with pytest.raises(PreconditionError):
        generic_fiber(Poly([0, 0, 1]), Poly([0, 1]))  # deg f >= deg g


def test_transport_preserves_fiber():
    rng = random.Random(1)
    desc = generic_fiber(Poly.from_roots([1, -2]), Poly([3, 1, 0, 1]))
    done = 0
    while done < 50:
        A = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        if A[0][0] * A[1][1] - A[0][1] * A[1][0] == 0:
            continue
        moved = transport(desc.point, A)
        assert invariant_map(moved) == invariant_map(desc.point)
        back = relate_points(desc.point, moved)
        assert transport(desc.point, back) == moved
        done += 1


def test_relate_points_needs_same_fiber():
    a = generic_fiber(Poly.from_roots([1, 2]), Poly([1, 0, 0, 1])).point
    b = generic_fiber(Poly.from_roots([1, 3]), Poly([1, 0, 0, 1])).point
    with pytest.raises(PreconditionError):
        relate_points(a, b)


# resultant stratum

def test_resultant_stratum_examples():
    f, g = Poly([-1, 1]), Poly.from_roots([1, 2])
    desc = resultant_stratum_fiber(f, g)
    assert desc.stratum == RESULTANT_ZERO
    p = resultant_fiber_point(desc, 7, 11)
    assert p.matrix() == [[1, 7], [11, 2]]
    assert in_fiber(resultant_fiber_point(desc, 0, 5), f, g)
    assert not in_fiber(resultant_fiber_point(desc, 1, 1), f, g)


@settings(max_examples=100, deadline=None)
@given(st.fractions(-5, 5, max_denominator=3), st.fractions(-5, 5, max_denominator=3), st.fractions(1, 4, max_denominator=3))
def test_resultant_membership_is_xy_zero(X, Y, s):
    f, g = Poly([-1, 1]), Poly.from_roots([1, 2])
    desc = resultant_stratum_fiber(f, g)
    member = in_fiber(resultant_fiber_point(desc, X, Y), f, g)
    assert member == (X * Y == 0)
    # the G_m scaling (X, Y) -> (sX, Y/s) preserves membership
    assert in_fiber(resultant_fiber_point(desc, s * X, Y / s), f, g) == member


def test_resultant_stratum_rejects_deeper_strata():
    f = Poly.from_roots([1, 2])
    with pytest.raises(PreconditionError):
        resultant_stratum_fiber(f, f * Poly([0, 1]))
    with pytest.raises(PreconditionError):
        resultant_stratum_fiber(f, Poly([1, 0, 0, 1]))


def test_resultant_stratum_quadratic():
    f = Poly.from_roots([1, 2])
    g = Poly.from_roots([1, 3, 4])
    desc = resultant_stratum_fiber(f, g)
    assert desc.special_index == 0
    assert in_fiber(resultant_fiber_point(desc, 0, 9), f, g)
    assert not in_fiber(resultant_fiber_point(desc, 2, 3), f, g)


# double root

def test_double_root_worked_example():
    f, g = Poly([1, -2, 1]), Poly([1, 0, 0, 1])
    desc = double_root_fiber(f, g)
    p = desc.point
    assert desc.stratum == DOUBLE_ROOT
    assert p.x == [[1, 1], [0, 1]]
    assert p.a == [-2] and p.v == [0, 1] and p.vstar == [-2, -3]
    assert charpoly(p.matrix()) == g
    # perturbing the first v* slot leaves the fiber
    bumped = SlicePoint.from_parts(p.chart, p.x, p.v, [p.vstar[0] + Fraction(1, 10), p.vstar[1]], p.a)
    assert charpoly(bumped.matrix()) != g


def test_double_root_second_example_and_larger():
    f = Poly([1, -2, 1])
    g = Poly([3, -3, 0, 1])
    assert charpoly(double_root_fiber(f, g).point.matrix()) == g
    f3 = Poly.from_roots([2, 2, -1])
    g4 = Poly([5, 1, 0, 3, 1])
    desc = double_root_fiber(f3, g4)
    assert invariant_map(desc.point) == InvariantPair(f3, g4)


def test_double_root_errors():
    with pytest.raises(PreconditionError):
        double_root_fiber(Poly.from_roots([1, 1, 1]), Poly([1, 0, 0, 0, 1]))
    with pytest.raises(PreconditionError):
        double_root_fiber(Poly.from_roots([1, 1]), Poly.from_roots([1, 0, 2]))


def test_dispatch():
    assert fiber(Poly([-1, 1]), Poly([1, -3, 1])).stratum == GENERIC
    assert fiber(Poly([-1, 1]), Poly.from_roots([1, 2])).stratum == RESULTANT_ZERO
    assert fiber(Poly([1, -2, 1]), Poly([1, 0, 0, 1])).stratum == DOUBLE_ROOT
