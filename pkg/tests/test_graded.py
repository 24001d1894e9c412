import pytest
import sympy
from hypothesis import given, settings, strategies as st

from loopslice.errors import PreconditionError
from loopslice.exactnum import MultiPoly
from loopslice.graded import (
    GradedDims,
    PoincareSeries,
    cone_of_c1,
    decomposition_remainder,
    euler_elimination_holds,
    euler_expansion_holds,
    ext_poincare,
    free_module_shifts,
    gl1_algebra_check,
    gl1_algebra_report,
    localization_hom,
    proj_cohomology,
    stalk_closed_forms,
    stalk_ic,
)
from loopslice.slodowy import build_slice_chart, grading_of

S = sympy.Symbol("s")


def test_graded_dims_basics():
    g = GradedDims({0: 1, 2: 0, 4: 3})
    assert g.dims == {0: 1, 4: 3}
    assert g.shift(3).dims == {-3: 1, 1: 3}
    assert g.truncate_le(0) == GradedDims({0: 1})
    assert g.total() == 4
    assert g.to_json() == [[0, 1], [4, 3]]
    with pytest.raises(PreconditionError):
        GradedDims({0: -1})


def test_projective_space_dims():
    assert proj_cohomology(1).graded_dims() == GradedDims({0: 1})
    assert proj_cohomology(3).graded_dims() == GradedDims({0: 1, 2: 1, 4: 1})
    prod = proj_cohomology(2, "a").tensor(proj_cohomology(3, "b"))
    assert prod.graded_dims() == GradedDims({0: 1, 2: 2, 4: 2, 6: 1})
    with pytest.raises(PreconditionError):
        proj_cohomology(0)


def test_cone_examples():
    coker, ker = cone_of_c1(2, 3)
    assert coker == GradedDims({0: 1, 2: 1})
    assert ker == GradedDims({4: 1, 6: 1})
    for m in range(1, 7):
        coker, ker = cone_of_c1(1, m)
        assert coker == GradedDims({0: 1}) and ker == GradedDims({2 * m - 2: 1})
    for n in range(1, 7):
        assert cone_of_c1(n, n)[0] == proj_cohomology(n).graded_dims()


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 7) for m in range(1, 7)])
def test_cone_balance(n, m):
    coker, ker = cone_of_c1(n, m)
    assert coker.total() == ker.total() == min(n, m)


def test_stalk_examples():
    assert stalk_ic(2, 3) == GradedDims({-4: 1, -2: 1})
    assert stalk_ic(1, 2) == GradedDims({-2: 1})
    for m in range(2, 7):
        assert stalk_ic(1, m) == GradedDims({-m: 1})
    with pytest.raises(PreconditionError):
        stalk_ic(3, 3)


@pytest.mark.parametrize("n,m", [(n, m) for m in range(2, 7) for n in range(1, m)])
def test_stalk_equals_both_closed_forms(n, m):
    stalk = stalk_ic(n, m)
    forms = stalk_closed_forms(n, m)
    assert stalk == forms["proj_n"] == forms["truncated_proj_m"]
    # closed form written out by hand: degrees 2j - (m + n - 1), j < n
    assert stalk == GradedDims({2 * j - (m + n - 1): 1 for j in range(n)})


def test_decomposition_remainder():
    assert decomposition_remainder(2, 3) == [0]
    assert decomposition_remainder(1, 3) == [1, -1]
    assert decomposition_remainder(1, 4) == [2, 0, -2]
    for m in range(2, 7):
        for n in range(1, m):
            assert decomposition_remainder(n, m) == list(range(m - n - 1, n - m, -2))


def test_poincare_series_expansion():
    series = PoincareSeries({0: 1, 1: 1}, [1, 2, 2])
    expected = sympy.series((1 + S) / ((1 - S) * (1 - S**2) ** 2), S, 0, 21).removeO()
    coeffs = series.coefficients(20)
    assert all(coeffs.get(k, 0) == expected.coeff(S, k) for k in range(21))
    with pytest.raises(PreconditionError):
        PoincareSeries({0: 1}, [0])


numerators = st.dictionaries(st.integers(0, 5), st.integers(-3, 3), max_size=4)
denominators = st.lists(st.integers(1, 4), max_size=3)


def _times_denominator(coeffs: dict, denom, order: int) -> dict:
    out = dict(coeffs)
    for d in denom:
        nxt = dict(out)
        for k, c in out.items():
            if k + d <= order:
                nxt[k + d] = nxt.get(k + d, 0) - c
        out = nxt
    return {k: c for k, c in out.items() if c}


@settings(max_examples=60, deadline=None)
@given(numerators, denominators)
def test_expansion_times_denominator_is_numerator(num, denom):
    order = 15
    series = PoincareSeries(num, denom)
    back = _times_denominator(series.coefficients(order), denom, order)
    assert back == {k: c for k, c in num.items() if c and k <= order}


@settings(max_examples=60, deadline=None)
@given(numerators, denominators, numerators, denominators)
def test_series_product_and_sum(n1, d1, n2, d2):
    order = 15
    a, b = PoincareSeries(n1, d1), PoincareSeries(n2, d2)
    ca, cb = a.coefficients(order), b.coefficients(order)
    conv: dict = {}
    for i, x in ca.items():
        for j, y in cb.items():
            if i + j <= order:
                conv[i + j] = conv.get(i + j, 0) + x * y
    assert (a * b).coefficients(order) == {k: c for k, c in conv.items() if c}
    total = {k: ca.get(k, 0) + cb.get(k, 0) for k in set(ca) | set(cb)}
    assert (a + b).coefficients(order) == {k: c for k, c in total.items() if c}


@pytest.mark.parametrize("n,m", [(n, m) for m in range(2, 7) for n in range(1, m)])
def test_ext_minimal_degree(n, m):
    series = ext_poincare(n, m)
    low = series.min_degree()
    assert low == m - n + 1
    assert series.coefficients(low)[low] == 1
    assert all(k >= low for k in series.coefficients(low + 10))
    assert low == grading_of(build_slice_chart(n, m), "v_1")


def test_ext_examples():
    for (n, m), low in {(1, 2): 2, (2, 3): 2, (2, 5): 4}.items():
        s = ext_poincare(n, m)
        assert (s.min_degree(), s.leading_coefficient()) == (low, 1)


def test_gl1_algebra_m1_closed_form():
    rep = gl1_algebra_report(1, order=20)
    expected = sympy.series((1 + S) / ((1 - S) * (1 - S**2) ** 2), S, 0, 21).removeO()
    for k in range(21):
        assert rep.free_series.get(k, 0) == expected.coeff(S, k)
        assert rep.module_series.get(k, 0) == expected.coeff(S, k)


@pytest.mark.parametrize("m", range(1, 6))
def test_gl1_algebra_check(m):
    assert gl1_algebra_check(m, order=30)
    assert euler_elimination_holds(m, order=30)


def test_gl1_mismatch_is_reported():
    # a deliberately wrong rank breaks the identity
    rep = gl1_algebra_report(3, order=30, rank_=2)
    assert not rep.ok and rep.first_mismatch is not None


def test_euler_expansion_rank_two():
    assert euler_expansion_holds(2)
    names = ("a", "t1", "t2")
    a, t1, t2 = MultiPoly.gens(names)
    assert (a + t1) * (a + t2) == a * a + (t1 + t2) * a + t1 * t2


def test_localization_fixtures():
    assert localization_hom(0, 3) == GradedDims({0: 1})
    assert localization_hom(2, 3) == GradedDims({6: 1})
    assert localization_hom(-1, 3) == GradedDims({-1: 1})
    s = free_module_shifts(-2, 3)
    assert s.min_degree() == 6
