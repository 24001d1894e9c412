from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loopslice.errors import PreconditionError, SchemaError
from loopslice.slodowy import (
    SlicePoint,
    Sl2Triple,
    build_slice_chart,
    centralizer_basis,
    centralizer_dimension,
    chart_summary,
    embedded_triple,
    grading_of,
    principal_sl2,
)


def test_small_triples():
    assert principal_sl2(1) == Sl2Triple(((0,),), ((0,),), ((0,),))
    k2 = principal_sl2(2)
    assert k2.e == ((0, 1), (0, 0)) and k2.h == ((1, 0), (0, -1)) and k2.f == ((0, 0), (1, 0))
    k3 = principal_sl2(3)
    assert (k3.f[1][0], k3.f[2][1]) == (2, 2)


@pytest.mark.parametrize("k", range(1, 13))
def test_bracket_identities(k):
    assert principal_sl2(k).check()


def test_broken_triple_detected():
    tri = principal_sl2(3)
    bad = Sl2Triple(tri.e, tri.h, ((0, 0, 0), (1, 0, 0), (0, 2, 0)))
    assert not bad.check()
    with pytest.raises(PreconditionError):
        principal_sl2(0)


def test_centralizer_dimensions():
    assert centralizer_dimension(1, 2) == 4
    assert centralizer_dimension(2, 3) == 9
    assert centralizer_dimension(3, 3) == 9
    for m in range(2, 7):
        for n in range(m):
            assert centralizer_dimension(n, m) == n * n + 2 * n + (m - n)
            assert len(build_slice_chart(n, m).coords) == centralizer_dimension(n, m)


def test_centralizer_basis_commutes():
    e, _, _ = embedded_triple(1, 3)
    for z in centralizer_basis(e):
        ez = [[sum(e[i][p] * z[p][j] for p in range(3)) for j in range(3)] for i in range(3)]
        ze = [[sum(z[i][p] * e[p][j] for p in range(3)) for j in range(3)] for i in range(3)]
        assert ez == ze


def test_chart_shapes():
    c12 = build_slice_chart(1, 2)
    assert chart_summary(c12)["matrix"] == [["x_1_1", "v_1"], ["vs_1", "a_1"]]
    c23 = build_slice_chart(2, 3)
    assert len(c23.a_names) == 1 and len(c23.x_names) == 2
    c13 = build_slice_chart(1, 3)
    assert c13.c == (1,)
    assert chart_summary(c13)["matrix"] == [["x_1_1", "0", "v_1"], ["vs_1", "a_1", "a_2"], ["0", "1", "a_1"]]
    assert build_slice_chart(1, 4).c == (2, 2)
    with pytest.raises(PreconditionError):
        build_slice_chart(2, 2)


def test_grading():
    for m in range(2, 7):
        for n in range(1, m):
            chart = build_slice_chart(n, m)
            g = chart.grading()
            assert all(g[x] == 2 for row in chart.x_names for x in row)
            assert all(g[a] == 2 * (i + 1) for i, a in enumerate(chart.a_names))
            assert all(g[v] == m - n + 1 for v in chart.v_names + chart.vstar_names)
    assert grading_of(build_slice_chart(1, 2), "v_1") == 2
    with pytest.raises(PreconditionError):
        grading_of(build_slice_chart(1, 2), "a_7")


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 5).flatmap(lambda m: st.tuples(st.integers(0, m - 1), st.just(m))),
    st.lists(st.fractions(-9, 9, max_denominator=5), min_size=40, max_size=40),
)
def test_every_point_is_in_the_slice(shape, values):
    n, m = shape
    chart = build_slice_chart(n, m)
    point = SlicePoint(chart, dict(zip(chart.coords, values)))
    assert point.in_slice()


def test_off_slice_matrix_detected():
    chart = build_slice_chart(1, 3)
    point = SlicePoint.zero(chart)
    mat = point.matrix()
    # moving an entry off the Toeplitz band breaks [e, P - f] = 0
    mat[2][2] = Fraction(1)
    from loopslice.exactnum import mat_mul
    e, _, f = embedded_triple(1, 3)
    diff = [[mat[i][j] - f[i][j] for j in range(3)] for i in range(3)]
    assert mat_mul(e, diff) != mat_mul(diff, e)


def test_point_json_round_trip_and_errors():
    chart = build_slice_chart(1, 2)
    p = SlicePoint.from_parts(chart, [[1]], [1], [Fraction(1, 2)], [2])
    assert SlicePoint.from_json(p.to_json()) == p
    assert p.flat() == (1, 2, 1, Fraction(1, 2))
    with pytest.raises(SchemaError):
        SlicePoint.from_json({"n": 1})
    with pytest.raises(PreconditionError):
        SlicePoint(chart, {"x_1_1": 0})
