from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from loopslice.branching import (
    DominantWeight,
    GradedMultiplicity,
    character_dict,
    classical_branching,
    determinant,
    expected_standard_restriction,
    gl_character,
    graded_restriction,
    specialized_character,
    standard,
    trivial,
    weight_multiset,
)
from loopslice.errors import LoopSliceError, PreconditionError, SchemaError
from loopslice.exactnum import MultiPoly


def _chains(lam, n):
    """Interlacing-chain oracle: ungraded multiplicities of GL_n weights in lam."""
    out = {}
    level = {tuple(lam): 1}
    while len(next(iter(level))) > n:
        nxt = {}
        for mu, c in level.items():
            ranges = [range(mu[i + 1], mu[i] + 1) for i in range(len(mu) - 1)]
            for nu in product(*ranges):
                nxt[nu] = nxt.get(nu, 0) + c
        level = nxt
    for mu, c in level.items():
        out[DominantWeight(mu)] = c
    return out


dominant = st.integers(1, 5).flatmap(
    lambda m: st.lists(st.integers(-2, 3), min_size=m, max_size=m).map(lambda xs: tuple(sorted(xs, reverse=True)))
)


def test_character_examples():
    x = MultiPoly.gens(("x_1", "x_2", "x_3"))
    assert gl_character([1, 0, 0]) == x[0] + x[1] + x[2]
    y = MultiPoly.gens(("x_1", "x_2"))
    assert gl_character([1, 1]) == y[0] * y[1]
    assert gl_character([2, 0]) == y[0] ** 2 + y[0] * y[1] + y[1] ** 2
    assert gl_character(DominantWeight((-1, -1))) == (y[0] * y[1]) ** -1


def test_weight_validation():
    with pytest.raises(PreconditionError):
        DominantWeight((0, 1))
    with pytest.raises(PreconditionError):
        gl_character([1, 0], rank=3)
    assert DominantWeight.parse("[2, 1, -1]") == DominantWeight((2, 1, -1))
    assert DominantWeight.parse("1,0") == DominantWeight((1, 0))
    with pytest.raises(SchemaError):
        DominantWeight.parse("[1.5]")


@settings(max_examples=60, deadline=None)
@given(dominant)
def test_character_matches_tableaux(lam):
    assert character_dict(DominantWeight(lam)) == weight_multiset(DominantWeight(lam))


def test_standard_examples():
    got = graded_restriction(standard(3), 1)
    assert got.terms == {DominantWeight((1,)): {0: 1}, DominantWeight((0,)): {1: 1, -1: 1}}
    for m in range(2, 7):
        for n in range(1, m):
            assert graded_restriction(standard(m), n) == expected_standard_restriction(m, n)
            det = graded_restriction(determinant(m), n)
            assert det.terms == {determinant(n): {0: 1}}


@settings(max_examples=60, deadline=None)
@given(dominant.filter(lambda lam: len(lam) >= 2), st.data())
def test_q_one_matches_oracles(lam, data):
    n = data.draw(st.integers(1, len(lam) - 1))
    w = DominantWeight(lam)
    graded = graded_restriction(w, n)
    at_one = graded.at_q_equals_one()
    assert at_one == classical_branching(w, n)
    assert at_one == _chains(lam, n)
    assert graded.character() == specialized_character(w, n)


def test_bar_invariance():
    for m in range(2, 6):
        for n in range(1, m):
            for w in (standard(m), determinant(m), DominantWeight((1,) + (0,) * (m - 2) + (-1,))):
                assert graded_restriction(w, n).is_bar_invariant()


def test_multiplicity_rejects_negative():
    with pytest.raises(LoopSliceError):
        GradedMultiplicity(1, {DominantWeight((0,)): {0: -1}})
    with pytest.raises(PreconditionError):
        GradedMultiplicity(2, {DominantWeight((0,)): {0: 1}})


def test_json_shape():
    data = graded_restriction(standard(3), 1).to_json()
    assert data == {
        "n": 1,
        "components": [
            {"weight": [1], "multiplicity": [[0, 1]]},
            {"weight": [0], "multiplicity": [[-1, 1], [1, 1]]},
        ],
    }
    assert trivial(2).to_json() == [0, 0]
