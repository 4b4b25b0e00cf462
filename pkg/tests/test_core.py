import pickle
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sciontree.core import (
    MINUS_INF,
    PLUS_INF,
    Combination,
    DimensionError,
    ExplicitSet,
    Image,
    Knapsack,
    Permutation,
    SentinelArithmeticError,
    dominates,
    lex_key,
    lex_less,
    permute_problem,
    viable_parameter,
)

extended = st.one_of(st.integers(-10**6, 10**6), st.sampled_from([PLUS_INF, MINUS_INF]))


@given(extended, extended)
def test_extended_order_is_total_and_antisymmetric(a, b):
    assert (a < b) + (a == b) + (a > b) == 1
    assert (a <= b) == (a < b or a == b)


@given(extended, extended, extended)
def test_extended_order_transitive(a, b, c):
    if a <= b and b <= c:
        assert a <= c


@pytest.mark.parametrize("v", [0, -(10**30), 10**30, Fraction(7, 3)])
def test_infinities_bracket_every_number(v):
    assert MINUS_INF < v < PLUS_INF
    assert v > MINUS_INF and v < PLUS_INF
    assert MINUS_INF < PLUS_INF


@pytest.mark.parametrize("op", [
    lambda x: x + 1, lambda x: 1 - x, lambda x: x * 2, lambda x: -x, lambda x: x / 2, lambda x: x - x,
])
def test_sentinel_arithmetic_refused(op):
    with pytest.raises(SentinelArithmeticError):
        op(PLUS_INF)


def test_sentinels_survive_pickle():
    assert pickle.loads(pickle.dumps(PLUS_INF)) is PLUS_INF
    assert pickle.loads(pickle.dumps(MINUS_INF)) is MINUS_INF


def test_image_validation():
    with pytest.raises(DimensionError):
        Image((1,))
    with pytest.raises(ValueError):
        Image((1.5, 2))
    with pytest.raises(ValueError):
        Image((PLUS_INF, 2))
    assert Image((2.0, 3)).coords == (2, 3)
    d = Image.dummy(1, 3)
    assert d.coords == (MINUS_INF, PLUS_INF, MINUS_INF) and d.is_dummy
    with pytest.raises(ValueError):
        Image((PLUS_INF, PLUS_INF, MINUS_INF), 0)


def test_lex_less_examples():
    a, b = Image((4, 1, 2, 1)), Image((2, 4, 3, 2))
    assert lex_less(a, b)
    assert not lex_less(a, a)
    sigma = Permutation.from_one_based((3, 1, 2))
    assert not lex_less(Image((6, 2, 4)), Image((5, 2, 6)), sigma)


def test_lex_less_sigma_matches_brute_sort():
    pts = [Image(p) for p in [(5, 4, 2), (2, 6, 3), (6, 2, 4), (3, 3, 5), (2, 5, 5), (5, 2, 6)]]
    sigma = Permutation.from_one_based((3, 1, 2))
    by_key = sorted(pts, key=lambda im: tuple(im.coords[s] for s in reversed(sigma.sigma)))
    for i, a in enumerate(by_key):
        for b in by_key[i + 1:]:
            assert lex_less(a, b, sigma) and not lex_less(b, a, sigma)


points3 = st.tuples(*[st.integers(-20, 20)] * 3)


@given(points3, points3)
def test_lex_less_agrees_with_sort_key(p, q):
    assert lex_less(Image(p), Image(q)) == (lex_key(p) < lex_key(q))


def test_dominates():
    assert not dominates(Image((2, 3, 4)), Image((4, 3, 2)))
    a = Image((1, 1, 1))
    assert not dominates(a, a)
    assert dominates(a, Image((1, 1, 2)))
    with pytest.raises(DimensionError):
        dominates(a, Image((1, 1)))


def test_viable_parameter():
    y1, y2 = Image((4, 1, 2, 1)), Image((2, 4, 3, 2))
    root = Combination.root(4)
    assert viable_parameter(root).bounds == (PLUS_INF,) * 3
    assert viable_parameter(root.replace(0, y1)).bounds == (4, PLUS_INF, PLUS_INF)
    assert viable_parameter(root.replace(0, y1).replace(1, y2)).bounds == (4, 4, PLUS_INF)
    with pytest.raises(DimensionError):
        Combination((y1,))


def test_cascade_permutations():
    assert Permutation.cascade(3, 3).is_identity
    assert Permutation.cascade(2, 3).one_based == (3, 1, 2)
    assert Permutation.cascade(1, 3).one_based == (3, 2, 1)
    assert Permutation.cascade(2, 5).one_based == (5, 4, 3, 1, 2)
    with pytest.raises(ValueError):
        Permutation.cascade(0, 3)
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


@given(st.permutations(range(5)), st.tuples(*[st.integers(-9, 9)] * 5))
def test_permutation_inverse(sigma, coords):
    p = Permutation(tuple(sigma))
    assert p.inverse().apply(p.apply(coords)) == coords
    assert p.apply(p.inverse().apply(coords)) == coords


def test_permute_problem():
    inst = ExplicitSet.from_points([(5, 4, 2)])
    sigma = Permutation.from_one_based((3, 1, 2))
    assert permute_problem(inst, sigma).images == (Image((2, 5, 4)),)
    assert permute_problem(inst, Permutation.identity(3)) == inst
    back = permute_problem(permute_problem(inst, sigma), sigma.inverse())
    assert back == inst
    kp = Knapsack(((1, 2), (3, 4), (5, 6)), (1, 1), 1)
    assert permute_problem(kp, sigma).profits == ((5, 6), (1, 2), (3, 4))


def test_instance_validation():
    with pytest.raises(ValueError):
        ExplicitSet.from_points([(1, 2), (1, 2)])
    with pytest.raises(ValueError):
        Knapsack(((1,), (1,)), (-1,), 3)
    with pytest.raises(ValueError):
        Knapsack(((1,), (1,)), (1,), -1)
    assert ExplicitSet((), 3).k == 3
