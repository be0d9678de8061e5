from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from parhiggs.errors import ValidationError
from parhiggs.parabolic import (
    ParabolicBundleData,
    PointWeights,
    allowed_block_pattern,
    bundle_from_json,
    bundle_to_json,
    destabilizing_check,
    direct_sum,
    dual,
    induced_sub_weights,
    nilpotency_index,
    parabolic_line,
    pardeg,
    tensor_line,
    tensor_pardeg,
)


def bundle(rank, degree, *groups):
    return ParabolicBundleData(rank, degree, tuple(PointWeights.from_multiset(g) for g in groups))


E = bundle(2, 1, [F(1, 3), F(2, 3)], [0, F(1, 2)])


def test_pardeg_and_slope():
    assert pardeg(E) == F(5, 2)
    assert E.slope == F(5, 4)


def test_dual_frozen():
    d = dual(E)
    assert d.degree == -4
    assert d.points[0].expanded() == (F(1, 3), F(2, 3))
    assert d.points[1].expanded() == (0, F(1, 2))
    assert pardeg(d) == F(-5, 2)
    assert dual(d) == E


def test_dual_keeps_zero_weight_first():
    b = bundle(3, 0, [0, 0, F(1, 5)])
    assert dual(b).points[0].entries == ((0, 2), (F(4, 5), 1))
    assert dual(b).degree == -1


def test_tensor_line_carry():
    b = bundle(2, 0, [F(1, 4), F(3, 4)])
    t = tensor_line(b, parabolic_line(1, [F(1, 2)]))
    assert t.degree == 3
    assert t.points[0].expanded() == (F(1, 4), F(3, 4))
    assert pardeg(t) == 4


def test_tensor_with_inverse_is_identity():
    line = parabolic_line(2, [F(1, 3), F(1, 2)])
    inv = dual(line)
    assert tensor_line(tensor_line(E, line), inv) == E


def test_normalized_carries_integer_parts():
    b = ParabolicBundleData.normalized(1, 0, [[(F(5, 3), 1)]])
    assert b.degree == 1 and b.points[0].weights == (F(2, 3),)
    b = ParabolicBundleData.normalized(2, 0, [[(F(-1, 2), 2)]])
    assert b.degree == -2 and b.points[0].entries == ((F(1, 2), 2),)


def test_direct_sum_merges_equal_weights():
    s = direct_sum(E, bundle(1, 3, [F(1, 3)], [F(1, 2)]))
    assert s.rank == 3 and s.degree == 4
    assert s.points[0].entries == ((F(1, 3), 2), (F(2, 3), 1))


def test_direct_sum_rejects_different_divisors():
    with pytest.raises(ValidationError):
        direct_sum(E, bundle(1, 0, [0]))


@pytest.mark.parametrize(
    "entries",
    [((F(1), 1),), ((F(-1, 2), 1),), ((F(1, 2), 1), (F(1, 3), 1)), ((F(1, 2), 0),)],
)
def test_weight_validation(entries):
    with pytest.raises(ValidationError):
        PointWeights(entries)


def test_rank_must_match_multiplicities():
    with pytest.raises(ValidationError):
        ParabolicBundleData(3, 0, (PointWeights.of("1/2"),))


def test_induced_sub_weights_identity():
    amb = PointWeights.of("1/5", "2/5", "3/5")
    assert induced_sub_weights(amb, [1, 2, 3]) == amb
    assert induced_sub_weights(amb, [3, 1]).weights == (F(1, 5), F(3, 5))
    assert induced_sub_weights(amb, [2, 2], [1, 1]).entries == ((F(2, 5), 2),)


def test_induced_sub_weights_rejects_non_monotone():
    with pytest.raises(ValidationError):
        induced_sub_weights(PointWeights.of("0", "1/2", "2/3"), [1, 3, 2])
    with pytest.raises(ValidationError):
        induced_sub_weights(PointWeights.of("0"), [2])


def test_block_patterns():
    a = PointWeights.of("0", "1/2")
    assert allowed_block_pattern(a, a) == ((True, True), (False, True))
    assert allowed_block_pattern(a, a, strong=True) == ((False, True), (False, False))
    assert nilpotency_index(allowed_block_pattern(a, a, strong=True)) == 2
    assert nilpotency_index(allowed_block_pattern(a, a)) is None


def test_destabilizing_check():
    line = bundle(1, 1, [F(2, 3)], [F(1, 2)])
    v = destabilizing_check(E, line)
    assert v.sub_slope == F(13, 6) and v.violates
    equal = bundle(1, 0, [F(1, 3)], [F(1, 2)])
    amb = bundle(2, 0, [F(1, 3), F(1, 3)], [F(1, 2), F(1, 2)])
    assert destabilizing_check(amb, equal).violates
    assert not destabilizing_check(amb, equal, semistable=True).violates


def test_json_round_trip():
    obj = bundle_to_json(E)
    assert obj["points"][0]["weights"][0] == {"num": 1, "den": 3, "mult": 1}
    assert bundle_from_json(obj) == E
    with pytest.raises(ValidationError):
        bundle_from_json({"rank": 1, "degree": 0.5, "points": []})


weight = st.builds(lambda p, q: F(p % q, q), st.integers(0, 60), st.integers(1, 9))


@st.composite
def bundles(draw, s=2):
    rank = draw(st.integers(1, 4))
    points = tuple(PointWeights.from_multiset(draw(st.lists(weight, min_size=rank, max_size=rank))) for _ in range(s))
    return ParabolicBundleData(rank, draw(st.integers(-10, 10)), points)


@given(bundles(), bundles())
def test_properties_dual_sum_tensor(a, b):
    assert pardeg(dual(a)) == -pardeg(a)
    assert dual(dual(a)) == a
    assert pardeg(direct_sum(a, b)) == pardeg(a) + pardeg(b)
    assert dual(direct_sum(a, b)) == direct_sum(dual(a), dual(b))


@given(bundles(), st.integers(-5, 5), weight, weight)
def test_property_tensor_line(b, d, x, y):
    line = parabolic_line(d, [x, y])
    t = tensor_line(b, line)
    assert pardeg(t) == pardeg(b) + b.rank * pardeg(line) == tensor_pardeg(b, line)
    assert all(0 <= w < 1 for p in t.points for w in p.weights)
