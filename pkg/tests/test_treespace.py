import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcqi.classifier import classify
from abcqi.errors import ParseError
from abcqi.exact import RationalMatrix
from abcqi.treespace import (
    BoundaryMetric,
    TreeAddress,
    check_power_rescaling,
    common_base,
    divergence_height,
    qm_distance,
    reencode,
    separated_count,
)
from oracles import digit_scan_divergence


def A(text):
    return TreeAddress.parse(text)


def test_literal_roundtrip():
    for text in ["0:1", "3:10(01)", "-2:(12)", "0:", "5:7(0)", "1:a(zb)"]:
        a = A(text)
        assert A(str(a)) == a


def test_canonical_forms():
    assert A("0:01") == A("1:1")
    assert A("0:1(0)") == A("0:1")
    assert A("0:1(11)") == A("0:(1)")
    assert A("0:12(12)") == A("0:(12)")
    assert A("4:000") == A("0:") == TreeAddress(-3, (), (0,))
    assert str(A("0:(0101)")) == "1:(10)"


def test_parse_errors():
    with pytest.raises(ParseError):
        A("no colon")
    with pytest.raises(ParseError):
        A("1:2(")


def test_divergence_examples():
    a = A("0:1234")
    b = A("0:1235")
    # digits agree on heights 0..2, first disagreement at height 3
    assert divergence_height(a, b) == 3
    assert divergence_height(A("0:1"), A("0:2")) == 0
    assert divergence_height(A("-1:1"), A("0:1")) == -1
    with pytest.raises(ValueError):
        divergence_height(a, a)


def test_divergence_periodic_tails():
    assert divergence_height(A("0:(01)"), A("0:(0101011)")) == 6
    assert divergence_height(A("0:1(2)"), A("0:1(22223)")) == 5


def test_divergence_matches_digit_scan():
    rng = random.Random(0)
    m = BoundaryMetric(3)
    for _ in range(2000):
        a, b = m.random_address(rng), m.random_address(rng)
        if rng.random() < 0.5:
            b = TreeAddress(a.base_height, a.prefix[: rng.randint(0, 8)] + b.prefix, b.period)
        if a == b:
            continue
        assert divergence_height(a, b) == digit_scan_divergence(a, b)


def test_qm_examples():
    m = BoundaryMetric(2)
    assert qm_distance(m, A("0:00001"), A("0:0000(01)")) == Fraction(1, 16)
    assert qm_distance(m, A("0:1110"), A("0:1111")) == Fraction(1, 8)
    assert qm_distance(m, A("-1:1"), A("-1:0(1)")) == 2
    assert qm_distance(m, A("0:101"), A("0:101")) == 0
    with pytest.raises(ValueError):
        qm_distance(m, A("0:2"), A("0:1"))
    with pytest.raises(ValueError):
        BoundaryMetric(1)


@pytest.mark.parametrize("d", [2, 3, 4, 8])
def test_ultrametric(d):
    rng = random.Random(d)
    m = BoundaryMetric(d)
    for _ in range(2000):
        a, b, c = (m.random_address(rng) for _ in range(3))
        assert qm_distance(m, a, c) <= max(qm_distance(m, a, b), qm_distance(m, b, c))
        assert qm_distance(m, a, b) == qm_distance(m, b, a)


digit_lists = st.lists(st.integers(0, 3), max_size=6)


@settings(max_examples=200, deadline=None)
@given(st.integers(-3, 3), digit_lists, digit_lists.filter(bool), st.integers(-3, 3), digit_lists, digit_lists.filter(bool))
def test_distance_symmetry_and_zero(h1, p1, q1, h2, p2, q2):
    m = BoundaryMetric(4)
    a, b = TreeAddress(h1, p1, q1), TreeAddress(h2, p2, q2)
    assert qm_distance(m, a, b) == qm_distance(m, b, a)
    assert (qm_distance(m, a, b) == 0) == (a == b)


def test_common_base_and_reencode():
    assert common_base(4, 8) == (2, 2, 3)
    assert common_base(9, 27) == (3, 2, 3)
    assert common_base(2, 3) is None
    a = A("1:31(02)")
    b = reencode(a, 4, 8)
    assert b.max_digit() < 8
    assert reencode(b, 8, 4) == a
    # base-2 expansion of "0:3" in base 4 is 11, regrouped into base 8 as 6
    assert reencode(A("0:3"), 4, 8) == A("0:6")


def test_rescaling_examples():
    r = check_power_rescaling(BoundaryMetric(4), BoundaryMetric(8))
    assert r.pair.as_tuple() == (3, 2) and r.passed
    assert r.constant <= r.bound == 8
    assert check_power_rescaling(BoundaryMetric(2), BoundaryMetric(3)) is None
    same = check_power_rescaling(BoundaryMetric(5), BoundaryMetric(5))
    assert same.pair.as_tuple() == (1, 1) and same.constant == 1


def brute_separated(m, center, h):
    """Greedy pairwise check over the same candidate set."""
    d = m.d
    lo = min(center.base_height, 0)
    base = [center.digit(t) for t in range(lo, 1)]
    chosen = []
    for tail in itertools.product(range(d), repeat=h + 1):
        c = TreeAddress(lo, tuple(base) + tail, (0,))
        if qm_distance(m, c, center) >= 1:
            continue
        if all(qm_distance(m, c, x) >= Fraction(d) ** -h for x in chosen):
            chosen.append(c)
    return len(chosen)


@pytest.mark.parametrize("d,hs", [(2, range(0, 11)), (3, range(0, 7)), (4, range(0, 5)), (8, range(0, 3))])
def test_separated_count_is_d_to_the_h(d, hs):
    m = BoundaryMetric(d)
    center = A("-1:1(01)" if d > 1 else "0:")
    for h in hs:
        assert separated_count(m, center, h) == d**h


def test_separated_count_matches_pairwise_enumeration():
    for d, h in [(2, 5), (3, 3), (4, 2)]:
        m = BoundaryMetric(d)
        c = A("0:1")
        assert separated_count(m, c, h) == brute_separated(m, c, h)


def test_consistency_with_classifier():
    mats = [RationalMatrix([[x]]) for x in (2, 3, 4, 8, 9, 27)] + [RationalMatrix([[2, 1], [0, 2]])]
    for M, N in itertools.product(mats, repeat=2):
        if M.n == N.n and classify(M, N).equivalent:
            assert check_power_rescaling(BoundaryMetric(abs(int(M.det()))), BoundaryMetric(abs(int(N.det())))) is not None
