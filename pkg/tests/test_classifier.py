import functools
import itertools
import random

import pytest

from abcqi.classifier import (
    BLOCK_STRUCTURE_MISMATCH,
    DET_INDEPENDENT,
    DIM_MISMATCH,
    MATCHED,
    MODULUS_POWER_MISMATCH,
    UNIPOTENT_MISMATCH,
    ClassificationVerdict,
    classify,
    multiplicative_dependence,
)
from abcqi.errors import NonIntegralMatrixError, PolycyclicError, SingularMatrixError
from abcqi.exact import RationalMatrix, absolute_jordan_form, ajf_power
from oracles import block_diag, brute_dependence, planted_jordan, unimodular


def m(*rows):
    return RationalMatrix(rows)


@functools.lru_cache(maxsize=None)
def powered_form(M, k):
    return absolute_jordan_form(M**k)


def brute_witness(M, N, limit=6):
    """Smallest (a, b) by explicit matrix powering, or None."""
    for a, b in sorted(itertools.product(range(1, limit + 1), repeat=2), key=lambda p: (p[0] + p[1], p)):
        if powered_form(M, a) == powered_form(N, b):
            return (a, b)
    return None


def test_dependence_examples():
    assert multiplicative_dependence(4, 8).as_tuple() == (3, 2)
    assert multiplicative_dependence(6, 6).as_tuple() == (1, 1)
    assert multiplicative_dependence(2, 3) is None


def test_dependence_against_brute_force():
    for d1 in range(2, 40):
        for d2 in range(2, 40):
            dep = multiplicative_dependence(d1, d2)
            want = brute_dependence(d1, d2, 16)
            assert (None if dep is None else dep.as_tuple()) == want


def test_dependence_large_and_minimal():
    dep = multiplicative_dependence(2**12 * 3**6, 2**8 * 3**4)
    assert dep.as_tuple() == (2, 3)
    with pytest.raises(ValueError):
        multiplicative_dependence(1, 4)


def test_classify_examples():
    v = classify(m([2]), m([8]))
    assert v.equivalent and v.witness == (3, 1) and v.certificate == MATCHED
    v = classify(m([2]), m([3]))
    assert not v.equivalent and v.certificate == DET_INDEPENDENT and v.witness is None
    M = m([2, 1], [1, 3])
    assert classify(M, M).witness == (1, 1)
    assert classify(m([2]), m([2, 0], [0, 2])).certificate == DIM_MISMATCH


def test_reason_codes():
    J = planted_jordan
    assert classify(block_diag(m([2]), J([(1, 2)])), m([2, 0, 0], [0, 1, 0], [0, 0, 1])).certificate == UNIPOTENT_MISMATCH
    assert classify(J([(2, 2)]), m([2, 0], [0, 2])).certificate == BLOCK_STRUCTURE_MISMATCH
    assert classify(m([3, 1], [1, 1]), m([4, 1], [2, 1])).certificate == MODULUS_POWER_MISMATCH
    assert classify(m([4]), m([-2, 0], [0, -2])).certificate == DIM_MISMATCH


def test_dim_mismatch_precedes_det_check():
    assert classify(m([2]), m([3, 0], [0, 1])).certificate == DIM_MISMATCH


def test_errors():
    with pytest.raises(PolycyclicError):
        classify(m([1, 1], [0, 1]), m([2]))
    with pytest.raises(PolycyclicError):
        classify(m([2]), m([-1]))
    with pytest.raises(SingularMatrixError):
        classify(m([1, 2], [2, 4]), m([2, 0], [0, 2]))
    with pytest.raises(NonIntegralMatrixError):
        classify(m(["1/2"]), m([2]))


def test_verdict_invariant_enforced():
    with pytest.raises(ValueError):
        ClassificationVerdict(True, None, MATCHED)
    with pytest.raises(ValueError):
        ClassificationVerdict(False, (1, 1), DET_INDEPENDENT)
    with pytest.raises(ValueError):
        ClassificationVerdict(False, None, "BOGUS")


POOL = [
    m([2]), m([-2]), m([3]), m([4]), m([8]), m([9]), m([-8]),
    m([2, 0], [0, 2]), m([2, 1], [0, 2]), m([4, 0], [0, 1]), m([2, 1], [1, 2]),
    m([3, 1], [1, 1]), m([0, -2], [1, 0]), m([1, 1], [-1, 1]), m([2, 0], [0, -2]),
    m([2, 0], [0, 4]), m([4, 0], [0, 16]), m([4, 2], [0, 4]), m([1, 2], [3, 0]),
]


def test_symmetry_and_reflexivity():
    for M in POOL:
        v = classify(M, M)
        assert v.equivalent and v.witness == (1, 1)
    for M, N in itertools.combinations(POOL, 2):
        v, w = classify(M, N), classify(N, M)
        assert v.equivalent == w.equivalent and v.certificate == w.certificate
        if v.equivalent:
            assert w.witness == v.witness[::-1]


def test_transitivity_no_intransitive_triple():
    eq = {(i, j): classify(POOL[i], POOL[j]).equivalent for i in range(len(POOL)) for j in range(len(POOL))}
    for i, j, k in itertools.permutations(range(len(POOL)), 3):
        if eq[i, j] and eq[j, k]:
            assert eq[i, k]


def test_necessity_and_witness_validity():
    for M, N in itertools.product(POOL, repeat=2):
        v = classify(M, N)
        if not v.equivalent:
            continue
        assert multiplicative_dependence(abs(int(M.det())), abs(int(N.det()))) is not None
        a, b = v.witness
        # independent recomputation by explicit powering
        assert absolute_jordan_form(M**a) == absolute_jordan_form(N**b)
        assert ajf_power(v.ajf_m, a) == ajf_power(v.ajf_n, b)


def test_verdicts_agree_with_brute_force_powering():
    small = [M for M in POOL if abs(M.det()) <= 4 and M.n == 2] + [m([2]), m([4]), m([8]), m([3])]
    for M, N in itertools.product(small, repeat=2):
        if M.n != N.n:
            continue
        v = classify(M, N)
        w = brute_witness(M, N)
        assert v.equivalent == (w is not None)
        if w is not None:
            assert v.witness == w


@pytest.mark.parametrize("k", [2, 3])
def test_finite_index(k):
    for M in [m([2]), m([2, 1], [0, 2]), m([3, 1], [1, 1]), m([0, -2], [1, 0]), m([-2, 1], [0, 3])]:
        assert classify(M, M**k).witness == (k, 1)


def test_square_reduction_agrees():
    # squaring both sides is how negative determinants are normally removed
    for M, N in itertools.product(POOL, repeat=2):
        if M.n != N.n:
            continue
        assert classify(M, N).equivalent == classify(M @ M, N @ N).equivalent


def test_conjugation_does_not_change_verdicts():
    rng = random.Random(6)
    for M in POOL:
        S = unimodular(M.n, rng)
        assert classify(M, S @ M @ S.inverse()).witness == (1, 1)


def test_max_multiple_cross_check_is_silent():
    for M, N in itertools.product(POOL[:10], repeat=2):
        assert classify(M, N, max_multiple=8).equivalent == classify(M, N).equivalent


def test_to_json():
    js = classify(m([2]), m([8])).to_json(5)
    assert js["witness"] == [3, 1] and js["certificate"] == MATCHED
    assert js["ajf_n"][0]["modulus"]["minpoly"] == [-8, 1]
