import pytest

from abcqi.dynamics import OneParameterSubgroup, cocycle_error, growth_envelopes, verify_report
from abcqi.exact import RationalMatrix
from oracles import block_diag, planted_jordan


def m(*rows):
    return RationalMatrix(rows)


@pytest.mark.parametrize("M", [m([2]), m([2, 1], [0, 2]), m([2, 1], [1, 1]), m([1, 1], [0, 1]), planted_jordan([(3, 3)])])
def test_envelopes_stable(M):
    rep = growth_envelopes(OneParameterSubgroup(M))
    assert rep.passed and rep.drift < 0.05
    assert all(e.A > 0 and e.B >= e.A for e in rep.long)


def test_envelope_constants_for_jordan_block():
    # |M**t e2| / 2**t = sqrt(1 + t**2/4), so with i = 1: A = sqrt(5)/2 at t = 1
    rep = growth_envelopes(OneParameterSubgroup(m([2, 1], [0, 2])))
    # V_{l,1} is the whole plane; its basis vector e1 gives A = B = 1
    top = sorted((e.A, e.B) for e in rep.long if e.index == 1)
    assert top == pytest.approx([(1, 1), (5**0.5 / 2, 5**0.5 / 2)], abs=1e-12)


def test_cocycle_error_small():
    S = OneParameterSubgroup(block_diag(m([0, -2], [1, 0]), m([3])))
    assert cocycle_error(S, samples=4) < 1e-40


@pytest.mark.parametrize("M", [m([2, 1], [0, 2]), m([2, 1], [1, 1]), m([-2, 1], [0, -2])])
def test_verify_report_all_pass(M):
    rep = verify_report(OneParameterSubgroup(M))
    assert set(rep) == {"growth_envelopes", "reconstruction", "shadowing", "cocycle"}
    assert all(v["passed"] is True for v in rep.values())


def test_verify_report_jordan_block_details():
    rep = verify_report(OneParameterSubgroup(m([2, 1], [0, 2])))
    blocks = rep["reconstruction"]["blocks"]
    assert [b["size"] for b in blocks] == [2]
    assert abs(float(blocks[0]["modulus"]) - 2) < 1e-6


def test_verify_report_center_skips_reconstruction():
    rep = verify_report(OneParameterSubgroup(m([1, 1], [0, 1])))
    assert rep["growth_envelopes"]["passed"] is True
    assert rep["reconstruction"]["passed"] is None
    assert rep["reconstruction"]["skipped"] == "CENTER_PRESENT"
