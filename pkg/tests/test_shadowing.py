import pytest

from abcqi.dynamics import OneParameterSubgroup, random_pseudo_orbit, shadow_pseudo_orbit, splitting
from abcqi.dynamics.shadowing import exact_orbit, orbit_from_jumps
from abcqi.exact import RationalMatrix
from oracles import block_diag, planted_jordan


def m(*rows):
    return RationalMatrix(rows)


def test_exact_orbit_is_its_own_shadow():
    S = OneParameterSubgroup(m([2, 1], [1, 1]))
    P = exact_orbit(S, [1, 2], [1.5] * 6)
    res = shadow_pseudo_orbit(S, P)
    shadow, delta = res
    assert delta == 0
    for a, b in zip(shadow.segments, P.segments):
        assert a.point == b.point and a.start == b.start and a.duration == b.duration


def test_geometric_series_for_doubling_map():
    # ten unit-time segments, each jump of d-size 0.1 in space
    S = OneParameterSubgroup(m([2]))
    P = orbit_from_jumps(S, [0], [[0.1]] * 9, [1] * 10)
    P.validate(S)
    res = shadow_pseudo_orbit(S, P)
    series = 0.1 * sum(2.0**-k for k in range(0, 10))
    assert float(res.delta) <= series <= 0.2
    assert float(res.delta) <= float(res.bound) * (1 + 1e-12)
    assert res.center_defect < 1e-40


def test_unipotent_everything_central():
    S = OneParameterSubgroup(m([1, 1], [0, 1]))
    P = random_pseudo_orbit(S, 8, seed=3)
    res = shadow_pseudo_orbit(S, P)
    assert res.delta == 0
    assert all(c.rows == 2 and max(abs(x) for x in c) == 0 for c in res.offsets)


@pytest.mark.parametrize(
    "M",
    [m([2, 0], [0, "1/2"]), m([2, 1], [1, 1]), m([3, 1], [1, 1]), planted_jordan([(2, 2)]), block_diag(m([2]), planted_jordan([(1, 2)]))],
)
def test_random_orbits_shadowed_within_bound(M):
    S = OneParameterSubgroup(M)
    sp = splitting(S)
    for seed in range(3):
        P = random_pseudo_orbit(S, 10, epsilon=0.1, T=1.0, seed=seed)
        P.validate(S)
        res = shadow_pseudo_orbit(S, P)
        assert res.center_defect <= 1e-10
        assert res.delta <= res.bound
        # jumps of the shadow have no hyperbolic part
        for a, b in zip(res.shadow.segments, res.shadow.segments[1:]):
            d = b.point - a.point
            hyp = (sp.P_plus + sp.P_minus) * d
            assert S.ctx.norm(hyp) <= 1e-10 * max(1, S.ctx.norm(d))


def test_validate_rejects_bad_orbits():
    S = OneParameterSubgroup(m([2]))
    with pytest.raises(ValueError):
        orbit_from_jumps(S, [0], [[0.1]], [0.2, 1], T=0.5).validate(S)
    P = orbit_from_jumps(S, [0], [[0.3]], [1, 1], epsilon=0.1)
    with pytest.raises(ValueError):
        P.validate(S)
