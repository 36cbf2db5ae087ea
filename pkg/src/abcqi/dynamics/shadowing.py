"""Pseudo-orbits of the vertical flow on R^n x R and their shadows.

A point of G_M is (x, s) with x in R^n and height s in R; the flow moves the
height, (x, s) -> (x, s + tau). A segment (x, s, t) is the flow line from
(x, s) to (x, s + t). Consecutive segments are joined by a jump from
(x_j, s_j + t_j) to (x_{j+1}, s_{j+1}) of size

    d_{M, s_{j+1}}(x_j, x_{j+1}) + |s_{j+1} - s_j - t_j|.

In d_{M,h} = |M**-h (.)| the expanding directions V+ shrink as h grows, so
for this flow V+ is the stable bundle and V- the unstable one. A shadow
moves each x_i by an offset in V+ + V- so that all spatial jumps lie in the
central part V0; the V+ parts of earlier jumps are accumulated forward, the
V- parts of later jumps backward, and nothing is carried past either end of
the orbit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import numeric as nm
from .subgroup import OneParameterSubgroup, splitting


@dataclass(frozen=True)
class Segment:
    point: object  # mp column vector
    start: object  # height s_i
    duration: object  # t_i


@dataclass(frozen=True)
class PseudoOrbit:
    segments: tuple
    epsilon: float
    T: float

    def jumps(self, S: OneParameterSubgroup) -> list:
        """Size of each jump between consecutive segments."""
        ctx = S.ctx
        out = []
        for a, b in zip(self.segments, self.segments[1:]):
            space = ctx.norm(S.flow(-b.start) * (b.point - a.point))
            out.append(space + abs(b.start - a.start - a.duration))
        return out

    def validate(self, S: OneParameterSubgroup):
        if any(seg.duration <= self.T for seg in self.segments):
            raise ValueError("every segment must last longer than T")
        if any(j >= self.epsilon for j in self.jumps(S)):
            raise ValueError("a jump is not smaller than epsilon")


def random_pseudo_orbit(
    S: OneParameterSubgroup,
    count: int,
    *,
    epsilon: float = 0.1,
    T: float = 1.0,
    seed: int = 0,
    max_extra: float = 1.5,
) -> PseudoOrbit:
    """``count`` segments of duration in (T, T + max_extra] joined by random
    jumps of size just under ``epsilon``, split between space and time."""
    ctx = S.ctx
    rng = random.Random(seed)
    n = S.n
    x = nm.random_unit(ctx, rng, n)
    s = ctx.zero
    segs = []
    for i in range(count):
        t = ctx.mpf(T) + ctx.mpf(max_extra) * (1 - rng.random())
        segs.append(Segment(x, s, t))
        if i + 1 == count:
            break
        size = ctx.mpf(epsilon) * (ctx.mpf("0.95") - ctx.mpf("0.4") * rng.random())
        share = ctx.mpf(rng.random())
        dt = size * (1 - share) * rng.choice((-1, 1))
        s_next = s + t + dt
        w = nm.random_unit(ctx, rng, n) * (size * share)
        x = x + S.flow(s_next) * w
        s = s_next
    return PseudoOrbit(tuple(segs), float(epsilon), float(T))


@dataclass(frozen=True)
class ShadowResult:
    shadow: PseudoOrbit
    delta: object
    offsets: tuple
    center_defect: object
    bound: object

    def __iter__(self):
        return iter((self.shadow, self.delta))


def shadow_pseudo_orbit(S: OneParameterSubgroup, P: PseudoOrbit, *, samples: int = 9) -> ShadowResult:
    """Shadow P by a pseudo-orbit whose jumps lie in V0 + R.

    ``delta`` is the largest d_{M, s_i + tau}(x_i, x_i + c_i) over ``samples``
    values of tau in [0, t_i]; ``center_defect`` the largest relative size of
    the V+ + V- part of a shadow jump; ``bound`` the analytic estimate of
    ``shadowing_bound``.
    """
    ctx = S.ctx
    sp = splitting(S)
    segs = P.segments
    k = len(segs)
    deltas = [b.point - a.point for a, b in zip(segs, segs[1:])]
    plus = [sp.P_plus * d for d in deltas]
    minus = [sp.P_minus * d for d in deltas]
    zero = ctx.matrix(S.n, 1)
    offsets = []
    for i in range(k):
        c = zero.copy()
        for j in range(i):
            c -= plus[j]
        for j in range(i, k - 1):
            c += minus[j]
        offsets.append(c)
    shadow = PseudoOrbit(
        tuple(Segment(seg.point + c, seg.start, seg.duration) for seg, c in zip(segs, offsets)),
        P.epsilon,
        P.T,
    )
    delta = ctx.zero
    for seg, c in zip(segs, offsets):
        for m in range(samples):
            tau = seg.duration * m / max(samples - 1, 1)
            delta = max(delta, ctx.norm(S.flow(-(seg.start + tau)) * c))
    defect = ctx.zero
    hyperbolic = sp.P_plus + sp.P_minus
    for a, b in zip(shadow.segments, shadow.segments[1:]):
        d = b.point - a.point
        defect = max(defect, ctx.norm(hyperbolic * d) / max(ctx.norm(d), 1))
    return ShadowResult(shadow, delta, tuple(offsets), defect, shadowing_bound(S, P, sp))


@dataclass(frozen=True)
class DecayConstant:
    """f(u) <= K * rho**u on the sampled range of u."""

    K: object
    rho: object


def _decay(S, projector, flows, lam, size, us):
    """Sampled K for f(u) = |flows[k] projector| against rho = lam**-gamma,
    flows[k] being M**(+-us[k]).

    gamma = 1 for semisimple extremal blocks; 0.9 otherwise, leaving room
    for the polynomial factor of a Jordan block."""
    ctx = S.ctx
    if lam is None:
        return DecayConstant(ctx.zero, ctx.zero)
    gamma = ctx.one if size == 1 else ctx.mpf("0.9")
    rho = lam ** (-gamma)
    K = ctx.zero
    for u, E in zip(us, flows):
        f = nm.op_norm(ctx, E * projector)
        K = max(K, f / rho**u)
    return DecayConstant(K, rho)


def shadowing_bound(S: OneParameterSubgroup, P: PseudoOrbit, sp=None, *, grid: int = 40):
    """Geometric-series bound for the shadowing distance.

    With e_j the size of jump j, h_j = s_{j+1}, and decay constants for
    |M**-u pi+| and |M**u pi-|,

        delta <= max_i  sum_{j<i} K+ rho+**(s_i - h_j) e_j
                      + sum_{j>=i} K- rho-**(h_j - s_i - t_i) e_j.
    """
    ctx = S.ctx
    sp = sp or splitting(S)
    segs = P.segments
    eps = P.jumps(S)
    k = len(segs)
    heights = [b.start for b in segs[1:]]
    gaps = []
    for i, seg in enumerate(segs):
        gaps += [seg.start - heights[j] for j in range(i)]
        gaps += [heights[j] - seg.start - seg.duration for j in range(i, k - 1)]
    # the bound needs f(u) <= K rho**u for u from each gap over one segment length
    lo = min([ctx.zero] + gaps)
    hi = max([ctx.zero] + gaps) + max(seg.duration for seg in segs)
    us = [lo + (hi - lo) * m / grid for m in range(grid + 1)] + gaps
    one = ctx.one
    expanding = [(lv.modulus.to_mpf(ctx), lv.nilpotency) for lv in S.levels if lv.modulus.to_mpf(ctx) > one]
    contracting = [(1 / lv.modulus.to_mpf(ctx), lv.nilpotency) for lv in S.levels if lv.modulus.to_mpf(ctx) < one]
    lp = min(expanding, default=(None, 1))
    lm = min(contracting, default=(None, 1))
    forward = [S.flow(u) for u in us]
    backward = [ctx.inverse(E) for E in forward] if lp[0] is not None else forward
    dp = _decay(S, sp.P_plus, backward, lp[0], lp[1], us)
    dm = _decay(S, sp.P_minus, forward, lm[0], lm[1], us)
    worst = ctx.zero
    for i, seg in enumerate(segs):
        total = ctx.zero
        for j in range(i):
            total += dp.K * dp.rho ** (seg.start - heights[j]) * eps[j]
        for j in range(i, k - 1):
            total += dm.K * dm.rho ** (heights[j] - seg.start - seg.duration) * eps[j]
        worst = max(worst, total)
    return worst


def exact_orbit(S: OneParameterSubgroup, x: Sequence, durations: Sequence, start=0) -> PseudoOrbit:
    """Consecutive pieces of one flow line: every jump is zero."""
    ctx = S.ctx
    v = nm.vector(ctx, x) if not hasattr(x, "rows") else x
    s = ctx.mpf(start)
    segs = []
    for t in durations:
        segs.append(Segment(v, s, ctx.mpf(t)))
        s += ctx.mpf(t)
    return PseudoOrbit(tuple(segs), 1.0, float(min(durations)) / 2)


def orbit_from_jumps(S: OneParameterSubgroup, x0: Sequence, jumps: Sequence, durations: Sequence, *, epsilon: Optional[float] = None, T: float = 0.5) -> PseudoOrbit:
    """Segments of the given durations; jump j adds M**h jumps[j] in space
    (so its d_{M,h} size is |jumps[j]|) with no time jump."""
    ctx = S.ctx
    x = nm.vector(ctx, x0)
    s = ctx.zero
    segs = []
    for i, t in enumerate(durations):
        t = ctx.mpf(t)
        segs.append(Segment(x, s, t))
        s = s + t
        if i < len(jumps):
            x = x + S.flow(s) * nm.vector(ctx, jumps[i])
    eps = epsilon if epsilon is not None else float(max((ctx.norm(nm.vector(ctx, j)) for j in jumps), default=0)) * 1.01 + 1e-300
    return PseudoOrbit(tuple(segs), eps, T)
