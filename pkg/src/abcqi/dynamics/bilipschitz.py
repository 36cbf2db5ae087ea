"""Uniform bilipschitz comparison of d_{M,t} and d_{N,(s/r)t}.

When M**r and N**s share an absolute Jordan form, the nonelliptic
generators r*Xbar_M and s*Xbar_N (log-moduli on each root space plus the
unipotent logarithm) are conjugate over R. A conjugator A = C_N C_M^-1 is
built from Jordan chain bases C of the nilpotent parts, level by level in
the canonical order (modulus descending, then block size descending). The
rotation parts of the two flows are bounded, so v -> A v distorts
|M**-t v| against |N**-(s/r)t A v| by a factor bounded uniformly in t.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError
from ..exact import RationalMatrix, absolute_jordan_form, ajf_power
from . import numeric as nm
from .subgroup import OneParameterSubgroup


def _chain_basis(S: OneParameterSubgroup, scale):
    """Columns: Jordan chains of scale * (unipotent log) on each modulus level."""
    ctx = S.ctx
    nil = nm.to_mp(ctx, S.log_unipotent) * nm.mp_fraction(ctx, scale)
    cols = []
    for lvl in S.levels:  # modulus descending
        basis = nm.orth(ctx, lvl.projector, lvl.dim)
        for chain in nm.jordan_chains(ctx, nil, basis, lvl.blocks):  # size descending
            cols.extend(chain)
    return nm.hstack(ctx, cols)


def conjugator(SM: OneParameterSubgroup, SN: OneParameterSubgroup, r: int, s: int):
    """A with A (r Xbar_M) A^-1 = s Xbar_N, where M**t = exp(t Xbar_M) up to rotation.

    SM and SN may have squared their matrices; the generators of the
    original M and N are the stored ones divided by 2**squarings.
    """
    eM = 2**SM.squarings
    eN = 2**SN.squarings
    CM = _chain_basis(SM, Fraction(r, eM))
    CN = _chain_basis(SN, Fraction(s, eN))
    ctx = SM.ctx
    return ctx.matrix(CN.tolist()) * ctx.inverse(CM)


@dataclass(frozen=True)
class BilipschitzResult:
    K: object
    passed: bool
    first_third: object
    last_third: object
    ratios: tuple  # (t, worst max(q, 1/q) at t)
    conjugator: object

    def __iter__(self):
        return iter((self.K, self.passed))


def default_t_samples(lo: float = -30.0, hi: float = 30.0, count: int = 31) -> list:
    return [lo + (hi - lo) * j / (count - 1) for j in range(count)]


def verify_uniform_bilipschitz(
    M: RationalMatrix,
    N: RationalMatrix,
    r: int,
    s: int,
    t_samples: Sequence = None,
    *,
    precision: int = 60,
    vectors: int = 6,
    seed: int = 0,
    trend_factor: float = 1.5,
) -> BilipschitzResult:
    """Measure K = sup max(q, 1/q), q = |N**-(s/r)t A v| / |M**-t v|.

    By translation invariance d(x, y) depends on x - y only, so random
    difference vectors v stand in for random pairs. Passes when K is finite
    and the worst ratio over the first third of the sorted t samples is
    within ``trend_factor`` of that over the last third.
    """
    if ajf_power(absolute_jordan_form(M), r) != ajf_power(absolute_jordan_form(N), s):
        raise PreconditionError("AJF(M)**r and AJF(N)**s differ")
    SM = OneParameterSubgroup(M, precision)
    SN = OneParameterSubgroup(N, precision)
    ctx = SM.ctx
    A = conjugator(SM, SN, r, s)
    AN = SN.ctx.matrix(A.tolist())
    eM = 2**SM.squarings
    eN = 2**SN.squarings
    rng = random.Random(seed)
    vs = [nm.random_unit(ctx, rng, M.n) for _ in range(vectors)]
    ts = sorted(t_samples if t_samples is not None else default_t_samples())
    ratio = Fraction(s, r)
    rows = []
    for t in ts:
        t_mp = ctx.mpf(t)
        FM = SM.flow(-t_mp / eM)
        FN = SN.flow(-t_mp * nm.mp_fraction(ctx, ratio) / eN)
        worst = ctx.zero
        for v in vs:
            w = SN.ctx.matrix(v.tolist())
            q = ctx.mpf(SN.ctx.norm(FN * (AN * w))) / ctx.norm(FM * v)
            worst = max(worst, q, 1 / q)
        rows.append((t, worst))
    K = max(w for _, w in rows)
    third = max(1, len(rows) // 3)
    first = max(w for _, w in rows[:third])
    last = max(w for _, w in rows[-third:])
    finite = ctx.isfinite(K)
    passed = bool(finite and max(first, last) <= trend_factor * min(first, last))
    return BilipschitzResult(K, passed, first, last, tuple(rows), A)
