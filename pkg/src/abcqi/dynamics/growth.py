"""Growth of t -> |M**t v| and recovery of the absolute Jordan form from it.

A vector whose top component lies in V_{l,i} \\ V_{l,i-1} grows like
l**t * t**i. ``growth_profile`` fits

    log|M**t v| = c0 + rate*t + degree*log t + c3/t + c4/t**2

jointly on a window [t_max/2, t_max]. The 1/t terms absorb the lower-order
polynomial coefficients so the log t coefficient settles near an integer.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field, replace
from typing import Optional

from ..errors import CenterPresentError
from ..exact import AbsoluteJordanForm, AlgebraicReal
from . import numeric as nm
from .subgroup import OneParameterSubgroup

RESOLVED = "RESOLVED"
UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class GrowthProfile:
    rate: object
    degree: int
    residual: object
    degree_estimate: object
    status: str
    t_max: float
    method: str = "regression"

    @property
    def resolved(self) -> bool:
        return self.status == RESOLVED

    def key(self) -> tuple:
        return (float(self.rate), self.degree)


@dataclass(frozen=True)
class GrowthConfig:
    window: float = 0.5
    points: int = 41
    degree_threshold: float = 0.2
    residual_threshold: float = 1e-3
    inverse_powers: int = 2


def growth_profile(
    S: OneParameterSubgroup,
    v,
    t_max: float = 40.0,
    *,
    config: GrowthConfig = GrowthConfig(),
    nonelliptic: bool = False,
    refine: bool = True,
    csv_path: Optional[str] = None,
) -> GrowthProfile:
    """Fit (rate, degree) of t -> |M**t v| on [window*t_max, t_max].

    The linear regression above always runs. With ``refine`` the result is
    then polished against the exact shape l**(2t) * Q(t), Q a polynomial,
    which is what |M**t v|**2 is when v sits in one root space with real
    positive spectrum. The polished values are used only when that model
    reproduces the samples to working precision; otherwise (rotations,
    mixed moduli) the regression answer stands.
    """
    ctx = S.ctx
    v = v if hasattr(v, "rows") else nm.vector(ctx, v)
    nv = ctx.norm(v)
    if nv == 0:
        raise ValueError("growth profile of the zero vector")
    v = v / nv
    t_max = float(t_max)
    lo = t_max * config.window
    k = config.points
    ts = [ctx.mpf(lo) + (ctx.mpf(t_max) - lo) * j / (k - 1) for j in range(k)]
    y = _log_norms(S, v, ts, nonelliptic)
    A = ctx.matrix([[1, t, ctx.log(t)] + [t**-j for j in range(1, config.inverse_powers + 1)] for t in ts])
    coef, _ = ctx.qr_solve(A, ctx.matrix(y))
    fit = A * coef
    residual = ctx.sqrt(sum((fit[j] - y[j]) ** 2 for j in range(k)) / k)
    rate, est = coef[1], coef[2]
    method = "regression"
    if refine:
        polished = _exact_model_fit(ctx, ts, y, rate, 2 * (S.generator.rows - 1), S.precision)
        if polished is not None:
            rate, est, residual = polished
            method = "exact-model"
    degree = int(ctx.nint(est))
    ok = degree >= 0 and abs(est - degree) <= config.degree_threshold and residual <= config.residual_threshold
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "log_norm"])
            for t, yy in zip(ts, y):
                wr.writerow([ctx.nstr(t, 17), ctx.nstr(yy, 17)])
    if not ok and not nonelliptic and nm.max_abs(ctx, S.generator - S.nonelliptic_generator) > 0:
        # M**t = Mbar**t P**t with P**t a bounded commuting rotation, so the
        # nonelliptic flow has the same (rate, degree) without oscillation
        p = growth_profile(S, v, t_max, config=config, nonelliptic=True, refine=refine)
        if p.resolved:
            return replace(p, method="nonelliptic " + p.method)
    return GrowthProfile(rate, max(degree, 0), residual, est, RESOLVED if ok else UNRESOLVED, t_max, method)


def _exact_model_fit(ctx, ts, y, r0, max_degree, precision):
    """Rate and degree from the linear recurrence of the squared norms.

    When |M**t v|**2 = exp(2rt) * Q(t) with deg Q = D (real positive
    spectrum on one root space; D = 2*degree), equally spaced samples g_j
    satisfy a recurrence of order D+1 whose characteristic polynomial is
    (x - exp(2rh))**(D+1). The recurrence is fitted by linear least squares
    for D = 0, 2, 4, ...; the first D that fits to a third of the working
    digits gives the degree, and exp(2rh) is the mean of its roots, read
    off the second coefficient. The fitted polynomial must then really be
    (x - q)**(D+1): oscillating norms also obey short recurrences, with
    roots spread around a circle. Returns (rate, degree, residual) or None.
    """
    k = len(ts)
    h = ts[1] - ts[0]
    # divide out the regression rate so the samples stay of moderate size
    g = [ctx.exp(2 * (y[j] - y[0]) - 2 * r0 * (ts[j] - ts[0])) for j in range(k)]
    tol = ctx.mpf(10) ** (-(precision // 3))
    for D in range(0, max_degree + 1, 2):
        rows = k - D - 1
        if rows <= D + 1:
            break
        A = ctx.matrix([[g[j + i] for i in range(D + 1)] for j in range(rows)])
        rhs = ctx.matrix([-g[j + D + 1] for j in range(rows)])
        try:
            a, res = ctx.qr_solve(A, rhs)
        except ValueError:
            # rank deficient: a shorter recurrence already holds but did not fit
            return None
        rel = res / ctx.norm(rhs)
        if rel <= tol:
            q = -a[D] / (D + 1)
            if q <= 0:
                return None
            # coefficient of x**i in (x - q)**(D+1)
            want = [ctx.binomial(D + 1, i) * (-q) ** (D + 1 - i) for i in range(D + 1)]
            if max(abs(a[i] - want[i]) / max(abs(want[i]), q ** (D + 1)) for i in range(D + 1)) > ctx.sqrt(tol):
                return None
            mean_root = q
            return r0 + ctx.log(mean_root) / (2 * h), ctx.mpf(D) / 2, rel
    return None


def _log_norms(S, v, ts, nonelliptic):
    ctx = S.ctx
    G = S.nonelliptic_generator if nonelliptic else S.generator
    w = ctx.expm(ts[0] * G) * v
    nrm = ctx.norm(w)
    acc = ctx.log(nrm)
    out = [acc]
    w = w / nrm
    step = ctx.expm((ts[1] - ts[0]) * G) if len(ts) > 1 else None
    for _ in ts[1:]:
        w = step * w
        nrm = ctx.norm(w)
        acc += ctx.log(nrm)
        out.append(acc)
        w = w / nrm
    return out


# -- reconstruction -------------------------------------------------------


@dataclass(frozen=True)
class GrowthLevel:
    direction: int  # +1 forward time, -1 backward
    rate: object
    degree: int
    codim: int


@dataclass
class ApproximateAJF:
    """Numeric moduli with block sizes, canonical order like the exact form."""

    blocks: list
    levels: list = field(default_factory=list)

    def sizes(self) -> tuple:
        return tuple(s for _, s in self.blocks)

    def max_modulus_error(self, exact: AbsoluteJordanForm) -> Optional[float]:
        """Largest |approx - exact| over aligned blocks, or None if the size
        sequences differ."""
        if self.sizes() != exact.sizes():
            return None
        return max((abs(float(a) - float(m)) for (a, _), (m, _) in zip(self.blocks, exact.blocks)), default=0.0)

    def matches(self, exact: AbsoluteJordanForm, tol: float = 1e-4) -> bool:
        err = self.max_modulus_error(exact)
        return err is not None and err <= tol

    def to_json(self, digits: int = 12) -> list:
        return [{"size": s, "modulus": format(float(m), f".{digits}g")} for m, s in self.blocks]


def reconstruct_ajf_from_growth(
    S: OneParameterSubgroup,
    samples: int = 3,
    *,
    t_max: float = 1e4,
    seed: int = 0,
    config: GrowthConfig = GrowthConfig(),
) -> ApproximateAJF:
    """Rebuild the absolute Jordan form from growth data alone.

    Works on the nonelliptic flow (eigenvalues replaced by their moduli, so
    norms do not oscillate). Each step profiles ``samples`` random vectors of
    the current subspace W to read the top (rate, degree), then measures how
    many dimensions carry that growth: the numeric rank of M**T on W for a
    huge T. The slower-growing part of W is again invariant, so the flow is
    restricted to it before the next step; this keeps rounding errors from
    the faster directions out of the later profiles. Forward time exhausts
    the expanding part, backward time the rest.
    """
    one = AlgebraicReal.from_rational(1)
    if any(m.compare(one) == 0 for m, _ in S.ajf.blocks):
        raise CenterPresentError("a modulus equals 1: growth cannot separate the central part")
    ctx = S.ctx
    rng = random.Random(seed)
    big_t = ctx.mpf(10) ** (S.precision // 3)
    gap = ctx.mpf(10) ** (-(S.precision // 6))
    G = S.nonelliptic_generator
    levels: list = []
    for direction in (1, -1):
        while G is not None:
            flow = _Flow(ctx, direction * G, S.precision)
            k = G.rows
            profs = [
                growth_profile(flow, nm.random_unit(ctx, rng, k), t_max, config=config)
                for _ in range(max(1, samples))
            ]
            top = max(profs, key=lambda p: (p.rate, p.degree))
            if direction == 1 and top.rate < 0:
                break
            if any(p.degree != top.degree or not p.resolved for p in profs):
                top = _consensus(profs)
            E = ctx.expm(big_t * flow.generator)
            _, sv, V = ctx.svd_r(E, full_matrices=True)
            codim = sum(1 for x in sv if x > sv[0] * gap)
            levels.append(GrowthLevel(direction, top.rate, top.degree, codim))
            if codim == k:
                G = None
            else:
                W = V[codim:, :].T
                G = W.T * G * W
    return ApproximateAJF(_blocks_from_levels(ctx, levels, 2**S.squarings), levels)


class _Flow:
    """A bare generator, enough for growth_profile."""

    def __init__(self, ctx, G, precision):
        self.ctx = ctx
        self.generator = G
        self.nonelliptic_generator = G
        self.precision = precision


def _consensus(profs):
    degrees = [p.degree for p in profs if p.resolved]
    if not degrees:
        return profs[0]
    d = max(set(degrees), key=degrees.count)
    return next(p for p in profs if p.resolved and p.degree == d)


def _blocks_from_levels(ctx, levels, root: int = 1) -> list:
    """Levels of one modulus come with degrees d, d-1, ..., 0 and codims
    c_d <= ... <= c_0; c_i counts blocks of size > i. Moduli are taken to
    the power 1/root to undo an automatic squaring."""
    blocks = []
    run: list = []
    for lv in levels:
        run.append(lv)
        if lv.degree == 0:
            rate = lv.rate
            modulus = ctx.exp(lv.direction * rate / root)
            codims = {r.degree: r.codim for r in run}
            top = max(codims)
            for size in range(top + 1, 0, -1):
                above = codims.get(size, 0) if size <= top else 0
                count = codims.get(size - 1, 0) - above
                blocks.extend([(modulus, size)] * max(count, 0))
            run = []
    if run:
        # a run that never reached degree 0 is inconsistent; report it raw
        for lv in run:
            m = ctx.exp(lv.direction * lv.rate / root)
            blocks.append((m, lv.degree + 1))
    blocks.sort(key=lambda b: (-b[0], -b[1]))
    return blocks
