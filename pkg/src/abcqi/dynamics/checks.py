"""Numeric property checks run by ``abcqi verify`` and the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..errors import CenterPresentError
from ..exact import absolute_jordan_form
from .growth import GrowthConfig, reconstruct_ajf_from_growth
from .shadowing import random_pseudo_orbit, shadow_pseudo_orbit
from .subgroup import OneParameterSubgroup, evaluate_subgroup, splitting


@dataclass(frozen=True)
class Envelope:
    """A*l**t <= |M**t v| / |v| <= B*l**t*t**i on [1, t_max]."""

    level: int
    index: int
    A: float
    B: float
    t_max: float


def _envelope(S, v, lam, i, t_max, step):
    ctx = S.ctx
    w = S.flow(1) * v
    stepper = S.flow(step)
    count = int(round((t_max - 1) / step))
    lo = hi = None
    scale = lam  # lam**t, updated multiplicatively
    lam_step = lam**step
    for m in range(count + 1):
        t = 1 + m * step
        ratio = ctx.norm(w) / scale
        top = ratio / ctx.mpf(t) ** i
        lo = ratio if lo is None else min(lo, ratio)
        hi = top if hi is None else max(hi, top)
        w = stepper * w
        scale *= lam_step
    return lo, hi


@dataclass(frozen=True)
class EnvelopeReport:
    short: tuple
    long: tuple
    drift: float
    passed: bool


def growth_envelopes(S: OneParameterSubgroup, *, t_max: float = 60.0, step: float = 0.5, tolerance: float = 0.05) -> EnvelopeReport:
    """Fit A, B for every basis vector of every V_{l,i} on [1, t_max/2] and
    [1, t_max]; passes when A > 0 and neither constant moves by more than
    ``tolerance`` (relative) between the two ranges."""
    ctx = S.ctx
    sp = splitting(S)
    short, long = [], []
    drift = 0.0
    for k, lvl in enumerate(sp.levels):
        lam = lvl.modulus.to_mpf(ctx)
        for i, basis in enumerate(sp.filtration[k]):
            for j in range(basis.cols):
                v = basis[:, j]
                a1, b1 = _envelope(S, v, lam, i, t_max / 2, step)
                a2, b2 = _envelope(S, v, lam, i, t_max, step)
                short.append(Envelope(k, i, float(a1), float(b1), t_max / 2))
                long.append(Envelope(k, i, float(a2), float(b2), t_max))
                drift = max(drift, float(abs(a2 / a1 - 1)), float(abs(b2 / b1 - 1)))
    passed = all(e.A > 0 for e in long) and drift < tolerance
    return EnvelopeReport(tuple(short), tuple(long), drift, passed)


def cocycle_error(S: OneParameterSubgroup, *, samples: int = 8, seed: int = 0, span: float = 10.0):
    """Largest relative entrywise gap between M**(t+s) and M**t M**s."""
    ctx = S.ctx
    rng = random.Random(seed)
    worst = ctx.zero
    for _ in range(samples):
        t = ctx.mpf(rng.uniform(-span, span))
        s = ctx.mpf(rng.uniform(-span, span))
        whole = evaluate_subgroup(S, t + s)
        parts = evaluate_subgroup(S, t) * evaluate_subgroup(S, s)
        scale = max(abs(x) for x in whole)
        worst = max(worst, max(abs(x) for x in (whole - parts)) / scale)
    return worst


def verify_report(S: OneParameterSubgroup, *, config: GrowthConfig = GrowthConfig(), digits: int = 12) -> dict:
    """Pass/fail with measured constants for envelopes, reconstruction,
    shadowing and the cocycle identity."""
    ctx = S.ctx

    out: dict = {}
    env = growth_envelopes(S)
    out["growth_envelopes"] = {
        "passed": env.passed,
        "drift": env.drift,
        "t_range": [1.0, 60.0],
        "constants": [
            {"level": e.level, "index": e.index, "A": e.A, "B": e.B} for e in env.long
        ],
    }
    try:
        approx = reconstruct_ajf_from_growth(S, config=config)
    except CenterPresentError as exc:
        out["reconstruction"] = {"passed": None, "skipped": exc.code, "note": str(exc)}
    else:
        # moduli come back with any automatic squaring undone
        exact = absolute_jordan_form(S.original)
        err = approx.max_modulus_error(exact)
        out["reconstruction"] = {
            "passed": approx.matches(exact),
            "blocks": approx.to_json(digits),
            "max_modulus_error": err,
            "root_taken": 2**S.squarings,
        }
    orbit = random_pseudo_orbit(S, 10, epsilon=0.1, T=1.0)
    sh = shadow_pseudo_orbit(S, orbit)
    out["shadowing"] = {
        "passed": bool(sh.center_defect <= ctx.mpf(10) ** -10 and sh.delta <= sh.bound),
        "delta": float(sh.delta),
        "bound": float(sh.bound),
        "center_defect": float(sh.center_defect),
        "segments": len(orbit.segments),
        "epsilon": orbit.epsilon,
    }
    err = cocycle_error(S)
    out["cocycle"] = {"passed": bool(err <= ctx.mpf(10) ** -20), "max_relative_error": float(err), "span": [-10.0, 10.0]}
    return out
