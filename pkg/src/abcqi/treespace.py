"""Addresses of coherent lines in the directed d-ary tree and the boundary ultrametric.

An address is a digit at every integer height. Heights below ``base_height``
carry the digit 0, so every pair of distinct addresses has a lowest height
where they disagree. From ``base_height`` upward the stream is a finite
prefix followed by a repeating period, which keeps everything exact.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import sympy

from .classifier import DependencePair, multiplicative_dependence
from .errors import ParseError

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_LITERAL = re.compile(r"^\s*(-?\d+):([0-9a-z]*)(?:\(([0-9a-z]+)\))?\s*$")


def _minimal_period(period: tuple) -> tuple:
    n = len(period)
    for k in range(1, n + 1):
        if n % k == 0 and period == period[:k] * (n // k):
            return period[:k]
    return period


@dataclass(frozen=True)
class TreeAddress:
    """Eventually periodic digit stream anchored at ``base_height``.

    Stored in canonical form: the period is minimal, no prefix digit can be
    folded into the period, and the first digit is nonzero (the all-zero
    stream is ``TreeAddress(0, (), (0,))``). Equality of canonical forms is
    equality of streams.
    """

    base_height: int
    prefix: tuple
    period: tuple = (0,)

    def __post_init__(self):
        h = int(self.base_height)
        prefix = tuple(int(x) for x in self.prefix)
        period = tuple(int(x) for x in self.period)
        if not period:
            raise ValueError("period must be nonempty (use (0,) for a finite address)")
        if any(x < 0 for x in prefix + period):
            raise ValueError("digits must be nonnegative")
        period = _minimal_period(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = (period[-1],) + period[:-1]
        if set(period) == {0} and not prefix:
            h = 0
        else:
            while True:
                if prefix:
                    if prefix[0] != 0:
                        break
                    prefix = prefix[1:]
                else:
                    if period[0] != 0:
                        break
                    period = period[1:] + period[:1]
                h += 1
        object.__setattr__(self, "base_height", h)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def digit(self, height: int) -> int:
        k = height - self.base_height
        if k < 0:
            return 0
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def max_digit(self) -> int:
        return max(self.prefix + self.period)

    def is_zero(self) -> bool:
        return self.period == (0,) and not self.prefix

    def __str__(self):
        body = "".join(DIGITS[x] for x in self.prefix)
        if self.period != (0,):
            body += "(" + "".join(DIGITS[x] for x in self.period) + ")"
        return f"{self.base_height}:{body}"

    @classmethod
    def parse(cls, text: str) -> "TreeAddress":
        """Read ``"h:d0d1...(period)"``; digits 0-9 then a-z."""
        m = _LITERAL.match(text)
        if not m:
            raise ParseError(f"bad tree address literal {text!r}")
        prefix = tuple(DIGITS.index(c) for c in m.group(2))
        period = tuple(DIGITS.index(c) for c in m.group(3)) if m.group(3) else (0,)
        return cls(int(m.group(1)), prefix, period)

    def _horizon(self) -> int:
        """A height after which the stream is purely periodic."""
        return self.base_height + len(self.prefix)


def divergence_height(a: TreeAddress, b: TreeAddress) -> int:
    """Lowest height at which the two digit streams disagree."""
    if a == b:
        raise ValueError("identical addresses never diverge")
    lo = min(a.base_height, b.base_height)
    # past both horizons the streams are periodic with period lcm(len)
    p, q = len(a.period), len(b.period)
    hi = max(a._horizon(), b._horizon()) + p * q // gcd(p, q)
    for h in range(lo, hi + 1):
        if a.digit(h) != b.digit(h):
            return h
    raise AssertionError("unequal canonical addresses must differ within one joint period")


@dataclass(frozen=True)
class BoundaryMetric:
    """Ultrametric d**(-divergence height) on addresses with digits in [0, d)."""

    d: int

    def __post_init__(self):
        if int(self.d) < 2:
            raise ValueError("branching degree must be at least 2")

    def check(self, a: TreeAddress):
        if a.max_digit() >= self.d:
            raise ValueError(f"address {a} has a digit outside [0, {self.d})")

    def distance(self, a: TreeAddress, b: TreeAddress) -> Fraction:
        return qm_distance(self, a, b)

    def random_address(self, rng: random.Random, *, height_range=(-4, 4), max_prefix=8, max_period=4) -> TreeAddress:
        h = rng.randint(*height_range)
        prefix = tuple(rng.randrange(self.d) for _ in range(rng.randint(0, max_prefix)))
        period = tuple(rng.randrange(self.d) for _ in range(rng.randint(1, max_period)))
        return TreeAddress(h, prefix, period)


def qm_distance(m: BoundaryMetric, a: TreeAddress, b: TreeAddress) -> Fraction:
    m.check(a)
    m.check(b)
    if a == b:
        return Fraction(0)
    return Fraction(m.d) ** (-divergence_height(a, b))


# -- re-encoding between bases sharing a common root -------------------------


def _explode(a: TreeAddress, D: int, p: int) -> TreeAddress:
    """Base D**p digits written as p base-D digits each (most significant first)."""

    def split(x):
        out = []
        for _ in range(p):
            x, r = divmod(x, D)
            out.append(r)
        return tuple(reversed(out))

    prefix = tuple(y for x in a.prefix for y in split(x))
    period = tuple(y for x in a.period for y in split(x))
    return TreeAddress(a.base_height * p, prefix, period)


def _group(a: TreeAddress, D: int, q: int) -> TreeAddress:
    """Inverse of ``_explode``: a base-D stream regrouped into base D**q."""
    h = a.base_height
    lead = h % q
    prefix = (0,) * lead + a.prefix
    h -= lead
    period = a.period
    while len(prefix) % q:
        prefix += (period[0],)
        period = period[1:] + period[:1]
    period = period * (q // gcd(q, len(period)))

    def join(chunk):
        x = 0
        for y in chunk:
            x = x * D + y
        return x

    return TreeAddress(
        h // q,
        tuple(join(prefix[i : i + q]) for i in range(0, len(prefix), q)),
        tuple(join(period[i : i + q]) for i in range(0, len(period), q)),
    )


def common_base(d1: int, d2: int) -> Optional[tuple]:
    """(D, p, q) with d1 = D**p, d2 = D**q and D not a perfect power, or None."""
    dep = multiplicative_dependence(d1, d2)
    if dep is None:
        return None
    p, q = dep.b, dep.a
    # d1 = E**p and d2 = E**q for a common E; then reduce E to its root
    E = sympy.integer_nthroot(d1, p)[0]
    f = sympy.factorint(E)
    g = 0
    for e in f.values():
        g = gcd(g, e)
    D = sympy.integer_nthroot(E, g)[0]
    return int(D), p * g, q * g


def reencode(a: TreeAddress, d_from: int, d_to: int) -> TreeAddress:
    """Same boundary point written in base ``d_to`` via the common root base."""
    cb = common_base(d_from, d_to)
    if cb is None:
        raise ValueError(f"{d_from} and {d_to} have no common base")
    D, p, q = cb
    return _group(_explode(a, D, p), D, q)


@dataclass(frozen=True)
class RescalingCheck:
    pair: DependencePair
    base: int
    p: int
    q: int
    constant: Fraction
    bound: int
    passed: bool
    samples: int


def check_power_rescaling(
    m1: BoundaryMetric, m2: BoundaryMetric, *, samples: int = 300, seed: int = 0
) -> Optional[RescalingCheck]:
    """Minimal (a, b) with d1**a == d2**b, plus a measured bilipschitz constant
    of the re-encoding map between the two boundary metrics.

    The constant is max over random pairs of max(r, 1/r) where r is the
    distance ratio; it must stay below D**max(p, q).
    """
    dep = multiplicative_dependence(m1.d, m2.d)
    if dep is None:
        return None
    D, p, q = common_base(m1.d, m2.d)
    rng = random.Random(seed)
    worst = Fraction(1)
    for _ in range(samples):
        x = m1.random_address(rng)
        y = m1.random_address(rng)
        if rng.random() < 0.5:
            # share a long common stretch so small distances get exercised
            cut = rng.randint(0, 6)
            y = TreeAddress(x.base_height, x.prefix[:cut] + y.prefix, y.period) if x.prefix else y
        if x == y:
            continue
        r = m2.distance(reencode(x, m1.d, m2.d), reencode(y, m1.d, m2.d)) / m1.distance(x, y)
        worst = max(worst, r, 1 / r)
    bound = D ** max(p, q)
    return RescalingCheck(dep, D, p, q, worst, bound, worst <= bound, samples)


def separated_count(m: BoundaryMetric, center: TreeAddress, h: int) -> int:
    """Size of a maximal set of addresses in the open unit ball about ``center``
    with pairwise distance >= d**-h, found greedily by enumeration.

    Candidates copy ``center`` at heights <= 0 and range over every digit
    string on heights 1..h+1. Two addresses are at distance >= d**-h exactly
    when they diverge at height <= h, i.e. when their digits up to height h
    differ, so the greedy scan keeps one candidate per such digit signature.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    d = m.d
    lo = min(center.base_height, 0)
    base = [center.digit(t) for t in range(lo, 1)]
    chosen: list = []
    signatures: set = set()
    for code in range(d ** (h + 1)):
        tail = []
        for _ in range(h + 1):
            code, r = divmod(code, d)
            tail.append(r)
        cand = TreeAddress(lo, tuple(base + tail[::-1]), (0,))
        if qm_distance(m, cand, center) >= 1:
            continue
        sig = tuple(cand.digit(t) for t in range(lo, h + 1))
        if sig not in signatures:
            signatures.add(sig)
            chosen.append(cand)
    return len(chosen)
