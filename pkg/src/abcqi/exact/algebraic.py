"""Real algebraic numbers as (minimal polynomial, isolating interval).

Floating point is only ever used to *find* roots. Every claim that a root
lies somewhere is checked with exact rational arithmetic: Sturm counts on
the real line, and for complex roots the disc bound
``|z - root| <= deg * |p(z) / p'(z)|`` evaluated at a Gaussian rational.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import isqrt
from typing import Callable, Iterator, Sequence

import mpmath

from .poly import IntPolynomial


def sqrt_bounds(x: Fraction, bits: int) -> tuple:
    """Rational (lower, upper) bounds on sqrt(x), x >= 0, spaced 2**-bits apart."""
    if x < 0:
        raise ValueError("negative square root")
    scale = 1 << bits
    lo = isqrt(x.numerator * scale * scale // x.denominator)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


def mpf_to_fraction(x) -> Fraction:
    man, exp = int(x.man), int(x.exp)
    if x < 0:
        man = -abs(man)
    return Fraction(man) * 2**exp if exp >= 0 else Fraction(man, 2**-exp)


def format_fraction(q: Fraction, digits: int) -> str:
    """Decimal rendering of q rounded to ``digits`` places after the point."""
    neg = q < 0
    q = abs(q)
    scaled = q * 10**digits
    n = int(scaled)
    if scaled - n >= Fraction(1, 2):
        n += 1
    s = str(n).rjust(digits + 1, "0")
    body = s[:-digits] + "." + s[-digits:] if digits else s
    return ("-" if neg and n else "") + body


@total_ordering
class AlgebraicReal:
    """A real root of an irreducible primitive integer polynomial.

    The interval [lo, hi] contains exactly one root of ``minpoly``. For
    rational values the interval is the single point; otherwise lo < hi and
    the polynomial has opposite signs at the two ends.
    """

    __slots__ = ("minpoly", "lo", "hi")

    def __init__(self, minpoly: IntPolynomial, lo, hi, *, check: bool = True):
        lo, hi = Fraction(lo), Fraction(hi)
        minpoly = minpoly.primitive()
        if check:
            if lo > hi:
                raise ValueError("empty isolating interval")
            if minpoly.degree < 1:
                raise ValueError("constant minimal polynomial")
            if minpoly.count_roots(lo, hi) != 1:
                raise ValueError(f"[{lo}, {hi}] does not isolate a single root of {minpoly}")
        if minpoly.degree == 1:
            lo = hi = Fraction(-minpoly.coeffs[0], minpoly.coeffs[1])
        object.__setattr__(self, "minpoly", minpoly)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicReal is immutable")

    @classmethod
    def from_rational(cls, q) -> "AlgebraicReal":
        q = Fraction(q)
        return cls(IntPolynomial.linear_for(q), q, q, check=False)

    @classmethod
    def real_roots(cls, p: IntPolynomial) -> list:
        """All real roots of the irreducible ``p``, ascending."""
        return [cls(p, lo, hi, check=False) for lo, hi in p.primitive().real_root_intervals()]

    # -- interval bookkeeping ----------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.lo

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self) -> "AlgebraicReal":
        if self.lo == self.hi:
            return self
        mid = (self.lo + self.hi) / 2
        s = self.minpoly.sign_at(mid)
        if s == 0:  # only possible for degree 1, kept for safety
            return AlgebraicReal(self.minpoly, mid, mid, check=False)
        if s == self.minpoly.sign_at(self.lo):
            return AlgebraicReal(self.minpoly, mid, self.hi, check=False)
        return AlgebraicReal(self.minpoly, self.lo, mid, check=False)

    def refined_to(self, width) -> "AlgebraicReal":
        a = self
        width = Fraction(width)
        coarse = max(width, Fraction(1, 2**40))
        while a.hi - a.lo > coarse:
            a = a.refine()
        if a.hi - a.lo > width:
            tight = a._newton_bracket(width)
            if tight is not None:
                return tight
        while a.hi - a.lo > width:
            a = a.refine()
        return a

    def _newton_bracket(self, width: Fraction) -> "AlgebraicReal | None":
        """Newton iteration in floating point from the midpoint, then an exact
        sign check on a bracket of the requested width around the result.
        None when the check fails (the caller falls back to bisection)."""
        ctx = mpmath.MPContext()
        ctx.prec = max(64, 2 * (width.denominator.bit_length() - width.numerator.bit_length()) + 32)
        c = list(reversed(self.minpoly.coeffs))
        dc = list(reversed(self.minpoly.derivative().coeffs))
        mid = (self.lo + self.hi) / 2
        x = ctx.mpf(mid.numerator) / mid.denominator
        for _ in range(2 * ctx.prec.bit_length() + 8):
            d = ctx.polyval(dc, x)
            if d == 0:
                return None
            step = ctx.polyval(c, x) / d
            x -= step
            if abs(step) < ctx.ldexp(1, -ctx.prec + 8):
                break
        r = mpf_to_fraction(x)
        lo, hi = max(self.lo, r - width / 4), min(self.hi, r + width / 4)
        if lo >= hi or hi - lo > width:
            return None
        if self.minpoly.sign_at(lo) * self.minpoly.sign_at(hi) >= 0:
            return None
        # one root in [self.lo, self.hi] and a sign change on [lo, hi] inside it
        return AlgebraicReal(self.minpoly, lo, hi, check=False)

    def sign(self) -> int:
        a = self
        while a.lo <= 0 <= a.hi:
            if a.lo == a.hi:
                return 0
            a = a.refine()
        return 1 if a.lo > 0 else -1

    # -- comparisons ---------------------------------------------------------

    def compare(self, other: "AlgebraicReal") -> int:
        """-1, 0, 1 exactly. Always terminates."""
        a, b = self, other
        same = a.minpoly == b.minpoly
        while True:
            if a.hi < b.lo:
                return -1
            if b.hi < a.lo:
                return 1
            if same:
                # overlapping intervals of one irreducible polynomial: their
                # union isolates a single root iff the two values coincide
                lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
                if a.minpoly.count_roots(lo, hi) == 1:
                    return 0
            elif a.is_rational() and b.is_rational():
                return (a.lo > b.lo) - (a.lo < b.lo)
            a, b = a.refine(), b.refine()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicReal.from_rational(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        if self.minpoly != other.minpoly:
            return False
        return self.compare(other) == 0

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicReal.from_rational(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        return self.compare(other) < 0

    def __hash__(self):
        return hash(self.minpoly.coeffs)

    # -- numeric views -------------------------------------------------------

    def approx(self, digits: int = 20) -> str:
        a = self.refined_to(Fraction(1, 10 ** (digits + 2)))
        return format_fraction((a.lo + a.hi) / 2, digits)

    def to_mpf(self, ctx=mpmath.mp):
        bits = int(ctx.prec) + 8
        a = self.refined_to(Fraction(1, 2**bits))
        mid = (a.lo + a.hi) / 2
        return ctx.mpf(mid.numerator) / mid.denominator

    def __float__(self):
        a = self.refined_to(Fraction(1, 2**60))
        return float((a.lo + a.hi) / 2)

    def __repr__(self):
        if self.is_rational():
            return f"AlgebraicReal({self.lo})"
        return f"AlgebraicReal(root of {self.minpoly} in [{self.lo}, {self.hi}] ~ {self.approx(12)})"

    def to_json(self, digits: int = 20) -> dict:
        return {
            "minpoly": list(self.minpoly.coeffs),
            "interval": [str(self.lo), str(self.hi)],
            "approx": self.approx(digits),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraicReal":
        lo, hi = (Fraction(x) for x in obj["interval"])
        return cls(IntPolynomial(tuple(obj["minpoly"])), lo, hi)

    # -- arithmetic by elimination ------------------------------------------

    def __neg__(self) -> "AlgebraicReal":
        return AlgebraicReal(self.minpoly.reflect(), -self.hi, -self.lo, check=False)

    def __abs__(self) -> "AlgebraicReal":
        return -self if self.sign() < 0 else self

    def __pow__(self, k: int) -> "AlgebraicReal":
        """self**k for k >= 1; the minimal polynomial comes from the factor of
        prod (x - r_i**k) over the conjugates r_i that isolates our value."""
        if k < 1:
            raise ValueError("only positive powers are supported")
        if k == 1:
            return self
        if self.is_rational():
            return AlgebraicReal.from_rational(self.lo**k)
        cands = [f for f, _ in self.minpoly.root_powers(k).factor()]

        def enclosures():
            a = self
            while True:
                ends = (a.lo**k, a.hi**k)
                lo, hi = min(ends), max(ends)
                if a.lo < 0 < a.hi:
                    lo = min(lo, Fraction(0))
                yield lo, hi
                a = a.refine()

        return pick_root(cands, enclosures())

    def sqrt(self) -> "AlgebraicReal":
        """Positive square root of a positive algebraic number."""
        if self.sign() <= 0:
            raise ValueError("sqrt needs a positive argument")
        cands = [f for f, _ in self.minpoly.spread(2).factor()]

        def enclosures():
            a = self
            bits = 16
            while True:
                lo, _ = sqrt_bounds(max(a.lo, Fraction(0)), bits)
                _, hi = sqrt_bounds(a.hi, bits)
                yield lo, hi
                a, bits = a.refine(), bits + 1

        return pick_root(cands, enclosures())


def algebraic_equal(a: AlgebraicReal, b: AlgebraicReal) -> bool:
    return a == b


def pick_root(candidates: Sequence[IntPolynomial], enclosures: Iterator) -> AlgebraicReal:
    """Identify a real number known only through shrinking enclosures.

    ``candidates`` are irreducible polynomials, one of which vanishes at the
    target; each enclosure (lo, hi) must contain the target. We tighten
    until exactly one candidate root remains inside.
    """
    sturms = [(f, f.sturm_sequence()) for f in candidates]
    for step, (lo, hi) in enumerate(enclosures):
        hits = []
        for f, seq in sturms:
            k = f.count_roots(lo, hi, sturm=seq)
            if k:
                hits.append((f, k))
        total = sum(k for _, k in hits)
        if total == 0:
            raise ArithmeticError("enclosure lost the target root")
        if total == 1:
            f = hits[0][0]
            if f.degree == 1:
                return AlgebraicReal.from_rational(Fraction(-f.coeffs[0], f.coeffs[1]))
            return AlgebraicReal(f, lo, hi, check=False)
        if step > 4000:
            raise ArithmeticError("root identification did not converge")
    raise ArithmeticError("enclosure sequence exhausted")


# -- complex roots ------------------------------------------------------------


class CertifiedRoot:
    """A disc (centre, radius) in C, all rational, holding exactly one root."""

    __slots__ = ("re", "im", "radius")

    def __init__(self, re: Fraction, im: Fraction, radius: Fraction):
        self.re, self.im, self.radius = re, im, radius

    @property
    def is_real_candidate(self) -> bool:
        return abs(self.im) <= self.radius

    def modulus_squared_bounds(self, bits: int) -> tuple:
        lo, _ = sqrt_bounds(self.re**2 + self.im**2, bits)
        _, hi = sqrt_bounds(self.re**2 + self.im**2, bits)
        lo = max(lo - self.radius, Fraction(0))
        hi = hi + self.radius
        return lo * lo, hi * hi


def certified_roots(p: IntPolynomial, dps: int = 30, max_dps: int = 4000) -> list:
    """All complex roots of the squarefree ``p`` as disjoint certified discs.

    The discs meeting the real axis are exactly as many as the real roots,
    so the remaining ones hold the nonreal roots.
    """
    d = p.degree
    dp = p.derivative()
    n_real = p.real_root_count()
    desc = list(reversed(p.coeffs))
    while dps <= max_dps:
        ctx = mpmath.MPContext()
        ctx.dps = dps
        try:
            roots = ctx.polyroots(desc, maxsteps=200 + 20 * d, extraprec=4 * dps)
        except ctx.NoConvergence:
            dps *= 2
            continue
        if d == 1:
            roots = [roots] if not isinstance(roots, list) else roots
        discs = []
        ok = True
        bits = int(dps * 3.33) + 16
        for z in roots:
            z = ctx.mpc(z)
            re, im = mpf_to_fraction(z.real), mpf_to_fraction(z.imag)
            pr, pi = p.eval_complex(re, im)
            dr, di = dp.eval_complex(re, im)
            den = dr * dr + di * di
            if den == 0:
                ok = False
                break
            r2 = Fraction(d * d) * (pr * pr + pi * pi) / den
            _, r = sqrt_bounds(r2, bits)
            if pr == 0 and pi == 0:
                r = Fraction(0)
            discs.append(CertifiedRoot(re, im, r))
        if ok:
            for i in range(d):
                for j in range(i + 1, d):
                    a, b = discs[i], discs[j]
                    gap2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
                    if gap2 <= (a.radius + b.radius) ** 2:
                        ok = False
                        break
                if not ok:
                    break
        if ok and sum(1 for c in discs if c.is_real_candidate) == n_real:
            return discs
        dps *= 2
    raise ArithmeticError(f"could not certify the roots of {p}")


def nonreal_moduli(p: IntPolynomial) -> list:
    """|r| for every nonreal root r of irreducible p, one entry per root."""
    p = p.primitive()
    discs = [c for c in certified_roots(p) if not c.is_real_candidate]
    if not discs:
        return []
    cands = [f for f, _ in p.root_products().factor()]
    squares = []
    for disc in discs:
        def enclosures(disc=disc):
            dps = 30
            bits = 64
            current = disc
            while True:
                yield current.modulus_squared_bounds(bits)
                dps *= 2
                bits *= 2
                current = _recentre(p, current, dps, bits)

        squares.append(pick_root(cands, enclosures()))
    roots = {}
    out = []
    for sq in squares:
        for key, (value, root) in roots.items():
            if value == sq:
                out.append(root)
                break
        else:
            root = sq.sqrt()
            roots[len(roots)] = (sq, root)
            out.append(root)
    return out


def _recentre(p: IntPolynomial, disc: CertifiedRoot, dps: int, bits: int) -> CertifiedRoot:
    """Newton-polish a certified disc; the new disc lies inside the old one,
    so it still isolates the same root."""
    ctx = mpmath.MPContext()
    ctx.dps = dps
    z = ctx.mpc(ctx.mpf(disc.re.numerator) / disc.re.denominator, ctx.mpf(disc.im.numerator) / disc.im.denominator)
    desc = list(reversed(p.coeffs))
    ddesc = list(reversed(p.derivative().coeffs))
    for _ in range(8):
        z = z - ctx.polyval(desc, z) / ctx.polyval(ddesc, z)
    re, im = mpf_to_fraction(z.real), mpf_to_fraction(z.imag)
    pr, pi = p.eval_complex(re, im)
    dr, di = p.derivative().eval_complex(re, im)
    r2 = Fraction(p.degree**2) * (pr * pr + pi * pi) / (dr * dr + di * di)
    _, r = sqrt_bounds(r2, bits)
    _, shift = sqrt_bounds((re - disc.re) ** 2 + (im - disc.im) ** 2, bits)
    if shift + r > disc.radius:
        return disc
    return CertifiedRoot(re, im, r)
