"""Univariate integer polynomials.

Coefficients are stored in ascending order, ``coeffs[k]`` multiplying
``x**k``. Rational-coefficient intermediates (remainders, power sums) are
kept as plain lists of Fractions inside this module and cleared back to
integers at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Sequence

import sympy


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _clear(fr: Sequence[Fraction]) -> tuple:
    fr = [Fraction(x) for x in fr]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    return tuple(int(x * den) for x in fr)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple = ()

    def __post_init__(self):
        c = []
        for x in self.coeffs:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("IntPolynomial needs integer coefficients; use from_rationals")
                x = x.numerator
            c.append(int(x))
        object.__setattr__(self, "coeffs", tuple(_trim(c)))

    @classmethod
    def from_rationals(cls, coeffs: Sequence) -> "IntPolynomial":
        """Integer polynomial proportional to ``coeffs`` (denominators cleared)."""
        return cls(_clear(coeffs))

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def linear_for(cls, q) -> "IntPolynomial":
        """Primitive polynomial with the single root ``q``."""
        q = Fraction(q)
        return cls((-q.numerator, q.denominator))

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def primitive(self) -> "IntPolynomial":
        """Content-free part with positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, Fraction) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def eval_complex(self, re: Fraction, im: Fraction) -> tuple:
        """Exact value at the Gaussian rational re + i*im, as (re, im)."""
        ar, ai = Fraction(0), Fraction(0)
        for c in reversed(self.coeffs):
            ar, ai = ar * re - ai * im + c, ar * im + ai * re
        return ar, ai

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def reflect(self) -> "IntPolynomial":
        """p(-x)."""
        return IntPolynomial(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def spread(self, k: int) -> "IntPolynomial":
        """p(x**k)."""
        out = [0] * (self.degree * k + 1) if self.coeffs else []
        for j, c in enumerate(self.coeffs):
            out[j * k] = c
        return IntPolynomial(tuple(out))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def divides(self, other: "IntPolynomial") -> bool:
        """True when self | other over Q."""
        if self.is_zero():
            return other.is_zero()
        return not _rem([Fraction(c) for c in other.coeffs], [Fraction(c) for c in self.coeffs])

    def exact_quotient(self, divisor: "IntPolynomial") -> "IntPolynomial":
        q, r = _divmod([Fraction(c) for c in self.coeffs], [Fraction(c) for c in divisor.coeffs])
        if r:
            raise ValueError(f"{divisor} does not divide {self}")
        return IntPolynomial.from_rationals(q)

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = str(a) if (a != 1 or k == 0) else ""
            if body and mono:
                body += "*"
            terms.append((sign, body + mono))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([head] + [f"{s} {t}" for s, t in terms[1:]])

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    # -- factorisation (plumbing backed by sympy) ---------------------------

    def to_sympy(self, gen=None) -> sympy.Poly:
        gen = gen if gen is not None else sympy.Symbol("x")
        return sympy.Poly(list(reversed(self.coeffs)) or [0], gen, domain="ZZ")

    @classmethod
    def from_sympy(cls, p: sympy.Poly) -> "IntPolynomial":
        return cls.from_rationals([Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())])

    def factor(self) -> list:
        """Irreducible primitive factors over Q with multiplicities."""
        if self.degree < 1:
            return []
        return list(_factor_cached(self.coeffs))

    def squarefree_part(self) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for f, _ in self.factor():
            out = out * f
        return out.primitive()

    def is_irreducible(self) -> bool:
        f = self.factor()
        return len(f) == 1 and f[0][1] == 1

    # -- real roots ----------------------------------------------------------

    def sturm_sequence(self) -> tuple:
        return _sturm_cached(self.coeffs)

    def _sturm(self) -> tuple:
        seq = [[Fraction(c) for c in self.coeffs], [Fraction(c) for c in self.derivative().coeffs]]
        while seq[-1]:
            r = _rem(seq[-2], seq[-1])
            if not r:
                break
            seq.append([-x for x in r])
        return tuple(tuple(p) for p in seq)

    def count_roots(self, lo, hi, sturm=None) -> int:
        """Distinct real roots in the closed interval [lo, hi] (p squarefree)."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            return 0
        seq = sturm if sturm is not None else self.sturm_sequence()
        n = _variations(seq, lo) - _variations(seq, hi)
        if self(lo) == 0:
            n += 1
        return n

    def root_bound(self) -> Fraction:
        """Cauchy bound: every complex root has modulus < the returned value."""
        c = self.coeffs
        return 1 + max(Fraction(abs(x), abs(c[-1])) for x in c[:-1]) if len(c) > 1 else Fraction(1)

    def real_root_intervals(self) -> list:
        """Isolating intervals (lo, hi) for the real roots, ascending.

        Either lo == hi is an exact rational root, or lo < hi and the
        polynomial changes sign strictly between them.
        """
        if self.degree < 1:
            return []
        seq = self.sturm_sequence()
        B = self.root_bound()
        out = []
        stack = [(-B, B)]
        # half-open (lo, hi]; -B is never a root
        while stack:
            lo, hi = stack.pop()
            k = _variations(seq, lo) - _variations(seq, hi)
            if k == 0:
                continue
            if k == 1:
                out.append(self._tighten(seq, lo, hi))
                continue
            mid = (lo + hi) / 2
            stack.append((mid, hi))
            stack.append((lo, mid))
        out.sort()
        return out

    def _tighten(self, seq, lo, hi):
        while True:
            if self(hi) == 0:
                return (hi, hi)
            if self(lo) != 0:
                return (lo, hi)
            mid = (lo + hi) / 2
            if _variations(seq, mid) - _variations(seq, hi) == 1:
                lo = mid
            else:
                hi = mid

    def real_root_count(self) -> int:
        return len(self.real_root_intervals())

    # -- symmetric-function constructions --------------------------------------

    def power_sums(self, m: int) -> list:
        """[s_1, ..., s_m] with s_k the sum of k-th powers of the roots."""
        d = self.degree
        a = [Fraction(c, self.lc) for c in self.coeffs]  # monic, a[d] == 1
        s = [Fraction(0)] * (m + 1)
        for k in range(1, m + 1):
            acc = Fraction(0)
            for i in range(1, min(k - 1, d) + 1):
                acc += a[d - i] * s[k - i]
            if k <= d:
                acc += k * a[d - k]
            s[k] = -acc
        return s[1:]

    @classmethod
    def from_power_sums(cls, s: Sequence[Fraction], degree: int) -> "IntPolynomial":
        """Monic polynomial (cleared to integers) whose root power sums are ``s``."""
        e = [Fraction(1)]
        for k in range(1, degree + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                term = e[k - i] * s[i - 1]
                acc += term if i % 2 == 1 else -term
            e.append(acc / k)
        # x^D - e1 x^{D-1} + e2 x^{D-2} - ...
        desc = [e[k] if k % 2 == 0 else -e[k] for k in range(degree + 1)]
        return cls.from_rationals(list(reversed(desc)))

    def root_powers(self, k: int) -> "IntPolynomial":
        """Polynomial whose roots are r**k over the roots r of self."""
        d = self.degree
        s = self.power_sums(d * k)
        return IntPolynomial.from_power_sums([s[j * k - 1] for j in range(1, d + 1)], d)

    def root_products(self) -> "IntPolynomial":
        """Polynomial of degree d**2 whose roots are all products r_i * r_j."""
        d = self.degree
        D = d * d
        s = self.power_sums(D)
        return IntPolynomial.from_power_sums([x * x for x in s], D)


@lru_cache(maxsize=4096)
def _factor_cached(coeffs: tuple) -> tuple:
    _, facs = IntPolynomial(coeffs).to_sympy().factor_list()
    out = [(IntPolynomial.from_sympy(f).primitive(), int(m)) for f, m in facs]
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return tuple(out)


@lru_cache(maxsize=4096)
def _sturm_cached(coeffs: tuple) -> tuple:
    return IntPolynomial(coeffs)._sturm()


def _variations(seq, x) -> int:
    signs = []
    for p in seq:
        acc = Fraction(0)
        for c in reversed(p):
            acc = acc * x + c
        if acc:
            signs.append(acc > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _divmod(num: list, den: list):
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(num) >= len(den) and num:
        f = num[-1] / den[-1]
        shift = len(num) - len(den)
        q[shift] = f
        for i, c in enumerate(den):
            num[shift + i] -= f * c
        num.pop()
        _trim(num)
    return q, num


def _rem(num: list, den: list) -> list:
    return _divmod(num, den)[1]
