"""Characteristic polynomials, Jordan block structure and absolute Jordan forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from ..errors import NotEigenfactorError, SingularMatrixError, ZeroMatrixError
from .algebraic import AlgebraicReal, nonreal_moduli
from .matrix import RationalMatrix
from .poly import IntPolynomial


def char_poly(M: RationalMatrix) -> IntPolynomial:
    """det(xI - M) with denominators cleared (Berkowitz, division free)."""
    a = M.rows
    n = M.n
    poly = [Fraction(1), -a[0][0]]  # descending coefficients
    for r in range(1, n):
        R = a[r][:r]
        A = [row[:r] for row in a[:r]]
        t = [Fraction(1), -a[r][r]]
        v = [a[i][r] for i in range(r)]
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(Ai[j] * v[j] for j in range(r)) for Ai in A]
        poly = [sum(t[i - j] * poly[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return IntPolynomial.from_rationals(list(reversed(poly)))


def factor_squarefree_irreducible(p: IntPolynomial) -> list:
    """[(irreducible primitive factor, multiplicity), ...] over Q."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    return p.factor()


def poly_of_matrix(p: IntPolynomial, M: RationalMatrix) -> RationalMatrix:
    n = M.n
    acc = RationalMatrix.zero(n)
    eye = RationalMatrix.identity(n)
    for c in reversed(p.coeffs):
        acc = acc @ M + eye.scale(c)
    return acc


def multiplicity(p: IntPolynomial, q: IntPolynomial) -> int:
    """Largest m with p**m | q."""
    m = 0
    while p.divides(q):
        q = q.exact_quotient(p)
        m += 1
    return m


def _require_invertible(M: RationalMatrix):
    if M.is_zero():
        raise ZeroMatrixError("zero matrix has no absolute Jordan form")
    if M.det() == 0:
        raise SingularMatrixError("matrix is singular")


def nullity_sequence(M: RationalMatrix, p: IntPolynomial, steps: int) -> list:
    """[nullity(p(M)^k) for k = 0..steps]."""
    P = poly_of_matrix(p, M)
    out = [0]
    Q = P
    for _ in range(steps):
        out.append(Q.nullity())
        Q = Q @ P
    return out


def block_structure(M: RationalMatrix, p: IntPolynomial) -> list:
    """Jordan block sizes, as (size, count) with sizes descending, carried by
    every root of the irreducible factor ``p`` of the characteristic polynomial."""
    _require_invertible(M)
    p = p.primitive()
    cp = char_poly(M)
    if p.degree < 1 or not p.divides(cp):
        raise NotEigenfactorError(f"{p} is not an eigenfactor of the matrix")
    if not p.is_irreducible():
        raise ValueError(f"{p} is reducible over Q")
    return _blocks(M, p, multiplicity(p, cp))


def _blocks(M: RationalMatrix, p: IntPolynomial, mult: int) -> list:
    d = p.degree
    P = poly_of_matrix(p, M)
    nul = [0]
    Q = P
    while nul[-1] < d * mult:
        nul.append(Q.nullity())
        Q = Q @ P
    # at_least[k - 1] = number of blocks of size >= k
    at_least = [(nul[k] - nul[k - 1]) // d for k in range(1, len(nul))] + [0]
    out = []
    for size in range(len(at_least) - 1, 0, -1):
        c = at_least[size - 1] - at_least[size]
        if c:
            out.append((size, c))
    return out


def _cmp_desc(a: AlgebraicReal, b: AlgebraicReal) -> int:
    return -a.compare(b)


def modulus_of_root_class(p: IntPolynomial) -> list:
    """Distinct |root| values of the irreducible ``p`` with root counts,
    moduli descending."""
    p = p.primitive()
    if p(0) == 0:
        raise ValueError("zero is a root")
    mods = [abs(r) for r in AlgebraicReal.real_roots(p)]
    mods += nonreal_moduli(p)
    groups: list = []
    for m in mods:
        for g in groups:
            if g[0] == m:
                g[1] += 1
                break
        else:
            groups.append([m, 1])
    groups.sort(key=cmp_to_key(lambda x, y: _cmp_desc(x[0], y[0])))
    return [(m, c) for m, c in groups]


@dataclass(frozen=True)
class RealJordanData:
    """Per irreducible factor p: Jordan block sizes (size, count) of each root."""

    factors: tuple

    def blocks_for(self, p: IntPolynomial) -> tuple:
        for q, blocks in self.factors:
            if q == p:
                return blocks
        raise NotEigenfactorError(f"{p} is not an eigenfactor")


def real_jordan_data(M: RationalMatrix) -> RealJordanData:
    _require_invertible(M)
    out = []
    for p, mult in factor_squarefree_irreducible(char_poly(M)):
        out.append((p, tuple(_blocks(M, p, mult))))
    return RealJordanData(tuple(out))


class AbsoluteJordanForm:
    """Canonical multiset of (modulus, block size).

    Canonical order: moduli descending, equal moduli by size descending.
    Blocks with equal moduli share one AlgebraicReal representative.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        object.__setattr__(self, "blocks", _canonical(blocks))

    def __setattr__(self, name, value):
        raise AttributeError("AbsoluteJordanForm is immutable")

    @property
    def n(self) -> int:
        return sum(s for _, s in self.blocks)

    def _part(self, sign: int) -> tuple:
        one = AlgebraicReal.from_rational(1)
        return tuple((m, s) for m, s in self.blocks if m.compare(one) == sign)

    @property
    def expanding(self) -> tuple:
        return self._part(1)

    @property
    def unipotent(self) -> tuple:
        return self._part(0)

    @property
    def contracting(self) -> tuple:
        return self._part(-1)

    def sizes(self) -> tuple:
        return tuple(s for _, s in self.blocks)

    def moduli(self) -> tuple:
        """Distinct moduli, descending."""
        out = []
        for m, _ in self.blocks:
            if not out or out[-1] != m:
                out.append(m)
        return tuple(out)

    def power(self, k: int) -> "AbsoluteJordanForm":
        return ajf_power(self, k)

    def __eq__(self, other):
        if not isinstance(other, AbsoluteJordanForm):
            return NotImplemented
        if len(self.blocks) != len(other.blocks):
            return False
        return all(s == t and m == w for (m, s), (w, t) in zip(self.blocks, other.blocks))

    def __hash__(self):
        return hash(tuple((m.minpoly.coeffs, s) for m, s in self.blocks))

    def __repr__(self):
        inner = ", ".join(f"({m.approx(6)}, {s})" for m, s in self.blocks)
        return f"AbsoluteJordanForm([{inner}])"

    def abs_det_bounds(self, width=Fraction(1, 10**15)) -> tuple:
        """Rational interval containing prod modulus**size."""
        lo = hi = Fraction(1)
        for m, s in self.blocks:
            m = m.refined_to(width)
            lo *= m.lo**s
            hi *= m.hi**s
        return lo, hi

    def to_json(self, digits: int = 20) -> list:
        return [{"size": s, "modulus": m.to_json(digits)} for m, s in self.blocks]

    @classmethod
    def from_json(cls, data: list) -> "AbsoluteJordanForm":
        return cls([(AlgebraicReal.from_json(b["modulus"]), int(b["size"])) for b in data])


def _canonical(blocks) -> tuple:
    items = [(m, int(s)) for m, s in blocks]
    if any(s < 1 for _, s in items):
        raise ValueError("block sizes must be positive")

    def cmp(x, y):
        c = -x[0].compare(y[0])
        return c if c else y[1] - x[1]

    items.sort(key=cmp_to_key(cmp))
    out = []
    for m, s in items:
        if out and out[-1][0] == m:
            m = out[-1][0]
        out.append((m, s))
    return tuple(out)


def absolute_jordan_form(M: RationalMatrix) -> AbsoluteJordanForm:
    _require_invertible(M)
    blocks = []
    for p, sizes in real_jordan_data(M).factors:
        for mod, count in modulus_of_root_class(p):
            for size, c in sizes:
                blocks.extend([(mod, size)] * (count * c))
    return AbsoluteJordanForm(blocks)


def ajf_power(F: AbsoluteJordanForm, k: int) -> AbsoluteJordanForm:
    if k < 1:
        raise ValueError("power must be a positive integer")
    cache: dict = {}
    out = []
    for m, s in F.blocks:
        key = id(m)
        if key not in cache:
            cache[key] = m**k
        out.append((cache[key], s))
    return AbsoluteJordanForm(out)
