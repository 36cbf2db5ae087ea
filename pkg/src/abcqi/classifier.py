"""Quasi-isometry classification of the groups built from integer matrices.

Two matrices M, N (integer entries, |det| > 1) give quasi-isometric groups
exactly when some powers M^a and N^b share an absolute Jordan form. The
determinant pins (a, b) down to multiples of the minimal solution of
|det M|^a = |det N|^b, and raising both forms to a further common power k
cannot create an equality that was not already there (x -> x^k is injective
on positive reals), so only the minimal pair needs testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

import sympy

from .errors import AbcqiError, NonIntegralMatrixError, PolycyclicError, SingularMatrixError
from .exact import AbsoluteJordanForm, RationalMatrix, absolute_jordan_form, ajf_power

DIM_MISMATCH = "DIM_MISMATCH"
DET_INDEPENDENT = "DET_INDEPENDENT"
UNIPOTENT_MISMATCH = "UNIPOTENT_MISMATCH"
BLOCK_STRUCTURE_MISMATCH = "BLOCK_STRUCTURE_MISMATCH"
MODULUS_POWER_MISMATCH = "MODULUS_POWER_MISMATCH"
MATCHED = "MATCHED"

REASON_CODES = (
    DIM_MISMATCH,
    DET_INDEPENDENT,
    UNIPOTENT_MISMATCH,
    BLOCK_STRUCTURE_MISMATCH,
    MODULUS_POWER_MISMATCH,
    MATCHED,
)


@dataclass(frozen=True)
class DependencePair:
    """Minimal positive (a, b) with D1**a == D2**b."""

    a: int
    b: int

    def as_tuple(self) -> tuple:
        return (self.a, self.b)


def multiplicative_dependence(D1: int, D2: int) -> Optional[DependencePair]:
    """Minimal (a, b) with D1**a == D2**b, or None when no such pair exists.

    D1 and D2 are dependent iff their prime supports agree and the exponent
    vectors are proportional; then D1 = D**p, D2 = D**q and (a, b) = (q, p)
    once p, q are made coprime.
    """
    D1, D2 = int(D1), int(D2)
    if D1 < 2 or D2 < 2:
        raise ValueError("multiplicative_dependence needs integers >= 2")
    f1, f2 = sympy.factorint(D1), sympy.factorint(D2)
    if set(f1) != set(f2):
        return None
    primes = sorted(f1)
    g1 = g2 = 0
    for p in primes:
        g1 = gcd(g1, f1[p])
        g2 = gcd(g2, f2[p])
    # exponent vectors e1 = g1*u1, e2 = g2*u2 with u primitive; proportional iff u1 == u2
    if any(f1[p] // g1 != f2[p] // g2 for p in primes):
        return None
    g = gcd(g1, g2)
    a, b = g2 // g, g1 // g
    if D1**a != D2**b:
        raise AbcqiError("internal error: dependence certificate failed")
    return DependencePair(a, b)


@dataclass(frozen=True)
class ClassificationVerdict:
    equivalent: bool
    witness: Optional[tuple]
    certificate: str
    ajf_m: Optional[AbsoluteJordanForm] = None
    ajf_n: Optional[AbsoluteJordanForm] = None

    def __post_init__(self):
        if self.certificate not in REASON_CODES:
            raise ValueError(f"unknown reason code {self.certificate}")
        if self.equivalent != (self.certificate == MATCHED) or self.equivalent != (self.witness is not None):
            raise ValueError("inconsistent verdict")

    def swapped(self) -> "ClassificationVerdict":
        w = None if self.witness is None else (self.witness[1], self.witness[0])
        return ClassificationVerdict(self.equivalent, w, self.certificate, self.ajf_n, self.ajf_m)

    def to_json(self, digits: int = 20) -> dict:
        return {
            "equivalent": self.equivalent,
            "witness": None if self.witness is None else list(self.witness),
            "certificate": self.certificate,
            "ajf_m": None if self.ajf_m is None else self.ajf_m.to_json(digits),
            "ajf_n": None if self.ajf_n is None else self.ajf_n.to_json(digits),
        }


@dataclass(frozen=True)
class PreparedMatrix:
    """The data classify needs from one matrix: dimension, |det| and form."""

    n: int
    abs_det: int
    ajf: AbsoluteJordanForm


def check_classifiable(M: RationalMatrix) -> int:
    """Raise unless M is integral with |det| > 1; return |det M|."""
    if not M.is_integral():
        raise NonIntegralMatrixError("classification needs integer entries")
    det = M.det()
    if det == 0:
        raise SingularMatrixError("matrix is singular")
    if abs(det) <= 1:
        raise PolycyclicError(f"|det| = {abs(det)}: the group is polycyclic, outside the classifier")
    return int(abs(det))


def prepare(M: RationalMatrix) -> PreparedMatrix:
    D = check_classifiable(M)
    return PreparedMatrix(M.n, D, absolute_jordan_form(M))


def _unipotent_sizes(F: AbsoluteJordanForm) -> list:
    return sorted(s for _, s in F.unipotent)


def _hyperbolic_shape(F: AbsoluteJordanForm) -> list:
    return sorted([(1, s) for _, s in F.expanding] + [(-1, s) for _, s in F.contracting])


def classify_prepared(P: PreparedMatrix, Q: PreparedMatrix, *, max_multiple: int = 1) -> ClassificationVerdict:
    def verdict(code, witness=None):
        return ClassificationVerdict(code == MATCHED, witness, code, P.ajf, Q.ajf)

    if P.n != Q.n:
        return verdict(DIM_MISMATCH)
    dep = multiplicative_dependence(P.abs_det, Q.abs_det)
    if dep is None:
        return verdict(DET_INDEPENDENT)
    F = ajf_power(P.ajf, dep.a)
    G = ajf_power(Q.ajf, dep.b)
    if F == G:
        return verdict(MATCHED, dep.as_tuple())
    for k in range(2, max_multiple + 1):
        if ajf_power(F, k) == ajf_power(G, k):
            raise AbcqiError(f"internal error: multiple k={k} of the minimal witness matches but the minimum does not")
    if _unipotent_sizes(F) != _unipotent_sizes(G):
        return verdict(UNIPOTENT_MISMATCH)
    if _hyperbolic_shape(F) != _hyperbolic_shape(G):
        return verdict(BLOCK_STRUCTURE_MISMATCH)
    return verdict(MODULUS_POWER_MISMATCH)


def classify(M: RationalMatrix, N: RationalMatrix, *, max_multiple: int = 1) -> ClassificationVerdict:
    """Decide whether the groups of M and N are quasi-isometric.

    ``max_multiple`` > 1 additionally re-tests witnesses (k*a, k*b) for
    k <= max_multiple after the minimal one fails; a hit there would be an
    internal error, so this is a cross-check rather than a search.
    """
    return classify_prepared(prepare(M), prepare(N), max_multiple=max_multiple)
