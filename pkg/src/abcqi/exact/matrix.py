"""Exact square matrices over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import ParseError, SingularMatrixError


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: the whole point of this module is exactness.
    """
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a matrix entry: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {value!r}") from exc
    raise ParseError(f"unsupported matrix entry {value!r} ({type(value).__name__})")


class RationalMatrix:
    """An immutable n x n matrix with Fraction entries."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        n = len(data)
        if n == 0:
            raise ParseError("matrix must have at least one row")
        if any(len(row) != n for row in data):
            raise ParseError("matrix must be square")
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def _trusted(cls, rows: tuple) -> "RationalMatrix":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_rows", rows)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "RationalMatrix":
        return cls._trusted(tuple((Fraction(0),) * n for _ in range(n)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "RationalMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self._rows for x in row)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"RationalMatrix([{body}])"

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "RationalMatrix"):
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check(other)
        return RationalMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check(other)
        return RationalMatrix._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._trusted(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix._trusted(tuple(tuple(c * a for a in r) for r in self._rows))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check(other)
        cols = tuple(zip(*other._rows))
        return RationalMatrix._trusted(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows)
        )

    __mul__ = __matmul__

    def apply(self, v: Sequence) -> list:
        return [sum(a * Fraction(b) for a, b in zip(r, v)) for r in self._rows]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._trusted(tuple(zip(*self._rows)))

    def __pow__(self, k: int) -> "RationalMatrix":
        if not isinstance(k, int):
            raise TypeError("matrix powers must be integers")
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = RationalMatrix.identity(self.n)
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(self.n)), Fraction(0))

    # -- elimination ------------------------------------------------------

    def _echelon(self):
        """Row-reduce a copy; return (reduced rows, pivot columns, determinant)."""
        a = [list(r) for r in self._rows]
        n = self.n
        det = Fraction(1)
        pivots = []
        row = 0
        for col in range(n):
            # largest numerator keeps intermediate growth down in practice
            best = None
            for r in range(row, n):
                if a[r][col] != 0 and (best is None or abs(a[r][col].numerator) > abs(a[best][col].numerator)):
                    best = r
            if best is None:
                det = Fraction(0)
                continue
            if best != row:
                a[row], a[best] = a[best], a[row]
                det = -det
            piv = a[row][col]
            det *= piv
            inv = 1 / piv
            prow = a[row]
            for r in range(n):
                if r != row and a[r][col] != 0:
                    f = a[r][col] * inv
                    ar = a[r]
                    for c in range(col, n):
                        if prow[c]:
                            ar[c] -= f * prow[c]
            pivots.append(col)
            row += 1
        if row < n:
            det = Fraction(0)
        return a, pivots, det

    def rank(self) -> int:
        return len(self._echelon()[1])

    def nullity(self) -> int:
        return self.n - self.rank()

    def det(self) -> Fraction:
        return self._echelon()[2]

    def nullspace(self) -> list:
        """Basis of the right kernel as lists of Fractions."""
        a, pivots, _ = self._echelon()
        n = self.n
        # normalise pivot rows
        for i, c in enumerate(pivots):
            p = a[i][c]
            a[i] = [x / p for x in a[i]]
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for i, c in enumerate(pivots):
                v[c] = -a[i][f]
            basis.append(v)
        return basis

    def inverse(self) -> "RationalMatrix":
        n = self.n
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._rows)]
        for col in range(n):
            best = None
            for r in range(col, n):
                if a[r][col] != 0 and (best is None or abs(a[r][col].numerator) > abs(a[best][col].numerator)):
                    best = r
            if best is None:
                raise SingularMatrixError("matrix is singular")
            a[col], a[best] = a[best], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return RationalMatrix._trusted(tuple(tuple(r[n:]) for r in a))


def kronecker(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    n, m = a.n, b.n
    return RationalMatrix._trusted(
        tuple(
            tuple(a[i // m, j // m] * b[i % m, j % m] for j in range(n * m))
            for i in range(n * m)
        )
    )
