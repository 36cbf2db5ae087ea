"""Small high-precision linear algebra helpers on mpmath matrices.

Everything takes an explicit mpmath context so precision stays per object.
Subspaces are passed around as matrices whose columns are an orthonormal
basis; a subspace of dimension 0 is ``None``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..exact import RationalMatrix


def mp_fraction(ctx, q) -> object:
    q = Fraction(q)
    return ctx.mpf(q.numerator) / q.denominator


def to_mp(ctx, M: RationalMatrix):
    return ctx.matrix([[mp_fraction(ctx, x) for x in row] for row in M.rows])


def vector(ctx, v: Sequence):
    return ctx.matrix([mp_fraction(ctx, x) if isinstance(x, (int, Fraction)) else ctx.mpf(x) for x in v])


def columns(ctx, A) -> list:
    return [A[:, j] for j in range(A.cols)]


def hstack(ctx, cols: Sequence):
    cols = list(cols)
    if not cols:
        return None
    n = cols[0].rows
    out = ctx.matrix(n, len(cols))
    for j, c in enumerate(cols):
        for i in range(n):
            out[i, j] = c[i]
    return out


def real_part(ctx, A):
    out = ctx.matrix(A.rows, A.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            out[i, j] = ctx.re(A[i, j])
    return out


def max_abs(ctx, A) -> object:
    return max((abs(A[i, j]) for i in range(A.rows) for j in range(A.cols)), default=ctx.zero)


def op_norm(ctx, A) -> object:
    if A.rows == 0 or A.cols == 0:
        return ctx.zero
    return max(ctx.svd_r(A, compute_uv=False))


def orth(ctx, A, rank: int):
    """Orthonormal basis of the dominant ``rank``-dimensional column space."""
    if rank == 0 or A is None:
        return None
    U, S, _ = ctx.svd_r(A)
    return U[:, :rank]


def null_basis(ctx, A, dim: int):
    """Orthonormal basis of the ``dim`` least significant right singular directions."""
    if dim == 0:
        return None
    _, _, V = ctx.svd_r(A, full_matrices=True)
    k = V.rows
    return V[k - dim :, :].T


def complement(ctx, B, n: int):
    """Orthonormal basis of the orthogonal complement of span(B) in R^n."""
    if B is None:
        return ctx.eye(n)
    k = B.cols
    if k == n:
        return None
    return null_basis(ctx, B.T, n - k)


def project_out(ctx, A, Q):
    """A minus its orthogonal projection onto span(Q)."""
    if Q is None:
        return A
    return A - Q * (Q.T * A)


def mat_power(ctx, A, k: int):
    out = ctx.eye(A.rows)
    for _ in range(k):
        out = out * A
    return out


def jordan_chains(ctx, nil, basis, blocks: Sequence) -> list:
    """Jordan chains of a nilpotent ``nil`` on the invariant subspace ``basis``.

    ``blocks`` lists (size, count) and must be the true block structure; it
    fixes every rank decision so no numeric thresholds are involved. Each
    chain is returned as [nil**(s-1) w, ..., nil w, w] in ambient coordinates.
    """
    m = basis.cols
    nr = basis.T * nil * basis
    sizes = sorted({s for s, _ in blocks}, reverse=True)
    count = dict(blocks)
    if sum(s * c for s, c in blocks) != m:
        raise ValueError("block structure does not fill the subspace")

    def kernel_dim(k):
        return sum(min(k, s) * c for s, c in blocks)

    tops: list = []  # (size, top vector in subspace coordinates)
    for s in sizes:
        pieces = []
        if s > 1:
            kb = null_basis(ctx, mat_power(ctx, nr, s - 1), kernel_dim(s - 1))
            if kb is not None:
                pieces.extend(columns(ctx, kb))
        for t, w in tops:
            pieces.append(mat_power(ctx, nr, t - s) * w)
        Q = orth(ctx, hstack(ctx, pieces), len(pieces)) if pieces else None
        ks = null_basis(ctx, mat_power(ctx, nr, s), kernel_dim(s))
        fresh = orth(ctx, project_out(ctx, ks, Q), count[s])
        tops.extend((s, w) for w in columns(ctx, fresh))
    chains = []
    for s, w in tops:
        chain = [w]
        for _ in range(s - 1):
            chain.append(nr * chain[-1])
        chains.append([basis * c for c in reversed(chain)])
    return chains


def random_unit(ctx, rng, n: int, basis=None):
    """Gaussian random unit vector, inside span(basis) when given."""
    k = n if basis is None else basis.cols
    c = ctx.matrix([ctx.mpf(rng.gauss(0.0, 1.0)) for _ in range(k)])
    v = c if basis is None else basis * c
    return v / ctx.norm(v)


def as_int(t) -> Optional[int]:
    """The integer value of t if t is an exact or float integer, else None."""
    if isinstance(t, bool):
        return None
    if isinstance(t, int):
        return t
    if isinstance(t, Fraction):
        return t.numerator if t.denominator == 1 else None
    if isinstance(t, float):
        return int(t) if t.is_integer() else None
    return None
