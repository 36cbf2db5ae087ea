"""Real one-parameter subgroups t -> M**t and the root-space splitting.

The additive Jordan decomposition M = S + N is computed exactly over Q
(Newton iteration on the squarefree part of the characteristic polynomial),
so only the semisimple logarithm needs floating point eigenvalues. Those come
from certified root discs of each irreducible factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from ..errors import AbcqiError, LogarithmError, SingularMatrixError
from ..exact import AbsoluteJordanForm, AlgebraicReal, RationalMatrix, absolute_jordan_form
from ..exact.algebraic import certified_roots
from ..exact.jordan import char_poly, modulus_of_root_class, poly_of_matrix, real_jordan_data
from ..exact.poly import IntPolynomial
from . import numeric as nm


def jordan_chevalley(M: RationalMatrix) -> tuple:
    """(S, N) with M = S + N, S semisimple, N nilpotent, SN = NS, exactly."""
    q = char_poly(M).squarefree_part()
    dq = q.derivative()
    S = M
    for _ in range(64):
        qS = poly_of_matrix(q, S)
        if qS.is_zero():
            break
        S = S - qS @ poly_of_matrix(dq, S).inverse()
    else:
        raise AbcqiError("Jordan-Chevalley iteration did not terminate")
    N = M - S
    if not (N ** M.n).is_zero() or S @ N != N @ S:
        raise AbcqiError("internal error: bad Jordan-Chevalley split")
    return S, N


def unipotent_log(S: RationalMatrix, N: RationalMatrix) -> RationalMatrix:
    """log(I + S^-1 N) as the terminating series, exactly."""
    n = S.n
    X = S.inverse() @ N
    out = RationalMatrix.zero(n)
    P = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        P = P @ X
        if P.is_zero():
            break
        out = out + P.scale(Fraction((-1) ** (k + 1), k))
    return out


def has_real_logarithm(M: RationalMatrix) -> bool:
    """Every Jordan block with a negative eigenvalue must come in pairs."""
    for p, blocks in real_jordan_data(M).factors:
        B = p.root_bound()
        if p.count_roots(-B, 0) and any(c % 2 for _, c in blocks):
            return False
    return True


@dataclass(frozen=True)
class Eigenvalue:
    value: object  # mpc
    factor: IntPolynomial
    modulus: AlgebraicReal
    negative_real: bool


@dataclass(frozen=True)
class ModulusLevel:
    """One distinct modulus l with its real spectral projector and AJF blocks."""

    modulus: AlgebraicReal
    projector: object
    blocks: tuple  # ((size, count), ...) sizes descending

    @property
    def dim(self) -> int:
        return sum(s * c for s, c in self.blocks)

    @property
    def nilpotency(self) -> int:
        return max(s for s, _ in self.blocks)

    def filtration_dim(self, i: int) -> int:
        return sum(min(i + 1, s) * c for s, c in self.blocks)


class OneParameterSubgroup:
    """t -> M**t = exp(t X) for a real logarithm X of M.

    When M has unpaired Jordan blocks at negative eigenvalues no real
    logarithm exists; M is then replaced by M**2 and ``squarings`` records
    it, so ``evaluate(1)`` returns the matrix actually used (``matrix``).
    """

    def __init__(self, M: RationalMatrix, precision: int = 60, *, max_squarings: int = 1):
        if M.det() == 0:
            raise SingularMatrixError("matrix is singular")
        self.original = M
        squarings = 0
        while not has_real_logarithm(M):
            if squarings >= max_squarings:
                raise LogarithmError("no real logarithm even after squaring")
            M = M @ M
            squarings += 1
        self.matrix = M
        self.squarings = squarings
        self.n = M.n
        self.S, self.N = jordan_chevalley(M)
        self.log_unipotent = unipotent_log(self.S, self.N)
        self.ajf = absolute_jordan_form(M)
        self._jordan = real_jordan_data(M)
        prec = int(precision)
        for _ in range(4):
            try:
                self._build(prec)
                break
            except _ResidualFailure:
                prec *= 2
        else:
            raise LogarithmError("exp(log M) did not reproduce M at any tried precision")
        self.precision = prec

    # -- construction ----------------------------------------------------

    def _build(self, prec: int):
        ctx = mpmath.MPContext()
        ctx.dps = prec
        self.ctx = ctx
        n = self.n
        S = nm.to_mp(ctx, self.S)
        eig = []
        for p, _ in self._jordan.factors:
            mods = [m for m, _ in modulus_of_root_class(p)]
            for disc in certified_roots(p, dps=prec + 20):
                z = ctx.mpc(nm.mp_fraction(ctx, disc.re), nm.mp_fraction(ctx, disc.im))
                if disc.is_real_candidate:
                    z = ctx.mpc(z.real, 0)
                az = abs(z)
                mod = min(mods, key=lambda m: abs(m.to_mpf(ctx) - az))
                eig.append(Eigenvalue(z, p, mod, disc.is_real_candidate and z.real < 0))
        self.eigenvalues = tuple(eig)
        eye = ctx.eye(n)
        projectors = []
        for j, e in enumerate(eig):
            P = ctx.eye(n)
            for k, f in enumerate(eig):
                if k != j:
                    P = P * (S - f.value * eye) / (e.value - f.value)
            projectors.append(P)
        self._projectors = projectors

        semisimple = ctx.matrix(n, n)
        flat = ctx.matrix(n, n)
        for e, P in zip(eig, projectors):
            lm = ctx.log(abs(e.value))
            flat += lm * P
            if e.negative_real:
                semisimple += lm * P
            else:
                semisimple += ctx.log(e.value) * P
        if nm.max_abs(ctx, _imag(ctx, semisimple)) > ctx.mpf(10) ** (-prec // 2):
            raise _ResidualFailure()
        Lu = nm.to_mp(ctx, self.log_unipotent)
        X = nm.real_part(ctx, semisimple) + ctx.pi * self._rotation(ctx) + Lu
        self.generator = X
        self.nonelliptic_generator = nm.real_part(ctx, flat) + Lu
        M = nm.to_mp(ctx, self.matrix)
        err = nm.max_abs(ctx, ctx.expm(X) - M) / max(nm.max_abs(ctx, M), 1)
        if err > ctx.mpf(10) ** (-prec // 2):
            raise _ResidualFailure()
        self.log_residual = err
        self.levels = self._levels(ctx, eig, projectors)

    def _rotation(self, ctx):
        """J with J**2 = -1 on negative-eigenvalue root spaces, 0 elsewhere,
        commuting with S and N (pairs equal-size Jordan chains)."""
        n = self.n
        J = ctx.matrix(n, n)
        Nmp = nm.to_mp(ctx, self.N)
        for e, P in zip(self.eigenvalues, self._projectors):
            if not e.negative_real:
                continue
            blocks = self._jordan.blocks_for(e.factor)
            Pr = nm.real_part(ctx, P)
            dim = sum(s * c for s, c in blocks)
            B = nm.orth(ctx, Pr, dim)
            chains = nm.jordan_chains(ctx, Nmp, B, blocks)
            cols, images = [], []
            by_size: dict = {}
            for ch in chains:
                by_size.setdefault(len(ch), []).append(ch)
            for group in by_size.values():
                for a, b in zip(group[0::2], group[1::2]):
                    for u, w in zip(a, b):
                        cols += [u, w]
                        images += [w, -u]
            C = nm.hstack(ctx, cols)
            JC = nm.hstack(ctx, images)
            coords = ctx.inverse(C.T * C) * C.T * Pr
            J += JC * coords
        return J

    def _levels(self, ctx, eig, projectors) -> tuple:
        groups: list = []
        for e, P in zip(eig, projectors):
            for g in groups:
                if g[0] == e.modulus:
                    g[1] = g[1] + P
                    break
            else:
                groups.append([e.modulus, P])
        groups.sort(key=lambda g: g[0].to_mpf(ctx), reverse=True)
        out = []
        for m, P in groups:
            sizes: dict = {}
            for w, s in self.ajf.blocks:
                if w == m:
                    sizes[s] = sizes.get(s, 0) + 1
            blocks = tuple(sorted(sizes.items(), reverse=True))
            out.append(ModulusLevel(m, nm.real_part(ctx, P), blocks))
        return tuple(out)

    # -- evaluation --------------------------------------------------------

    def mp(self, x):
        return self.ctx.mpf(x) if not isinstance(x, Fraction) else nm.mp_fraction(self.ctx, x)

    def flow(self, t, *, nonelliptic: bool = False):
        G = self.nonelliptic_generator if nonelliptic else self.generator
        return self.ctx.expm(self.mp(t) * G)

    def tolerance(self):
        return self.ctx.mpf(10) ** (-(self.precision // 2))

    def __repr__(self):
        return f"OneParameterSubgroup({self.original!r}, precision={self.precision}, squarings={self.squarings})"


class _ResidualFailure(Exception):
    pass


def _imag(ctx, A):
    out = ctx.matrix(A.rows, A.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            out[i, j] = ctx.im(A[i, j])
    return out


def evaluate_subgroup(S: OneParameterSubgroup, t, *, cross_check: bool = True):
    """M**t. Integer t uses the exact matrix power, checked against exp(t log M)."""
    ctx = S.ctx
    k = nm.as_int(t)
    if k is None:
        return S.flow(t)
    exact = nm.to_mp(ctx, S.matrix**k)
    if cross_check:
        approx = S.flow(k)
        scale = max(nm.max_abs(ctx, exact), 1)
        if nm.max_abs(ctx, approx - exact) / scale > ctx.mpf(10) ** (-(S.precision // 4)):
            raise AbcqiError(f"exact power and exp(t log M) disagree at t={k}")
    return exact


def metric_distance(S: OneParameterSubgroup, t, x: Sequence, y: Sequence):
    """d_{M,t}(x, y) = |M**-t (x - y)|."""
    ctx = S.ctx
    d = nm.vector(ctx, x) - nm.vector(ctx, y)
    return ctx.norm(S.flow(-t) * d)


@dataclass(frozen=True)
class Splitting:
    """Contracting, central and expanding subspaces plus Jordan filtrations.

    ``filtration[k][i]`` is an orthonormal basis of V_{l,i} for the k-th
    modulus level (descending moduli); ``projectors`` are the spectral
    projectors onto V^-, V^0 and V^+ along the other two.
    """

    V_minus: Optional[object]
    V_zero: Optional[object]
    V_plus: Optional[object]
    P_minus: object
    P_zero: object
    P_plus: object
    levels: tuple
    filtration: tuple

    def new_directions(self, ctx, k: int, i: int):
        """Orthonormal basis of V_{l,i} orthogonal to V_{l,i-1}."""
        Vi = self.filtration[k][i]
        if i == 0:
            return Vi
        prev = self.filtration[k][i - 1]
        return nm.orth(ctx, nm.project_out(ctx, Vi, prev), Vi.cols - prev.cols)


def splitting(S: OneParameterSubgroup) -> Splitting:
    ctx = S.ctx
    n = S.n
    one = AlgebraicReal.from_rational(1)
    parts = {-1: ctx.matrix(n, n), 0: ctx.matrix(n, n), 1: ctx.matrix(n, n)}
    dims = {-1: 0, 0: 0, 1: 0}
    for lvl in S.levels:
        c = lvl.modulus.compare(one)
        parts[c] += lvl.projector
        dims[c] += lvl.dim
    filtration = []
    for lvl in S.levels:
        bases = []
        for i in range(lvl.nilpotency):
            ker = (S.N ** (i + 1)).nullspace()
            K = nm.hstack(ctx, [nm.vector(ctx, v) for v in ker]) if ker else None
            dim = lvl.filtration_dim(i)
            bases.append(nm.orth(ctx, lvl.projector * K, dim) if K is not None else None)
        filtration.append(tuple(bases))
    return Splitting(
        nm.orth(ctx, parts[-1], dims[-1]),
        nm.orth(ctx, parts[0], dims[0]),
        nm.orth(ctx, parts[1], dims[1]),
        parts[-1],
        parts[0],
        parts[1],
        S.levels,
        tuple(filtration),
    )
