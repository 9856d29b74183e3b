"""Hankel determinants, Pfaffians and the transition-matrix identity.

Pfaffian sign convention: ``pf([[0, a], [-a, 0]]) = a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .errors import PrecisionExhausted, SingularPivot
from .moments import MomentTable

KINDS = ("hankel_moment", "skew_moment", "N_matrix", "D_matrix", "R_matrix", "Q_transition")
_SKEW_KINDS = ("skew_moment", "N_matrix", "R_matrix")


@dataclass(frozen=True)
class FiniteMatrixBlock:
    """A square block tagged with the role it plays."""

    entries: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}")
        rows = tuple(tuple(r) for r in self.entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("block must be square and non-empty")
        object.__setattr__(self, "entries", rows)
        if self.kind in _SKEW_KINDS and skew_defect(rows) > _skew_tol(rows):
            raise ValueError(f"{self.kind} block is not skew-symmetric")
        if self.kind == "D_matrix":
            n = len(rows)
            if any(rows[i][j] != 0 for i in range(n) for j in range(n) if i != j):
                raise ValueError("D_matrix must be diagonal")
            if any(rows[i][i] <= 0 for i in range(n)):
                raise ValueError("D_matrix must have a positive diagonal")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def as_lists(self):
        return [list(r) for r in self.entries]


def _scale(a) -> mpf:
    return max((abs(x) for row in a for x in row), default=0)


def _skew_tol(a):
    if isinstance(a[0][0], (int, Fraction)):
        return 0
    return _scale(a) * mpf(2) ** (8 - mp.prec)


def skew_defect(a) -> mpf:
    """``max |A + A^T|`` over all entries."""
    n = len(a)
    return max((abs(a[i][j] + a[j][i]) for i in range(n) for j in range(n)), default=0)


def _rows(block):
    if isinstance(block, FiniteMatrixBlock):
        return block.as_lists()
    return [list(r) for r in block]


def hankel_tau(moments: MomentTable, n: int) -> mpf:
    """``det (m_{i+j})_{0 <= i, j < n}``; the empty determinant is 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return mpf(1)
    return mpmath.det(mpmath.matrix(moments.hankel_block(n)))


def pfaffian(block) -> mpf:
    """Pfaffian of an even-dimensional skew-symmetric matrix.

    Skew-symmetric Gaussian elimination: at each step the largest entry in
    the pivot row is swapped into the superdiagonal position, then the
    trailing block is updated by a congruence that keeps it skew.
    Works over mpf and over Fraction.
    """
    a = _rows(block)
    n = len(a)
    if n % 2:
        raise ValueError("Pfaffian needs an even dimension")
    if n and skew_defect(a) > _skew_tol(a):
        raise ValueError("matrix is not skew-symmetric")
    exact = n > 0 and isinstance(a[0][0], (int, Fraction))
    floor = 0 if exact else _scale(a) * mpf(2) ** (-mp.prec)
    result = Fraction(1) if exact else mpf(1)
    for k in range(0, n - 1, 2):
        p = max(range(k + 1, n), key=lambda j: abs(a[k][j]))
        if a[k][p] == 0:
            return result * 0
        if abs(a[k][p]) <= floor:
            raise SingularPivot(f"all pivot candidates underflow at step {k // 2}")
        if p != k + 1:
            a[k + 1], a[p] = a[p], a[k + 1]
            for row in a:
                row[k + 1], row[p] = row[p], row[k + 1]
            result = -result
        piv = a[k][k + 1]
        result *= piv
        tau = [a[k][i] / piv for i in range(n)]
        for i in range(k + 2, n):
            ri, rk1 = a[i], a[k + 1]
            for j in range(k + 2, n):
                ri[j] -= tau[i] * rk1[j] + tau[j] * ri[k + 1]
    return result


def pfaffian_by_expansion(block):
    """Pfaffian by expansion along the first row (factorial cost; small
    matrices only)."""
    a = _rows(block)
    n = len(a)
    if n % 2:
        raise ValueError("Pfaffian needs an even dimension")

    def rec(idx):
        if not idx:
            return 1
        first, rest = idx[0], idx[1:]
        total = 0
        for pos, j in enumerate(rest):
            minor = rest[:pos] + rest[pos + 1:]
            term = a[first][j] * rec(minor)
            total = total + term if pos % 2 == 0 else total - term
        return total

    return rec(tuple(range(n)))


def pfaffian_checked(block):
    """:func:`pfaffian` cross-checked by expansion when ``dim <= 6``."""
    value = pfaffian(block)
    a = _rows(block)
    if len(a) <= 6:
        other = pfaffian_by_expansion(a)
        if abs(value - other) > max(_skew_tol(a), 0) * 64 * max(1, _scale(a)) ** (len(a) // 2):
            raise ArithmeticError("Pfaffian elimination and expansion disagree")
    return value


@dataclass(frozen=True)
class NormalizationTable:
    """``h_n = (P_n, P_n)`` and ``r_n = <Q_{2n}, Q_{2n+1}>``."""

    h: tuple
    r: tuple

    def __post_init__(self):
        if any(x <= 0 for x in self.h):
            raise ValueError("h_n must be positive")


def hankel_pivots(moments: MomentTable, count: int):
    """LDL^T pivots of the Hankel matrix; pivot ``n`` equals
    ``tau_{n+1} / tau_n`` and the largest cancellation is returned
    (in bits) alongside."""
    a = moments.hankel_block(count)
    pivots, lost = [], 0.0
    for k in range(count):
        d = a[k][k]
        if d <= 0:
            raise PrecisionExhausted(f"Hankel pivot {k} is not positive")
        lost = max(lost, float(mpmath.log(moments.m(2 * k) / d, 2)))
        pivots.append(d)
        for i in range(k + 1, count):
            f = a[i][k] / d
            for j in range(k + 1, i + 1):
                a[i][j] -= f * a[j][k]
                a[j][i] = a[i][j]
    return pivots, lost


def normalizations(moments: MomentTable, n_max: int, r_max: int | None = None) -> NormalizationTable:
    """``h_0..h_{n_max}`` from Hankel pivots and ``r_0..r_{r_max}`` as
    Pfaffian ratios ``pf(M_{2n+2}) / pf(M_{2n})`` of leading skew-moment
    blocks. ``r_max`` defaults to ``n_max``; pass ``-1`` to skip r."""
    r_max = n_max if r_max is None else r_max
    h, lost = hankel_pivots(moments, n_max + 1)
    if lost > mp.prec / 2:
        raise PrecisionExhausted(f"Hankel elimination cancelled {lost:.0f} bits")
    r = []
    if r_max >= 0:
        full = moments.skew_block(2 * r_max + 2)
        prev = mpf(1)
        for n in range(r_max + 1):
            sub = [row[: 2 * n + 2] for row in full[: 2 * n + 2]]
            cur = pfaffian(sub)
            r.append(cur / prev)
            # cancellation relative to the raw entry the ratio refines
            lost = float(mpmath.log(abs(full[2 * n][2 * n + 1] / r[-1]), 2)) if cur else mp.prec
            if lost > mp.prec / 2:
                raise PrecisionExhausted(f"Pfaffian ratio r_{n} cancelled {lost:.0f} bits")
            prev = cur
    return NormalizationTable(tuple(h), tuple(r))


def _zeros(n):
    return [[mpf(0)] * n for _ in range(n)]


def transition_block(xi, psi, zeta, n: int) -> FiniteMatrixBlock:
    """Lower-triangular ``Q`` with ``Q_j = sum_k Q[j][k] P_k``."""
    q = _zeros(n)
    for j in range(n):
        q[j][j] = mpf(1)
        m = j // 2
        if j % 2 == 0:
            if m >= 1:
                q[j][j - 2] = xi[m - 1]
        else:
            if m >= 1:
                q[j][j - 2] = psi[m - 1]
            if m >= 2:
                q[j][j - 4] = zeta[m - 2]
    return FiniteMatrixBlock(q, "Q_transition")


def r_block(r, n: int) -> FiniteMatrixBlock:
    m = _zeros(n)
    for k in range(n // 2):
        m[2 * k][2 * k + 1] = r[k]
        m[2 * k + 1][2 * k] = -r[k]
    return FiniteMatrixBlock(m, "R_matrix")


def d_block(h, n: int) -> FiniteMatrixBlock:
    m = _zeros(n)
    for k in range(n):
        m[k][k] = h[k]
    return FiniteMatrixBlock(m, "D_matrix")


def n_block(h, n: int) -> FiniteMatrixBlock:
    """``N_{i,j} = (P_i, nbar P_j)`` from the normalizations alone."""
    m = _zeros(n)
    for i in range(n):
        if i + 3 < n:
            m[i][i + 3] = 4 * h[i + 3]
            m[i + 3][i] = -4 * h[i + 3]
        if i + 1 < n:
            m[i][i + 1] = mpf(i + 1) / 2 * h[i]
            m[i + 1][i] = -mpf(i + 1) / 2 * h[i]
    return FiniteMatrixBlock(m, "N_matrix")


def transition_identity_residual(q: FiniteMatrixBlock, r: FiniteMatrixBlock,
                                 d: FiniteMatrixBlock, nmat: FiniteMatrixBlock,
                                 n_trunc: int | None = None) -> mpf:
    """Max-abs entry of ``Q^T R^-1 Q + D^-1 N D^-1`` on the leading
    ``(n_trunc - 4)`` square block."""
    n = n_trunc or q.dim
    if n < 8 or n % 2:
        raise ValueError("n_trunc must be even and at least 8")
    if not q.dim == r.dim == d.dim == nmat.dim == n:
        raise ValueError("blocks must share the truncation size")
    Q = mpmath.matrix(q.as_lists())
    Rinv = mpmath.matrix(n, n)
    for k in range(n // 2):
        rk = r.entries[2 * k][2 * k + 1]
        Rinv[2 * k, 2 * k + 1] = -1 / rk
        Rinv[2 * k + 1, 2 * k] = 1 / rk
    Dinv = mpmath.diag([1 / d.entries[k][k] for k in range(n)])
    E = Q.T * Rinv * Q + Dinv * mpmath.matrix(nmat.as_lists()) * Dinv
    m = n - 4
    return max(abs(E[i, j]) for i in range(m) for j in range(m))
