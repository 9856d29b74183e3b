"""The orthogonal family ``P``, the skew-orthogonal family ``Q`` and their
images under ``z = x**2``."""
from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from ..coeffs import CoefficientTables
from ..errors import ParityViolation
from .poly import Poly

KINDS = ("P", "Q", "P_hat", "P_tilde", "Q_hat", "Q_tilde", "O_hermite", "S_hermite")


@dataclass(frozen=True)
class PolyFamily:
    kind: str
    members: tuple
    tables: CoefficientTables | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family {self.kind!r}")
        for k, p in enumerate(self.members):
            if p.degree != k or not p.is_monic():
                raise ValueError(f"{self.kind}_{k} is not monic of degree {k}")

    def __getitem__(self, k):
        if k < 0:
            return Poly([mpf(0)])
        return self.members[k]

    def __len__(self):
        return len(self.members)


def build_P(tables: CoefficientTables, n_max: int) -> PolyFamily:
    """``P_0 = 1``, ``P_1 = x``, ``P_{n+1} = x P_n - beta_n P_{n-1}``."""
    b = tables.beta
    one = mpf(1)
    members = [Poly([one]), Poly([0 * one, one])]
    for n in range(1, n_max):
        members.append(members[n].shift() - members[n - 1] * b[n])
    return PolyFamily("P", tuple(members[: n_max + 1]), tables)


def build_Q(tables: CoefficientTables, P: PolyFamily, n_max: int) -> PolyFamily:
    """``Q_{2n} = P_{2n} + xi_{n-1} P_{2n-2}`` and
    ``Q_{2n+1} = P_{2n+1} + psi_{n-1} P_{2n-1} + zeta_{n-2} P_{2n-3}``."""
    if len(P) <= n_max:
        raise ValueError("P family too short")
    xi, psi, zeta = tables.xi, tables.psi, tables.zeta
    members = []
    for j in range(n_max + 1):
        m = j // 2
        if j % 2 == 0:
            q = P[j] + P[j - 2] * xi[m - 1] if m >= 1 else P[j]
        else:
            q = P[j]
            if m >= 1:
                q = q + P[j - 2] * psi[m - 1]
            if m >= 2:
                q = q + P[j - 4] * zeta[m - 2]
        members.append(q)
    return PolyFamily("Q", tuple(members), tables)


def fold_to_laguerre(family: PolyFamily, tol=None):
    """Substitute ``z = x**2``: even members give the hat family, odd members
    divided by ``x`` give the tilde family."""
    if family.kind not in ("P", "Q"):
        raise ValueError("only P and Q fold")
    tol = mpf(2) ** (16 - mp.prec) if tol is None else tol
    hat, tilde = [], []
    for k, p in enumerate(family.members):
        defect = p.parity_defect(k % 2)
        if defect > tol * p.max_abs():
            raise ParityViolation(f"{family.kind}_{k} has wrong-parity coefficient {defect}")
        (hat if k % 2 == 0 else tilde).append(p.in_square(k % 2))
    return (PolyFamily(family.kind + "_hat", tuple(hat), family.tables),
            PolyFamily(family.kind + "_tilde", tuple(tilde), family.tables))


def apply_nbar(p: Poly, t) -> Poly:
    """``d/dx - 4x^3 + 2tx`` applied to ``p``."""
    return p.derivative() - p.shift(3) * 4 + p.shift(1) * (2 * t)


def structure_relation_residual(P: PolyFamily, n: int):
    """Max-abs coefficient of ``P_n' - n P_{n-1} - 8 b_n b_{n-1} b_{n-2} P_{n-3}``."""
    b = P.tables.beta
    res = P[n].derivative() - P[n - 1] * n
    if n >= 3:
        res = res - P[n - 3] * (8 * b[n] * b[n - 1] * b[n - 2])
    return res.max_abs()


def laguerre_three_point_residual(family: PolyFamily, a, b, n: int):
    """``z F_n - F_{n+1} - a_n F_n - b_n F_{n-1}`` for the folded ``P``."""
    res = family[n].shift() - family[n + 1] - family[n] * a[n]
    if n >= 1:
        res = res - family[n - 1] * b[n]
    return res.max_abs()
