"""Symmetric and skew moments of the quartic Freud weight.

``w(x; t) = exp(-x**4 + t*x**2)`` enters the skew product and its square
``omega = w**2`` the symmetric one:

* ``m_k = int x^k omega(x) dx``
* ``mu_{i,j} = 1/2 iint x^i y^j sgn(y - x) w(x) w(y) dx dy``
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mpf

from .errors import CrossCheckFailure
from .numerics import (
    DEFAULT_PRECISION_BITS, DEFAULT_QUAD_TOL, QuadratureConfig,
    cumulative_integrate, integrate, to_scalar, working_precision,
)

GUARD_BITS = 32
SPOT_CHECK_STRIDE = 8


@dataclass(frozen=True)
class WeightSpec:
    """Weight parameter ``t`` together with the quadrature that realises
    every integral against ``w`` and ``w**2``."""

    t: mpf
    quad: QuadratureConfig

    def __post_init__(self):
        if not self.quad.truncation_ok(self.t):
            raise ValueError(
                f"domain_cut {self.quad.domain_cut} too small for t={self.t} "
                f"at {self.quad.precision_bits} bits")

    @classmethod
    def make(cls, t, precision_bits: int = DEFAULT_PRECISION_BITS,
             quad_tol=DEFAULT_QUAD_TOL, **quad_kwargs) -> "WeightSpec":
        t = to_scalar(t if not isinstance(t, (int,)) else str(t), precision_bits + GUARD_BITS)
        quad = QuadratureConfig.for_parameter(t, precision_bits, quad_tol, **quad_kwargs)
        return cls(t, quad)

    @property
    def bits(self) -> int:
        """Internal working precision (requested precision plus guard bits)."""
        return self.quad.precision_bits + GUARD_BITS

    def w(self, x):
        return mpmath.exp(-x**4 + self.t * x**2)

    def omega(self, x):
        return mpmath.exp(-2 * x**4 + 2 * self.t * x**2)


def _powers(x, base, count):
    out = [base]
    for _ in range(count - 1):
        out.append(out[-1] * x)
    return out


@dataclass
class MomentTable:
    """Tabulated moments; odd symmetric moments and equal-parity skew moments
    are identically zero and never stored."""

    sym: dict = field(default_factory=dict)
    skew: dict = field(default_factory=dict)
    sym_max: int = -1
    skew_max: int = -1

    def m(self, k: int) -> mpf:
        if k % 2:
            return mpf(0)
        if k > self.sym_max:
            raise KeyError(f"symmetric moment m_{k} not tabulated (max {self.sym_max})")
        return self.sym[k]

    def mu(self, i: int, j: int) -> mpf:
        if (i + j) % 2 == 0:
            return mpf(0)
        if max(i, j) > self.skew_max:
            raise KeyError(f"skew moment mu_{i},{j} not tabulated (max {self.skew_max})")
        if i < j:
            return self.skew[i, j]
        return mpmath.fneg(self.skew[j, i], exact=True)

    def skew_block(self, n: int):
        """The ``n x n`` matrix ``(mu_{i,j})_{0<=i,j<n}`` as nested lists."""
        return [[self.mu(i, j) for j in range(n)] for i in range(n)]

    def hankel_block(self, n: int):
        return [[self.m(i + j) for j in range(n)] for i in range(n)]


@lru_cache(maxsize=32)
def _sym_quadratures(spec: WeightSpec, kmax: int):
    """``m_0``, ``m_2`` and the spot-check moments ``m_{8j}`` by quadrature."""
    ks = sorted({0, 2} | set(range(SPOT_CHECK_STRIDE, kmax + 1, SPOT_CHECK_STRIDE)))
    with working_precision(spec.bits):
        def f(x):
            om = spec.omega(x)
            x2 = x * x
            return [om * x2 ** (k // 2) for k in ks]
        vals = integrate(f, spec.quad)
    return dict(zip(ks, vals))


@lru_cache(maxsize=32)
def _sym_table(spec: WeightSpec, kmax: int):
    kmax += kmax % 2
    quad = _sym_quadratures(spec, kmax)
    tol = 100 * spec.quad.target_rel_tol
    with working_precision(spec.bits):
        m = {0: quad[0], 2: quad[2]}
        t = spec.t
        for k in range(0, kmax - 3, 2):
            # Pearson equation for omega: (k+1) m_k + 4t m_{k+2} - 8 m_{k+4} = 0
            m[k + 4] = ((k + 1) * m[k] + 4 * t * m[k + 2]) / 8
        for k, q in quad.items():
            if k in (0, 2):
                continue
            if abs(m[k] - q) > tol * abs(q):
                raise CrossCheckFailure(
                    f"moment recurrence drifted from quadrature at m_{k}", m[k], q)
    return {k: v for k, v in m.items() if k <= kmax}


def sym_moment(spec: WeightSpec, k: int) -> mpf:
    """``m_k(t) = int x^k exp(-2x^4 + 2tx^2) dx``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k % 2:
        return mpf(0)
    return _sym_table(spec, max(k, 2))[k]


@lru_cache(maxsize=32)
def _skew_table(spec: WeightSpec, n: int):
    """All ``mu_{i,j}`` with ``i < j < n`` and ``i + j`` odd."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if (i + j) % 2]
    with working_precision(spec.bits):
        def weighted_powers(y):
            return _powers(y, spec.w(y), n)

        full = integrate(weighted_powers, spec.quad)
        cumulative = cumulative_integrate(weighted_powers, spec.quad)

        def outer(x):
            px = weighted_powers(x)
            cx = cumulative(x)
            return [px[i] * cx[j] for i, j in pairs]

        inner = integrate(outer, spec.quad)
        table = {}
        for (i, j), v in zip(pairs, inner):
            table[i, j] = full[i] * full[j] / 2 - v
    return table


_skew_cache: dict = {}


def skew_table(spec: WeightSpec, n: int) -> dict:
    """Skew moments for indices below ``n``, reusing a larger cached table."""
    cached = _skew_cache.get(spec)
    if cached is not None and cached[0] >= n:
        return cached[1]
    n = max(n, 4)
    table = _skew_table(spec, n)
    _skew_cache[spec] = (n, table)
    return table


def skew_moment(spec: WeightSpec, i: int, j: int) -> mpf:
    """``mu_{i,j} = <x^i, y^j>_t`` through the one-dimensional reduction
    ``1/2 M_i M_j - int x^i w(x) C_j(x) dx`` with ``C_j`` the cumulative
    integral of ``y^j w(y)`` from the left end of the domain."""
    if i < 0 or j < 0:
        raise ValueError("indices must be non-negative")
    if (i + j) % 2 == 0:
        return mpf(0)
    table = skew_table(spec, max(i, j) + 1)
    return table[i, j] if i < j else mpmath.fneg(table[j, i], exact=True)


def moment_table(spec: WeightSpec, sym_max: int, skew_max: int) -> MomentTable:
    """Moments ``m_k`` for ``k <= sym_max`` and ``mu_{i,j}`` for
    ``i, j <= skew_max``."""
    sym = dict(_sym_table(spec, max(sym_max, 2)))
    skew = {}
    if skew_max >= 1:
        full = skew_table(spec, skew_max + 1)
        skew = {k: v for k, v in full.items() if k[1] <= skew_max}
    return MomentTable(sym=sym, skew=skew, sym_max=max(sym_max, 2) + max(sym_max, 2) % 2,
                       skew_max=skew_max)
