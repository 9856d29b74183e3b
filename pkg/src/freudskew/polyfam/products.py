"""Gram matrices of polynomial families under the symmetric, skew and
folded Laguerre products, evaluated by direct quadrature of the
polynomial values (independent of the moment tables)."""
from __future__ import annotations

import mpmath

from ..moments import WeightSpec
from ..numerics import cumulative_integrate, integrate, working_precision


def _values(members, x):
    return [p(x) for p in members]


def sym_gram(members, spec: WeightSpec):
    """``G[i][j] = int F_i F_j omega dx``."""
    n = len(members)
    with working_precision(spec.bits):
        def f(x):
            v = _values(members, x)
            om = spec.omega(x)
            return [v[i] * v[j] * om for i in range(n) for j in range(i, n)]
        flat = iter(integrate(f, spec.quad))
        g = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g[i][j] = g[j][i] = next(flat)
    return g


def cross_gram(left, right, spec: WeightSpec):
    """``G[i][j] = int A_i B_j omega dx`` for two lists of polynomials."""
    with working_precision(spec.bits):
        def f(x):
            a = _values(left, x)
            b = _values(right, x)
            om = spec.omega(x)
            return [ai * bj * om for ai in a for bj in b]
        flat = integrate(f, spec.quad)
    m = len(right)
    return [flat[i * m:(i + 1) * m] for i in range(len(left))]


def laguerre_gram(members, lam, spec: WeightSpec):
    """``int_0^inf F_i(z) F_j(z) z^lam exp(-2z^2 + 2tz) dz`` for
    ``lam = -1/2`` or ``1/2``, computed after ``z = x^2`` as
    ``int_R |x|^(2 lam + 1) F_i(x^2) F_j(x^2) omega(x) dx``."""
    if lam not in (-0.5, 0.5):
        raise ValueError("lam must be -1/2 or 1/2")
    odd = lam > 0
    n = len(members)
    with working_precision(spec.bits):
        def f(x):
            z = x * x
            v = _values(members, z)
            om = spec.omega(x) * (z if odd else 1)
            return [v[i] * v[j] * om for i in range(n) for j in range(i, n)]
        flat = iter(integrate(f, spec.quad))
        g = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g[i][j] = g[j][i] = next(flat)
    return g


def skew_gram(members, spec: WeightSpec):
    """``G[i][j] = <F_i, F_j>_t`` through the cumulative reduction
    ``1/2 I_i I_j - int F_i w C_j`` (``C_j`` the running integral of
    ``F_j w``)."""
    n = len(members)
    with working_precision(spec.bits):
        def fw(x):
            wx = spec.w(x)
            return [v * wx for v in _values(members, x)]
        full = integrate(fw, spec.quad)
        cum = cumulative_integrate(fw, spec.quad)

        def outer(x):
            a = fw(x)
            c = cum(x)
            return [a[i] * c[j] for i in range(n) for j in range(n) if i != j]
        flat = iter(integrate(outer, spec.quad))
        g = [[mpmath.mpf(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    g[i][j] = full[i] * full[j] / 2 - next(flat)
    return g


def skew_scale(members, spec: WeightSpec):
    """``s_i = sqrt(M_0 int F_i^2 w)``; ``|<F_i, F_j>| <= s_i s_j / 2``."""
    with working_precision(spec.bits):
        def f(x):
            wx = spec.w(x)
            return [wx] + [v * v * wx for v in _values(members, x)]
        vals = integrate(f, spec.quad)
        return [mpmath.sqrt(vals[0] * v) for v in vals[1:]]
