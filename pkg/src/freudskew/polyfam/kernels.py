"""Two-dimensional pairings of the folded families ``Q_hat`` and ``Q_tilde``
on the positive quadrant.

Substituting ``u = x^2`` and ``v = y^2`` in ``<Q_{2i}, Q_{2j+1}>_t`` and
summing the four sign quadrants gives, with ``E(z) = exp(-z^2 + t z)``,

    <Q_{2i}, Q_{2j+1}>_t = 1/2 iint Q_hat_i(u) Q_tilde_j(v) E(u) E(v)
                           (1 + sgn(v - u)) / (2 sqrt(u)) du dv.

Each variant ``ell`` splits the factor ``u^-a v^-b (1 + sgn)/(2 sqrt u)``
into weights ``u^a E(u)``, ``v^b E(v)`` and a kernel; all four describe the
same integrand.  ``as_printed=True`` instead uses weights
``z^lam exp(-2z^2 + 2tz)`` and kernels proportional to ``sgn(v - u) / 4``;
that variant does not reproduce the pairing and exists for comparison.
"""
from __future__ import annotations

import mpmath
from mpmath import mpf

from ..errors import NonConvergence
from ..moments import WeightSpec
from ..numerics import composite_rule, working_precision

# (a, b) exponents of the u and v weights
WEIGHT_EXPONENTS = {1: (-0.5, -0.5), 2: (0.5, 0.5), 3: (0.5, -0.5), 4: (-0.5, 0.5)}


def kernel(ell: int, u, v, as_printed: bool = False):
    a, b = WEIGHT_EXPONENTS[ell]
    s = mpmath.sign(v - u)
    if as_printed:
        return s / 4 * u ** (-a - mpf(1) / 2) * v ** (-b)
    return (1 + s) / 2 * u ** (-a - mpf(1) / 2) * v ** (-b)


def laguerre_weight(lam, z, t, as_printed: bool = False):
    e = 2 * (-z * z + t * z) if as_printed else -z * z + t * z
    return z ** mpf(lam) * mpmath.exp(e)


def _split_factors(as_printed):
    """Sign factor for ``y > x`` and for ``y < x``; the remainder of every
    kernel, ``u^(-a-1/2) v^(-b)``, is separable."""
    if as_printed:
        return mpf(1) / 4, -mpf(1) / 4
    return mpf(1), mpf(0)


def kernel_gram(Q_hat, Q_tilde, ell: int, spec: WeightSpec, size: int,
                as_printed: bool = False, tol=mpf("1e-12"), bits: int = 96):
    """``G[i][j] = <Q_hat_i | Q_tilde_j>_ell`` for ``i, j < size`` by a
    tensor-product Gauss-Legendre grid in ``x = sqrt(u)``, ``y = sqrt(v)``
    on ``[0, X]^2`` at reduced precision.

    Off-diagonal panel pairs see a constant sign, so their contribution is
    an outer product of per-panel sums; diagonal panel squares are split
    along ``x = y`` into two triangles, each mapped onto a square.  Panels
    are doubled until two grids agree entrywise to ``tol`` relative to
    ``sqrt(|G_ii G_jj|)``.
    """
    if ell not in WEIGHT_EXPONENTS:
        raise ValueError("ell must be 1, 2, 3 or 4")
    a, b = WEIGHT_EXPONENTS[ell]
    above, below = _split_factors(as_printed)
    nodes = 16
    with working_precision(bits):
        t = +spec.t
        cut = mpf(spec.quad.domain_cut)
        half = mpf(1) / 2

        def alpha(x):
            # u side, with the Jacobian 2x and the 1/2 prefactor folded in
            if x == 0:
                return [mpf(0)] * size
            u = x * x
            c = laguerre_weight(a, u, t, as_printed) * u ** (-a - half) * x
            return [Q_hat[i](u) * c for i in range(size)]

        def beta(y):
            if y == 0:
                return [mpf(0)] * size
            v = y * y
            c = laguerre_weight(b, v, t, as_printed) * v ** (-b) * 2 * y
            return [Q_tilde[j](v) * c for j in range(size)]

        ref, wref, _ = composite_rule(mpf(0), mpf(1), 1, nodes, bits)

        def grid(panels):
            xs, ws, edges = composite_rule(mpf(0), cut, panels, nodes, bits)
            A = [alpha(x) for x in xs]
            B = [beta(y) for y in xs]

            def panel_sum(V, p, k):
                return sum(ws[m] * V[m][k] for m in range(p * nodes, (p + 1) * nodes))

            sumA = [[panel_sum(A, p, i) for i in range(size)] for p in range(panels)]
            sumB = [[panel_sum(B, p, j) for j in range(size)] for p in range(panels)]
            total = [sum(sumA[p][i] for p in range(panels)) for i in range(size)]
            G = [[mpf(0)] * size for _ in range(size)]
            left = [mpf(0)] * size
            for q in range(panels):
                for i in range(size):
                    right = total[i] - left[i] - sumA[q][i]
                    for j in range(size):
                        G[i][j] += (above * left[i] + below * right) * sumB[q][j]
                for i in range(size):
                    left[i] += sumA[q][i]
            for p in range(panels):
                lo, hi = edges[p], edges[p + 1]
                for m in range(p * nodes, (p + 1) * nodes):
                    y, wy, by = xs[m], ws[m], B[m]
                    for s, w_s in zip(ref, wref):
                        al = alpha(lo + (y - lo) * s)
                        ah = alpha(y + (hi - y) * s)
                        fl = wy * w_s * (y - lo) * above
                        fh = wy * w_s * (hi - y) * below
                        for i in range(size):
                            ci = fl * al[i] + fh * ah[i]
                            for j in range(size):
                                G[i][j] += ci * by[j]
            return G

        prev, panels = None, 4
        for _ in range(5):
            cur = grid(panels)
            if prev is not None:
                big = max(abs(c) for row in cur for c in row) or mpf(1)
                diag = [max(abs(cur[k][k]), big * mpf(2) ** (-bits // 2)) for k in range(size)]
                if all(abs(prev[i][j] - cur[i][j]) <= tol * mpmath.sqrt(diag[i] * diag[j])
                       for i in range(size) for j in range(size)):
                    return cur
            prev, panels = cur, panels * 2
    raise NonConvergence("kernel pairing grid did not settle")


def biorthogonal_kernel_check(Q_hat, Q_tilde, ell: int, i: int, j: int, spec: WeightSpec,
                              as_printed: bool = False):
    """Single entry ``<Q_hat_i | Q_tilde_j>_ell``."""
    size = max(i, j) + 1
    return kernel_gram(Q_hat, Q_tilde, ell, spec, size, as_printed)[i][j]
