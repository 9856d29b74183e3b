"""Three-point relations closing the even and odd skew-orthogonal
subfamilies on themselves, in ``x`` and in the folded variable ``z``.

Residuals are coefficient-space maxima divided by the largest coefficient of
the individual terms, so they measure cancellation relative to the
size of what cancels.
"""
from __future__ import annotations

from mpmath import mpf

from .families import PolyFamily
from .poly import Poly


def _rel(terms):
    total = terms[0]
    for term in terms[1:]:
        total = total + term
    scale = max(term.max_abs() for term in terms)
    return total.max_abs() / scale if scale else total.max_abs()


def _sq(c0, c2):
    """``c0 + c2 * x**2``."""
    return Poly([c0, 0 * c0, c2])


def _lin(c0, c1):
    """``c0 + c1 * z``."""
    return Poly([c0, c1])


def closed_even_residual(Q: PolyFamily, tables, n: int) -> mpf:
    """``f_{n-1} Q_{2n+2} - (f_{n-1} g_n - xi_{n-2} f_n) Q_{2n}
    + b_{2n-3} b_{2n-2} f_n Q_{2n-2}`` with
    ``g_n = x^2 - b_{2n} - b_{2n+1} + xi_n`` and
    ``f_n = b_{2n} b_{2n-1} + xi_{n-1} g_n``."""
    if n < 2:
        raise ValueError("n >= 2 required")
    b, xi = tables.beta, tables.xi
    one = mpf(1)

    def g(k):
        return _sq(-b[2 * k] - b[2 * k + 1] + xi[k], one)

    def f(k):
        return g(k) * xi[k - 1] + b[2 * k] * b[2 * k - 1]

    return _rel([f(n - 1) * Q[2 * n + 2],
                 -((f(n - 1) * g(n) - f(n) * xi[n - 2]) * Q[2 * n]),
                 f(n) * Q[2 * n - 2] * (b[2 * n - 3] * b[2 * n - 2])])


def closed_laguerre_even_residual(Q_hat: PolyFamily, tables, n: int) -> mpf:
    """Folded even relation with ``g_n = z - a_n + xi_n`` and
    ``f_n = b_n + xi_{n-1} g_n`` (``a``, ``b`` the hat coefficients)."""
    if n < 2:
        raise ValueError("n >= 2 required")
    a, bh, xi = tables.a_hat, tables.b_hat, tables.xi
    one = mpf(1)

    def g(k):
        return _lin(-a[k] + xi[k], one)

    def f(k):
        return g(k) * xi[k - 1] + bh[k]

    return _rel([f(n - 1) * Q_hat[n + 1],
                 -((f(n - 1) * g(n) - f(n) * xi[n - 2]) * Q_hat[n]),
                 f(n) * Q_hat[n - 1] * bh[n - 1]])


def _odd_terms(Qm, qn, c, f, g, psi, b_lo, b_mid, d_shift):
    """Assemble the three odd terms from helper callables; ``d_shift`` is 0
    for the corrected relation and 1 for the displayed one."""
    def d(k):
        return -c(k - 1) * c(k)
    n = qn
    return [(f(n - 1) * g(n) + d(n - 1 + d_shift)) * Qm[0],
            (g(n) * c(n) + f(n) * (c(n - 2) * b_mid) + f(n) * g(n) * (f(n - 1) + psi[n - 1])) * Qm[1],
            (f(n) * g(n + 1) + d(n + d_shift)) * Qm[2] * b_lo]


def closed_odd_residual(Q: PolyFamily, tables, n: int, as_printed: bool = False) -> mpf:
    """Three-point relation among ``Q_{2n+3}, Q_{2n+1}, Q_{2n-1}``::

        (d_{n-1} + f_{n-1} g_n) Q_{2n+3}
        + (c_n g_n + c_{n-2} f_n b_{2n-1} b_{2n-2} + f_n g_n (f_{n-1} + psi_{n-1})) Q_{2n+1}
        + b_{2n-4} b_{2n-3} (d_n + f_n g_{n+1}) Q_{2n-1} = 0

    with ``c_n = zeta_{n-1} - b_{2n+1} b_{2n}``, ``d_n = -c_{n-1} c_n``,
    ``f_n = -(psi_n + x^2 - b_{2n+1} - b_{2n+2})`` and
    ``g_n = psi_{n-2} b_{2n-4} b_{2n-3} + zeta_{n-3} (x^2 - b_{2n-2} - b_{2n-3})``.

    ``as_printed=True`` uses ``d_n`` and ``d_{n+1}`` in the outer
    coefficients instead; that variant is not an identity and is kept to
    demonstrate the difference.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    b, psi, zeta = tables.beta, tables.psi, tables.zeta
    one = mpf(1)

    def c(k):
        return zeta[k - 1] - b[2 * k + 1] * b[2 * k]

    def f(k):
        return _sq(-psi[k] + b[2 * k + 1] + b[2 * k + 2], -one)

    def g(k):
        return _sq(psi[k - 2] * b[2 * k - 4] * b[2 * k - 3]
                   - zeta[k - 3] * (b[2 * k - 2] + b[2 * k - 3]), zeta[k - 3])

    terms = _odd_terms((Q[2 * n + 3], Q[2 * n + 1], Q[2 * n - 1]), n, c, f, g, psi,
                       b[2 * n - 4] * b[2 * n - 3], b[2 * n - 1] * b[2 * n - 2],
                       1 if as_printed else 0)
    return _rel(terms)


def closed_laguerre_odd_residual(Q_tilde: PolyFamily, tables, n: int, as_printed: bool = False) -> mpf:
    """Folded odd relation with ``c_n = zeta_{n-1} - bt_n``,
    ``f_n = -z + at_n - psi_n`` and
    ``g_n = bt_{n-2} psi_{n-2} + zeta_{n-3} (z - at_{n-2})``.

    ``as_printed=True`` shifts the ``d`` indices up by one and uses
    ``at_{n-1}`` inside ``g_n``.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    a, bt, psi, zeta = tables.a_tilde, tables.b_tilde, tables.psi, tables.zeta
    one = mpf(1)
    lag = 1 if as_printed else 2

    def c(k):
        return zeta[k - 1] - bt[k]

    def f(k):
        return _lin(a[k] - psi[k], -one)

    def g(k):
        return _lin(bt[k - 2] * psi[k - 2] - zeta[k - 3] * a[k - lag], zeta[k - 3])

    terms = _odd_terms((Q_tilde[n + 1], Q_tilde[n], Q_tilde[n - 1]), n, c, f, g, psi,
                       bt[n - 2], bt[n - 1], 1 if as_printed else 0)
    return _rel(terms)
