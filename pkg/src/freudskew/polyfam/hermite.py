"""Skew-orthogonal Hermite polynomials in exact rational arithmetic.

``O_n`` are monic orthogonal for ``exp(-x^2)``; ``S_n`` are monic
skew-orthogonal for ``<f, g>_G = iint f(x) g(y) sgn(y - x) w_G(x) w_G(y)``
with ``w_G = exp(-x^2/2)`` (no 1/2 prefactor, unlike the Freud product).
"""
from __future__ import annotations

from fractions import Fraction

from .families import PolyFamily
from .poly import Poly

_ONE = Fraction(1)


def _x2(c0, c2=_ONE):
    return Poly([Fraction(c0), Fraction(0), Fraction(c2)])


def build_hermite(n_max: int):
    """``(O, S)`` families to degree ``n_max``."""
    o = [Poly([_ONE]), Poly([Fraction(0), _ONE])]
    for n in range(1, n_max):
        o.append(o[n].shift() - o[n - 1] * Fraction(n, 2))
    o = o[: n_max + 1]
    s = []
    for k in range(n_max + 1):
        if k % 2 == 0 or k == 1:
            s.append(o[k])
        else:
            n = k // 2
            s.append(o[k] - o[k - 2] * n)
    return PolyFamily("O_hermite", tuple(o)), PolyFamily("S_hermite", tuple(s))


def hermite_closed_residuals(n: int, family: PolyFamily | None = None):
    """Exact residuals ``(even, odd)`` of

    ``S_{2n+2} - (x^2 - 2n - 1/2) S_{2n} + n (n - 1/2) S_{2n-2}`` and
    ``2 (x^2 - 4n + 1) S_{2n+3} - (2x^4 - 3(1+4n) x^2 + 8n(2n+1) - 5) S_{2n+1}
    + n (2n - 1)(x^2 - 4n - 3) S_{2n-1}``,

    each as the largest absolute coefficient (a Fraction, zero when the
    identity holds).  Indices below zero read as the zero polynomial.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if family is None or len(family) < 2 * n + 4:
        family = build_hermite(2 * n + 3)[1]
    S = family

    def at(k):
        return S[k] if k >= 0 else Poly([Fraction(0)])

    even = (at(2 * n + 2) - _x2(-2 * n - Fraction(1, 2)) * at(2 * n)
            + at(2 * n - 2) * (n * (n - Fraction(1, 2))))
    quartic = Poly([Fraction(8 * n * (2 * n + 1) - 5), Fraction(0),
                    Fraction(-3 * (1 + 4 * n)), Fraction(0), Fraction(2)])
    odd = (_x2(-4 * n + 1) * at(2 * n + 3) * 2 - quartic * at(2 * n + 1)
           + _x2(-4 * n - 3) * at(2 * n - 1) * (n * (2 * n - 1)))
    return even.max_abs(), odd.max_abs()
