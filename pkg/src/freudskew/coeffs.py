"""Recurrence-coefficient sequences of the quartic Freud system.

``beta`` comes from Hankel pivots (authoritative) with forward
discrete Painleve I iteration as a diagnostic; ``xi`` is advanced from two
initial values fixed by skew moments; ``psi`` and ``zeta`` follow from
``beta`` and ``xi``; the semi-classical Laguerre pairs are simple
combinations of ``beta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .errors import (
    CrossCheckFailure, DivisionByNearZero, PositivityLoss, ZeroDenominator,
)
from .moments import MomentTable, WeightSpec, moment_table
from .numerics import working_precision
from .skewlinalg import NormalizationTable, normalizations


QUAD_HEADROOM = mpf(10) ** 6


def default_tolerance(precision_bits: int) -> mpf:
    """Cross-check tolerance ``10**(-0.15 * precision_bits)``."""
    return mpf(10) ** (-mpf(precision_bits) * mpf("0.15"))


class ZeroPadded(Sequence):
    """Read-only sequence that yields exact zero at negative indices."""

    __slots__ = ("_data",)

    def __init__(self, data):
        self._data = tuple(data)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return self._data[k]
        if k < 0:
            return mpf(0)
        return self._data[k]

    def __len__(self):
        return len(self._data)

    def __iter__(self):
        return iter(self._data)

    def __repr__(self):
        return f"ZeroPadded({list(self._data)!r})"


# ---------------------------------------------------------------- beta

def beta_from_hankel(norm: NormalizationTable, n_max: int) -> ZeroPadded:
    """``beta_0 = 0`` and ``beta_n = h_n / h_{n-1}``."""
    h = norm.h
    if n_max >= len(h):
        raise ValueError(f"h tabulated to {len(h) - 1}, need {n_max}")
    return ZeroPadded([mpf(0)] + [h[n] / h[n - 1] for n in range(1, n_max + 1)])


def dp1_residual(beta, t, n: int) -> mpf:
    """``n - 8 beta_n (beta_{n+1} + beta_n + beta_{n-1}) + 4 t beta_n``."""
    b = beta
    return n - 8 * b[n] * (b[n + 1] + b[n] + b[n - 1]) + 4 * t * b[n]


@dataclass
class ForwardRun:
    beta: ZeroPadded
    divergence_index: int | None = None


def beta_forward_dp1(beta1, t, n_max: int, reference=None, cross_tol=None) -> ForwardRun:
    """Iterate ``beta_{n+1} = n / (8 beta_n) + t/2 - beta_n - beta_{n-1}``.

    Raises :class:`PositivityLoss` at the first non-positive entry.  With a
    ``reference`` sequence, ``divergence_index`` records the first index whose
    relative deviation exceeds ``cross_tol``.
    """
    if beta1 <= 0:
        raise ValueError("beta_1 must be positive")
    b = [mpf(0), mpf(beta1)]
    for n in range(1, n_max):
        nxt = mpf(n) / (8 * b[n]) + t / 2 - b[n] - b[n - 1]
        if nxt <= 0:
            raise PositivityLoss(n + 1, b)
        b.append(nxt)
    run = ForwardRun(ZeroPadded(b[: n_max + 1]))
    if reference is not None:
        tol = default_tolerance(mp.prec) if cross_tol is None else cross_tol
        for n in range(1, min(len(run.beta), len(reference))):
            if abs(run.beta[n] - reference[n]) > tol * abs(reference[n]):
                run.divergence_index = n
                break
    return run


# ------------------------------------------------------------------ xi

def xi_initial_routes(moments: MomentTable, norm: NormalizationTable, beta) -> dict:
    """Every route to the two initial values.

    ``xi0_moment``  ``-mu_{2,1}/mu_{0,1} + beta_1``
    ``xi0_norm``    ``4 r_1 / h_0``
    ``xi1``         ``(1/2 - h_1/r_0) / (4 xi_0) + 1/(4 beta_2)``
    ``xi1_gamma2``, ``xi1_gamma0``  from the coefficients of the degree-4
    even skew-orthogonal polynomial ``x^4 + g2 x^2 + g0``.
    """
    mu = moments.mu
    if mu(0, 1) == 0:
        raise ZeroDivisionError("<1, y> vanishes")
    b1, b2, b3 = beta[1], beta[2], beta[3]
    out = {"xi0_moment": -mu(2, 1) / mu(0, 1) + b1}
    if len(norm.r) > 1:
        out["xi0_norm"] = 4 * norm.r[1] / norm.h[0]
    xi0 = out["xi0_moment"]
    out["xi1"] = (mpf(1) / 2 - norm.h[1] / norm.r[0]) / (4 * xi0) + 1 / (4 * b2)
    # <x^4 + g2 x^2 + g0, y^k> = 0 for k = 1, 3
    sol = mpmath.lu_solve(
        mpmath.matrix([[mu(2, 1), mu(0, 1)], [mu(2, 3), mu(0, 3)]]),
        mpmath.matrix([-mu(4, 1), -mu(4, 3)]))
    g2, g0 = sol[0], sol[1]
    out["xi1_gamma2"] = g2 + b1 + b2 + b3
    out["xi1_gamma0"] = b3 - g0 / b1
    return out


def xi_initial(moments: MomentTable, norm: NormalizationTable, beta, cross_tol=None):
    """``(xi_0, xi_1)``; both routes to ``xi_0`` must agree."""
    routes = xi_initial_routes(moments, norm, beta)
    tol = default_tolerance(mp.prec) if cross_tol is None else cross_tol
    a = routes["xi0_moment"]
    b = routes.get("xi0_norm")
    if b is not None and abs(a - b) > tol * abs(a):
        raise CrossCheckFailure("xi_0 routes disagree", a, b)
    return a, routes["xi1"]


def xi_residual(xi, beta, ell: int) -> mpf:
    """Left side of the cubic lattice equation linking ``xi_{l-1..l+1}``."""
    b = beta
    return (4 * b[2 * ell - 1] * b[2 * ell] * b[2 * ell + 1]
            - mpf(2 * ell + 1) / 2 * xi[ell - 1]
            - (ell + 1) * xi[ell - 1] * xi[ell] / b[2 * ell + 2]
            + 4 * xi[ell - 1] * xi[ell] * xi[ell + 1])


def xi_sequence(init, beta, n_max: int, floor=None) -> ZeroPadded:
    """``xi_0..xi_{n_max}`` by solving the lattice equation for ``xi_{l+1}``."""
    xi = [mpf(init[0]), mpf(init[1])]
    floor = mpf(2) ** (-mp.prec // 2) if floor is None else floor
    for ell in range(1, n_max):
        prod = xi[ell - 1] * xi[ell]
        if abs(prod) < floor:
            raise DivisionByNearZero(ell)
        num = (mpf(2 * ell + 1) / 2 * xi[ell - 1]
               + (ell + 1) * prod / beta[2 * ell + 2]
               - 4 * beta[2 * ell - 1] * beta[2 * ell] * beta[2 * ell + 1])
        xi.append(num / (4 * prod))
    return ZeroPadded(xi[: n_max + 1])


def xi_sensitivity(init, beta, n_max: int, rel=None):
    """Relative change of each ``xi_l`` when both initial values are
    perturbed by ``rel`` (default ``2**(-prec/2)``), divided by ``rel``:
    an amplification factor for errors already present in the inputs."""
    rel = mpf(2) ** (-mp.prec // 2) if rel is None else rel
    base = xi_sequence(init, beta, n_max)
    bumped = xi_sequence((init[0] * (1 + rel), init[1] * (1 - rel)), beta, n_max)
    return [abs(p - q) / (abs(p) * rel) if p else mpf(0) for p, q in zip(base, bumped)]


def psi_zeta(beta, xi, n_max: int):
    """``psi_l = xi_l xi_{l+1} / beta_{2l+1} - (l+1) xi_l / (4 beta_{2l+1} beta_{2l+2})``
    and ``zeta_l = -beta_{2l+2} xi_{l+1}`` for ``0 <= l <= n_max``."""
    psi, zeta = [], []
    for ell in range(n_max + 1):
        b1, b2 = beta[2 * ell + 1], beta[2 * ell + 2]
        psi.append(xi[ell] * xi[ell + 1] / b1 - (ell + 1) * xi[ell] / (4 * b1 * b2))
        zeta.append(-b2 * xi[ell + 1])
    return ZeroPadded(psi), ZeroPadded(zeta)


# ------------------------------------------------------------ Laguerre

def laguerre_coeffs(beta, n_max: int):
    """Recurrence coefficients of the even (``lambda = -1/2``) and odd
    (``lambda = +1/2``) folded families."""
    b = beta
    a_hat = [b[2 * n] + b[2 * n + 1] for n in range(n_max + 1)]
    b_hat = [b[2 * n - 1] * b[2 * n] for n in range(n_max + 1)]
    a_tilde = [b[2 * n + 2] + b[2 * n + 1] for n in range(n_max + 1)]
    b_tilde = [b[2 * n + 1] * b[2 * n] for n in range(n_max + 1)]
    return tuple(ZeroPadded(s) for s in (a_hat, b_hat, a_tilde, b_tilde))


def clarkson_residuals(a, b, t, lam, n: int):
    """Residuals of the two identities satisfied by the recurrence
    coefficients of ``z**lam * exp(-2 z**2 + 2 t z)`` in standard form:

    ``2 b_n + 2 b_{n+1} + a_n (2 a_n - t) = n + (lam + 1)/2``
    ``(2 a_n - t)(2 a_{n-1} - t) = (4 b_n - n)(4 b_n - n - lam) / (4 b_n)``
    """
    first = 2 * b[n] + 2 * b[n + 1] + a[n] * (2 * a[n] - t) - n - (lam + 1) / 2
    second = None
    if n >= 1:
        second = ((2 * a[n] - t) * (2 * a[n - 1] - t)
                  - (4 * b[n] - n) * (4 * b[n] - n - lam) / (4 * b[n]))
    return first, second


# ----------------------------------------------------- continued fractions

def _chain(a, b, n, depth, tail=None):
    """``a_n - b_{n+1} / (a_{n+1} - b_{n+2} / (... - b_{n+depth} / T))`` with
    ``T = tail`` or ``a_{n+depth}``."""
    value = a[n + depth] if tail is None else tail
    for k in range(n + depth - 1, n - 1, -1):
        if value == 0 or abs(value) < mpf(2) ** (-mp.prec):
            raise ZeroDenominator(k - n + 1)
        value = a[k] - b[k + 1] / value
    return value


def continued_fraction_beta(a, b, parity: str, source: str, n: int, depth: int, tail=None) -> mpf:
    """Truncated continued-fraction value of one ``beta`` entry.

    ``source='hat'``: ``parity='even'`` gives ``beta_{2n}``, ``'odd'`` gives
    ``beta_{2n-1}``.  ``source='tilde'``: ``'even'`` gives ``beta_{2n}``,
    ``'odd'`` gives ``beta_{2n+1}``.  ``depth`` counts fraction bars; the
    innermost unknown ``beta`` is replaced by ``tail`` when given.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if (source, parity) not in {("hat", "even"), ("hat", "odd"), ("tilde", "even"), ("tilde", "odd")}:
        raise ValueError("source must be hat|tilde and parity even|odd")
    direct = (source, parity) in {("hat", "even"), ("tilde", "odd")}
    if direct:
        return _chain(a, b, n, depth, tail)
    den = _chain(a, b, n, depth - 1, tail)
    if den == 0 or abs(den) < mpf(2) ** (-mp.prec):
        raise ZeroDenominator(1)
    return b[n] / den


def target_index(parity: str, source: str, n: int) -> int:
    if parity == "even":
        return 2 * n
    return 2 * n - 1 if source == "hat" else 2 * n + 1


def continued_fraction_deviations(a, b, beta, parity, source, n, depths):
    """``|approximant - beta|`` for each depth."""
    k = target_index(parity, source, n)
    return [abs(continued_fraction_beta(a, b, parity, source, n, d) - beta[k]) for d in depths]


# ------------------------------------------------------------- tables

@dataclass(frozen=True)
class CoefficientTables:
    """All coefficient sequences at one ``t``; every sequence is
    :class:`ZeroPadded`."""

    t: mpf
    n_max: int
    beta: ZeroPadded
    xi: ZeroPadded
    psi: ZeroPadded
    zeta: ZeroPadded
    a_hat: ZeroPadded
    b_hat: ZeroPadded
    a_tilde: ZeroPadded
    b_tilde: ZeroPadded
    h: ZeroPadded
    r: ZeroPadded
    precision_bits: int

    def replace(self, **kw) -> "CoefficientTables":
        from dataclasses import replace
        return replace(self, **kw)


_table_cache: dict = {}


def coefficient_tables(spec: WeightSpec, n_max: int = 40, r_max: int | None = None,
                       cross_tol=None) -> CoefficientTables:
    """Build every sequence with index up to ``n_max`` (``beta``, ``h`` to
    ``2 n_max + 4`` and ``xi`` to ``n_max + 2`` so that every formula
    touching row ``n_max`` is covered).  ``r`` is tabulated to ``r_max``
    (default ``min(n_max + 1, 9)``) from Pfaffians of skew moments."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    r_max = min(n_max + 1, 9) if r_max is None else max(r_max, 1)
    key = (spec, n_max, r_max, cross_tol)
    if key not in _table_cache:
        _table_cache[key] = _build_tables(spec, n_max, r_max, cross_tol)
    return _table_cache[key]


def _build_tables(spec, n_max, r_max, cross_tol):
    nb = 2 * n_max + 4
    with working_precision(spec.bits):
        moments = moment_table(spec, 2 * nb + 2, max(2 * r_max + 1, 4))
        norm = normalizations(moments, nb, r_max)
        beta = beta_from_hankel(norm, nb)
        if cross_tol is None:
            # never tighter than the quadrature can deliver
            cross_tol = max(default_tolerance(spec.quad.precision_bits),
                            QUAD_HEADROOM * spec.quad.target_rel_tol)
        init = xi_initial(moments, norm, beta, cross_tol)
        xi = xi_sequence(init, beta, n_max + 2)
        psi, zeta = psi_zeta(beta, xi, n_max + 1)
        lag = laguerre_coeffs(beta, n_max + 1)
        return CoefficientTables(
            t=spec.t, n_max=n_max, beta=beta, xi=xi, psi=psi, zeta=zeta,
            a_hat=lag[0], b_hat=lag[1], a_tilde=lag[2], b_tilde=lag[3],
            h=ZeroPadded(norm.h), r=ZeroPadded(norm.r),
            precision_bits=spec.bits)
