"""Arbitrary-precision scalars and composite Gauss-Legendre quadrature.

Scalars are plain :class:`mpmath.mpf` values; the working precision is the
mpmath context precision, set for the duration of each operation with
:func:`working_precision`.  All integrals are taken over a truncated interval
``[-X, X]`` whose half-width is chosen so that the discarded tail of the
weight lies below working precision.
"""
from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import mpmath
from mpmath import mp, mpf

Scalar = mpf
Integrand = Callable[[mpf], Union[mpf, Sequence[mpf]]]

DEFAULT_PRECISION_BITS = 256
DEFAULT_QUAD_TOL = "1e-40"


class NonConvergence(ArithmeticError):
    """Quadrature refinement failed to settle within the allowed levels."""


@contextmanager
def working_precision(bits: int):
    """Run a block at ``bits`` of binary precision, restoring the old one."""
    with mp.workprec(int(bits)):
        yield


def to_scalar(value, precision_bits: int | None = None) -> mpf:
    """Convert a decimal string, int, Fraction or mpf to an mpf.

    Strings are parsed at ``precision_bits`` (current precision if omitted),
    never through a binary float.
    """
    bits = precision_bits or mp.prec
    with working_precision(bits):
        if isinstance(value, Fraction):
            return mpf(value.numerator) / value.denominator
        if isinstance(value, float):
            raise TypeError("binary floats are not accepted; pass a decimal string")
        if isinstance(value, str):
            value = value.strip()
            if not value:
                raise ValueError("empty numeric string")
            try:
                return mpf(value)
            except (ValueError, TypeError) as exc:
                raise ValueError(f"cannot parse {value!r} as a number") from exc
        return mpf(value)


def format_scalar(x, digits: int) -> str:
    """Shortest decimal string for ``x`` at ``digits`` significant digits.

    Zero is printed as ``0``.  The output never depends on the locale.
    """
    if isinstance(x, Fraction):
        return str(x)
    if x == 0:
        return "0"
    s = mpmath.nstr(mpf(x), digits, strip_zeros=True, min_fixed=-5, max_fixed=digits)
    return re.sub(r"\.0(?=$|e)", "", s)


def domain_cut_for(t, precision_bits: int, max_degree: int = 64) -> mpf:
    """Half-width X such that ``x**max_degree * exp(-x**4 + |t| x**2)`` is
    below ``2**-(precision_bits + 16)`` for every ``|x| >= X``.

    Covering the single weight ``w`` (not only ``w**2``) keeps the rule valid
    for the skew products too; it implies
    ``2X^4 - 2|t|X^2 >= (precision_bits + 16) ln 2``.
    """
    a = abs(float(t))
    budget = (precision_bits + 16) * math.log(2.0)
    x = 2.0
    for _ in range(100):
        rhs = budget + max_degree * math.log(max(x, 1.0))
        x_new = math.sqrt((a + math.sqrt(a * a + 4.0 * rhs)) / 2.0)
        if abs(x_new - x) < 1e-12:
            break
        x = x_new
    # round up to a short decimal so configs print reproducibly
    return mpf(math.ceil(x * 100) / 100 + 0.01)


@dataclass(frozen=True)
class QuadratureConfig:
    """Parameters of the composite Gauss-Legendre rule on ``[-X, X]``.

    Level ``L`` uses ``base_panels * 2**L`` equal panels with
    ``nodes_per_panel`` Gauss-Legendre points each.
    """

    precision_bits: int = DEFAULT_PRECISION_BITS
    target_rel_tol: mpf = mpf(DEFAULT_QUAD_TOL)
    max_refinement_levels: int = 6
    domain_cut: mpf = mpf(6)
    nodes_per_panel: int = 24
    base_panels: int = 8

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if not self.target_rel_tol > 0:
            raise ValueError("target_rel_tol must be positive")
        if self.max_refinement_levels < 1:
            raise ValueError("max_refinement_levels must be at least 1")
        if not self.domain_cut > 0:
            raise ValueError("domain_cut must be positive")

    @classmethod
    def for_parameter(cls, t, precision_bits: int = DEFAULT_PRECISION_BITS,
                      target_rel_tol=DEFAULT_QUAD_TOL, **kwargs) -> "QuadratureConfig":
        """Config with the truncation half-width derived from ``t``."""
        tol = to_scalar(target_rel_tol, precision_bits)
        cut = domain_cut_for(t, precision_bits)
        return cls(precision_bits=precision_bits, target_rel_tol=tol,
                   domain_cut=cut, **kwargs)

    def refined(self) -> "QuadratureConfig":
        """Double the precision and square the tolerance."""
        bits = 2 * self.precision_bits
        with working_precision(bits):
            tol = self.target_rel_tol ** 2
        return QuadratureConfig(bits, tol, self.max_refinement_levels,
                                self.domain_cut, self.nodes_per_panel,
                                self.base_panels)

    def truncation_ok(self, t) -> bool:
        X = float(self.domain_cut)
        return 2 * X**4 - 2 * abs(float(t)) * X**2 >= (self.precision_bits + 16) * math.log(2)


@lru_cache(maxsize=64)
def _reference_rule(n: int, prec: int):
    with working_precision(prec):
        nodes, weights = mp.gauss_quadrature(n, "legendre")
        return tuple(nodes), tuple(weights)


@lru_cache(maxsize=64)
def composite_rule(lo: mpf, hi: mpf, panels: int, n: int, prec: int):
    """Nodes and weights of an ``n``-point composite rule with ``panels``
    equal panels on ``[lo, hi]``, plus the panel edges."""
    ref_x, ref_w = _reference_rule(n, prec)
    with working_precision(prec):
        h = (hi - lo) / panels
        edges = [lo + k * h for k in range(panels)] + [hi]
        half = h / 2
        nodes, weights = [], []
        for k in range(panels):
            mid = edges[k] + half
            nodes.extend(mid + half * x for x in ref_x)
            weights.extend(half * w for w in ref_w)
        return tuple(nodes), tuple(weights), tuple(edges)


def rule(cfg: QuadratureConfig, level: int):
    """Composite rule on ``[-X, X]`` at refinement ``level``."""
    X = cfg.domain_cut
    return composite_rule(-X, X, cfg.base_panels * 2**level,
                          cfg.nodes_per_panel, cfg.precision_bits + 32)


def _as_vector(value):
    if isinstance(value, (list, tuple)):
        return list(value), True
    return [value], False


def _apply(f: Integrand, nodes, weights):
    total = None
    scale = None
    vector = False
    for x, w in zip(nodes, weights):
        vals, vector = _as_vector(f(x))
        if total is None:
            total = [mpf(0)] * len(vals)
            scale = [mpf(0)] * len(vals)
        for k, v in enumerate(vals):
            wv = w * v
            total[k] += wv
            scale[k] += abs(wv)
    return total, scale, vector


def converged_level(f: Integrand, cfg: QuadratureConfig):
    """Smallest level whose result agrees with the previous one.

    Returns ``(level, values, vector_flag)``.
    """
    with working_precision(cfg.precision_bits + 32):
        prev = None
        worst = None
        for level in range(cfg.max_refinement_levels + 1):
            nodes, weights, _ = rule(cfg, level)
            total, scale, vector = _apply(f, nodes, weights)
            if prev is not None:
                worst = max(
                    (abs(a - b) / s if s else mpf(0))
                    for a, b, s in zip(total, prev, scale)
                )
                if worst <= cfg.target_rel_tol:
                    return level, total, vector
            prev = total
    raise NonConvergence(
        f"no agreement to {mpmath.nstr(cfg.target_rel_tol, 3)} after "
        f"{cfg.max_refinement_levels} refinements (last relative change "
        f"{mpmath.nstr(worst, 3) if worst is not None else 'n/a'})")


def integrate(f: Integrand, cfg: QuadratureConfig):
    """Integral of ``f`` over ``[-X, X]``.

    ``f`` may return a scalar or a list of scalars; in the latter case every
    component must converge and a list is returned.  Agreement is measured
    relative to the integral of ``|f|`` so that vanishing integrals (odd
    integrands) converge in absolute terms.
    """
    _, total, vector = converged_level(f, cfg)
    with working_precision(cfg.precision_bits):
        out = [+v for v in total]
    return out if vector else out[0]


class CumulativeIntegral:
    """Evaluable antiderivative ``x -> int_{-X}^{x} f`` on ``[-X, X]``."""

    def __init__(self, f: Integrand, cfg: QuadratureConfig, level: int):
        self.f = f
        self.cfg = cfg
        self.level = level
        self._prec = cfg.precision_bits + 32
        nodes, weights, edges = rule(cfg, level)
        self.edges = edges
        self._ref = _reference_rule(cfg.nodes_per_panel, self._prec)
        n = cfg.nodes_per_panel
        with working_precision(self._prec):
            cum = []
            running = None
            for p in range(len(edges) - 1):
                sl = slice(p * n, (p + 1) * n)
                part, _, vector = _apply(f, nodes[sl], weights[sl])
                if running is None:
                    running = [mpf(0)] * len(part)
                cum.append(list(running))
                running = [a + b for a, b in zip(running, part)]
            cum.append(running)
        self._cum = cum
        self._vector = vector

    def _locate(self, x):
        lo, hi = self.edges[0], self.edges[-1]
        if x <= lo:
            return None
        if x >= hi:
            return len(self.edges) - 1
        h = (hi - lo) / (len(self.edges) - 1)
        return min(int((x - lo) / h), len(self.edges) - 2)

    def __call__(self, x):
        with working_precision(self._prec):
            x = mpf(x)
            p = self._locate(x)
            if p is None:
                out = [mpf(0)] * len(self._cum[0])
            elif p == len(self.edges) - 1:
                out = list(self._cum[-1])
            else:
                a = self.edges[p]
                half = (x - a) / 2
                mid = a + half
                ref_x, ref_w = self._ref
                part, _, _ = _apply(self.f, [mid + half * r for r in ref_x],
                                    [half * w for w in ref_w])
                out = [c + v for c, v in zip(self._cum[p], part)]
        return out if self._vector else out[0]


def cumulative_integrate(f: Integrand, cfg: QuadratureConfig) -> CumulativeIntegral:
    """Antiderivative of ``f`` from ``-X``, consistent with :func:`integrate`.

    The panel resolution is the converged level of the full integral; inside a
    panel the partial integral uses the same Gauss-Legendre rule mapped onto
    ``[panel start, x]``.
    """
    level, _, _ = converged_level(f, cfg)
    return CumulativeIntegral(f, cfg, level)
