"""Registry of identity checks, the suite runner and coefficient plot data."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpf

from . import coeffs as C
from .moments import WeightSpec, moment_table
from .numerics import NonConvergence, QuadratureConfig, integrate, working_precision
from .polyfam import (
    apply_nbar, build_P, build_Q, build_hermite, closed_even_residual,
    closed_laguerre_even_residual, closed_laguerre_odd_residual, closed_odd_residual,
    cross_gram, fold_to_laguerre, hermite_closed_residuals, kernel_gram,
    laguerre_gram, laguerre_three_point_residual, skew_scale, structure_relation_residual,
    sym_gram,
)
from .skewlinalg import (
    d_block, n_block, r_block, transition_block, transition_identity_residual,
)

DEFAULT_TOL_EXACT = mpf("1e-18")
DEFAULT_TOL_QUAD = mpf("1e-12")
ROUTE_TOL = mpf("1e-15")
KERNEL_TOL = mpf("1e-8")


@dataclass
class CheckResult:
    index_range: tuple
    max_abs: mpf
    max_rel: mpf
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Check:
    check_id: str
    run: Callable
    tol_kind: str          # "exact", "quad" or a fixed tolerance string
    paper_ref: str
    t_dependent: bool = True


@dataclass
class Record:
    check_id: str
    t: mpf | None
    index_range: tuple
    max_abs_residual: mpf
    max_rel_residual: mpf
    tolerance: mpf
    passed: bool
    runtime_ms: int
    paper_ref: str
    extra: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self):
        return [r for r in self.records if not r.passed]


class Context:
    """Everything the checks at one ``t`` share, built lazily."""

    def __init__(self, spec: WeightSpec, n_max: int, tables=None):
        self.spec = spec
        self.n_max = n_max
        self._tables = tables
        self._cache = {}

    @property
    def tables(self):
        if self._tables is None:
            self._tables = C.coefficient_tables(self.spec, self.n_max)
        return self._tables

    def _get(self, key, make):
        if key not in self._cache:
            with working_precision(self.spec.bits):
                self._cache[key] = make()
        return self._cache[key]

    @property
    def P(self):
        return self._get("P", lambda: build_P(self.tables, 2 * self.n_max + 3))

    @property
    def Q(self):
        return self._get("Q", lambda: build_Q(self.tables, self.P, 2 * self.n_max + 3))

    @property
    def folded_P(self):
        return self._get("fP", lambda: fold_to_laguerre(self.P))

    @property
    def folded_Q(self):
        return self._get("fQ", lambda: fold_to_laguerre(self.Q))


def _rel(a, b):
    return abs(a) / abs(b) if b else abs(a)


# ------------------------------------------------------------------ checks

def check_dp1(ctx):
    T = ctx.tables
    top = 2 * ctx.n_max + 3
    res = [abs(C.dp1_residual(T.beta, T.t, n)) for n in range(1, top + 1)]
    return CheckResult((1, top), max(res), max(r / (1 + n) for n, r in enumerate(res, 1)))


def check_beta_routes(ctx):
    T = ctx.tables
    top = min(20, 2 * ctx.n_max + 4)
    try:
        run = C.beta_forward_dp1(T.beta[1], T.t, top)
    except C.PositivityLoss as exc:
        return CheckResult((1, top), mpf("inf"), mpf("inf"), {"positivity_loss": exc.index})
    dev = [abs(run.beta[n] - T.beta[n]) for n in range(1, top + 1)]
    return CheckResult((1, top), max(dev), max(d / T.beta[n] for n, d in enumerate(dev, 1)))


def check_structure(ctx):
    P = ctx.P
    top = 2 * ctx.n_max + 3
    rel, ab = mpf(0), mpf(0)
    for n in range(1, top + 1):
        r = structure_relation_residual(P, n)
        ab = max(ab, r)
        rel = max(rel, r / P[n].derivative().max_abs())
    return CheckResult((1, top), ab, rel)


def check_nbar(ctx):
    T, P = ctx.tables, ctx.P
    size = min(10, len(P))
    members = P.members[:size]
    images = [apply_nbar(p, T.t) for p in members]
    quad = cross_gram(members, images, ctx.spec)
    with working_precision(ctx.spec.bits):
        formula = n_block(T.h, size).entries
        ab = rel = mpf(0)
        for i in range(size):
            for j in range(size):
                d = abs(quad[i][j] - formula[i][j])
                ab = max(ab, d)
                rel = max(rel, d / mpmath.sqrt(T.h[i] * T.h[j]))
    return CheckResult((0, size - 1), ab, rel)


def check_transition(ctx):
    T = ctx.tables
    n = 12
    with working_precision(ctx.spec.bits):
        blocks = (transition_block(T.xi, T.psi, T.zeta, n), r_block(T.r, n),
                  d_block(T.h, n), n_block(T.h, n))
        res = transition_identity_residual(*blocks, n)
        scale = max(abs(blocks[3].entries[i][j]) / (T.h[i] * T.h[j])
                    for i in range(n - 4) for j in range(n - 4))
    return CheckResult((0, n - 5), res, res / scale)


def check_xi_rh(ctx):
    T = ctx.tables
    xi, r, h = T.xi, T.r, T.h
    top = min(8, len(r) - 2)
    ab = rel = mpf(0)
    for ell in range(top + 1):
        for got, want in ((xi[ell], 4 * r[ell + 1] / h[2 * ell]),):
            ab, rel = max(ab, abs(got - want)), max(rel, _rel(got - want, want))
    for ell in range(min(top, len(r) - 3) + 1):
        z = -4 * r[ell + 2] / h[2 * ell + 1]
        p = 4 * xi[ell + 1] * r[ell + 1] / h[2 * ell + 1] - (ell + 1) * r[ell + 1] / h[2 * ell + 2]
        for got, want in ((T.zeta[ell], z), (T.psi[ell], p)):
            ab, rel = max(ab, abs(got - want)), max(rel, _rel(got - want, want))
    return CheckResult((0, top), ab, rel)


def _window(gram, pairs):
    ab = rel = mpf(0)
    for i, j in pairs:
        v = abs(gram[i][j])
        ab = max(ab, v)
        rel = max(rel, v / mpmath.sqrt(gram[i][i] * gram[j][j]))
    return ab, rel


def check_quasi(ctx):
    Q = ctx.Q
    top = 6
    even = sym_gram([Q[2 * k] for k in range(top + 1)], ctx.spec)
    odd = sym_gram([Q[2 * k + 1] for k in range(top + 1)], ctx.spec)
    qh, qt = ctx.folded_Q
    hat = laguerre_gram(qh.members[: top + 1], -0.5, ctx.spec)
    tilde = laguerre_gram(qt.members[: top + 1], 0.5, ctx.spec)
    idx = range(top + 1)
    far2 = [(i, j) for i in idx for j in idx if abs(i - j) >= 2]
    far3 = [(i, j) for i in idx for j in idx if abs(i - j) >= 3]
    parts = [_window(even, far2), _window(odd, far3), _window(hat, far2), _window(tilde, far3)]
    return CheckResult((0, top), max(p[0] for p in parts), max(p[1] for p in parts))


def skew_gram_from_moments(members, moments):
    """``<F_i, F_j>_t = sum_{a,b} c_{i,a} c_{j,b} mu_{a,b}``."""
    n = len(members)
    g = [[mpf(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            s = mpf(0)
            for a, ca in enumerate(members[i].coeffs):
                if ca == 0:
                    continue
                for b, cb in enumerate(members[j].coeffs):
                    if cb != 0 and (a + b) % 2:
                        s += ca * cb * moments.mu(a, b)
            g[i][j], g[j][i] = s, -s
    return g


def check_skew(ctx):
    T, Q = ctx.tables, ctx.Q
    top = 12
    members = Q.members[: top + 1]
    with working_precision(ctx.spec.bits):
        moments = moment_table(ctx.spec, 2, top)
        g = skew_gram_from_moments(members, moments)
    scale = skew_scale(members, ctx.spec)
    ab = rel = mpf(0)
    for i in range(top + 1):
        for j in range(top + 1):
            want = mpf(0)
            if i % 2 == 0 and j == i + 1:
                want = T.r[i // 2]
            elif j % 2 == 0 and i == j + 1:
                want = -T.r[j // 2]
            d = abs(g[i][j] - want)
            ab, rel = max(ab, d), max(rel, d / (scale[i] * scale[j]))
    return CheckResult((0, top), ab, rel)


def _closed(ctx, fn, family, lo, hi=8):
    T = ctx.tables
    with working_precision(ctx.spec.bits):
        vals = [fn(family, T, n) for n in range(lo, hi + 1)]
    return CheckResult((lo, hi), max(vals), max(vals))


def check_closed_even(ctx):
    return _closed(ctx, closed_even_residual, ctx.Q, 2)


def check_closed_odd(ctx):
    return _closed(ctx, closed_odd_residual, ctx.Q, 3)


def check_closed_lag_even(ctx):
    return _closed(ctx, closed_laguerre_even_residual, ctx.folded_Q[0], 2)


def check_closed_lag_odd(ctx):
    return _closed(ctx, closed_laguerre_odd_residual, ctx.folded_Q[1], 3)


def check_clarkson(ctx):
    T = ctx.tables
    ab = mpf(0)
    top = min(10, T.n_max)
    with working_precision(ctx.spec.bits):
        for lam, a, b in ((mpf(-0.5), T.a_hat, T.b_hat), (mpf(0.5), T.a_tilde, T.b_tilde)):
            for n in range(top + 1):
                first, second = C.clarkson_residuals(a, b, T.t, lam, n)
                ab = max(ab, abs(first) / (1 + n))
                if second is not None:
                    ab = max(ab, abs(second) / (1 + n))
        # the folded P families obey their own three-point relations
        ph, pt = ctx.folded_P
        for n in range(top):
            ab = max(ab, laguerre_three_point_residual(ph, T.a_hat, T.b_hat, n) / ph[n + 1].max_abs(),
                     laguerre_three_point_residual(pt, T.a_tilde, T.b_tilde, n) / pt[n + 1].max_abs())
    return CheckResult((0, top), ab, ab)


def check_continued_fraction(ctx):
    T = ctx.tables
    n = 2
    depths = list(range(1, 11))
    forms = (("even", "hat"), ("odd", "hat"), ("even", "tilde"), ("odd", "tilde"))
    ab = rel = mpf(0)
    extra = {}
    with working_precision(ctx.spec.bits):
        for parity, source in forms:
            a = T.a_hat if source == "hat" else T.a_tilde
            b = T.b_hat if source == "hat" else T.b_tilde
            k = C.target_index(parity, source, n)
            # exact when the innermost tail is the true beta
            direct = (source, parity) in (("hat", "even"), ("tilde", "odd"))
            for depth in (1, 2, 3):
                # the innermost chain position is beta_{2m} (hat) or beta_{2m+1} (tilde)
                m = n + depth if direct else n + depth - 1
                tail_index = 2 * m if source == "hat" else 2 * m + 1
                v = C.continued_fraction_beta(a, b, parity, source, n, depth, tail=T.beta[tail_index])
                ab = max(ab, abs(v - T.beta[k]))
                rel = max(rel, _rel(v - T.beta[k], T.beta[k]))
            dev = C.continued_fraction_deviations(a, b, T.beta, parity, source, n, depths)
            extra[f"{source}_{parity}_deviation"] = [mpmath.nstr(d, 6) for d in dev]
            extra[f"{source}_{parity}_monotone"] = all(x > y for x, y in zip(dev[1:], dev[2:]))
    return CheckResult((1, 3), ab, rel, extra)


def check_kernels(ctx):
    T = ctx.tables
    qh, qt = ctx.folded_Q
    size = 4
    ab = rel = mpf(0)
    values = []
    for ell in (1, 2, 3, 4):
        g = kernel_gram(qh, qt, ell, ctx.spec, size)
        values.append(g)
        for i in range(size):
            for j in range(size):
                want = T.r[i] if i == j else 0
                d = abs(g[i][j] - want)
                ab, rel = max(ab, d), max(rel, d / mpmath.sqrt(T.r[i] * T.r[j]))
    return CheckResult((0, size - 1), ab, rel)


def gaussian_skew_gram(members, bits=160):
    """``<F_i, F_j>_G`` with ``w_G = exp(-x^2/2)`` and no 1/2 prefactor."""
    from .numerics import cumulative_integrate
    cfg = QuadratureConfig(precision_bits=bits, target_rel_tol=mpf("1e-30"),
                           domain_cut=mpf(16), base_panels=16)
    n = len(members)
    with working_precision(bits + 32):
        def fw(x):
            w = mpmath.exp(-x * x / 2)
            return [_fval(p, x) * w for p in members]
        full = integrate(fw, cfg)
        cum = cumulative_integrate(fw, cfg)

        def outer(x):
            a, c = fw(x), cum(x)
            return [a[i] * c[j] for i in range(n) for j in range(n)]
        flat = integrate(outer, cfg)
        return [[full[i] * full[j] - 2 * flat[i * n + j] for j in range(n)] for i in range(n)]


def _fval(p, x):
    acc = mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * x + mpf(c.numerator) / c.denominator
    return acc


def check_hermite(ctx):
    _, S = build_hermite(35)
    exact_q = max(max(hermite_closed_residuals(n, S)) for n in range(16))
    exact = mpf(exact_q.numerator) / exact_q.denominator
    size = 6
    g = gaussian_skew_gram(S.members[:size])
    scale = max(abs(g[2 * k][2 * k + 1]) for k in range(size // 2))
    quad = mpf(0)
    nonzero_ok = all(abs(g[2 * k][2 * k + 1]) > mpf("1e-6") * scale for k in range(size // 2))
    for i in range(size):
        for j in range(size):
            paired = (i % 2 == 0 and j == i + 1) or (j % 2 == 0 and i == j + 1)
            if not paired:
                quad = max(quad, abs(g[i][j]) / scale)
    rel = max(exact, quad) if nonzero_ok else mpf("inf")
    return CheckResult((0, 15), max(exact, quad), rel,
                       {"exact_residual": str(exact_q), "gaussian_product_defect": mpmath.nstr(quad, 6)})


REGISTRY = {c.check_id: c for c in [
    Check("dP1_residual", check_dp1, "exact", "beta lattice equation"),
    Check("beta_route_agreement", check_beta_routes, "1e-15", "beta: Hankel ratio vs lattice iteration"),
    Check("structure_relation", check_structure, "exact", "derivative of P_n in the P basis"),
    Check("nbar_matrix_elements", check_nbar, "quad", "nbar operator matrix elements"),
    Check("transition_identity", check_transition, "exact", "transition matrix identity"),
    Check("xi_rh_crosscheck", check_xi_rh, "quad", "xi, psi, zeta from h and r"),
    Check("quasi_orthogonality_windows", check_quasi, "quad", "quasi-orthogonality windows"),
    Check("skew_orthogonality", check_skew, "quad", "skew-orthogonality of Q"),
    Check("closed_even", check_closed_even, "exact", "closed even recurrence"),
    Check("closed_odd", check_closed_odd, "exact", "closed odd recurrence"),
    Check("closed_laguerre_even", check_closed_lag_even, "exact", "closed Laguerre even recurrence"),
    Check("closed_laguerre_odd", check_closed_lag_odd, "exact", "closed Laguerre odd recurrence"),
    Check("clarkson_identities", check_clarkson, "quad", "Laguerre recurrence coefficient identities"),
    Check("continued_fraction_convergence", check_continued_fraction, "exact", "continued fractions for beta"),
    Check("kernel_biorthogonality", check_kernels, "1e-8", "kernel biorthogonality"),
    Check("hermite_exact", check_hermite, "quad", "Gaussian skew-orthogonal relations", False),
]}


def resolve_checks(names):
    """Validate a subset of check ids; ``None`` means every check."""
    if names is None:
        return list(REGISTRY)
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return [n for n in REGISTRY if n in names]


def run_suite(t_values, n_max: int = 12, precision_bits: int = 256, quad_tol="1e-40",
              tol_exact=DEFAULT_TOL_EXACT, tol_quad=DEFAULT_TOL_QUAD, checks=None,
              tables_hook=None) -> VerificationReport:
    """Run the selected checks at every ``t``; t-independent checks run once.

    ``tables_hook`` maps freshly built :class:`CoefficientTables` to the
    tables the checks should see (used to probe sensitivity).
    """
    names = resolve_checks(checks)
    if not t_values and any(REGISTRY[n].t_dependent for n in names):
        raise ValueError("t_values must not be empty")
    tols = {"exact": mpf(tol_exact), "quad": mpf(tol_quad)}
    report = VerificationReport()
    contexts = []
    for t in t_values:
        spec = WeightSpec.make(t, precision_bits, quad_tol)
        tables = None
        if tables_hook is not None:
            tables = tables_hook(C.coefficient_tables(spec, n_max))
        contexts.append(Context(spec, n_max, tables))
    for name in names:
        check = REGISTRY[name]
        tol = tols.get(check.tol_kind) or mpf(check.tol_kind)
        targets = contexts if check.t_dependent else [Context(None, n_max)]
        for ctx in targets:
            start = time.perf_counter()
            bits = ctx.spec.bits if ctx.spec else precision_bits
            try:
                with working_precision(bits):
                    res = check.run(ctx)
            except NonConvergence as exc:
                raise NonConvergence(f"check {name}: {exc}") from exc
            ms = int((time.perf_counter() - start) * 1000)
            report.records.append(Record(
                check_id=name, t=ctx.spec.t if ctx.spec else None,
                index_range=res.index_range, max_abs_residual=res.max_abs,
                max_rel_residual=res.max_rel, tolerance=tol,
                passed=bool(res.max_rel <= tol), runtime_ms=ms,
                paper_ref=check.paper_ref, extra=res.extra))
    return report


def perturb_xi0(delta):
    """Tables hook shifting ``xi_0`` by ``delta`` and rebuilding the
    dependent ``xi``, ``psi`` and ``zeta`` sequences."""
    def hook(T):
        with working_precision(T.precision_bits):
            xi = C.xi_sequence((T.xi[0] + mpf(delta), T.xi[1]), T.beta, len(T.xi) - 1)
            psi, zeta = C.psi_zeta(T.beta, xi, len(T.psi) - 1)
        return T.replace(xi=xi, psi=psi, zeta=zeta)
    return hook


# ------------------------------------------------------------- figure

@dataclass(frozen=True)
class FigureSeries:
    t: mpf
    n: tuple
    beta: tuple
    xi: tuple
    zeta: tuple
    psi: tuple

    def rows(self):
        return zip(self.n, self.beta, self.xi, self.zeta, self.psi)


def figure_data(t, n_max: int, precision_bits: int = 256, quad_tol="1e-40") -> FigureSeries:
    """``beta_n, xi_n, zeta_n, psi_n`` for ``0 <= n <= n_max``."""
    spec = WeightSpec.make(t, precision_bits, quad_tol)
    T = C.coefficient_tables(spec, n_max, r_max=1)
    idx = tuple(range(n_max + 1))
    return FigureSeries(spec.t, idx, tuple(T.beta[k] for k in idx), tuple(T.xi[k] for k in idx),
                        tuple(T.zeta[k] for k in idx), tuple(T.psi[k] for k in idx))


def is_monotone(values) -> bool:
    inc = all(a <= b for a, b in zip(values, values[1:]))
    dec = all(a >= b for a, b in zip(values, values[1:]))
    return inc or dec
