import pytest
from mpmath import mp

from freudskew.coeffs import coefficient_tables
from freudskew.moments import WeightSpec
from freudskew.numerics import working_precision
from freudskew.polyfam import build_P, build_Q, fold_to_laguerre

FIGURE_T = ("-2.5", "2", "6.5", "11")
N_MAX = 14


def spec_for(t, bits=256, quad_tol="1e-40"):
    return WeightSpec.make(t, bits, quad_tol)


def tables_for(t, n_max=N_MAX, bits=256, quad_tol="1e-40"):
    return coefficient_tables(spec_for(t, bits, quad_tol), n_max)


_families = {}


def families_for(t, n_max=N_MAX, bits=256, quad_tol="1e-40"):
    """``(P, Q, (P_hat, P_tilde), (Q_hat, Q_tilde))`` built to degree ``2 n_max + 3``."""
    key = (t, n_max, bits, quad_tol)
    if key not in _families:
        T = tables_for(t, n_max, bits, quad_tol)
        with working_precision(spec_for(t, bits, quad_tol).bits):
            P = build_P(T, 2 * n_max + 3)
            Q = build_Q(T, P, 2 * n_max + 3)
            _families[key] = (P, Q, fold_to_laguerre(P), fold_to_laguerre(Q))
    return _families[key]


@pytest.fixture(autouse=True)
def _restore_precision():
    prec = mp.prec
    yield
    mp.prec = prec


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
