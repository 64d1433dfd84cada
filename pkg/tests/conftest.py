"""Shared fixtures and hypothesis strategies for the test suite."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from deltacomb.distributions import canonicalize
from deltacomb.scalars import MODE_EXACT, ExactComplex
from deltacomb.testfuncs import default_battery

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def pytest_terminal_summary(terminalreporter):
    """Echo the one-line acceptance results after the test summary."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def battery():
    return default_battery()


# ---------------------------------------------------------------------------
# Strategies for exact-mode objects (small rationals keep arithmetic fast)


def small_fractions(max_abs=100, max_den=100):
    return st.builds(
        Fraction,
        st.integers(min_value=-max_abs, max_value=max_abs),
        st.integers(min_value=1, max_value=max_den),
    )


def exact_scalars(max_abs=100, max_den=100):
    return st.builds(
        ExactComplex,
        small_fractions(max_abs, max_den),
        small_fractions(max_abs, max_den),
    )


def exact_distributions(max_terms=8, max_order=3):
    term = st.tuples(
        small_fractions(12, 8),
        st.integers(min_value=0, max_value=max_order),
        exact_scalars(),
    )
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda terms: canonicalize(terms, MODE_EXACT)
    )
