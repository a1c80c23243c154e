"""Shared fixtures, brute-force oracles, and the acceptance summary hook."""

from __future__ import annotations

import math

import numpy as np
import pytest

from nonlocal_limits import EuclideanSpace, standard_family

# One line per acceptance criterion, printed after the run so the
# verdicts survive pytest's output capture.
ACCEPTANCE_LINES: list[str] = []


def record_criterion(index: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(
        f"criterion {index:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def line():
    return EuclideanSpace(1)


@pytest.fixture(scope="session")
def plane():
    return EuclideanSpace(2)


@pytest.fixture(scope="session")
def line_family_p1():
    return standard_family(1, 1.0, s_ladder=(0.2, 0.1, 0.05, 0.025))


def grid_energy_line(u_fn, support, kernel, tail, *, n_cells=4000, pad=3.0):
    """Brute-force double-integral oracle on the line.

    Midpoint rule over the window [lo - pad, hi + pad] for both points,
    plus the closed-form cross term with the window complement (u there
    is 0, so each window point x contributes u(x)^p times the one-sided
    tail masses on both sides, once per pair orientation).

    Args:
        u_fn: vectorized u (must vanish outside the support interval).
        support: (lo, hi) support interval.
        kernel: vectorized kernel of the gap.
        tail: scalar tail-mass function of the gap.
        n_cells: midpoint cells across the window.
        pad: window margin beyond the support.

    Returns:
        The p = 1 energy for |u(x) - u(y)| kernel(|x - y|); raise the
        difference inside u_fn for other exponents.
    """
    lo, hi = support
    a, b = lo - pad, hi + pad
    h = (b - a) / n_cells
    x = a + h * (np.arange(n_cells) + 0.5)
    ux = u_fn(x)
    gaps = np.abs(x[:, None] - x[None, :])
    diff = np.abs(ux[:, None] - ux[None, :])
    with np.errstate(divide="ignore", over="ignore"):
        k = np.where(gaps > 0.0, kernel(gaps), 0.0)
    inner = float(np.sum(diff * k)) * h * h
    edge = 2.0 * h * float(
        np.sum(ux * np.array([tail(b - xi) + tail(xi - a) for xi in x]))
    )
    return inner + edge


def fit_intercept(xs, ys, degree):
    """Unweighted polynomial intercept, for cross-checking extrapolations."""
    coef = np.polyfit(np.asarray(xs, float), np.asarray(ys, float), degree)
    return float(coef[-1])


def ks_statistic(sample, cdf):
    """Two-sided Kolmogorov-Smirnov distance of a sample to an exact CDF."""
    s = np.sort(np.asarray(sample, dtype=float))
    n = s.size
    c = cdf(s)
    upper = np.max(np.arange(1, n + 1) / n - c)
    lower = np.max(c - np.arange(0, n) / n)
    return float(max(upper, lower))


def omega(N: float) -> float:
    """Euclidean unit-ball volume."""
    return math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0)
