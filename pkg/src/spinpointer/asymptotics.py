"""Large-N behaviour of the optimal fidelity and the data behind the 1-F vs N figure.

For the lowest-m family, (1 - F)(N + 3)^2 tends to a constant near 5.78317.
Numerically the limit agrees with j_{0,1}^2 = 5.7831859..., the square of the
first zero of the Bessel function J_0, to better than 1e-7 relative.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import HalfInt, validate_spec
from .optimal_state import DEFAULT_TOL, build_coupling_matrix, largest_eigenpair

PAPER_CONSTANT = 5.78317
FIT_MODEL = "scaled(N) = c + a/N + b/N^2, solved exactly through the three largest N"


@dataclass(frozen=True)
class AsymptoteReport:
    n_values: list[int]
    one_minus_f: list[float]
    scaled: list[float]
    extrapolated_constant: float
    fit_coefficients: tuple[float, float, float] = (float("nan"),) * 3
    residuals: list[float] = field(default_factory=list)
    fit_model: str = FIT_MODEL


def lowest_m_one_minus_f(n: int, tol: float = DEFAULT_TOL) -> float:
    """1 - F for the lowest legal m, as (1 - lambda)/2 to keep digits at large N."""
    lam, _ = largest_eigenpair(build_coupling_matrix(validate_spec(n)), tol)
    return (1.0 - lam) / 2.0


def fit_inverse_powers(n_values, scaled) -> tuple[float, float, float]:
    """(c, a, b) with c + a/N + b/N^2 through the given three points."""
    n = np.asarray(n_values, dtype=float)
    design = np.column_stack([np.ones_like(n), 1.0 / n, 1.0 / n**2])
    c, a, b = np.linalg.solve(design, np.asarray(scaled, dtype=float))
    return float(c), float(a), float(b)


def asymptote_sweep(n_list, tol: float = DEFAULT_TOL) -> AsymptoteReport:
    n_values = [int(n) for n in n_list]
    if not n_values or min(n_values) < 1:
        raise ValueError("n_list must hold positive integers")
    one_minus_f = [lowest_m_one_minus_f(n, tol) for n in n_values]
    scaled = [q * (n + 3) ** 2 for n, q in zip(n_values, one_minus_f)]

    largest = sorted(set(n_values))[-3:]
    if len(largest) < 3:
        # too few points to fit; report the largest-N value unchanged
        best = max(n_values)
        value = scaled[n_values.index(best)]
        return AsymptoteReport(n_values, one_minus_f, scaled, value)
    fit_scaled = [scaled[n_values.index(n)] for n in largest]
    coef = fit_inverse_powers(largest, fit_scaled)
    c, a, b = coef
    residuals = [s - (c + a / n + b / n**2) for n, s in zip(n_values, scaled)]
    return AsymptoteReport(n_values, one_minus_f, scaled, c, coef, residuals)


def figure1_data(n_max: int, tol: float = DEFAULT_TOL) -> list[tuple[int, float, float]]:
    """Rows (N, 1-F at lowest m, 1-F at m = N/2) for N = 1..n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    rows = []
    for n in range(1, n_max + 1):
        optimal = lowest_m_one_minus_f(n, tol)
        lam, _ = largest_eigenpair(build_coupling_matrix(validate_spec(n, HalfInt(n))), tol)
        rows.append((n, optimal, (1.0 - lam) / 2.0))
    return rows
