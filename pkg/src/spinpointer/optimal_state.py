"""Optimal signal coefficients from the tridiagonal coupling matrix.

For a signal sum_j c_j |j, m(n)>, the mean of x = cos(chi) over Bob's
outcomes is the quadratic form c^T A c with

    A_jj      = m^2 / (j (j + 1))
    A_j,j-1   = (j^2 - m^2) / (j sqrt(4 j^2 - 1))

so the best signal is the top eigenvector of A and the best <x> is its
eigenvalue.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import FidelityResult, HalfInt, ProblemSpec, SignalState, validate_spec
from .tridiag import largest_eigenpair as _tridiag_eigenpair

DEFAULT_TOL = 1e-12
THREADS_ENV = "SPINPOINTER_THREADS"


@dataclass(frozen=True)
class CouplingMatrix:
    spec: ProblemSpec
    diag: tuple[float, ...]
    offdiag: tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        a = np.diag(np.asarray(self.diag, dtype=float))
        if self.offdiag:
            off = np.asarray(self.offdiag, dtype=float)
            a += np.diag(off, 1) + np.diag(off, -1)
        return a

    def quadratic_form(self, c) -> float:
        c = np.asarray(c, dtype=float)
        return float(c @ self.dense() @ c)


def build_coupling_matrix(spec: ProblemSpec) -> CouplingMatrix:
    m = spec.m.twice / 2
    diag = []
    for j2 in (s.twice for s in spec.j_values):
        j = j2 / 2
        # j = 0 only occurs with m = 0, where every diagonal entry vanishes
        diag.append(0.0 if j2 == 0 else m * m / (j * (j + 1)))
    offdiag = []
    for j2 in (s.twice for s in spec.j_values[1:]):
        j = j2 / 2
        offdiag.append((j * j - m * m) / (j * math.sqrt(4 * j * j - 1)))
    return CouplingMatrix(spec, tuple(diag), tuple(offdiag))


def largest_eigenpair(mat: CouplingMatrix, tol: float = DEFAULT_TOL):
    """Top eigenvalue and its non-negative unit eigenvector."""
    lam, v = _tridiag_eigenpair(mat.diag, mat.offdiag, tol=tol)
    return lam, v


def optimal_fidelity(spec: ProblemSpec, tol: float = DEFAULT_TOL) -> FidelityResult:
    mat = build_coupling_matrix(spec)
    lam, v = largest_eigenpair(mat, tol)
    return FidelityResult.from_state(SignalState(spec, tuple(v), lam))


def parallel_spin_fidelity(n: int, tol: float = DEFAULT_TOL) -> FidelityResult:
    """All spins aligned (m = N/2); gives 1 - F = 1/(N + 2)."""
    return optimal_fidelity(validate_spec(n, HalfInt(n)), tol)


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def fidelity_sweep(
    n_min: int,
    n_max: int,
    mode: str = "optimal",
    tol: float = DEFAULT_TOL,
    workers: int | None = None,
) -> list[FidelityResult]:
    """One result per N in [n_min, n_max]; ``optimal`` uses the lowest legal m."""
    if not 1 <= n_min <= n_max:
        raise ValueError(f"need 1 <= n_min <= n_max, got {n_min}, {n_max}")
    if mode == "optimal":
        specs = [validate_spec(n) for n in range(n_min, n_max + 1)]
    elif mode == "parallel":
        specs = [validate_spec(n, HalfInt(n)) for n in range(n_min, n_max + 1)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [optimal_fidelity(s, tol) for s in specs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda s: optimal_fidelity(s, tol), specs))
