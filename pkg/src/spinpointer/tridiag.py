"""Largest eigenpair of a real symmetric tridiagonal matrix.

Bisection on the Sturm count brackets the top eigenvalue; inverse iteration
with a partially pivoted tridiagonal solve recovers the eigenvector.
"""
from __future__ import annotations

import math
import sys

from .errors import DegenerateEigenvalue, NoConvergence

_EPS = sys.float_info.epsilon
_TINY = sys.float_info.min


def sturm_count(diag, offdiag, sigma: float) -> int:
    """Number of eigenvalues strictly below ``sigma``."""
    count = 0
    q = diag[0] - sigma
    if q == 0.0:
        q = -_TINY
    if q < 0:
        count += 1
    for i in range(1, len(diag)):
        e = offdiag[i - 1]
        q = diag[i] - sigma - e * e / q
        if q == 0.0:
            q = -_TINY
        if q < 0:
            count += 1
    return count


def gershgorin_bounds(diag, offdiag) -> tuple[float, float]:
    n = len(diag)
    lo, hi = math.inf, -math.inf
    for i in range(n):
        r = (abs(offdiag[i - 1]) if i > 0 else 0.0) + (abs(offdiag[i]) if i < n - 1 else 0.0)
        lo = min(lo, diag[i] - r)
        hi = max(hi, diag[i] + r)
    return lo, hi


def inf_norm(diag, offdiag) -> float:
    n = len(diag)
    best = 0.0
    for i in range(n):
        r = abs(diag[i]) + (abs(offdiag[i - 1]) if i > 0 else 0.0) + (abs(offdiag[i]) if i < n - 1 else 0.0)
        best = max(best, r)
    return best


def largest_eigenvalue(diag, offdiag, max_iter: int = 200) -> float:
    """Top eigenvalue by bisection, run until the bracket stops shrinking."""
    n = len(diag)
    if n == 1:
        return float(diag[0])
    lo, hi = gershgorin_bounds(diag, offdiag)
    scale = max(abs(lo), abs(hi), _TINY)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 2 * _EPS * scale:
            return 0.5 * (lo + hi)
        if sturm_count(diag, offdiag, mid) == n:
            hi = mid
        else:
            lo = mid
    raise NoConvergence(f"bisection did not converge in {max_iter} steps")


def _solve_shifted(diag, offdiag, sigma: float, rhs, floor: float) -> list[float]:
    """Solve (T - sigma I) y = rhs by Gaussian elimination with partial pivoting."""
    n = len(diag)
    # band storage: a sub, b main, c super, d second super (fill-in from pivoting)
    a = [0.0] + list(offdiag)
    b = [d - sigma for d in diag]
    c = list(offdiag) + [0.0]
    d = [0.0] * n
    y = list(rhs)
    for i in range(n - 1):
        if abs(a[i + 1]) > abs(b[i]):
            # swap rows i and i+1
            b[i], a[i + 1] = a[i + 1], b[i]
            c[i], b[i + 1] = b[i + 1], c[i]
            d[i], c[i + 1] = c[i + 1], d[i]
            y[i], y[i + 1] = y[i + 1], y[i]
        if b[i] == 0.0:
            b[i] = floor
        f = a[i + 1] / b[i]
        b[i + 1] -= f * c[i]
        c[i + 1] -= f * d[i]
        y[i + 1] -= f * y[i]
    if b[n - 1] == 0.0:
        b[n - 1] = floor
    x = [0.0] * n
    x[n - 1] = y[n - 1] / b[n - 1]
    if n > 1:
        x[n - 2] = (y[n - 2] - c[n - 2] * x[n - 1]) / b[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (y[i] - c[i] * x[i + 1] - d[i] * x[i + 2]) / b[i]
    return x


def matvec(diag, offdiag, v) -> list[float]:
    n = len(diag)
    out = [diag[i] * v[i] for i in range(n)]
    for i in range(n - 1):
        e = offdiag[i]
        out[i] += e * v[i + 1]
        out[i + 1] += e * v[i]
    return out


def largest_eigenpair(diag, offdiag, tol: float = 1e-12, max_iter: int = 10):
    """(lambda_max, v) with ||A v - lambda v||_inf <= tol ||A||_inf and ||v||_2 = 1.

    The eigenvector is signed so its components sum positive; for matrices with
    positive off-diagonals that makes every component non-negative.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    diag = [float(d) for d in diag]
    offdiag = [float(e) for e in offdiag]
    n = len(diag)
    if len(offdiag) != n - 1:
        raise ValueError(f"{n} diagonal entries need {n - 1} off-diagonal entries, got {len(offdiag)}")
    if n == 1:
        return diag[0], [1.0]

    lam = largest_eigenvalue(diag, offdiag)
    norm = inf_norm(diag, offdiag) or 1.0
    gap_probe = lam - 1e3 * _EPS * max(norm, abs(lam))
    if sturm_count(diag, offdiag, gap_probe) < n - 1:
        raise DegenerateEigenvalue(f"top eigenvalue {lam!r} is not simple")

    floor = _EPS * norm
    v = [1.0 / math.sqrt(n)] * n
    for _ in range(max_iter):
        y = _solve_shifted(diag, offdiag, lam, v, floor)
        s = math.sqrt(math.fsum(t * t for t in y))
        if not math.isfinite(s) or s == 0.0:
            raise NoConvergence("inverse iteration broke down")
        v = [t / s for t in y]
        av = matvec(diag, offdiag, v)
        resid = max(abs(av[i] - lam * v[i]) for i in range(n))
        if resid <= tol * norm:
            break
    else:
        raise NoConvergence(f"inverse iteration residual {resid:.3e} above {tol * norm:.3e}")

    if math.fsum(v) < 0:
        v = [-t for t in v]
    s = math.sqrt(math.fsum(t * t for t in v))
    v = [t / s for t in v]
    return lam, v
