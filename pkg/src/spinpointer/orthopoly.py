"""Jacobi polynomials, Wigner small-d elements and Gauss-Legendre rules.

Angle-dependent functions take ``x = cos(chi)`` where they can.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import HalfInt
from .errors import NoConvergence


def jacobi_table(nmax: int, a: int, b: int, x):
    """Rows P^{(a,b)}_0(x) ... P^{(a,b)}_nmax(x) by forward recurrence in n.

    Returns an array of shape ``(nmax + 1,) + np.shape(x)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = (a + 1) + (a + b + 2) * (x - 1) / 2
    for n in range(2, nmax + 1):
        s = 2 * n + a + b
        lead = 2 * n * (n + a + b) * (s - 2)
        c1 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c2 = 2 * (n + a - 1) * (n + b - 1) * s
        out[n] = (c1 * out[n - 1] - c2 * out[n - 2]) / lead
    return out


def jacobi_poly(n: int, a: int, b: int, x):
    """P^{(a,b)}_n(x); scalar in, float out."""
    if n < 0 or a < 0 or b < 0:
        raise ValueError("n, a, b must be non-negative")
    val = jacobi_table(n, a, b, x)[n]
    return float(val) if np.ndim(val) == 0 else val


def wigner_d_diag(j: HalfInt, m: HalfInt, x):
    """d^{(j)}_{mm}(chi) = ((1+x)/2)^m P^{(0,2m)}_{j-m}(x) with x = cos chi, m >= 0."""
    if m.twice < 0 or j.twice < m.twice or (j.twice - m.twice) % 2:
        raise ValueError(f"need j >= m >= 0 on the same ladder, got j={j}, m={m}")
    n = (j.twice - m.twice) // 2
    x = np.asarray(x, dtype=float)
    val = ((1 + x) / 2) ** (m.twice / 2) * jacobi_table(n, 0, m.twice, x)[n]
    return float(val) if val.ndim == 0 else val


@lru_cache(maxsize=4096)
def _wigner_terms(tj: int, tmp: int, tm: int):
    """Integer data for the Wigner sum at twice-valued (j, m', m).

    Returns (sqrt_arg, denom, weights, powers): d = sqrt(sqrt_arg) / denom *
    sum_k weight_k cos(t/2)^p_k sin(t/2)^q_k, with integer weights.
    """
    if abs(tmp) > tj or abs(tm) > tj or (tj - tmp) % 2 or (tj - tm) % 2:
        raise ValueError(f"invalid indices j={tj}/2, m'={tmp}/2, m={tm}/2")
    jpm, jmm = (tj + tm) // 2, (tj - tm) // 2
    jpmp, jmmp = (tj + tmp) // 2, (tj - tmp) // 2
    dm = (tmp - tm) // 2  # m' - m, an integer
    fact = math.factorial
    sqrt_arg = fact(jpmp) * fact(jmmp) * fact(jpm) * fact(jmm)
    ks = range(max(0, -dm), min(jpm, jmmp) + 1)
    dens = [fact(jpm - k) * fact(k) * fact(jmmp - k) * fact(k + dm) for k in ks]
    denom = math.lcm(*dens)
    terms = tuple(
        (-1 if (k + dm) % 2 else 1) * (denom // den) for k, den in zip(ks, dens)
    )
    powers = tuple((tj - 2 * k - dm, 2 * k + dm) for k in ks)
    return sqrt_arg, denom, terms, powers


def _exact_sum(terms, powers, c: float, s: float) -> float:
    """sum_k w_k c^p_k s^q_k in exact integer arithmetic, rounded once."""
    cn, cd = c.as_integer_ratio()
    sn, sd = s.as_integer_ratio()
    ce, se = cd.bit_length() - 1, sd.bit_length() - 1  # denominators are powers of two
    pmax = max(p for p, _ in powers)
    qmax = max(q for _, q in powers)
    total = 0
    for w, (p, q) in zip(terms, powers):
        total += (w * cn**p * sn**q) << (ce * (pmax - p) + se * (qmax - q))
    return total / (1 << (ce * pmax + se * qmax))


def wigner_d_full(j: HalfInt, mp: HalfInt, m: HalfInt, theta):
    """Small Wigner d^{(j)}_{m'm}(theta) from the explicit sum over k.

    The alternating sum cancels badly in floating point once j passes ~15,
    so it is accumulated exactly on the binary values of cos and sin.
    """
    sqrt_arg, denom, terms, powers = _wigner_terms(j.twice, mp.twice, m.twice)
    # sqrt(a)/b computed from a/b^2 keeps both factorial products in range
    scale = math.sqrt(sqrt_arg / (denom * denom))
    theta = np.asarray(theta, dtype=float)
    flat = theta.ravel()
    out = np.empty(flat.shape)
    for i, t in enumerate(flat):
        out[i] = scale * _exact_sum(terms, powers, math.cos(t / 2), math.sin(t / 2))
    out = out.reshape(theta.shape)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f) -> float:
        """Integral of a vectorised callable over [-1, 1]."""
        return float(np.dot(self.weights, f(self.nodes)))

    def integrate_values(self, values) -> float:
        return float(np.dot(self.weights, values))


def _legendre_and_derivative(n: int, x: float) -> tuple[float, float]:
    p0, p1 = 1.0, x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


@lru_cache(maxsize=64)
def gauss_legendre(order: int, max_iter: int = 100) -> QuadratureRule:
    """Newton-polished Gauss-Legendre rule of the given order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    n = order
    if n == 1:
        nodes = np.array([0.0])
        weights = np.array([2.0])
    else:
        half = (n + 1) // 2
        pos = np.empty(half)
        wts = np.empty(half)
        for i in range(half):
            # i-th largest root; classic asymptotic starting guess
            x = math.cos(math.pi * (i + 0.75) / (n + 0.5))
            for _ in range(max_iter):
                p, dp = _legendre_and_derivative(n, x)
                dx = p / dp
                x -= dx
                if abs(dx) <= 1e-16:
                    break
            else:
                raise NoConvergence(f"Legendre root {i} of order {n} did not converge")
            p, dp = _legendre_and_derivative(n, x)
            if abs(p) > 1e-15 * max(1.0, abs(dp)):
                raise NoConvergence(f"Legendre root {i} of order {n}: residual {p:.3e}")
            pos[i] = x
            wts[i] = 2.0 / ((1 - x * x) * dp * dp)
        if n % 2:
            pos[-1] = 0.0
        nodes = np.concatenate([-pos, pos[::-1][n % 2:]])
        weights = np.concatenate([wts, wts[::-1][n % 2:]])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, n)
