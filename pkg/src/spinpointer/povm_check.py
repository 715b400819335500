"""Quadrature cross-checks of the closed-form results.

Bob's outcome density in x = cos(chi), after integrating out the azimuth, is

    p(x) = 1/2 |sum_j c_j sqrt(2j+1) ((1+x)/2)^m P^{(0,2m)}_{j-m}(x)|^2

Everything here recomputes by brute quadrature what optimal_state derives
analytically: the normalisation of p, the coupling matrix, and the
completeness of the coherent-state POVM.
"""
from __future__ import annotations

import numpy as np

from .core import HalfInt, ProblemSpec, SignalState, validate_spec
from .orthopoly import QuadratureRule, gauss_legendre, jacobi_table, wigner_d_full

GRAM_MAX_N = 20


def density_order(n: int) -> int:
    return n + 8


def gram_order(n: int) -> int:
    # 2 * (2 j_max) + 16 with j_max = N/2
    return 2 * n + 16


class OutcomeDensity:
    """p(x) for a spec and a coefficient vector (not necessarily normalised)."""

    def __init__(self, spec: ProblemSpec, coeffs):
        self.spec = spec
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape != (spec.size,):
            raise ValueError(f"{spec} needs {spec.size} coefficients")
        j = np.array([t.twice / 2 for t in spec.j_values])
        self._weights = self.coeffs * np.sqrt(2 * j + 1)

    @classmethod
    def from_state(cls, state: SignalState) -> "OutcomeDensity":
        return cls(state.spec, state.coeffs)

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        m2 = self.spec.m.twice
        polys = jacobi_table(self.spec.k, 0, m2, x)
        return ((1 + x) / 2) ** (m2 / 2) * np.tensordot(self._weights, polys, axes=1)

    def __call__(self, x):
        val = 0.5 * self.amplitude(x) ** 2
        return float(val) if np.ndim(val) == 0 else val


def density_eval(state: SignalState, x):
    return OutcomeDensity.from_state(state)(x)


def density_normalization(state, rule: QuadratureRule | None = None) -> float:
    """Integral of p over [-1, 1]; accepts a SignalState or an OutcomeDensity."""
    density = state if isinstance(state, OutcomeDensity) else OutcomeDensity.from_state(state)
    n = density.spec.n_spins
    rule = rule or gauss_legendre(density_order(n))
    if rule.order < n + 2:
        raise ValueError(f"quadrature order {rule.order} too low for N={n} (need >= {n + 2})")
    return rule.integrate(density)


def mean_x(state, rule: QuadratureRule | None = None) -> float:
    """<x> as the integral of x p(x)."""
    density = state if isinstance(state, OutcomeDensity) else OutcomeDensity.from_state(state)
    rule = rule or gauss_legendre(density_order(density.spec.n_spins))
    return rule.integrate(lambda x: x * density(x))


def coupling_matrix_oracle(spec: ProblemSpec, rule: QuadratureRule | None = None) -> np.ndarray:
    """Dense coupling matrix by quadrature of x-weighted products of Jacobi terms."""
    n = spec.n_spins
    rule = rule or gauss_legendre(density_order(n))
    if rule.order < n + 4:
        raise ValueError(f"quadrature order {rule.order} too low for N={n} (need >= {n + 4})")
    x = rule.nodes
    m2 = spec.m.twice
    j = np.array([t.twice / 2 for t in spec.j_values])
    basis = ((1 + x) / 2) ** (m2 / 2) * jacobi_table(spec.k, 0, m2, x)
    basis *= np.sqrt(2 * j + 1)[:, None]
    return 0.5 * (basis * (rule.weights * x)) @ basis.T


def gram_basis(n: int, m: HalfInt) -> list[tuple[HalfInt, HalfInt]]:
    """(j, m') labels in ascending j, then ascending m'."""
    spec = validate_spec(n, m)
    return [(j, HalfInt(t)) for j in spec.j_values for t in range(-j.twice, j.twice + 1, 2)]


def povm_completeness_gram(n: int, m: HalfInt | None = None, rule: QuadratureRule | None = None) -> np.ndarray:
    """Matrix elements of the integrated POVM in the standard |j, m'> basis.

    The azimuthal integral is done analytically: it kills every element with
    m'_1 != m'_2 and leaves a factor 1/2, so only theta is integrated here,
    via x = cos(theta) on a Legendre rule.
    """
    spec = validate_spec(n, m)
    if n > GRAM_MAX_N:
        raise ValueError(f"Gram check supports N <= {GRAM_MAX_N}, got {n}")
    rule = rule or gauss_legendre(gram_order(n))
    theta = np.arccos(rule.nodes)
    labels = gram_basis(n, spec.m)
    curves = {
        (j, mp): wigner_d_full(j, spec.m, mp, theta) for j, mp in labels
    }
    size = len(labels)
    gram = np.zeros((size, size))
    for a, (j1, mp1) in enumerate(labels):
        for b in range(a, size):
            j2, mp2 = labels[b]
            if mp1 != mp2:
                continue
            pref = np.sqrt((j1.twice + 1) * (j2.twice + 1)) / 2
            val = pref * rule.integrate_values(curves[j1, mp1] * curves[j2, mp2])
            gram[a, b] = gram[b, a] = val
    return gram
