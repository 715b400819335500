import math

import numpy as np
import pytest

from spinpointer.core import HalfInt, validate_spec
from spinpointer.optimal_state import build_coupling_matrix, optimal_fidelity
from spinpointer.orthopoly import gauss_legendre
from spinpointer.povm_check import (
    OutcomeDensity,
    coupling_matrix_oracle,
    density_eval,
    density_normalization,
    gram_basis,
    mean_x,
    povm_completeness_gram,
)


def all_specs(n_max):
    for n in range(1, n_max + 1):
        for tm in range(n % 2, n + 1, 2):
            yield validate_spec(n, HalfInt(tm))


def test_density_single_spin():
    state = optimal_fidelity(validate_spec(1)).state
    xs = np.linspace(-1, 1, 11)
    assert density_eval(state, xs) == pytest.approx((1 + xs) / 2, abs=1e-15)
    assert density_eval(state, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_density_nonnegative_and_sign_invariant():
    xs = np.linspace(-1, 1, 201)
    for spec in all_specs(12):
        state = optimal_fidelity(spec).state
        dens = OutcomeDensity.from_state(state)
        flipped = OutcomeDensity(spec, [-c for c in state.coeffs])
        assert np.all(dens(xs) >= 0)
        assert np.array_equal(dens(xs), flipped(xs))


def test_density_mean_n2():
    state = optimal_fidelity(validate_spec(2)).state
    assert mean_x(state) == pytest.approx(1 / math.sqrt(3), abs=1e-10)


def test_density_normalization_examples():
    spec = validate_spec(3)
    paper = OutcomeDensity(spec, [0.79755, 0.60326])
    assert density_normalization(paper) == pytest.approx(0.79755**2 + 0.60326**2, abs=1e-12)
    state = optimal_fidelity(spec).state
    assert density_normalization(state) == pytest.approx(1.0, abs=1e-10)
    assert density_normalization(optimal_fidelity(validate_spec(1)).state) == pytest.approx(1.0, abs=1e-15)
    doubled = OutcomeDensity(spec, [2 * c for c in state.coeffs])
    assert density_normalization(doubled) == pytest.approx(4.0, abs=1e-10)


def test_density_normalization_rejects_low_order():
    with pytest.raises(ValueError):
        density_normalization(optimal_fidelity(validate_spec(6)).state, gauss_legendre(7))


def test_normalization_and_mean_for_all_optimal_states():
    for spec in all_specs(12):
        state = optimal_fidelity(spec).state
        assert abs(density_normalization(state) - 1) <= 1e-10
        assert abs(mean_x(state) - state.mean_x) <= 1e-10


def test_oracle_examples():
    m = coupling_matrix_oracle(validate_spec(2))
    assert m == pytest.approx(np.array([[0, 1 / math.sqrt(3)], [1 / math.sqrt(3), 0]]), abs=1e-10)
    m = coupling_matrix_oracle(validate_spec(4))
    assert abs(m[0, 2]) <= 1e-12 and abs(m[2, 0]) <= 1e-12
    m = coupling_matrix_oracle(validate_spec(1))
    assert m == pytest.approx(np.array([[1 / 3]]), abs=1e-12)


def test_oracle_matches_closed_form():
    for spec in all_specs(12):
        oracle = coupling_matrix_oracle(spec)
        closed = build_coupling_matrix(spec).dense()
        assert np.max(np.abs(oracle - closed)) <= 1e-10
        band = np.abs(np.subtract.outer(np.arange(spec.size), np.arange(spec.size))) >= 2
        if band.any():
            assert np.max(np.abs(oracle[band])) <= 1e-12


def test_oracle_rejects_low_order():
    with pytest.raises(ValueError):
        coupling_matrix_oracle(validate_spec(8), gauss_legendre(10))


def test_gram_basis_labels():
    labels = gram_basis(3, HalfInt(1))
    assert [(j.twice, mp.twice) for j, mp in labels] == [(1, -1), (1, 1), (3, -3), (3, -1), (3, 1), (3, 3)]


@pytest.mark.parametrize("n, dim, tol", [(1, 2, 1e-10), (2, 4, 1e-9), (3, 6, 1e-9)])
def test_gram_examples(n, dim, tol):
    g = povm_completeness_gram(n)
    assert g.shape == (dim, dim)
    assert np.max(np.abs(g - np.eye(dim))) <= tol


def test_gram_identity_and_symmetric():
    for spec in all_specs(10):
        g = povm_completeness_gram(spec.n_spins, spec.m)
        assert np.max(np.abs(g - g.T)) <= 1e-12
        assert np.max(np.abs(g - np.eye(len(g)))) <= 1e-9


def test_gram_structural_zeros():
    labels = gram_basis(4, HalfInt(0))
    g = povm_completeness_gram(4)
    for a, (_, m1) in enumerate(labels):
        for b, (_, m2) in enumerate(labels):
            if m1 != m2:
                assert g[a, b] == 0.0


def test_gram_range_limit():
    with pytest.raises(ValueError):
        povm_completeness_gram(21)
