import itertools

import numpy as np
import pytest

from qhide import (
    BellLabel,
    ContractViolationError,
    DensityMatrix,
    SizeLimitError,
    StateLabel,
    bell_projector,
    hermitian_eigen,
    maximally_mixed,
    overlap,
    partial_trace,
    partial_transpose,
    tensor_product,
    trace_distance,
)
from conftest import LABELS, random_density

PHI_PLUS = bell_projector(BellLabel.PHI_PLUS)
PSI_PLUS = bell_projector(BellLabel.PSI_PLUS)


def test_density_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        DensityMatrix(np.ones((2, 3)))
    with pytest.raises(ContractViolationError):
        DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(ContractViolationError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(3) / 3)  # not a qubit dimension


def test_tensor_product_identity():
    out = tensor_product(np.eye(2, dtype=complex), np.eye(2, dtype=complex))
    assert np.allclose(out, np.eye(4))


def test_tensor_product_bell_pair_corner_entry():
    out = tensor_product(PHI_PLUS, PHI_PLUS)
    assert out.shape == (16, 16)
    assert out[0b0000, 0b1111] == pytest.approx(0.25)


def test_tensor_product_preserves_trace():
    rng = np.random.default_rng(11)
    a, b = random_density(4, rng), random_density(8, rng)
    assert np.trace(tensor_product(a, b)).real == pytest.approx(1.0)


def test_tensor_product_size_cap():
    big = np.eye(2**7, dtype=complex)
    with pytest.raises(SizeLimitError):
        tensor_product(big, np.eye(2**6, dtype=complex))


def test_partial_trace_bell_state():
    reduced = partial_trace(PHI_PLUS, [1])
    assert trace_distance(reduced, maximally_mixed(1)) < 1e-12


def test_partial_trace_family_state(family4):
    reduced = partial_trace(family4[StateLabel.RHO_PLUS], [1])
    assert trace_distance(reduced, maximally_mixed(3)) < 1e-12


def test_partial_trace_factorizes_products():
    rng = np.random.default_rng(3)
    a, b = random_density(4, rng), random_density(4, rng)
    prod = tensor_product(a, b)
    assert np.max(np.abs(partial_trace(prod, [3, 4]).entries - a)) < 1e-12
    assert np.max(np.abs(partial_trace(prod, [1, 2]).entries - b)) < 1e-12


def test_partial_trace_rejects_full_trace():
    with pytest.raises(ValueError):
        partial_trace(PHI_PLUS, [1, 2])


def test_partial_transpose_empty_subset_is_identity():
    rng = np.random.default_rng(5)
    rho = random_density(8, rng)
    assert np.array_equal(partial_transpose(rho, []), rho)


def test_partial_transpose_involution():
    rng = np.random.default_rng(6)
    rho = random_density(16, rng)
    for subset in ([1], [2, 4], [1, 3]):
        twice = partial_transpose(partial_transpose(rho, subset), subset)
        assert np.max(np.abs(twice - rho)) < 1e-14


def test_partial_transpose_bell_min_eigenvalue():
    eigs = np.linalg.eigvalsh(partial_transpose(PHI_PLUS, [1]))
    assert eigs[0] == pytest.approx(-0.5)


def test_partial_transpose_is_hermitian_and_trace_preserving():
    rng = np.random.default_rng(7)
    rho = random_density(8, rng)
    pt = partial_transpose(rho, [2])
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-14
    assert np.trace(pt).real == pytest.approx(1.0)


def test_hermitian_eigen_identity_and_pauli_z():
    spec = hermitian_eigen(np.eye(4, dtype=complex))
    assert np.allclose(spec.eigenvalues, np.ones(4))
    spec = hermitian_eigen(np.diag([1.0, -1.0])[::-1, ::-1].astype(complex))
    assert np.allclose(spec.eigenvalues, [-1.0, 1.0])


def test_hermitian_eigen_family_spectrum(family4):
    spec = hermitian_eigen(family4[StateLabel.RHO_PLUS])
    assert np.allclose(spec.eigenvalues[:12], 0.0, atol=1e-12)
    assert np.allclose(spec.eigenvalues[12:], 0.25, atol=1e-12)


def test_hermitian_eigen_sorted_and_reconstructs():
    rng = np.random.default_rng(8)
    for dim in (2, 16, 64, 256):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        herm = (g + g.conj().T) / 2
        spec = hermitian_eigen(herm)
        assert np.all(np.diff(spec.eigenvalues) >= 0)
        assert np.max(np.abs(spec.reconstruct() - herm)) < 1e-9
        gram = spec.eigenvectors.conj().T @ spec.eigenvectors
        assert np.max(np.abs(gram - np.eye(dim))) < 1e-10


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(ContractViolationError):
        hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eigen_deterministic():
    rng = np.random.default_rng(9)
    g = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
    herm = (g + g.conj().T) / 2
    a, b = hermitian_eigen(herm), hermitian_eigen(herm)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_trace_distance_basic():
    assert trace_distance(PHI_PLUS, PHI_PLUS) == 0.0
    assert trace_distance(PHI_PLUS, PSI_PLUS) == pytest.approx(1.0)
    rng = np.random.default_rng(10)
    a, b = random_density(8, rng), random_density(8, rng)
    assert trace_distance(a, b) == pytest.approx(trace_distance(b, a))
    with pytest.raises(ValueError):
        trace_distance(a, PHI_PLUS)


def test_trace_distance_hidden_reductions(family4):
    reduced_rho = partial_trace(family4[StateLabel.RHO_PLUS], [1])
    reduced_sigma = partial_trace(family4[StateLabel.SIGMA_PLUS], [1])
    assert trace_distance(reduced_rho, reduced_sigma) < 1e-12


def test_trace_distance_triangle_inequality(family4):
    pool = list(family4.values()) + [
        DensityMatrix(tensor_product(bell_projector(a), bell_projector(b)))
        for a, b in itertools.product(BellLabel, repeat=2)
    ]
    rng = np.random.default_rng(12)
    for _ in range(30):
        x, y, z = (pool[i] for i in rng.integers(len(pool), size=3))
        assert trace_distance(x, z) <= trace_distance(x, y) + trace_distance(y, z) + 1e-10


def test_overlap_values(family4):
    rho, sigma = family4[StateLabel.RHO_PLUS], family4[StateLabel.SIGMA_PLUS]
    assert overlap(rho, sigma) == pytest.approx(0.0, abs=1e-14)
    assert overlap(rho, rho) == pytest.approx(0.25)
    assert overlap(maximally_mixed(4), rho) == pytest.approx(1 / 16)
    assert overlap(rho, sigma) == pytest.approx(overlap(sigma, rho))
    with pytest.raises(ValueError):
        overlap(rho, PHI_PLUS)


def test_family_states_are_valid_densities(family4, family6):
    for states in (family4, family6):
        for state in states.values():
            assert np.trace(state.entries).real == pytest.approx(1.0, abs=1e-10)
            assert state.min_eigenvalue() > -1e-10
