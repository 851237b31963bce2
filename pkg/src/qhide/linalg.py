"""Dense complex linear algebra over multi-qubit operators.

Qubit 1 is the leftmost (most significant) tensor factor and all qubit
indices are 1-based. Dense operators are capped at 12 qubits (4096 x 4096);
larger systems must use the sparse ensemble representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_TOL = 1e-10
EIGEN_TOL = 1e-9
DENSE_QUBIT_CAP = 12


class SizeLimitError(ValueError):
    """Operator would exceed the dense size cap of 2^12 x 2^12."""


class ContractViolationError(ValueError):
    """An operation precondition was violated (e.g. non-Hermitian input)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its residual contract."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


def qubit_count(dim: int) -> int:
    """Number of qubits for a 2^n dimension, rejecting non-powers of two."""
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace operator on n qubits.

    Hermiticity and unit trace are checked at construction (cheap, O(d^2));
    positive semidefiniteness is checked on demand via :func:`min_eigenvalue`
    since it requires a full eigendecomposition.
    """

    entries: np.ndarray
    n_qubits: int

    def __init__(self, entries: np.ndarray, *, tol: float = DEFAULT_TOL):
        mat = np.array(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        n = qubit_count(mat.shape[0])
        if n > DENSE_QUBIT_CAP:
            raise SizeLimitError(
                f"{n} qubits exceeds the dense cap of {DENSE_QUBIT_CAP}"
            )
        if np.max(np.abs(mat - mat.conj().T)) > tol:
            raise ContractViolationError("density matrix is not Hermitian")
        tr = np.trace(mat)
        if abs(tr - 1.0) > tol:
            raise ContractViolationError(f"density matrix has trace {tr}, expected 1")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "n_qubits", n)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


Operator = Union[DensityMatrix, np.ndarray]


def operator_matrix(op: Operator) -> np.ndarray:
    """Coerce a DensityMatrix or raw array to a complex square matrix."""
    if isinstance(op, DensityMatrix):
        return op.entries
    mat = np.asarray(op, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"operator must be square, got shape {mat.shape}")
    return mat


def resolve_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate a 1-based qubit subset, preserving the given order."""
    idx = tuple(int(i) for i in subset)
    if len(set(idx)) != len(idx):
        raise ValueError(f"qubit indices must be distinct, got {idx}")
    for i in idx:
        if not 1 <= i <= n:
            raise ValueError(f"qubit index {i} out of range [1, {n}]")
    return idx


def tensor_product(a: Operator, b: Operator) -> np.ndarray:
    """Kronecker product with the left operand as the most significant factor."""
    ma, mb = operator_matrix(a), operator_matrix(b)
    dim = ma.shape[0] * mb.shape[0]
    if dim > 2**DENSE_QUBIT_CAP:
        raise SizeLimitError(
            f"tensor product of dimension {dim} exceeds 2^{DENSE_QUBIT_CAP}"
        )
    return np.kron(ma, mb)


def _partial_trace_raw(mat: np.ndarray, traced: Sequence[int], n: int) -> np.ndarray:
    """Partial trace on a raw matrix; empty `traced` returns the input."""
    if not traced:
        return mat
    kept = [q for q in range(1, n + 1) if q not in set(traced)]
    t = mat.reshape([2] * (2 * n))
    # einsum integer subscripts: row axis of qubit q is q-1, column axis is n+q-1
    subs = list(range(2 * n))
    for q in traced:
        subs[n + q - 1] = subs[q - 1]
    out_subs = [q - 1 for q in kept] + [n + q - 1 for q in kept]
    d = 2 ** len(kept)
    return np.einsum(t, subs, out_subs).reshape(d, d)


def partial_trace(rho: Operator, traced: Iterable[int]) -> DensityMatrix:
    """Trace out the given qubits; the result acts on the complement in original order."""
    mat = operator_matrix(rho)
    n = qubit_count(mat.shape[0])
    idx = resolve_subset(traced, n)
    if len(idx) == n:
        raise ValueError("cannot trace out every qubit")
    return DensityMatrix(_partial_trace_raw(mat, idx, n))


def partial_transpose(rho: Operator, subset: Iterable[int]) -> np.ndarray:
    """Transpose the tensor factors of the given qubits only."""
    mat = operator_matrix(rho)
    n = qubit_count(mat.shape[0])
    idx = resolve_subset(subset, n)
    if not idx:
        return mat.copy()
    t = mat.reshape([2] * (2 * n))
    axes = list(range(2 * n))
    for q in idx:
        axes[q - 1], axes[n + q - 1] = axes[n + q - 1], axes[q - 1]
    return t.transpose(axes).reshape(mat.shape)


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigendecomposition of a Hermitian operator.

    eigenvalues are real and sorted ascending; eigenvectors are the matching
    orthonormal columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigen(a: Operator, *, tol: float = DEFAULT_TOL) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian operator.

    Raises ContractViolationError for non-Hermitian input and NumericalError
    (carrying the residual norm) when the reconstruction contract fails.
    """
    mat = operator_matrix(a)
    if np.max(np.abs(mat - mat.conj().T)) > tol:
        raise ContractViolationError("hermitian_eigen requires a Hermitian operator")
    try:
        w, v = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    residual = float(np.max(np.abs(mat - (v * w) @ v.conj().T)))
    if residual > EIGEN_TOL:
        raise NumericalError(
            f"eigendecomposition residual {residual:.3e} exceeds {EIGEN_TOL}",
            residual=residual,
        )
    return HermitianSpectrum(eigenvalues=w, eigenvectors=v)


def trace_distance(rho: Operator, sigma: Operator) -> float:
    """Half the trace norm of (rho - sigma)."""
    a, b = operator_matrix(rho), operator_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def overlap(rho: Operator, sigma: Operator) -> float:
    """Tr(rho sigma); the orthogonality witness for Hermitian operators."""
    a, b = operator_matrix(rho), operator_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.einsum("ij,ji->", a, b).real)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    """I / 2^n on n qubits."""
    d = 2**n_qubits
    return DensityMatrix(np.eye(d, dtype=complex) / d)
