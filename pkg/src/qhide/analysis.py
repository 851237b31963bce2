"""Structural property checks: permutation symmetry, maximal ignorance,
partial-transpose spectra across bipartitions, and single-qubit Pauli
connections between family members."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

import numpy as np

from .linalg import (
    DensityMatrix,
    Operator,
    maximally_mixed,
    operator_matrix,
    partial_trace,
    partial_transpose,
    qubit_count,
    resolve_subset,
    trace_distance,
    DEFAULT_TOL,
)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# PPT verdicts: eigenvalues above this threshold count as nonnegative.
PPT_THRESHOLD = -1e-10


@dataclass(frozen=True)
class Bipartition:
    """A two-sided cut of the qubits; sides are disjoint, nonempty, and cover."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __init__(self, side_a: Iterable[int], side_b: Iterable[int]):
        a = tuple(int(i) for i in side_a)
        b = tuple(int(i) for i in side_b)
        if not a or not b:
            raise ValueError("both sides of a bipartition must be nonempty")
        if set(a) & set(b):
            raise ValueError(f"bipartition sides overlap: {a} vs {b}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    def check_covers(self, n: int) -> None:
        if set(self.side_a) | set(self.side_b) != set(range(1, n + 1)):
            raise ValueError(
                f"bipartition {self.side_a}:{self.side_b} does not cover qubits 1..{n}"
            )


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one structural check: pass iff deviation < tolerance."""

    name: str
    label: str
    n_qubits: int
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation < self.tolerance

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "label": self.label,
            "n": self.n_qubits,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def swap_qubits(state: Operator, i: int, j: int) -> np.ndarray:
    """Conjugate with the permutation operator exchanging qubits i and j."""
    mat = operator_matrix(state)
    n = qubit_count(mat.shape[0])
    resolve_subset([i, j], n)
    idx = np.arange(mat.shape[0])
    bi = (idx >> (n - i)) & 1
    bj = (idx >> (n - j)) & 1
    perm = idx ^ ((bi ^ bj) << (n - i)) ^ ((bi ^ bj) << (n - j))
    return mat[np.ix_(perm, perm)]


def check_permutation_symmetry(
    state: DensityMatrix,
    swap: tuple[int, int],
    *,
    label: str = "",
    tolerance: float = DEFAULT_TOL,
) -> PropertyReport:
    """Deviation of the state from itself under one transposition of parties."""
    i, j = swap
    if i == j:
        raise ValueError(f"swap indices must be distinct, got ({i}, {j})")
    swapped = swap_qubits(state, i, j)
    return PropertyReport(
        name=f"permutation_symmetry_swap_{i}_{j}",
        label=label,
        n_qubits=state.n_qubits,
        deviation=trace_distance(state, swapped),
        tolerance=tolerance,
    )


def check_maximal_ignorance(
    state: DensityMatrix,
    traced_party: int,
    *,
    label: str = "",
    tolerance: float = DEFAULT_TOL,
) -> PropertyReport:
    """Distance of the one-party-discarded reduction from the maximally mixed state."""
    reduced = partial_trace(state, [traced_party])
    return PropertyReport(
        name=f"maximal_ignorance_trace_{traced_party}",
        label=label,
        n_qubits=state.n_qubits,
        deviation=trace_distance(reduced, maximally_mixed(state.n_qubits - 1)),
        tolerance=tolerance,
    )


def ppt_min_eigenvalue(state: DensityMatrix, cut: Bipartition) -> float:
    """Minimum eigenvalue of the partial transpose over side_b of the cut."""
    cut.check_covers(state.n_qubits)
    pt = partial_transpose(state, cut.side_b)
    return float(np.linalg.eigvalsh(pt)[0])


def pauli_string_matrix(letters: str) -> np.ndarray:
    """Dense operator for a Pauli string, qubit 1 leftmost."""
    mat = np.array([[1.0 + 0j]])
    for letter in letters:
        try:
            mat = np.kron(mat, PAULI[letter])
        except KeyError:
            raise ValueError(f"invalid Pauli letter {letter!r}") from None
    return mat


def conjugate_pauli(state: Operator, letters: str) -> np.ndarray:
    mat = operator_matrix(state)
    n = qubit_count(mat.shape[0])
    if len(letters) != n:
        raise ValueError(f"Pauli string length {len(letters)} != {n} qubits")
    p = pauli_string_matrix(letters)
    return p @ mat @ p.conj().T


def find_pauli_connection(
    a: DensityMatrix,
    b: DensityMatrix,
    *,
    tolerance: float = DEFAULT_TOL,
    exhaustive: bool = False,
) -> str | None:
    """Search for a Pauli string P with P a P† = b.

    Weight-1 candidates are tried in qubit order then letter order X, Y, Z;
    the identity string is returned when a = b. With exhaustive=True (n = 4
    only) the search continues through all strings by ascending weight.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError("states must act on the same number of qubits")
    n = a.n_qubits
    if trace_distance(a, b) < tolerance:
        return "I" * n
    for qubit in range(1, n + 1):
        for letter in "XYZ":
            candidate = "I" * (qubit - 1) + letter + "I" * (n - qubit)
            if trace_distance(conjugate_pauli(a, candidate), b) < tolerance:
                return candidate
    if not exhaustive:
        return None
    if n != 4:
        raise ValueError("exhaustive Pauli search is supported for n = 4 only")
    candidates = sorted(
        ("".join(s) for s in product("IXYZ", repeat=n)),
        key=lambda s: (n - s.count("I"), s),
    )
    for candidate in candidates:
        if sum(c != "I" for c in candidate) <= 1:
            continue
        if trace_distance(conjugate_pauli(a, candidate), b) < tolerance:
            return candidate
    return None
