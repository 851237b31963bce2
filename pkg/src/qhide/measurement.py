"""Projective measurements with Born-rule sampling: computational and
arbitrary single-qubit bases, Bell-basis measurements on (possibly
non-adjacent) pairs, and adaptive multi-round local strategies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .family import BellLabel, bell_projector
from .linalg import (
    ContractViolationError,
    DensityMatrix,
    Operator,
    operator_matrix,
    partial_trace,
    qubit_count,
    resolve_subset,
    _partial_trace_raw,
)

RNG_ALGORITHM = "numpy-pcg64-seedsequence-streams"


def rng_stream(seed: int, *stream: int) -> np.random.Generator:
    """Seedable generator; stream k of seed s is reproducible across runs."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=stream))


def _as_rng(rng: Union[int, np.random.Generator]) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return rng_stream(int(rng))


@dataclass(frozen=True)
class SingleQubitBasis:
    """Measurement axis on the Bloch sphere; outcome 0 projects along it.

    theta in [0, pi], phi in [0, 2*pi).
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must be in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * np.pi:
            raise ValueError(f"phi must be in [0, 2*pi), got {self.phi}")

    @classmethod
    def sigma_z(cls) -> "SingleQubitBasis":
        return cls(theta=0.0, phi=0.0)

    @classmethod
    def sigma_x(cls) -> "SingleQubitBasis":
        return cls(theta=np.pi / 2, phi=0.0)

    @classmethod
    def sigma_y(cls) -> "SingleQubitBasis":
        return cls(theta=np.pi / 2, phi=np.pi / 2)

    def vectors(self) -> np.ndarray:
        """2x2 array whose rows are the outcome-0 and outcome-1 basis vectors."""
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        phase = np.exp(1j * self.phi)
        return np.array([[c, phase * s], [-s, phase * c]], dtype=complex)

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        v = self.vectors()
        return np.outer(v[0], v[0].conj()), np.outer(v[1], v[1].conj())

    def descriptor(self) -> dict:
        return {"theta": float(self.theta), "phi": float(self.phi)}


@dataclass(frozen=True)
class MeasurementRecord:
    """One measurement event: what was measured, what came out, what remains."""

    subset: tuple[int, ...]
    basis: object
    outcome: object
    probability: float
    post_state: DensityMatrix


def lift_operator(op: Operator, subset: Sequence[int], n: int) -> np.ndarray:
    """Embed an operator on the listed qubits into the full n-qubit space.

    Index bookkeeping only: party ordering in `subset` maps to the operator's
    tensor slots, no qubit swapping of the state.
    """
    mat = operator_matrix(op)
    idx = resolve_subset(subset, n)
    k = len(idx)
    if mat.shape[0] != 2**k:
        raise ValueError(
            f"operator dimension {mat.shape[0]} does not match {k} qubits"
        )
    rest = [q for q in range(1, n + 1) if q not in set(idx)]
    full = np.kron(mat, np.eye(2 ** (n - k), dtype=complex))
    order = list(idx) + rest
    xs = np.arange(2**n)
    perm = np.zeros(2**n, dtype=np.int64)
    for pos, q in enumerate(order):
        perm |= ((xs >> (n - q)) & 1) << (n - 1 - pos)
    # full is laid out in (subset, rest) qubit order; perm maps original-order
    # basis indices to that layout
    return full[np.ix_(perm, perm)]


def born_distribution(
    state: Operator,
    subset: Sequence[int],
    bases: Sequence[SingleQubitBasis],
) -> np.ndarray:
    """Joint outcome distribution for product measurements on the subset.

    Outcomes are indexed with the first listed qubit as the most significant
    bit. The probabilities sum to 1 within 1e-12.
    """
    mat = operator_matrix(state)
    n = qubit_count(mat.shape[0])
    idx = resolve_subset(subset, n)
    if not idx:
        raise ValueError("measurement subset must be nonempty")
    if len(bases) != len(idx):
        raise ValueError(f"need one basis per measured qubit ({len(idx)}), got {len(bases)}")
    k = len(idx)
    complement = [q for q in range(1, n + 1) if q not in set(idx)]
    reduced = _partial_trace_raw(mat, complement, n)
    # reduced acts on sorted(idx); permute axes into the listed order
    ascending = sorted(idx)
    pos = [ascending.index(q) for q in idx]
    t = reduced.reshape([2] * (2 * k)).transpose(pos + [k + p for p in pos])

    operands = [t, list(range(2 * k))]
    for a, basis in enumerate(bases):
        v = basis.vectors()
        operands += [v.conj(), [2 * k + a, a], v, [2 * k + a, k + a]]
    # path search costs more than the contraction below ~3 qubits
    probs = np.einsum(*operands, list(range(2 * k, 3 * k)), optimize=(k > 3)).real
    return np.clip(probs.reshape(-1), 0.0, None)


def _product_vector(bases: Sequence[SingleQubitBasis], outcomes: Sequence[int]) -> np.ndarray:
    v = np.array([1.0 + 0j])
    for basis, o in zip(bases, outcomes):
        v = np.kron(v, basis.vectors()[o])
    return v


def sample_measure(
    state: DensityMatrix,
    subset: Sequence[int],
    bases: Sequence[SingleQubitBasis],
    rng: Union[int, np.random.Generator],
) -> MeasurementRecord:
    """Sample one outcome and return it with the renormalized post state."""
    gen = _as_rng(rng)
    probs = born_distribution(state, subset, bases)
    probs = probs / probs.sum()
    flat = int(gen.choice(len(probs), p=probs))
    k = len(probs).bit_length() - 1
    outcomes = tuple((flat >> (k - 1 - a)) & 1 for a in range(k))

    vec = _product_vector(bases, outcomes)
    proj = lift_operator(np.outer(vec, vec.conj()), subset, state.n_qubits)
    post = proj @ state.entries @ proj
    p = float(np.trace(post).real)
    return MeasurementRecord(
        subset=tuple(subset),
        basis=[b.descriptor() for b in bases],
        outcome=outcomes,
        probability=float(probs[flat]),
        post_state=DensityMatrix(post / p),
    )


def bell_measure_pair(
    state: DensityMatrix,
    pair: Sequence[int],
    rng: Union[int, np.random.Generator],
) -> tuple[BellLabel, MeasurementRecord]:
    """Bell-basis measurement of a qubit pair; the record's post state lives on
    the remaining qubits (the measured pair is traced out after projection)."""
    gen = _as_rng(rng)
    idx = resolve_subset(pair, state.n_qubits)
    if len(idx) != 2:
        raise ValueError(f"Bell measurement needs exactly two qubits, got {idx}")
    if state.n_qubits < 3:
        raise ValueError("post state would be empty; need at least 3 qubits")

    labels = list(BellLabel)
    projectors = [
        lift_operator(bell_projector(lab), idx, state.n_qubits) for lab in labels
    ]
    probs = np.array(
        [float(np.einsum("ij,ji->", state.entries, pi).real) for pi in projectors]
    )
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    choice = int(gen.choice(4, p=probs))
    outcome = labels[choice]

    post = projectors[choice] @ state.entries @ projectors[choice]
    post /= np.trace(post).real
    residual = partial_trace(post, idx)
    record = MeasurementRecord(
        subset=tuple(idx),
        basis="bell",
        outcome=str(outcome),
        probability=float(probs[choice]),
        post_state=residual,
    )
    return outcome, record


@dataclass(frozen=True)
class StrategyLeaf:
    """Terminal node carrying the guessed message b."""

    guess: int

    def __post_init__(self):
        if not 0 <= self.guess <= 3:
            raise ValueError(f"guess must be in 0..3, got {self.guess}")


@dataclass(frozen=True)
class StrategyNode:
    """One round: measure `party` in `basis`, then follow the outcome's child."""

    party: int
    basis: SingleQubitBasis
    children: tuple  # (subtree on outcome 0, subtree on outcome 1)


AdaptiveStrategy = Union[StrategyLeaf, StrategyNode]


def validate_strategy(root: AdaptiveStrategy, n: int) -> None:
    """Each party measured at most once per path, parties in range, depth <= n."""

    def walk(node, measured: frozenset[int], depth: int):
        if isinstance(node, StrategyLeaf):
            return
        if not isinstance(node, StrategyNode):
            raise ValueError(f"invalid strategy node {node!r}")
        if not 1 <= node.party <= n:
            raise ValueError(f"party {node.party} out of range [1, {n}]")
        if node.party in measured:
            raise ContractViolationError(
                f"strategy measures party {node.party} twice along a path"
            )
        if depth + 1 > n:
            raise ValueError("strategy depth exceeds the number of parties")
        for child in node.children:
            walk(child, measured | {node.party}, depth + 1)

    walk(root, frozenset(), 0)


def run_strategy(
    state: DensityMatrix,
    strategy: AdaptiveStrategy,
    rng: Union[int, np.random.Generator],
) -> tuple[int, list[dict]]:
    """Walk the decision tree, sampling each prescribed measurement on the
    evolving state; returns the leaf guess and the full transcript."""
    gen = _as_rng(rng)
    validate_strategy(strategy, state.n_qubits)
    transcript: list[dict] = []
    node = strategy
    current = state
    while isinstance(node, StrategyNode):
        record = sample_measure(current, [node.party], [node.basis], gen)
        (outcome,) = record.outcome
        transcript.append(
            {
                "party": node.party,
                "basis": node.basis.descriptor(),
                "outcome": outcome,
                "probability": record.probability,
            }
        )
        current = record.post_state
        node = node.children[outcome]
    return node.guess, transcript
