"""The four-member family of activable bound entangled states on even numbers of qubits.

Each family member is an equal mixture of 2^(n-2) rank-1 projectors onto
two-amplitude vectors (|x> + s|x~>)/sqrt(2), where x runs over the n-bit
strings with first bit 0 and fixed Hamming-weight parity, and x~ is the
bitwise complement. The same states arise from a Bell-pair recursion, and the
label algebra connecting the two constructions is plain XOR on two bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .linalg import (
    DENSE_QUBIT_CAP,
    DensityMatrix,
    SizeLimitError,
    tensor_product,
    trace_distance,
)

SQRT2 = np.sqrt(2.0)


class ConstructionError(RuntimeError):
    """The two independent constructions of a family state disagreed."""


class StateLabel(Enum):
    """Family member: group bit (0 = even parity, 1 = odd) and sign bit (0 = +, 1 = -)."""

    RHO_PLUS = (0, 0)
    RHO_MINUS = (0, 1)
    SIGMA_PLUS = (1, 0)
    SIGMA_MINUS = (1, 1)

    @property
    def group_bit(self) -> int:
        return self.value[0]

    @property
    def sign_bit(self) -> int:
        return self.value[1]

    @property
    def message(self) -> int:
        """The hidden two-bit message b = 2*group_bit + sign_bit."""
        return 2 * self.group_bit + self.sign_bit

    @property
    def sign(self) -> int:
        return 1 if self.sign_bit == 0 else -1

    @classmethod
    def from_bits(cls, group_bit: int, sign_bit: int) -> "StateLabel":
        return _STATE_BY_BITS[(group_bit & 1, sign_bit & 1)]

    @classmethod
    def from_message(cls, b: int) -> "StateLabel":
        if not 0 <= b <= 3:
            raise ValueError(f"message must be in 0..3, got {b}")
        return cls.from_bits(b >> 1, b & 1)

    @classmethod
    def parse(cls, text: str) -> "StateLabel":
        try:
            return _STATE_BY_NAME[text.strip().lower()]
        except KeyError:
            raise ValueError(
                f"unknown state label {text!r}; expected one of {sorted(_STATE_BY_NAME)}"
            ) from None

    def __str__(self) -> str:
        return ("rho" if self.group_bit == 0 else "sigma") + ("+" if self.sign_bit == 0 else "-")


class BellLabel(Enum):
    """Bell state: flip bit (0 = phi, 1 = psi) and phase bit (0 = +, 1 = -)."""

    PHI_PLUS = (0, 0)
    PHI_MINUS = (0, 1)
    PSI_PLUS = (1, 0)
    PSI_MINUS = (1, 1)

    @property
    def flip_bit(self) -> int:
        return self.value[0]

    @property
    def phase_bit(self) -> int:
        return self.value[1]

    @classmethod
    def from_bits(cls, flip_bit: int, phase_bit: int) -> "BellLabel":
        return _BELL_BY_BITS[(flip_bit & 1, phase_bit & 1)]

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        try:
            return _BELL_BY_NAME[text.strip().lower()]
        except KeyError:
            raise ValueError(
                f"unknown Bell label {text!r}; expected one of {sorted(_BELL_BY_NAME)}"
            ) from None

    def __str__(self) -> str:
        return ("phi" if self.flip_bit == 0 else "psi") + ("+" if self.phase_bit == 0 else "-")


_STATE_BY_BITS = {lab.value: lab for lab in StateLabel}
_STATE_BY_NAME = {str(lab): lab for lab in StateLabel}
_BELL_BY_BITS = {lab.value: lab for lab in BellLabel}
_BELL_BY_NAME = {str(lab): lab for lab in BellLabel}


def compose(label: StateLabel, bell: BellLabel) -> StateLabel:
    """XOR label algebra: which parent/Bell pairing feeds which child state."""
    return StateLabel.from_bits(
        label.group_bit ^ bell.flip_bit, label.sign_bit ^ bell.phase_bit
    )


def composition_table() -> dict[tuple[StateLabel, BellLabel], StateLabel]:
    return {(lab, bell): compose(lab, bell) for lab in StateLabel for bell in BellLabel}


def bell_of_label(label: StateLabel) -> BellLabel:
    """Bit-preserving bijection onto Bell labels (the n = 2 base of the recursion)."""
    return BellLabel.from_bits(label.group_bit, label.sign_bit)


def label_of_bell(bell: BellLabel) -> StateLabel:
    return StateLabel.from_bits(bell.flip_bit, bell.phase_bit)


def bell_vector(label: BellLabel) -> np.ndarray:
    """The Bell state vector in the computational basis, qubit 1 most significant."""
    v = np.zeros(4, dtype=complex)
    sign = 1.0 if label.phase_bit == 0 else -1.0
    if label.flip_bit == 0:
        v[0b00], v[0b11] = 1.0, sign
    else:
        v[0b01], v[0b10] = 1.0, sign
    return v / SQRT2


def bell_projector(label: BellLabel) -> DensityMatrix:
    """Rank-1 projector onto the named Bell vector."""
    v = bell_vector(label)
    return DensityMatrix(np.outer(v, v.conj()))


@dataclass(frozen=True)
class GhzEnsemble:
    """Sparse family state: equal mixture of projectors onto (|x> + s|x~>)/sqrt(2).

    members holds (bits, sign) pairs with bits an integer whose most
    significant bit (of width n_qubits) is qubit 1, sorted ascending by bits.
    Construction via closed_form always yields the canonical ensemble; loaded
    dumps may violate the label invariants, which validate() detects.
    """

    n_qubits: int
    label: StateLabel
    members: tuple[tuple[int, int], ...]

    @property
    def member_count(self) -> int:
        return len(self.members)

    def bitstring(self, bits: int) -> str:
        return format(bits, f"0{self.n_qubits}b")

    def validate(self) -> None:
        """Check the closed-form invariants; raises ValueError on violation."""
        n = self.n_qubits
        if n < 4 or n % 2:
            raise ValueError(f"n_qubits must be even and >= 4, got {n}")
        if self.member_count != 2 ** (n - 2):
            raise ValueError(
                f"expected {2 ** (n - 2)} members, got {self.member_count}"
            )
        seen = set()
        for bits, sign in self.members:
            if bits in seen:
                raise ValueError(f"duplicate member bitstring {self.bitstring(bits)}")
            seen.add(bits)
            if bits >> (n - 1):
                raise ValueError(f"member {self.bitstring(bits)} has first bit 1")
            if bits.bit_count() % 2 != self.label.group_bit:
                raise ValueError(
                    f"member {self.bitstring(bits)} has wrong weight parity"
                )
            if sign != self.label.sign:
                raise ValueError(
                    f"member {self.bitstring(bits)} sign {sign} contradicts label {self.label}"
                )


def closed_form(n: int, label: StateLabel) -> GhzEnsemble:
    """Enumerate the 2^(n-2) parity-constrained members of the named family state."""
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    sign = label.sign
    members = tuple(
        (x, sign)
        for x in range(2 ** (n - 1))
        if x.bit_count() % 2 == label.group_bit
    )
    return GhzEnsemble(n_qubits=n, label=label, members=members)


def to_dense(ens: GhzEnsemble) -> DensityMatrix:
    """Materialize the ensemble; each member contributes four entries of 2^-(n-1)."""
    n = ens.n_qubits
    if n > DENSE_QUBIT_CAP:
        raise SizeLimitError(f"{n} qubits exceeds the dense cap of {DENSE_QUBIT_CAP}")
    dim = 2**n
    full = dim - 1
    w = 0.5 / ens.member_count
    mat = np.zeros((dim, dim), dtype=complex)
    for bits, sign in ens.members:
        comp = full ^ bits
        mat[bits, bits] += w
        mat[comp, comp] += w
        mat[bits, comp] += sign * w
        mat[comp, bits] += sign * w
    return DensityMatrix(mat)


def sparse_overlap(a: GhzEnsemble, b: GhzEnsemble) -> float:
    """Tr(rho_a rho_b) by bitstring bookkeeping, no matrices materialized.

    Two members overlap only when they share the same bitstring with the same
    sign, in which case the projectors coincide.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    signs_b = dict(b.members)
    shared = sum(1 for bits, sign in a.members if signs_b.get(bits) == sign)
    return shared / (a.member_count * b.member_count)


def base_four(label: StateLabel) -> DensityMatrix:
    """The named 4-qubit state via the Bell-pair mixture, cross-checked against
    the closed form; the two constructions must agree to 1e-12."""
    dim = 16
    mat = np.zeros((dim, dim), dtype=complex)
    for bell in BellLabel:
        left = bell_projector(bell_of_label(compose(label, bell)))
        mat += 0.25 * tensor_product(left, bell_projector(bell))
    state = DensityMatrix(mat)
    reference = to_dense(closed_form(4, label))
    dev = trace_distance(state, reference)
    if dev > 1e-12:
        raise ConstructionError(
            f"Bell-pair and closed-form constructions of {label} differ by {dev:.3e}"
        )
    return state


def recurse(
    parent_states: Mapping[StateLabel, DensityMatrix], label: StateLabel
) -> DensityMatrix:
    """One step of the family recursion: equal mixture of parent x Bell-projector pairs."""
    missing = [lab for lab in StateLabel if lab not in parent_states]
    if missing:
        raise ValueError(f"parent set is missing labels {missing}")
    sizes = {parent_states[lab].n_qubits for lab in StateLabel}
    if len(sizes) != 1:
        raise ValueError(f"parent states disagree on qubit count: {sorted(sizes)}")
    n = sizes.pop()
    if n % 2:
        raise ValueError(f"parent qubit count must be even, got {n}")
    if n + 2 > DENSE_QUBIT_CAP:
        raise SizeLimitError(
            f"recursion to {n + 2} qubits exceeds the dense cap of {DENSE_QUBIT_CAP}"
        )
    dim = 2 ** (n + 2)
    mat = np.zeros((dim, dim), dtype=complex)
    for bell in BellLabel:
        parent = parent_states[compose(label, bell)]
        mat += 0.25 * tensor_product(parent, bell_projector(bell))
    return DensityMatrix(mat)


def family_states(n: int) -> dict[StateLabel, DensityMatrix]:
    """All four dense family states at n qubits, from the closed form."""
    return {lab: to_dense(closed_form(n, lab)) for lab in StateLabel}


def recursion_chain(n: int) -> dict[StateLabel, DensityMatrix]:
    """All four dense family states at n qubits, built by recursing from n = 4."""
    states = {lab: base_four(lab) for lab in StateLabel}
    for _ in range(4, n, 2):
        states = {lab: recurse(states, lab) for lab in StateLabel}
    return states


def ensemble_to_dict(ens: GhzEnsemble) -> dict:
    """Dump record: {n, label, members: [{bits, sign}, ...]}, bitstrings qubit-1-first."""
    return {
        "n": ens.n_qubits,
        "label": str(ens.label),
        "members": [
            {"bits": ens.bitstring(bits), "sign": sign} for bits, sign in ens.members
        ],
    }


def ensemble_from_dict(record: dict) -> GhzEnsemble:
    """Inverse of ensemble_to_dict. Bit-exact round trip; does not validate the
    label invariants, so corrupted dumps load and then fail verification."""
    n = int(record["n"])
    label = StateLabel.parse(record["label"])
    members = []
    for m in record["members"]:
        bits = m["bits"]
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"malformed member bitstring {bits!r} for n={n}")
        sign = int(m["sign"])
        if sign not in (1, -1):
            raise ValueError(f"member sign must be +1 or -1, got {sign}")
        members.append((int(bits, 2), sign))
    return GhzEnsemble(n_qubits=n, label=label, members=tuple(members))
