"""The two-cbit hiding protocol and its attack repertoire: the global reveal,
the sigma_z parity attack, the coalition (reduced-state) attack, Bell-basis
unlocking, and Monte Carlo sampling over adaptive local strategies."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

import numpy as np

from .family import (
    BellLabel,
    GhzEnsemble,
    StateLabel,
    bell_of_label,
    bell_projector,
    closed_form,
    compose,
    family_states,
    sparse_overlap,
    to_dense,
)
from .linalg import (
    DENSE_QUBIT_CAP,
    DEFAULT_TOL,
    DensityMatrix,
    SizeLimitError,
    overlap,
    partial_trace,
    resolve_subset,
    trace_distance,
)
from .measurement import (
    AdaptiveStrategy,
    SingleQubitBasis,
    StrategyLeaf,
    StrategyNode,
    bell_measure_pair,
    lift_operator,
    rng_stream,
    run_strategy,
)


@dataclass(frozen=True)
class HiddenInstance:
    """One run of the hiding protocol: the hidden bits, the prepared state,
    and the party registry (party i holds qubit i)."""

    n_qubits: int
    hidden_bits: int
    label: StateLabel
    state: Union[DensityMatrix, GhzEnsemble]
    parties: dict[int, int]

    @property
    def dense(self) -> bool:
        return isinstance(self.state, DensityMatrix)


@dataclass(frozen=True)
class AttackReport:
    """Structured attack outcome with stable JSON field names."""

    attack: str
    n_qubits: int
    trials: int
    seed: int
    per_bit: dict[str, float]
    overall: float
    analytic_bound: float | None
    notes: str
    transcripts_sample: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials <= 0:
            raise ValueError(f"trials must be positive, got {self.trials}")
        for name, freq in self.per_bit.items():
            if not 0.0 <= freq <= 1.0:
                raise ValueError(f"frequency {name}={freq} outside [0, 1]")

    def to_dict(self) -> dict:
        out = {
            "attack": self.attack,
            "n": self.n_qubits,
            "trials": self.trials,
            "seed": self.seed,
            "per_bit": dict(self.per_bit),
            "overall": self.overall,
            "analytic_bound": self.analytic_bound,
            "notes": self.notes,
            "transcripts_sample": self.transcripts_sample,
        }
        out.update(self.extras)
        return out


def hide(b: int, n: int, representation: str = "dense") -> HiddenInstance:
    """Prepare the hiding instance for message b among n parties."""
    label = StateLabel.from_message(b)
    ensemble = closed_form(n, label)
    if representation == "dense":
        state: Union[DensityMatrix, GhzEnsemble] = to_dense(ensemble)
    elif representation == "sparse":
        state = ensemble
    else:
        raise ValueError(f"representation must be 'dense' or 'sparse', got {representation!r}")
    return HiddenInstance(
        n_qubits=n,
        hidden_bits=b,
        label=label,
        state=state,
        parties={i: i for i in range(1, n + 1)},
    )


def reveal_global(instance: HiddenInstance, *, tol: float = DEFAULT_TOL) -> int | None:
    """Recover b by the joint measurement the orthogonality guarantees; a
    within-tolerance tie among candidates is reported as None (inconclusive)."""
    if instance.dense:
        overlaps = {
            lab.message: overlap(instance.state, to_dense(closed_form(instance.n_qubits, lab)))
            for lab in StateLabel
        }
    else:
        overlaps = {
            lab.message: sparse_overlap(instance.state, closed_form(instance.n_qubits, lab))
            for lab in StateLabel
        }
    ranked = sorted(overlaps.items(), key=lambda kv: (-kv[1], kv[0]))
    if ranked[0][1] - ranked[1][1] < tol:
        return None
    return ranked[0][0]


def _sample_sigma_z_string(instance: HiddenInstance, gen: np.random.Generator) -> int:
    """Draw one all-parties sigma_z outcome string from the instance state."""
    if instance.dense:
        probs = np.clip(np.diag(instance.state.entries).real, 0.0, None)
        probs = probs / probs.sum()
        return int(gen.choice(len(probs), p=probs))
    members = instance.state.members
    bits, _ = members[int(gen.integers(len(members)))]
    if gen.integers(2):
        bits ^= (1 << instance.n_qubits) - 1
    return bits


def _verify_parity_support(instance: HiddenInstance, tol: float) -> float:
    """Off-parity-class diagonal mass; exactly the support argument that makes
    the group bit deterministic."""
    g = instance.label.group_bit
    if instance.dense:
        diag = np.diag(instance.state.entries).real
        off = sum(
            p for x, p in enumerate(diag) if x.bit_count() % 2 != g
        )
        return float(abs(off))
    bad = sum(1 for bits, _ in instance.state.members if bits.bit_count() % 2 != g)
    return float(bad)


def parity_attack(
    instance: HiddenInstance,
    rng_seed: int,
    *,
    trials: int = 10_000,
) -> AttackReport:
    """Every party measures sigma_z; the outcome parity is the group-bit guess
    and the sign bit is guessed uniformly."""
    gen = rng_stream(rng_seed, 0)
    off_support = _verify_parity_support(instance, DEFAULT_TOL)
    group_hits = sign_hits = both_hits = 0
    sample_strings: list[str] = []
    for t in range(trials):
        string = _sample_sigma_z_string(instance, gen)
        guess_group = string.bit_count() & 1
        guess_sign = int(gen.integers(2))
        g_ok = guess_group == instance.label.group_bit
        s_ok = guess_sign == instance.label.sign_bit
        group_hits += g_ok
        sign_hits += s_ok
        both_hits += g_ok and s_ok
        if t < 3:
            sample_strings.append(format(string, f"0{instance.n_qubits}b"))
    return AttackReport(
        attack="parity",
        n_qubits=instance.n_qubits,
        trials=trials,
        seed=rng_seed,
        per_bit={"group": group_hits / trials, "sign": sign_hits / trials},
        overall=both_hits / trials,
        analytic_bound=0.5,
        notes=(
            "sigma_z parity reveals the group bit deterministically; the sign "
            "bit is invisible to diagonal measurements"
        ),
        transcripts_sample=[
            {"party": "all", "basis": {"theta": 0.0, "phi": 0.0}, "outcome": s}
            for s in sample_strings
        ],
        extras={"support_verified": off_support < DEFAULT_TOL, "off_support_mass": off_support},
    )


def coalition_attack(instance: HiddenInstance, coalition: Sequence[int]) -> AttackReport:
    """Reduced-state analysis for a proper coalition of parties; analytic, no
    sampling: the four reductions coincide, so the best guess is the prior."""
    idx = resolve_subset(coalition, instance.n_qubits)
    if not idx:
        raise ValueError("coalition must be nonempty")
    if len(idx) == instance.n_qubits:
        raise ValueError(
            "coalition of all parties is the global reveal, not a coalition attack"
        )
    if instance.n_qubits > DENSE_QUBIT_CAP:
        raise SizeLimitError("coalition attack requires the dense representation cap")
    traced = [q for q in range(1, instance.n_qubits + 1) if q not in set(idx)]
    reduced = {
        lab: partial_trace(to_dense(closed_form(instance.n_qubits, lab)), traced)
        for lab in StateLabel
    }
    distances = {
        f"{a}|{b}": trace_distance(reduced[a], reduced[b])
        for a, b in combinations(StateLabel, 2)
    }
    max_distance = max(distances.values())
    return AttackReport(
        attack="coalition",
        n_qubits=instance.n_qubits,
        trials=1,
        seed=0,
        per_bit={"group": 0.5, "sign": 0.5},
        overall=0.25,
        analytic_bound=0.25,
        notes=(
            "analytic: all four reduced states on the coalition coincide, so the "
            "optimal guess over a uniform prior succeeds with probability 1/4"
        ),
        extras={
            "coalition": list(idx),
            "max_pairwise_trace_distance": max_distance,
            "pairwise_trace_distances": {k: float(v) for k, v in distances.items()},
        },
    )


@dataclass(frozen=True)
class UnlockResult:
    """One Bell-unlocking run: the measured outcome, the label the recursion
    predicts for the residual, and how well the actual residual matches it."""

    outcome: BellLabel
    residual_label: Union[StateLabel, BellLabel]
    prediction_distance: float
    entanglement_entropy: float | None
    verified: bool
    transcript: dict


def unlock_pair(
    instance: HiddenInstance,
    pair: Sequence[int],
    rng_seed: Union[int, np.random.Generator],
    *,
    tol: float = 1e-9,
) -> UnlockResult:
    """Two parties join and Bell-measure; the residual state of the others is
    predicted by the label algebra and verified against the actual post state.

    For n = 4 the residual is itself a Bell projector and its entanglement
    entropy (1 ebit) is recorded: the constructive form of the activation step.
    """
    if not instance.dense:
        raise ValueError("unlock_pair needs the dense representation")
    outcome, record = bell_measure_pair(instance.state, pair, rng_seed)
    residual = record.post_state
    predicted_label: Union[StateLabel, BellLabel]
    entropy = None
    if instance.n_qubits == 4:
        predicted_label = bell_of_label(compose(instance.label, outcome))
        predicted = bell_projector(predicted_label)
        eigs = np.clip(np.linalg.eigvalsh(partial_trace(residual, [1]).entries), 1e-300, None)
        entropy = float(-np.sum(eigs * np.log2(eigs)))
    else:
        predicted_label = compose(instance.label, outcome)
        predicted = to_dense(closed_form(instance.n_qubits - 2, predicted_label))
    distance = trace_distance(residual, predicted)
    verified = distance < tol and (entropy is None or abs(entropy - 1.0) < tol)
    return UnlockResult(
        outcome=outcome,
        residual_label=predicted_label,
        prediction_distance=distance,
        entanglement_entropy=entropy,
        verified=verified,
        transcript={
            "party": list(record.subset),
            "basis": "bell",
            "outcome": str(outcome),
            "probability": record.probability,
        },
    )


def unlock_attack(
    instance: HiddenInstance,
    pair: Sequence[int],
    rng_seed: int,
    *,
    trials: int = 1000,
    tol: float = 1e-9,
) -> AttackReport:
    """Aggregate unlock_pair over seeded trials: outcome frequencies and the
    fraction of runs whose residual matched the compose prediction."""
    counts = {str(lab): 0 for lab in BellLabel}
    verified = 0
    worst = 0.0
    sample = []
    for t in range(trials):
        result = unlock_pair(instance, pair, rng_stream(rng_seed, t), tol=tol)
        counts[str(result.outcome)] += 1
        verified += result.verified
        worst = max(worst, result.prediction_distance)
        if t < 3:
            sample.append(result.transcript)
    frac = verified / trials
    return AttackReport(
        attack="unlock",
        n_qubits=instance.n_qubits,
        trials=trials,
        seed=rng_seed,
        per_bit={"group": frac, "sign": frac},
        overall=frac,
        analytic_bound=1.0,
        notes=(
            "activation: the joined pair's Bell outcome pins the residual label "
            "via the XOR algebra; 'overall' is the verified fraction"
        ),
        transcripts_sample=sample,
        extras={
            "pair": list(resolve_subset(pair, instance.n_qubits)),
            "outcome_frequencies": {k: v / trials for k, v in sorted(counts.items())},
            "max_prediction_distance": worst,
        },
    )


@dataclass(frozen=True)
class StrategySamplerConfig:
    """Knobs for the random-LOCC strategy sampler."""

    n_strategies: int = 100
    max_depth: int | None = None  # None: measure every party
    sigma_z_mix: float = 0.25  # fraction of parity-augmented trees
    include_parity: bool = True


def _random_basis(gen: np.random.Generator) -> SingleQubitBasis:
    # uniform on the Bloch sphere
    theta = float(np.arccos(1.0 - 2.0 * gen.random()))
    phi = float(2.0 * np.pi * gen.random())
    if phi >= 2.0 * np.pi:
        phi = 0.0
    return SingleQubitBasis(theta=theta, phi=phi)


def parity_strategy(
    n: int, candidates: dict[int, DensityMatrix], gen: np.random.Generator
) -> AdaptiveStrategy:
    """All parties measure sigma_z in order; leaves guess by maximum likelihood."""
    z = SingleQubitBasis.sigma_z()

    def build(party: int, path) -> AdaptiveStrategy:
        if party > n:
            return StrategyLeaf(_ml_guess_for_path(path, n, candidates, gen))
        return StrategyNode(
            party=party,
            basis=z,
            children=(
                build(party + 1, path + [(party, z, 0)]),
                build(party + 1, path + [(party, z, 1)]),
            ),
        )

    return build(1, [])


def _ml_guess_for_path(
    path: list[tuple[int, SingleQubitBasis, int]],
    n: int,
    candidates: dict[int, DensityMatrix],
    gen: np.random.Generator,
) -> int:
    """Maximum-likelihood message for a transcript path, uniform tie-breaking."""
    if not path:
        return int(gen.integers(4))
    vec = np.array([1.0 + 0j])
    subset = []
    for party, basis, outcome in path:
        vec = np.kron(vec, basis.vectors()[outcome])
        subset.append(party)
    proj = lift_operator(np.outer(vec, vec.conj()), subset, n)
    likes = np.array(
        [float(np.einsum("ij,ji->", candidates[b].entries, proj).real) for b in range(4)]
    )
    best = likes.max()
    winners = [b for b in range(4) if likes[b] > best - 1e-12]
    return int(winners[int(gen.integers(len(winners)))])


def _sample_strategy(
    n: int,
    depth: int,
    candidates: dict[int, DensityMatrix],
    gen: np.random.Generator,
    *,
    sigma_z_bias: float,
) -> AdaptiveStrategy:
    """Random adaptive tree: parties and bases drawn per node, children sampled
    independently per outcome, maximum-likelihood guesses at the leaves."""

    def build(available: tuple[int, ...], path) -> AdaptiveStrategy:
        if len(path) >= depth or not available:
            return StrategyLeaf(_ml_guess_for_path(path, n, candidates, gen))
        party = int(available[int(gen.integers(len(available)))])
        if gen.random() < sigma_z_bias:
            basis = SingleQubitBasis.sigma_z()
        else:
            basis = _random_basis(gen)
        remaining = tuple(q for q in available if q != party)
        return StrategyNode(
            party=party,
            basis=basis,
            children=(
                build(remaining, path + [(party, basis, 0)]),
                build(remaining, path + [(party, basis, 1)]),
            ),
        )

    return build(tuple(range(1, n + 1)), [])


def random_locc_attack(
    n: int,
    config: StrategySamplerConfig,
    trials: int,
    rng_seed: int,
) -> AttackReport:
    """Monte Carlo over the sampled strategy class with a uniform prior over b.

    Frequencies aggregate across all strategies and trials; the best observed
    strategy is reported separately. The class (adaptive single-qubit
    projective trees) is a strict subclass of LOCC, so observed maxima are
    empirical, not bounds.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if config.n_strategies < 1:
        raise ValueError(f"n_strategies must be >= 1, got {config.n_strategies}")
    candidates = {b: to_dense(closed_form(n, StateLabel.from_message(b))) for b in range(4)}
    depth_cap = config.max_depth if config.max_depth is not None else n
    if not 1 <= depth_cap <= n:
        raise ValueError(f"max_depth must be in [1, {n}], got {depth_cap}")

    strategies: list[tuple[str, AdaptiveStrategy]] = []
    for s in range(config.n_strategies):
        gen = rng_stream(rng_seed, 0, s)
        if config.include_parity and s == 0:
            strategies.append(("parity", parity_strategy(n, candidates, gen)))
            continue
        if gen.random() < config.sigma_z_mix:
            kind, bias = "parity-augmented", 0.5
        else:
            kind, bias = "random", 0.0
        depth = int(gen.integers(1, depth_cap + 1))
        strategies.append((kind, _sample_strategy(n, depth, candidates, gen, sigma_z_bias=bias)))

    totals = {"group": 0, "sign": 0, "overall": 0}
    per_strategy = []
    best = None
    sample_transcripts: list = []
    for s, (kind, strat) in enumerate(strategies):
        hits = {"group": 0, "sign": 0, "overall": 0}
        for t in range(trials):
            gen = rng_stream(rng_seed, 1, s, t)
            b = int(gen.integers(4))
            guess, transcript = run_strategy(candidates[b], strat, gen)
            g_ok = (guess >> 1) == (b >> 1)
            s_ok = (guess & 1) == (b & 1)
            hits["group"] += g_ok
            hits["sign"] += s_ok
            hits["overall"] += g_ok and s_ok
            if s == 0 and t < 2:
                sample_transcripts.append({"strategy": s, "hidden": b, "guess": guess, "rounds": transcript})
        for key in totals:
            totals[key] += hits[key]
        summary = {
            "strategy": s,
            "kind": kind,
            "group": hits["group"] / trials,
            "sign": hits["sign"] / trials,
            "overall": hits["overall"] / trials,
        }
        per_strategy.append(summary)
        if best is None or summary["overall"] > best["overall"]:
            best = summary

    total_trials = trials * len(strategies)
    return AttackReport(
        attack="random-locc",
        n_qubits=n,
        trials=total_trials,
        seed=rng_seed,
        per_bit={"group": totals["group"] / total_trials, "sign": totals["sign"] / total_trials},
        overall=totals["overall"] / total_trials,
        analytic_bound=None,
        notes=(
            "adaptive single-qubit projective trees are a strict subclass of "
            "LOCC; maxima are empirical observations, not upper bounds"
        ),
        transcripts_sample=sample_transcripts,
        extras={
            "strategies": config.n_strategies,
            "trials_per_strategy": trials,
            "best_strategy": best,
            "parity_strategy": per_strategy[0] if config.include_parity else None,
        },
    )
