"""Command-line front end: build and dump states, run the verification
suite, and run attacks, emitting machine-readable reports.

Exit codes: 0 = pass, 1 = property/attack assertion failure, 2 = usage error.
Flags may be overridden by QHIDE_* environment variables (e.g. QHIDE_SEED).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from itertools import combinations

from . import __version__
from .analysis import (
    Bipartition,
    PropertyReport,
    check_maximal_ignorance,
    check_permutation_symmetry,
    conjugate_pauli,
    find_pauli_connection,
    ppt_min_eigenvalue,
)
from .family import (
    GhzEnsemble,
    StateLabel,
    closed_form,
    ensemble_from_dict,
    ensemble_to_dict,
    recursion_chain,
    sparse_overlap,
    to_dense,
)
from .linalg import DENSE_QUBIT_CAP, trace_distance
from .measurement import RNG_ALGORITHM
from .protocols import (
    StrategySamplerConfig,
    coalition_attack,
    hide,
    parity_attack,
    random_locc_attack,
    unlock_attack,
)

ATTACK_NAMES = ("parity", "coalition", "unlock", "random-locc")


@dataclass
class RunConfig:
    """Resolved CLI invocation."""

    command: str
    n_qubits: int = 4
    label: StateLabel | None = None
    bits: int = 0
    seed: int = 0
    trials: int | None = None
    tolerance: float = 1e-10
    representation: str = "sparse"
    out: str | None = None
    fmt: str = "json"
    attack: str | None = None
    coalition: tuple[int, ...] = ()
    pair: tuple[int, ...] = ()
    dump: str | None = None

    def __post_init__(self):
        if self.n_qubits < 4 or self.n_qubits % 2:
            raise ValueError(f"n must be even and >= 4, got {self.n_qubits}")
        if self.representation == "dense" and self.n_qubits > DENSE_QUBIT_CAP:
            raise ValueError(
                f"dense representation needs n <= {DENSE_QUBIT_CAP}, got {self.n_qubits}"
            )
        if self.trials is not None and self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


def _report_envelope(config: RunConfig, body: dict) -> dict:
    body = dict(body)
    body.setdefault("tool_version", __version__)
    body.setdefault("rng_algorithm", RNG_ALGORITHM)
    body.setdefault("tolerance", config.tolerance)
    return body


def _write_output(config: RunConfig, payload: dict, csv_row: dict | None = None) -> None:
    """Serialize to the output path (write-then-rename) or stdout."""
    if config.fmt == "csv" and csv_row is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(csv_row))
        writer.writeheader()
        writer.writerow(csv_row)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(config.out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qhide-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, config.out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_build(config: RunConfig) -> int:
    label = config.label if config.label is not None else StateLabel.from_message(config.bits)
    ensemble = closed_form(config.n_qubits, label)
    record = ensemble_to_dict(ensemble)
    if config.representation == "dense":
        dense = to_dense(ensemble).entries
        record["dense"] = {"re": dense.real.tolist(), "im": dense.imag.tolist()}
    _write_output(config, _report_envelope(config, record))
    return 0


def _load_dump_states(config: RunConfig) -> dict[StateLabel, GhzEnsemble]:
    states = {lab: closed_form(config.n_qubits, lab) for lab in StateLabel}
    if config.dump is None:
        return states
    with open(config.dump) as handle:
        payload = json.load(handle)
    records = payload if isinstance(payload, list) else [payload]
    for rec in records:
        ens = ensemble_from_dict(rec)
        if ens.n_qubits != config.n_qubits:
            raise ValueError(
                f"dump is for n={ens.n_qubits}, but --qubits is {config.n_qubits}"
            )
        states[ens.label] = ens
    return states


_EXPECTED_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _verify_reports(config: RunConfig) -> list[PropertyReport]:
    n, tol = config.n_qubits, config.tolerance
    ensembles = _load_dump_states(config)
    reports: list[PropertyReport] = []

    target = 2.0 ** -(n - 2)
    for a in StateLabel:
        for b in StateLabel:
            if b.message < a.message:
                continue
            value = sparse_overlap(ensembles[a], ensembles[b])
            expected = target if a == b else 0.0
            reports.append(
                PropertyReport(
                    name=f"orthogonality_overlap_{a}_{b}",
                    label=f"{a}|{b}",
                    n_qubits=n,
                    deviation=abs(value - expected),
                    tolerance=tol,
                )
            )

    if n > DENSE_QUBIT_CAP:
        return reports

    dense = {lab: to_dense(ens) for lab, ens in ensembles.items()}

    if n <= 8:
        chain = recursion_chain(n)
        for lab in StateLabel:
            reports.append(
                PropertyReport(
                    name="recursion_equivalence",
                    label=str(lab),
                    n_qubits=n,
                    deviation=trace_distance(chain[lab], dense[lab]),
                    tolerance=tol,
                )
            )

    for lab in StateLabel:
        for i, j in combinations(range(1, n + 1), 2):
            rep = check_permutation_symmetry(dense[lab], (i, j), label=str(lab), tolerance=tol)
            reports.append(rep)
        for q in range(1, n + 1):
            reports.append(
                check_maximal_ignorance(dense[lab], q, label=str(lab), tolerance=tol)
            )
        for pair in combinations(range(1, n + 1), 2):
            rest = tuple(q for q in range(1, n + 1) if q not in pair)
            min_eig = ppt_min_eigenvalue(dense[lab], Bipartition(rest, pair))
            reports.append(
                PropertyReport(
                    name=f"ppt_pair_cut_{pair[0]}_{pair[1]}",
                    label=str(lab),
                    n_qubits=n,
                    deviation=max(0.0, -min_eig),
                    tolerance=tol,
                )
            )

    for a in StateLabel:
        for b in StateLabel:
            found = find_pauli_connection(dense[a], dense[b], tolerance=tol)
            expected = _EXPECTED_LETTER[
                (a.group_bit ^ b.group_bit, a.sign_bit ^ b.sign_bit)
            ]
            if found is None or set(found) - {"I"} != ({expected} - {"I"}):
                deviation = float("inf")
            else:
                deviation = trace_distance(conjugate_pauli(dense[a], found), dense[b])
            reports.append(
                PropertyReport(
                    name="pauli_connection",
                    label=f"{a}->{b}",
                    n_qubits=n,
                    deviation=deviation,
                    tolerance=tol,
                )
            )
    return reports


def cmd_verify(config: RunConfig) -> int:
    reports = _verify_reports(config)
    failed = [r for r in reports if not r.passed]
    payload = _report_envelope(
        config,
        {
            "n": config.n_qubits,
            "reports": [r.to_dict() for r in reports],
            "checks": len(reports),
            "failed": len(failed),
            "pass": not failed,
        },
    )
    _write_output(config, payload)
    return 0 if not failed else 1


def cmd_attack(config: RunConfig) -> int:
    name = config.attack
    if name not in ATTACK_NAMES:
        raise ValueError(f"unknown attack {name!r}; expected one of {ATTACK_NAMES}")
    if name == "parity":
        instance = hide(config.bits, config.n_qubits, config.representation)
        report = parity_attack(instance, config.seed, trials=config.trials or 10_000)
    elif name == "coalition":
        if not config.coalition:
            raise ValueError("coalition attack needs --coalition (e.g. --coalition 1,2,3)")
        instance = hide(config.bits, config.n_qubits, "dense")
        report = coalition_attack(instance, config.coalition)
    elif name == "unlock":
        if len(config.pair) != 2:
            raise ValueError("unlock attack needs --pair i,j")
        instance = hide(config.bits, config.n_qubits, "dense")
        report = unlock_attack(
            instance, config.pair, config.seed, trials=config.trials or 1000
        )
    else:
        report = random_locc_attack(
            config.n_qubits,
            StrategySamplerConfig(),
            config.trials or 50,
            config.seed,
        )
    payload = _report_envelope(config, report.to_dict())
    csv_row = {
        "attack": report.attack,
        "n": report.n_qubits,
        "trials": report.trials,
        "seed": report.seed,
        "group": report.per_bit.get("group"),
        "sign": report.per_bit.get("sign"),
        "overall": report.overall,
        "analytic_bound": report.analytic_bound,
    }
    _write_output(config, payload, csv_row)
    return 0


def _env(name: str, fallback=None):
    return os.environ.get(f"QHIDE_{name.upper()}", fallback)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhide", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qhide {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, repr_default: str = "sparse"):
        p.add_argument("--qubits", type=int, default=int(_env("qubits", 4)))
        p.add_argument("--label", type=str, default=_env("label"))
        p.add_argument("--bits", type=int, default=int(_env("bits", 0)))
        p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
        p.add_argument("--trials", type=int, default=_env("trials"))
        p.add_argument("--tol", type=float, default=float(_env("tol", 1e-10)))
        p.add_argument(
            "--repr",
            choices=("dense", "sparse"),
            default=_env("repr", repr_default),
            dest="representation",
        )
        p.add_argument("--out", type=str, default=_env("out"))
        p.add_argument("--format", choices=("json", "csv"), default=_env("format", "json"))

    p_build = sub.add_parser("build", help="build a family state and dump it")
    common(p_build)

    p_verify = sub.add_parser("verify", help="run the structural property suite")
    common(p_verify)
    p_verify.add_argument("--dump", type=str, default=None,
                          help="verify ensembles loaded from a dump file instead")

    p_attack = sub.add_parser("attack", help="run an attack simulator")
    p_attack.add_argument("name", choices=ATTACK_NAMES)
    common(p_attack)
    p_attack.add_argument("--coalition", type=_int_list, default=_env("coalition", ""))
    p_attack.add_argument("--pair", type=_int_list, default=_env("pair", ""))

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        label = StateLabel.parse(args.label) if getattr(args, "label", None) else None
        config = RunConfig(
            command=args.command,
            n_qubits=args.qubits,
            label=label,
            bits=args.bits,
            seed=args.seed,
            trials=int(args.trials) if args.trials is not None else None,
            tolerance=args.tol,
            representation=args.representation,
            out=args.out,
            fmt=args.format,
            attack=getattr(args, "name", None),
            coalition=_int_list(args.coalition) if isinstance(getattr(args, "coalition", ()), str) else getattr(args, "coalition", ()),
            pair=_int_list(args.pair) if isinstance(getattr(args, "pair", ()), str) else getattr(args, "pair", ()),
            dump=getattr(args, "dump", None),
        )
        if config.command == "build":
            return cmd_build(config)
        if config.command == "verify":
            return cmd_verify(config)
        return cmd_attack(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    raise SystemExit(main())
