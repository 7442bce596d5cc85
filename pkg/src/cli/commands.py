"""
UCERT - Command implementations

Each command takes the parsed arguments and the loaded Config and returns a
CommandResult; the application wraps it with logging, manifests and the
ledger. Exit codes: 0 success or Certified, 2 Failed (a scientific verdict),
1 usage or data error.
"""

import json
from argparse import Namespace
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from ..certification.algorithm import (
    CertificationConfig,
    RecordReplaySampler,
    Verdict,
    certify,
)
from ..certification.monte_carlo import default_epsilon, monte_carlo_validation, parse_grid
from ..certification.routing import certify_stabilizer_state
from ..database.record_store import RecordStore
from ..operators.pauli import count_independent_operators
from ..promise.conditions import PromiseVerdict, certify_under_promise, evaluate_conditions
from ..promise.diagrams import classify_assignments
from ..rydberg.chain import RydbergChainConfig
from ..rydberg.experiment import h_sweep, measure_observables
from ..rydberg.schedules import MEASUREMENT_LABELS, measurement_schedule, preparation_schedule
from ..states.graphs import GraphSpec
from ..states.noise import apply_noise, parse_noise_model
from ..states.stabilizer import StabilizerTableau, stabilizer_state_vector
from ..states.statevector import EnsembleSampler, StateVector, prepare_graph_state
from ..utils.config import Config
from ..utils.errors import ArgumentError
from ..utils.io import atomic_write_json, atomic_write_text
from ..utils.logger import get_logger
from ..utils.seeding import derive_seed

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


@dataclass
class CommandResult:
    """What a command produced: exit code, stdout text, written files, resolved settings."""
    exit_code: int
    stdout: str = ""
    outputs: List[Path] = field(default_factory=list)
    seed: Optional[int] = None
    resolved: Dict[str, Any] = field(default_factory=dict)


def _json_text(payload: Dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _resolve_seed(args: Namespace, config: Config) -> int:
    return args.seed if getattr(args, "seed", None) is not None else config.default_seed


def _write_json(out: Optional[str], payload: Dict, outputs: List[Path]):
    if out:
        outputs.append(atomic_write_json(out, payload))


def _write_frame(out: Optional[str], frame: pd.DataFrame, outputs: List[Path]):
    if out:
        outputs.append(atomic_write_text(out, frame.to_csv(index=False, lineterminator="\n")))


def _write_payload(out: Optional[str], payload: Dict, fmt: str, outputs: List[Path]):
    """JSON as is, or CSV as one row with nested keys flattened (``thresholds.u``)."""
    if fmt == "csv":
        _write_frame(out, pd.json_normalize(payload), outputs)
    else:
        _write_json(out, payload, outputs)


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def _target_state(graph: Optional[GraphSpec], tableau: Optional[StabilizerTableau], config: Config) -> StateVector:
    if tableau is not None:
        return StateVector(stabilizer_state_vector(tableau, config.statevector_max_qubits))
    return prepare_graph_state(graph, config.statevector_max_qubits)


def _build_sampler(args: Namespace, target: StateVector, seed: int, config: Config):
    """EnsembleSampler over the ideal or noisy target, or a replay of record files."""
    if args.records:
        records = RecordStore().load_many(args.records)
        return RecordReplaySampler(records)

    rho = target
    if args.state and args.state != "ideal":
        model = parse_noise_model(args.state)
        rho = apply_noise(target, model, seed=derive_seed(seed, "certify", "noise"))
    return EnsembleSampler(
        rho,
        mode=config.get("certification.sampler_mode", "auto"),
        workers=config.num_workers,
    )


def cmd_certify(args: Namespace, config: Config) -> CommandResult:
    """
    Certify a graph state (``--graph``) or a stabilizer state (``--generators``).

    The state comes from ``--state`` ("ideal" or a noise spec such as
    "orthogonal:0.5") or from ``--records`` files, one per basis.
    """
    if not args.graph and not args.generators:
        raise ArgumentError("certify needs --graph or --generators")
    graph = GraphSpec.load(args.graph) if args.graph else None
    tableau = StabilizerTableau.load(args.generators) if args.generators else None
    n = graph.n_vertices if graph is not None else tableau.n_qubits
    seed = _resolve_seed(args, config)

    target = _target_state(graph, tableau, config)
    sampler = _build_sampler(args, target, seed, config)
    shots = args.shots
    if args.records and shots is None:
        shots = sampler.shots

    if args.epsilon is not None:
        epsilon = args.epsilon
    elif graph is None:
        epsilon = float(config.get("certification.stabilizer_epsilon", 0.05))
    else:
        epsilon = default_epsilon(n)

    if tableau is not None:
        report = certify_stabilizer_state(sampler, tableau, epsilon, seed=seed, shots=shots, graph=graph)
    else:
        cert_config = CertificationConfig(epsilon=epsilon, target=graph, seed=seed, shots_per_basis=shots)
        report = certify(sampler, cert_config)

    payload = report.to_dict()
    outputs: List[Path] = []
    _write_payload(args.out, payload, args.format, outputs)

    certified = report.verdict == Verdict.CERTIFIED
    return CommandResult(
        exit_code=EXIT_OK if certified else EXIT_FAILED,
        stdout=_json_text(payload),
        outputs=outputs,
        seed=seed,
        resolved={"n": n, "epsilon": epsilon, "shots": shots, "state": args.state or "ideal"},
    )


# ---------------------------------------------------------------------------
# montecarlo
# ---------------------------------------------------------------------------

def cmd_montecarlo(args: Namespace, config: Config) -> CommandResult:
    """Certified-rate table over a grid of (N, ε, fidelity) points."""
    grid = args.grid if args.grid else config.get("montecarlo.grid", [])
    points = parse_grid(grid)
    trials = args.trials if args.trials is not None else int(config.get("montecarlo.trials", 200))
    seed = _resolve_seed(args, config)

    table = monte_carlo_validation(
        points,
        trials=trials,
        seed=seed,
        workers=config.num_workers,
        show_progress=config.get("montecarlo.show_progress", True),
    )
    outputs: List[Path] = []
    if args.format == "json":
        _write_json(args.out, json.loads(table.to_json(orient="records")), outputs)
    else:
        _write_frame(args.out, table, outputs)

    broken = table["assertion_holds"].eq(False).any()
    if broken:
        logger.warning("At least one grid point contradicts the expected certified rate")
    return CommandResult(
        exit_code=EXIT_FAILED if broken else EXIT_OK,
        stdout=table.to_string(index=False),
        outputs=outputs,
        seed=seed,
        resolved={"grid": list(grid), "trials": trials},
    )


# ---------------------------------------------------------------------------
# rydberg
# ---------------------------------------------------------------------------

def _schedule_echo(h: float, pulse_table: Optional[Dict]) -> Dict:
    echo = {"prepare": preparation_schedule(h).to_dict()}
    for label in MEASUREMENT_LABELS:
        echo[label] = measurement_schedule(label, h, pulse_table).to_dict()
    return echo


def cmd_rydberg(args: Namespace, config: Config) -> CommandResult:
    """
    Simulate the chain experiment at one h, and optionally sweep h.

    The sweep table goes next to ``--out`` as ``<stem>_sweep.csv``.
    """
    n = args.n if args.n is not None else int(config.get("rydberg.n_sites", 9))
    h = args.h if args.h is not None else float(config.get("rydberg.h", 20.0))
    mode = args.mode or config.get("rydberg.mode", "pulses")
    pulse_table = config.get("rydberg.measurement_pulses")
    chain = RydbergChainConfig(
        n_sites=n,
        h=h,
        c6=float(config.get("rydberg.c6", 1.0)),
        interaction_range=args.interaction_range,
        max_sites=config.dense_dynamics_max_sites,
    )
    chain.require_odd()

    result = measure_observables(chain, mode=mode, pulse_table=pulse_table)
    payload = result.to_dict()
    payload["interaction_range"] = args.interaction_range
    payload["schedules"] = _schedule_echo(h, pulse_table)

    outputs: List[Path] = []
    if args.format == "csv":
        flat = {k: v for k, v in payload.items() if k != "schedules"}
        _write_frame(args.out, pd.json_normalize(flat), outputs)
    else:
        _write_json(args.out, payload, outputs)

    stdout = _json_text(payload)
    if args.sweep:
        table = h_sweep(
            chain, args.sweep, mode=mode, pulse_table=pulse_table,
            workers=config.num_workers, show_progress=config.get("rydberg.show_progress", True),
        )
        if args.out:
            out = Path(args.out)
            _write_frame(str(out.with_name(f"{out.stem}_sweep.csv")), table, outputs)
        stdout += "\n" + table.to_string(index=False)

    return CommandResult(
        exit_code=EXIT_OK,
        stdout=stdout,
        outputs=outputs,
        resolved={"n": n, "h": h, "mode": mode, "sweep": list(args.sweep or [])},
    )


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------

def cmd_count(args: Namespace, config: Config) -> CommandResult:
    """Number of independent operators reachable with uniform measurements on N qubits."""
    if args.n is None:
        raise ArgumentError("count needs --n")
    total = count_independent_operators(args.n)
    return CommandResult(exit_code=EXIT_OK, stdout=str(total), resolved={"n": args.n})


# ---------------------------------------------------------------------------
# promise-check
# ---------------------------------------------------------------------------

def cmd_promise_check(args: Namespace, config: Config) -> CommandResult:
    """
    Exact promise conditions on a stabilizer state from ``--generators``.

    Exit 0 when the state is the even-N path graph state, 2 otherwise.
    """
    if not args.generators:
        raise ArgumentError("promise-check needs --generators")
    tableau = StabilizerTableau.load(args.generators)
    conditions = evaluate_conditions(tableau)
    verdict = certify_under_promise(tableau)

    payload = {"conditions": conditions.to_dict(), "verdict": verdict.value}
    if args.diagrams:
        payload["diagrams"] = [d.to_dict() for d in classify_assignments(tableau.n_qubits)]

    outputs: List[Path] = []
    _write_json(args.out, payload, outputs)
    return CommandResult(
        exit_code=EXIT_OK if verdict == PromiseVerdict.IS_TARGET else EXIT_FAILED,
        stdout=_json_text(payload),
        outputs=outputs,
        resolved={"n": tableau.n_qubits},
    )


COMMANDS = {
    "certify": cmd_certify,
    "montecarlo": cmd_montecarlo,
    "rydberg": cmd_rydberg,
    "rydberg-sim": cmd_rydberg,
    "count": cmd_count,
    "promise-check": cmd_promise_check,
}
