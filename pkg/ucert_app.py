"""
UCERT - Main Application
Command-line entry point for uniform-measurement certification.

Usage:
    python ucert_app.py certify --graph path5.edges --state ideal --epsilon 1e-4 --out report.json
    python ucert_app.py montecarlo --grid 3:auto:high 3:auto:low --trials 200 --out table.csv
    python ucert_app.py rydberg --n 9 --h 20 --mode pulses --out results.json
    python ucert_app.py count --n 4
    python ucert_app.py promise-check --generators state.stab
    python ucert_app.py replay report.json.manifest.json
"""

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src import __version__, get_config, get_logger, setup_logging
from src.cli.commands import COMMANDS, EXIT_ERROR, CommandResult
from src.database.run_ledger import RunLedger, RunManifest
from src.utils.config import Config
from src.utils.errors import UcertError


class UcertArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1; exit code 2 is reserved for a Failed verdict."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = UcertArgumentParser(
        prog="ucert",
        description="Certify graph and stabilizer states with uniform single-qubit measurements.",
    )
    parser.add_argument("--config", default=None, help="Path to config.yaml")
    parser.add_argument("--log-level", default=None, help="Override logging.level")
    sub = parser.add_subparsers(dest="command", required=True)

    certify = sub.add_parser("certify", help="Run the certification protocol")
    certify.add_argument("--graph", help="Edge-list file of the target graph")
    certify.add_argument("--generators", help="Stabilizer generator file (.stab)")
    certify.add_argument("--state", default="ideal",
                         help='"ideal" or a noise spec: depolarizing:<p>, zrot:<q>:<angle>, orthogonal:<p>')
    certify.add_argument("--records", nargs="+", help="Measurement record files, one per basis")
    certify.add_argument("--epsilon", type=float, default=None)
    certify.add_argument("--shots", type=int, default=None, help="Override shots per basis")
    certify.add_argument("--seed", type=int, default=None)
    certify.add_argument("--out", default=None, help="Report path")
    certify.add_argument("--format", choices=["json", "csv"], default="json")

    montecarlo = sub.add_parser("montecarlo", help="Certified-rate table over a fidelity grid")
    montecarlo.add_argument("--grid", nargs="+", help='Entries "N:epsilon|auto:high|low|<fidelity>"')
    montecarlo.add_argument("--trials", type=int, default=None)
    montecarlo.add_argument("--seed", type=int, default=None)
    montecarlo.add_argument("--out", default=None, help="Table path")
    montecarlo.add_argument("--format", choices=["csv", "json"], default="csv")

    for name in ("rydberg", "rydberg-sim"):
        rydberg = sub.add_parser(name, help="Simulate the Rydberg-chain experiment")
        rydberg.add_argument("--n", type=int, default=None)
        rydberg.add_argument("--h", type=float, default=None)
        rydberg.add_argument("--mode", choices=["pulses", "ideal", "ideal_state"], default=None)
        rydberg.add_argument("--interaction-range", dest="interaction_range", type=int, default=None,
                             help="Keep only couplings with |i-j| <= range")
        rydberg.add_argument("--sweep", type=float, nargs="+", help="h values for a sweep table")
        rydberg.add_argument("--out", default=None, help="Output path; a sweep table goes to <stem>_sweep.csv")
        rydberg.add_argument("--format", choices=["json", "csv"], default="json")

    count = sub.add_parser("count", help="Count independent operators for N qubits")
    count.add_argument("--n", type=int, default=None)

    promise = sub.add_parser("promise-check", help="Exact promise conditions on a stabilizer state")
    promise.add_argument("--generators", help="Stabilizer generator file (.stab)")
    promise.add_argument("--diagrams", action="store_true", help="Include the assignment diagrams")
    promise.add_argument("--out", default=None, help="JSON path")

    replay = sub.add_parser("replay", help="Re-run the command recorded in a manifest")
    replay.add_argument("manifest")

    return parser


class UcertApp:
    """
    Main UCERT application.

    Loads the configuration, sets up logging and dispatches one command.
    """

    def __init__(
        self,
        config_path: Optional[str] = None,
        log_level: Optional[str] = None,
        config: Optional[Config] = None
    ):
        """Initialize the application; an explicit Config (a replayed snapshot) wins over the file."""
        self.config = config or get_config(config_path)

        setup_logging(
            log_file=self.config.get('logging.file'),
            level=log_level or self.config.get('logging.level', 'INFO'),
            console=self.config.get('logging.console', True)
        )

        self.logger = get_logger(__name__)
        self.logger.debug(f"Loaded {self.config!r}")

    def _ledger(self) -> Optional[RunLedger]:
        path = self.config.ledger_path
        return RunLedger(path) if path else None

    def execute(self, args: argparse.Namespace, argv: List[str]) -> int:
        """
        Run one parsed command; write its manifest and ledger entry.

        Returns:
            Process exit code
        """
        start = time.perf_counter()
        manifest = RunManifest(
            command=args.command,
            argv=list(argv),
            config=self.config.snapshot(),
            seed=None,
            version=__version__,
        )
        self.logger.info(f"Running {args.command}")

        try:
            result = COMMANDS[args.command](args, self.config)
        except (UcertError, ValueError, OSError) as e:
            self.logger.error(f"{args.command} failed: {e}")
            result = CommandResult(exit_code=EXIT_ERROR)

        if result.stdout:
            print(result.stdout)

        manifest.seed = result.seed
        manifest.config["resolved"] = result.resolved
        for path in result.outputs:
            manifest.record_output(path)
        manifest.finish(start, result.exit_code)

        for path in result.outputs:
            manifest.write(path)
        ledger = self._ledger()
        if ledger is not None:
            run_id = ledger.add(manifest)
            ledger.close()
            self.logger.debug(f"Ledger entry {run_id}")

        self.logger.info(f"{args.command} finished with exit code {result.exit_code} "
                         f"in {manifest.duration_seconds:.2f}s")
        return result.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the application."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    config = None
    if args.command == "replay":
        manifest_path = args.manifest
        try:
            recorded = RunManifest.load(manifest_path)
        except UcertError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_ERROR
        argv = recorded.argv
        args = parser.parse_args(argv)
        config = Config.from_snapshot(recorded.config, source=manifest_path)

    app = UcertApp(config_path=args.config, log_level=args.log_level, config=config)
    return app.execute(args, argv)


if __name__ == "__main__":
    sys.exit(main())
