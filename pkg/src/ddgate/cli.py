"""``ddgate`` command line: symbolic checks and seeded fidelity runs.

Commands:
    verify   symbolic cancellation and schedule checks
    table2   DD and no-DD fidelities for u3 and ue1 under three pulse models
    run      one fidelity estimate

Exit codes are 0 on success, 1 when a verification fails and 2 for bad
configuration.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import IO, Optional

import orjson

from . import __version__
from .config import PULSE_MODELS, ExperimentConfig, load_config
from .engine import Integrator, simulate
from .exceptions import ConfigError, DDGateError, VerificationError
from .fidelity import FidelityReport, write_report_csv
from .model import GATE_NAMES, GateKind, target_hamiltonian
from .noise import RngStream
from .pauli import PauliString, e2_subset, error_set
from .runner import Cell, noise_for_trial, run_cells, table2_cells
from .sequence import (
    CYCLE_INTERVALS,
    build_full_cycle,
    build_nested_cycle,
    build_x_sequence,
    build_z_sequence,
    coupling_schedule,
    first_order_sum,
    frames_agree,
    schedule_mismatches,
    xy4_preset,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2

FIDELITY_DEFINITION = "mean over Haar-random pure states of |<psi_ideal|psi_actual>|^2"
ZETA_SAMPLING = "independent over-rotation per single-qubit factor of every pulse"

# flag -> config field
_CONFIG_FLAGS = {
    "gate": "gate",
    "scheme": "scheme",
    "pulse_model": "pulse_model",
    "pulse_mean": "pulse_mean",
    "pulse_std": "pulse_std",
    "states": "n_states",
    "cycles": "n_cycles",
    "seed": "seed",
    "noise_lo": "noise_lo",
    "noise_hi": "noise_hi",
    "segments": "segments_per_cycle",
    "integrator": "integrator",
    "workers": "workers",
    "random_sign": "random_sign",
    "shared_noise": "shared_noise",
}


def _cancelled(seq, errors) -> tuple[list[PauliString], list[PauliString]]:
    done, left = [], []
    for e in errors:
        (done if first_order_sum(seq, e) == 0 else left).append(e)
    return done, left


def _verify_full(corrupt_step: Optional[int], out: IO[str]) -> list[str]:
    failures = []
    errors = error_set()
    seq = build_full_cycle()
    done, left = _cancelled(seq, errors)
    failures += [f"error operator {e} not cancelled over the full cycle" for e in left]

    if not frames_agree(build_nested_cycle(), seq):
        failures.append("nested and simplified cycles have different frames")

    verified = 0
    for kind in GateKind:
        sched = coupling_schedule(kind)
        if corrupt_step is not None:
            sched = sched.corrupted(corrupt_step)
        bad = schedule_mismatches(seq, sched, target_hamiltonian(kind, 1.0))
        if bad:
            steps = ", ".join(str(k) for k in bad)
            failures.append(f"schedule {kind.label} ({kind.value}) fails at step {steps}")
        else:
            verified += 1

    xy4_done, _ = _cancelled(xy4_preset(), [PauliString(c) for c in "XYZ"])
    if len(xy4_done) != 3:
        failures.append("xy4 leaves single-qubit errors uncancelled")

    out.write(
        f"{len(done)}/{len(errors)} error operators cancelled; "
        f"{verified}/{len(GateKind)} schedules verified\n"
    )
    return failures


def _verify_single_axis(name: str, out: IO[str]) -> list[str]:
    errors = error_set()
    if name == "x":
        seq, expected = build_x_sequence(), set(e2_subset())
    else:
        seq = build_z_sequence()
        expected = {PauliString(s) for s in ("ZI", "IZ", "ZZ")}
    done, left = _cancelled(seq, errors)
    out.write(f"{name} sequence: {len(done)}/{len(errors)} error operators cancelled\n")
    out.write(f"surviving: {' '.join(str(e) for e in left)}\n")
    if set(left) != expected:
        return [f"{name} sequence leaves {sorted(map(str, left))}, expected {sorted(map(str, expected))}"]
    return []


def _verify_xy4(out: IO[str]) -> list[str]:
    errors = [PauliString(c) for c in "XYZ"]
    done, left = _cancelled(xy4_preset(), errors)
    out.write(f"{len(done)}/{len(errors)} single-qubit errors cancelled\n")
    return [f"xy4 leaves {e} uncancelled" for e in left]


def cmd_verify(args: argparse.Namespace, out: IO[str]) -> int:
    if args.corrupt_step is not None and not 1 <= args.corrupt_step <= CYCLE_INTERVALS:
        raise ConfigError(f"--corrupt-step must lie in 1..{CYCLE_INTERVALS}", "corrupt_step")
    if args.sequence == "full":
        failures = _verify_full(args.corrupt_step, out)
    elif args.sequence == "xy4":
        failures = _verify_xy4(out)
    else:
        failures = _verify_single_axis(args.sequence, out)
    if failures:
        raise VerificationError(f"{len(failures)} check(s) failed", failures)
    return EXIT_OK


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then ``--config`` file, then explicit flags."""
    config = ExperimentConfig()
    if args.config:
        config = load_config(args.config)
    overrides = {field: getattr(args, flag) for flag, field in _CONFIG_FLAGS.items()}
    return config.replace(**overrides)


def _write_meta(path: Path, command: str, config: ExperimentConfig) -> None:
    meta = {
        "command": command,
        "version": __version__,
        "fidelity": FIDELITY_DEFINITION,
        "zeta_sampling": ZETA_SAMPLING,
        "config": config.to_dict(),
    }
    path.with_name(path.name + ".meta.json").write_bytes(
        orjson.dumps(meta, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)
    )


def _emit(rows: list[list[str]], args: argparse.Namespace, out: IO[str], config: ExperimentConfig) -> None:
    if args.output:
        path = Path(args.output)
        with open(path, "w", newline="") as f:
            write_report_csv(rows, f)
        _write_meta(path, args.command, config)
        logger.info("wrote %d rows to %s", len(rows), path)
    else:
        write_report_csv(rows, out)


def _row(cell: Cell, report: FidelityReport) -> list[str]:
    gate, scheme, model, n_cycles, seed = cell.labels
    return report.csv_row(gate, scheme, model, n_cycles, seed)


def cmd_table2(args: argparse.Namespace, out: IO[str]) -> int:
    config = build_config(args)
    cells = table2_cells(config)
    reports = run_cells(cells, config.workers)
    _emit([_row(c, r) for c, r in zip(cells, reports)], args, out, config)
    return EXIT_OK


def cmd_run(args: argparse.Namespace, out: IO[str]) -> int:
    config = build_config(args)
    cell = Cell(config)
    report = run_cells([cell], config.workers)[0]
    _emit([_row(cell, report)], args, out, config)

    if args.trajectory or args.trace:
        plan = config.plan()
        trajectory = noise_for_trial(config, plan, 0)
        if args.trajectory:
            trajectory.to_csv(args.trajectory)
        if args.trace:
            result = simulate(plan, trajectory, RngStream(config.seed, 0, "zeta"), trace=True)
            result.write_trace_csv(args.trace)
    return EXIT_OK


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--gate", choices=sorted(GATE_NAMES.values()))
    p.add_argument("--scheme", choices=["none", "dd"])
    p.add_argument("--pulse-model", choices=PULSE_MODELS)
    p.add_argument("--pulse-mean", type=float, help="custom model mean over-rotation (rad)")
    p.add_argument("--pulse-std", type=float, help="custom model std (rad)")
    p.add_argument("--states", type=int, help="random initial states")
    p.add_argument("--cycles", type=int, help="DD cycles per gate")
    p.add_argument("--seed", type=int)
    p.add_argument("--noise-lo", type=float, help="lower noise bound (MHz)")
    p.add_argument("--noise-hi", type=float, help="upper noise bound (MHz)")
    p.add_argument("--segments", type=int, help="noise segments per cycle")
    p.add_argument("--integrator", choices=[i.value for i in Integrator])
    p.add_argument("--workers", type=int, help="worker threads")
    p.add_argument("--random-sign", action="store_const", const=True)
    p.add_argument("--shared-noise", action="store_const", const=True)
    p.add_argument("--output", help="CSV path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="ddgate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="symbolic checks")
    verify.add_argument("--sequence", choices=["full", "x", "z", "xy4"], default="full")
    verify.add_argument("--corrupt-step", type=int, help="flip the coupling sign of this step")
    verify.set_defaults(handler=cmd_verify)

    table2 = sub.add_parser("table2", parents=[common], help="DD and no-DD fidelity grid")
    _add_experiment_flags(table2)
    table2.set_defaults(handler=cmd_table2)

    run = sub.add_parser("run", parents=[common], help="single fidelity estimate")
    _add_experiment_flags(run)
    run.add_argument("--trajectory", help="write the trial-0 noise trajectory CSV here")
    run.add_argument("--trace", help="write the trial-0 per-interval trace CSV here")
    run.set_defaults(handler=cmd_run)
    return parser


def main(argv: Optional[list[str]] = None, out: Optional[IO[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    out = out or sys.stdout
    try:
        return args.handler(args, out)
    except VerificationError as e:
        for failure in e.failures:
            print(f"FAIL: {failure}", file=sys.stderr)
        out.write(f"verification failed: {'; '.join(e.failures)}\n")
        return EXIT_VERIFY
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DDGateError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
