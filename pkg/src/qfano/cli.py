"""Command line driver: ``qfano check`` and ``qfano sweep``.

Exit status is 0 when every comparison holds, 1 when a suite found
violations and 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from qfano.channels import STANDARD_KINDS, standard_channel
from qfano.config import DEFAULT_TOLERANCES as TOL
from qfano.exchange import entanglement_fidelity, entropy_exchange
from qfano.suites import SUITES, SuiteResult, resolve_q, run_suite
from qfano.verifiers import fano_bound

EXIT_OK, EXIT_VIOLATIONS, EXIT_CONFIG = 0, 1, 2
SWEEP_HEADER = ["channel", "param", "dim", "q", "fidelity", "exchange", "fano_bound", "gap"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    trials: int = 1000
    seed: int = 0
    dims: list[int] = field(default_factory=lambda: [2, 3, 4])
    q_values: list[float] | None = None
    tol: float = TOL.verifier
    output_path: str | None = None
    workers: int = 1

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if not self.dims or any(not 2 <= d <= 8 for d in self.dims):
            raise ConfigError("dims must be a non-empty subset of [2, 8]")
        if not self.tol >= 0.0:
            raise ConfigError("tol must be nonnegative")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown or not self.suites:
            raise ConfigError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
        for name in self.suites:
            try:
                resolve_q(SUITES[name], self.q_values)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc


def fmt(x: float) -> str:
    """17 significant digits; lowercase ``inf`` for the infinite sentinel."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_value(x) -> str:
    # hand-rolled so that every float is written with exactly the ``fmt`` rule
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return '"inf"' if math.isinf(x) and x > 0 else ('"-inf"' if math.isinf(x) else fmt(x))
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def report_dict(config: RunConfig, results: Sequence[SuiteResult], timestamp: str | None = None) -> dict:
    out = {"seed": int(config.seed), "tol": float(config.tol)}
    if timestamp is not None:
        out["timestamp"] = timestamp
    out["suites"] = [
        {
            "name": r.name,
            "trials": r.trials,
            "violations": r.violations,
            "worst_gap": float(r.worst_gap),
            "failures": [{"instance": f["instance"], "lhs": float(f["lhs"]), "rhs": float(f["rhs"])} for f in r.failures],
        }
        for r in results
    ]
    return out


def dumps_report(report: dict) -> str:
    return _json_value(report) + "\n"


def run_check(config: RunConfig) -> tuple[dict, int]:
    """Run every configured suite; returns the report and the exit status.

    The report is also written to ``config.output_path`` when set.
    """
    config.validate()
    results = [
        run_suite(name, config.trials, config.seed, config.dims, config.q_values, config.tol, config.workers)
        for name in config.suites
    ]
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    report = report_dict(config, results, stamp)
    if config.output_path:
        Path(config.output_path).write_text(dumps_report(report))
    status = EXIT_VIOLATIONS if any(r.violations for r in results) else EXIT_OK
    return report, status


def sweep_state(kind: str, dim: int, state: str = "auto") -> np.ndarray:
    """Input of a sweep: maximally mixed, or the top level ``|d-1><d-1|``.

    ``auto`` picks the top level for amplitude damping (the probe that sees
    the decay) and the maximally mixed state otherwise.
    """
    if state == "auto":
        state = "excited" if kind == "amplitude_damping" else "mixed"
    if state == "mixed":
        return np.eye(dim, dtype=complex) / dim
    if state == "excited":
        rho = np.zeros((dim, dim), dtype=complex)
        rho[-1, -1] = 1.0
        return rho
    raise ConfigError(f"unknown sweep state {state!r}")


def run_sweep(
    channel_kind: str,
    param_grid: Sequence[float],
    dim: int,
    q: float,
    output_path: str | None = None,
    state: str = "auto",
) -> list[dict]:
    """Fidelity, exchange and Fano bound for each grid point of a channel family."""
    if channel_kind not in STANDARD_KINDS:
        raise ConfigError(f"unknown channel family {channel_kind!r}; choose from {STANDARD_KINDS}")
    if dim < 2:
        raise ConfigError("sweep dimension must be at least 2")
    if q < 0:
        raise ConfigError("q must be nonnegative")
    if any(not 0.0 <= p <= 1.0 for p in param_grid):
        raise ConfigError("parameter grid must lie in [0, 1]")
    rho = sweep_state(channel_kind, dim, state)
    rows = []
    for p in param_grid:
        e = standard_channel(channel_kind, dim, p)
        f = entanglement_fidelity(rho, e)
        ex = entropy_exchange(rho, e, q)
        bound = fano_bound(f, dim, dim, q)
        rows.append(
            {"channel": channel_kind, "param": p, "dim": dim, "q": q, "fidelity": f, "exchange": ex, "fano_bound": bound, "gap": bound - ex}
        )
    if output_path:
        with open(output_path, "w", newline="") as fh:
            write_sweep_csv(rows, fh)
    return rows


def write_sweep_csv(rows: Sequence[dict], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow(
            [r["channel"], fmt(r["param"]), r["dim"], fmt(r["q"])]
            + [fmt(r[k]) for k in ("fidelity", "exchange", "fano_bound", "gap")]
        )


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def parse_grid(text: str) -> list[float]:
    """``start:stop:count`` (inclusive linspace) or a comma separated list."""
    if ":" in text:
        start, stop, count = text.split(":")
        return [float(x) for x in np.linspace(float(start), float(stop), int(count))]
    return _floats(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfano", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run randomized inequality suites")
    check.add_argument("--suite", action="append", help=f"suite name or 'all' (repeatable, comma lists ok): {', '.join(SUITES)}")
    check.add_argument("--trials", type=int, default=1000, help="instances per suite")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--dims", default="2,3,4", help="comma separated dimensions in [2, 8]")
    check.add_argument("--q", default=None, help="comma separated orders (default: per-suite grid)")
    check.add_argument("--tol", type=float, default=TOL.verifier)
    check.add_argument("--out", default=None, help="JSON report path (default: stdout)")
    check.add_argument("--workers", type=int, default=1)

    sweep = sub.add_parser("sweep", help="tabulate the Fano bound across a channel family")
    sweep.add_argument("--channel", required=True, help=", ".join(STANDARD_KINDS))
    sweep.add_argument("--param-grid", default="0:1:11", help="start:stop:count or comma list")
    sweep.add_argument("--dim", type=int, default=2)
    sweep.add_argument("--q", type=float, default=1.0)
    sweep.add_argument("--state", default="auto", choices=["auto", "mixed", "excited"])
    sweep.add_argument("--out", default=None, help="CSV path (default: stdout)")
    return parser


def _config_from_args(args) -> RunConfig:
    names: list[str] = []
    for item in args.suite or ["all"]:
        names.extend(s.strip() for s in item.split(",") if s.strip())
    if "all" in names:
        names = list(SUITES)
    try:
        dims = [int(x) for x in args.dims.split(",") if x.strip()]
        qs = _floats(args.q) if args.q else None
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(names, args.trials, args.seed, dims, qs, args.tol, args.out, args.workers)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            config = _config_from_args(args)
            report, status = run_check(config)
            if not config.output_path:
                sys.stdout.write(dumps_report(report))
            for s in report["suites"]:
                print(f"{s['name']}: {s['trials']} trials, {s['violations']} violations, worst gap {fmt(s['worst_gap'])}", file=sys.stderr)
            return status
        try:
            grid = parse_grid(args.param_grid)
        except ValueError as exc:
            raise ConfigError(f"bad parameter grid: {exc}") from exc
        rows = run_sweep(args.channel, grid, args.dim, args.q, args.out, args.state)
        if not args.out:
            write_sweep_csv(rows, sys.stdout)
        return EXIT_OK
    except (ConfigError, OSError) as exc:
        print(f"qfano: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
