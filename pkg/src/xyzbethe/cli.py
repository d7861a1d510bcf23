"""Command-line front end.

Commands: solve-xyz, solve-xxz, diag, verify, limit-scan, export-table.
Exit codes: 0 success, 2 usage or configuration error, 3 verification
failure (incomplete spectrum or failed match).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .baesolver import SolverConfig, multi_start_solve
from .errors import XYZBetheError
from .expressions import parse_complex
from .lattice import ModelParams, exact_spectrum, spectrum_to_json
from .tqverify import match_spectrum
from .xxz import (
    XXZParams,
    homotopy_correspondence,
    xxz_exact_spectrum,
    xxz_solve,
)
from . import reports

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3

PROBE_SAMPLES = [0.2371 + 0.0193j, 0.3139 - 0.0271j, 0.11 + 0.07j]


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _load_config_file(path: str) -> dict:
    """Flat key=value file; later command-line flags override these."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, val = line.split("=", 1)
        values[key.strip().replace("-", "_")] = val.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xyzbethe",
        description="Bethe ansatz solver and spectrum verifier for the "
                    "periodic spin-1/2 XYZ chain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, xxz=False):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--n", type=int, help="chain length (even)")
        if xxz:
            p.add_argument("--gamma", help="anisotropy, e.g. 'i*pi^2/10'")
        else:
            p.add_argument("--tau", help="modular parameter, e.g. '0.6i'")
            p.add_argument("--eta", help="crossing parameter, e.g. 'pi/10'")
        p.add_argument("--beta-range", type=int, default=None)
        p.add_argument("--starts", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", help="output path base (no extension)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--require-complete", action="store_true")

    add_common(sub.add_parser("solve-xyz", help="solve the elliptic equations"))
    p_xxz = sub.add_parser("solve-xxz", help="solve the trigonometric equations")
    add_common(p_xxz, xxz=True)
    p_xxz.add_argument("--m-range", help="restrict phantom counts, e.g. 0..2")

    p_diag = sub.add_parser("diag", help="dense diagonalization oracle")
    add_common(p_diag)
    p_diag.add_argument("--gamma", help="use the trigonometric model instead")

    p_ver = sub.add_parser("verify", help="match a solutions file against ED")
    add_common(p_ver)
    p_ver.add_argument("--solutions", help="solutions JSON path")

    p_scan = sub.add_parser("limit-scan",
                            help="continue solutions toward large Im tau")
    add_common(p_scan)
    p_scan.add_argument("--target-im-tau", type=float, default=12.0)
    p_scan.add_argument("--growth", type=float, default=1.15)

    p_tab = sub.add_parser("export-table",
                           help="solve and print an aligned table")
    add_common(p_tab)
    p_tab.add_argument("--gamma", help="use the trigonometric model instead")
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    file_values = _load_config_file(args.config)
    converters = {"n": int, "beta_range": int, "starts": int, "seed": int,
                  "threads": int, "tol": float, "target_im_tau": float,
                  "growth": float,
                  "require_complete": lambda s: s.lower() in ("1", "true", "yes")}
    for key, raw in file_values.items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        current = getattr(args, key)
        if current in (None, False):  # flags beat the file
            setattr(args, key, converters.get(key, str)(raw))


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    kwargs = {}
    if args.starts is not None:
        kwargs["n_starts"] = args.starts
        kwargs["n_deflation_starts"] = max(60, args.starts // 2)
    if args.seed is not None:
        kwargs["rng_seed"] = args.seed
    if args.tol is not None:
        kwargs["newton_tol"] = args.tol
    if args.beta_range is not None:
        kwargs["beta_range"] = args.beta_range
    return SolverConfig(**kwargs)


def _limit_threads(args: argparse.Namespace):
    if args.threads is None:
        return None
    try:
        from threadpoolctl import threadpool_limits
        return threadpool_limits(limits=args.threads)
    except ImportError:
        log.warning("threadpoolctl unavailable; --threads ignored")
        return None


def _model_params(args: argparse.Namespace) -> ModelParams:
    if args.n is None or args.tau is None or args.eta is None:
        raise ValueError("--n, --tau and --eta are required")
    return ModelParams(N=args.n, tau=parse_complex(args.tau),
                       eta=parse_complex(args.eta))


def _xxz_params(args: argparse.Namespace) -> XXZParams:
    if args.n is None or args.gamma is None:
        raise ValueError("--n and --gamma are required")
    return XXZParams(N=args.n, gamma=parse_complex(args.gamma))


def _write_outputs(base: str | None, json_text: str, csv_text: str,
                   fmt: str) -> None:
    if base is None:
        print(csv_text if fmt == "csv" else json_text, end="")
        return
    Path(base + ".json").write_text(json_text)
    Path(base + ".csv").write_text(csv_text)


def cmd_solve_xyz(args: argparse.Namespace) -> int:
    params = _model_params(args)
    config = _solver_config(args)
    solutions = multi_start_solve(params, config)
    _write_outputs(args.out, reports.solutions_to_json(solutions),
                   reports.solutions_to_csv(solutions), args.format)
    print(f"found {len(solutions)} solutions "
          f"(dimension {params.dim})", file=sys.stderr)
    if args.require_complete:
        spectrum = exact_spectrum(params, PROBE_SAMPLES)
        report = match_spectrum(solutions, spectrum, params, tol=1e-5)
        print(report.summary(), file=sys.stderr)
        if not report.complete:
            return EXIT_VERIFY
    return EXIT_OK


def cmd_solve_xxz(args: argparse.Namespace) -> int:
    params = _xxz_params(args)
    config = _solver_config(args)
    solutions = xxz_solve(params, config)
    if getattr(args, "m_range", None):
        lo, hi = (int(x) for x in args.m_range.split(".."))
        solutions = [s for s in solutions if lo <= s.phantom_count <= hi]
    _write_outputs(args.out, reports.xxz_solutions_to_json(solutions),
                   reports.xxz_solutions_to_csv(solutions), args.format)
    print(f"found {len(solutions)} solutions", file=sys.stderr)
    if args.require_complete:
        spectrum = xxz_exact_spectrum(params, PROBE_SAMPLES)
        got = sorted((complex(s.energy) for s in solutions),
                     key=lambda z: (z.real, z.imag))
        ref = sorted((e.energy for e in spectrum),
                     key=lambda z: (z.real, z.imag))
        gap = (max(abs(a - b) for a, b in zip(got, ref))
               if len(got) == len(ref) else float("inf"))
        print(f"spectrum gap vs diagonalization: {gap:.2e}", file=sys.stderr)
        if gap > 1e-6:
            return EXIT_VERIFY
    return EXIT_OK


def cmd_diag(args: argparse.Namespace) -> int:
    if getattr(args, "gamma", None):
        params = _xxz_params(args)
        spectrum = xxz_exact_spectrum(params, PROBE_SAMPLES)
    else:
        params = _model_params(args)
        spectrum = exact_spectrum(params, PROBE_SAMPLES)
    json_text = json.dumps({"spectrum": spectrum_to_json(spectrum)}, indent=2)
    _write_outputs(args.out, json_text, reports.spectrum_to_csv(spectrum),
                   args.format)
    print(f"diagonalized {len(spectrum)} states", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if not getattr(args, "solutions", None):
        raise ValueError("--solutions is required")
    params = _model_params(args)
    solutions = reports.solutions_from_json(Path(args.solutions).read_text())
    spectrum = exact_spectrum(params, PROBE_SAMPLES)
    tol = args.tol if args.tol is not None else 1e-5
    report = match_spectrum(solutions, spectrum, params, tol=tol)
    print(report.summary())
    if args.out:
        Path(args.out + ".json").write_text(json.dumps(report.to_json(),
                                                       indent=2))
    return EXIT_OK if report.complete else EXIT_VERIFY


def cmd_limit_scan(args: argparse.Namespace) -> int:
    params = _model_params(args)
    config = _solver_config(args)
    report = homotopy_correspondence(params,
                                     target_im_tau=args.target_im_tau,
                                     growth=args.growth,
                                     config=config)
    base = args.out or "limit_scan"
    Path(base + ".json").write_text(json.dumps(report.to_json(), indent=2))
    Path(base + ".csv").write_text(reports.path_log_to_csv(report.path_log))
    reports.plot_root_trajectories(report.path_log, base + ".png")
    paired = sum(1 for e in report.entries if e["xxz_index"] is not None)
    print(f"paired {paired}/{len(report.entries)} solutions; "
          f"{len(report.warnings)} path warnings", file=sys.stderr)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK if paired == len(report.entries) else EXIT_VERIFY


def cmd_export_table(args: argparse.Namespace) -> int:
    if getattr(args, "gamma", None):
        params = _xxz_params(args)
        solutions = xxz_solve(params, _solver_config(args))
        csv_text = reports.xxz_solutions_to_csv(solutions)
    else:
        params = _model_params(args)
        solutions = multi_start_solve(params, _solver_config(args))
        csv_text = reports.solutions_to_csv(solutions)
    rows = [line.split(",") for line in csv_text.strip().splitlines()]
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


_COMMANDS = {
    "solve-xyz": cmd_solve_xyz,
    "solve-xxz": cmd_solve_xxz,
    "diag": cmd_diag,
    "verify": cmd_verify,
    "limit-scan": cmd_limit_scan,
    "export-table": cmd_export_table,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        _apply_config_file(args)
        _limit_threads(args)  # holds for the process lifetime
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        return _fail_usage(str(exc))
    except XYZBetheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
