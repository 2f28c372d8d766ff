"""Command-line front end: ``run``, ``validate`` and ``emit-qasm``.

Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .qasm import emit_qasm
from .qlbm import (
    DEFAULT_CS2,
    ConfigError,
    LatticeConfig,
    collision_angles,
    perturbed,
    run_simulation,
    validate_against_classical,
)
from .reference import VelocityRangeError
from .stateprep import encode_amplitudes
from .svgplot import line_plot_svg

log = logging.getLogger("qlbmsim")


class UsageError(Exception):
    pass


def initial_field(spec: str, sites: int) -> np.ndarray:
    """Parse ``triangle``, ``gaussian:x0,sigma,amp`` or ``file:<path>``."""
    if spec == "triangle":
        if sites < 8:
            raise UsageError("triangle initial field needs at least 8 sites")
        C = np.zeros(sites)
        C[5] = C[7] = 0.5
        C[6] = 1.0
        return C
    if spec.startswith("gaussian:"):
        try:
            x0, sigma, amp = (float(p) for p in spec[len("gaussian:"):].split(","))
        except ValueError:
            raise UsageError(f"gaussian field must be gaussian:x0,sigma,amp, got {spec!r}")
        if sigma <= 0 or amp <= 0:
            raise UsageError("gaussian sigma and amp must be positive")
        x = np.arange(sites)
        # periodic distance to the center
        dx = (x - x0 + sites / 2) % sites - sites / 2
        return amp * np.exp(-0.5 * (dx / sigma) ** 2)
    if spec.startswith("file:"):
        path = Path(spec[len("file:"):])
        try:
            lines = path.read_text().split()
        except OSError as exc:
            raise UsageError(f"cannot read initial field file: {exc}")
        try:
            C = np.array([float(s) for s in lines])
        except ValueError as exc:
            raise UsageError(f"bad value in {path}: {exc}")
        if C.size != sites:
            raise UsageError(f"{path} holds {C.size} values, expected {sites}")
        if np.any(C < 0) or not np.all(np.isfinite(C)):
            raise UsageError(f"{path} must hold finite non-negative values")
        if not np.any(C > 0):
            raise UsageError(f"{path} holds an all-zero field")
        return C
    raise UsageError(f"unknown initial field {spec!r} (triangle, gaussian:x0,sigma,amp, file:<path>)")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sites", type=int, default=32, help="lattice sites M (power of two, >= 16)")
    common.add_argument("--steps", type=int, default=40)
    common.add_argument("--velocity", type=float, default=0.0, help="advection velocity u")
    common.add_argument("--cs2", type=float, default=DEFAULT_CS2, help="sound speed squared")
    common.add_argument("--initial", default="triangle")
    common.add_argument("--out", default=None, help="CSV output path (run: trajectory.csv)")
    common.add_argument("--svg", default=None, help="optional SVG plot path")
    common.add_argument("--plot-steps", default=None, help="comma-separated steps to plot")
    common.add_argument("--emit-qasm-dir", default=None, help="directory for QASM dumps")
    common.add_argument("--tolerance", type=float, default=1e-12)
    common.add_argument("--perturb-angle", type=float, default=0.0, help=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="qlbmsim", description="D1Q2 quantum lattice Boltzmann solver")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run the hybrid solver and write a CSV trajectory")
    sub.add_parser("validate", parents=[common], help="compare against the classical LBM")
    sub.add_parser("emit-qasm", parents=[common], help="write the encoding circuit as OpenQASM 2")
    return p


def _config(args) -> tuple[LatticeConfig, np.ndarray]:
    if args.steps < 0:
        raise UsageError("steps must be non-negative")
    if not math.isfinite(args.velocity) or not math.isfinite(args.cs2):
        raise UsageError("velocity and cs2 must be finite")
    try:
        cfg = LatticeConfig(args.sites, args.velocity, args.cs2)
        collision_angles(cfg.u, cfg.cs2)
    except (ConfigError, VelocityRangeError) as exc:
        raise UsageError(str(exc))
    return cfg, initial_field(args.initial, args.sites)


def _angles(args, cfg):
    angles = collision_angles(cfg.u, cfg.cs2)
    return perturbed(angles, args.perturb_angle) if args.perturb_angle else angles


def write_csv(path: Path, trajectory: Sequence[np.ndarray]) -> None:
    lines = ["step,x,concentration"]
    for t, C in enumerate(trajectory):
        lines.extend(f"{t},{x},{float(v):.17g}" for x, v in enumerate(C))
    path.write_text("\n".join(lines) + "\n")


def _plot_steps(args, nsteps: int) -> list[int]:
    if args.plot_steps:
        try:
            chosen = [int(s) for s in args.plot_steps.split(",")]
        except ValueError:
            raise UsageError(f"--plot-steps must be comma-separated integers, got {args.plot_steps!r}")
        bad = [s for s in chosen if not 0 <= s <= nsteps]
        if bad:
            raise UsageError(f"--plot-steps out of range: {bad}")
        return chosen
    return sorted({0, min(2, nsteps), nsteps})


def cmd_run(args) -> int:
    cfg, C0 = _config(args)
    plot_steps = _plot_steps(args, args.steps) if args.svg else []
    traj = run_simulation(C0, args.steps, cfg, _angles(args, cfg))
    values = [c.values for c in traj]
    out_csv = Path(args.out or "trajectory.csv")
    write_csv(out_csv, values)
    log.info("wrote %d steps x %d sites to %s", len(values), cfg.M, out_csv)
    if args.svg:
        series = {f"t = {s}": values[s] for s in plot_steps}
        title = f"M = {cfg.M}, u = {cfg.u:g}, cs2 = {cfg.cs2:g}"
        Path(args.svg).write_text(line_plot_svg(series, title=title))
    if args.emit_qasm_dir:
        out = Path(args.emit_qasm_dir)
        out.mkdir(parents=True, exist_ok=True)
        for t, C in enumerate(values[:-1] if args.steps else values):
            k = encode_amplitudes(C / np.linalg.norm(C))
            (out / f"encoding_{t:04d}.qasm").write_text(emit_qasm(k))
    return 0


def cmd_validate(args) -> int:
    cfg, C0 = _config(args)
    res = validate_against_classical(C0, args.steps, cfg, _angles(args, cfg))
    for t, d in enumerate(res.per_step):
        print(f"step {t:4d}  max|quantum - classical| = {d:.3e}")
    ok = res.global_max <= args.tolerance
    print(f"global max = {res.global_max:.3e}  tolerance = {args.tolerance:.1e}  "
          f"{'PASS' if ok else 'FAIL'}")
    if args.out:
        write_csv(Path(args.out), res.quantum)
    return 0 if ok else 1


def cmd_emit_qasm(args) -> int:
    cfg, C0 = _config(args)
    kernel = encode_amplitudes(C0 / np.linalg.norm(C0))
    out = Path(args.emit_qasm_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    path = out / "encoding.qasm"
    path.write_text(emit_qasm(kernel))
    log.info("wrote %s (%d gates)", path, len(kernel))
    print(path)
    return 0


COMMANDS = {"run": cmd_run, "validate": cmd_validate, "emit-qasm": cmd_emit_qasm}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qlbmsim {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qlbmsim {args.command}: I/O error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"qlbmsim {args.command}: failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
