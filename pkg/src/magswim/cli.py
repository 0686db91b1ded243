"""Command-line front end.

Reads a JSON experiment config, dispatches to the library and writes
deterministic CSV/JSON artifacts plus quick-look PNG figures.  Everything is
seedless; running the same config twice produces byte-identical delimited
outputs.

Exit codes: 0 success, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import design, geom, output, plots, primitives, stability
from .errors import ConfigError, MagswimError
from .model import SwimmerParams
from .sim import rollout
from .signals import ConstPlusSine, signal_from_json, signal_to_json

_REQUIRED = object()


def _pop(block: dict, key: str, default=_REQUIRED, context: str = ""):
    if key in block:
        return block.pop(key)
    if default is _REQUIRED:
        raise ConfigError(f"{context}: missing required key '{key}'")
    return default


def _done(block: dict, context: str) -> None:
    if block:
        raise ConfigError(f"{context}: unknown keys {sorted(block)}")


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return data


def _swimmer(config: dict) -> SwimmerParams:
    block = config.pop("swimmer", {})
    if not isinstance(block, dict):
        raise ConfigError("swimmer: must be an object")
    block = dict(block)
    kwargs = {}
    for key in ("link_length", "drag_tangential", "drag_normal",
                "link_volume", "magnetization_scale"):
        if key in block:
            kwargs[key] = float(block.pop(key))
    if "magnetization" in block:
        kwargs["magnetization"] = tuple(
            float(v) for v in block.pop("magnetization"))
    _done(block, "swimmer")
    try:
        return SwimmerParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"swimmer: {exc}") from exc


def _signal(spec, default=None):
    if spec is None:
        if default is not None:
            return default
        raise ConfigError("missing 'signal' block")
    try:
        return signal_from_json(spec)
    except ValueError as exc:
        raise ConfigError(f"signal: {exc}") from exc


def _loop(spec):
    try:
        return geom.loop_from_json(spec)
    except ValueError as exc:
        raise ConfigError(f"loop: {exc}") from exc


def _block(config: dict, name: str) -> dict:
    block = _pop(config, name, context="config")
    if not isinstance(block, dict):
        raise ConfigError(f"{name}: must be an object")
    return dict(block)


def _out_path(args, name) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


# ---------------------------------------------------------------------------
# subcommands

def _cmd_simulate(args, config, params):
    b = _block(config, "simulate")
    signal = _signal(_pop(b, "signal", None, "simulate"))
    q0 = np.asarray(_pop(b, "initial_state", [0, 0, 0, 0], "simulate"),
                    dtype=float)
    duration = float(_pop(b, "duration", context="simulate"))
    steps = int(_pop(b, "steps_per_unit", 2000, "simulate"))
    name = _pop(b, "output", "trajectory.csv", "simulate")
    _done(b, "simulate")
    traj = rollout(params, signal, q0, duration, steps)
    path = _out_path(args, name)
    output.write_trajectory_csv(path, traj)
    if args.plots:
        plots.plot_trajectory(traj, path.with_suffix(".png"))
    print(f"wrote {path}")


def _cmd_field(args, config, params):
    b = _block(config, "field")
    bounds = _pop(b, "bounds", [[-np.pi, 2 * np.pi], [-np.pi, 2 * np.pi]],
                  "field")
    resolution = int(_pop(b, "resolution", 256, "field"))
    loops = [_loop(s) for s in _pop(b, "loops", [], "field")]
    name = _pop(b, "output", "field.csv", "field")
    _done(b, "field")
    field = geom.curvature_field(params, tuple(map(tuple, bounds)),
                                 resolution, threads=args.threads)
    path = _out_path(args, name)
    output.write_field_csv(path, field)
    if args.plots:
        plots.plot_field(field, path.with_suffix(".png"), loops)
    print(f"wrote {path} ({int(field.mask.sum())} masked nodes)")


def _cmd_invert(args, config, params):
    b = _block(config, "invert")
    loop = _loop(_pop(b, "loop", context="invert"))
    samples = int(_pop(b, "samples", 2048, "invert"))
    exclusion = float(_pop(b, "exclusion_condition",
                           geom.INVERSION_CONDITION_LIMIT, "invert"))
    cutoff = _pop(b, "cutoff", None, "invert")
    regularize = bool(_pop(b, "regularize", False, "invert")) or args.regularize
    name = _pop(b, "output", "control.csv", "invert")
    _done(b, "invert")
    raw = geom.loop_to_control(params, loop, samples, exclusion)
    path = _out_path(args, name)
    output.write_control_csv(path, raw)
    smooth = None
    if regularize:
        smooth = geom.regularize_control(
            raw, None if cutoff is None else float(cutoff))
        reg_path = path.with_name(path.stem + "_regularized.csv")
        output.write_control_csv(reg_path, smooth)
        print(f"wrote {reg_path}")
    if args.plots:
        plots.plot_control(raw, smooth, path.with_suffix(".png"))
    print(f"wrote {path} ({int(raw.excluded.sum())} excluded samples)")


def _cmd_stability(args, config, params):
    b = _block(config, "stability")
    signal = _signal(_pop(b, "signal", None, "stability"), ConstPlusSine())
    guess = tuple(float(v) for v in _pop(b, "guess", [0.0, 0.0], "stability"))
    tol = float(_pop(b, "tol", 1e-10, "stability"))
    max_iter = int(_pop(b, "max_iter", 200, "stability"))
    steps = int(_pop(b, "steps_per_period", 2000, "stability"))
    name = _pop(b, "output", "strobe.json", "stability")
    basin_block = _pop(b, "basin", None, "stability")
    _done(b, "stability")

    result = stability.find_limit_cycle(params, signal, guess, tol, max_iter,
                                        steps_per_period=steps)
    path = _out_path(args, name)
    output.write_json(path, result.to_dict())
    print(f"wrote {path} (multipliers {result.multipliers[0]:.4g}, "
          f"{result.multipliers[1]:.4g})")

    if basin_block is not None:
        bb = dict(basin_block)
        resolution = int(_pop(bb, "resolution", 17, "basin"))
        cycles = int(_pop(bb, "cycles", 40, "basin"))
        bsteps = int(_pop(bb, "steps_per_period", 400, "basin"))
        bounds = _pop(bb, "bounds", [[-np.pi, np.pi], [-np.pi, np.pi]],
                      "basin")
        bname = _pop(bb, "output", "basin.csv", "basin")
        _done(bb, "basin")
        ref = stability.find_limit_cycle(
            params, signal, guess, tol, max_iter,
            steps_per_period=bsteps).fixed_point
        basin = stability.basin_sample(
            params, signal, tuple(map(tuple, bounds)), resolution, cycles,
            steps_per_period=bsteps, reference=ref, threads=args.threads)
        bpath = _out_path(args, bname)
        output.write_basin_csv(bpath, basin)
        if args.plots:
            plots.plot_basin(basin, bpath.with_suffix(".png"))
        frac = basin.converged.mean()
        print(f"wrote {bpath} ({frac:.1%} converged)")


def _cmd_optimize(args, config, params):
    b = _block(config, "optimize")
    c1_range = tuple(_pop(b, "c1_range", [0.25, 2.0], "optimize"))
    c2_range = tuple(_pop(b, "c2_range", [0.25, 4.0], "optimize"))
    resolution = int(_pop(b, "resolution", 16, "optimize"))
    cycles = int(_pop(b, "cycles", 8, "optimize"))
    steps = int(_pop(b, "steps_per_period", 1000, "optimize"))
    signal = _signal(_pop(b, "signal", None, "optimize"), ConstPlusSine())
    name = _pop(b, "output", "objective.csv", "optimize")
    _done(b, "optimize")
    surface = design.optimize_magnetization(
        params, c1_range, c2_range, resolution, signal, cycles, steps,
        threads=args.threads)
    path = _out_path(args, name)
    output.write_objective_csv(path, surface)

    # report the unconstrained argmax and the best fabrication-feasible
    # candidate on the c2/c1 = 2 line
    c1_best, c2_best = surface.argmax
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = surface.c2[None, :] / surface.c1[:, None]
    on_line = np.isclose(ratio, 2.0, rtol=1e-9, atol=1e-12)
    summary = {"argmax_c1": c1_best, "argmax_c2": c2_best,
               "argmax_ratio": c2_best / c1_best if c1_best else None,
               "ratio2_feasible": bool(on_line.any())}
    if on_line.any():
        vals = np.where(on_line, surface.first_cycle_dx, -np.inf)
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        summary["ratio2_best"] = {"c1": float(surface.c1[i]),
                                  "c2": float(surface.c2[j]),
                                  "first_cycle_dx":
                                      float(surface.first_cycle_dx[i, j])}
    output.write_json(path.with_suffix(".json"), summary)
    if args.plots:
        plots.plot_objective(surface, path.with_suffix(".png"))
    print(f"wrote {path} (argmax c1={c1_best:g}, c2={c2_best:g})")


def _cmd_turning_time(args, config, params):
    b = _block(config, "turning_time")
    gains = [float(g) for g in _pop(b, "gains", [1.0, 2.0, 4.0, 8.0],
                                    "turning_time")]
    drag = float(_pop(b, "drag_rotational", design.rotational_drag(params),
                      "turning_time"))
    delta = float(_pop(b, "delta", 0.05, "turning_time"))
    step = float(_pop(b, "step", 1e-4, "turning_time"))
    name = _pop(b, "output", "turning_time.csv", "turning_time")
    _done(b, "turning_time")
    rows = design.turning_time_sweep(gains, drag, delta, step)
    path = _out_path(args, name)
    output.write_turning_csv(path, rows)
    if args.plots:
        plots.plot_turning(rows, path.with_suffix(".png"))
    print(f"wrote {path}")


def _cmd_primitive(args, config, params):
    b = _block(config, "primitive")
    kind = _pop(b, "kind", context="primitive")
    B0 = float(_pop(b, "B0", 1.0, "primitive"))
    omega = float(_pop(b, "omega", 2 * np.pi, "primitive"))
    q0 = np.asarray(_pop(b, "initial_state", [0, 0, 0, 0], "primitive"),
                    dtype=float)
    steps = int(_pop(b, "steps_per_unit", 2000, "primitive"))
    name = _pop(b, "output", "primitive.csv", "primitive")

    if kind == "translate":
        heading = float(_pop(b, "heading", 0.0, "primitive"))
        duration = float(_pop(b, "duration", context="primitive"))
        signal = primitives.translate_signal(B0, omega, heading)
    elif kind == "rectangle":
        times = [float(t) for t in _pop(b, "switch_times",
                                        context="primitive")]
        signal = primitives.rectangle_schedule(B0, omega, tuple(times))
        duration = float(_pop(b, "duration", times[-1], "primitive"))
    elif kind == "turn":
        omega_slow = float(_pop(b, "omega_slow", omega / 10, "primitive"))
        signal = primitives.turn_in_place_signal(B0, omega, omega_slow)
        default_duration = (2 * np.pi / omega_slow if omega_slow
                            else 2 * np.pi / omega)
        duration = float(_pop(b, "duration", default_duration, "primitive"))
    elif kind == "headings":
        legs = [(float(h), float(d))
                for h, d in _pop(b, "legs", context="primitive")]
        signal = primitives.heading_schedule(B0, omega, legs)
        duration = float(_pop(b, "duration", sum(d for _, d in legs),
                              "primitive"))
    else:
        raise ConfigError(f"primitive: unknown kind {kind!r}")
    _done(b, "primitive")

    traj = rollout(params, signal, q0, duration, steps)
    path = _out_path(args, name)
    output.write_trajectory_csv(path, traj)
    output.write_json(path.with_name(path.stem + "_signal.json"),
                      signal_to_json(signal))
    if args.plots:
        plots.plot_trajectory(traj, path.with_suffix(".png"))
    print(f"wrote {path}")


_COMMANDS = {
    "simulate": _cmd_simulate,
    "field": _cmd_field,
    "invert": _cmd_invert,
    "stability": _cmd_stability,
    "optimize": _cmd_optimize,
    "turning-time": _cmd_turning_time,
    "primitive": _cmd_primitive,
}

_BLOCK_NAMES = {"turning-time": "turning_time"}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magswim",
        description="Two-link magnetic swimmer simulation and gait synthesis")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config manifest")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--regularize", action="store_true",
                       help="also write the low-pass regularized control "
                            "(invert only)")
        p.add_argument("--no-plots", dest="plots", action="store_false",
                       help="skip PNG rendering")
    return parser


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = _load_config(args.config)
        params = _swimmer(config)
        block_name = _BLOCK_NAMES.get(args.command, args.command)
        known = set(_BLOCK_NAMES.get(c, c) for c in _COMMANDS)
        extra = set(config) - {block_name}
        if extra - known:
            raise ConfigError(f"config: unknown keys {sorted(extra - known)}")
        for other in extra:
            config.pop(other)  # blocks for other subcommands are ignored
        _COMMANDS[args.command](args, config, params)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except MagswimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
