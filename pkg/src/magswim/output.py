"""Deterministic CSV/JSON writers for CLI artifacts.

Numbers are written with 17 significant digits (lossless double round-trip),
so a fixed config always produces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .geom import CurvatureField
from .sim import Trajectory


def fmt(x) -> str:
    """17-significant-digit decimal form of one value."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_trajectory_csv(path, traj: Trajectory) -> None:
    rows = np.column_stack([traj.times, traj.states, traj.controls])
    write_csv(path, ["t", "x", "y", "theta1", "theta2", "bx", "by"], rows)


def write_field_csv(path, field: CurvatureField) -> None:
    rows = []
    for i, t1 in enumerate(field.theta1):
        for j, t2 in enumerate(field.theta2):
            rows.append((t1, t2, field.curl_x[i, j], field.curl_y[i, j],
                         bool(field.mask[i, j])))
    write_csv(path, ["theta1", "theta2", "curl_x", "curl_y", "masked"], rows)


def write_control_csv(path, sampled) -> None:
    excluded = (sampled.excluded if sampled.excluded is not None
                else np.zeros(len(sampled.times), dtype=bool))
    rows = zip(sampled.times, sampled.values[:, 0], sampled.values[:, 1],
               excluded)
    write_csv(path, ["t", "bx", "by", "excluded"], rows)


def write_basin_csv(path, basin) -> None:
    rows = []
    for i, t1 in enumerate(basin.theta1_0):
        for j, t2 in enumerate(basin.theta2_0):
            rows.append((t1, t2, basin.final_distance[i, j],
                         bool(basin.converged[i, j])))
    write_csv(path, ["theta1_0", "theta2_0", "final_distance", "converged"],
              rows)


def write_objective_csv(path, surface) -> None:
    rows = []
    for i, c1 in enumerate(surface.c1):
        for j, c2 in enumerate(surface.c2):
            rows.append((c1, c2, surface.first_cycle_dx[i, j],
                         surface.steady_cycle_dx[i, j]))
    write_csv(path, ["c1", "c2", "first_cycle_dx", "steady_cycle_dx"], rows)


def write_turning_csv(path, rows) -> None:
    write_csv(path, ["k", "time_numeric", "time_analytic"], rows)
