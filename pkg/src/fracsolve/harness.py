"""Single runs and convergence sweeps against the manufactured solutions."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .cqtime import UniformTimeGrid
from .femcore import UniformMesh1D, assemble_mass, assemble_stiffness, l2_error, l2_project
from .manufactured import ManufacturedCase
from .stepper import SolverConfig, Trajectory, solve

__all__ = [
    "CSV_HEADER",
    "ConvergenceReport",
    "RunResult",
    "emit_csv",
    "fit_rate",
    "mesh_for_h",
    "read_csv",
    "run_convergence",
    "run_single",
    "write_report",
]

log = logging.getLogger(__name__)

CSV_HEADER = ("axis", "alpha", "s", "case", "resolution", "error", "fitted_rate")
QUAD_ORDER = 8


@dataclass(frozen=True)
class RunResult:
    error: float
    t_end: float
    n_steps: int
    dof: int
    corrected_source: bool
    trajectory: Trajectory = field(repr=False)


@dataclass(frozen=True)
class ConvergenceReport:
    axis: str
    case: ManufacturedCase
    rows: tuple[tuple[float, float], ...]
    fitted_rate: float
    fixed: float
    t_end: float
    corrected_source: bool | None = None

    @property
    def resolutions(self) -> np.ndarray:
        return np.array([r for r, _ in self.rows])

    @property
    def errors(self) -> np.ndarray:
        return np.array([e for _, e in self.rows])


def fit_rate(resolutions: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(resolution)."""
    r = np.log(np.asarray(resolutions, dtype=float))
    e = np.log(np.asarray(errors, dtype=float))
    if r.size < 2:
        raise ValueError("need at least two points to fit a rate")
    slope, _ = np.polyfit(r, e, 1)
    return float(slope)


def mesh_for_h(h: float, a: float = -1.0, b: float = 1.0) -> UniformMesh1D:
    m = int(round((b - a) / h))
    if m < 2 or abs(m * h - (b - a)) > 1e-9 * (b - a):
        raise ValueError(f"mesh size h={h} does not divide ({a}, {b})")
    return UniformMesh1D(m, a, b)


def _discrete_data(case: ManufacturedCase, mesh: UniformMesh1D):
    v, b = case.initial_data()
    v_h = l2_project(v, mesh, QUAD_ORDER)
    b_h = l2_project(b, mesh, QUAD_ORDER) if b is not None else None
    projected = [(term, l2_project(term.space, mesh, QUAD_ORDER)) for term in case.source_terms()]

    def f_at(t):
        return sum(term.time(t) * vec for term, vec in projected)

    def f_integral(t):
        return sum(term.time_integral(t) * vec for term, vec in projected)

    return v_h, b_h, f_at, f_integral


def run_single(case: ManufacturedCase, cfg: SolverConfig) -> RunResult:
    """Solve the manufactured problem and measure the L2 error at t_end."""
    if not (math.isclose(case.alpha, cfg.alpha) and math.isclose(case.s, cfg.s)):
        raise ValueError("case and solver configuration disagree on alpha or s")
    mesh = cfg.mesh
    K = assemble_stiffness(mesh, cfg.s)
    M = assemble_mass(mesh)
    v_h, b_h, f_at, f_integral = _discrete_data(case, mesh)
    traj = solve(cfg, K, M, v_h, b_h=b_h, f_at=f_at, f_integral=f_integral)
    t_end = cfg.grid.t_end
    err = l2_error(traj.final, lambda x: case.exact(x, t_end), mesh)
    log.info(
        "case=%s alpha=%g s=%g m=%d tau=%g T=%g error=%.6e",
        case.case_id, cfg.alpha, cfg.s, mesh.m, cfg.grid.tau, t_end, err,
    )
    return RunResult(err, t_end, cfg.grid.n_steps, mesh.dof, cfg.use_corrected_source, traj)


def run_convergence(
    case: ManufacturedCase,
    axis: str,
    fixed: float,
    sweep: Sequence[float],
    t_end: float,
    corrected_source: bool | None = None,
) -> ConvergenceReport:
    """Error at ``t_end`` over a sweep of tau (axis='time', fixed mesh size h)
    or of h (axis='space', fixed tau)."""
    if axis not in ("time", "space"):
        raise ValueError(f"axis must be 'time' or 'space', got {axis!r}")
    if len(sweep) < 3:
        raise ValueError("a convergence sweep needs at least three resolutions")
    rows = []
    for res in sorted(sweep, reverse=True):
        if axis == "time":
            mesh, grid = mesh_for_h(fixed), UniformTimeGrid.from_end(t_end, res)
        else:
            mesh, grid = mesh_for_h(res), UniformTimeGrid.from_end(t_end, fixed)
        cfg = SolverConfig(case.alpha, case.s, grid, mesh, corrected_source)
        rows.append((float(res), run_single(case, cfg).error))
    rate = fit_rate([r for r, _ in rows], [e for _, e in rows])
    return ConvergenceReport(axis, case, tuple(rows), rate, float(fixed), float(t_end), corrected_source)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_report(report: ConvergenceReport, fh) -> None:
    """Write the CSV rows of ``report`` to an open text stream."""
    if not report.rows:
        raise ValueError("report has no rows")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for res, err in report.rows:
        writer.writerow(
            [
                report.axis,
                _fmt(report.case.alpha),
                _fmt(report.case.s),
                report.case.case_id,
                _fmt(res),
                _fmt(err),
                _fmt(report.fitted_rate),
            ]
        )


def emit_csv(report: ConvergenceReport, path) -> None:
    """CSV with one row per sweep point; numbers to 6 significant digits."""
    if not report.rows:
        raise ValueError("report has no rows")
    with Path(path).open("w", newline="") as fh:
        write_report(report, fh)


def read_csv(path) -> list[dict]:
    """Parse a file written by :func:`emit_csv` (numbers as floats)."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        out = []
        for row in reader:
            for key in ("alpha", "s", "resolution", "error", "fitted_rate"):
                row[key] = float(row[key])
            out.append(row)
    return out
