"""1D space-time fractional evolution equations with P1 elements in space and
backward-Euler convolution quadrature in time."""

from ._kernels import BACKEND
from .cqtime import CQWeightTable, UniformTimeGrid, corrected_source, cq_weights, discrete_rl, ramp_term
from .femcore import (
    UniformMesh1D,
    assemble_mass,
    assemble_stiffness,
    l2_error,
    l2_project,
    normalization_constant,
)
from .harness import ConvergenceReport, emit_csv, fit_rate, run_convergence, run_single
from .manufactured import ManufacturedCase, mu_coefficient
from .specfun import (
    MLParams,
    caputo_power,
    caputo_sin,
    gamma_fn,
    gegenbauer,
    jacobi,
    mittag_leffler,
    ml_cosh_sinh_checks,
)
from .stepper import (
    SolverConfig,
    Trajectory,
    evaluate_trajectory,
    semidiscrete_exact,
    solve,
    solve_diffusion,
    solve_wave,
)

__version__ = "0.1.0"
