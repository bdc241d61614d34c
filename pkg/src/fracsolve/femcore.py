"""P1 finite elements on an interval for the integral fractional Laplacian.

Stiffness entries use the identity, valid for compactly supported u, w,

    <u, w>_s = c_s * int int u'(x) w'(y) k_s(x - y) dx dy,

with k_s(r) = |r|^(1-2s) (s != 1/2) or log|r| (s = 1/2), i.e. the Riesz potential
of order 2 - 2s applied to u'. For hat functions u', w' are piecewise constant, so
each entry is a signed combination of kernel integrals over element pairs, which
collapse to a fourth difference of an even antiderivative F with F'' = k_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import linalg

from . import _kernels
from .specfun import gamma_fn

__all__ = [
    "UniformMesh1D",
    "assemble_mass",
    "assemble_stiffness",
    "interpolate",
    "l2_error",
    "l2_project",
    "load_vector",
    "mass_apply",
    "normalization_constant",
    "stiffness_row",
]


@dataclass(frozen=True)
class UniformMesh1D:
    m: int
    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"need at least two subintervals, got m={self.m}")
        if not self.b > self.a:
            raise ValueError("empty interval")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.m + 1)

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def dof(self) -> int:
        return self.m - 1


def normalization_constant(n: int, s: float) -> float:
    """C(n, s) = 4^s s Gamma(s + n/2) / (pi^(n/2) Gamma(1 - s))."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    return 2.0 ** (2 * s) * s * gamma_fn(s + n / 2) / (math.pi ** (n / 2) * gamma_fn(1.0 - s))


def assemble_mass(mesh: UniformMesh1D) -> np.ndarray:
    h = mesh.h
    n = mesh.dof
    M = np.diag(np.full(n, 2.0 * h / 3.0))
    if n > 1:
        off = np.full(n - 1, h / 6.0)
        M += np.diag(off, 1) + np.diag(off, -1)
    return M


def mass_apply(mesh: UniformMesh1D, v: np.ndarray) -> np.ndarray:
    """M @ v without forming M."""
    h = mesh.h
    out = (2.0 * h / 3.0) * v
    out[1:] += (h / 6.0) * v[:-1]
    out[:-1] += (h / 6.0) * v[1:]
    return out


def _riesz_constant(s: float) -> float:
    # c_s such that c_s * k_s has Fourier symbol |xi|^(2s - 2)
    if s == 0.5:
        return -1.0 / math.pi
    return gamma_fn(s - 0.5) / (math.sqrt(math.pi) * 2.0 ** (2.0 - 2.0 * s) * gamma_fn(1.0 - s))


def stiffness_row(mesh: UniformMesh1D, s: float) -> np.ndarray:
    """K[0, l] for l = 0..m-2; K is symmetric Toeplitz on a uniform mesh."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    unit = _kernels.fourth_difference(float(s), mesh.dof)
    return _riesz_constant(s) * mesh.h ** (1.0 - 2.0 * s) * np.asarray(unit)


def assemble_stiffness(mesh: UniformMesh1D, s: float) -> np.ndarray:
    """Dense stiffness matrix K_ij = <phi_i, phi_j>_s (symmetric Toeplitz)."""
    return linalg.toeplitz(stiffness_row(mesh, s))


# ---------------------------------------------------------------------------
# quadrature, projection, error norms


@lru_cache(maxsize=None)
def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    vals = f(x)
    vals = np.asarray(vals, dtype=float)
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape)
    return vals


def load_vector(f: Callable, mesh: UniformMesh1D, quad_order: int = 8) -> np.ndarray:
    """(f, phi_i) for the interior hats, by per-element Gauss quadrature."""
    if quad_order < 2:
        raise ValueError("quadrature order must be >= 2")
    xi, wi = _gauss(quad_order)
    h = mesh.h
    left = mesh.nodes[:-1]
    xq = left[:, None] + 0.5 * h * (xi[None, :] + 1.0)
    basis = np.column_stack([(1.0 - xi) / 2.0, (1.0 + xi) / 2.0])
    fq = _evaluate(f, xq)
    full = _kernels.scatter_load(np.ascontiguousarray(fq), basis, 0.5 * h * wi, mesh.m + 1)
    return np.asarray(full)[1:-1]


def _mass_banded(mesh: UniformMesh1D) -> np.ndarray:
    n = mesh.dof
    ab = np.empty((2, n))
    ab[0, :] = mesh.h / 6.0
    ab[1, :] = 2.0 * mesh.h / 3.0
    return ab


def solve_mass(mesh: UniformMesh1D, rhs: np.ndarray) -> np.ndarray:
    """M^{-1} rhs using the banded Cholesky factor."""
    try:
        return linalg.solveh_banded(_mass_banded(mesh), rhs)
    except linalg.LinAlgError as exc:  # pragma: no cover - M is SPD by construction
        raise linalg.LinAlgError("mass matrix is singular; mesh state is corrupt") from exc


def l2_project(f: Callable, mesh: UniformMesh1D, quad_order: int = 8) -> np.ndarray:
    """Coefficients of the L2(Omega) projection of f onto the interior P1 space."""
    return solve_mass(mesh, load_vector(f, mesh, quad_order))


def interpolate(coeffs: np.ndarray, mesh: UniformMesh1D, x) -> np.ndarray:
    """Evaluate the P1 function with interior coefficients ``coeffs`` at x."""
    padded = np.concatenate(([0.0], np.asarray(coeffs, dtype=float), [0.0]))
    return np.interp(x, mesh.nodes, padded, left=0.0, right=0.0)


@lru_cache(maxsize=64)
def _error_rule(mesh: UniformMesh1D, order: int, depth: int):
    """Composite Gauss rule: plain on interior elements, geometrically graded
    (ratio 1/2) toward both endpoints inside the two boundary elements."""
    xi, wi = _gauss(order)
    h = mesh.h
    nodes = mesh.nodes
    cells = [(nodes[e], nodes[e + 1]) for e in range(1, mesh.m - 1)]
    # breakpoints a + h 2^-k, k = 0..depth, plus the endpoint itself
    offsets = h * 0.5 ** np.arange(depth + 1)
    graded = np.concatenate((offsets, [0.0]))
    for lo_off, hi_off in zip(graded[1:], graded[:-1]):
        cells.append((mesh.a + lo_off, mesh.a + hi_off))
        cells.append((mesh.b - hi_off, mesh.b - lo_off))
    lo = np.array([c[0] for c in cells])
    hi = np.array([c[1] for c in cells])
    half = 0.5 * (hi - lo)
    x = (lo + hi)[:, None] / 2.0 + half[:, None] * xi[None, :]
    w = half[:, None] * wi[None, :]
    return x.ravel(), w.ravel()


def l2_error(
    coeffs: np.ndarray,
    exact: Callable,
    mesh: UniformMesh1D,
    *,
    order: int = 8,
    depth: int = 30,
) -> float:
    """||u_h - exact||_{L2(a, b)}.

    The boundary elements are refined geometrically because the exact solutions
    of interest behave like dist(x, boundary)^s there.
    """
    x, w = _error_rule(mesh, order, depth)
    diff = interpolate(coeffs, mesh, x) - _evaluate(exact, x)
    return float(math.sqrt(np.dot(w, diff * diff)))
