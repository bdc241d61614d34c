"""Special functions: Gamma, Mittag-Leffler, Gegenbauer/Jacobi polynomials and
Caputo derivatives of simple time profiles."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import _kernels

__all__ = [
    "MLParams",
    "caputo_power",
    "caputo_sin",
    "caputo_sin_integral",
    "gamma_fn",
    "gegenbauer",
    "jacobi",
    "mittag_leffler",
    "ml_cosh_sinh_checks",
    "series_threshold",
]

ML_MAX_TERMS = 4000


class PoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class ConvergenceError(RuntimeError):
    pass


def gamma_fn(x):
    """Euler Gamma. Raises :class:`PoleError` at non-positive integers."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr <= 0) & (arr == np.floor(arr))):
        raise PoleError(f"Gamma has a pole at {x!r}")
    out = special.gamma(arr)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Mittag-Leffler


@dataclass(frozen=True)
class MLParams:
    alpha: float
    mu: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"Mittag-Leffler needs alpha > 0, got {self.alpha}")
        if self.alpha > 2:
            raise ValueError(f"alpha > 2 is not supported, got {self.alpha}")

    def __call__(self, z):
        return mittag_leffler(self.alpha, self.mu, z)


def series_threshold(alpha: float) -> float:
    """Largest |z| (z < 0) summed by the power series.

    Beyond it the alternating series loses more than ~e^(2 |z|^(1/alpha)) ulps.
    """
    return min(5.0, 5.0**alpha)


def _ml_alpha_one(mu: float, z: float) -> float:
    # E_{1,mu}: closed forms for mu in {1, 2}, Laplace-type integral otherwise
    if mu == 1.0:
        return math.exp(z)
    if mu == 2.0:
        return math.expm1(z) / z
    if mu > 1.0:
        val, _ = integrate.quad(
            lambda t: math.exp(z * t), 0.0, 1.0, weight="alg", wvar=(0.0, mu - 2.0),
            epsabs=0.0, epsrel=1e-13, limit=200,
        )
        return val * float(special.rgamma(mu - 1.0))
    return float(special.rgamma(mu)) + z * _ml_alpha_one(mu + 1.0, z)


def _ml_negative_axis(alpha: float, mu: float, x: float) -> float:
    """E_{alpha,mu}(-x) for x > 0 from the inverse-Laplace representation.

    The Bromwich contour for s^(alpha-mu) / (s^alpha + x) is collapsed onto the
    branch cut along the negative real axis; poles that fall on the principal
    sheet (only when alpha > 1) contribute residues.
    Requires mu < 1 + alpha for the cut integral to converge at the origin.
    """
    pi = math.pi
    s_mu = math.sin(pi * mu)
    s_amu = math.sin(pi * (alpha - mu))
    c_a = math.cos(pi * alpha)

    def smooth(r):
        ra = r**alpha
        num = ra * s_mu - x * s_amu
        den = ra * ra + 2.0 * x * ra * c_a + x * x
        return math.exp(-r) * num / den

    def full(r):
        return r ** (alpha - mu) * smooth(r)

    if float(mu).is_integer() and float(alpha - mu).is_integer():
        # sin(pi mu) = sin(pi (alpha - mu)) = 0: the cut carries no density
        value = 0.0
    else:
        value = _cut_integral(alpha, mu, x, smooth, full) / pi

    if alpha > 1.0:
        pole = x ** (1.0 / alpha) * cmath.exp(1j * pi / alpha)
        value += (2.0 / alpha) * (pole ** (1.0 - mu) * cmath.exp(pole)).real
    return value


def _cut_integral(alpha, mu, x, smooth, full):
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    head, _ = integrate.quad(smooth, 0.0, 1.0, weight="alg", wvar=(alpha - mu, 0.0), **opts)
    peak = x ** (1.0 / alpha)
    upper = 60.0
    if 1.0 < peak < 700.0:
        upper = max(upper, peak + 60.0)
        mid, _ = integrate.quad(full, 1.0, upper, points=[peak], **opts)
    else:
        mid, _ = integrate.quad(full, 1.0, upper, **opts)
    tail, _ = integrate.quad(full, upper, math.inf, **opts)
    return head + mid + tail


def _ml_scalar(alpha: float, mu: float, z: float) -> float:
    if z >= 0.0 or -z <= series_threshold(alpha):
        return float(_kernels.ml_series(alpha, mu, np.array([z]), ML_MAX_TERMS)[0])
    if alpha == 1.0:
        return _ml_alpha_one(mu, z)
    if mu >= 1.0 + alpha:
        # E_{a,m}(z) = (E_{a,m-a}(z) - 1/Gamma(m-a)) / z
        return (_ml_scalar(alpha, mu - alpha, z) - float(special.rgamma(mu - alpha))) / z
    return _ml_negative_axis(alpha, mu, -z)


def mittag_leffler(alpha: float, mu: float, z):
    """Two-parameter Mittag-Leffler function E_{alpha,mu}(z) for real z.

    Power series near the origin and on the positive axis; for z below
    ``-series_threshold(alpha)`` an integral representation is used, which
    avoids the cancellation of the alternating series.

    Parameters
    ----------
    alpha : float
        Order in (0, 2].
    mu : float
        Second parameter.
    z : float or array_like
        Real argument(s).
    """
    if not alpha > 0:
        raise ValueError(f"Mittag-Leffler needs alpha > 0, got {alpha}")
    if alpha > 2:
        raise ValueError(f"alpha > 2 is not supported, got {alpha}")
    alpha = float(alpha)
    mu = float(mu)
    arr = np.asarray(z, dtype=float)
    if arr.ndim == 0:
        return _ml_scalar(alpha, mu, float(arr))

    flat = arr.ravel()
    out = np.empty_like(flat)
    use_series = (flat >= 0.0) | (-flat <= series_threshold(alpha))
    if np.any(use_series):
        out[use_series] = _kernels.ml_series(alpha, mu, np.ascontiguousarray(flat[use_series]), ML_MAX_TERMS)
    for i in np.nonzero(~use_series)[0]:
        out[i] = _ml_scalar(alpha, mu, float(flat[i]))
    return out.reshape(arr.shape)


def ml_cosh_sinh_checks(z: float) -> tuple[float, float]:
    """(E_{2,1}(z), E_{2,2}(z)); for z = -t^2 these are cos t and sin(t)/t."""
    return mittag_leffler(2.0, 1.0, z), mittag_leffler(2.0, 2.0, z)


# ---------------------------------------------------------------------------
# orthogonal polynomials


def gegenbauer(k: int, lam: float, x):
    """Gegenbauer polynomial C_k^(lam)(x) by the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * lam * x
    for n in range(2, k + 1):
        prev, cur = cur, (2.0 * x * (n + lam - 1.0) * cur - (n + 2.0 * lam - 2.0) * prev) / n
    return cur if cur.ndim else float(cur)


def jacobi(k: int, a: float, b: float, x):
    """Jacobi polynomial P_k^(a,b)(x) by the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for n in range(2, k + 1):
        c = 2 * n + a + b
        lead = 2.0 * n * (n + a + b) * (c - 2.0)
        mid = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b)
        back = 2.0 * (n + a - 1.0) * (n + b - 1.0) * c
        prev, cur = cur, (mid * cur - back * prev) / lead
    return cur if cur.ndim else float(cur)


# ---------------------------------------------------------------------------
# Caputo derivatives of elementary time profiles


def caputo_power(alpha: float, p: float, t: float) -> float:
    """Caputo derivative of order alpha of t -> t**p, evaluated at t > 0."""
    order_ceiling = math.ceil(alpha)
    if p < order_ceiling:
        if p != int(p):
            raise ValueError(f"t**{p} is outside the supported range for alpha={alpha}")
        # polynomials of degree below ceil(alpha) are annihilated
        return 0.0
    return gamma_fn(p + 1.0) / gamma_fn(p + 1.0 - alpha) * t ** (p - alpha)


def _sin_series(alpha: float, t: float, tol: float, shift: float) -> float:
    # sum_k (-1)^k t^(p - alpha + shift) / Gamma(p + 1 - alpha + shift),  p = 2k + 1,
    # skipping the Caputo-annihilated low-degree terms.
    order_ceiling = math.ceil(alpha)
    total = 0.0
    for k in range(200):
        p = 2 * k + 1
        if p < order_ceiling:
            continue
        expo = p - alpha + shift
        if t == 0.0:
            term = 1.0 if expo == 0 else 0.0
        else:
            term = math.exp(expo * math.log(t) - math.lgamma(expo + 1.0))
        term = -term if k % 2 else term
        total += term
        if abs(term) < tol and p > t:
            return total
    raise ConvergenceError(f"sine series did not reach tol={tol} within 200 terms at t={t}")


def caputo_sin(alpha: float, t: float, tol: float = 1e-16) -> float:
    """Caputo derivative of sin, summed termwise from its Taylor series."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _sin_series(alpha, t, tol, 0.0)


def caputo_sin_integral(alpha: float, t: float, tol: float = 1e-16) -> float:
    """int_0^t of the Caputo derivative of sin (each power integrated exactly)."""
    return _sin_series(alpha, t, tol, 1.0)
