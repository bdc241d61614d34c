"""Hot inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and ``FRACSOLVE_NO_NUMBA``
is unset (or ``0``). Both variants of every kernel stay importable under the
``*_numba`` / ``*_numpy`` names so they can be compared directly.
"""

from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("FRACSOLVE_NO_NUMBA", "").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by FRACSOLVE_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn


# --------------------------------------------------------------------------
# convolution-quadrature weights: w_0 = tau^-alpha, w_j = w_{j-1} (1 - (alpha+1)/j)


def _cq_weights_loop(alpha, tau, n):
    w = np.empty(n + 1)
    w[0] = tau ** (-alpha)
    for j in range(1, n + 1):
        w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / j)
    return w


def cq_weights_numpy(alpha, tau, n):
    factors = np.empty(n + 1)
    factors[0] = tau ** (-alpha)
    j = np.arange(1, n + 1, dtype=float)
    factors[1:] = 1.0 - (alpha + 1.0) / j
    return np.cumprod(factors)


# --------------------------------------------------------------------------
# history sum  sum_{j=1}^{n} w_j U^{n-j}  over the stored trajectory rows


def _history_sum_loop(weights, states, n):
    dof = states.shape[1]
    out = np.zeros(dof)
    for j in range(1, n + 1):
        wj = weights[j]
        row = states[n - j]
        for i in range(dof):
            out[i] += wj * row[i]
    return out


def history_sum_numpy(weights, states, n):
    if n == 0:
        return np.zeros(states.shape[1])
    # rows U^{n-1}, ..., U^0 pair with w_1, ..., w_n
    return weights[1 : n + 1] @ states[n - 1 :: -1][:n]


# --------------------------------------------------------------------------
# first row of the 1D fractional stiffness matrix on a unit-spaced grid


def _antiderivative_power(r, s):
    # F'' = |r|^(1-2s), F even
    r = abs(r)
    if r == 0.0:
        return 0.0
    return r ** (3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s))


def _antiderivative_log(r):
    # F'' = log|r|, F even
    r = abs(r)
    if r == 0.0:
        return 0.0
    return 0.5 * r * r * math.log(r) - 0.75 * r * r


# Far from the origin the raw difference cancels badly (F grows like l^(3-2s),
# the result decays like l^(-1-2s)). There we use the Peano form
#   D^4 F(l) = int_{-2}^{2} B(u) F4(l + u) du,
# B the centred cubic B-spline and F4 the fourth derivative of F, by
# Gauss-Legendre on each unit piece of B.
DIRECT_OFFSETS = 6
_GX, _GW = np.polynomial.legendre.leggauss(12)
_PEANO_U = (np.arange(-2, 2)[:, None] + 0.5 * (_GX[None, :] + 1.0)).ravel()
_AU = np.abs(_PEANO_U)
_PEANO_W = np.tile(0.5 * _GW, 4) * np.where(_AU < 1.0, 2.0 / 3.0 - _AU**2 + 0.5 * _AU**3, (2.0 - _AU) ** 3 / 6.0)
del _AU


def _fourth_derivative(r, s):
    # F'''' = k'' for k = |r|^(1-2s) or log|r|, r > 0
    if s == 0.5:
        return -1.0 / (r * r)
    return (1.0 - 2.0 * s) * (-2.0 * s) * r ** (-1.0 - 2.0 * s)


def _fourth_difference_loop(s, n, peano_u, peano_w):
    """-D^4 F at integer offsets 0..n-1 (F picked by s)."""
    out = np.empty(n)
    log_branch = s == 0.5
    for ell in range(n):
        acc = 0.0
        if ell < DIRECT_OFFSETS:
            for k, c in ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)):
                r = float(ell + k)
                if log_branch:
                    acc += c * _antiderivative_log(r)
                else:
                    acc += c * _antiderivative_power(r, s)
        else:
            for q in range(peano_u.shape[0]):
                acc += peano_w[q] * _fourth_derivative(ell + peano_u[q], s)
        out[ell] = -acc
    return out


def fourth_difference_numpy(s, n):
    ell = np.arange(n, dtype=float)
    out = np.empty(n)
    near = ell < DIRECT_OFFSETS
    acc = np.zeros(int(near.sum()))
    for k, c in ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)):
        r = np.abs(ell[near] + k)
        safe = np.where(r > 0, r, 1.0)
        if s == 0.5:
            val = np.where(r > 0, 0.5 * r * r * np.log(safe) - 0.75 * r * r, 0.0)
        else:
            val = r ** (3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s))
        acc += c * val
    out[near] = -acc
    r = ell[~near][:, None] + _PEANO_U[None, :]
    if s == 0.5:
        d4 = -1.0 / (r * r)
    else:
        d4 = (1.0 - 2.0 * s) * (-2.0 * s) * r ** (-1.0 - 2.0 * s)
    out[~near] = -(d4 @ _PEANO_W)
    return out


# --------------------------------------------------------------------------
# P1 load vector from per-element quadrature values
#   fq[e, q]   integrand samples at quadrature nodes of element e
#   basis[q,2] left/right local hat values;  wq[q] weights (already scaled by h)


def _scatter_load_loop(fq, basis, wq, n_nodes):
    load = np.zeros(n_nodes)
    n_el, nq = fq.shape
    for e in range(n_el):
        left = 0.0
        right = 0.0
        for q in range(nq):
            v = fq[e, q] * wq[q]
            left += v * basis[q, 0]
            right += v * basis[q, 1]
        load[e] += left
        load[e + 1] += right
    return load


def scatter_load_numpy(fq, basis, wq, n_nodes):
    local = (fq * wq) @ basis  # (n_el, 2)
    load = np.zeros(n_nodes)
    load[:-1] += local[:, 0]
    load[1:] += local[:, 1]
    return load


# --------------------------------------------------------------------------
# Mittag-Leffler power series sum_k z^k / Gamma(alpha k + mu)


def _rgamma_scalar(x):
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x < 170.0:
        return 1.0 / math.gamma(x)
    return math.exp(-math.lgamma(x))


def _ml_series_loop(alpha, mu, z, max_terms):
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        zi = z[i]
        total = _rgamma_scalar(mu)
        if zi == 0.0:
            out[i] = total
            continue
        logz = math.log(abs(zi))
        sign_z = -1.0 if zi < 0.0 else 1.0
        small = 0
        for k in range(1, max_terms):
            arg = alpha * k + mu
            if arg <= 0.0:
                term = zi**k * _rgamma_scalar(arg)
            else:
                lt = k * logz - math.lgamma(arg)
                term = sign_z**k * math.exp(lt) if lt < 709.0 else sign_z**k * math.inf
            total += term
            # Gamma is increasing past ~1.46, so tiny trailing terms stay tiny
            if arg > 2.0 and abs(term) <= 1e-17 * abs(total):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        out[i] = total
    return out


def ml_series_numpy(alpha, mu, z, max_terms):
    from scipy.special import gammaln, rgamma

    z = np.asarray(z, dtype=float)
    k = np.arange(max_terms, dtype=float)
    arg = alpha * k + mu
    positive = arg > 0.0
    lg_pos = gammaln(np.where(positive, arg, 1.0))
    # keep terms up to the last one above 1e-20 for the largest |z|
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    if zmax > 0.0:
        with np.errstate(over="ignore"):
            big = np.nonzero(~positive | (k * math.log(zmax) - lg_pos > -46.0))[0]
        k = k[: big[-1] + 2 if big.size else 1]
        arg, positive, lg_pos = arg[: k.size], positive[: k.size], lg_pos[: k.size]
    rg_nonpos = rgamma(np.where(positive, 1.0, arg))
    odd = k % 2 == 1
    zc = z[:, None]
    nonzero = zc != 0.0
    logz = np.log(np.where(nonzero, np.abs(zc), 1.0))
    sign = np.where((zc < 0) & odd[None, :], -1.0, 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = np.where(
            positive[None, :],
            sign * np.exp(np.minimum(k[None, :] * logz - lg_pos[None, :], 710.0)),
            zc**k[None, :] * rg_nonpos[None, :],
        )
    out = terms.sum(axis=1)
    out[z == 0.0] = float(rgamma(mu))
    return out


if HAVE_NUMBA:
    cq_weights_numba = njit(cache=True)(_cq_weights_loop)
    history_sum_numba = njit(cache=True)(_history_sum_loop)
    _antiderivative_power = njit(cache=True)(_antiderivative_power)
    _antiderivative_log = njit(cache=True)(_antiderivative_log)
    _fourth_derivative = njit(cache=True)(_fourth_derivative)
    _fd_jit = njit(cache=True)(_fourth_difference_loop)

    def fourth_difference_numba(s, n):
        return _fd_jit(s, n, _PEANO_U, _PEANO_W)

    scatter_load_numba = njit(cache=True)(_scatter_load_loop)
    _rgamma_scalar = njit(cache=True)(_rgamma_scalar)
    ml_series_numba = njit(cache=True)(_ml_series_loop)

    cq_weights = cq_weights_numba
    history_sum = history_sum_numba
    fourth_difference = fourth_difference_numba
    scatter_load = scatter_load_numba
    ml_series = ml_series_numba
else:
    cq_weights_numba = history_sum_numba = fourth_difference_numba = None
    scatter_load_numba = ml_series_numba = None

    cq_weights = cq_weights_numpy
    history_sum = history_sum_numpy
    fourth_difference = fourth_difference_numpy
    scatter_load = scatter_load_numpy
    ml_series = ml_series_numpy

BACKEND = "numba" if HAVE_NUMBA else "numpy"
