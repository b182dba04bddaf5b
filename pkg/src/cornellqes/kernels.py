"""Hot inner loops, each with a numba-compiled and a pure-numpy implementation.

The public functions dispatch on :data:`cornellqes._accel.USE_NUMBA`.  Both
implementations stay importable (``*_numpy`` and ``*_numba``) so tests and the
benchmark can compare them directly.
"""

from __future__ import annotations

import math

import numpy as np

from cornellqes import _accel

__all__ = [
    "ladder_log_sum",
    "heun_recurrence",
    "poly_derivs",
    "backend",
]


# --------------------------------------------------------------------------
# Bose ladder sum: G = -sum_k log(1 - exp(-beta * (first + k * step)))


def _ladder_log_sum_loop(first, step, beta, tol, min_terms, max_terms):
    total = 0.0
    n = 0
    while n < max_terms:
        x = beta * (first + n * step)
        term = -math.log1p(-math.exp(-x))
        total += term
        n += 1
        if n > min_terms and term < tol:
            return total, n, True
    return total, n, False


def _ladder_log_sum_numpy(first, step, beta, tol, min_terms, max_terms):
    total = 0.0
    start = 0
    chunk = 256
    while start < max_terms:
        stop = min(start + chunk, max_terms)
        k = np.arange(start, stop, dtype=np.float64)
        terms = -np.log1p(-np.exp(-beta * (first + k * step)))
        hit = np.flatnonzero((k + 1.0 > min_terms) & (terms < tol))
        if hit.size:
            j = int(hit[0])
            return total + float(terms[: j + 1].sum()), start + j + 1, True
        total += float(terms.sum())
        start = stop
        chunk = min(chunk * 4, 1 << 20)
    return total, max_terms, False


# --------------------------------------------------------------------------
# Three-term Frobenius recurrence with C_{-1} = 0, C_0 = 1


def _heun_recurrence_loop(qeta, b_tilde, P, R, N):
    c = np.zeros(N + 1)
    c[0] = 1.0
    prev = 0.0
    cur = 1.0
    for j in range(-1, N - 1):
        nxt = ((qeta - b_tilde * (j + 1)) * cur - (R - 2.0 * j) * prev) / (
            (j + 2) * (j + 2.0 * P + 1.0)
        )
        c[j + 2] = nxt
        prev = cur
        cur = nxt
    return c


# --------------------------------------------------------------------------
# Horner evaluation of p, p', p'' on an array of abscissae


def _poly_derivs_loop(coeffs, x):
    out = np.empty((3, x.size))
    deg = coeffs.size - 1
    for i in range(x.size):
        xi = x[i]
        p = 0.0
        dp = 0.0
        ddp = 0.0
        for k in range(deg, -1, -1):
            ddp = ddp * xi + 2.0 * dp
            dp = dp * xi + p
            p = p * xi + coeffs[k]
        out[0, i] = p
        out[1, i] = dp
        out[2, i] = ddp
    return out


def _poly_derivs_numpy(coeffs, x):
    p = np.zeros_like(x)
    dp = np.zeros_like(x)
    ddp = np.zeros_like(x)
    for ck in coeffs[::-1]:
        ddp = ddp * x + 2.0 * dp
        dp = dp * x + p
        p = p * x + ck
    return np.stack([p, dp, ddp])


ladder_log_sum_numpy = _ladder_log_sum_numpy
heun_recurrence_numpy = _heun_recurrence_loop
poly_derivs_numpy = _poly_derivs_numpy

ladder_log_sum_numba = _accel.njit(_ladder_log_sum_loop)
heun_recurrence_numba = _accel.njit(_heun_recurrence_loop)
poly_derivs_numba = _accel.njit(_poly_derivs_loop)


def backend() -> str:
    return "numba" if _accel.USE_NUMBA else "numpy"


def ladder_log_sum(first, step, beta, tol=1e-14, min_terms=10, max_terms=10**7):
    """Sum ``-log(1 - exp(-beta*(first + k*step)))`` over ``k = 0, 1, ...``.

    Stops after the first term below ``tol`` once more than ``min_terms`` terms
    were added.  Returns ``(total, terms_used, converged)``.
    """
    args = (float(first), float(step), float(beta), float(tol), int(min_terms), int(max_terms))
    if _accel.USE_NUMBA:
        total, n, ok = ladder_log_sum_numba(*args)
    else:
        total, n, ok = ladder_log_sum_numpy(*args)
    return float(total), int(n), bool(ok)


def heun_recurrence(qeta, b_tilde, P, R, N):
    """Coefficients ``C_0..C_N`` of the terminating-or-not Frobenius series."""
    args = (float(qeta), float(b_tilde), float(P), float(R), int(N))
    if _accel.USE_NUMBA:
        return heun_recurrence_numba(*args)
    return heun_recurrence_numpy(*args)


def poly_derivs(coeffs, x):
    """Rows ``(p, p', p'')`` of the power series ``sum coeffs[k] x**k`` at ``x``."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    x = np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
    if _accel.USE_NUMBA:
        return poly_derivs_numba(coeffs, x)
    return poly_derivs_numpy(coeffs, x)
