"""Frobenius series for the biconfluent Heun form of the radial equation.

In the scaled radius chi = sqrt(gamma) r the reduced radial function is written

    f(chi) = chi**(alpha + 1/2) * exp(-chi (chi - b_tilde) / 2) * sum_k C_k chi**k

and the coefficients obey

    C_{k+2} = [(Q eta - b_tilde (k+1)) C_{k+1} - (R - 2k) C_k] / ((k+2)(k+2P+1))

with C_{-1} = 0, C_0 = 1.  The series is a polynomial of degree n when both
R = 2n and C_{n+1} = 0.

Sign convention: the recurrence above is kept as published, and the product
``qeta`` is defined as ``-(eta + P * b_tilde)``.  That is the value for which
the recurrence reproduces the constant term ``eta + (alpha + 1/2) b_tilde`` of
the transformed ODE, so terminated series are true solutions.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from cornellqes import kernels
from cornellqes.model import DerivedScales, FieldConfig, PhysParams, derive_scales

_IMAG_CLEANUP = 1e-10


@dataclass(frozen=True)
class PQRParams:
    P: float
    qeta: float
    R: float


@dataclass(frozen=True)
class HeunSeries:
    coeffs: np.ndarray
    pqr: PQRParams
    b_tilde: float
    eta: float

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def truncated(self, n: int) -> HeunSeries:
        return HeunSeries(self.coeffs[: n + 1].copy(), self.pqr, self.b_tilde, self.eta)


def spectral_lambda(scales: DerivedScales, E: float) -> float:
    """lambda = 2 mu E - (m + nu) mu omega_c."""
    return 2.0 * scales.mu * E - scales.shift


def qeta_from(eta: float, P: float, b_tilde: float) -> float:
    return -(eta + P * b_tilde)


def pqr_from_scales(scales: DerivedScales, E: float) -> PQRParams:
    P = scales.alpha + 0.5
    lam = spectral_lambda(scales, E)
    R = lam / scales.gamma + scales.b_tilde**2 / 4.0 - 2.0 * P - 1.0
    return PQRParams(P=P, qeta=qeta_from(scales.eta, P, scales.b_tilde), R=R)


def termination_energy(scales: DerivedScales, n: int) -> float:
    """Energy fixed by R = 2n."""
    P = scales.alpha + 0.5
    lam = scales.gamma * (2.0 * n + 2.0 * P + 1.0 - scales.b_tilde**2 / 4.0)
    return (lam + scales.shift) / (2.0 * scales.mu)


def heun_coefficients(pqr: PQRParams, b_tilde: float, eta: float, N: int) -> HeunSeries:
    if N < 0:
        raise ValueError("N must be >= 0")
    coeffs = kernels.heun_recurrence(pqr.qeta, b_tilde, pqr.P, pqr.R, N)
    return HeunSeries(np.asarray(coeffs), pqr, float(b_tilde), float(eta))


def termination_residuals(series: HeunSeries, n: int) -> tuple[float, float]:
    if series.degree < n + 1:
        raise ValueError(f"series has {series.degree + 1} coefficients, need at least {n + 2}")
    return series.pqr.R - 2.0 * n, float(series.coeffs[n + 1])


def termination_polynomial(P: float, b_tilde: float, R: float, n: int) -> Polynomial:
    """C_{n+1} as an exact polynomial in eta (degree n + 1)."""
    q = Polynomial([-P * b_tilde, -1.0])
    prev = Polynomial([0.0])
    cur = Polynomial([1.0])
    for j in range(-1, n):
        nxt = ((q - b_tilde * (j + 1)) * cur - (R - 2.0 * j) * prev) / ((j + 2) * (j + 2.0 * P + 1.0))
        prev, cur = cur, nxt
    return cur


def solve_eta_for_termination(pqr: PQRParams, b_tilde: float, n: int) -> list[float]:
    """Real eta with C_{n+1}(eta) = 0 at the given P and R, ascending.

    An empty list means every root is complex.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    poly = termination_polynomial(pqr.P, b_tilde, pqr.R, n)
    dpoly = poly.deriv()
    roots = []
    for z in poly.roots():
        scale = max(1.0, abs(z))
        if abs(z.imag) > _IMAG_CLEANUP * scale:
            continue
        x = z.real
        for _ in range(3):
            d = dpoly(x)
            if d == 0:
                break
            x -= poly(x) / d
        roots.append(float(x))
    return sorted(roots)


def eta_to_g(eta: float, scales: DerivedScales) -> float:
    return eta * math.sqrt(scales.gamma) / (2.0 * scales.mu)


def _termination_value(params: PhysParams, fields: FieldConfig, n: int, m: int) -> float:
    scales = derive_scales(params, fields, m)
    P = scales.alpha + 0.5
    pqr = PQRParams(P=P, qeta=qeta_from(scales.eta, P, scales.b_tilde), R=2.0 * n)
    return float(kernels.heun_recurrence(pqr.qeta, scales.b_tilde, P, pqr.R, n + 1)[n + 1])


def solve_B_for_termination(
    params: PhysParams,
    n: int,
    m: int,
    nu: float,
    bracket: tuple[float, float],
    panels: int = 64,
    xtol: float = 1e-12,
) -> list[float]:
    """Field strengths in ``bracket`` at which C_{n+1} = 0 with R = 2n.

    Roots are located by sign changes on ``panels`` uniform panels, so a root
    of even multiplicity is not reported.
    """
    lo, hi = map(float, bracket)
    if lo < 0 or not hi > lo:
        raise ValueError(f"bad bracket {bracket!r}")
    panels = max(int(panels), 64)

    def h(B):
        return _termination_value(params, FieldConfig(B=B, nu=nu), n, m)

    grid = np.linspace(lo, hi, panels + 1)
    vals = [h(B) for B in grid]
    roots = []
    for i in range(panels):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            roots.append(float(grid[i]))
        elif v0 * v1 < 0:
            roots.append(brentq(h, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return sorted(roots)


def wavefunction(scales: DerivedScales, series: HeunSeries, chi):
    """Value of the series ansatz at scaled radius ``chi`` (scalar or array)."""
    return wavefunction_derivatives(scales, series, chi)[0]


def wavefunction_derivatives(scales: DerivedScales, series: HeunSeries, chi):
    """``(f, f', f'')`` in ``chi``, from analytic differentiation of the ansatz."""
    chi = np.asarray(chi, dtype=float)
    flat = np.atleast_1d(chi).ravel()
    p, dp, ddp = kernels.poly_derivs(series.coeffs, flat)
    s = scales.alpha + 0.5
    bt = series.b_tilde
    with np.errstate(divide="ignore", invalid="ignore"):
        env = np.where(flat > 0, flat**s, 0.0 if s > 0 else 1.0) * np.exp(-flat * (flat - bt) / 2.0)
        phi1 = s / flat - flat + bt / 2.0
        phi2 = -s / flat**2 - 1.0
        f = env * p
        df = env * (phi1 * p + dp)
        d2f = env * ((phi2 + phi1**2) * p + 2.0 * phi1 * dp + ddp)
    zero = flat == 0
    df[zero] = 0.0
    d2f[zero] = 0.0
    shape = chi.shape
    return f.reshape(shape), df.reshape(shape), d2f.reshape(shape)


def count_positive_zeros(series: HeunSeries) -> int:
    roots = Polynomial(series.coeffs).roots()
    return int(sum(1 for z in roots if abs(z.imag) <= 1e-9 * max(1.0, abs(z)) and z.real > 0))


def bch_map(scales: DerivedScales, E: float) -> tuple[float, float, float, float]:
    """Canonical biconfluent Heun parameters (alpha_H, beta_H, gamma_H, delta_H)."""
    alpha_h = 2.0 * scales.alpha
    beta_h = scales.b_tilde
    gamma_h = spectral_lambda(scales, E) / scales.gamma + scales.b_tilde**2 / 4.0
    delta_h = 2.0 * scales.eta
    return alpha_h, beta_h, gamma_h, delta_h


@dataclass(frozen=True)
class QuasiExactSolution:
    n: int
    m: int
    g: float
    eta: float
    E: float
    scales: DerivedScales
    series: HeunSeries  # truncated to degree n
    residuals: tuple[float, float]


def quasi_exact_solutions(params: PhysParams, fields: FieldConfig, n: int, m: int, nonnegative_g: bool = True):
    """All polynomial solutions of degree n obtained by tuning g at fixed B."""
    base = derive_scales(params, fields, m)
    P = base.alpha + 0.5
    pqr0 = PQRParams(P=P, qeta=0.0, R=2.0 * n)
    out = []
    for eta in solve_eta_for_termination(pqr0, base.b_tilde, n):
        g = eta_to_g(eta, base)
        if g < 0:
            if nonnegative_g:
                continue
            # repulsive Coulomb is outside PhysParams; only eta changes
            scales = dataclasses.replace(base, eta=eta)
        else:
            scales = derive_scales(params.replace(g=g), fields, m)
        E = termination_energy(scales, n)
        pqr = pqr_from_scales(scales, E)
        full = heun_coefficients(pqr, scales.b_tilde, scales.eta, n + 1)
        out.append(
            QuasiExactSolution(
                n=n,
                m=m,
                g=g,
                eta=eta,
                E=E,
                scales=scales,
                series=full.truncated(n),
                residuals=termination_residuals(full, n),
            )
        )
    return out
