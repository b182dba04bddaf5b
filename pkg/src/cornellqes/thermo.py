"""Canonical thermodynamics of the level ladder omega_n = (Theta/2)(2n + Xi), n >= 1.

Two routes are provided:

* exact: direct summation of G = ln Z = -sum_n ln(1 - exp(-beta omega_n)) with
  derived quantities from central differences (Richardson-refined);
* closed: the published small-(2 alpha + Sigma) expansions for G, U, C_V, F,
  S, the persistent current I and the magnetization M, coded as printed, plus
  the (2 alpha + Sigma) -> 0 limit formulas.

The closed forms are *not* corrected here; :func:`cornellqes.audit.thermo_audit`
measures how far each one is from the derivative it claims to be.
k_B = hbar = 1, so T is in energy units and beta = 1/T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import xlogy, zeta

from cornellqes import kernels
from cornellqes.errors import InvalidParameter, NonConvergent
from cornellqes.model import FLUX_QUANTUM, FieldConfig, PhysParams, derive_scales

PI = math.pi
PI2 = PI * PI
# recurring constant (2 - pi^2/4) of the expansions
C24 = 2.0 - PI2 / 4.0
ZETA3 = float(zeta(3.0))


@dataclass(frozen=True)
class Ladder:
    """Level spacing ``Theta`` and offset ``Xi``; duck-types :class:`DerivedScales`."""

    Theta: float
    Xi: float

    @property
    def s(self) -> float:
        """2 alpha + Sigma."""
        return self.Xi - 1.0


def ladder_of(scales) -> Ladder:
    return Ladder(Theta=scales.Theta, Xi=scales.Xi)


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    G: float
    U: float
    C_V: float
    F: float
    S: float
    I: float
    M: float
    method: str


def level_energy(scales, n: int) -> float:
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return 0.5 * scales.Theta * (2.0 * n + scales.Xi)


def partition_exact(scales, beta: float, tol: float = 1e-14, max_terms: int = 10**7, level=None) -> float:
    """G = -sum_{n>=1} ln(1 - exp(-beta omega_n)), summed until a term < ``tol`` (after n > 10).

    ``level`` may be any callable ``n -> omega_n``; by default the ladder of ``scales``.
    """
    if not beta > 0:
        raise InvalidParameter("beta must be > 0")
    if level is None:
        first = level_energy(scales, 1)
        if not beta * first > 0 or not scales.Theta > 0:
            raise NonConvergent(f"first Boltzmann exponent {-beta * first:.6g} is not negative")
        total, _, ok = kernels.ladder_log_sum(first, scales.Theta, beta, tol, 10, max_terms)
        if not ok:
            raise NonConvergent(f"ladder sum not converged after {max_terms} terms")
        return total
    total = 0.0
    for n in range(1, max_terms + 1):
        x = beta * level(n)
        if n == 1 and not x > 0:
            raise NonConvergent(f"first Boltzmann exponent {-x:.6g} is not negative")
        term = -math.log1p(-math.exp(-x))
        total += term
        if n > 10 and term < tol:
            return total
    raise NonConvergent(f"level sum not converged after {max_terms} terms")


# ---------------------------------------------------------------- closed forms


def characteristic_closed(scales, beta: float) -> float:
    th, s = scales.Theta, scales.Xi - 1.0
    L = math.log(4.0 * PI / (beta * th))
    return (
        -0.5 * s * (L + th * beta / 2.0 - C24 * PI2 / (3.0 * th * beta))
        - L
        - 11.0 * th * beta / 48.0
        + PI2 / (6.0 * th * beta)
    )


def mean_energy_closed(scales, T: float) -> float:
    th, s = scales.Theta, scales.Xi - 1.0
    return (
        -T
        + 11.0 / 48.0 * th
        + PI2 * T * T / (6.0 * th)
        - 0.5 * s * (T - 0.5 * th - PI2 * T * T / (3.0 * th) * C24)
    )


def specific_heat_closed(scales, T: float) -> float:
    th, s = scales.Theta, scales.Xi - 1.0
    return 1.0 - PI2 * T / (3.0 * th) + 0.5 * s * (1.0 - 2.0 * PI2 * T / (3.0 * th) * C24)


def free_energy_closed(scales, T: float) -> float:
    """Printed free energy, written in T so that T = 0 is the limit (0 ln 0 = 0)."""
    th, s = scales.Theta, scales.Xi - 1.0
    # (1/beta) ln(4 pi / (beta Theta)) = T ln(4 pi T / Theta)
    TL = float(xlogy(T, 4.0 * PI * T / th))
    return 0.5 * s * (TL + th / 2.0 - C24 * PI2 * T * T / (3.0 * th)) + TL + 11.0 * th / 48.0 - PI2 * T * T / (6.0 * th)


def entropy_closed(scales, T: float) -> float:
    th, s = scales.Theta, scales.Xi - 1.0
    L = math.log(4.0 * PI * T / th)
    x = th / T
    return -0.5 * s * (L - C24 * 2.0 * PI2 / (3.0 * x) + 1.0) - L + PI2 / (3.0 * x) - 1.0


def _gtilde(params: PhysParams, fields: FieldConfig) -> float:
    return 8.0 * params.mu * params.a + fields.B**2


def persistent_current_closed(params: PhysParams, fields: FieldConfig, m: int, T: float) -> float:
    beta = 1.0 / T
    gt = _gtilde(params, fields)
    omega_c = fields.B / params.mu
    bracket = (
        1.0 / (2.0 * beta) * math.log(8.0 * PI / beta / gt)
        + beta / 4.0 * gt
        - 2.0 * PI2 / (3.0 * beta) / gt * C24
    )
    return -1.0 / (4.0 * beta) * omega_c / FLUX_QUANTUM * bracket


def magnetization_closed(params: PhysParams, fields: FieldConfig, m: int, T: float) -> float:
    mu, a, b = params.mu, params.a, params.b
    B = fields.B
    mnu = m + fields.nu
    gt = _gtilde(params, fields)
    rg = math.sqrt(gt)
    first = (
        2.0
        * (B * (24.0 * b * b * mu * mu / gt**2.5) + mnu / (2.0 * mu))
        * (math.log(8.0 * PI * mu / rg * T) + rg / (4.0 * mu * T) - 2.0 * PI2 * mu / (3.0 * rg) * C24 * T)
        * T
    )
    second = (
        0.5
        * (2.0 * abs(mnu) + 1.0 - 8.0 * b * b * mu * mu / gt**1.5 + B / (2.0 * mu) * mnu)
        * (
            1.0 / (4.0 * T * mu) * (2.0 * mu * a + B * B) ** -0.5
            - 1.0 / gt
            + 2.0 * PI2 * mu / (3.0 * gt**1.5) * C24 * T
        )
        * B
        * T
    )
    third = B * (T / gt - 11.0 / (96.0 * mu * rg) - PI2 * T * T * mu / (3.0 * gt**1.5))
    return first - second + third


def dG_ddelta_appendix(Xi: float, delta: float) -> float:
    """Printed zeta-function expansion of dG/d(delta), delta = beta Theta / (4 pi)."""
    if not delta > 0:
        raise InvalidParameter("delta must be > 0")
    d = Xi - 1.0
    return (
        -PI / (94.0 * delta**2) * (0.25 - (PI2 - 8.0) * d + (7.0 * ZETA3 - 8.0) * d * d)
        - PI / 12.0 * (3.0 * Xi * (Xi + 2.0) + 2.0)
        + (Xi + 1.0) / (2.0 * delta)
    )


def dG_ddelta_exact(Xi: float, delta: float, tol: float = 1e-15) -> float:
    """Central difference in delta of the directly summed G (Richardson-refined)."""

    def G(dl):
        total, _, ok = kernels.ladder_log_sum(2.0 * PI * dl * (2.0 + Xi), 4.0 * PI * dl, 1.0, tol, 10, 10**7)
        if not ok:
            raise NonConvergent("ladder sum not converged")
        return total

    return derivative(G, delta, 1e-4 * delta)


def limit_small(scales, beta: float) -> ThermoPoint:
    """The (2 alpha + Sigma) -> 0 formulas, coded as printed."""
    th = scales.Theta
    x = beta * th
    delta = x / (4.0 * PI)
    lg = math.log(x / (4.0 * PI))
    G = lg - 11.0 * x / 48.0 + PI2 / (6.0 * x)
    C_V = 1.0 - PI2 / (3.0 * x)
    F = -PI2 / (6.0 * beta * beta * th) + lg / beta + 11.0 * th / 48.0
    U = 11.0 * PI * delta / (12.0 * beta) - 1.0 / beta - PI / (6.0 * th * beta * beta)
    S = -1.0 + lg + PI2 / (3.0 * x)
    return ThermoPoint(1.0 / beta, G, U, C_V, F, S, math.nan, math.nan, "limit")


def thermo_closed(params: PhysParams, fields: FieldConfig, m: int, T: float) -> ThermoPoint:
    scales = derive_scales(params, fields, m)
    return _closed_point(scales, T, persistent_current_closed(params, fields, m, T), magnetization_closed(params, fields, m, T))


def thermo_closed_ladder(ladder, T: float) -> ThermoPoint:
    return _closed_point(ladder, T, math.nan, math.nan)


def _closed_point(scales, T, current, magnetization):
    return ThermoPoint(
        T=T,
        G=characteristic_closed(scales, 1.0 / T),
        U=mean_energy_closed(scales, T),
        C_V=specific_heat_closed(scales, T),
        F=free_energy_closed(scales, T),
        S=entropy_closed(scales, T),
        I=current,
        M=magnetization,
        method="closed",
    )


# ---------------------------------------------------------------- exact path


def derivative(f, x: float, h: float, order: int = 1, lower: float | None = None) -> float:
    """Central difference of ``f`` at ``x`` with one Richardson step (error O(h^4)).

    When ``x - 2h`` would cross ``lower`` the step is shrunk; at the bound itself
    a second-order one-sided formula is used.
    """
    if lower is not None and x - 2.0 * h < lower:
        if x - lower > 0:
            h = (x - lower) / 2.0
        elif order == 1:
            return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
        else:
            raise InvalidParameter("second derivative at a bound is not supported")
    if order == 1:

        def d(step):
            return (f(x + step) - f(x - step)) / (2.0 * step)

    elif order == 2:
        fx = f(x)

        def d(step):
            return (f(x + step) - 2.0 * fx + f(x - step)) / (step * step)

    else:
        raise InvalidParameter("order must be 1 or 2")
    return (4.0 * d(h / 2.0) - d(h)) / 3.0


def _exact_point(G_of, T, rel_step, current=math.nan, magnetization=math.nan):
    """G_of(beta) -> ln Z; everything else by differences."""
    beta = 1.0 / T
    G = G_of(beta)
    F = -G / beta
    U = -derivative(G_of, beta, rel_step * beta)
    S = -derivative(lambda t: -t * G_of(1.0 / t), T, rel_step * T)
    C_V = beta * beta * derivative(G_of, beta, math.sqrt(rel_step) * 0.3 * beta, order=2)
    return ThermoPoint(T, G, U, C_V, F, S, current, magnetization, "exact")


def thermo_exact(params: PhysParams, fields: FieldConfig, m: int, T: float, rel_step: float = 1e-5) -> ThermoPoint:
    """Exact-sum thermodynamics; I = -dF/dPhi_AB (via nu at fixed B), M = -dF/dB."""
    if not T > 0:
        raise InvalidParameter("T must be > 0")
    beta = 1.0 / T

    def F_at(B, nu):
        lad = ladder_of(derive_scales(params, FieldConfig(B=B, nu=nu), m))
        return -partition_exact(lad, beta, tol=1e-16) / beta

    nu, B = fields.nu, fields.B
    current = -derivative(lambda v: F_at(B, v), nu, rel_step * max(1.0, abs(nu))) / FLUX_QUANTUM
    magnetization = -derivative(lambda b: F_at(b, nu), B, rel_step * max(1.0, B), lower=0.0)
    lad = ladder_of(derive_scales(params, fields, m))
    return _exact_point(lambda b: partition_exact(lad, b, tol=1e-16), T, rel_step, current, magnetization)


def thermo_exact_ladder(ladder, T: float, rel_step: float = 1e-5) -> ThermoPoint:
    if not T > 0:
        raise InvalidParameter("T must be > 0")
    return _exact_point(lambda b: partition_exact(ladder, b, tol=1e-16), T, rel_step)
