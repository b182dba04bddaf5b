"""Independent numerical check: finite differences on the reduced radial equation.

With u(r) = f(r)/sqrt(r) the radial equation becomes

    f'' = 2 mu (V_eff(r) - E) f,
    V_eff = (alpha^2 - 1/4)/(2 mu r^2) - g/r + b r + (gamma^2 / 2mu) r^2 + (m+nu) B / (2 mu),

Either form gives a symmetric tridiagonal matrix on a uniform grid, which is
diagonalised with LAPACK.  Grids centred on the origin use the flux form
-(1/r)(r u')' so that alpha = 0 states keep their regular sqrt(r) behaviour;
a Dirichlet wall at r_min > 0 cannot tell sqrt(r) from sqrt(r) ln r and
converges only logarithmically there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from cornellqes import heun, spectrum
from cornellqes.errors import GridTooCoarse, InvalidParameter
from cornellqes.model import FieldConfig, PhysParams, derive_scales


@dataclass(frozen=True)
class RadialGrid:
    """Uniform nodes ``r_min, r_min + h, ..., r_max``.

    A grid with ``r_min == h/2`` (built by :meth:`from_origin`) is treated as
    cell-centred around the origin and discretised in flux form with zero
    flux through r = 0; any other grid uses the plain 3-point f'' with a
    Dirichlet wall at ``r_min``.
    """

    r_min: float
    r_max: float
    N: int

    def __post_init__(self):
        if not (self.r_min > 0 and self.r_max > self.r_min):
            raise InvalidParameter(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.r_min < 1e-6 * self.r_max:
            raise InvalidParameter("r_min must be >= 1e-6 * r_max")
        if self.N < 100:
            raise InvalidParameter("N must be >= 100")

    @classmethod
    def from_origin(cls, r_max: float, N: int) -> RadialGrid:
        return cls(r_max / (2 * N - 1), r_max, N)

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.N - 1)

    @property
    def r(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.N)

    @property
    def origin_centred(self) -> bool:
        return abs(self.r_min - 0.5 * self.h) <= 1e-9 * self.h

    def refined(self) -> RadialGrid:
        """Same interval, (about) half the spacing."""
        if self.origin_centred:
            return RadialGrid.from_origin(self.r_max, 2 * self.N)
        return RadialGrid(self.r_min, self.r_max, 2 * self.N - 1)


def effective_potential(params: PhysParams, fields: FieldConfig, m: int, r):
    s = derive_scales(params, fields, m)
    mu = params.mu
    r = np.asarray(r, dtype=float)
    return (
        (s.alpha**2 - 0.25) / (2.0 * mu * r**2)
        - params.g / r
        + params.b * r
        + s.gamma_sq / (2.0 * mu) * r**2
        + s.shift / (2.0 * mu)
    )


def _tridiagonal(params, fields, m, grid):
    r = grid.r[:-1]  # last node carries the Dirichlet wall
    h = grid.h
    mu = params.mu
    if grid.origin_centred:
        # flux form of -(1/r)(r u')' on cells [r - h/2, r + h/2], symmetrised by sqrt(r h)
        s = derive_scales(params, fields, m)
        faces_hi = r + 0.5 * h
        faces_lo = r - 0.5 * h
        faces_lo[0] = 0.0
        w = effective_potential(params, fields, m, r) - (s.alpha**2 - 0.25) / (2.0 * mu * r**2)
        diag = (faces_hi + faces_lo) / (2.0 * mu * h * h * r) + s.alpha**2 / (2.0 * mu * r**2) + w
        off = -faces_hi[:-1] / (2.0 * mu * h * h * np.sqrt(r[:-1] * r[1:]))
        return diag, off, 0
    r = r[1:]
    kin = 1.0 / (2.0 * mu * h * h)
    diag = 2.0 * kin + effective_potential(params, fields, m, r)
    return diag, np.full(r.size - 1, -kin), 1


@dataclass(frozen=True)
class Eigenpairs:
    energies: np.ndarray
    vectors: np.ndarray  # f on grid.r, shape (N, k), int f^2 dr = 1
    grid: RadialGrid


def diagonalize(
    params: PhysParams,
    fields: FieldConfig,
    m: int,
    grid: RadialGrid,
    k: int = 5,
    tol: float | None = None,
) -> Eigenpairs:
    """Lowest ``k`` eigenpairs of -f''/(2mu) + V_eff f on ``grid``.

    With ``tol`` set, the Richardson error estimate of every returned level is
    checked and :class:`GridTooCoarse` raised when any exceeds it.
    """
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    diag, off, first = _tridiagonal(params, fields, m, grid)
    k = min(k, diag.size)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    vecs = np.zeros((grid.N, k))
    # unit vectors are sqrt(h) f, so sum h f^2 = 1 (trapezoid rule, zero end values)
    vecs[first : first + diag.size] = v / math.sqrt(grid.h)
    if tol is not None:
        rich = richardson_eigenvalues(params, fields, m, grid, k)
        worst = float(np.max(rich.error))
        if worst > tol:
            raise GridTooCoarse(f"Richardson error estimate {worst:.3e} exceeds tol {tol:.3e}")
    return Eigenpairs(w, vecs, grid)


@dataclass(frozen=True)
class RichardsonResult:
    coarse: np.ndarray
    fine: np.ndarray
    extrapolated: np.ndarray
    error: np.ndarray  # estimated error of ``fine``


def richardson_eigenvalues(params, fields, m, grid: RadialGrid, k: int) -> RichardsonResult:
    """Second-order extrapolation from ``grid`` and its refinement."""
    fine_grid = grid.refined()
    coarse = diagonalize(params, fields, m, grid, k).energies
    fine = diagonalize(params, fields, m, fine_grid, k).energies
    h1, h2 = grid.h**2, fine_grid.h**2
    extrap = (h1 * fine - h2 * coarse) / (h1 - h2)
    return RichardsonResult(coarse, fine, extrap, np.abs(fine - extrap))


def count_nodes(vector, rel_cutoff: float = 1e-7) -> int:
    v = np.asarray(vector)
    big = v[np.abs(v) > rel_cutoff * np.max(np.abs(v))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def default_grid(
    params: PhysParams,
    fields: FieldConfig,
    m: int,
    e_ceiling: float,
    N: int = 4000,
    decay_action: float = 25.0,
) -> RadialGrid:
    """Grid reaching ``decay_action`` WKB e-folds beyond the outer turning point of ``e_ceiling``."""
    mu = params.mu

    def excess(r):
        return effective_potential(params, fields, m, r) - e_ceiling

    # start beyond the oscillator length so the inner centrifugal wall is not mistaken for the outer one
    hi = max(1.0, 8.0 / math.sqrt(derive_scales(params, fields, m).gamma))
    while excess(hi) <= 0:
        hi *= 2.0
    # last classically allowed radius; V_eff grows like r^2 at large r
    rs = np.geomspace(1e-6 * hi, hi, 4000)
    ex = excess(rs)
    inside = np.flatnonzero(ex <= 0)
    if inside.size == 0:
        r_turn = rs[0]
    else:
        i = int(inside[-1])
        r_turn = brentq(excess, rs[i], rs[i + 1]) if i + 1 < rs.size else rs[i]
    span = max(r_turn, 1.0)
    while True:
        rr = np.linspace(r_turn, r_turn + span, 4001)
        kappa = np.sqrt(np.maximum(2.0 * mu * excess(rr), 0.0))
        action = np.concatenate([[0.0], np.cumsum(0.5 * (kappa[1:] + kappa[:-1]) * np.diff(rr))])
        if action[-1] >= decay_action:
            r_max = float(rr[np.searchsorted(action, decay_action)])
            break
        span *= 2.0
    return RadialGrid.from_origin(r_max, N)


def ansatz(scales, series):
    """Callable chi -> (f, f', f'') for the series solution."""

    def f(chi):
        return heun.wavefunction_derivatives(scales, series, chi)

    return f


def ode_residual(
    params: PhysParams,
    fields: FieldConfig,
    m: int,
    E: float,
    f,
    chi_range: tuple[float, float] = (0.01, 10.0),
    samples: int = 400,
) -> float:
    """Max |f'' + [lambda/gamma - (alpha^2-1/4)/chi^2 + eta/chi + b_tilde chi - chi^2] f|
    over log-spaced chi, divided by the largest single term magnitude."""
    s = derive_scales(params, fields, m)
    chi = np.geomspace(chi_range[0], chi_range[1], samples)
    val, _, d2 = f(chi)
    lam = heun.spectral_lambda(s, E) / s.gamma
    terms = np.stack(
        [
            d2,
            lam * val,
            -(s.alpha**2 - 0.25) / chi**2 * val,
            s.eta / chi * val,
            s.b_tilde * chi * val,
            -(chi**2) * val,
        ]
    )
    scale = np.max(np.abs(terms))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(terms.sum(axis=0))) / scale)


@dataclass
class BranchReport:
    label: str
    g: float
    closed_form_E: float
    nearest_numeric_E: float
    extrapolated_E: float
    richardson_error: float
    numeric_index: int
    numeric_nodes: int
    analytic_nodes: int | None
    residual_norm: float
    termination_residual: float

    @property
    def abs_gap(self) -> float:
        return abs(self.closed_form_E - self.extrapolated_E)

    @property
    def rel_gap(self) -> float:
        return self.abs_gap / max(abs(self.closed_form_E), 1e-300)


@dataclass
class OracleReport:
    n: int
    m: int
    params: PhysParams
    fields: FieldConfig
    printed_E: float
    termination_E: float
    constraint_g: float
    branches: list[BranchReport] = field(default_factory=list)

    def branch(self, label: str) -> list[BranchReport]:
        return [b for b in self.branches if b.label == label]


def nearest_level(params, fields, m, E, grid: RadialGrid, k0: int = 8, k_max: int = 400):
    """Index of the numeric level closest to ``E`` plus its Richardson data."""
    k = k0
    while True:
        pairs = diagonalize(params, fields, m, grid, k)
        if pairs.energies[-1] > E or k >= k_max:
            break
        k *= 2
    j = int(np.argmin(np.abs(pairs.energies - E)))
    rich = richardson_eigenvalues(params, fields, m, grid, j + 1)
    return j, pairs, rich


def _branch(label, params, fields, m, n, E, series, scales, grid, termination_residual):
    j, pairs, rich = nearest_level(params, fields, m, E, grid)
    if series is not None:
        resid = ode_residual(params, fields, m, E, ansatz(scales, series))
        analytic_nodes = heun.count_positive_zeros(series)
    else:
        resid, analytic_nodes = math.nan, None
    return BranchReport(
        label=label,
        g=params.g,
        closed_form_E=E,
        nearest_numeric_E=float(rich.fine[j]),
        extrapolated_E=float(rich.extrapolated[j]),
        richardson_error=float(rich.error[j]),
        numeric_index=j,
        numeric_nodes=count_nodes(pairs.vectors[:, j]),
        analytic_nodes=analytic_nodes,
        residual_norm=resid,
        termination_residual=termination_residual,
    )


def validate_quasi_exact(
    params: PhysParams,
    fields: FieldConfig,
    n: int,
    m: int,
    grid: RadialGrid | None = None,
    N: int = 4000,
) -> OracleReport:
    """Compare closed forms with the finite-difference spectrum.

    Branch ``constraint-printed`` and ``constraint-termination``: g from the quasi-exactness
    constraint (l = m) with the printed level and with the R = 2n level.
    Branch ``rigorous``: each non-negative g solving C_{n+1} = 0 at R = 2n.
    Gaps are reported, never asserted.
    """
    g_c = spectrum.quasi_exact_g(n, m, params.a, params.b, params.mu)
    p_c = params.replace(g=g_c)
    printed = spectrum.energy(p_c, fields, n, m, g_constraint="constraint").E
    term = spectrum.energy_termination(p_c, fields, n, m).E
    report = OracleReport(n, m, params, fields, printed, term, g_c)

    scales = derive_scales(p_c, fields, m)
    pqr = heun.pqr_from_scales(scales, term)
    full = heun.heun_coefficients(pqr, scales.b_tilde, scales.eta, n + 1)
    c_next = float(full.coeffs[n + 1])
    g_grid = grid or default_grid(p_c, fields, m, max(printed, term) + abs(scales.Theta), N=N)
    report.branches.append(_branch("constraint-printed", p_c, fields, m, n, printed, None, scales, g_grid, c_next))
    report.branches.append(
        _branch("constraint-termination", p_c, fields, m, n, term, full.truncated(n), scales, g_grid, c_next)
    )

    for sol in heun.quasi_exact_solutions(params, fields, n, m):
        p = params.replace(g=sol.g)
        s_grid = grid or default_grid(p, fields, m, sol.E + abs(sol.scales.Theta), N=N)
        report.branches.append(
            _branch("rigorous", p, fields, m, n, sol.E, sol.series, sol.scales, s_grid, sol.residuals[1])
        )
    return report
