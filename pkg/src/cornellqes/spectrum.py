"""Closed-form levels, quarkonium masses and parameter scans."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from cornellqes import heun
from cornellqes.errors import CornellQESError, DegenerateScale, InvalidParameter, MissingQuarkMass
from cornellqes.model import DerivedScales, FieldConfig, PhysParams, QuantumState, derive_scales, preset

SCAN_AXES = ("a", "b", "B", "nu")


@dataclass(frozen=True)
class LevelResult:
    E: float
    n: int
    m: int
    scales: DerivedScales
    g_constraint_used: str = "none"  # one of constraint, termination, none


@dataclass(frozen=True)
class MassEntry:
    species: str
    n: int
    m: int
    B: float
    nu: float
    g: float
    E: float
    M: float


@dataclass(frozen=True)
class ScanRow:
    x: float
    E: float
    valid: bool


def _radical_sq(params: PhysParams, fields: FieldConfig) -> float:
    return 8.0 * params.mu * params.a + fields.B**2


def printed_level_lhs(params: PhysParams, fields: FieldConfig, n: int, m: int, E: float) -> float:
    """Left side of the published energy equation; zero at the printed level."""
    X = _radical_sq(params, fields)
    mnu = m + fields.nu
    mu, b = params.mu, params.b
    return 2.0 * math.sqrt(X) * (n + 1 + abs(mnu)) - 2.0 * mu * E + mnu * fields.B - mu * mu * b * b / X


def energy(params: PhysParams, fields: FieldConfig, n: int, m: int, g_constraint: str = "none") -> LevelResult:
    """Level from the published energy equation (the one behind the mass table).

    The Coulomb strength does not enter; it is fixed separately by the
    quasi-exactness constraint.
    """
    QuantumState(n, m)
    X = _radical_sq(params, fields)
    if not X > 0:
        raise DegenerateScale("8 mu a + B^2 must be > 0")
    scales = derive_scales(params, fields, m)
    mnu = m + fields.nu
    mu, b = params.mu, params.b
    E = (2.0 * math.sqrt(X) * (n + 1 + abs(mnu)) + mnu * fields.B - mu * mu * b * b / X) / (2.0 * mu)
    return LevelResult(E=E, n=n, m=m, scales=scales, g_constraint_used=g_constraint)


def energy_termination(params: PhysParams, fields: FieldConfig, n: int, m: int) -> LevelResult:
    """Level implied by R = 2n for the series in the scaled radial equation.

    Equals ``(Theta/2)(2n + Xi)``; differs from :func:`energy` by a factor two
    in the ladder term and four in the ``b^2`` term.
    """
    QuantumState(n, m)
    scales = derive_scales(params, fields, m)
    return LevelResult(E=heun.termination_energy(scales, n), n=n, m=m, scales=scales, g_constraint_used="termination")


def quasi_exact_g(n: int, l: int, a: float, b: float, mu: float) -> float:
    if a <= 0 or mu <= 0:
        raise InvalidParameter("a and mu must be > 0")
    return (n + l + 1) * b * math.sqrt(1.0 / (2.0 * a * mu))


def mass(params: PhysParams, fields: FieldConfig, n: int, m: int, species: str = "") -> MassEntry:
    if params.quark_mass is None:
        raise MissingQuarkMass("params.quark_mass is required for a mass spectrum")
    level = energy(params, fields, n, m)
    return MassEntry(
        species=species,
        n=n,
        m=m,
        B=fields.B,
        nu=fields.nu,
        g=params.g,
        E=level.E,
        M=2.0 * params.quark_mass + level.E,
    )


MASS_TABLE_STATES = ((1, 1), (2, 1), (2, 2))
MASS_TABLE_LAYOUT = (("charmonium", 2.0), ("charmonium", 4.0), ("bottomonium", 2.0))


def mass_table(species: str | None = None, nu: float = 2.0) -> list[MassEntry]:
    """Reconstructed mass table, ordered by (species, B) block then (n, m)."""
    rows = []
    for name, B in MASS_TABLE_LAYOUT:
        if species is not None and name != species:
            continue
        base, _ = preset(name)
        fields = FieldConfig(B=B, nu=nu)
        for n, m in MASS_TABLE_STATES:
            g = quasi_exact_g(n, m, base.a, base.b, base.mu)
            rows.append(mass(base.replace(g=g), fields, n, m, species=name))
    return rows


def mass_table_reference() -> list[dict]:
    """Printed table values with their column meaning (see the data file header)."""
    text = resources.files("cornellqes").joinpath("data/mass_table.csv").read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    out = []
    for row in csv.DictReader(lines):
        out.append(
            {
                "species": row["species"],
                "n": int(row["n"]),
                "m": int(row["m"]),
                **{k: float(row[k]) for k in ("B", "nu", "quark_mass", "b", "a", "g", "M")},
            }
        )
    return out


def _apply_axis(params, fields, axis, x):
    if axis in ("a", "b"):
        return params.replace(**{axis: x}), fields
    if axis in ("B", "nu"):
        return params, fields.replace(**{axis: x})
    raise InvalidParameter(f"unknown scan axis {axis!r}; choose from {SCAN_AXES}")


def scan_energy(
    params: PhysParams,
    fields: FieldConfig,
    n: int,
    m: int,
    axis: str,
    lo: float,
    hi: float,
    steps: int,
) -> list[ScanRow]:
    """Sample the printed level along one parameter; invalid points give ``valid=False`` rows."""
    if axis not in SCAN_AXES:
        raise InvalidParameter(f"unknown scan axis {axis!r}; choose from {SCAN_AXES}")
    if steps < 2:
        raise InvalidParameter("steps must be >= 2")
    rows = []
    for x in np.linspace(lo, hi, steps):
        x = float(x)
        try:
            p, f = _apply_axis(params, fields, axis, x)
            rows.append(ScanRow(x, energy(p, f, n, m).E, True))
        except CornellQESError:
            rows.append(ScanRow(x, math.nan, False))
    return rows
