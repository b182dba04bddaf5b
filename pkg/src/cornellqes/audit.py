"""Discrepancy table: each printed closed form against what it claims to equal.

Entries are findings, not assertions.  ``printed`` is the closed form as
coded, ``reference`` is the independent value (a finite-difference derivative,
a direct sum or a rigorous root), and the differences are reported as-is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from cornellqes import heun, spectrum, thermo
from cornellqes.model import FLUX_QUANTUM, FieldConfig, PhysParams, derive_scales

DELTAS = (0.01, 0.02, 0.05)


@dataclass(frozen=True)
class AuditEntry:
    key: str
    description: str
    printed: float
    reference: float

    @property
    def abs_diff(self) -> float:
        return abs(self.printed - self.reference)

    @property
    def rel_diff(self) -> float:
        if self.reference == 0:
            return math.inf if self.printed != 0 else 0.0
        return self.abs_diff / abs(self.reference)


def constraint_g_audit(params: PhysParams, fields: FieldConfig, n: int, m: int) -> list[AuditEntry]:
    """Field-independent g constraint (l = m) against the rigorous termination roots."""
    g_c = spectrum.quasi_exact_g(n, m, params.a, params.b, params.mu)
    roots = [s.g for s in heun.quasi_exact_solutions(params, fields, n, m)]
    if not roots:
        return [AuditEntry(f"g-constraint-vs-rigorous[n={n},m={m}]", "no non-negative rigorous g root", g_c, math.nan)]
    nearest = min(roots, key=lambda g: abs(g - g_c))
    return [
        AuditEntry(
            f"g-constraint-vs-rigorous[n={n},m={m}]",
            f"g from the l=m constraint vs nearest of {len(roots)} rigorous root(s) at B={fields.B:g}",
            g_c,
            nearest,
        )
    ]


def spacing_audit(params: PhysParams, fields: FieldConfig, m: int) -> AuditEntry:
    """Spacing of the published level formula against the thermodynamic ladder spacing Theta."""
    e1 = spectrum.energy(params, fields, 1, m).E
    e2 = spectrum.energy(params, fields, 2, m).E
    scales = derive_scales(params, fields, m)
    return AuditEntry(
        "level-spacing-ratio",
        "E(n+1)-E(n) of the published level formula vs ladder spacing Theta (ratio 2 expected)",
        e2 - e1,
        scales.Theta,
    )


def zeta_expansion_audit(Xi: float, deltas=DELTAS) -> list[AuditEntry]:
    out = []
    for d in deltas:
        out.append(
            AuditEntry(
                f"zeta-expansion-vs-fd[delta={d:g}]",
                f"printed dG/d(delta) expansion vs central difference of the direct sum, Xi={Xi:g}",
                thermo.dG_ddelta_appendix(Xi, d),
                thermo.dG_ddelta_exact(Xi, d),
            )
        )
    # at Xi = 1 the small-(2 alpha + Sigma) G gives 1/delta - 11 pi/12 - pi/(24 delta^2)
    d = deltas[0]
    out.append(
        AuditEntry(
            f"zeta-expansion-vs-limit[delta={d:g}]",
            "printed expansion at Xi=1 vs derivative of the small-(2alpha+Sigma) G",
            thermo.dG_ddelta_appendix(1.0, d),
            1.0 / d - 11.0 * math.pi / 12.0 - math.pi / (24.0 * d * d),
        )
    )
    return out


def thermo_audit(params: PhysParams, fields: FieldConfig, m: int, T: float, rel_step: float = 1e-5) -> list[AuditEntry]:
    scales = derive_scales(params, fields, m)
    beta = 1.0 / T

    def G(b):
        return thermo.characteristic_closed(scales, b)

    def U(t):
        return thermo.mean_energy_closed(scales, t)

    def F(t):
        return thermo.free_energy_closed(scales, t)

    def F_fields(B, nu):
        return thermo.free_energy_closed(derive_scales(params, FieldConfig(B=B, nu=nu), m), T)

    h = rel_step * T
    dF_dnu = thermo.derivative(lambda v: F_fields(fields.B, v), fields.nu, rel_step * max(1.0, abs(fields.nu)))
    dF_dB = thermo.derivative(lambda b: F_fields(b, fields.nu), fields.B, rel_step * max(1.0, fields.B), lower=0.0)
    lad1 = thermo.Ladder(scales.Theta, 1.0)
    lim = thermo.limit_small(lad1, beta)
    s = scales.Xi - 1.0
    return [
        AuditEntry("U-closed-vs-dG", "closed U vs -dG/dbeta of closed G", U(T), -thermo.derivative(G, beta, rel_step * beta)),
        AuditEntry("Cv-closed-vs-dU", "closed C_V vs +dU/dT of closed U", thermo.specific_heat_closed(scales, T), thermo.derivative(U, T, h)),
        AuditEntry("F-closed-vs-G", "closed F vs -T G of closed G", F(T), -T * G(beta)),
        AuditEntry("S-closed-vs-dF", "closed S vs -dF/dT of closed F", thermo.entropy_closed(scales, T), -thermo.derivative(F, T, h)),
        AuditEntry(
            "current-closed-vs-fd",
            "closed persistent current vs -dF/dPhi_AB of closed F",
            thermo.persistent_current_closed(params, fields, m, T),
            -dF_dnu / FLUX_QUANTUM,
        ),
        AuditEntry(
            "magnetization-closed-vs-fd",
            "closed magnetization vs -dF/dB of closed F",
            thermo.magnetization_closed(params, fields, m, T),
            -dF_dB,
        ),
        AuditEntry("F-zero-T", "closed F at T=0 vs stated constant 11 Theta/48", F(0.0), 11.0 * scales.Theta / 48.0),
        AuditEntry("U-zero-T", "closed U at T=0 vs stated (Theta/4)(2alpha+Sigma+11/12)", U(0.0), scales.Theta / 4.0 * (s + 11.0 / 12.0)),
        AuditEntry("Cv-zero-T", "closed C_V at T=0 vs stated 1+(2alpha+Sigma)/2", thermo.specific_heat_closed(scales, 0.0), 1.0 + s / 2.0),
        AuditEntry("limit-G-vs-closed", "limit G vs closed G at 2alpha+Sigma=0", lim.G, thermo.characteristic_closed(lad1, beta)),
        AuditEntry("limit-U-vs-closed", "limit U vs closed U at 2alpha+Sigma=0", lim.U, thermo.mean_energy_closed(lad1, T)),
        AuditEntry("limit-Cv-vs-closed", "limit C_V vs closed C_V at 2alpha+Sigma=0", lim.C_V, thermo.specific_heat_closed(lad1, T)),
        AuditEntry("limit-F-vs-closed", "limit F vs closed F at 2alpha+Sigma=0", lim.F, thermo.free_energy_closed(lad1, T)),
        AuditEntry("limit-S-vs-closed", "limit S vs closed S at 2alpha+Sigma=0", lim.S, thermo.entropy_closed(lad1, T)),
        AuditEntry("G-closed-vs-exact", "closed G vs direct ladder sum", G(beta), thermo.partition_exact(scales, beta)),
    ]


def full_audit(params: PhysParams, fields: FieldConfig, n: int, m: int, T: float) -> list[AuditEntry]:
    scales = derive_scales(params, fields, m)
    entries = []
    if fields.B > 0:
        entries += constraint_g_audit(params, fields, n, m)
    entries.append(spacing_audit(params, fields, m))
    entries += zeta_expansion_audit(scales.Xi)
    entries += thermo_audit(params, fields, m, T)
    return entries
