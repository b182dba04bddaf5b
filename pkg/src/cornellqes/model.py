"""Physical parameters, field configuration and derived dimensionless scales.

Natural units hbar = c = e = k_B = 1 throughout.  The magnetic field ``B`` is
stored as the number for which ``mu * omega_c = B``; the Aharonov-Bohm flux is
stored as the ratio ``nu = Phi_AB / Phi_0`` with ``Phi_0 = 2*pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from cornellqes.errors import DegenerateScale, InvalidParameter, UnknownPreset

FLUX_QUANTUM = 2.0 * math.pi


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameter(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysParams:
    """Potential V(r) = a r^2 + b r - g/r for a pair of reduced mass ``mu``."""

    mu: float
    a: float
    b: float = 0.0
    g: float = 0.0
    quark_mass: float | None = None

    def __post_init__(self):
        for name in ("mu", "a", "b", "g"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.mu <= 0:
            raise InvalidParameter(f"mu must be > 0, got {self.mu}")
        if self.a <= 0:
            raise InvalidParameter(f"a must be > 0, got {self.a}")
        if self.b < 0:
            raise InvalidParameter(f"b must be >= 0, got {self.b}")
        if self.g < 0:
            raise InvalidParameter(f"g must be >= 0, got {self.g}")
        if self.quark_mass is not None:
            mq = _finite("quark_mass", self.quark_mass)
            if mq <= 0:
                raise InvalidParameter(f"quark_mass must be > 0, got {mq}")
            object.__setattr__(self, "quark_mass", mq)

    def replace(self, **changes) -> PhysParams:
        fields = dict(mu=self.mu, a=self.a, b=self.b, g=self.g, quark_mass=self.quark_mass)
        fields.update(changes)
        return PhysParams(**fields)


@dataclass(frozen=True)
class FieldConfig:
    B: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "B", _finite("B", self.B))
        object.__setattr__(self, "nu", _finite("nu", self.nu))
        if self.B < 0:
            raise InvalidParameter(f"B must be >= 0, got {self.B}")

    @property
    def flux(self) -> float:
        """Raw AB flux in natural units."""
        return self.nu * FLUX_QUANTUM

    def replace(self, **changes) -> FieldConfig:
        fields = dict(B=self.B, nu=self.nu)
        fields.update(changes)
        return FieldConfig(**fields)


@dataclass(frozen=True)
class QuantumState:
    n: int
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameter(f"n must be an integer >= 1, got {self.n!r}")
        if int(self.m) != self.m:
            raise InvalidParameter(f"m must be an integer, got {self.m!r}")


@dataclass(frozen=True)
class DerivedScales:
    mu: float
    B: float
    m_plus_nu: float
    alpha: float
    omega_c: float
    gamma_sq: float
    gamma: float
    b_tilde: float
    eta: float
    Theta: float
    Sigma: float
    Xi: float

    @property
    def shift(self) -> float:
        """Zeeman-like constant (m + nu) * mu * omega_c."""
        return self.m_plus_nu * self.B


def derive_scales(params: PhysParams, fields: FieldConfig, m: int) -> DerivedScales:
    mu, a, b, g = params.mu, params.a, params.b, params.g
    B = fields.B
    m_plus_nu = m + fields.nu
    alpha = abs(m_plus_nu)
    gamma_sq = 2.0 * mu * a + (B / 2.0) ** 2
    if not gamma_sq > 0:
        raise DegenerateScale(f"gamma^2 = {gamma_sq} <= 0 (no confinement)")
    gamma = math.sqrt(gamma_sq)
    b_tilde = -2.0 * mu * b / gamma**1.5
    eta = 2.0 * mu * g / math.sqrt(gamma)
    Theta = gamma / mu
    omega_c = B / mu
    Sigma = 1.0 + m_plus_nu * omega_c / Theta - b * b / (mu * Theta**3)
    # ladder offset as written for the level energies, kept independent of Sigma
    Xi = 2.0 + 2.0 * alpha + m_plus_nu * B / gamma - mu * mu * b * b / gamma**3
    return DerivedScales(
        mu=mu,
        B=B,
        m_plus_nu=m_plus_nu,
        alpha=alpha,
        omega_c=omega_c,
        gamma_sq=gamma_sq,
        gamma=gamma,
        b_tilde=b_tilde,
        eta=eta,
        Theta=Theta,
        Sigma=Sigma,
        Xi=Xi,
    )


# Quark masses and potential strengths from the published quarkonium table.
_PRESETS = {
    "charmonium": dict(quark_mass=1.48, b=0.255, a=0.042),
    "bottomonium": dict(quark_mass=4.68, b=0.465, a=0.143),
}
DEFAULT_FIELDS = FieldConfig(B=2.0, nu=2.0)


def preset(name: str) -> tuple[PhysParams, FieldConfig]:
    try:
        p = _PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}") from None
    params = PhysParams(mu=p["quark_mass"] / 2.0, a=p["a"], b=p["b"], g=0.0, quark_mass=p["quark_mass"])
    return params, DEFAULT_FIELDS


def preset_names() -> list[str]:
    return list(_PRESETS)


def flux_ratio_from_raw(phi_raw: float) -> float:
    return phi_raw / FLUX_QUANTUM
