"""Quasi-exact spectra, quarkonium masses and thermodynamics for the
Cornell-plus-harmonic potential in a magnetic field with an Aharonov-Bohm flux line."""

from cornellqes.model import DerivedScales, FieldConfig, PhysParams, QuantumState, derive_scales, preset

__version__ = "0.1.0"

__all__ = ["DerivedScales", "FieldConfig", "PhysParams", "QuantumState", "derive_scales", "preset"]
