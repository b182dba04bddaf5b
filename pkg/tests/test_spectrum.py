import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cornellqes import spectrum
from cornellqes.errors import InvalidParameter, MissingQuarkMass
from cornellqes.model import FieldConfig, PhysParams, derive_scales, preset


def test_mass_table_against_stored_reference():
    ref = spectrum.mass_table_reference()
    got = spectrum.mass_table()
    assert [(r.species, r.n, r.m, r.B) for r in got] == [(d["species"], d["n"], d["m"], d["B"]) for d in ref]
    for r, d in zip(got, ref):
        assert r.M == pytest.approx(d["M"], rel=1e-8)
        assert r.g == pytest.approx(d["g"], rel=1e-9)


def test_species_filter():
    rows = spectrum.mass_table("bottomonium")
    assert len(rows) == 3 and {r.species for r in rows} == {"bottomonium"}


def test_printed_level_lhs_vanishes():
    params, fields = preset("charmonium")
    E = spectrum.energy(params, fields, 2, 1).E
    assert abs(spectrum.printed_level_lhs(params, fields, 2, 1, E)) < 1e-12


def test_printed_level_independent_of_g():
    params, fields = preset("charmonium")
    assert spectrum.energy(params, fields, 1, 1).E == spectrum.energy(params.replace(g=3.0), fields, 1, 1).E


def test_termination_level_relation():
    """Printed ladder term is twice the R = 2n one and the b^2 term a quarter."""
    params, fields = preset("bottomonium")
    for n, m in ((1, 0), (2, 1), (3, -1)):
        s = derive_scales(params, fields, m)
        E_p = spectrum.energy(params, fields, n, m).E
        E_t = spectrum.energy_termination(params, fields, n, m).E
        mnu = m + fields.nu
        ladder_t = s.gamma * (2 * n + 2 + 2 * abs(mnu)) / (2 * params.mu)
        b2_t = params.mu * params.b**2 / (2 * s.gamma**2)
        shift = mnu * fields.B / (2 * params.mu)
        assert E_t == pytest.approx(ladder_t + shift - b2_t, rel=1e-13)
        assert E_p == pytest.approx(2 * ladder_t + shift - b2_t / 4, rel=1e-13)


def test_quasi_exact_g_errors():
    assert spectrum.quasi_exact_g(1, 1, 0.042, 0.255, 0.74) == pytest.approx(3.068357313, rel=1e-9)
    with pytest.raises(InvalidParameter):
        spectrum.quasi_exact_g(1, 1, 0.0, 1.0, 1.0)


def test_mass_requires_quark_mass():
    with pytest.raises(MissingQuarkMass):
        spectrum.mass(PhysParams(mu=1.0, a=1.0), FieldConfig(), 1, 0)


@given(nu=st.floats(0.0, 3.0), B=st.floats(0.0, 5.0))
def test_level_affine_in_nu(nu, B):
    params, _ = preset("charmonium")
    f = FieldConfig(B=B, nu=nu)
    E0 = spectrum.energy(params, f, 1, 1).E
    E1 = spectrum.energy(params, f.replace(nu=nu + 0.5), 1, 1).E
    E2 = spectrum.energy(params, f.replace(nu=nu + 1.0), 1, 1).E
    assert E2 - 2 * E1 + E0 == pytest.approx(0.0, abs=1e-10 * max(1.0, abs(E2)))


def test_scan_marks_invalid_points():
    params, fields = preset("charmonium")
    rows = spectrum.scan_energy(params, fields, 1, 1, "a", -0.5, 0.5, 11)
    assert [r.valid for r in rows[:5]] == [False] * 5
    assert all(math.isnan(r.E) for r in rows[:5])
    assert all(r.valid for r in rows[6:])
    with pytest.raises(InvalidParameter):
        spectrum.scan_energy(params, fields, 1, 1, "mu", 0, 1, 3)


def test_scan_deterministic():
    params, fields = preset("charmonium")
    a = spectrum.scan_energy(params, fields, 2, 1, "B", 0, 4, 9)
    b = spectrum.scan_energy(params, fields, 2, 1, "B", 0, 4, 9)
    assert a == b
    assert np.all(np.diff([r.x for r in a]) > 0)
