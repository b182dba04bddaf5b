import math

import pytest

from cornellqes import audit
from cornellqes.model import FieldConfig, preset


@pytest.fixture(scope="module")
def entries():
    params, fields = preset("charmonium")
    return {e.key: e for e in audit.full_audit(params, fields, 1, 1, 1.0)}


def test_all_entries_computed(entries):
    assert len(entries) >= 15
    for e in entries.values():
        assert math.isfinite(e.printed) and math.isfinite(e.reference), e.key


def test_spacing_ratio_is_two(entries):
    e = entries["level-spacing-ratio"]
    assert e.printed / e.reference == pytest.approx(2.0, rel=1e-13)


def test_internally_consistent_pairs(entries):
    """U, F and S agree with their defining derivatives; C_V has the opposite sign."""
    assert entries["U-closed-vs-dG"].rel_diff < 1e-8
    assert entries["S-closed-vs-dF"].rel_diff < 1e-8
    assert entries["F-closed-vs-G"].rel_diff < 1e-14
    cv = entries["Cv-closed-vs-dU"]
    assert cv.printed == pytest.approx(-cv.reference, rel=1e-8)


def test_zero_T_rows(entries):
    assert entries["U-zero-T"].rel_diff < 1e-14
    assert entries["Cv-zero-T"].rel_diff < 1e-14
    assert entries["F-zero-T"].rel_diff > 1.0


def test_g_entry_only_with_field():
    params, _ = preset("charmonium")
    keys = [e.key for e in audit.full_audit(params, FieldConfig(B=0.0, nu=2.0), 1, 1, 1.0)]
    assert not any(k.startswith("g-constraint") for k in keys)


def test_zeta_expansion_entries():
    rows = audit.zeta_expansion_audit(1.0)
    assert [r.key for r in rows][:3] == [f"zeta-expansion-vs-fd[delta={d:g}]" for d in audit.DELTAS]
    # the derivative of the small-(2alpha+Sigma) G is the direct sum's leading behaviour
    fd = rows[0].reference
    lim = rows[-1].reference
    assert fd == pytest.approx(lim, rel=1e-4)


def test_rel_diff_zero_reference():
    assert audit.AuditEntry("k", "", 0.0, 0.0).rel_diff == 0.0
    assert audit.AuditEntry("k", "", 1.0, 0.0).rel_diff == math.inf
