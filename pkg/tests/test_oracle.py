import math

import numpy as np
import pytest

from cornellqes import oracle
from cornellqes.errors import GridTooCoarse, InvalidParameter
from cornellqes.model import FieldConfig, PhysParams, preset

OSC = PhysParams(mu=0.5, a=0.25)  # omega = 1


def test_grid_invariants():
    g = oracle.RadialGrid.from_origin(10.0, 100)
    assert g.origin_centred and g.r[0] == pytest.approx(g.h / 2)
    assert g.refined().N == 200 and g.refined().origin_centred
    with pytest.raises(InvalidParameter):
        oracle.RadialGrid(1.0, 0.5, 10)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_oscillator_levels(m):
    grid = oracle.RadialGrid.from_origin(20.0, 4000)
    e = oracle.diagonalize(OSC, FieldConfig(), m, grid, k=3).energies
    np.testing.assert_allclose(e, [2 * k + abs(m) + 1 for k in range(3)], atol=1e-4)


def test_fock_darwin_levels():
    """In a field the ladder is Omega (2k + |m+nu| + 1) + (m+nu) B / (2 mu), Omega = gamma/mu."""
    params, fields = PhysParams(mu=0.5, a=0.25), FieldConfig(B=1.2, nu=0.3)
    grid = oracle.RadialGrid.from_origin(20.0, 4000)
    rich = oracle.richardson_eigenvalues(params, fields, 1, grid, 3)
    gamma = math.sqrt(2 * 0.5 * 0.25 + 0.36)
    exact = [gamma / 0.5 * (2 * k + 1.3 + 1) + 1.3 * 1.2 / 1.0 for k in range(3)]
    np.testing.assert_allclose(rich.extrapolated, exact, atol=1e-9)
    assert np.all(rich.error < 1e-4)


def test_hydrogen_2d():
    # 2D Coulomb levels -mu g^2 / (2 (k + 1/2)^2)
    grid = oracle.RadialGrid.from_origin(60.0, 6000)
    e = oracle.diagonalize(PhysParams(mu=0.5, a=1e-9, g=1.0), FieldConfig(), 0, grid, k=2).energies
    np.testing.assert_allclose(e, [-1.0, -1.0 / 9.0], atol=2e-3)


def test_dirichlet_branch_for_offset_grid():
    grid = oracle.RadialGrid(0.05, 20.0, 4000)
    e = oracle.diagonalize(OSC, FieldConfig(), 2, grid, k=2).energies
    np.testing.assert_allclose(e, [3.0, 5.0], atol=1e-3)


def test_eigenvectors_normalised_and_nodes():
    grid = oracle.RadialGrid.from_origin(20.0, 2000)
    pairs = oracle.diagonalize(OSC, FieldConfig(), 0, grid, k=3)
    norms = np.sum(pairs.vectors**2, axis=0) * grid.h
    np.testing.assert_allclose(norms, 1.0, rtol=1e-12)
    assert [oracle.count_nodes(pairs.vectors[:, j]) for j in range(3)] == [0, 1, 2]


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        oracle.diagonalize(OSC, FieldConfig(), 0, oracle.RadialGrid.from_origin(40.0, 100), k=3, tol=1e-8)


def test_default_grid_covers_turning_point():
    params, fields = preset("charmonium")
    g = oracle.default_grid(params, fields, 1, 20.0)
    assert g.r_max > 1.0
    assert oracle.effective_potential(params, fields, 1, g.r_max) > 20.0


def test_validate_reports_branches():
    params, fields = preset("charmonium")
    rep = oracle.validate_quasi_exact(params, fields, 1, 1)
    labels = [b.label for b in rep.branches]
    assert labels[:2] == ["constraint-printed", "constraint-termination"]
    rig = rep.branch("rigorous")
    assert rig
    for b in rig:
        assert b.residual_norm <= 1e-8
        assert b.abs_gap <= b.richardson_error
        assert b.analytic_nodes == b.numeric_nodes
    assert math.isnan(rep.branch("constraint-printed")[0].residual_norm)


def test_validate_solvable_limit():
    """b = g = 0: the R=2n level at even n is an oscillator level."""
    params = PhysParams(mu=0.74, a=0.042)
    rep = oracle.validate_quasi_exact(params, FieldConfig(), 2, 0)
    assert rep.branch("constraint-termination")[0].abs_gap <= 1e-3
