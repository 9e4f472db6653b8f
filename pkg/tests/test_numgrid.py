import numpy as np
import pytest

from porosym import numgrid as ng
from porosym.solutions import SolutionFamily

S3 = {"alpha2": 1.0, "alpha4": 0.5, "alpha5": 1.5, "d1": 1.0, "d2": 2.0}


def test_grid_validation():
    with pytest.raises(ValueError):
        ng.Grid2D(4, 16, 0.1, 0.1)
    g = ng.Grid2D.annulus(33)
    r = np.hypot(*g.mesh())
    assert r.min() >= 1.0 * np.sqrt(2) - 1e-12 and r.max() <= 3.0 + 1e-12
    fine = g.refined()
    assert fine.nx == 65 and np.isclose(fine.x[-1], g.x[-1])
    assert np.isclose(g.weights().sum(), (g.x[-1] - g.x[0]) * (g.y[-1] - g.y[0]))


def test_s1_paraboloid():
    g = ng.Grid2D.box(-10, 10, -10, 10, 64)
    X, Y = g.mesh()
    f = ng.sample("S1", g, 10.0)
    assert np.allclose(f.values, -(X ** 2 + Y ** 2) / 160)


def test_s2_is_radial():
    g = ng.Grid2D.box(1.0, 2.0, 1.0, 2.0, 16)
    f = ng.sample("S2", g, 1.0, h=2.0, theta=0.555).values
    assert np.allclose(f, f.T)
    r = np.hypot(*g.mesh())
    order = np.argsort(r.ravel())
    assert np.all(np.diff(f.ravel()[order]) >= -1e-12)


def test_flat_plane_wave():
    g = ng.Grid2D.box(0, 1, 0, 1, 16)
    flat = {"alpha2": 1.0, "alpha4": 2.0, "alpha5": 2.0, "d1": 1.0, "d2": 1.0}
    assert np.all(ng.sample("S3", g, 3.0, flat).values == 0)


def test_numeric_residuals():
    assert ng.residual_numeric("S1", ng.Grid2D.box(1, 5, 1, 5, 64), 2.0) < 1e-4
    assert ng.residual_numeric("S2", ng.Grid2D.annulus(64), 1.0, h=2.0) < 1e-4
    const = SolutionFamily("C", "3", fixed={"h": 0})
    assert ng.residual_numeric(const, ng.Grid2D.box(0, 1, 0, 1, 16), 1.0) == 0.0


def test_spatial_residual_is_second_order():
    r = ng.spatial_ratio("S2", ng.Grid2D.annulus(33), 1.0, h=2.0)
    assert 3.4 <= r["ratio"] <= 4.6


def test_zero_field_stays_zero():
    g = ng.Grid2D.box(0, 1, 0, 1, 16)
    cfg = ng.SimConfig(boundary="zero-flux")
    f = ng.step(ng.Field(np.zeros((16, 16)), 0.0), cfg, g, 1e-3)
    assert np.all(f.values == 0)


def test_stationary_profile_barely_moves_per_step():
    g = ng.Grid2D.annulus(64)
    cfg = ng.SimConfig(h=2.0, family="S2")
    f = ng.sample("S2", g, 1.0, h=2.0)
    dt = 0.9 * ng.stable_dt(f.values, g)
    nxt = ng.step(f, cfg, g, dt)
    assert np.max(np.abs(nxt.values - f.values)) < dt * 1e-2


def test_plane_wave_single_step():
    g = ng.Grid2D.box(1, 2, 1, 2, 32)
    cfg = ng.SimConfig(family="S3", params=S3)
    f = ng.sample("S3", g, 1.0, S3)
    dt = 0.5 * ng.stable_dt(f.values, g)
    nxt = ng.step(f, cfg, g, dt)
    exact = ng.sample("S3", g, 1.0 + dt, S3)
    assert np.max(np.abs(nxt.values - exact.values)) < 10 * dt ** 2


def test_stationarity_drift():
    drift = ng.stationarity_drift("S2", ng.Grid2D.annulus(64), ng.SimConfig(h=2.0, steps=100))
    assert drift < 1e-3


def test_degenerate_interval():
    rep = ng.evolve_and_compare("S2", ng.Grid2D.annulus(16), ng.SimConfig(h=2.0), 1.0, 1.0)
    assert (rep.linf_error, rep.l2_error, rep.steps) == (0.0, 0.0, 0)


def test_zero_flux_conserves_mass_without_source():
    g = ng.Grid2D.box(0, 1, 0, 1, 24)
    X, Y = g.mesh()
    f = ng.Field(1.0 + 0.5 * np.exp(-20 * ((X - 0.5) ** 2 + (Y - 0.4) ** 2)), 0.0)
    cfg = ng.SimConfig(boundary="zero-flux")
    m0 = ng.mass(f, g)
    dt = 0.5 * ng.stable_dt(f.values, g)
    for _ in range(50):
        f = ng.step(f, cfg, g, dt)
    assert abs(ng.mass(f, g) - m0) < 1e-12 * m0


def test_guards():
    g = ng.Grid2D.annulus(16)
    with pytest.raises(ng.InadmissibleFamily, match="ill-posed"):
        ng.evolve_and_compare("S1", g, ng.SimConfig(), 1.0, 2.0)
    with pytest.raises(ng.InadmissibleFamily):
        ng.evolve_and_compare("S6", g, ng.SimConfig(), 1.0, 2.0)
    f = ng.sample("S2", g, 1.0, h=2.0)
    with pytest.raises(ng.StabilityError):
        ng.step(f, ng.SimConfig(h=2.0, family="S2"), g, 10 * ng.stable_dt(f.values, g))
    with pytest.raises(ng.StabilityError):
        ng.Field(np.array([[np.nan]]), 0.0)
    with pytest.raises(ValueError):
        ng.SimConfig(theta=1.5)
