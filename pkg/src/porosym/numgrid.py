"""Explicit finite differences for phi_t = Lap(phi^2) - h phi^theta on a node grid.

Space uses the 5-point Laplacian of phi^2 (the conservative form of
2 phi_x^2 + 2 phi phi_xx per direction); time is forward Euler.  Boundaries
are either exact Dirichlet values from a closed-form family or zero flux.
Zero flux treats nodes as cell centres and copies the edge value into the
ghost layer, so with h = 0 the mass sum(phi)*dx*dy telescopes and is
conserved to round-off.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .solutions import SolutionFamily, family as get_family
from .symexpr import eval_numeric


class StabilityError(RuntimeError):
    """Time step exceeds the explicit stability bound, or the field blew up."""


class InadmissibleFamily(ValueError):
    """The family cannot be time-integrated."""


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    dx: float
    dy: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ValueError("grid needs at least 8 nodes per direction")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError("spacings must be positive")

    @classmethod
    def box(cls, xlo, xhi, ylo, yhi, nx, ny=None) -> "Grid2D":
        ny = ny or nx
        return cls(nx, ny, (xhi - xlo) / (nx - 1), (yhi - ylo) / (ny - 1), xlo, ylo)

    @classmethod
    def annulus(cls, n: int = 64, r_in: float = 1.0, r_out: float = 3.0) -> "Grid2D":
        """Square in the first quadrant whose nodes all satisfy sqrt(2)*r_in <= r <= r_out.

        Keeps the singular point of the stationary profiles off the grid.
        """
        hi = r_out / math.sqrt(2)
        return cls.box(r_in, hi, r_in, hi, n)

    def refined(self) -> "Grid2D":
        """Same box with the spacing halved."""
        return Grid2D(2 * self.nx - 1, 2 * self.ny - 1, self.dx / 2, self.dy / 2, self.x0, self.y0)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.ny)

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def weights(self) -> np.ndarray:
        wx = np.ones(self.nx)
        wx[[0, -1]] = 0.5
        wy = np.ones(self.ny)
        wy[[0, -1]] = 0.5
        return np.outer(wx, wy) * self.dx * self.dy


@dataclass
class Field:
    values: np.ndarray
    time: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise StabilityError(f"non-finite values at t={self.time}")


@dataclass(frozen=True)
class SimConfig:
    dt: float | None = None
    steps: int = 100
    h: float = 0.0
    theta: float = 0.5
    boundary: str = "dirichlet"
    clamp_negative: bool = True
    family: str | None = None
    params: dict = field(default_factory=dict)
    safety: float = 0.2

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        if self.h < 0:
            raise ValueError("h must be non-negative")
        if self.boundary not in ("dirichlet", "zero-flux"):
            raise ValueError("boundary is 'dirichlet' or 'zero-flux'")


def _assignment(fam: SolutionFamily, grid: Grid2D, t, params: dict, h: float, theta: float):
    X, Y = grid.mesh()
    at = {"x": X, "y": Y, "t": t, "theta": theta, "h": h}
    at.update({k: float(v) for k, v in fam.fixed.items()})
    at.update(params)
    return at


def sample(fam, grid: Grid2D, t: float, params: dict | None = None, *, h: float = 0.0,
           theta: float = 0.5) -> Field:
    fam = get_family(fam) if isinstance(fam, str) else fam
    vals = eval_numeric(fam.phi, _assignment(fam, grid, t, params or {}, h, theta))
    vals = np.broadcast_to(np.asarray(vals, dtype=float), (grid.nx, grid.ny)).copy()
    return Field(vals, t)


def _lap(u: np.ndarray, dx: float, dy: float) -> np.ndarray:
    out = np.zeros_like(u)
    out[1:-1, 1:-1] = ((u[2:, 1:-1] - 2 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / dx ** 2
                       + (u[1:-1, 2:] - 2 * u[1:-1, 1:-1] + u[1:-1, :-2]) / dy ** 2)
    return out


def _lap_zero_flux(u: np.ndarray, dx: float, dy: float) -> np.ndarray:
    p = np.pad(u, 1, mode="edge")
    return ((p[2:, 1:-1] - 2 * u + p[:-2, 1:-1]) / dx ** 2
            + (p[1:-1, 2:] - 2 * u + p[1:-1, :-2]) / dy ** 2)


def residual_numeric(fam, grid: Grid2D, t: float, params: dict | None = None, *,
                     h: float = 0.0, theta: float = 0.5) -> float:
    """Max interior |phi_t - 2|grad phi|^2 - 2 phi lap phi + h phi^theta| by central differences."""
    fam = get_family(fam) if isinstance(fam, str) else fam
    h = float(fam.fixed.get("h", h))
    f = sample(fam, grid, t, params, h=h, theta=theta).values
    dt = 1e-6 * t if t else 1e-6
    ft = (sample(fam, grid, t + dt, params, h=h, theta=theta).values - f) / dt
    dx, dy = grid.dx, grid.dy
    c = f[1:-1, 1:-1]
    fx = (f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * dx)
    fy = (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * dy)
    fxx = (f[2:, 1:-1] - 2 * c + f[:-2, 1:-1]) / dx ** 2
    fyy = (f[1:-1, 2:] - 2 * c + f[1:-1, :-2]) / dy ** 2
    src = h * np.power(c, theta) if h else 0.0
    r = ft[1:-1, 1:-1] - 2 * (fx ** 2 + fy ** 2) - 2 * c * (fxx + fyy) + src
    return float(np.max(np.abs(r)))


def stable_dt(values: np.ndarray, grid: Grid2D, safety: float = 0.2) -> float:
    return safety * min(grid.dx, grid.dy) ** 2 / (4 * float(np.max(np.abs(2 * values))) + 1e-300)


def _source(values: np.ndarray, cfg: SimConfig) -> np.ndarray:
    if not cfg.h:
        return 0.0
    v = np.maximum(values, 0.0) if cfg.clamp_negative else values
    with np.errstate(invalid="raise"):
        try:
            return cfg.h * np.power(v, cfg.theta)
        except FloatingPointError:
            raise StabilityError("negative phi under a fractional power; enable clamp_negative")


def step(f: Field, cfg: SimConfig, grid: Grid2D, dt: float | None = None) -> Field:
    dt = dt if dt is not None else cfg.dt
    bound = stable_dt(f.values, grid, cfg.safety)
    if dt > bound * (1 + 1e-12):
        raise StabilityError(f"dt={dt:.3e} exceeds the stability bound {bound:.3e}")
    u = f.values ** 2
    if cfg.boundary == "zero-flux":
        lap = _lap_zero_flux(u, grid.dx, grid.dy)
    else:
        lap = _lap(u, grid.dx, grid.dy)
    new = f.values + dt * (lap - _source(f.values, cfg))
    t = f.time + dt
    if cfg.boundary == "dirichlet":
        if cfg.family is None:
            raise ValueError("exact-Dirichlet boundaries need a family")
        exact = sample(cfg.family, grid, t, cfg.params, h=cfg.h, theta=cfg.theta).values
        new[0, :], new[-1, :] = exact[0, :], exact[-1, :]
        new[:, 0], new[:, -1] = exact[:, 0], exact[:, -1]
    return Field(new, t)


def mass(f: Field, grid: Grid2D) -> float:
    return float(np.sum(f.values)) * grid.dx * grid.dy


@dataclass
class EvolveReport:
    linf_error: float
    l2_error: float
    steps: int
    dt: float
    final: Field | None = None
    exact: Field | None = None


def _check_integrable(fam: SolutionFamily) -> None:
    if fam.id == "S1":
        raise InadmissibleFamily(
            "S1 is negative everywhere, so the diffusivity 2*phi is negative and the "
            "problem is backward parabolic (ill-posed); S1 is checked by residual only")
    if not fam.numeric_domain:
        raise InadmissibleFamily(f"{fam.id} has no real values on 0 < theta < 1")


def evolve_and_compare(fam, grid: Grid2D, cfg: SimConfig, t0: float, t1: float) -> EvolveReport:
    fam = get_family(fam) if isinstance(fam, str) else fam
    _check_integrable(fam)
    cfg = replace(cfg, family=fam.id, h=float(fam.fixed.get("h", cfg.h)))
    f = sample(fam, grid, t0, cfg.params, h=cfg.h, theta=cfg.theta)
    if np.any(f.values < 0):
        raise InadmissibleFamily(
            f"{fam.id} is negative on this grid; negative diffusivity 2*phi makes the "
            "problem backward parabolic")
    if t1 <= t0:
        return EvolveReport(0.0, 0.0, 0, 0.0, f, f)
    dt = cfg.dt or 0.9 * stable_dt(f.values, grid, cfg.safety)
    n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    dt = (t1 - t0) / n
    for _ in range(n):
        f = step(f, cfg, grid, dt)
    exact = sample(fam, grid, t1, cfg.params, h=cfg.h, theta=cfg.theta)
    err = f.values - exact.values
    return EvolveReport(float(np.max(np.abs(err))), float(np.sqrt(np.sum(err ** 2 * grid.weights()))),
                        n, dt, f, exact)


def run_steps(fam, grid: Grid2D, cfg: SimConfig, t0: float) -> EvolveReport:
    """Take ``cfg.steps`` steps from t0 (dt from cfg or the stability bound)."""
    fam = get_family(fam) if isinstance(fam, str) else fam
    _check_integrable(fam)
    cfg = replace(cfg, family=fam.id, h=float(fam.fixed.get("h", cfg.h)))
    f0 = sample(fam, grid, t0, cfg.params, h=cfg.h, theta=cfg.theta)
    dt = cfg.dt or 0.9 * stable_dt(f0.values, grid, cfg.safety)
    return evolve_and_compare(fam, grid, replace(cfg, dt=dt), t0, t0 + dt * cfg.steps)


def stationarity_drift(fam, grid: Grid2D, cfg: SimConfig, t0: float = 1.0) -> float:
    """Max |phi(t0 + steps*dt) - phi(t0)| for a time-independent family."""
    fam = get_family(fam) if isinstance(fam, str) else fam
    rep = run_steps(fam, grid, cfg, t0)
    start = sample(fam, grid, t0, cfg.params, h=float(fam.fixed.get("h", cfg.h)), theta=cfg.theta)
    return float(np.max(np.abs(rep.final.values - start.values)))


def dt_convergence(fam, grid: Grid2D, cfg: SimConfig, t0: float, t1: float, dt: float) -> dict:
    a = evolve_and_compare(fam, grid, replace(cfg, dt=dt), t0, t1)
    b = evolve_and_compare(fam, grid, replace(cfg, dt=dt / 2), t0, t1)
    ratio = a.linf_error / b.linf_error if b.linf_error > 0 else float("inf")
    return {"err_dt": a.linf_error, "err_half": b.linf_error, "ratio": ratio,
            "steps": (a.steps, b.steps)}


def spatial_ratio(fam, grid: Grid2D, t: float, params: dict | None = None, *, h: float = 0.0,
                  theta: float = 0.5) -> dict:
    r1 = residual_numeric(fam, grid, t, params, h=h, theta=theta)
    r2 = residual_numeric(fam, grid.refined(), t, params, h=h, theta=theta)
    return {"res_dx": r1, "res_half": r2, "ratio": r1 / r2 if r2 > 0 else float("inf")}
