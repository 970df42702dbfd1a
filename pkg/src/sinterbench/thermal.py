"""Heat-transfer plant: Gaussian volumetric laser source, explicit 3-D grid
scheme, and the one-node lumped reduction used by the closed loop.

The grid form integrates rho*c dT/dt = k lap(T) + Q with fixed-temperature
boundaries and is used for fidelity tests. The closed-loop engines use the
lumped energy balance

    T' = T + (dt / C_eff) * (A*P - h_loss*(T - T_amb))

whose fixed point under constant power P is T_amb + A*P/h_loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class MaterialParams:
    """Bulk material and beam constants (PA12-typical defaults)."""

    rho: float = 950.0          # density, kg/m^3
    c: float = 1200.0           # specific heat, J/(kg K)
    k: float = 0.12             # conductivity, W/(m K)
    absorptivity: float = 0.95  # dimensionless, in (0, 1]
    beam_radius: float = 200e-6     # m
    penetration_depth: float = 100e-6  # m

    def __post_init__(self):
        for name in ("rho", "c", "k", "absorptivity", "beam_radius", "penetration_depth"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"MaterialParams.{name} must be finite and > 0, got {v}")
        if self.absorptivity > 1:
            raise ConfigError(f"absorptivity must be <= 1, got {self.absorptivity}")


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    nz: int
    dx: float
    dy: float
    dz: float
    dt: float
    boundary: float  # fixed face temperature, degC

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            if getattr(self, name) < 3:
                raise ConfigError(f"GridSpec.{name} must be >= 3")
        for name in ("dx", "dy", "dz", "dt"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"GridSpec.{name} must be > 0")

    def stability_limit(self, params: MaterialParams) -> float:
        """Largest admissible explicit time step for these cell sizes."""
        inv = 1.0 / self.dx**2 + 1.0 / self.dy**2 + 1.0 / self.dz**2
        return params.rho * params.c / (2.0 * params.k) / inv


@dataclass(frozen=True)
class GridState:
    temps: np.ndarray  # (nx, ny, nz), degC
    t: int = 0


@dataclass(frozen=True)
class LumpedState:
    t_spot: float  # degC
    t: int = 0


@dataclass(frozen=True)
class LumpedParams:
    """One-node reduction of the plant.

    Defaults are calibrated so that with the published PID gains the nominal
    loop settles inside 200 iterations and steady laser power is
    h_loss*(167.5 - 25)/A ~= 2 W.
    """

    c_eff: float = 0.3       # effective heat capacity, J/degC
    h_loss: float = 0.014035  # loss coefficient, W/degC
    t_amb: float = 25.0       # ambient, degC
    absorptivity: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c_eff) and self.c_eff > 0):
            raise ConfigError(f"c_eff must be > 0, got {self.c_eff}")
        if not (math.isfinite(self.h_loss) and self.h_loss > 0):
            raise ConfigError(f"h_loss must be > 0, got {self.h_loss}")


def heat_source(params: MaterialParams, power: float, point, center) -> float:
    """Gaussian volumetric heat source, W/m^3, maximal at the beam center."""
    vals = (power, *point, *center)
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError("heat_source: non-finite input")
    if power < 0:
        raise ConfigError(f"laser power must be >= 0, got {power}")
    x, y, z = point
    x0, y0, z0 = center
    w = params.beam_radius
    dp = params.penetration_depth
    peak = 2.0 * params.absorptivity * power / (math.pi * w**2 * dp)
    radial = ((x - x0) ** 2 + (y - y0) ** 2) / w**2
    axial = (z - z0) ** 2 / dp**2
    return peak * math.exp(-2.0 * (radial + axial))


def _cell_centers(n: int, d: float) -> np.ndarray:
    return (np.arange(n) + 0.5) * d


def _source_field(spec: GridSpec, params: MaterialParams, power: float, center) -> np.ndarray:
    x = _cell_centers(spec.nx, spec.dx)
    y = _cell_centers(spec.ny, spec.dy)
    z = _cell_centers(spec.nz, spec.dz)
    x0, y0, z0 = center
    w = params.beam_radius
    dp = params.penetration_depth
    peak = 2.0 * params.absorptivity * power / (math.pi * w**2 * dp)
    rad = ((x[:, None] - x0) ** 2 + (y[None, :] - y0) ** 2) / w**2
    ax = (z - z0) ** 2 / dp**2
    return peak * np.exp(-2.0 * (rad[:, :, None] + ax[None, None, :]))


def step_grid(state: GridState, spec: GridSpec, params: MaterialParams,
              power: float, center) -> GridState:
    """One explicit finite-difference step; boundary cells held fixed."""
    limit = spec.stability_limit(params)
    if spec.dt > limit * (1 + 1e-12):
        raise ConfigError(
            f"explicit scheme unstable: dt={spec.dt} exceeds admissible dt <= {limit:.6g}"
        )
    if power < 0 or not math.isfinite(power):
        raise ConfigError(f"laser power must be finite and >= 0, got {power}")
    T = state.temps
    q = _source_field(spec, params, power, center)
    alpha = params.k / (params.rho * params.c)
    lap = np.zeros_like(T)
    lap[1:-1, :, :] += (T[2:, :, :] - 2 * T[1:-1, :, :] + T[:-2, :, :]) / spec.dx**2
    lap[:, 1:-1, :] += (T[:, 2:, :] - 2 * T[:, 1:-1, :] + T[:, :-2, :]) / spec.dy**2
    lap[:, :, 1:-1] += (T[:, :, 2:] - 2 * T[:, :, 1:-1] + T[:, :, :-2]) / spec.dz**2
    out = T + spec.dt * (alpha * lap + q / (params.rho * params.c))
    out[0, :, :] = out[-1, :, :] = spec.boundary
    out[:, 0, :] = out[:, -1, :] = spec.boundary
    out[:, :, 0] = out[:, :, -1] = spec.boundary
    return GridState(temps=out, t=state.t + 1)


def step_lumped(state: LumpedState, lp: LumpedParams, power: float, dt: float) -> LumpedState:
    """One energy-balance step of the lumped spot temperature."""
    if dt <= 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    if not (math.isfinite(power) and math.isfinite(state.t_spot)):
        raise ConfigError("step_lumped: non-finite input")
    t_new = state.t_spot + (dt / lp.c_eff) * (
        lp.absorptivity * power - lp.h_loss * (state.t_spot - lp.t_amb)
    )
    return LumpedState(t_spot=t_new, t=state.t + 1)


def steady_state_temperature(lp: LumpedParams, power: float) -> float:
    """Fixed point of step_lumped under constant power."""
    return lp.t_amb + lp.absorptivity * power / lp.h_loss


def spot_temperature(state, center=None, spec: GridSpec | None = None) -> float:
    """Temperature fed to the measurement model (degC).

    Lumped states report their single node; grid states report the cell that
    contains the beam center.
    """
    if isinstance(state, LumpedState):
        return state.t_spot
    if not isinstance(state, GridState):
        raise ConfigError(f"unsupported thermal state {type(state).__name__}")
    if center is None or spec is None:
        raise ConfigError("grid spot temperature needs the beam center and grid spec")
    idx = []
    for coord, d, n in zip(center, (spec.dx, spec.dy, spec.dz), (spec.nx, spec.ny, spec.nz)):
        i = int(coord // d)
        if not 0 <= i < n:
            raise ConfigError(f"beam center {center} outside the grid")
        idx.append(i)
    return float(state.temps[tuple(idx)])
