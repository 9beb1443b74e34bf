"""Shared spatial types: the 1-D grid, fields living on it, and physical
parameters.

All fields are cell-centered on a uniform periodic grid.  Natural units
(hbar = m = 1) are the default everywhere; the constants are explicit fields
so they can be overridden.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, GridMismatchError

MASS_TOLERANCE = 1e-9
NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid of n_cells cells covering [x_min, x_max]."""

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 8:
            raise DomainError(f"need at least 8 cells, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise DomainError("x_max must exceed x_min")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def centers(self):
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def coarsen(self, factor):
        """Grid with cells merged in blocks of `factor`."""
        if self.n_cells % factor:
            raise DomainError(f"{self.n_cells} cells not divisible by {factor}")
        return Grid(self.x_min, self.x_max, self.n_cells // factor)


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")


@dataclass(frozen=True)
class GridField:
    """A real scalar field sampled at cell centers."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.shape != (self.grid.n_cells,):
            raise DomainError(
                f"expected {self.grid.n_cells} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("field values must be finite")


@dataclass(frozen=True)
class DensityField(GridField):
    """Probability density rho(x): nonnegative, unit mass."""

    def __post_init__(self):
        super().__post_init__()
        if np.any(self.values < 0):
            raise DomainError("density must be nonnegative")
        mass = self.mass
        if abs(mass - 1.0) > MASS_TOLERANCE:
            raise DomainError(f"density mass {mass} deviates from 1 beyond tolerance")

    @property
    def mass(self):
        return float(np.sum(self.values) * self.grid.dx)

    @property
    def cell_masses(self):
        return self.values * self.grid.dx

    def normalized(self):
        return DensityField(self.grid, self.values / self.mass)


@dataclass(frozen=True)
class PhaseField(GridField):
    """Phase field Phi(x), dimensionless and unwrapped (no modular reduction).

    `interpolated` marks cells where the phase was bridged across a density
    node rather than read off directly.
    """

    interpolated: np.ndarray | None = field(default=None, compare=False)


@dataclass(frozen=True)
class PotentialField(GridField):
    """External potential V(x)."""


@dataclass(frozen=True)
class VelocityField(GridField):
    """A velocity sampled on the grid (drift, current, or osmotic)."""


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, hbar and the elementary time step dt."""

    mass: float = 1.0
    hbar: float = 1.0
    dt: float = 1e-3

    def __post_init__(self):
        if min(self.mass, self.hbar, self.dt) <= 0:
            raise DomainError("mass, hbar and dt must all be positive")

    @property
    def alpha(self):
        """Inverse step variance m/(hbar*dt) tying the kernel to duration."""
        return self.mass / (self.hbar * self.dt)

    @property
    def diffusion(self):
        """Single-step displacement variance per unit time, hbar/m."""
        return self.hbar / self.mass

    def with_dt(self, dt):
        return replace(self, dt=dt)


def gaussian_density(grid, mu, sigma, *, periodic_images=3):
    """Normalized Gaussian density on the grid, periodically wrapped."""
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    x = grid.centers
    values = np.zeros(grid.n_cells)
    for k in range(-periodic_images, periodic_images + 1):
        values += np.exp(-0.5 * ((x - mu + k * grid.length) / sigma) ** 2)
    values /= np.sum(values) * grid.dx
    return DensityField(grid, values)


def uniform_density(grid):
    return DensityField(grid, np.full(grid.n_cells, 1.0 / grid.length))


def coarsen_density(rho, factor):
    """Block-average a density onto a grid coarsened by an integer factor."""
    coarse = rho.grid.coarsen(factor)
    values = rho.values.reshape(coarse.n_cells, factor).mean(axis=1)
    return DensityField(coarse, values)


def interpolate_periodic(field, positions):
    """Linear interpolation of a cell-centered field at arbitrary positions,
    treating the grid as periodic."""
    g = field.grid
    rel = np.mod(positions - g.x_min - 0.5 * g.dx, g.length)
    xp = np.arange(g.n_cells + 1) * g.dx
    fp = np.concatenate([field.values, field.values[:1]])
    return np.interp(rel, xp, fp)
