"""Godunov finite volume scheme for the two-flux problem.

Serves as the independent reference oracle for the front tracking engine.
Faces left of x = 0 use the g-flux, faces right of it the f-flux; cell I_0
straddles the interface so no face ever sits at x = 0.  Cell averages are
marched explicitly under the CFL restriction lambda * max(L_f, L_g) <= 1/2,
alongside the discrete indefinite integrals used by the error analysis.

Piecewise-linear flux pairs run through the hot kernel (compiled extension
or numpy fallback); smooth fluxes fall back to a per-face extremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .discretize import project_cells
from .errors import CFLError
from .fluxes import PiecewiseLinearFlux, godunov_flux
from .stepfn import PiecewiseAffine, StepFunction


def cfl_lambda(g_flux, f_flux) -> float:
    """dt/dx fixed at the CFL bound 1/(2 max(L_f, L_g))."""
    return 1.0 / (2.0 * max(g_flux.lipschitz, f_flux.lipschitz))


@dataclass
class GodunovGrid:
    """Cell averages over an index window wide enough to hold exact far fields."""

    dx: float
    dt: float
    lam: float
    j_lo: int                 # index of the leftmost (ghost) cell
    cells: np.ndarray
    hat: np.ndarray           # discrete indefinite integrals, one per cell
    g_flux: object
    f_flux: object
    u_left: float
    u_right: float
    time_index: int = 0
    _gtab: object = field(default=None, repr=False)
    _ftab: object = field(default=None, repr=False)

    @property
    def time(self) -> float:
        return self.time_index * self.dt

    @property
    def size(self) -> int:
        return self.cells.size

    def centers(self) -> np.ndarray:
        return (self.j_lo + np.arange(self.size)) * self.dx

    def faces(self) -> np.ndarray:
        """All cell boundaries, from the left edge of the window to the right edge."""
        return (self.j_lo + np.arange(self.size + 1) - 0.5) * self.dx

    @property
    def split(self) -> int:
        """Number of interior faces governed by the g-flux."""
        return min(max(-self.j_lo, 0), self.size - 1)


def make_grid(g_flux, f_flux, u0: StepFunction, u_left: float, u_right: float,
              X: float, T: float, dx: float, lam: float | None = None) -> GodunovGrid:
    if lam is None:
        lam = cfl_lambda(g_flux, f_flux)
    lip = max(g_flux.lipschitz, f_flux.lipschitz)
    if lam * lip > 0.5 + 1e-12:
        raise CFLError(f"lambda {lam} violates CFL bound {0.5 / lip}")
    dt = lam * dx
    n_steps = step_count(T, dt)
    j_data = int(math.ceil(X / dx + 0.5))
    j_max = j_data + n_steps + 2
    j_lo = -j_max
    cells = project_cells(u0, dx, j_lo, j_max)
    cells[:2] = u_left
    cells[-2:] = u_right
    hat = dx * np.cumsum(cells - u_left)
    grid = GodunovGrid(dx, dt, lam, j_lo, cells, hat, g_flux, f_flux,
                       float(u_left), float(u_right))
    if isinstance(g_flux, PiecewiseLinearFlux) and isinstance(f_flux, PiecewiseLinearFlux):
        grid._gtab = _kernels.make_flux_table(g_flux.breakpoints, g_flux.values)
        grid._ftab = _kernels.make_flux_table(f_flux.breakpoints, f_flux.values)
    return grid


def step_count(T: float, dt: float) -> int:
    """Smallest N with N * dt in [T, T + dt)."""
    return max(1, int(math.ceil(T / dt - 1e-12)))


def _face_fluxes_smooth(q, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized Godunov flux for a smooth flux with a complete critical list."""
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    qa = np.asarray(q(a))
    qb = np.asarray(q(b))
    mn = np.minimum(qa, qb)
    mx = np.maximum(qa, qb)
    for c in q.critical_points:
        inside = (a < c) & (c < b)
        if np.any(inside):
            qc = float(q(c))
            mn[inside] = np.minimum(mn[inside], qc)
            mx[inside] = np.maximum(mx[inside], qc)
    return np.where(u <= v, mn, mx)


def face_fluxes(grid: GodunovGrid) -> np.ndarray:
    """Godunov flux at every interior face (between consecutive window cells)."""
    if grid._gtab is not None:
        return _kernels.face_fluxes_pwl(grid.cells, grid.split, grid._gtab, grid._ftab)
    cells = grid.cells
    split = grid.split
    out = np.empty(cells.size - 1)
    u = cells[:-1]
    v = cells[1:]
    for sl, q in ((slice(0, split), grid.g_flux), (slice(split, None), grid.f_flux)):
        if getattr(q, "critical_points", None) is not None:
            out[sl] = _face_fluxes_smooth(q, u[sl], v[sl])
        else:
            idx = range(*sl.indices(out.size))
            for i in idx:
                out[i] = godunov_flux(q, v[i], u[i])
    return out


def step(grid: GodunovGrid) -> GodunovGrid:
    """One forward step of the scheme; mutates and returns the grid."""
    lip = max(grid.g_flux.lipschitz, grid.f_flux.lipschitz)
    if grid.lam * lip > 0.5 + 1e-12:
        raise CFLError(f"lambda {grid.lam} violates CFL bound {0.5 / lip}")
    h = face_fluxes(grid)
    u = grid.cells
    u[1:-1] -= grid.lam * (h[1:] - h[:-1])
    u[:2] = grid.u_left
    u[-2:] = grid.u_right
    grid.hat[:-1] -= grid.dt * h
    grid.hat[-1] -= grid.dt * float(grid.f_flux(grid.u_right))
    grid.time_index += 1
    return grid


def run(g_flux, f_flux, u0: StepFunction, u_left: float, u_right: float,
        X: float, T: float, dx: float, lam: float | None = None,
        on_step=None) -> GodunovGrid:
    """March to the first time level at or past T and return the grid."""
    grid = make_grid(g_flux, f_flux, u0, u_left, u_right, X, T, dx, lam)
    n = step_count(T, grid.dt)
    for _ in range(n):
        step(grid)
        if on_step is not None:
            on_step(grid)
    return grid


def profile(grid: GodunovGrid) -> StepFunction:
    """The cell profile as a staircase with exact far fields."""
    values = np.concatenate([[grid.u_left], grid.cells])
    return StepFunction.create(grid.faces()[:-1], values)


def hat_profile(grid: GodunovGrid) -> PiecewiseAffine:
    """Continuous interpolant of the discrete indefinite integrals.

    Anchored at the left edge of the window, where the profile is identically
    u_left, so it equals the exact indefinite integral of the cell profile.
    """
    knots = grid.faces()
    values = np.concatenate([[0.0], grid.hat - grid.hat[0]])
    return PiecewiseAffine(knots, values, 0.0, grid.u_right - grid.u_left)
