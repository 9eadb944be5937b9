"""Split-step spectral reference solver for the time-dependent Schrodinger
equation  i hbar dPsi/dt = (-hbar^2/2m Laplacian + U) Psi  on a periodic grid.

One Strang step is

    Psi -> exp(-i U dt / 2 hbar) . IFFT exp(-i hbar |k|^2_M dt / 2) FFT . exp(-i U dt / 2 hbar) Psi

with |k|^2_M = sum_j k_j^2 / m_j.  Each factor is unitary, so the norm is
preserved to round-off; the splitting itself is second order in dt.  This
solver is the ground-truth oracle for the kernel and Bohmian-trajectory tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, TruncationError
from .potentials import HamiltonianSpec

KINETIC_PHASE_LIMIT = np.pi / 4  # per step, over the occupied spectrum
SPECTRUM_THRESHOLD = 1e-10       # relative |psi_hat| cutoff defining "occupied"
BOUNDARY_ORACLE_RATIO = 1e-8


def _is_pow2(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid, 1 or 2 dimensional, power-of-two points per axis."""

    points: tuple
    extent: tuple

    def __post_init__(self):
        pts = tuple(int(p) for p in np.atleast_1d(self.points))
        ext = tuple(float(e) for e in np.atleast_1d(self.extent))
        if len(pts) != len(ext) or len(pts) not in (1, 2):
            raise ConfigurationError("grid must be 1- or 2-dimensional")
        for p in pts:
            if p < 64 or not _is_pow2(p):
                raise ConfigurationError("points per axis must be a power of two >= 64")
        for e in ext:
            if e <= 0.0:
                raise ConfigurationError("extent must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "extent", ext)

    @classmethod
    def line(cls, points: int = 2048, extent: float = 40.0) -> "SpatialGrid":
        return cls((points,), (extent,))

    @classmethod
    def square(cls, points: int = 256, extent: float = 40.0) -> "SpatialGrid":
        return cls((points, points), (extent, extent))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dx(self) -> tuple:
        return tuple(e / p for e, p in zip(self.extent, self.points))

    @property
    def axes(self) -> tuple:
        return tuple(-e / 2.0 + np.arange(p) * (e / p)
                     for e, p in zip(self.extent, self.points))

    @property
    def k_axes(self) -> tuple:
        return tuple(2.0 * np.pi * np.fft.fftfreq(p, d=d)
                     for p, d in zip(self.points, self.dx))

    def meshes(self) -> tuple:
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    def position_array(self) -> np.ndarray:
        """All grid points as an array of shape points + (n,)."""
        return np.stack(self.meshes(), axis=-1)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.dx))


@dataclass(frozen=True)
class WavefunctionGrid:
    """Complex field sampled on a SpatialGrid at one time."""

    grid: SpatialGrid
    values: np.ndarray
    time: float
    hbar: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.points:
            raise ConfigurationError(
                f"values shape {vals.shape} != grid points {self.grid.points}"
            )
        object.__setattr__(self, "values", vals)

    def with_values(self, values, time: float | None = None) -> "WavefunctionGrid":
        return WavefunctionGrid(self.grid, values,
                                self.time if time is None else time, self.hbar)


def l2_norm(psi: WavefunctionGrid) -> float:
    return float(np.sqrt(np.sum(np.abs(psi.values) ** 2) * psi.grid.cell_volume))


def l2_distance(a: WavefunctionGrid, b: WavefunctionGrid) -> float:
    if a.grid != b.grid:
        raise ConfigurationError("wavefunctions live on different grids")
    return float(np.sqrt(np.sum(np.abs(a.values - b.values) ** 2) * a.grid.cell_volume))


def boundary_ratio(psi: WavefunctionGrid) -> float:
    """Largest boundary magnitude relative to the global maximum."""
    mags = np.abs(psi.values)
    peak = float(np.max(mags))
    if peak == 0.0:
        return 0.0
    if psi.grid.n == 1:
        edge = max(mags[0], mags[-1])
    else:
        edge = max(float(np.max(mags[0, :])), float(np.max(mags[-1, :])),
                   float(np.max(mags[:, 0])), float(np.max(mags[:, -1])))
    return float(edge / peak)


def require_packet_contained(psi: WavefunctionGrid,
                             ratio: float = BOUNDARY_ORACLE_RATIO) -> None:
    """Assert the packet is away from the boundary before using psi as an oracle."""
    r = boundary_ratio(psi)
    if r >= ratio:
        raise TruncationError(
            f"boundary magnitude {r:.3e} of peak exceeds the allowed {ratio:.1e}"
        )


def gaussian_source(grid: SpatialGrid, x0, p0, sigma: float,
                    hbar: float = 1.0) -> WavefunctionGrid:
    """Normalized Gaussian packet exp(-|x-x0|^2/4 sigma^2) exp(i p0.(x-x0)/hbar).

    The width regularizes a point source; it must be resolved by the grid
    (sigma >= 4 dx) and the packet must sit 10 sigma inside the boundary.
    """
    n = grid.n
    x0 = np.atleast_1d(np.asarray(x0, float))
    p0 = np.atleast_1d(np.asarray(p0, float))
    if x0.size != n or p0.size != n:
        raise ConfigurationError(f"x0 and p0 must have {n} components")
    if sigma <= 0.0:
        raise ConfigurationError("sigma must be positive")
    for d in grid.dx:
        if sigma < 4.0 * d:
            raise ConfigurationError(f"sigma {sigma} under-resolved: needs >= 4 dx = {4*d}")
    for j, (ax, e) in enumerate(zip(grid.axes, grid.extent)):
        if x0[j] - 10.0 * sigma < ax[0] or x0[j] + 10.0 * sigma > ax[0] + e:
            raise ConfigurationError("packet closer than 10 sigma to the grid boundary")

    mesh = grid.meshes()
    r2 = sum((mesh[j] - x0[j]) ** 2 for j in range(n))
    phase = sum(p0[j] * (mesh[j] - x0[j]) for j in range(n)) / hbar
    vals = np.exp(-r2 / (4.0 * sigma ** 2)) * np.exp(1j * phase)
    vals = vals / np.sqrt(np.sum(np.abs(vals) ** 2) * grid.cell_volume)
    return WavefunctionGrid(grid, vals, time=0.0, hbar=hbar)


def _kinetic_phase_grid(ham: HamiltonianSpec, grid: SpatialGrid) -> np.ndarray:
    """Kinetic energy hbar^2 |k|^2_M / 2 of every Fourier mode."""
    kmesh = np.meshgrid(*grid.k_axes, indexing="ij")
    return sum(ham.hbar ** 2 * kmesh[j] ** 2 / (2.0 * ham.mass.masses[j])
               for j in range(grid.n))


def check_resolution(ham: HamiltonianSpec, psi: WavefunctionGrid, dt_step: float) -> None:
    """Require the per-step kinetic phase over the occupied spectrum below pi/4."""
    psi_hat = np.fft.fftn(psi.values)
    occupied = np.abs(psi_hat) > SPECTRUM_THRESHOLD * np.max(np.abs(psi_hat))
    t_grid = _kinetic_phase_grid(ham, psi.grid)
    max_phase = float(np.max(t_grid[occupied])) * dt_step / ham.hbar
    if max_phase >= KINETIC_PHASE_LIMIT:
        raise ConfigurationError(
            f"kinetic phase per step {max_phase:.3f} exceeds pi/4; "
            "reduce dt_step or refine the grid"
        )


def evolve(ham: HamiltonianSpec, psi: WavefunctionGrid, dt_step: float,
           n_steps: int) -> WavefunctionGrid:
    """Advance psi by n_steps Strang-split steps of size dt_step."""
    if dt_step <= 0.0:
        raise ValueError("dt_step must be positive")
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if n_steps == 0:
        return psi
    check_resolution(ham, psi, dt_step)
    return _evolve_unchecked(ham, psi, dt_step, n_steps)


def _evolve_unchecked(ham, psi, dt_step, n_steps):
    grid = psi.grid
    hbar = ham.hbar
    u = ham.potential.evaluate(grid.position_array())
    half_u = np.exp(-0.5j * u * dt_step / hbar)
    full_u = half_u * half_u
    kin = np.exp(-1j * _kinetic_phase_grid(ham, grid) * dt_step / hbar)

    vals = psi.values * half_u
    for step in range(n_steps):
        vals = np.fft.ifftn(kin * np.fft.fftn(vals))
        vals = vals * (half_u if step == n_steps - 1 else full_u)
    return psi.with_values(vals, time=psi.time + n_steps * dt_step)


def evolve_frames(ham: HamiltonianSpec, psi: WavefunctionGrid, dt_step: float,
                  steps_per_frame: int, n_frames: int) -> list:
    """Evolve while recording the state every steps_per_frame steps.

    Returns n_frames + 1 states, the initial one included.
    """
    if steps_per_frame < 1 or n_frames < 1:
        raise ValueError("need steps_per_frame >= 1 and n_frames >= 1")
    check_resolution(ham, psi, dt_step)
    frames = [psi]
    current = psi
    for _ in range(n_frames):
        current = _evolve_unchecked(ham, current, dt_step, steps_per_frame)
        frames.append(current)
    return frames
