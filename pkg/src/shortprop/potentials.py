"""Hamiltonian data shared by every other module.

A system is H(x, p) = sum_j p_j^2 / (2 m_j) + U(x) with a diagonal, positive
mass matrix and a time-independent potential.  Every built-in potential is
additive across axes,

    U(x) = sum_j u_j(x_j),

with each u_j a polynomial in one coordinate, so gradients are exact and the
Hessian is diagonal.  Positions are arrays whose last axis is the spatial
dimension; for n = 1 plain scalars and 1-d arrays of sample points are also
accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError

DEFAULT_DOMAIN_HALFWIDTH = 20.0


def as_points(x, n: int) -> np.ndarray:
    """Normalize a position argument to an array of shape (..., n)."""
    pts = np.asarray(x, dtype=float)
    if n == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
        pts = pts[..., np.newaxis]
    if pts.shape[-1] != n:
        raise ValueError(f"expected positions with last axis {n}, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class Box:
    """Axis-aligned evaluation domain."""

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def cube(cls, n: int, halfwidth: float = DEFAULT_DOMAIN_HALFWIDTH) -> "Box":
        return cls(lo=np.full(n, -halfwidth), hi=np.full(n, halfwidth))

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, pts: np.ndarray) -> bool:
        return bool(np.all(pts >= self.lo) and np.all(pts <= self.hi))

    def require(self, pts: np.ndarray) -> None:
        if not self.contains(pts):
            raise DomainError(
                f"position outside evaluation domain [{self.lo}, {self.hi}]"
            )


@dataclass(frozen=True)
class MassMatrix:
    """Diagonal mass matrix; one strictly positive mass per axis."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if m.ndim != 1 or m.size < 1:
            raise ValueError("masses must be a 1-d vector with n >= 1 entries")
        if not np.all(m > 0.0):
            raise ValueError("every mass must be strictly positive")
        object.__setattr__(self, "masses", m)

    @property
    def n(self) -> int:
        return self.masses.size

    @property
    def inverse(self) -> np.ndarray:
        return 1.0 / self.masses

    def product(self) -> float:
        return float(np.prod(self.masses))

    def kinetic_energy(self, p) -> float | np.ndarray:
        p = as_points(p, self.n)
        out = np.sum(p * p / (2.0 * self.masses), axis=-1)
        return out if out.ndim else float(out)


def _per_axis(value, n: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        arr = np.full(n, arr[0])
    if arr.size != n:
        raise ValueError(f"expected a scalar or {n} per-axis values, got {arr.size}")
    return arr


@dataclass(frozen=True)
class PotentialModel:
    """A potential from the built-in family, with analytic derivatives.

    kind is one of ``free``, ``harmonic``, ``quartic``, ``double_well``,
    ``polynomial``.  ``coeffs`` holds one ascending coefficient array per
    axis; ``params`` records the named constructor arguments for manifests.
    """

    kind: str
    coeffs: tuple
    domain: Box
    params: dict = field(default_factory=dict)

    # -- constructors -------------------------------------------------------

    @classmethod
    def free(cls, n: int = 1, domain: Box | None = None) -> "PotentialModel":
        """U = 0."""
        coeffs = tuple(np.zeros(1) for _ in range(n))
        return cls("free", coeffs, domain or Box.cube(n), {})

    @classmethod
    def harmonic(cls, omega, mass=1.0, n: int | None = None,
                 domain: Box | None = None) -> "PotentialModel":
        """U = sum_j (1/2) m_j omega_j^2 x_j^2."""
        if n is None:
            n = max(np.atleast_1d(omega).size, np.atleast_1d(mass).size)
        w = _per_axis(omega, n)
        m = _per_axis(mass, n)
        coeffs = tuple(np.array([0.0, 0.0, 0.5 * m[j] * w[j] ** 2]) for j in range(n))
        return cls("harmonic", coeffs, domain or Box.cube(n),
                   {"omega": w.tolist(), "mass": m.tolist()})

    @classmethod
    def quartic(cls, a, n: int | None = None, domain: Box | None = None) -> "PotentialModel":
        """U = sum_j a_j x_j^4."""
        if n is None:
            n = np.atleast_1d(a).size
        av = _per_axis(a, n)
        coeffs = tuple(np.array([0.0, 0.0, 0.0, 0.0, av[j]]) for j in range(n))
        return cls("quartic", coeffs, domain or Box.cube(n), {"a": av.tolist()})

    @classmethod
    def double_well(cls, a, b, n: int = 1, domain: Box | None = None) -> "PotentialModel":
        """U = sum_j (b_j x_j^4 - a_j x_j^2)."""
        av = _per_axis(a, n)
        bv = _per_axis(b, n)
        coeffs = tuple(np.array([0.0, 0.0, -av[j], 0.0, bv[j]]) for j in range(n))
        return cls("double_well", coeffs, domain or Box.cube(n),
                   {"a": av.tolist(), "b": bv.tolist()})

    @classmethod
    def polynomial(cls, coeffs_per_axis, domain: Box | None = None) -> "PotentialModel":
        """U = sum_j sum_k c_{jk} x_j^k, coefficients ascending per axis."""
        coeffs = tuple(np.asarray(c, dtype=float) for c in coeffs_per_axis)
        if not coeffs:
            raise ValueError("need at least one axis of coefficients")
        return cls("polynomial", coeffs, domain or Box.cube(len(coeffs)),
                   {"coeffs": [c.tolist() for c in coeffs]})

    # -- derivative coefficient tables --------------------------------------

    @cached_property
    def _grad_coeffs(self) -> tuple:
        return tuple(npoly.polyder(c) for c in self.coeffs)

    @cached_property
    def _hess_coeffs(self) -> tuple:
        return tuple(npoly.polyder(c, 2) for c in self.coeffs)

    # -- evaluation ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def _points(self, x) -> np.ndarray:
        pts = as_points(x, self.n)
        self.domain.require(pts)
        return pts

    def evaluate(self, x) -> float | np.ndarray:
        """Potential energy U(x)."""
        pts = self._points(x)
        out = sum(npoly.polyval(pts[..., j], self.coeffs[j]) for j in range(self.n))
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    def gradient(self, x) -> np.ndarray:
        """Analytic gradient of U, shape (..., n)."""
        pts = self._points(x)
        return np.stack(
            [np.asarray(npoly.polyval(pts[..., j], self._grad_coeffs[j]), dtype=float)
             + np.zeros(pts.shape[:-1])
             for j in range(self.n)],
            axis=-1,
        )

    def hessian_diag(self, x) -> np.ndarray:
        """Diagonal of the Hessian of U (the Hessian is diagonal), shape (..., n)."""
        pts = self._points(x)
        return np.stack(
            [np.asarray(npoly.polyval(pts[..., j], self._hess_coeffs[j]), dtype=float)
             + np.zeros(pts.shape[:-1])
             for j in range(self.n)],
            axis=-1,
        )

    def hessian(self, x) -> np.ndarray:
        """Hessian of U as a full (..., n, n) matrix."""
        diag = self.hessian_diag(x)
        out = np.zeros(diag.shape + (self.n,))
        idx = np.arange(self.n)
        out[..., idx, idx] = diag
        return out

    def max_abs_gradient_1d(self, axis: int, lo: float, hi: float,
                            samples: int = 2048) -> float:
        """Upper estimate of |u_j'(x)| over [lo, hi] for one axis."""
        xs = np.linspace(lo, hi, samples)
        return float(np.max(np.abs(npoly.polyval(xs, self._grad_coeffs[axis]))))

    def axis_coeffs(self, axis: int) -> np.ndarray:
        return self.coeffs[axis]


@dataclass(frozen=True)
class HamiltonianSpec:
    """Mass matrix, potential, and hbar bundled together."""

    mass: MassMatrix
    potential: PotentialModel
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")
        if self.mass.n != self.potential.n:
            raise ValueError(
                f"mass matrix dimension {self.mass.n} != potential dimension {self.potential.n}"
            )

    @property
    def n(self) -> int:
        return self.mass.n

    def energy(self, x, p) -> float | np.ndarray:
        return self.mass.kinetic_energy(p) + self.potential.evaluate(x)


# -- convenience constructors used throughout the test battery ---------------

def free_hamiltonian(n: int = 1, mass=1.0, hbar: float = 1.0) -> HamiltonianSpec:
    return HamiltonianSpec(MassMatrix(_per_axis(mass, n)), PotentialModel.free(n), hbar)


def harmonic_hamiltonian(omega=1.0, mass=1.0, hbar: float = 1.0,
                         n: int | None = None) -> HamiltonianSpec:
    pot = PotentialModel.harmonic(omega, mass, n=n)
    return HamiltonianSpec(MassMatrix(_per_axis(mass, pot.n)), pot, hbar)


def quartic_hamiltonian(a=1.0, mass=1.0, hbar: float = 1.0,
                        n: int | None = None) -> HamiltonianSpec:
    pot = PotentialModel.quartic(a, n=n)
    return HamiltonianSpec(MassMatrix(_per_axis(mass, pot.n)), pot, hbar)


def double_well_hamiltonian(a=1.0, b=1.0, mass=1.0, hbar: float = 1.0,
                            n: int = 1) -> HamiltonianSpec:
    pot = PotentialModel.double_well(a, b, n=n)
    return HamiltonianSpec(MassMatrix(_per_axis(mass, n)), pot, hbar)


def polynomial_hamiltonian(coeffs_per_axis, mass=1.0, hbar: float = 1.0) -> HamiltonianSpec:
    pot = PotentialModel.polynomial(coeffs_per_axis)
    return HamiltonianSpec(MassMatrix(_per_axis(mass, pot.n)), pot, hbar)
