"""Short-time actions: the line-averaged potential, the corrected
generating function, the two wrong midpoint rules, and exact oracles.

For a straight segment from x0 to x traversed in time dt the corrected
short-time action is

    S~(x, x0; dt) = sum_j m_j (x_j - x0_j)^2 / (2 dt) - U~(x, x0) dt,

where U~ is the average of U along the segment,

    U~(x, x0) = int_0^1 U(lam x + (1 - lam) x0) dlam.

The midpoint rules replace U~ by (U(x) + U(x0))/2 or U((x + x0)/2); both are
wrong already at first order in dt away from degenerate geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FocalPointError, NoUniqueTrajectoryError
from .integrators import leapfrog, leapfrog_with_action
from .potentials import HamiltonianSpec, as_points

FOCAL_SIN_THRESHOLD = 1e-12

VARIANT_MAKRI_MILLER = "makri_miller"
VARIANT_MIDPOINT_AVG = "midpoint_avg"
VARIANT_MIDPOINT_POINT = "midpoint_point"
VARIANT_EXACT_HO = "exact_ho"
VARIANT_EXACT_BVP = "exact_bvp"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [0, 1]; exact for polynomials up to degree 2*order - 1."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @classmethod
    def gauss_legendre(cls, order: int = 16) -> "QuadratureRule":
        if order < 1:
            raise ValueError("order must be >= 1")
        t, w = np.polynomial.legendre.leggauss(order)
        return cls(nodes=(t + 1.0) / 2.0, weights=w / 2.0, order=order)

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * np.array([f(t) for t in self.nodes])))


@lru_cache(maxsize=8)
def default_rule(order: int = 16) -> QuadratureRule:
    return QuadratureRule.gauss_legendre(order)


@dataclass(frozen=True)
class ActionApproximant:
    """An action value tagged with the formula variant that produced it."""

    variant: str
    value: float
    dt: float


def _segment_points(ham, x, x0):
    x = as_points(x, ham.n)
    x0 = as_points(x0, ham.n)
    return np.broadcast_arrays(x, x0)


def averaged_potential(ham: HamiltonianSpec, x, x0,
                       rule: QuadratureRule | None = None):
    """Line average U~(x, x0) of the potential over the straight segment."""
    rule = rule or default_rule()
    x, x0 = _segment_points(ham, x, x0)
    out = 0.0
    for lam, w in zip(rule.nodes, rule.weights):
        out = out + w * ham.potential.evaluate(lam * x + (1.0 - lam) * x0)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def averaged_potential_gradient(ham: HamiltonianSpec, x, x0,
                                rule: QuadratureRule | None = None) -> np.ndarray:
    """Gradient of U~ in its first argument: int_0^1 lam grad U(lam x + (1-lam) x0) dlam.

    At x = x0 this equals grad U(x0) / 2.
    """
    rule = rule or default_rule()
    x, x0 = _segment_points(ham, x, x0)
    out = 0.0
    for lam, w in zip(rule.nodes, rule.weights):
        out = out + (w * lam) * ham.potential.gradient(lam * x + (1.0 - lam) * x0)
    return np.asarray(out, dtype=float)


def _require_dt(dt: float) -> None:
    if not dt > 0.0:
        raise ValueError("dt must be positive")


def _kinetic(ham, x, x0, dt):
    d = x - x0
    return np.sum(ham.mass.masses * d * d, axis=-1) / (2.0 * dt)


def action_makri_miller(ham: HamiltonianSpec, x, x0, dt: float,
                        rule: QuadratureRule | None = None) -> ActionApproximant:
    """Corrected short-time action with the line-averaged potential term."""
    _require_dt(dt)
    x, x0 = _segment_points(ham, x, x0)
    value = _kinetic(ham, x, x0, dt) - averaged_potential(ham, x, x0, rule) * dt
    return ActionApproximant(VARIANT_MAKRI_MILLER, _scalarize(value), dt)


def action_midpoint_avg(ham: HamiltonianSpec, x, x0, dt: float) -> ActionApproximant:
    """Wrong rule: potential term is the endpoint average (U(x) + U(x0)) / 2."""
    _require_dt(dt)
    x, x0 = _segment_points(ham, x, x0)
    pot = 0.5 * (ham.potential.evaluate(x) + ham.potential.evaluate(x0))
    value = _kinetic(ham, x, x0, dt) - pot * dt
    return ActionApproximant(VARIANT_MIDPOINT_AVG, _scalarize(value), dt)


def action_midpoint_point(ham: HamiltonianSpec, x, x0, dt: float) -> ActionApproximant:
    """Worse rule: potential evaluated at the segment midpoint."""
    _require_dt(dt)
    x, x0 = _segment_points(ham, x, x0)
    value = _kinetic(ham, x, x0, dt) - ham.potential.evaluate(0.5 * (x + x0)) * dt
    return ActionApproximant(VARIANT_MIDPOINT_POINT, _scalarize(value), dt)


def exact_action_ho(m: float, omega: float, x, x0, dt: float) -> ActionApproximant:
    """Closed-form 1D harmonic-oscillator action.

    S = m omega ((x^2 + x0^2) cos(omega dt) - 2 x x0) / (2 sin(omega dt)),
    valid away from focal times sin(omega dt) = 0.
    """
    _require_dt(dt)
    value = ho_action_value(m, omega, np.asarray(x, float), np.asarray(x0, float), dt)
    return ActionApproximant(VARIANT_EXACT_HO, _scalarize(value), dt)


def ho_action_value(m: float, omega: float, x, x0, dt: float):
    """Vectorized harmonic action (used by the exact kernel as its phase)."""
    s = np.sin(omega * dt)
    if abs(s) < FOCAL_SIN_THRESHOLD:
        raise FocalPointError(
            f"|sin(omega dt)| = {abs(s):.3e} below focal threshold {FOCAL_SIN_THRESHOLD}"
        )
    return m * omega * ((x * x + x0 * x0) * np.cos(omega * dt) - 2.0 * x * x0) / (2.0 * s)


def exact_action_bvp(ham: HamiltonianSpec, x, x0, dt: float,
                     steps: int = 4096) -> ActionApproximant:
    """Action along the classical trajectory, by shooting on the initial momentum.

    Solves the two-point boundary value problem x(0) = x0, x(dt) = x with
    Newton iteration on the leapfrog flow map (finite-difference Jacobian),
    then integrates the Lagrangian with the same discretization.
    """
    _require_dt(dt)
    n = ham.n
    xt = as_points(x, n).reshape(n)
    x0v = as_points(x0, n).reshape(n)

    p = ham.mass.masses * (xt - x0v) / dt  # free-flight initial guess
    tol = 1e-13 * max(1.0, float(np.max(np.abs(xt))))
    pscale = max(1.0, float(np.max(np.abs(p))))
    fd_step = 1e-6 * pscale

    converged = False
    for _ in range(50):
        xf, _ = leapfrog(ham, x0v, p, dt, steps)
        r = xf - xt
        if np.max(np.abs(r)) <= tol:
            converged = True
            break
        jac = np.empty((n, n))
        for j in range(n):
            dp = np.zeros(n)
            dp[j] = fd_step
            xfj, _ = leapfrog(ham, x0v, p + dp, dt, steps)
            jac[:, j] = (xfj - xf) / fd_step
        try:
            delta = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError as exc:
            raise NoUniqueTrajectoryError("singular shooting Jacobian") from exc
        p = p - delta
    if not converged:
        raise NoUniqueTrajectoryError(
            f"shooting did not converge in 50 iterations (dt={dt})"
        )
    # Two polish steps: quadratic convergence pushes the terminal error to the
    # round-off floor, which the action needs at the smallest dt.
    for _ in range(2):
        xf, _ = leapfrog(ham, x0v, p, dt, steps)
        r = xf - xt
        if np.max(np.abs(r)) == 0.0:
            break
        jac = np.empty((n, n))
        for j in range(n):
            dp = np.zeros(n)
            dp[j] = fd_step
            xfj, _ = leapfrog(ham, x0v, p + dp, dt, steps)
            jac[:, j] = (xfj - xf) / fd_step
        try:
            p = p - np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            break

    _, _, action = leapfrog_with_action(ham, x0v, p, dt, steps)
    return ActionApproximant(VARIANT_EXACT_BVP, float(action), dt)


def _scalarize(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value
