"""Symplectic leapfrog (kick-drift-kick) for the classical oracles."""

from __future__ import annotations

import numpy as np

from .potentials import HamiltonianSpec, as_points


def leapfrog(ham: HamiltonianSpec, x0, p0, dt: float, steps: int):
    """Integrate Hamilton's equations from (x0, p0) over dt with `steps` substeps.

    Returns the final (x, p) pair.
    """
    x, p, _ = _leapfrog_core(ham, x0, p0, dt, steps, want_action=False)
    return x, p


def leapfrog_with_action(ham: HamiltonianSpec, x0, p0, dt: float, steps: int):
    """Leapfrog flow that also accumulates the discrete Lagrangian action.

    Kinetic term uses the half-step momenta (equivalently the chord velocities),
    the potential term a trapezoid over the node positions; both are second
    order, matching the integrator, and exact for U = 0.
    """
    return _leapfrog_core(ham, x0, p0, dt, steps, want_action=True)


def _leapfrog_core(ham, x0, p0, dt, steps, want_action):
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    n = ham.n
    x = as_points(x0, n).reshape(n).copy()
    p = as_points(p0, n).reshape(n).copy()
    minv = ham.mass.inverse
    h = dt / steps
    pot = ham.potential

    g = pot.gradient(x)
    action = 0.0
    if want_action:
        action -= 0.5 * h * pot.evaluate(x)
    for k in range(steps):
        p_half = p - 0.5 * h * g
        x = x + h * minv * p_half
        g = pot.gradient(x)
        p = p_half - 0.5 * h * g
        if want_action:
            action += h * float(np.sum(p_half * p_half * minv)) / 2.0
            w = 0.5 if k == steps - 1 else 1.0
            action -= w * h * pot.evaluate(x)
    return x, p, action
