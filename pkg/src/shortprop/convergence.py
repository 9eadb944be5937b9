"""Empirical convergence orders: log-log slope fits over geometric dt sweeps.

Every first/second-order statement in the toolkit is checked the same way:
evaluate an error as a function of dt on a decreasing geometric grid, drop
points that sit on the round-off floor, and least-squares fit
log(err) = slope * log(dt) + intercept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError

FLOOR_FACTOR = 100.0  # multiples of machine epsilon relative to the largest error
MIN_FIT_POINTS = 5


@dataclass(frozen=True)
class SweepResult:
    """Errors on a geometric dt grid together with the fitted power law."""

    dts: np.ndarray
    errors: np.ndarray
    slope: float
    intercept: float
    fit_residual: float
    floor_mask: np.ndarray  # True where a point was excluded as floored

    @property
    def constant(self) -> float:
        """Prefactor C in err ~ C * dt^slope."""
        return float(np.exp(self.intercept))

    def error_over(self, power: float) -> np.ndarray:
        """err / dt^power on the unfloored points (smallest dt last)."""
        keep = ~self.floor_mask
        return self.errors[keep] / self.dts[keep] ** power


def geometric_grid(dt_max: float, dt_min: float, points: int) -> np.ndarray:
    if not (dt_max > dt_min > 0.0):
        raise ValueError("need dt_max > dt_min > 0")
    if points < MIN_FIT_POINTS:
        raise ValueError(f"need at least {MIN_FIT_POINTS} points")
    return np.geomspace(dt_max, dt_min, points)


def sweep(error_fn, dt_max: float, dt_min: float, points: int = 25) -> SweepResult:
    """Evaluate error_fn on a geometric grid and fit the log-log slope."""
    dts = geometric_grid(dt_max, dt_min, points)
    errors = np.array([float(error_fn(dt)) for dt in dts])
    if np.any(errors < 0.0):
        raise ValueError("error_fn must be nonnegative")
    return fit_sweep(dts, errors)


def fit_sweep(dts: np.ndarray, errors: np.ndarray) -> SweepResult:
    """Floor-mask and fit an existing (dt, error) table."""
    dts = np.asarray(dts, dtype=float)
    errors = np.asarray(errors, dtype=float)
    floor = FLOOR_FACTOR * np.finfo(float).eps * np.max(errors) if errors.size else 0.0
    floored = ~np.isfinite(errors) | (errors <= floor)
    keep = ~floored
    if np.count_nonzero(keep) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"only {np.count_nonzero(keep)} unfloored points; need {MIN_FIT_POINTS}"
        )
    logdt = np.log(dts[keep])
    logerr = np.log(errors[keep])
    (slope, intercept), res = np.polyfit(logdt, logerr, 1, full=True)[:2]
    residual = float(np.sqrt(res[0] / logdt.size)) if res.size else 0.0
    return SweepResult(dts=dts, errors=errors, slope=float(slope),
                       intercept=float(intercept), fit_residual=residual,
                       floor_mask=floored)


@dataclass(frozen=True)
class Claim:
    """One asymptotic claim: an error function plus the slope interval it must hit."""

    name: str
    error_fn: object
    dt_max: float
    dt_min: float
    slope_lo: float
    slope_hi: float = np.inf  # one-sided claims leave the upper bound open
    points: int = 25
    description: str = ""


@dataclass(frozen=True)
class ClaimResult:
    name: str
    status: str  # PASS / FAIL / ERROR
    slope: float
    constant: float
    dt_max: float
    dt_min: float
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


def run_claim(claim: Claim) -> ClaimResult:
    try:
        result = sweep(claim.error_fn, claim.dt_max, claim.dt_min, claim.points)
    except Exception as exc:  # a failing claim must not halt the batch
        return ClaimResult(claim.name, "ERROR", np.nan, np.nan,
                           claim.dt_max, claim.dt_min, f"{type(exc).__name__}: {exc}")
    ok = claim.slope_lo <= result.slope <= claim.slope_hi
    return ClaimResult(claim.name, "PASS" if ok else "FAIL", result.slope,
                       result.constant, claim.dt_max, claim.dt_min,
                       f"expected slope in [{claim.slope_lo}, {claim.slope_hi}]")


def claim_report(claims) -> list[ClaimResult]:
    """Run every claim, never halting on individual failures."""
    return [run_claim(c) for c in claims]


def report_lines(results) -> list[str]:
    """Aligned-column text rendering of a claim report."""
    rows = [("claim", "status", "slope", "constant", "dt_range")]
    for r in results:
        rows.append((r.name, r.status, f"{r.slope:.4f}", f"{r.constant:.4e}",
                     f"[{r.dt_min:g}, {r.dt_max:g}]"))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
