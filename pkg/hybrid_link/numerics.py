"""Deterministic 1-D numerical kernels with explicit tolerance contracts.

Thin, validated wrappers around scipy:

- :func:`integrate_adaptive` - QUADPACK adaptive Gauss-Kronrod (``quad``),
  worst-interval-first bisection, with mandatory breakpoints.
- :func:`find_root` - Brent's method on a verified sign-change bracket.
- :func:`maximize_1d` - coarse pre-scan followed by bounded Brent refinement.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq, minimize_scalar

from hybrid_link.errors import DomainError, QuadratureError, RootFindingError

__all__ = [
    "MaximizeResult",
    "QuadratureResult",
    "QuadratureSpec",
    "RootSpec",
    "find_root",
    "integrate_adaptive",
    "maximize_1d",
]

logger = logging.getLogger("hybrid_link.numerics")

RealFunction = Callable[[float], float]

MIN_SCAN_POINTS = 32


# -----------------------------------------------------------------------
# Specs and results
# -----------------------------------------------------------------------


class QuadratureSpec(BaseModel):
    """Tolerances for :func:`integrate_adaptive`.

    Attributes:
        rel_tol: Relative tolerance on the integral.
        abs_tol: Absolute floor on the error estimate.
        max_subdivisions: Upper bound on the number of subintervals.
        mandatory_breakpoints: Sorted interior points the partition must
            contain; used to pin narrow resonances.
    """

    model_config = {"frozen": True}

    rel_tol: float = Field(default=1e-9, gt=0.0)
    abs_tol: float = Field(default=1e-14, ge=0.0)
    max_subdivisions: int = Field(default=10_000, ge=1)
    mandatory_breakpoints: tuple[float, ...] = ()

    @field_validator("mandatory_breakpoints")
    @classmethod
    def _sorted_finite(cls, points: tuple[float, ...]) -> tuple[float, ...]:
        if any(not math.isfinite(p) for p in points):
            raise ValueError("breakpoints must be finite")
        if any(b <= a for a, b in zip(points, points[1:], strict=False)):
            raise ValueError("breakpoints must be strictly increasing")
        return points

    def with_breakpoints(self, points: list[float] | tuple[float, ...]) -> QuadratureSpec:
        """Copy of this spec with ``points`` (deduplicated, sorted) as breakpoints."""
        return self.model_copy(update={"mandatory_breakpoints": tuple(sorted(set(points)))})


class QuadratureResult(BaseModel):
    """Integral value, its error estimate and the work spent."""

    model_config = {"frozen": True}

    value: float
    error: float
    n_intervals: int
    n_evaluations: int


class RootSpec(BaseModel):
    """Bracket and stopping rule for :func:`find_root`."""

    model_config = {"frozen": True}

    bracket: tuple[float, float]
    x_tol: float = Field(default=1e-12, gt=0.0)
    max_iter: int = Field(default=200, ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> RootSpec:
        lo, hi = self.bracket
        if not lo < hi:
            raise ValueError(f"bracket must satisfy lo < hi, got {self.bracket}")
        return self


class MaximizeResult(BaseModel):
    """Location and value of a 1-D maximum.

    ``unimodal`` is ``False`` when the pre-scan saw more than one local
    maximum, in which case the result is the best of the scanned peaks.
    """

    model_config = {"frozen": True}

    x: float
    fx: float
    unimodal: bool = True


# -----------------------------------------------------------------------
# Quadrature
# -----------------------------------------------------------------------


def integrate_adaptive(
    f: RealFunction,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` to ``max(abs_tol, rel_tol·|I|)``.

    Raises:
        DomainError: If the interval is empty or a breakpoint is not interior.
        QuadratureError: If the subdivision budget is exhausted before the
            tolerance is met.  The exception carries the best estimate.
    """
    spec = spec or QuadratureSpec()
    if not a < b:
        raise DomainError(f"integration interval must satisfy a < b, got [{a}, {b}]")
    points = spec.mandatory_breakpoints
    if any(not a < p < b for p in points):
        raise DomainError(f"breakpoints {points} must lie strictly inside [{a}, {b}]")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        out = quad(
            f,
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
            points=points or None,
            full_output=1,
        )
    value, error, info = float(out[0]), float(out[1]), out[2]
    n_intervals = int(info["last"])
    tolerance = max(spec.abs_tol, spec.rel_tol * abs(value))

    if error > tolerance:
        message = out[3] if len(out) > 3 else "tolerance not met"
        if n_intervals >= spec.max_subdivisions:
            raise QuadratureError(
                f"no convergence within {spec.max_subdivisions} subdivisions",
                estimate=value,
                error=error,
            )
        # Remaining failure modes are roundoff-limited: the estimate is as
        # good as double precision allows on this integrand.
        logger.warning("Quadrature on [%g, %g] stopped early: %s", a, b, str(message).splitlines()[0])

    logger.debug("quad [%g, %g]: %d intervals, %d evaluations", a, b, n_intervals, info["neval"])
    return QuadratureResult(value=value, error=error, n_intervals=n_intervals, n_evaluations=int(info["neval"]))


# -----------------------------------------------------------------------
# Root finding
# -----------------------------------------------------------------------


def find_root(f: RealFunction, spec: RootSpec) -> float:
    """Locate a root of ``f`` inside ``spec.bracket`` to within ``spec.x_tol``.

    Raises:
        RootFindingError: If the bracket shows no sign change or Brent's
            method exceeds ``max_iter``.
    """
    lo, hi = spec.bracket
    f_lo, f_hi = f(lo), f(hi)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
        raise RootFindingError(f"function is not finite on the bracket ({lo}, {hi})")
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise RootFindingError(f"no sign change on ({lo}, {hi}): f = ({f_lo:.6g}, {f_hi:.6g})")

    root, result = brentq(f, lo, hi, xtol=spec.x_tol, maxiter=spec.max_iter, full_output=True, disp=False)
    if not result.converged:
        raise RootFindingError(f"no convergence after {spec.max_iter} iterations", best_estimate=float(root))
    return float(root)


# -----------------------------------------------------------------------
# Maximisation
# -----------------------------------------------------------------------


def maximize_1d(
    f: RealFunction,
    lo: float,
    hi: float,
    x_tol: float,
    *,
    n_scan: int = 64,
) -> MaximizeResult:
    """Maximise a (presumed unimodal) ``f`` on ``[lo, hi]``.

    A uniform pre-scan of ``n_scan`` samples (at least 32) brackets the best
    sample; bounded Brent refines inside the neighbouring cells.  Endpoints
    are returned exactly when the maximum sits on the boundary.
    """
    if not lo < hi:
        raise DomainError(f"search interval must satisfy lo < hi, got [{lo}, {hi}]")
    if not x_tol > 0.0:
        raise DomainError(f"x_tol must be positive, got {x_tol}")
    n_scan = max(n_scan, MIN_SCAN_POINTS)

    xs = np.linspace(lo, hi, n_scan)
    ys = np.array([f(float(x)) for x in xs])
    best = int(np.argmax(ys))

    steps = np.sign(np.diff(ys))
    steps = steps[steps != 0]
    peaks = int(np.count_nonzero((steps[:-1] > 0) & (steps[1:] < 0)))
    unimodal = peaks <= 1
    if not unimodal:
        logger.warning("maximize_1d: pre-scan found %d local maxima on [%g, %g]", peaks, lo, hi)

    left = float(xs[max(best - 1, 0)])
    right = float(xs[min(best + 1, n_scan - 1)])
    refined = minimize_scalar(lambda x: -f(x), bounds=(left, right), method="bounded", options={"xatol": x_tol})

    x_best, f_best = float(xs[best]), float(ys[best])
    if -float(refined.fun) > f_best:
        x_best, f_best = float(refined.x), -float(refined.fun)
    return MaximizeResult(x=x_best, fx=f_best, unimodal=unimodal)
