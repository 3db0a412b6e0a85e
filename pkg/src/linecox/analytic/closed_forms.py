"""Closed-form distance distributions.

Every function accepts a scalar t or an array of t values and returns the
matching shape. Distances are street distances (along lines, turning at
crossings) except for the planar Poisson reference, which is Euclidean.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import NegativeIntensity, NegativeT, NonFinite
from ..model import ModelParams, validate

__all__ = [
    "cdf_naive_recursion",
    "cdf_one_turn_point",
    "cdf_zero_turn_intersection",
    "cdf_upper_intersection",
    "cdf_ppp2d_reference",
    "equivalent_ppp_density",
]


def _check_t(t):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFinite("t must be finite")
    if np.any(arr < 0):
        raise NegativeT("t must be >= 0")
    return arr, np.isscalar(t) or getattr(t, "ndim", 0) == 0


def _ret(values, scalar):
    return float(values) if scalar else values


def cdf_naive_recursion(params: ModelParams, t):
    """Single-ray baseline: the distance to the nearest point in one fixed
    direction along the starting line, crossings ignored. Exponential(mu);
    independent of lambda. Kept as the sanity floor every other curve must
    beat."""
    validate(params)
    arr, scalar = _check_t(t)
    return _ret(-np.expm1(-params.mu * arr), scalar)


def cdf_one_turn_point(params: ModelParams, t):
    """Shortest one-turn street distance from a typical point on a line.

    The path may run both ways along the own line and turn at most once at
    a crossing. Averaging the crossing count generating function over the
    crossing positions gives

        F(t) = 1 - exp(-2*mu*t - 2*lam*t + (lam/mu) * (1 - exp(-2*mu*t))).

    At lam = 0 this collapses to the own-line two-sided exponential
    1 - exp(-2*mu*t).
    """
    validate(params)
    arr, scalar = _check_t(t)
    lam, mu = params.lam, params.mu
    expo = -2.0 * mu * arr - 2.0 * lam * arr + (lam / mu) * (-np.expm1(-2.0 * mu * arr))
    return _ret(-np.expm1(expo), scalar)


def cdf_zero_turn_intersection(params: ModelParams, t):
    """Nearest point along either of the two streets of a typical
    intersection, no turns: four independent exponential rays,
    F(t) = 1 - exp(-4*mu*t). Also the lower sandwich bound for the one-turn
    intersection distribution."""
    validate(params)
    arr, scalar = _check_t(t)
    return _ret(-np.expm1(-4.0 * params.mu * arr), scalar)


def cdf_upper_intersection(params: ModelParams, t):
    """Upper sandwich bound for the one-turn intersection distribution:
    pretend every crossing within reach carries a point immediately, which
    inflates the effective ray intensity to mu + 4*lam on each of the four
    rays, F(t) = 1 - exp(-4*(mu + 4*lam)*t)."""
    validate(params)
    arr, scalar = _check_t(t)
    return _ret(-np.expm1(-4.0 * (params.mu + 4.0 * params.lam) * arr), scalar)


def equivalent_ppp_density(params: ModelParams) -> float:
    """Points per unit area of the street point process: line length per
    unit area (pi*lam/2 under the crossing-rate convention) times mu. A
    planar Poisson process with this density is the natural Euclidean
    reference."""
    validate(params)
    return math.pi * params.lam * params.mu / 2.0


def cdf_ppp2d_reference(density, t):
    """Euclidean nearest-neighbor CDF of a planar Poisson process with the
    given intensity (points per unit area): F(t) = 1 - exp(-pi*density*t^2).
    Reference curve for "does the street geometry matter" comparisons."""
    if not (isinstance(density, (int, float)) and math.isfinite(density)):
        raise NonFinite(f"density must be finite, got {density!r}")
    if density < 0:
        raise NegativeIntensity(f"density must be >= 0, got {density}")
    arr, scalar = _check_t(t)
    return _ret(-np.expm1(-math.pi * density * arr * arr), scalar)
