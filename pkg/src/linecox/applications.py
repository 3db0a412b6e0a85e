"""Link-budget calculators built on the distance distributions.

Vehicle-to-vehicle links assisted by reflective surfaces mounted at street
corners succeed when the received SNR clears a threshold; with
corner-mounted hardware the relevant geometry is exactly the street-path
distance the rest of this package models. Everything here is linear units;
the CLI converts dB at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from scipy.optimize import brentq

from .analytic import (
    DEFAULT_VARIANT,
    IntersectionVariant,
    cdf_one_turn_intersection,
    cdf_one_turn_point,
    cdf_zero_turn_intersection,
)
from .errors import NoBracket, NonFinite, NonPositiveParameter
from .model import ModelParams, validate

__all__ = [
    "RisLinkParams",
    "validate_link",
    "nearfield_threshold_distance",
    "nearfield_success",
    "farfield_threshold_distance",
    "farfield_success_lower_bound",
    "reach_quantile",
    "db_to_linear",
    "REACH_POLICIES",
]


@dataclass(frozen=True)
class RisLinkParams:
    """Radio and surface parameters, all linear and strictly positive.

    g_t, g_r    transmit / receive antenna gains
    g           per-element gain of the reflecting surface
    wavelength  carrier wavelength (same length unit as distances)
    area        effective aperture area of the surface
    m, n        element counts of the surface along its two axes
    d_x, d_y    element spacings
    p_t         transmit power
    n0          noise power
    gamma       SNR threshold for success
    """

    g_t: float
    g_r: float
    g: float
    wavelength: float
    area: float
    m: float
    n: float
    d_x: float
    d_y: float
    p_t: float
    n0: float
    gamma: float


def validate_link(link: RisLinkParams) -> RisLinkParams:
    for f in fields(link):
        v = getattr(link, f.name)
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise NonFinite(f"{f.name} must be finite, got {v!r}")
        if v <= 0:
            raise NonPositiveParameter(f"{f.name} must be > 0, got {v}")
    return link


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def nearfield_threshold_distance(link: RisLinkParams) -> float:
    """Largest total street distance d1 + d2 at which the near-field link
    still clears the SNR threshold. The received power there falls off as
    1/(d1+d2)^2, so the solve is a plain square root:

        d* = sqrt(g_t*g_r*wavelength^2*area^2*p_t / (16*pi^2*gamma*n0)).
    """
    validate_link(link)
    num = link.g_t * link.g_r * link.wavelength**2 * link.area**2 * link.p_t
    return math.sqrt(num / (16.0 * math.pi**2 * link.gamma * link.n0))


def nearfield_success(link: RisLinkParams, model: ModelParams) -> float:
    """Probability the nearest one-turn street neighbor of a typical point
    is close enough for a near-field surface-assisted link."""
    return cdf_one_turn_point(validate(model), nearfield_threshold_distance(link))


def farfield_threshold_distance(link: RisLinkParams) -> float:
    """Street distance below which a far-field link is guaranteed.

    Far-field received power carries 1/(d1^2 * d2^2); success means
    d1^2*d2^2 <= X with

        X = g_t*g_r*g*m^2*n^2*d_x*d_y*wavelength^2*area^2*p_t
            / (64*pi^3*gamma*n0).

    By AM-GM, d1*d2 <= ((d1+d2)/2)^2, so any split of a total street
    distance D <= 2*X^(1/4) succeeds.
    """
    validate_link(link)
    num = (link.g_t * link.g_r * link.g * link.m**2 * link.n**2
           * link.d_x * link.d_y * link.wavelength**2 * link.area**2 * link.p_t)
    x = num / (64.0 * math.pi**3 * link.gamma * link.n0)
    return 2.0 * x**0.25


def farfield_success_lower_bound(link: RisLinkParams, model: ModelParams) -> float:
    """Lower bound on the far-field success probability: the chance the
    one-turn street distance stays below the AM-GM guaranteed radius."""
    return cdf_one_turn_point(validate(model), farfield_threshold_distance(link))


# quantile targets: CDF factory per policy tag, plus the bracket cap (the
# quadrature-backed curve is not searched beyond it)
REACH_POLICIES = ("one-turn-point", "zero-turn-intersection", "one-turn-intersection")

_QUAD_CAP = 64.0
_CLOSED_CAP = 2.0**60


def _reach_cdf(policy: str, model: ModelParams,
               variant: IntersectionVariant, tol: float):
    if policy == "one-turn-point":
        return (lambda t: cdf_one_turn_point(model, t)), _CLOSED_CAP
    if policy == "zero-turn-intersection":
        return (lambda t: cdf_zero_turn_intersection(model, t)), _CLOSED_CAP
    if policy == "one-turn-intersection":
        return (lambda t: cdf_one_turn_intersection(model, t, variant, tol)), _QUAD_CAP
    raise ValueError(f"policy must be one of {REACH_POLICIES}, got {policy!r}")


def reach_quantile(model: ModelParams, p: float, policy: str = "one-turn-point",
                   variant: IntersectionVariant = DEFAULT_VARIANT,
                   tol: float = 1e-6) -> float:
    """Smallest street distance t with F(t) >= p (e.g. the radius an
    electric vehicle must be able to cover so it finds a charging point
    with probability p). Bracketed root solve to 1e-9 relative; NoBracket
    when p is not reached below the policy's search cap."""
    validate(model)
    if not (isinstance(p, (int, float)) and 0.0 <= p < 1.0):
        raise ValueError(f"p must lie in [0, 1), got {p!r}")
    if p == 0.0:
        return 0.0
    cdf, cap = _reach_cdf(policy, model, variant, tol)

    hi = 1.0
    while cdf(hi) < p:
        hi *= 2.0
        if hi > cap:
            raise NoBracket(
                f"F(t) stays below p={p} up to the search cap {cap} for policy {policy}")
    return float(brentq(lambda t: cdf(t) - p, 0.0, hi, xtol=1e-12, rtol=1e-9))
