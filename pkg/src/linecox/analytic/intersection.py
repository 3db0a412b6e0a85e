"""One-turn street distance from a typical intersection.

Conditioned on the crossing angle omega of the two origin streets, the
distribution has the form

    F(t) = 1 - exp(-4*mu*t - 2*lam*(2*t - Tx - Ty))

where Tx and Ty are mean effective "shadowing times": angle and position
averages of exp(-mu * Z(x, omega1, omega, t)), Z being the total arc length
within reach on a crossing line entering at distance x under angle omega1.
Z is piecewise: the plane splits into an inner window of angles whose
crossing line cuts both origin streets inside the reach (there
Z = 2*(t - x)), an outer regime cutting both sides far out, and a
transition regime; the breakpoints are inverse-trig thresholds in
(x, omega1, omega, t).

Three details of that recipe admit two readings each (a sign joining the
two angle sines in the outer regime, whether out-of-window angles on the
second street still contribute unit survival, and which length enters the
first window arctan). All eight combinations are implemented behind
``IntersectionVariant``; the default was selected once by the committed
calibration experiment (demos/calibrate_variant.py, table in
docs/variant_calibration.json) as the variant matching exact Monte Carlo
best, and it is also the only one passing the acceptance gate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import (
    DegenerateAngles,
    DomainError,
    NegativeT,
    NonFinite,
    QuadratureFailure,
)
from ..model import ModelParams, validate
from ..quadrature import gauss_legendre

__all__ = [
    "IntersectionVariant",
    "DEFAULT_VARIANT",
    "angle_thresholds",
    "z_length",
    "cdf_one_turn_intersection",
    "one_turn_intersection_terms",
]

log = logging.getLogger(__name__)

_Z_SIGNS = ("minus", "plus")
_Y_WEIGHTINGS = ("window-only", "full-angle")
_EDGE_ARGS = ("x", "t")


@dataclass(frozen=True)
class IntersectionVariant:
    """One concrete reading of the three ambiguous recipe details.

    z_sign        sign joining sin(omega) and sin(omega1) in the outer
                  regime length: "minus" or "plus".
    y_weighting   second-street average: "window-only" integrates the
                  window alone, "full-angle" adds unit survival for angles
                  outside the window (a per-angle probability reading).
    edge_arg      numerator offset of the first window arctan: the entry
                  distance "x" or the reach "t".
    """

    z_sign: str = "plus"
    y_weighting: str = "full-angle"
    edge_arg: str = "x"

    def __post_init__(self):
        if self.z_sign not in _Z_SIGNS:
            raise ValueError(f"z_sign must be one of {_Z_SIGNS}, got {self.z_sign!r}")
        if self.y_weighting not in _Y_WEIGHTINGS:
            raise ValueError(
                f"y_weighting must be one of {_Y_WEIGHTINGS}, got {self.y_weighting!r}")
        if self.edge_arg not in _EDGE_ARGS:
            raise ValueError(f"edge_arg must be one of {_EDGE_ARGS}, got {self.edge_arg!r}")

    def label(self) -> str:
        return f"{self.z_sign}/{self.y_weighting}/{self.edge_arg}"


# Winner of the committed calibration run against exact Monte Carlo
# (demos/calibrate_variant.py; per-variant KS table in
# docs/variant_calibration.json).
DEFAULT_VARIANT = IntersectionVariant("plus", "full-angle", "x")

_PI = math.pi
_GUARD = 1e-9  # angle gap below which exp(-mu*Z) is extended by 0
_ACOS_TOL = 1e-9


def _safe_arccos(val, tol=_ACOS_TOL):
    """arccos with a rounding guard: arguments beyond [-1, 1] by more than
    ``tol`` raise DomainError, closer ones clip."""
    arr = np.asarray(val, dtype=float)
    if np.any(arr > 1.0 + tol) or np.any(arr < -1.0 - tol):
        worst = arr.flat[int(np.argmax(np.abs(arr)))]
        raise DomainError(f"arccos argument {worst!r} outside [-1, 1] beyond guard {tol}")
    return np.arccos(np.clip(arr, -1.0, 1.0))


def _thresholds_arrays(x, omega, t, edge_arg):
    """Vectorized thresholds; x may be an array, omega and t scalars.

    Returns (outer_lo, win_lo, win_hi, outer_hi): the outer regime covers
    [0, outer_lo] and [outer_hi, pi], the window [win_lo, win_hi]. The two
    window arctans are sorted because their printed order flips once
    t*cos(omega) < x.
    """
    x = np.asarray(x, dtype=float)
    sw, cw = math.sin(omega), math.cos(omega)
    first_num = t * cw - (t if edge_arg == "t" else x)
    win_a = np.arctan2(t * sw, first_num) % _PI
    win_b = np.arctan2(t * sw, t * cw + x) % _PI
    win_lo = np.minimum(win_a, win_b)
    win_hi = np.maximum(win_a, win_b)

    with np.errstate(divide="ignore", invalid="ignore"):
        rho = (2.0 * t - x) / x
        r2 = rho * rho + 1.0
        arg_lo = (r2 * cw + 2.0 * rho) / (2.0 * rho * cw + r2)
        arg_hi = (r2 * cw - 2.0 * rho) / (r2 - 2.0 * rho * cw)
    # x -> 0 collapses both outer thresholds onto omega (rho -> inf)
    arg_lo = np.where(x == 0.0, cw, arg_lo)
    arg_hi = np.where(x == 0.0, cw, arg_hi)
    outer_lo = _safe_arccos(arg_lo)
    outer_hi = _safe_arccos(arg_hi)
    return outer_lo, win_lo, win_hi, outer_hi


def angle_thresholds(x: float, omega: float, t: float,
                     variant: IntersectionVariant = DEFAULT_VARIANT):
    """The four regime breakpoints in (0, pi) for entry distance x, crossing
    angle omega and reach t; see the module docstring. Returns
    (outer_lo, win_lo, win_hi, outer_hi). The expected nesting
    outer_lo <= win_lo <= win_hi <= outer_hi is checked and logged (not
    raised) when violated beyond 1e-9."""
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and > 0, got {t}")
    if not (0.0 <= x <= t):
        raise DomainError(f"x must lie in [0, t], got x={x}, t={t}")
    if not (0.0 < omega < _PI):
        raise DomainError(f"omega must lie strictly inside (0, pi), got {omega}")
    outer_lo, win_lo, win_hi, outer_hi = (
        float(v) for v in _thresholds_arrays(x, omega, t, variant.edge_arg))
    if outer_lo > win_lo + 1e-9 or win_hi > outer_hi + 1e-9:
        log.warning("threshold nesting violated at x=%g omega=%g t=%g: "
                    "%.12g, %.12g, %.12g, %.12g",
                    x, omega, t, outer_lo, win_lo, win_hi, outer_hi)
    return outer_lo, win_lo, win_hi, outer_hi


def _z_outer(x, omega1, omega, t, z_sign):
    s = np.sin(omega1 - omega)
    sw = math.sin(omega) if np.isscalar(omega) else np.sin(omega)
    if z_sign == "minus":
        c = (sw - np.sin(omega1)) / s
    else:
        c = (sw + np.sin(omega1)) / s
    return np.clip(2.0 * t - x * (c + 1.0), 0.0, 4.0 * t)


def _z_transition(x, omega1, omega, t):
    s = np.sin(omega1 - omega)
    return np.clip(4.0 * t - 2.0 * x * (1.0 + 2.0 * np.sin(omega1) / s),
                   0.0, 4.0 * t)


def z_length(x: float, omega1: float, omega: float, t: float,
             variant: IntersectionVariant = DEFAULT_VARIANT) -> float:
    """Arc length within reach on a crossing line entering the first street
    at distance x under angle omega1, the two streets crossing at angle
    omega; clamped to [0, 4t]. Raises DegenerateAngles when omega1 and
    omega are parallel to within 1e-12."""
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and > 0, got {t}")
    if not (0.0 <= x <= t):
        raise DomainError(f"x must lie in [0, t], got x={x}, t={t}")
    if not (0.0 < omega < _PI) or not (0.0 <= omega1 <= _PI):
        raise DomainError("angles must lie in (0, pi) / [0, pi]")
    if abs(math.sin(omega1 - omega)) < 1e-12:
        raise DegenerateAngles(
            f"omega1={omega1} and omega={omega} are parallel within 1e-12")
    outer_lo, win_lo, win_hi, outer_hi = angle_thresholds(x, omega, t, variant)
    if omega1 <= outer_lo or omega1 >= outer_hi:
        z = _z_outer(x, omega1, omega, t, variant.z_sign)
    elif win_lo <= omega1 <= win_hi:
        z = 2.0 * (t - x)
        z = min(max(z, 0.0), 4.0 * t)
    else:
        z = _z_transition(x, omega1, omega, t)
    return float(z)


def _survival_terms(mu, t, variant, nw, nx, n1):
    """Fixed tensor rule for (Tx, Ty): outer Gauss-Legendre in omega, then
    x, with the omega1 axis integrated per regime segment so no panel
    straddles a breakpoint."""
    xg, xw = gauss_legendre(nx)
    og, ow = gauss_legendre(nw)
    sg, swt = gauss_legendre(n1)

    x = (t * xg)[:, None]  # (nx, 1)
    Tx = 0.0
    Ty = 0.0
    for j in range(nw):
        omega = _PI * og[j]
        outer_lo, win_lo, win_hi, outer_hi = _thresholds_arrays(
            x, omega, t, variant.edge_arg)

        def seg(a, b, zfun):
            width = np.maximum(b - a, 0.0)
            om1 = a + width * sg[None, :]  # (nx, n1)
            with np.errstate(divide="ignore", invalid="ignore"):
                z = zfun(x, om1, omega, t)
            val = np.exp(-mu * z)
            val = np.where(np.abs(np.sin(om1 - omega)) < _GUARD, 0.0, val)
            return width * (val * swt[None, :]).sum(axis=1, keepdims=True)

        z_out = lambda x_, o1, om, t_: _z_outer(x_, o1, om, t_, variant.z_sign)
        i_outer = seg(np.zeros_like(outer_lo), outer_lo, z_out) \
            + seg(outer_hi, np.full_like(outer_hi, _PI), z_out)
        window = np.maximum(win_hi - win_lo, 0.0)
        i_window = window * np.exp(-2.0 * mu * (t - x))
        i_trans = seg(outer_lo, win_lo, _z_transition) \
            + seg(win_hi, outer_hi, _z_transition)

        inner_x = i_outer + i_window + i_trans  # (nx, 1)
        wx = xw[:, None]
        Tx += float((inner_x * wx).sum()) * t * _PI * ow[j]

        if variant.y_weighting == "window-only":
            inner_y = i_window
        else:
            inner_y = i_window + (_PI - window)
        Ty += float((inner_y * wx).sum()) * t * _PI * ow[j]

    return Tx / _PI**2, Ty / _PI**2


_LADDER = ((48, 48, 32), (96, 96, 64), (192, 192, 128))


def one_turn_intersection_terms(mu: float, t: float,
                                variant: IntersectionVariant = DEFAULT_VARIANT,
                                tol: float = 1e-6):
    """(Tx, Ty) with the resolution ladder refined until both move by at
    most tol; raises QuadratureFailure otherwise. Exposed because the terms
    are useful on their own (they only depend on mu and t) and because the
    cross-check tests compare them against brute-force Riemann sums."""
    if not (t > 0):
        raise ValueError(f"t must be > 0, got {t}")
    prev = _survival_terms(mu, t, variant, *_LADDER[0])
    for level in _LADDER[1:]:
        cur = _survival_terms(mu, t, variant, *level)
        err = max(abs(cur[0] - prev[0]), abs(cur[1] - prev[1]))
        if err <= tol:
            return cur
        prev = cur
    raise QuadratureFailure(
        f"(Tx, Ty) did not settle to {tol} at mu={mu}, t={t}, "
        f"variant={variant.label()}", value=prev, error_estimate=err)


def cdf_one_turn_intersection(params: ModelParams, t,
                              variant: IntersectionVariant = DEFAULT_VARIANT,
                              tol: float = 1e-6, with_err: bool = False):
    """One-turn street distance CDF from a typical intersection.

    Scalar or array t. The refinement ladder doubles the tensor rule until
    the probability moves by at most tol; QuadratureFailure (with the last
    value attached) if three levels cannot agree. lam = 0 short-circuits to
    the exact zero-turn form 1 - exp(-4*mu*t). ``with_err`` additionally
    returns the last ladder increment as the error estimate.
    """
    validate(params)
    arr = np.asarray(t, dtype=float)
    scalar = np.isscalar(t) or getattr(t, "ndim", 0) == 0
    if not np.all(np.isfinite(arr)):
        raise NonFinite("t must be finite")
    if np.any(arr < 0):
        raise NegativeT("t must be >= 0")
    lam, mu = params.lam, params.mu

    if lam == 0.0:
        out = -np.expm1(-4.0 * mu * arr)
        out = float(out) if scalar else out
        if with_err:
            return (out, 0.0) if scalar else (out, np.zeros_like(arr))
        return out

    results = []
    errors = []
    for tv in arr.reshape(-1):
        if tv == 0.0:
            results.append(0.0)
            errors.append(0.0)
            continue
        ladder = []
        for level in _LADDER:
            tx, ty = _survival_terms(mu, tv, variant, *level)
            ladder.append(-math.expm1(
                -4.0 * mu * tv - 2.0 * lam * (2.0 * tv - tx - ty)))
            if len(ladder) >= 2 and abs(ladder[-1] - ladder[-2]) <= tol:
                break
        else:
            raise QuadratureFailure(
                f"one-turn intersection CDF did not settle to {tol} at t={tv}",
                value=ladder[-1], error_estimate=abs(ladder[-1] - ladder[-2]))
        results.append(ladder[-1])
        errors.append(abs(ladder[-1] - ladder[-2]))
    if scalar:
        return (float(results[0]), float(errors[0])) if with_err else float(results[0])
    values = np.array(results).reshape(arr.shape)
    if with_err:
        return values, np.array(errors).reshape(arr.shape)
    return values
