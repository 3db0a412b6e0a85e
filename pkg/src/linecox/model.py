"""Core types and unit conventions shared by every module.

All lengths are dimensionless (pick your unit, the model is scale free, see
`rescale`). The two intensities follow one operational convention used
consistently by the samplers and the closed forms:

* ``lam`` -- line intensity, pinned so that the crossings along any fixed
  line form a 1-D Poisson process of rate ``lam``; within distance t of a
  point on that line (both directions) the crossing count is
  Poisson(2*lam*t).
* ``mu`` -- intensity of the 1-D Poisson point process each line carries,
  points per unit arc length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    NegativeIntensity,
    NonFinite,
    NonPositiveScale,
    ZeroMu,
)

__all__ = [
    "ModelParams",
    "Line",
    "PointOnLine",
    "PalmKind",
    "AngleLaw",
    "PalmScenario",
    "PolicyKind",
    "TurnPolicy",
    "DistributionCurve",
    "validate",
    "rescale",
]


@dataclass(frozen=True)
class ModelParams:
    """Line intensity ``lam`` and on-line point intensity ``mu``.

    The attribute is spelled ``lam`` because ``lambda`` is a Python keyword;
    file formats and the CLI accept and emit the full word.
    """

    lam: float
    mu: float


def validate(params: ModelParams) -> ModelParams:
    """Check a parameter set, naming the offending field in any error."""
    for name, value in (("lambda", params.lam), ("mu", params.mu)):
        if not math.isfinite(value):
            raise NonFinite(f"{name} must be finite, got {value!r}")
    if params.lam < 0:
        raise NegativeIntensity(f"lambda must be >= 0, got {params.lam}")
    if params.mu < 0:
        raise NegativeIntensity(f"mu must be > 0, got {params.mu}")
    if params.mu == 0:
        raise ZeroMu("mu must be > 0: the distance distributions divide by mu")
    return params


@dataclass(frozen=True)
class Line:
    """An undirected line, Hesse style: unit direction at ``angle`` in
    [0, pi), displaced ``signed_offset`` along the left normal
    (-sin angle, cos angle). Arc coordinates on the line are measured from
    the foot of that normal, positive along (cos angle, sin angle); for a
    line through the origin the arc origin is the origin itself."""

    id: int
    angle: float
    signed_offset: float
    through_origin: bool = False


@dataclass(frozen=True)
class PointOnLine:
    line_id: int
    arc_coord: float


class PalmKind(Enum):
    TYPICAL_POINT = "typical-point"
    TYPICAL_INTERSECTION = "typical-intersection"


class AngleLaw(Enum):
    """Law of the angle between the two origin lines when conditioning on a
    typical intersection. UNIFORM draws it U(0, pi); SIN_WEIGHTED uses the
    size-biased density sin(theta)/2 that weights near-perpendicular
    crossings up."""

    UNIFORM = "uniform"
    SIN_WEIGHTED = "sin"


@dataclass(frozen=True)
class PalmScenario:
    """What the distance is measured from.

    TYPICAL_POINT: origin sits on one line (the x-axis) carrying the usual
    point process; the origin itself is not a point of the process.
    TYPICAL_INTERSECTION: two lines through the origin, relative angle drawn
    from ``angle_law`` (ignored for TYPICAL_POINT).
    """

    kind: PalmKind
    angle_law: AngleLaw = AngleLaw.UNIFORM


def typical_point() -> PalmScenario:
    return PalmScenario(PalmKind.TYPICAL_POINT)


def typical_intersection(angle_law: AngleLaw = AngleLaw.UNIFORM) -> PalmScenario:
    return PalmScenario(PalmKind.TYPICAL_INTERSECTION, angle_law)


class PolicyKind(Enum):
    ZERO_TURN = "zero-turn"
    ONE_TURN = "one-turn"
    TWO_TURN_DIRECTED = "two-turn-directed"
    K_TURN = "k-turn"


@dataclass(frozen=True)
class TurnPolicy:
    """Which family of street paths the oracle searches.

    ``k`` is the turn budget (fixed to 0/1/2 for the named kinds).
    ``include_lower_turn_paths`` decides whether paths spending fewer turns
    than the budget count; with False the family is "exactly k turns".
    ``first_hop_positive_x`` restricts the first leg to the positive arc
    direction of line 0 (forced on for TWO_TURN_DIRECTED, optional for
    K_TURN so the two policies can be compared like for like).
    """

    kind: PolicyKind
    k: int = 0
    include_lower_turn_paths: bool = True
    first_hop_positive_x: bool = False

    @staticmethod
    def zero_turn() -> "TurnPolicy":
        return TurnPolicy(PolicyKind.ZERO_TURN, k=0)

    @staticmethod
    def one_turn(include_lower_turn_paths: bool = True) -> "TurnPolicy":
        return TurnPolicy(PolicyKind.ONE_TURN, k=1,
                          include_lower_turn_paths=include_lower_turn_paths)

    @staticmethod
    def two_turn_directed(include_lower_turn_paths: bool = True) -> "TurnPolicy":
        return TurnPolicy(PolicyKind.TWO_TURN_DIRECTED, k=2,
                          include_lower_turn_paths=include_lower_turn_paths,
                          first_hop_positive_x=True)

    @staticmethod
    def k_turn(k: int, include_lower_turn_paths: bool = True,
               first_hop_positive_x: bool = False) -> "TurnPolicy":
        return TurnPolicy(PolicyKind.K_TURN, k=k,
                          include_lower_turn_paths=include_lower_turn_paths,
                          first_hop_positive_x=first_hop_positive_x)


@dataclass(frozen=True)
class DistributionCurve:
    """A CDF sampled on a grid.

    ``ci_halfwidth`` is zero for analytic curves and a simultaneous
    (DKW style) half width for empirical ones. ``meta`` is a JSON friendly
    dict describing how the curve was produced.
    """

    grid: np.ndarray
    values: np.ndarray
    ci_halfwidth: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        h = np.asarray(self.ci_halfwidth, dtype=float)
        if h.ndim == 0:
            h = np.full_like(g, float(h))
        if not (g.shape == v.shape == h.shape) or g.ndim != 1 or g.size == 0:
            raise ValueError("grid, values and ci_halfwidth must be equal length 1-D arrays")
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValueError("grid must be strictly increasing")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(v)) and np.all(np.isfinite(h))):
            raise ValueError("curve arrays must be finite")
        for name, arr in (("grid", g), ("values", v), ("ci_halfwidth", h)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.grid.size)


def rescale(curve: DistributionCurve, c: float) -> DistributionCurve:
    """Rescale lengths by c: the curve of D under (lam, mu) becomes the curve
    of c*D, which is exactly the curve of D under (lam/c, mu/c). Values and
    half widths are untouched; grid and metadata params are mapped."""
    if not (isinstance(c, (int, float)) and math.isfinite(c)) or c <= 0:
        raise NonPositiveScale(f"scale must be finite and > 0, got {c!r}")
    c = float(c)
    meta = dict(curve.meta)
    params = meta.get("params")
    if isinstance(params, dict):
        mapped = dict(params)
        if "lambda" in mapped:
            mapped["lambda"] = mapped["lambda"] / c
        if "mu" in mapped:
            mapped["mu"] = mapped["mu"] / c
        meta["params"] = mapped
    meta["rescaled_by"] = meta.get("rescaled_by", 1.0) * c
    return DistributionCurve(curve.grid * c, curve.values, curve.ci_halfwidth, meta)
