"""Exact sampler for the line process seen from a typical point or a
typical intersection, clipped to a disk.

Conventions (shared with the oracle):

* A line with ``angle`` a in [0, pi) and ``signed_offset`` p is the set
  {p*n + s*d : s in R} with d = (cos a, sin a), n = (-sin a, cos a); s is
  the arc coordinate.
* Background lines hit the disk of radius R with angle ~ U[0, pi), offset
  ~ U[-R, R], count ~ Poisson(lam * pi * R). That normalization makes the
  crossings along any fixed line a 1-D Poisson process of rate lam: a
  chord of half length t around a point on a line is crossed by
  Poisson(2*lam*t) others (P(cross) = (t/R) * E[sin angle] = 2t/(pi R),
  times the mean count lam*pi*R).
* Conditioning is by explicit construction: TYPICAL_POINT adds the x-axis
  through the origin, TYPICAL_INTERSECTION adds the x-axis plus a second
  origin line at a random angle. Every line, added or background, carries
  an independent Poisson(mu per unit length) point process on its chord;
  the origin itself is not a point of the process.

Randomness is a counter-based Philox stream keyed (master seed, stream), so
trial i of a run is reproducible in isolation and independent of how trials
are batched across workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NonPositiveRadius, TBeyondClip, UnknownLine
from .model import (
    AngleLaw,
    Line,
    ModelParams,
    PalmKind,
    PalmScenario,
    PointOnLine,
    validate,
)

__all__ = [
    "Realization",
    "sample_palm",
    "crossings_within",
    "realization_to_json",
    "realization_from_json",
    "rotate",
]

_PI = math.pi
_MIN_ANGLE_GAP = 1e-12


def _make_rng(master: int, stream: int) -> np.random.Generator:
    key = np.array([master % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _norm_seed(seed) -> tuple[int, int]:
    if isinstance(seed, (tuple, list)) and len(seed) == 2:
        return int(seed[0]), int(seed[1])
    return int(seed), 0


@dataclass(frozen=True)
class Realization:
    """One sampled street system plus its points.

    ``lines[k].id == k`` for sampled realizations; hand-built ones may use
    arbitrary unique ids. ``arcs_by_line[k]`` holds the sorted arc
    coordinates of the points on ``lines[k]``.
    """

    lines: tuple[Line, ...]
    arcs_by_line: tuple[np.ndarray, ...]
    scenario: PalmScenario
    clip_radius: float
    seed: tuple[int, int] = (0, 0)

    def __post_init__(self):
        frozen = []
        for arr in self.arcs_by_line:
            a = np.sort(np.asarray(arr, dtype=float))
            a.setflags(write=False)
            frozen.append(a)
        object.__setattr__(self, "arcs_by_line", tuple(frozen))
        if len(self.arcs_by_line) != len(self.lines):
            raise ValueError("one arc array per line required")
        ids = [ln.id for ln in self.lines]
        if len(set(ids)) != len(ids):
            raise ValueError("line ids must be unique")

    @cached_property
    def _id_to_idx(self) -> dict:
        return {ln.id: k for k, ln in enumerate(self.lines)}

    @cached_property
    def _angles(self) -> np.ndarray:
        a = np.array([ln.angle for ln in self.lines], dtype=float)
        a.setflags(write=False)
        return a

    @cached_property
    def _offsets(self) -> np.ndarray:
        p = np.array([ln.signed_offset for ln in self.lines], dtype=float)
        p.setflags(write=False)
        return p

    @property
    def origin_ids(self) -> tuple[int, ...]:
        return tuple(ln.id for ln in self.lines if ln.through_origin)

    def index_of(self, line_id: int) -> int:
        try:
            return self._id_to_idx[line_id]
        except KeyError:
            raise UnknownLine(f"no line with id {line_id}") from None

    @cached_property
    def points(self) -> tuple[PointOnLine, ...]:
        out = []
        for ln, arcs in zip(self.lines, self.arcs_by_line):
            out.extend(PointOnLine(ln.id, float(s)) for s in arcs)
        return tuple(out)

    @cached_property
    def intersections(self) -> tuple:
        """All pairwise crossings inside the clip disk, as tuples
        (id_i, id_j, arc_on_i, arc_on_j, x, y) with i earlier than j in
        ``lines`` order. Near-parallel pairs (|sin of angle gap| < 1e-12)
        are skipped; the sampler redraws such angles so sampled
        realizations never lose a crossing here."""
        n = len(self.lines)
        if n < 2:
            return ()
        ii, jj = np.triu_indices(n, k=1)
        s_i, s_j = _pair_arcs(self._angles, self._offsets, ii, jj)
        keep = np.isfinite(s_i)
        out = []
        ca, sa = np.cos(self._angles), np.sin(self._angles)
        for a, b, u, v in zip(ii[keep], jj[keep], s_i[keep], s_j[keep]):
            x = self._offsets[a] * (-sa[a]) + u * ca[a]
            y = self._offsets[a] * ca[a] + u * sa[a]
            if math.hypot(x, y) <= self.clip_radius:
                out.append((self.lines[a].id, self.lines[b].id,
                            float(u), float(v), float(x), float(y)))
        return tuple(out)


def _pair_arcs(angles, offsets, ii, jj):
    """Arc coordinates of the crossing of line pairs (ii[k], jj[k]): returns
    (arc on line ii[k], arc on line jj[k]). Near-parallel pairs give nan.

    This is the single crossing formula used everywhere (sampler queries and
    oracle graph alike) so arcs agree bit for bit across code paths.
    """
    sa, ca = np.sin(angles), np.cos(angles)
    det = sa[jj] * ca[ii] - ca[jj] * sa[ii]
    bx = -offsets[jj] * sa[jj] + offsets[ii] * sa[ii]
    by = offsets[jj] * ca[jj] - offsets[ii] * ca[ii]
    with np.errstate(divide="ignore", invalid="ignore"):
        arc_i = np.where(np.abs(det) < _MIN_ANGLE_GAP, np.nan,
                         (bx * sa[jj] - by * ca[jj]) / det)
        arc_j = np.where(np.abs(det) < _MIN_ANGLE_GAP, np.nan,
                         (bx * sa[ii] - by * ca[ii]) / det)
    return arc_i, arc_j


def _draw_origin_angles(rng, scenario: PalmScenario):
    if scenario.kind is PalmKind.TYPICAL_POINT:
        return [0.0]
    for _ in range(100):
        if scenario.angle_law is AngleLaw.UNIFORM:
            theta = rng.uniform(0.0, _PI)
        else:
            theta = math.acos(1.0 - 2.0 * rng.uniform())
        if _MIN_ANGLE_GAP < theta < _PI - _MIN_ANGLE_GAP:
            return [0.0, float(theta)]
    raise RuntimeError("could not draw a non-degenerate intersection angle")


def _respace_angles(rng, origin_angles, angles):
    """Redraw background angles until all lines are pairwise non-parallel
    (angle gap, mod pi, at least 1e-12). Collisions are measure zero; the
    loop exists so downstream geometry can divide by sin of gaps safely."""
    n_origin = len(origin_angles)
    for _ in range(100):
        allang = np.concatenate([origin_angles, angles])
        order = np.argsort(allang, kind="stable")
        s = allang[order]
        gaps = np.diff(s)
        bad = set()
        for k in np.flatnonzero(gaps < _MIN_ANGLE_GAP):
            bad.add(order[k])
            bad.add(order[k + 1])
        if s.size > 1 and (s[0] + _PI) - s[-1] < _MIN_ANGLE_GAP:
            bad.add(order[0])
            bad.add(order[-1])
        redraw = sorted(k - n_origin for k in bad if k >= n_origin)
        if not redraw:
            return angles
        angles[redraw] = rng.uniform(0.0, _PI, size=len(redraw))
    raise RuntimeError("could not separate line angles")


def sample_palm(params: ModelParams, scenario: PalmScenario,
                clip_radius: float, seed) -> Realization:
    """Draw one realization conditioned per ``scenario``.

    ``seed`` is an int or an (int master, int stream) pair; equal seeds give
    bit-identical realizations.
    """
    validate(params)
    if not isinstance(scenario, PalmScenario):
        raise TypeError(f"scenario must be a PalmScenario, got {type(scenario).__name__}")
    if not (isinstance(clip_radius, (int, float)) and math.isfinite(clip_radius)
            and clip_radius > 0):
        raise NonPositiveRadius(f"clip_radius must be finite and > 0, got {clip_radius!r}")

    R = float(clip_radius)
    master, stream = _norm_seed(seed)
    rng = _make_rng(master, stream)

    origin_angles = _draw_origin_angles(rng, scenario)
    n_origin = len(origin_angles)

    n_bg = int(rng.poisson(params.lam * _PI * R))
    bg_angles = rng.uniform(0.0, _PI, size=n_bg)
    bg_offsets = rng.uniform(-R, R, size=n_bg)
    bg_angles = _respace_angles(rng, np.asarray(origin_angles), bg_angles)

    angles = np.concatenate([origin_angles, bg_angles])
    offsets = np.concatenate([np.zeros(n_origin), bg_offsets])

    # chord half lengths inside the disk; origin lines pass through center
    half = np.empty(n_origin + n_bg)
    half[:n_origin] = R
    half[n_origin:] = np.sqrt(np.maximum(R * R - bg_offsets * bg_offsets, 0.0))
    counts = rng.poisson(2.0 * params.mu * half)
    total = int(counts.sum())
    u = rng.uniform(-1.0, 1.0, size=total)
    arcs_flat = u * np.repeat(half, counts)

    lines = []
    arcs_by_line = []
    start = 0
    for k in range(n_origin + n_bg):
        lines.append(Line(id=k, angle=float(angles[k]),
                          signed_offset=float(offsets[k]),
                          through_origin=k < n_origin))
        arcs_by_line.append(arcs_flat[start:start + counts[k]])
        start += counts[k]

    return Realization(tuple(lines), tuple(arcs_by_line), scenario, R,
                       (master, stream))


def crossings_within(real: Realization, line_id: int, t: float):
    """Crossings of other lines along ``line_id`` within arc distance t of
    the line's arc origin, as (other_line_id, arc_coord, incidence_angle)
    sorted by |arc_coord| (ties by other id). For an origin line the arc
    origin is the origin, so these are the candidate first turns."""
    i = real.index_of(line_id)
    t = float(t)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t > real.clip_radius:
        raise TBeyondClip(f"t={t} exceeds clip_radius={real.clip_radius}; "
                          "geometry beyond the clip disk was never sampled")
    n = len(real.lines)
    jj = np.array([k for k in range(n) if k != i], dtype=int)
    if jj.size == 0:
        return []
    ii = np.full_like(jj, i)
    s_i, _ = _pair_arcs(real._angles, real._offsets, ii, jj)
    out = []
    for k, s in zip(jj, s_i):
        if not math.isfinite(s) or abs(s) > t:
            continue
        delta = (real.lines[k].angle - real.lines[i].angle) % _PI
        out.append((real.lines[k].id, float(s), float(delta)))
    out.sort(key=lambda rec: (abs(rec[1]), rec[0]))
    return out


# ---- serialization ----------------------------------------------------------

def realization_to_json(real: Realization) -> dict:
    return {
        "clip_radius": real.clip_radius,
        "seed": list(real.seed),
        "scenario": {"kind": real.scenario.kind.value,
                     "angle_law": real.scenario.angle_law.value},
        "lines": [
            {"id": ln.id, "angle": ln.angle, "offset": ln.signed_offset,
             "through_origin": ln.through_origin}
            for ln in real.lines
        ],
        "points": [
            {"line": ln.id, "arc": float(s)}
            for ln, arcs in zip(real.lines, real.arcs_by_line) for s in arcs
        ],
    }


def realization_from_json(obj) -> Realization:
    if isinstance(obj, str):
        obj = json.loads(obj)
    scen = obj.get("scenario", {})
    scenario = PalmScenario(PalmKind(scen.get("kind", "typical-point")),
                            AngleLaw(scen.get("angle_law", "uniform")))
    lines = tuple(
        Line(id=int(rec["id"]), angle=float(rec["angle"]),
             signed_offset=float(rec["offset"]),
             through_origin=bool(rec.get("through_origin",
                                         float(rec["offset"]) == 0.0)))
        for rec in obj["lines"]
    )
    buckets = {ln.id: [] for ln in lines}
    for rec in obj.get("points", []):
        lid = int(rec["line"])
        if lid not in buckets:
            raise UnknownLine(f"point references unknown line id {lid}")
        buckets[lid].append(float(rec["arc"]))
    arcs = tuple(np.array(buckets[ln.id], dtype=float) for ln in lines)
    seed = obj.get("seed", [0, 0])
    return Realization(lines, arcs, scenario, float(obj["clip_radius"]),
                       (int(seed[0]), int(seed[1])))


def rotate(real: Realization, phi: float) -> Realization:
    """The realization rigidly rotated by phi about the origin (a testing
    aid: street-path lengths are rotation invariant). Angles are folded back
    to [0, pi); when folding flips the line's direction, the offset and the
    arc coordinates change sign together."""
    new_lines = []
    new_arcs = []
    for ln, arcs in zip(real.lines, real.arcs_by_line):
        raw = ln.angle + phi
        folded = raw % _PI
        flips = math.floor(raw / _PI) % 2
        if folded >= _PI:  # float fold-over guard
            folded -= _PI
            flips ^= 1
        sign = -1.0 if flips else 1.0
        new_lines.append(Line(ln.id, folded, sign * ln.signed_offset,
                              ln.through_origin))
        new_arcs.append(sign * arcs)
    return Realization(tuple(new_lines), tuple(new_arcs), real.scenario,
                       real.clip_radius, real.seed)
