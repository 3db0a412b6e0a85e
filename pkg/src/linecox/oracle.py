"""Turn-restricted shortest street-path oracle.

Distances are measured along the lines; a path starts at the origin, walks
along the current line, and may switch ("turn") to the other line at any
crossing, at most ``k`` times per the policy. The oracle returns the exact
shortest admissible distance to any point of the process.

Two implementations exist on purpose: closed-form enumerators for the small
named budgets (zero, one, two-turn-directed) and a label-setting search on
the crossing graph for general K_TURN. Both take every crossing arc from
the same pairwise routine and add hop lengths in the same left-to-right
order, so the two agree bit for bit; the tests rely on that.

The ``first_hop_positive_x`` restriction (forced for TWO_TURN_DIRECTED)
makes the first leg run along the positive arc direction of the first
origin line: zero-turn targets need arc >= 0 and first turns need a
strictly positive crossing arc.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import PolicyBudgetNegative, TBeyondClip
from .model import (
    ModelParams,
    PalmScenario,
    PointOnLine,
    PolicyKind,
    TurnPolicy,
)
from .sampler import Realization, _pair_arcs, sample_palm

__all__ = ["PathResult", "shortest_path", "sample_path", "sample_D",
           "route_positions", "route_length"]


@dataclass(frozen=True)
class PathResult:
    """Outcome of one shortest-path query.

    ``route`` lists (line_id, arc) vertices from the origin to the target;
    at a turn the same Euclidean point appears once per line, so segments
    walked are exactly the consecutive same-line vertex pairs. When no
    admissible target lies within ``t_max`` the result is censored:
    ``length`` is inf and the remaining fields are placeholders.
    """

    length: float
    turns_used: int
    target: PointOnLine | None
    route: tuple
    censored: bool
    t_max: float


def _censored(t_max: float) -> PathResult:
    return PathResult(math.inf, -1, None, (), True, t_max)


def _nearest(arcs: np.ndarray, ref: float):
    """Smallest |arc - ref| over a sorted arc array, ties resolved to the
    smaller arc (argmin picks the first, i.e. leftmost, occurrence)."""
    d = np.abs(arcs - ref)
    i = int(np.argmin(d))
    return float(d[i]), float(arcs[i])


class _Best:
    """Incumbent candidate ordered by (length, line id, arc)."""

    __slots__ = ("key", "route", "turns")

    def __init__(self):
        self.key = None
        self.route = None
        self.turns = -1

    @property
    def length(self) -> float:
        return math.inf if self.key is None else self.key[0]

    def offer(self, length, line_id, arc, turns, route_builder):
        key = (length, line_id, arc)
        if self.key is None or key < self.key:
            self.key = key
            self.turns = turns
            self.route = route_builder()


def _scan_targets(best, arcs, ref, base, line_id, turns, t_max, prefix,
                  nonneg_only=False):
    """Offer the best point target on one line: length = base + min dist.

    ``prefix`` is the route up to this line, either a vertex tuple or a
    zero-argument callable producing one (kept lazy so losing candidates
    never materialize their routes)."""
    if nonneg_only:
        arcs = arcs[np.searchsorted(arcs, 0.0, side="left"):]
    if arcs.size == 0:
        return
    d, arc = _nearest(arcs, ref)
    length = base + d
    if length <= t_max:
        best.offer(length, line_id, arc, turns,
                   lambda: (prefix() if callable(prefix) else prefix)
                   + ((line_id, arc),))


def _origin_indices(real: Realization, directed: bool):
    idx = [k for k, ln in enumerate(real.lines) if ln.through_origin]
    if not idx:
        raise ValueError("realization has no origin line to start from")
    return idx[:1] if directed else idx


def _origin_crossings(real: Realization, oi: int, directed: bool):
    """Crossings of origin line ``oi`` with every non-origin line, as
    (sorted |arc|) arrays: base length, arc on origin, arc on other, index
    of other line."""
    n = len(real.lines)
    jj = np.array([k for k in range(n) if not real.lines[k].through_origin],
                  dtype=int)
    if jj.size == 0:
        return []
    ii = np.full_like(jj, oi)
    s_o, u_j = _pair_arcs(real._angles, real._offsets, ii, jj)
    ok = np.isfinite(s_o)
    if directed:
        ok &= s_o > 0.0
    recs = [(abs(float(s)), float(s), float(u), int(j))
            for s, u, j in zip(s_o[ok], u_j[ok], jj[ok])]
    recs.sort()
    return recs


def _enum_zero(best, real, t_max, directed):
    for oi in _origin_indices(real, directed):
        lid = real.lines[oi].id
        _scan_targets(best, real.arcs_by_line[oi], 0.0, 0.0, lid, 0, t_max,
                      ((lid, 0.0),), nonneg_only=directed)


def _enum_one(best, real, t_max, directed):
    for oi in _origin_indices(real, directed):
        olid = real.lines[oi].id
        for base, s, u, j in _origin_crossings(real, oi, directed):
            if base >= best.length or base > t_max:
                break  # sorted by first-hop length; nothing better follows
            jlid = real.lines[j].id
            prefix = ((olid, 0.0), (olid, s), (jlid, u))
            _scan_targets(best, real.arcs_by_line[j], u, base, jlid, 1,
                          t_max, prefix)


def _enum_two_directed(best, real, t_max):
    angles, offsets = real._angles, real._offsets
    n = len(real.lines)
    oi = _origin_indices(real, True)[0]
    olid = real.lines[oi].id
    for base1, s, u, i in _origin_crossings(real, oi, True):
        if base1 >= best.length or base1 > t_max:
            break
        ilid = real.lines[i].id
        mm = np.array([m for m in range(n) if m != i and m != oi], dtype=int)
        if mm.size == 0:
            continue
        a_i, a_m = _pair_arcs(angles, offsets, np.full_like(mm, i), mm)
        for m, ai, am in zip(mm, a_i, a_m):
            if not math.isfinite(ai):
                continue
            base2 = base1 + abs(ai - u)
            if base2 >= best.length or base2 > t_max:
                continue
            mlid = real.lines[m].id
            prefix = ((olid, 0.0), (olid, s), (ilid, u), (ilid, float(ai)),
                      (mlid, float(am)))
            _scan_targets(best, real.arcs_by_line[m], float(am), base2,
                          mlid, 2, t_max, prefix)


# ---- general K-turn search --------------------------------------------------

_ORIGIN = -1  # pseudo node


def _k_turn(best, real, t_max, k, include_lower, directed):
    angles, offsets = real._angles, real._offsets
    n = len(real.lines)
    lids = [ln.id for ln in real.lines]

    # crossing graph: node = index into the pair list; adj[line] holds
    # (arc on that line, node, other line index)
    adj = [[] for _ in range(n)]
    node_arc = {}  # (node, line idx) -> arc of the node on that line
    origin_pair_nodes = set()  # crossings of two origin lines: the origin itself
    if n >= 2:
        ii, jj = np.triu_indices(n, k=1)
        arc_i, arc_j = _pair_arcs(angles, offsets, ii, jj)
        node = 0
        for a, b, u, v in zip(ii, jj, arc_i, arc_j):
            if not math.isfinite(u):
                continue
            adj[a].append((float(u), node, int(b)))
            adj[b].append((float(v), node, int(a)))
            node_arc[(node, int(a))] = float(u)
            node_arc[(node, int(b))] = float(v)
            if real.lines[a].through_origin and real.lines[b].through_origin:
                origin_pair_nodes.add(node)
            node += 1

    origin_idx = _origin_indices(real, directed)
    for oi in origin_idx:
        node_arc[(_ORIGIN, oi)] = 0.0

    dist = {}
    parent = {}
    heap = []
    for oi in origin_idx:
        state = (_ORIGIN, oi, 0)
        dist[state] = 0.0
        heapq.heappush(heap, (0.0, 0, _ORIGIN, oi))

    while heap:
        length, turns, node, li = heapq.heappop(heap)
        state = (node, li, turns)
        if length > dist.get(state, math.inf):
            continue
        if length > best.length:
            break  # every remaining candidate is strictly longer

        ref = node_arc[(node, li)]
        if include_lower or turns == k:
            start_state = node == _ORIGIN and turns == 0
            _scan_targets(
                best, real.arcs_by_line[li], ref, length, lids[li], turns,
                t_max, _route_of(parent, state, lids, node_arc),
                nonneg_only=directed and start_state,
            )

        if turns == k:
            continue
        at_start = node == _ORIGIN and turns == 0
        restrict_pos = directed and at_start
        for arc_w, w, other in adj[li]:
            if w == node:
                continue
            if at_start and w in origin_pair_nodes:
                # the mutual crossing of the origin lines is the start point
                # itself; switching lines there is not a turn, it is covered
                # by the start states
                continue
            if restrict_pos and arc_w <= 0.0:
                continue
            length2 = length + abs(arc_w - ref)
            if length2 > t_max:
                continue
            nstate = (w, other, turns + 1)
            if length2 < dist.get(nstate, math.inf):
                dist[nstate] = length2
                parent[nstate] = state
                heapq.heappush(heap, (length2, turns + 1, w, other))


def _route_of(parent, state, lids, node_arc):
    """Route prefix (vertex list) for a state, built lazily only when a
    candidate actually improves the incumbent."""

    def build():
        chain = []
        s = state
        while s is not None:
            chain.append(s)
            s = parent.get(s)
        chain.reverse()
        verts = []
        for prev, cur in zip([None] + chain[:-1], chain):
            node, li, _ = cur
            if prev is not None:
                pnode, pli, _ = prev
                verts.append((lids[pli], node_arc[(node, pli)]))
            verts.append((lids[li], node_arc[(node, li)]))
        return tuple(verts)

    return build


# ---- public API --------------------------------------------------------------

def _budget(policy: TurnPolicy) -> int:
    fixed = {PolicyKind.ZERO_TURN: 0, PolicyKind.ONE_TURN: 1,
             PolicyKind.TWO_TURN_DIRECTED: 2}
    k = fixed.get(policy.kind, policy.k)
    if k < 0:
        raise PolicyBudgetNegative(f"turn budget must be >= 0, got {k}")
    return int(k)


def shortest_path(real: Realization, policy: TurnPolicy,
                  t_max: float) -> PathResult:
    """Exact shortest admissible street distance on one realization.

    Censors at ``t_max`` (which must not exceed the sampled clip radius).
    Ties in length are broken by (line id, arc) of the target.
    """
    k = _budget(policy)
    t_max = float(t_max)
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    if t_max > real.clip_radius:
        raise TBeyondClip(f"t_max={t_max} exceeds clip_radius={real.clip_radius}")
    directed = (policy.first_hop_positive_x
                or policy.kind is PolicyKind.TWO_TURN_DIRECTED)

    best = _Best()
    if policy.kind is PolicyKind.ZERO_TURN:
        _enum_zero(best, real, t_max, directed)
    elif policy.kind is PolicyKind.ONE_TURN:
        if policy.include_lower_turn_paths:
            _enum_zero(best, real, t_max, directed)
        _enum_one(best, real, t_max, directed)
    elif policy.kind is PolicyKind.TWO_TURN_DIRECTED:
        if policy.include_lower_turn_paths:
            _enum_zero(best, real, t_max, True)
            _enum_one(best, real, t_max, True)
        _enum_two_directed(best, real, t_max)
    elif policy.kind is PolicyKind.K_TURN:
        _k_turn(best, real, t_max, k, policy.include_lower_turn_paths,
                directed)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown policy kind {policy.kind!r}")

    if best.key is None:
        return _censored(t_max)
    length, line_id, arc = best.key
    return PathResult(length, best.turns, PointOnLine(line_id, arc),
                      best.route, False, t_max)


def sample_path(params: ModelParams, scenario: PalmScenario,
                policy: TurnPolicy, t_max: float, seed,
                clip_radius: float | None = None) -> PathResult:
    """One fresh trial: sample a realization, query the oracle.

    The clip radius defaults to ``t_max``: any street path of length at most
    t_max stays inside the disk of radius t_max, and a line farther than
    t_max from the origin cannot carry a reachable point, so nothing that
    matters is clipped away.
    """
    R = float(t_max if clip_radius is None else clip_radius)
    real = sample_palm(params, scenario, R, seed)
    return shortest_path(real, policy, t_max)


def sample_D(params: ModelParams, scenario: PalmScenario, policy: TurnPolicy,
             t_max: float, seed) -> float:
    """Shortest-distance draw; inf means censored at t_max."""
    return sample_path(params, scenario, policy, t_max, seed).length


# ---- route helpers (used by tests and applications) --------------------------

def route_positions(real: Realization, route) -> list:
    """Euclidean coordinates of the route vertices."""
    out = []
    for lid, arc in route:
        ln = real.lines[real.index_of(lid)]
        ca, sa = math.cos(ln.angle), math.sin(ln.angle)
        out.append((ln.signed_offset * -sa + arc * ca,
                    ln.signed_offset * ca + arc * sa))
    return out


def route_length(route) -> float:
    """Sum of the walked segments: consecutive vertices on the same line."""
    total = 0.0
    for (la, aa), (lb, ab) in zip(route[:-1], route[1:]):
        if la == lb:
            total += abs(ab - aa)
    return total
