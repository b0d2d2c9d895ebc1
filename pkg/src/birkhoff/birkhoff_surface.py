"""Ribbon-graph model of the section surface of an Eulerian coorientation.

Each edge ``e`` of the multi-curve contributes a rectangle: the edge times the
open half-circle of unit vectors on the side its coorientation points to.  At
a crossing the four half-circles are cut into quarter arcs (one per sector of
directions) and arcs covering the same sector are glued in pairs.  Shrinking
every rectangle to its core gives a ribbon graph with

* one node per dart of the multi-curve (the rectangle end at that dart),
* one *leg* per edge of the multi-curve (the rectangle core),
* one *arc* per glued pair of quarters, four per crossing.

Nodes are trivalent, so the model has ``4V`` nodes and ``6V`` edges.  At a
crossing the arcs form a 4-cycle through its four darts: in cyclic order at an
alternating crossing, and as ``d0 d2 d1 d3`` (for senses ``+ + - -``) at a
non-alternating one.  That 4-cycle is the core of the vertex annulus.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .coorient import (
    ALTERNATING,
    MIXED,
    SINK,
    SOURCE,
    Coorientation,
    acyclicity,
    check_eulerian,
    quarter_kind,
    sense,
    vertex_type,
)
from .errors import NotAcyclic, UnsupportedCorner
from .surface_map import MultiCurveMap, rot, vertex_of


@dataclass
class RibbonGraph:
    """Oriented ribbon graph on half-edges ``2i``/``2i + 1`` of edge ``i``.

    ``rotation[n]`` lists the half-edges at node ``n`` counterclockwise.  All
    bands are untwisted: the section surface is oriented by the flow and the
    surface, and every gluing matches opposite senses.
    """

    rotation: list[list[int]]

    def __post_init__(self):
        nh = sum(len(r) for r in self.rotation)
        self.node_of = [0] * nh
        self.slot = [0] * nh
        for n, hs in enumerate(self.rotation):
            for k, h in enumerate(hs):
                self.node_of[h] = n
                self.slot[h] = k

    @property
    def num_nodes(self) -> int:
        return len(self.rotation)

    @property
    def num_edges(self) -> int:
        return len(self.node_of) // 2

    @property
    def euler_characteristic(self) -> int:
        return self.num_nodes - self.num_edges

    def next_ccw(self, h: int) -> int:
        r = self.rotation[self.node_of[h]]
        return r[(self.slot[h] + 1) % len(r)]

    def prev_ccw(self, h: int) -> int:
        r = self.rotation[self.node_of[h]]
        return r[(self.slot[h] - 1) % len(r)]

    def boundary_components(self) -> list[list[int]]:
        """Orbits of ``h -> next_ccw(h ^ 1)``; each runs along one boundary curve."""
        seen = [False] * len(self.node_of)
        out = []
        for h0 in range(len(self.node_of)):
            if seen[h0]:
                continue
            comp = []
            h = h0
            while not seen[h]:
                seen[h] = True
                comp.append(h)
                h = self.next_ccw(h ^ 1)
            out.append(comp)
        return out

    @property
    def num_boundary(self) -> int:
        return len(self.boundary_components())

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic - self.num_boundary) // 2


@dataclass(frozen=True)
class Arc:
    vertex: int
    quarter: int
    darts: tuple[int, int]
    edge: int


@dataclass(frozen=True)
class Curve:
    """Closed walk in the skeleton given by the half-edges it leaves along."""

    name: str
    walk: tuple[int, ...]
    vector: tuple[int, ...]
    simple: bool

    def nodes(self, rg: RibbonGraph) -> list[int]:
        return [rg.node_of[h] for h in self.walk]


# Corner routing for the face curves.  A corner is the sector of a face at a
# crossing; the curve enters on the leg of the sector's first dart and must
# reach the node of the next dart through the vertex 4-cycle.  Each rule picks
# one of the two ways around the cycle:
#   "short"/"long": fewer or more arcs (when the counts differ),
#   "own"/"other":  the way containing an arc of the corner's own sector.
CORNER_KINDS = (
    "alt_sink",
    "alt_source",
    "nonalt_sink",
    "nonalt_source",
    "nonalt_plus",
    "nonalt_minus",
)

ROUTING = {
    "alt_sink": "short",
    "alt_source": "short",
    "nonalt_sink": "short",
    "nonalt_source": "short",
    "nonalt_plus": "own",
    "nonalt_minus": "own",
}


def corner_kind(m: MultiCurveMap, eta: Coorientation, d: int) -> str:
    v = vertex_of(d)
    kind = quarter_kind(m, eta, d)
    if vertex_type(m, eta, v) == ALTERNATING:
        if kind == MIXED:
            raise UnsupportedCorner("alternating crossings have no mixed sectors")
        return "alt_sink" if kind == SINK else "alt_source"
    if kind == SINK:
        return "nonalt_sink"
    if kind == SOURCE:
        return "nonalt_source"
    return "nonalt_plus" if sense(m, eta, d) > 0 else "nonalt_minus"


def quarter_cover(m: MultiCurveMap, eta: Coorientation, v: int, j: int) -> list[int]:
    """Darts at ``v`` whose half-circle contains direction sector ``j``."""
    out = []
    for k in range(4):
        d = 4 * v + k
        s = sense(m, eta, d)
        covered = {k, (k + 1) % 4} if s > 0 else {(k - 1) % 4, (k - 2) % 4}
        if j in covered:
            out.append(d)
    return out


def quarter_pairs(m: MultiCurveMap, eta: Coorientation, v: int, j: int) -> list[tuple[int, int]]:
    cover = quarter_cover(m, eta, v, j)
    if not cover:
        return []
    if len(cover) == 2:
        return [tuple(cover)]
    # sink sector of a non-alternating crossing: the sheet through the two
    # bounding darts and the sheet through the other two stay apart
    base = 4 * v
    return [
        (base + j, base + (j + 1) % 4),
        (base + (j + 2) % 4, base + (j + 3) % 4),
    ]


def covered_quarters(m: MultiCurveMap, eta: Coorientation, d: int) -> tuple[int, int]:
    """The two sectors of ``d``'s half-circle, in counterclockwise order on the surface."""
    k = d % 4
    if sense(m, eta, d) > 0:
        return k, (k + 1) % 4
    return (k - 1) % 4, (k - 2) % 4


@dataclass
class SurfaceModel:
    map: MultiCurveMap
    eta: Coorientation
    ribbon: RibbonGraph
    arcs: list[Arc]
    legs: list[int]
    arc_half: dict
    routing: dict

    # -- invariants ------------------------------------------------------
    @property
    def euler_characteristic(self) -> int:
        return self.ribbon.euler_characteristic

    @property
    def num_boundary(self) -> int:
        return self.ribbon.num_boundary

    @property
    def genus(self) -> int:
        return self.ribbon.genus

    @property
    def rank(self) -> int:
        return 1 - self.euler_characteristic

    # -- spanning tree and homology --------------------------------------
    @cached_property
    def _tree(self):
        rg = self.ribbon
        parent_half = [-1] * rg.num_nodes
        seen = [False] * rg.num_nodes
        seen[0] = True
        order = [0]
        tree_edges = set()
        for n in order:
            for h in rg.rotation[n]:
                w = rg.node_of[h ^ 1]
                if not seen[w]:
                    seen[w] = True
                    parent_half[w] = h ^ 1  # half-edge at w pointing to its parent
                    tree_edges.add(h >> 1)
                    order.append(w)
        chords = [i for i in range(rg.num_edges) if i not in tree_edges]
        return parent_half, tree_edges, chords

    @property
    def chords(self) -> list[int]:
        return self._tree[2]

    @cached_property
    def chord_index(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.chords)}

    def path_to_root(self, n: int) -> list[int]:
        parent_half = self._tree[0]
        out = []
        while n != 0:
            h = parent_half[n]
            out.append(h)
            n = self.ribbon.node_of[h ^ 1]
        return out

    def basis_walks(self) -> list[tuple[int, ...]]:
        """Fundamental cycles of the chords, based at node 0."""
        rg = self.ribbon
        out = []
        for e in self.chords:
            h = 2 * e
            down = [x ^ 1 for x in reversed(self.path_to_root(rg.node_of[h]))]
            up = self.path_to_root(rg.node_of[h ^ 1])
            out.append(tuple(down + [h] + up))
        return out

    def walk_vector(self, walk: Sequence[int]) -> tuple[int, ...]:
        check_closed(self.ribbon, walk)
        vec = [0] * len(self.chords)
        idx = self.chord_index
        for h in walk:
            i = idx.get(h >> 1)
            if i is not None:
                vec[i] += 1 if h % 2 == 0 else -1
        return tuple(vec)

    @cached_property
    def pairing(self) -> list[list[int]]:
        walks = self.basis_walks()
        n = len(walks)
        return [[walk_intersection(self.ribbon, walks[i], walks[j]) for j in range(n)] for i in range(n)]

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        J = self.pairing
        return sum(x[i] * J[i][j] * y[j] for i in range(len(x)) if x[i] for j in range(len(y)) if y[j])

    def curve(self, name: str, walk: Sequence[int]) -> Curve:
        walk = tuple(walk)
        return Curve(name, walk, self.walk_vector(walk), self_crossings(self.ribbon, walk) == 0)

    def boundary_curves(self) -> list[Curve]:
        """Boundary components pushed onto the skeleton, as curves."""
        out = []
        for i, comp in enumerate(self.ribbon.boundary_components()):
            out.append(self.curve(f"boundary {i}", comp))
        return out

    def to_dict(self) -> dict:
        return {
            "euler_characteristic": self.euler_characteristic,
            "boundary_components": self.num_boundary,
            "genus": self.genus,
            "rank": self.rank,
            "nodes": self.ribbon.num_nodes,
            "edges": self.ribbon.num_edges,
        }


def check_closed(rg: RibbonGraph, walk: Sequence[int]) -> None:
    from .errors import NotAClosedWalk

    for a, b in zip(walk, list(walk[1:]) + list(walk[:1])):
        if rg.node_of[a ^ 1] != rg.node_of[b]:
            raise NotAClosedWalk("skeleton walk is not closed")


def walk_intersection(rg: RibbonGraph, a: Sequence[int], b: Sequence[int]) -> int:
    """Algebraic intersection of closed walks ``a`` and ``b``.

    ``a`` is pushed off to its left; at each node it sweeps the half-edges
    strictly counterclockwise between its outgoing and incoming half-edge, and
    each such half-edge counts +1 per exit of ``b`` and -1 per entry.
    """
    flow: dict[int, int] = {}
    for h in b:
        flow[h] = flow.get(h, 0) + 1
        flow[h ^ 1] = flow.get(h ^ 1, 0) - 1
    total = 0
    n = len(a)
    for i in range(n):
        x = a[i - 1] ^ 1  # arriving half-edge
        y = a[i]
        z = rg.next_ccw(y)
        while z != x:
            total += flow.get(z, 0)
            z = rg.next_ccw(z)
    return total


def _before(rg: RibbonGraph, base: int, p: int, q: int) -> bool:
    """Whether ``p`` comes before ``q`` going counterclockwise from ``base``."""
    z = rg.next_ccw(base)
    while z != base:
        if z == p:
            return True
        if z == q:
            return False
        z = rg.next_ccw(z)
    raise ValueError("half-edges are not at a common node")


def _interleaved(rg: RibbonGraph, x1: int, y1: int, x2: int, y2: int) -> bool:
    return _before(rg, x1, x2, y1) != _before(rg, x1, y2, y1)


def _meetings(rg: RibbonGraph, a, b, same: bool, segments_only: bool) -> int:
    p, q = len(a), len(b)
    total = 0
    for i in range(p):
        xa, ya = a[i - 1] ^ 1, a[i]
        n = rg.node_of[ya]
        for j in range(q):
            if same and i == j:
                continue
            xb, yb = b[j - 1] ^ 1, b[j]
            if rg.node_of[yb] != n or xa == xb:
                continue
            if ya != yb:
                if segments_only or {xa, ya} & {xb, yb}:
                    continue
                total += _interleaved(rg, xa, ya, xb, yb)
                continue
            k = 1
            while k <= max(p, q) and a[(i + k) % p] == b[(j + k) % q]:
                k += 1
            if k > max(p, q):
                continue  # parallel copies of one closed walk
            xe = a[(i + k - 1) % p] ^ 1
            ya2, yb2 = a[(i + k) % p], b[(j + k) % q]
            total += _before(rg, ya, xa, xb) == _before(rg, xe, ya2, yb2)
    return total


def walk_crossings(rg: RibbonGraph, a: Sequence[int], b: Sequence[int]) -> int:
    """Transverse crossings of two reduced closed walks drawn in parallel along shared edges."""
    rb = [h ^ 1 for h in reversed(b)]
    return _meetings(rg, a, b, False, False) + _meetings(rg, a, rb, False, True)


def self_crossings(rg: RibbonGraph, a: Sequence[int]) -> int:
    ra = [h ^ 1 for h in reversed(a)]
    return (_meetings(rg, a, a, True, False) + _meetings(rg, a, ra, False, True)) // 2


def build_skeleton(m: MultiCurveMap, eta: Coorientation, routing: dict | None = None) -> SurfaceModel:
    check_eulerian(m, eta)
    n_nodes = m.num_darts
    half_slots: dict[tuple[int, object], int] = {}
    arcs: list[Arc] = []
    edge_count = 0
    legs = []
    for e, (a, b) in enumerate(m.edges):
        half_slots[(a, "leg")] = 2 * edge_count
        half_slots[(b, "leg")] = 2 * edge_count + 1
        legs.append(edge_count)
        edge_count += 1
    for v in range(m.num_vertices):
        for j in range(4):
            for a, b in quarter_pairs(m, eta, v, j):
                half_slots[(a, j)] = 2 * edge_count
                half_slots[(b, j)] = 2 * edge_count + 1
                arcs.append(Arc(v, j, (a, b), edge_count))
                edge_count += 1
    rotation = []
    for d in range(n_nodes):
        qa, qb = covered_quarters(m, eta, d)
        rotation.append([half_slots[(d, qa)], half_slots[(d, qb)], half_slots[(d, "leg")]])
    rg = RibbonGraph(rotation)
    return SurfaceModel(m, eta, rg, arcs, legs, half_slots, dict(routing or ROUTING))


def _vertex_cycle(model: SurfaceModel, v: int) -> list[int]:
    """Half-edges of the 4-cycle at ``v`` starting from the node of dart ``4v``."""
    rg = model.ribbon
    arc_edges = {a.edge for a in model.arcs if a.vertex == v}
    start = 4 * v
    walk = []
    node, came = start, None
    while True:
        nxt = [h for h in rg.rotation[node] if (h >> 1) in arc_edges and (h >> 1) != came]
        h = nxt[0]
        walk.append(h)
        came = h >> 1
        node = rg.node_of[h ^ 1]
        if node == start:
            return walk


def gamma_v(model: SurfaceModel, v: int) -> Curve:
    return model.curve(f"gamma_v(vertex {model.map.vertex_ids[v]})", _vertex_cycle(model, v))


def _corner_paths(model: SurfaceModel, d: int) -> list[list[int]]:
    """Both ways around the vertex cycle from node ``d`` to node ``rot(d)``."""
    cyc = _vertex_cycle(model, vertex_of(d))
    rg = model.ribbon
    nodes = [rg.node_of[h] for h in cyc]
    i, j = nodes.index(d), nodes.index(rot(d))
    k = len(cyc)
    fwd = [cyc[(i + t) % k] for t in range((j - i) % k)]
    bwd = [cyc[(i - 1 - t) % k] ^ 1 for t in range((i - j) % k)]
    return [fwd, bwd]


def corner_route(model: SurfaceModel, d: int) -> list[int]:
    kind = corner_kind(model.map, model.eta, d)
    rule = model.routing.get(kind)
    paths = _corner_paths(model, d)
    j = d % 4
    own_edges = {a.edge for a in model.arcs if a.vertex == vertex_of(d) and a.quarter == j}
    if rule in ("short", "long"):
        if len(paths[0]) == len(paths[1]):
            raise UnsupportedCorner(f"corner {kind} has two routes of equal length")
        paths.sort(key=len)
        return paths[0] if rule == "short" else paths[1]
    if rule in ("own", "other"):
        has = [any((h >> 1) in own_edges for h in p) for p in paths]
        if has[0] == has[1]:
            raise UnsupportedCorner(f"corner {kind}: own sector does not separate the routes")
        pick = has.index(True) if rule == "own" else has.index(False)
        return paths[pick]
    raise UnsupportedCorner(f"no routing rule for corner {kind}")


def gamma_f(model: SurfaceModel, f: int, require_acyclic: bool = True) -> Curve:
    m = model.map
    if require_acyclic and not acyclicity(m, model.eta)[0]:
        raise NotAcyclic("face curves are defined for acyclic coorientations")
    walk = []
    for d in m.faces[f]:
        walk.extend(corner_route(model, d))
        walk.append(model.arc_half[(rot(d), "leg")])
    return model.curve(f"gamma_f(face {f})", walk)


def homology_basis(model: SurfaceModel) -> list[Curve]:
    return [model.curve(f"chord {e}", w) for e, w in zip(model.chords, model.basis_walks())]


def curve_class(model: SurfaceModel, curve: Curve) -> tuple[int, ...]:
    return model.walk_vector(curve.walk)


def intersection_pairing(model: SurfaceModel) -> list[list[int]]:
    return [row[:] for row in model.pairing]


def surface_invariants(m: MultiCurveMap, eta: Coorientation) -> dict:
    model = build_skeleton(m, eta)
    return model.to_dict()


__all__ = [
    "RibbonGraph",
    "SurfaceModel",
    "Curve",
    "build_skeleton",
    "gamma_v",
    "gamma_f",
    "homology_basis",
    "curve_class",
    "intersection_pairing",
    "walk_intersection",
    "ROUTING",
]
