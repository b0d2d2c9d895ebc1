"""Four-valent combinatorial maps encoding a filling multi-curve on a closed surface.

Darts are stored internally with a vertex-major index ``4 * v + k`` where ``k``
is the position of the dart in the counterclockwise rotation at vertex ``v``.
The ids read from a map file are kept in :attr:`MultiCurveMap.dart_ids` for
serialisation only.

Sectors: dart ``d`` labels the corner of the surface lying counterclockwise
of ``d`` (between ``d`` and ``rot(d)``).  Faces are the cycles of the sector
permutation ``d -> pair(rot(d))``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import BadInvolution, DanglingDart, DisconnectedMap, NonQuadrivalent


def rot(d: int) -> int:
    """Next dart counterclockwise around the same vertex."""
    return d - d % 4 + (d + 1) % 4


def rot_inv(d: int) -> int:
    return d - d % 4 + (d + 3) % 4


def opposite(d: int) -> int:
    """The dart continuing the same strand through the vertex."""
    return d - d % 4 + (d + 2) % 4


def vertex_of(d: int) -> int:
    return d // 4


def position(d: int) -> int:
    return d % 4


@dataclass(frozen=True)
class DualGraph:
    """Face adjacency of the map.

    Dual edge ``e`` crosses map edge ``e`` from ``tail[e]`` (the face on the
    right of the edge's first dart) to ``head[e]`` (the face on its left).
    """

    num_nodes: int
    tail: tuple[int, ...]
    head: tuple[int, ...]

    @property
    def num_edges(self) -> int:
        return len(self.tail)

    def incident(self, f: int) -> list[tuple[int, int]]:
        """Dual edges at node ``f`` as ``(edge, direction)``; ``+1`` leaves ``f`` along the reference."""
        out = []
        for e, (t, h) in enumerate(zip(self.tail, self.head)):
            if t == f:
                out.append((e, 1))
            if h == f:
                out.append((e, -1))
        return out

    def step(self, e: int, direction: int) -> tuple[int, int]:
        return (self.tail[e], self.head[e]) if direction > 0 else (self.head[e], self.tail[e])


@dataclass(frozen=True)
class MultiCurveMap:
    """Immutable validated 4-valent map; all derived data is computed eagerly."""

    partner: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    dart_ids: tuple[int, ...]
    vertex_ids: tuple[int, ...]
    name: str = ""
    edge_of: tuple[int, ...] = field(init=False, repr=False)
    faces: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    face_of_sector: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        edge_of = [0] * len(self.partner)
        for i, (a, b) in enumerate(self.edges):
            edge_of[a] = edge_of[b] = i
        object.__setattr__(self, "edge_of", tuple(edge_of))
        faces = trace_faces_raw(self.partner)
        face_of_sector = [0] * len(self.partner)
        for i, f in enumerate(faces):
            for d in f:
                face_of_sector[d] = i
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "face_of_sector", tuple(face_of_sector))

    # -- counts -----------------------------------------------------------
    @property
    def num_darts(self) -> int:
        return len(self.partner)

    @property
    def num_vertices(self) -> int:
        return len(self.partner) // 4

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    # -- local structure --------------------------------------------------
    def first_dart(self, e: int) -> int:
        return self.edges[e][0]

    def left_face(self, d: int) -> int:
        """Face counterclockwise of dart ``d`` at its vertex."""
        return self.face_of_sector[d]

    def right_face(self, d: int) -> int:
        return self.face_of_sector[rot_inv(d)]

    def edge_faces(self, e: int) -> tuple[int, int]:
        """``(right, left)`` faces of the first dart of edge ``e``."""
        a = self.edges[e][0]
        return self.right_face(a), self.left_face(a)

    def face_edges(self, f: int) -> list[int]:
        """Boundary edges of ``f`` in trace order (with multiplicity)."""
        return [self.edge_of[rot(d)] for d in self.faces[f]]

    def face_vertices(self, f: int) -> list[int]:
        return [vertex_of(d) for d in self.faces[f]]

    def vertex_faces(self, v: int) -> list[int]:
        """Faces of the four sectors at ``v`` in counterclockwise order."""
        return [self.face_of_sector[4 * v + k] for k in range(4)]

    @cached_property
    def dual(self) -> DualGraph:
        tails, heads = [], []
        for e in range(self.num_edges):
            t, h = self.edge_faces(e)
            tails.append(t)
            heads.append(h)
        return DualGraph(self.num_faces, tuple(tails), tuple(heads))

    @cached_property
    def strand_darts(self) -> tuple[tuple[int, ...], ...]:
        """Each strand as the darts it leaves its vertices along, in traversal order."""
        seen: set[int] = set()
        out = []
        for start in range(self.num_darts):
            if self.edge_of[start] in seen:
                continue
            cyc = []
            d = start
            while True:
                cyc.append(d)
                seen.add(self.edge_of[d])
                d = opposite(self.partner[d])
                if d == start:
                    break
            out.append(tuple(cyc))
        return tuple(out)

    @cached_property
    def strands(self) -> tuple[tuple[int, ...], ...]:
        """Closed curves of the multi-curve, each as its cyclic sequence of edges."""
        return tuple(tuple(self.edge_of[d] for d in s) for s in self.strand_darts)

    def relabel(self, perm: list[int]) -> "MultiCurveMap":
        """Same map with dart ids replaced by ``perm[old_id_index]`` and vertex rotations cycled."""
        ids = [perm[i] for i in range(self.num_darts)]
        return build_map(self.to_dict(dart_ids=ids))

    # -- serialisation ----------------------------------------------------
    def to_dict(self, dart_ids=None) -> dict:
        ids = list(dart_ids) if dart_ids is not None else list(self.dart_ids)
        verts = [
            {"id": self.vertex_ids[v], "darts": [ids[4 * v + k] for k in range(4)]}
            for v in range(self.num_vertices)
        ]
        edges = [[ids[a], ids[b]] for a, b in self.edges]
        out = {"vertices": verts, "edges": edges}
        if self.name:
            out["name"] = self.name
        return out

    def summary(self) -> dict:
        return {
            "name": self.name,
            "V": self.num_vertices,
            "E": self.num_edges,
            "F": self.num_faces,
            "genus": self.genus,
            "strands": len(self.strands),
        }


def trace_faces_raw(partner) -> tuple[tuple[int, ...], ...]:
    """Cycles of the sector permutation ``d -> partner[rot(d)]``."""
    n = len(partner)
    seen = [False] * n
    faces = []
    for d0 in range(n):
        if seen[d0]:
            continue
        cyc = []
        d = d0
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = partner[rot(d)]
        faces.append(tuple(cyc))
    return tuple(faces)


def trace_faces(m: MultiCurveMap) -> list[list[int]]:
    """Faces as cyclic dart sequences (each dart stands for the sector ccw of it)."""
    return [list(f) for f in m.faces]


def strands(m: MultiCurveMap) -> list[list[int]]:
    return [list(s) for s in m.strands]


def build_map(desc: dict | str) -> MultiCurveMap:
    """Validate a map description (parsed JSON or JSON text) and build the map."""
    if isinstance(desc, str):
        desc = json.loads(desc)
    vertices = desc.get("vertices")
    edges = desc.get("edges")
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise BadInvolution("map needs 'vertices' and 'edges' lists")
    index: dict[int, int] = {}
    dart_ids: list[int] = []
    vertex_ids: list[int] = []
    for vi, vert in enumerate(vertices):
        darts = list(vert.get("darts", []))
        if len(darts) != 4:
            raise NonQuadrivalent(f"vertex {vert.get('id', vi)} has {len(darts)} darts")
        vertex_ids.append(int(vert.get("id", vi)))
        for d in darts:
            if not isinstance(d, int) or isinstance(d, bool) or d < 0:
                raise DanglingDart(f"dart id {d!r} is not a nonnegative integer")
            if d in index:
                raise DanglingDart(f"dart {d} appears in two rotations")
            index[d] = len(dart_ids)
            dart_ids.append(d)
    n = len(dart_ids)
    partner = [-1] * n
    edge_list = []
    for pair in edges:
        if len(pair) != 2:
            raise BadInvolution(f"edge {pair!r} is not a dart pair")
        a, b = pair
        for d in (a, b):
            if d not in index:
                raise DanglingDart(f"dart {d} is missing from the vertex rotations")
        if a == b:
            raise BadInvolution(f"dart {a} is paired with itself")
        ia, ib = index[a], index[b]
        if partner[ia] != -1 or partner[ib] != -1:
            raise BadInvolution(f"dart of edge {pair!r} is paired twice")
        partner[ia], partner[ib] = ib, ia
        edge_list.append((ia, ib) if a < b else (ib, ia))
    unpaired = [dart_ids[i] for i in range(n) if partner[i] == -1]
    if unpaired:
        raise BadInvolution(f"unpaired darts: {unpaired}")
    if n == 0:
        raise NonQuadrivalent("a filling multi-curve needs at least one crossing")
    _check_connected(partner)
    return MultiCurveMap(
        partner=tuple(partner),
        edges=tuple(edge_list),
        dart_ids=tuple(dart_ids),
        vertex_ids=tuple(vertex_ids),
        name=str(desc.get("name", "")),
    )


def _check_connected(partner):
    nv = len(partner) // 4
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for k in range(4):
            w = partner[4 * v + k] // 4
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != nv:
        raise DisconnectedMap(f"map has {nv - len(seen)} vertices unreachable from vertex 0")


def load_map(path: str | Path) -> MultiCurveMap:
    return build_map(json.loads(Path(path).read_text(encoding="utf-8")))


def grid_map(p: int, q: int, name: str | None = None) -> MultiCurveMap:
    """Map of ``p`` horizontal and ``q`` vertical circles on the torus.

    Vertex ``i * q + j`` sits on horizontal circle ``i`` and vertical circle
    ``j``; its darts point east, north, west, south.
    """
    verts = []
    edges = []
    for i in range(p):
        for j in range(q):
            v = i * q + j
            verts.append({"id": v, "darts": [4 * v + k for k in range(4)]})
    for i in range(p):
        for j in range(q):
            v = i * q + j
            east = i * q + (j + 1) % q
            edges.append([4 * v + 0, 4 * east + 2])
    for i in range(p):
        for j in range(q):
            v = i * q + j
            north = ((i + 1) % p) * q + j
            edges.append([4 * v + 1, 4 * north + 3])
    return build_map({"name": name or f"grid{p}x{q}", "vertices": verts, "edges": edges})


DATA_DIR = Path(__file__).parent / "data"


def shipped_map(name: str) -> MultiCurveMap:
    """One of the maps bundled with the package (``T1``, ``T6``, ``G2``)."""
    return load_map(DATA_DIR / f"{name}.json")
