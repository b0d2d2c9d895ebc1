"""Eulerian coorientations of a 4-valent map, flips and coherent orders.

A coorientation stores one bit per edge: ``1`` when the transverse direction
points to the left (counterclockwise side) of the edge's first dart.  The dual
edge of ``e`` is then oriented along its reference direction exactly when the
bit is set.  Faces are ordered so that the coorientation points from larger
to smaller faces; sinks are the minimal faces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    NotAClosedWalk,
    NotAcyclic,
    NotASink,
    NotEulerian,
    OrderInconsistent,
)
from .surface_map import MultiCurveMap, rot, rot_inv

ALTERNATING = "alternating"
NON_ALTERNATING = "non_alternating"

SINK, SOURCE, MIXED = "sink", "source", "mixed"


@dataclass(frozen=True)
class Coorientation:
    bits: tuple[int, ...]

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Coorientation":
        return cls(tuple(int(b) & 1 for b in bits))

    def flipped(self, edges) -> "Coorientation":
        flip = set(edges)
        return Coorientation(tuple(b ^ 1 if e in flip else b for e, b in enumerate(self.bits)))

    def weight(self, e: int) -> int:
        """+1 when the coorientation crosses dual edge ``e`` along its reference direction."""
        return 1 if self.bits[e] else -1

    def to_dict(self, m: MultiCurveMap | None = None) -> dict:
        return {"map": m.name if m is not None else "", "bits": list(self.bits)}


def sense(m: MultiCurveMap, eta: Coorientation, d: int) -> int:
    """+1 when the coorientation of ``d``'s edge points counterclockwise of ``d``."""
    e = m.edge_of[d]
    s = 1 if eta.bits[e] else -1
    return s if m.edges[e][0] == d else -s


def vertex_senses(m: MultiCurveMap, eta: Coorientation, v: int) -> tuple[int, ...]:
    return tuple(sense(m, eta, 4 * v + k) for k in range(4))


def is_eulerian(m: MultiCurveMap, eta: Coorientation) -> bool:
    if len(eta.bits) != m.num_edges:
        return False
    return all(sum(vertex_senses(m, eta, v)) == 0 for v in range(m.num_vertices))


def check_eulerian(m: MultiCurveMap, eta: Coorientation) -> None:
    if not is_eulerian(m, eta):
        raise NotEulerian("coorientation is not 2-in/2-out at every crossing")


def vertex_type(m: MultiCurveMap, eta: Coorientation, v: int) -> str:
    s = vertex_senses(m, eta, v)
    if sum(s) != 0:
        raise NotEulerian(f"vertex {v} is not balanced: senses {s}")
    return ALTERNATING if s[0] == s[2] else NON_ALTERNATING


def quarter_kind(m: MultiCurveMap, eta: Coorientation, d: int) -> str:
    """Local role of the sector counterclockwise of dart ``d``."""
    a, b = sense(m, eta, d), sense(m, eta, rot(d))
    if a > 0 and b < 0:
        return SINK
    if a < 0 and b > 0:
        return SOURCE
    return MIXED


def enumerate_eulerian(m: MultiCurveMap) -> list[Coorientation]:
    """All Eulerian coorientations, lexicographic in the bit vector."""
    n = m.num_edges
    # vertex -> edges whose last incidence is this edge (check point)
    last_edge_of_vertex = [max(m.edge_of[4 * v + k] for k in range(4)) for v in range(m.num_vertices)]
    checks: list[list[int]] = [[] for _ in range(n)]
    for v, e in enumerate(last_edge_of_vertex):
        checks[e].append(v)
    out: list[Coorientation] = []
    bits = [0] * n

    def balanced(v):
        tot = 0
        for k in range(4):
            d = 4 * v + k
            e = m.edge_of[d]
            s = 1 if bits[e] else -1
            tot += s if m.edges[e][0] == d else -s
        return tot == 0

    def rec(i):
        if i == n:
            out.append(Coorientation(tuple(bits)))
            return
        for b in (0, 1):
            bits[i] = b
            if all(balanced(v) for v in checks[i]):
                rec(i + 1)
        bits[i] = 0

    rec(0)
    return out


# -- dual graph ---------------------------------------------------------------

def oriented_dual(m: MultiCurveMap, eta: Coorientation) -> list[tuple[int, int]]:
    """Dual edges as ``(from_face, to_face)``, pointing where the coorientation points."""
    dual = m.dual
    return [
        (dual.tail[e], dual.head[e]) if eta.bits[e] else (dual.head[e], dual.tail[e])
        for e in range(m.num_edges)
    ]


def check_closed_walk(m: MultiCurveMap, cycle) -> list[int]:
    """Face sequence visited by a dual walk given as ``(edge, direction)`` steps."""
    if not cycle:
        return []
    faces = []
    dual = m.dual
    cur = None
    for e, direction in cycle:
        if direction not in (1, -1) or not 0 <= e < m.num_edges:
            raise NotAClosedWalk(f"bad step {(e, direction)!r}")
        a, b = dual.step(e, direction)
        if cur is not None and a != cur:
            raise NotAClosedWalk(f"step {(e, direction)} starts at face {a}, walk is at {cur}")
        faces.append(a)
        cur = b
    if cur != faces[0]:
        raise NotAClosedWalk("walk does not return to its starting face")
    return faces


def cohomology_eval(m: MultiCurveMap, eta: Coorientation, cycle) -> int:
    """Algebraic intersection of a closed dual walk with the cooriented multi-curve."""
    check_closed_walk(m, cycle)
    return sum(direction * eta.weight(e) for e, direction in cycle)


def find_directed_cycle(num_nodes: int, arcs: Sequence[tuple[int, int]]) -> list[int] | None:
    """Indices of arcs forming a directed cycle, or ``None`` for a DAG (iterative DFS)."""
    out_arcs: list[list[int]] = [[] for _ in range(num_nodes)]
    for i, (a, _) in enumerate(arcs):
        out_arcs[a].append(i)
    color = [0] * num_nodes
    via = [-1] * num_nodes
    for root in range(num_nodes):
        if color[root]:
            continue
        stack = [(root, 0)]
        color[root] = 1
        while stack:
            node, k = stack[-1]
            if k < len(out_arcs[node]):
                stack[-1] = (node, k + 1)
                arc = out_arcs[node][k]
                nxt = arcs[arc][1]
                if color[nxt] == 0:
                    color[nxt] = 1
                    via[nxt] = arc
                    stack.append((nxt, 0))
                elif color[nxt] == 1:
                    cyc = [arc]
                    cur = node
                    while cur != nxt:
                        cyc.append(via[cur])
                        cur = arcs[via[cur]][0]
                    return cyc[::-1]
            else:
                color[node] = 2
                stack.pop()
    return None


def topological_order(num_nodes: int, arcs: Sequence[tuple[int, int]]) -> list[int]:
    """Kahn order (smallest available index first); raises on cycles."""
    indeg = [0] * num_nodes
    succ: list[list[int]] = [[] for _ in range(num_nodes)]
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1
    import heapq

    heap = [i for i in range(num_nodes) if indeg[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        a = heapq.heappop(heap)
        out.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    if len(out) != num_nodes:
        raise NotAcyclic("relation has a directed cycle")
    return out


def acyclicity(m: MultiCurveMap, eta: Coorientation) -> tuple[bool, list[tuple[int, int]] | None]:
    """``(True, None)`` for acyclic duals, else ``(False, witness)``.

    The witness is a closed dual walk, as ``(edge, direction)`` steps, that
    follows the coorientation at every step.
    """
    check_eulerian(m, eta)
    arcs = oriented_dual(m, eta)
    cyc = find_directed_cycle(m.num_faces, arcs)
    if cyc is None:
        return True, None
    return False, [(e, 1 if eta.bits[e] else -1) for e in cyc]


def is_acyclic(m: MultiCurveMap, eta: Coorientation) -> bool:
    return acyclicity(m, eta)[0]


def witness_faces(m: MultiCurveMap, walk) -> list[int]:
    return check_closed_walk(m, walk)


def is_sink(m: MultiCurveMap, eta: Coorientation, f: int) -> bool:
    arcs = oriented_dual(m, eta)
    touching = [a for a in arcs if f in a]
    return bool(touching) and all(a[1] == f and a[0] != f for a in touching)


def is_source(m: MultiCurveMap, eta: Coorientation, f: int) -> bool:
    arcs = oriented_dual(m, eta)
    touching = [a for a in arcs if f in a]
    return bool(touching) and all(a[0] == f and a[1] != f for a in touching)


def sink_faces(m: MultiCurveMap, eta: Coorientation) -> list[int]:
    check_eulerian(m, eta)
    return [f for f in range(m.num_faces) if is_sink(m, eta, f)]


def flip(m: MultiCurveMap, eta: Coorientation, f: int) -> Coorientation:
    """Reverse the coorientation along the boundary of the sink face ``f``."""
    if not is_sink(m, eta, f):
        raise NotASink(f"face {f} is not a sink")
    return eta.flipped(set(m.face_edges(f)))


def face_order_relation(m: MultiCurveMap, eta: Coorientation) -> list[tuple[int, int]]:
    """Pairs ``(smaller, larger)`` of faces, one per edge."""
    return [(b, a) for a, b in oriented_dual(m, eta)]


def check_partial_representation(m: MultiCurveMap, eta: Coorientation, order: Sequence[int]) -> None:
    if sorted(order) != list(range(m.num_faces)):
        raise OrderInconsistent("order is not a permutation of the faces")
    pos = {f: i for i, f in enumerate(order)}
    for lo, hi in face_order_relation(m, eta):
        if lo == hi:
            raise NotAcyclic("a dual loop admits no order")
        if pos[lo] > pos[hi]:
            raise OrderInconsistent(f"face {hi} must come after face {lo}")


def flip_algorithm(m: MultiCurveMap, eta: Coorientation, order: Sequence[int]) -> list[Coorientation]:
    """``[eta_0, ..., eta_n]``: successively flip faces in increasing order."""
    ok, _ = acyclicity(m, eta)
    if not ok:
        raise NotAcyclic("flip algorithm needs an acyclic coorientation")
    check_partial_representation(m, eta, order)
    seq = [eta]
    cur = eta
    for f in order:
        cur = flip(m, cur, f)
        seq.append(cur)
    return seq


def elementary_flip(m: MultiCurveMap, eta: Coorientation, order: Sequence[int]):
    """Flip the minimal face and move it to the top of the order."""
    f = order[0]
    return flip(m, eta, f), list(order[1:]) + [f]


# -- coherent order -----------------------------------------------------------

def node_label(m: MultiCurveMap, node: int) -> tuple[str, int]:
    return ("f", node) if node < m.num_faces else ("v", node - m.num_faces)


def node_index(m: MultiCurveMap, label: tuple[str, int]) -> int:
    kind, i = label
    return i if kind == "f" else m.num_faces + i


def coherent_order(m: MultiCurveMap, eta: Coorientation) -> list[tuple[int, int]]:
    """Covering pairs ``(smaller, larger)`` on faces (ids ``0..F-1``) and vertices (``F + v``)."""
    ok, _ = acyclicity(m, eta)
    if not ok:
        raise NotAcyclic("coherent order needs an acyclic coorientation")
    rel = set(face_order_relation(m, eta))
    nf = m.num_faces
    for v in range(m.num_vertices):
        kinds = [quarter_kind(m, eta, 4 * v + k) for k in range(4)]
        faces = m.vertex_faces(v)
        node = nf + v
        alternating = vertex_type(m, eta, v) == ALTERNATING
        sinks = {faces[k] for k in range(4) if kinds[k] == SINK}
        sources = {faces[k] for k in range(4) if kinds[k] == SOURCE}
        if sinks & sources:
            raise NotAcyclic(f"a face is both sink and source quadrant at vertex {v}")
        for k in range(4):
            f = faces[k]
            if alternating:
                below = kinds[k] == SINK
            else:
                below = kinds[k] != SOURCE
            rel.add((f, node) if below else (node, f))
    rel_list = sorted(rel)
    if find_directed_cycle(nf + m.num_vertices, rel_list) is not None:
        raise NotAcyclic("coherent order has a cycle")
    return rel_list


def linear_extensions(num_nodes: int, rel: Sequence[tuple[int, int]], limit: int | None = None) -> Iterator[list[int]]:
    """Linear extensions in lexicographic order of the node sequence."""
    preds = [0] * num_nodes
    succ: list[list[int]] = [[] for _ in range(num_nodes)]
    for a, b in set(rel):
        succ[a].append(b)
        preds[b] += 1
    avail = sorted(i for i in range(num_nodes) if preds[i] == 0)
    prefix: list[int] = []
    count = 0

    def rec(avail):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if len(prefix) == num_nodes:
            count += 1
            yield list(prefix)
            return
        for x in avail:
            nxt = [y for y in avail if y != x]
            for s in succ[x]:
                preds[s] -= 1
                if preds[s] == 0:
                    nxt.append(s)
            nxt.sort()
            prefix.append(x)
            yield from rec(nxt)
            prefix.pop()
            for s in succ[x]:
                preds[s] += 1
            if limit is not None and count >= limit:
                return

    yield from rec(avail)


def representations(m: MultiCurveMap, eta: Coorientation, limit: int | None = None) -> Iterator[list[tuple[str, int]]]:
    """Total orders on faces and vertices (lowest first) extending the coherent order."""
    rel = coherent_order(m, eta)
    n = m.num_faces + m.num_vertices
    for ext in linear_extensions(n, rel, limit):
        yield [node_label(m, x) for x in ext]


def partial_representations(m: MultiCurveMap, eta: Coorientation, limit: int | None = None) -> Iterator[list[int]]:
    ok, _ = acyclicity(m, eta)
    if not ok:
        raise NotAcyclic("partial representations need an acyclic coorientation")
    yield from linear_extensions(m.num_faces, face_order_relation(m, eta), limit)


def check_representation(m: MultiCurveMap, eta: Coorientation, rep: Sequence[tuple[str, int]]) -> None:
    from .errors import BadRepresentation

    n = m.num_faces + m.num_vertices
    idx = [node_index(m, tuple(x)) for x in rep]
    if sorted(idx) != list(range(n)):
        raise BadRepresentation("representation must list every face and vertex once")
    pos = {x: i for i, x in enumerate(idx)}
    for lo, hi in coherent_order(m, eta):
        if pos[lo] > pos[hi]:
            raise BadRepresentation(f"{node_label(m, hi)} must come after {node_label(m, lo)}")


def vertex_report(m: MultiCurveMap, eta: Coorientation) -> list[dict]:
    return [
        {
            "vertex": m.vertex_ids[v],
            "type": vertex_type(m, eta, v),
            "senses": list(vertex_senses(m, eta, v)),
        }
        for v in range(m.num_vertices)
    ]


__all__ = [
    "Coorientation",
    "ALTERNATING",
    "NON_ALTERNATING",
    "is_eulerian",
    "vertex_type",
    "enumerate_eulerian",
    "cohomology_eval",
    "is_acyclic",
    "acyclicity",
    "sink_faces",
    "flip",
    "flip_algorithm",
    "coherent_order",
    "representations",
    "rot_inv",
]
