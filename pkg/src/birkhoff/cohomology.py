"""Integer cohomology classes on the dual graph and height functions.

A cochain is one integer per edge of the multi-curve, read along the dual
edge's reference direction (right face to left face of the edge's first
dart).  Deciding whether a class contains an Eulerian coorientation is a
system of difference constraints on the faces; we solve it with Bellman-Ford
and read a violating dual cycle off any negative cycle.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .coorient import Coorientation, check_closed_walk, check_eulerian
from .errors import NotACocycle, ParityMismatch
from .surface_map import MultiCurveMap


@dataclass(frozen=True)
class Cochain:
    weights: tuple[int, ...]

    @classmethod
    def of(cls, weights: Sequence[int]) -> "Cochain":
        return cls(tuple(int(w) for w in weights))

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(tuple(a + b for a, b in zip(self.weights, other.weights)))

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(tuple(a - b for a, b in zip(self.weights, other.weights)))

    def scaled(self, k: int) -> "Cochain":
        return Cochain(tuple(k * w for w in self.weights))

    def evaluate(self, m: MultiCurveMap, cycle) -> int:
        check_closed_walk(m, cycle)
        return sum(direction * self.weights[e] for e, direction in cycle)


@dataclass(frozen=True)
class HeightFunction:
    values: tuple[int, ...]
    base: int = 0


@dataclass(frozen=True)
class Certificate:
    """A dual cycle crossing the multi-curve fewer times than the class demands."""

    cycle: tuple[tuple[int, int], ...]
    faces: tuple[int, ...]
    length: int
    omega: int

    def to_dict(self) -> dict:
        return {
            "cycle": list(self.faces),
            "steps": [list(s) for s in self.cycle],
            "length": self.length,
            "omega": self.omega,
        }


def coboundary(m: MultiCurveMap, potential: Sequence[int]) -> Cochain:
    dual = m.dual
    return Cochain(tuple(potential[dual.head[e]] - potential[dual.tail[e]] for e in range(m.num_edges)))


def is_cocycle(m: MultiCurveMap, c: Cochain) -> bool:
    """Closed iff the small loop around every crossing evaluates to zero."""
    for v in range(m.num_vertices):
        if sum(c.weights[e] * s for e, s in vertex_loop(m, v)) != 0:
            return False
    return True


def vertex_loop(m: MultiCurveMap, v: int) -> list[tuple[int, int]]:
    """Dual walk going once counterclockwise around crossing ``v``."""
    out = []
    for k in range(4):
        d = 4 * v + k
        e = m.edge_of[d]
        # crossing d counterclockwise moves from its right face to its left face
        out.append((e, 1 if m.edges[e][0] == d else -1))
    return out


def class_of(m: MultiCurveMap, eta: Coorientation) -> Cochain:
    check_eulerian(m, eta)
    return Cochain(tuple(eta.weight(e) for e in range(m.num_edges)))


def strand_cochain(m: MultiCurveMap, s: int) -> Cochain:
    """Intersection with strand ``s`` (crossing it from right to left counts +1)."""
    w = [0] * m.num_edges
    for d in m.strand_darts[s]:
        e = m.edge_of[d]
        w[e] += 1 if m.edges[e][0] == d else -1
    return Cochain(tuple(w))


def _potential(m: MultiCurveMap, diff: Cochain) -> list[int] | None:
    """Face potential ``h`` with ``coboundary(h) == diff``, or ``None``."""
    dual = m.dual
    h: list[int | None] = [None] * m.num_faces
    h[0] = 0
    queue = deque([0])
    inc = [[] for _ in range(m.num_faces)]
    for e in range(m.num_edges):
        inc[dual.tail[e]].append(e)
        inc[dual.head[e]].append(e)
    while queue:
        f = queue.popleft()
        for e in inc[f]:
            t, hd = dual.tail[e], dual.head[e]
            if t == f and h[hd] is None:
                h[hd] = h[f] + diff.weights[e]
                queue.append(hd)
            elif hd == f and h[t] is None:
                h[t] = h[f] - diff.weights[e]
                queue.append(t)
    for e in range(m.num_edges):
        if h[dual.head[e]] - h[dual.tail[e]] != diff.weights[e]:
            return None
    return h  # type: ignore[return-value]


def cochain_equivalent(m: MultiCurveMap, c1: Cochain, c2: Cochain) -> bool:
    return _potential(m, c1 - c2) is not None


def _parity_potential(m: MultiCurveMap, omega: Cochain) -> list[int]:
    """``p`` mod 2 making every weight of ``omega + coboundary(p)`` odd."""
    dual = m.dual
    p: list[int | None] = [None] * m.num_faces
    p[0] = 0
    inc = [[] for _ in range(m.num_faces)]
    for e in range(m.num_edges):
        inc[dual.tail[e]].append(e)
        inc[dual.head[e]].append(e)
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for e in inc[f]:
            other = dual.head[e] if dual.tail[e] == f else dual.tail[e]
            want = (p[f] + 1 + omega.weights[e]) % 2
            if p[other] is None:
                p[other] = want
                queue.append(other)
    for e in range(m.num_edges):
        if (p[dual.tail[e]] + p[dual.head[e]] + omega.weights[e]) % 2 != 1:
            raise ParityMismatch("class does not have the parity of the multi-curve")
    return p  # type: ignore[return-value]


def _arcs(m: MultiCurveMap, odd: Cochain):
    """Difference constraints ``k[b] - k[a] <= c`` as ``(a, b, c, edge, direction)``."""
    dual = m.dual
    arcs = []
    for e in range(m.num_edges):
        w = odd.weights[e]
        t, h = dual.tail[e], dual.head[e]
        arcs.append((t, h, (w + 1) // 2, e, 1))
        arcs.append((h, t, (1 - w) // 2, e, -1))
    return arcs


def _bellman_ford(n: int, arcs, source: int):
    """Shortest distances or a negative cycle (list of arc indices)."""
    inf = None
    dist: list[int | None] = [inf] * n
    pred = [-1] * n
    dist[source] = 0
    last = -1
    for _ in range(n):
        last = -1
        for i, (a, b, c, _, _) in enumerate(arcs):
            if dist[a] is not None and (dist[b] is None or dist[a] + c < dist[b]):
                dist[b] = dist[a] + c
                pred[b] = i
                last = b
        if last == -1:
            return dist, None
    # a relaxation in round n: walk back n steps to land on the cycle
    x = last
    for _ in range(n):
        x = arcs[pred[x]][0]
    cyc = []
    y = x
    while True:
        cyc.append(pred[y])
        y = arcs[pred[y]][0]
        if y == x:
            break
    return dist, cyc[::-1]


def solve_heights(m: MultiCurveMap, omega: Cochain, f0: int = 0):
    """``(height, None)`` on success, ``(None, certificate)`` otherwise."""
    if len(omega.weights) != m.num_edges:
        raise NotACocycle("cochain needs one weight per edge")
    if not is_cocycle(m, omega):
        raise NotACocycle("cochain does not vanish around every crossing")
    p = _parity_potential(m, omega)
    p = [(x - p[f0]) % 2 for x in p]
    odd = omega + coboundary(m, p)
    arcs = _arcs(m, odd)
    dist, cyc = _bellman_ford(m.num_faces, arcs, f0)
    if cyc is not None:
        # negative cycle c: |c| + odd(c) < 0, so its reverse carries more class than crossings
        steps = tuple((arcs[i][3], -arcs[i][4]) for i in reversed(cyc))
        faces = tuple(check_closed_walk(m, steps))
        value = omega.evaluate(m, steps)
        return None, Certificate(steps, faces, len(steps), value)
    heights = tuple(2 * dist[f] - p[f] for f in range(m.num_faces))
    return HeightFunction(heights, f0), None


def height_of(m: MultiCurveMap, omega: Cochain, f0: int = 0) -> HeightFunction | Certificate:
    h, cert = solve_heights(m, omega, f0)
    return h if h is not None else cert


def coorientation_from_height(m: MultiCurveMap, omega: Cochain, h: HeightFunction) -> Coorientation:
    g = coboundary(m, h.values)
    bits = []
    for e in range(m.num_edges):
        w = omega.weights[e] - g.weights[e]
        if w not in (1, -1):
            raise ValueError(f"height jump on edge {e} is not compatible with the class")
        bits.append(1 if w == 1 else 0)
    return Coorientation(tuple(bits))


def construct_coorientation(m: MultiCurveMap, omega: Cochain, f0: int = 0) -> Coorientation | Certificate:
    """An Eulerian coorientation in the class of ``omega`` or a certificate of nonexistence."""
    h, cert = solve_heights(m, omega, f0)
    if h is None:
        return cert
    return coorientation_from_height(m, omega, h)


def is_height(m: MultiCurveMap, omega: Cochain, h: Sequence[int]) -> bool:
    g = coboundary(m, h)
    return all(abs(omega.weights[e] - g.weights[e]) == 1 for e in range(m.num_edges))


def load_cochain(data: dict) -> Cochain:
    return Cochain.of(data["weights"])
