"""First-return maps as words of negative Dehn twists and their action on homology.

Convention: ``<a, b>`` is the algebraic intersection on the section surface
(``b`` crossing ``a`` from right to left counts +1), and the negative twist
along ``c`` acts by ``x -> x - <c, x> c``.  Words are written from the highest
element of the representation to the lowest, and the lowest twist is applied
first, so the matrix of a word is the left-to-right product of its entries.
"""
from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import coorient as co
from .birkhoff_surface import SurfaceModel, build_skeleton, gamma_f, gamma_v, Curve
from .cohomology import class_of, cochain_equivalent, Cochain
from .errors import ClassEmpty, NotAcyclic, NotCohomologous
from .surface_map import MultiCurveMap

NEGATIVE = -1


# -- exact integer matrices ----------------------------------------------------

def as_matrix(rows) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in rows], dtype=object)


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.dot(a, b)


def det(a: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in row] for row in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def charpoly(a: np.ndarray) -> list[int]:
    """Coefficients of ``det(xI - A)``, leading first (Faddeev-LeVerrier, exact)."""
    n = a.shape[0]
    coeffs = [1]
    mk = identity(n)
    c = 1
    for k in range(1, n + 1):
        am = matmul(a, mk)
        tr = sum(int(am[i, i]) for i in range(n))
        num = -tr
        if num % k:
            raise ArithmeticError("non-integral characteristic polynomial step")
        c = num // k
        coeffs.append(c)
        mk = am + c * identity(n)
    return coeffs


def spectral_radius(a: np.ndarray) -> float:
    ev = np.linalg.eigvals(np.array(a, dtype=float))
    return float(max(abs(ev))) if len(ev) else 0.0


# -- words ---------------------------------------------------------------------

@dataclass(frozen=True)
class TwistEntry:
    label: tuple[str, int]
    curve: Curve
    sign: int = NEGATIVE

    def text(self, m: MultiCurveMap | None = None) -> str:
        kind, i = self.label
        if kind == "v":
            name = f"gamma_v(vertex {m.vertex_ids[i] if m else i})"
        else:
            name = f"gamma_f(face {i})"
        power = "-1" if self.sign < 0 else "1"
        return f"T^{power}[{name}]"


@dataclass
class TwistWord:
    entries: list[TwistEntry]
    model: SurfaceModel = field(repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> list[tuple[str, int]]:
        return [e.label for e in self.entries]

    def lines(self) -> list[str]:
        return [f"{k}: {e.text(self.model.map)}" for k, e in enumerate(self.entries)]


def pairing_matrix(model: SurfaceModel) -> np.ndarray:
    return as_matrix(model.pairing)


def twist_matrix(model: SurfaceModel, curve: Curve | Sequence[int], sign: int = NEGATIVE) -> np.ndarray:
    """Matrix of ``x -> x + sign * <c, x> c`` on chord coordinates."""
    c = np.array([int(x) for x in (curve.vector if isinstance(curve, Curve) else curve)], dtype=object)
    J = pairing_matrix(model)
    row = np.dot(c, J)  # row[j] = <c, e_j>
    n = len(c)
    return identity(n) + sign * np.outer(c, row)


def twist_matrix_from_class(J: np.ndarray, c: Sequence[int], sign: int = NEGATIVE) -> np.ndarray:
    c = np.array([int(x) for x in c], dtype=object)
    return identity(len(c)) + sign * np.outer(c, np.dot(c, J))


def curves_for(model: SurfaceModel) -> dict[tuple[str, int], Curve]:
    m = model.map
    out: dict[tuple[str, int], Curve] = {}
    for v in range(m.num_vertices):
        out[("v", v)] = gamma_v(model, v)
    for f in range(m.num_faces):
        out[("f", f)] = gamma_f(model, f, require_acyclic=False)
    return out


class Monodromy:
    """Cached section model and curves for one acyclic coorientation."""

    def __init__(self, m: MultiCurveMap, eta: co.Coorientation, routing: dict | None = None):
        ok, _ = co.acyclicity(m, eta)
        if not ok:
            raise NotAcyclic("the section is not a Birkhoff section for a cyclic coorientation")
        self.map = m
        self.eta = eta
        self.model = build_skeleton(m, eta, routing)
        self.curves = curves_for(self.model)
        self.J = pairing_matrix(self.model)
        self._twists: dict[tuple[str, int], np.ndarray] = {}

    def twist(self, label) -> np.ndarray:
        label = tuple(label)
        if label not in self._twists:
            self._twists[label] = twist_matrix_from_class(self.J, self.curves[label].vector)
        return self._twists[label]

    def word(self, representation: Sequence[tuple[str, int]]) -> TwistWord:
        co.check_representation(self.map, self.eta, representation)
        entries = [TwistEntry(tuple(x), self.curves[tuple(x)]) for x in reversed(list(representation))]
        return TwistWord(entries, self.model)

    def matrix_of_labels(self, labels: Iterable[tuple[str, int]]) -> np.ndarray:
        out = identity(len(self.J))
        for lab in labels:
            out = matmul(out, self.twist(lab))
        return out

    def matrix(self, representation: Sequence[tuple[str, int]]) -> np.ndarray:
        return self.matrix_of_labels(self.word(representation).labels)


def first_representation(m: MultiCurveMap, eta: co.Coorientation) -> list[tuple[str, int]]:
    return next(co.representations(m, eta, limit=1))


def twist_word(m: MultiCurveMap, eta: co.Coorientation, representation=None) -> TwistWord:
    rep = representation if representation is not None else first_representation(m, eta)
    return Monodromy(m, eta).word(rep)


def monodromy(m: MultiCurveMap, eta: co.Coorientation, representation=None) -> np.ndarray:
    rep = representation if representation is not None else first_representation(m, eta)
    return Monodromy(m, eta).matrix(rep)


def is_symplectic(M: np.ndarray, J: np.ndarray) -> bool:
    return bool((np.dot(np.dot(M.T, J), M) == J).all())


# -- commuting swaps -------------------------------------------------------------

def adjacent(m: MultiCurveMap, x: tuple[str, int], y: tuple[str, int]) -> bool:
    """Faces sharing an edge, or a face and one of its corners."""
    if x[0] == "v" and y[0] == "v":
        return False
    if x[0] == "f" and y[0] == "f":
        ex = set(m.face_edges(x[1]))
        return x[1] == y[1] or bool(ex & set(m.face_edges(y[1])))
    f, v = (x[1], y[1]) if x[0] == "f" else (y[1], x[1])
    return v in set(m.face_vertices(f))


def commuting_normalize(word: TwistWord) -> TwistWord:
    """Lexicographically least word reachable by swapping non-adjacent neighbours.

    Entries whose cells are adjacent keep their relative order; the result is
    the least topological order of that dependency relation.
    """
    m = word.model.map
    ents = word.entries
    n = len(ents)
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(m, ents[i].label, ents[j].label):
                succ[i].append(j)
                indeg[j] += 1

    key = lambda i: (ents[i].label[0], ents[i].label[1], i)
    heap = [key(i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        *_, i = heapq.heappop(heap)
        out.append(ents[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, key(j))
    return TwistWord(out, word.model)


# -- flips between cohomologous coorientations ------------------------------------

def representation_with_min(m: MultiCurveMap, eta: co.Coorientation, f: int) -> list[tuple[str, int]]:
    """Greedy representation with face ``f`` as its lowest element."""
    rel = co.coherent_order(m, eta)
    n = m.num_faces + m.num_vertices
    forced = rel + [(f, x) for x in range(n) if x != f]
    try:
        order = co.topological_order(n, forced)
    except NotAcyclic:
        raise NotAcyclic(f"face {f} cannot be the minimum of a representation") from None
    return [co.node_label(m, x) for x in order]


def representation_with_max(m: MultiCurveMap, eta: co.Coorientation, f: int) -> list[tuple[str, int]]:
    rel = co.coherent_order(m, eta)
    n = m.num_faces + m.num_vertices
    forced = rel + [(x, f) for x in range(n) if x != f]
    order = co.topological_order(n, forced)
    return [co.node_label(m, x) for x in order]


def flip_neighbours(m: MultiCurveMap, eta: co.Coorientation):
    for f in co.sink_faces(m, eta):
        yield f, co.flip(m, eta, f)


def flip_path(m: MultiCurveMap, eta: co.Coorientation, nu: co.Coorientation) -> list[int] | None:
    """Faces to flip, in order, to turn ``eta`` into ``nu`` (BFS, shortest)."""
    prev: dict[co.Coorientation, tuple[co.Coorientation, int] | None] = {eta: None}
    queue = deque([eta])
    while queue:
        cur = queue.popleft()
        if cur == nu:
            path = []
            while prev[cur] is not None:
                cur, f = prev[cur][0], prev[cur][1]
                path.append(f)
            return path[::-1]
        for f, nxt in flip_neighbours(m, cur):
            if nxt not in prev:
                prev[nxt] = (cur, f)
                queue.append(nxt)
    return None


@dataclass
class HurwitzStep:
    face: int
    moves: list[dict]
    product_preserved: bool
    charpoly_before: list[int]
    charpoly_after: list[int]


def hurwitz_move_trace(mono: Monodromy, rep: Sequence[tuple[str, int]]) -> tuple[list[dict], bool]:
    """Carry the lowest twist of the word to the front, conjugating each neighbour.

    Uses ``T_a T_f = T_f T_{T_f^{-1}(a)}`` on classes; every move is checked to
    keep the matrix product unchanged.
    """
    J = mono.J
    word = list(reversed(list(rep)))
    classes = [np.array(mono.curves[tuple(x)].vector, dtype=object) for x in word]
    mats = [twist_matrix_from_class(J, c) for c in classes]
    total = identity(len(J))
    for M in mats:
        total = matmul(total, M)
    cf = classes[-1]
    inv_f = twist_matrix_from_class(J, cf, sign=+1)  # inverse of the negative twist
    moves = []
    ok = True
    pos = len(word) - 1
    while pos > 0:
        a = classes[pos - 1]
        a2 = np.dot(inv_f, a)
        mats[pos - 1], mats[pos] = mats[pos], twist_matrix_from_class(J, a2)
        classes[pos - 1], classes[pos] = cf, a2
        prod = identity(len(J))
        for M in mats:
            prod = matmul(prod, M)
        same = bool((prod == total).all())
        ok &= same
        moves.append({"passed": list(word[pos - 1]), "product_preserved": same})
        word[pos - 1], word[pos] = word[pos], word[pos - 1]
        pos -= 1
    return moves, ok


def hurwitz_compare(m: MultiCurveMap, eta: co.Coorientation, nu: co.Coorientation) -> dict:
    for x in (eta, nu):
        if not co.is_acyclic(m, x):
            raise NotAcyclic("Hurwitz comparison needs acyclic coorientations")
    if not cochain_equivalent(m, class_of(m, eta), class_of(m, nu)):
        raise NotCohomologous("coorientations lie in different classes")
    path = flip_path(m, eta, nu)
    if path is None:
        raise NotCohomologous("no flip path found between cohomologous coorientations")
    steps = []
    cur = eta
    all_ok = True
    for f in path:
        mono = Monodromy(m, cur)
        rep = representation_with_min(m, cur, f)
        before = mono.matrix(rep)
        moves, ok = hurwitz_move_trace(mono, rep)
        nxt = co.flip(m, cur, f)
        mono2 = Monodromy(m, nxt)
        after = mono2.matrix(representation_with_max(m, nxt, f))
        steps.append(HurwitzStep(f, moves, ok, charpoly(before), charpoly(after)))
        all_ok &= ok
        cur = nxt
    p_eta = charpoly(monodromy(m, eta))
    p_nu = charpoly(monodromy(m, nu))
    return {
        "flip_path": path,
        "steps": steps,
        "moves_preserve_product": all_ok,
        "charpoly_eta": p_eta,
        "charpoly_nu": p_nu,
        "charpoly_equal": p_eta == p_nu,
        "stepwise_charpoly_equal": all(s.charpoly_before == s.charpoly_after for s in steps),
    }


# -- flip graph connectivity --------------------------------------------------------

def class_members(m: MultiCurveMap, omega: Cochain, pool: Sequence[co.Coorientation] | None = None) -> list[co.Coorientation]:
    pool = co.enumerate_eulerian(m) if pool is None else pool
    return [e for e in pool if cochain_equivalent(m, class_of(m, e), omega)]


def cycle_components(m: MultiCurveMap, eta: co.Coorientation) -> list[set[int]]:
    """Face sets of the nontrivial strongly connected parts of the oriented dual."""
    arcs = co.oriented_dual(m, eta)
    n = m.num_faces
    succ = [[] for _ in range(n)]
    pred = [[] for _ in range(n)]
    for a, b in arcs:
        succ[a].append(b)
        pred[b].append(a)

    def reach(start, nbr):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nbr[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    done: set[int] = set()
    comps = []
    for f in range(n):
        if f in done:
            continue
        scc = reach(f, succ) & reach(f, pred)
        done |= scc
        internal = any(a in scc and b in scc for a, b in arcs)
        if internal:
            comps.append(scc)
    return comps


def boundary_edges(m: MultiCurveMap, faces: set[int]) -> list[int]:
    dual = m.dual
    return [e for e in range(m.num_edges) if (dual.tail[e] in faces) != (dual.head[e] in faces)]


def flip_components(m: MultiCurveMap, members: Sequence[co.Coorientation]) -> list[list[co.Coorientation]]:
    """Connected components of the flip graph on ``members`` (flips taken both ways)."""
    index = {e: i for i, e in enumerate(members)}
    adj = [set() for _ in members]
    for i, e in enumerate(members):
        for _, nxt in flip_neighbours(m, e):
            j = index.get(nxt)
            if j is not None:
                adj[i].add(j)
                adj[j].add(i)
    comp = [-1] * len(members)
    out = []
    for s in range(len(members)):
        if comp[s] != -1:
            continue
        comp[s] = len(out)
        group = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if comp[y] == -1:
                    comp[y] = comp[s]
                    group.append(y)
                    stack.append(y)
        out.append([members[i] for i in sorted(group)])
    return out


def _obstruction(m: MultiCurveMap, component: list[co.Coorientation], members_set, comp_of):
    """Cohomologous pair in different components, built by reversing an inward cycle region."""
    for eta in component:
        regions = cycle_components(m, eta)
        if len(regions) < 2:
            return None
        arcs = co.oriented_dual(m, eta)
        for region in regions:
            edges = boundary_edges(m, region)
            inward = all(arcs[e][1] in region for e in edges)
            if not inward:
                continue
            nu = eta.flipped(edges)
            if co.is_eulerian(m, nu) and nu in members_set and comp_of[nu] != comp_of[eta]:
                return eta, nu, sorted(region)
    return None


def flip_connectivity(m: MultiCurveMap, omega: Cochain, pool: Sequence[co.Coorientation] | None = None) -> dict:
    members = class_members(m, omega, pool)
    if not members:
        raise ClassEmpty("no Eulerian coorientation in this class")
    acyclic = [e for e in members if co.is_acyclic(m, e)]
    cyclic = [e for e in members if not co.is_acyclic(m, e)]
    report: dict = {"members": len(members), "acyclic": len(acyclic), "cyclic": len(cyclic)}
    if acyclic:
        comps = flip_components(m, acyclic)
        report["acyclic_components"] = len(comps)
    if cyclic:
        comps = flip_components(m, cyclic)
        comp_of = {e: i for i, c in enumerate(comps) for e in c}
        report["cyclic_components"] = len(comps)
        connected_u = [len(cycle_components(m, c[0])) == 1 for c in comps]
        report["cycle_union_connected"] = connected_u
        obstruction = None
        for c in comps:
            obstruction = _obstruction(m, c, set(cyclic), comp_of)
            if obstruction:
                break
        if obstruction:
            eta, nu, region = obstruction
            report["obstruction"] = {"eta": list(eta.bits), "nu": list(nu.bits), "region": region}
        else:
            report["obstruction"] = None
    return report


# -- common model for a whole fibered face ---------------------------------------

def _slot_candidates(choices: list[int], defaults: list[int], limit: int):
    """Slot vectors ordered by how many vertices leave their default slot."""
    n = len(choices)

    emitted = 0
    for moved in range(n + 1):
        for subset in itertools.combinations(range(n), moved):
            ranges = [
                [s for s in range(choices[i] + 1) if s != defaults[i]] if i in subset else [defaults[i]]
                for i in range(n)
            ]
            for combo in itertools.product(*ranges):
                yield list(combo)
                emitted += 1
                if emitted >= limit:
                    return


def _fast_product(mats64: dict, labels) -> np.ndarray:
    out = None
    for lab in labels:
        out = mats64[lab] if out is None else out @ mats64[lab]
    return out


def common_model_word(
    m: MultiCurveMap,
    eta_ref: co.Coorientation,
    nu: co.Coorientation,
    representation: Sequence[tuple[str, int]] | None = None,
    limit: int = 100000,
) -> dict:
    """Order the reference curves so their product matches the return map of ``nu``.

    Faces keep the order of a representation of ``nu``; each crossing ``v`` is
    re-slotted among its adjacent faces (the per-vertex comparison), trying
    slot vectors by increasing number of moved crossings.  A candidate is
    accepted when its characteristic polynomial equals that of the monodromy
    of ``nu``.
    """
    ref = Monodromy(m, eta_ref)
    target_mono = Monodromy(m, nu)
    rep = list(representation) if representation is not None else first_representation(m, nu)
    target = charpoly(target_mono.matrix(rep))
    pos = {tuple(x): i for i, x in enumerate(rep)}
    faces = [x for x in rep if x[0] == "f"]
    face_rank = {x[1]: i for i, x in enumerate(faces)}
    verts = list(range(m.num_vertices))
    adj_faces = []
    defaults = []
    for v in verts:
        fs = sorted(set(m.vertex_faces(v)), key=lambda f: face_rank[f])
        adj_faces.append(fs)
        defaults.append(sum(pos[("f", f)] < pos[("v", v)] for f in fs))

    def order_for(slots):
        # vertex v sits just above the slots[v]-th adjacent face (or below all of them)
        keyed = []
        for f in faces:
            keyed.append(((face_rank[f[1]], 1, 0), f))
        for v in verts:
            fs = adj_faces[v]
            k = slots[v]
            if k == 0:
                key = (face_rank[fs[0]], 0, pos[("v", v)])
            else:
                key = (face_rank[fs[k - 1]], 2, pos[("v", v)])
            keyed.append((key, ("v", v)))
        keyed.sort()
        return [lab for _, lab in keyed]

    mats64 = {lab: np.array(ref.twist(lab), dtype=np.int64) for lab in ref.curves}
    # cheap filter on tr(M) and tr(M^2), read off the target polynomial
    t1 = -target[1]
    t2 = target[1] ** 2 - 2 * target[2]
    tried = 0
    for slots in _slot_candidates([len(f) for f in adj_faces], defaults, limit):
        tried += 1
        sigma = order_for(slots)
        word_labels = list(reversed(sigma))
        fast = _fast_product(mats64, word_labels)
        if int(np.trace(fast)) != t1 or int(np.einsum("ij,ji->", fast, fast)) != t2:
            continue
        exact = ref.matrix_of_labels(word_labels)
        if charpoly(exact) != target:
            continue
        entries = [TwistEntry(lab, ref.curves[lab]) for lab in word_labels]
        cases = [
            {"vertex": m.vertex_ids[v], "faces_below": slots[v], "moved": slots[v] != defaults[v]}
            for v in verts
        ]
        return {
            "found": True,
            "word": TwistWord(entries, ref.model),
            "sigma": sigma,
            "cases": cases,
            "charpoly": target,
            "tried": tried,
        }
    return {"found": False, "word": None, "sigma": None, "cases": None, "charpoly": target, "tried": tried}
