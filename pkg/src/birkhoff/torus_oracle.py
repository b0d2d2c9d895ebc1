"""Straight-line flow on a flat torus cut by horizontal and vertical circles.

Everything is exact: coordinates, directions and times are ``Fraction``s.  A
trajectory crossing an edge meets the section surface exactly when its
velocity lies strictly on the side the coorientation points to.
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import coorient as co
from .errors import DuplicateCoordinate, StartOnGamma
from .surface_map import MultiCurveMap, grid_map

DART_DIRECTIONS = ((1, 0), (0, 1), (-1, 0), (0, -1))  # east, north, west, south

F = Fraction


@dataclass(frozen=True)
class TrajectoryEvent:
    time: Fraction
    edge: int
    hit: bool
    point: tuple[Fraction, Fraction]


@dataclass
class FlatMultiCurve:
    p: int
    q: int
    heights: tuple[Fraction, ...]
    abscissas: tuple[Fraction, ...]
    map: MultiCurveMap = field(repr=False)

    def h_edge(self, i: int, j: int) -> int:
        """Edge on horizontal circle ``i`` between vertical circles ``j`` and ``j + 1``."""
        return i * self.q + j

    def v_edge(self, i: int, j: int) -> int:
        return self.p * self.q + i * self.q + j

    def cell_face(self, i: int, j: int) -> int:
        """Face of the rectangle above circle ``i`` and right of circle ``j``."""
        return self.map.face_of_sector[4 * (i * self.q + j)]

    def widths(self) -> list[Fraction]:
        xs = self.abscissas
        return [(xs[(j + 1) % self.q] - xs[j]) % 1 or F(1) for j in range(self.q)]

    def gaps(self) -> list[Fraction]:
        ys = self.heights
        return [(ys[(i + 1) % self.p] - ys[i]) % 1 or F(1) for i in range(self.p)]

    def max_diameter_sq(self) -> Fraction:
        """Square of the largest face diagonal."""
        return max(w * w for w in self.widths()) + max(h * h for h in self.gaps())

    def normal(self, eta: co.Coorientation, e: int) -> tuple[int, int]:
        """Unit normal of edge ``e`` on the side the coorientation points to."""
        a = self.map.edges[e][0]
        ux, uy = DART_DIRECTIONS[a % 4]
        left = (-uy, ux)
        return left if eta.bits[e] else (-left[0], -left[1])

    def column(self, x: Fraction) -> int | None:
        k = bisect.bisect_left(self.abscissas, x)
        if k < self.q and self.abscissas[k] == x:
            return None
        return (k - 1) % self.q

    def row(self, y: Fraction) -> int | None:
        k = bisect.bisect_left(self.heights, y)
        if k < self.p and self.heights[k] == y:
            return None
        return (k - 1) % self.p

    def on_gamma(self, point) -> bool:
        x, y = point
        return x % 1 in self.abscissas or y % 1 in self.heights


def embed_grid(p: int, q: int, heights: Sequence | None = None, abscissas: Sequence | None = None) -> FlatMultiCurve:
    if p < 1 or q < 1:
        raise ValueError("need at least one circle in each direction")
    ys = [F(y) % 1 for y in heights] if heights is not None else [F(2 * i + 1, 2 * p) for i in range(p)]
    xs = [F(x) % 1 for x in abscissas] if abscissas is not None else [F(2 * j + 1, 2 * q) for j in range(q)]
    if len(ys) != p or len(xs) != q:
        raise ValueError("coordinate count does not match the grid size")
    if len(set(ys)) != p or len(set(xs)) != q:
        raise DuplicateCoordinate("two circles share a coordinate")
    return FlatMultiCurve(p, q, tuple(sorted(ys)), tuple(sorted(xs)), grid_map(p, q, f"T{p * q}" if p * q in (1, 6) else None))


def rational_direction(s: Fraction) -> tuple[Fraction, Fraction]:
    """Unit vector on the rational parametrisation of the circle."""
    s = F(s)
    d = 1 + s * s
    return (1 - s * s) / d, 2 * s / d


def _next_line(lines: Sequence[Fraction], pos: Fraction, speed: Fraction) -> Fraction | None:
    """Distance travelled (along one coordinate) to the next line strictly ahead."""
    if speed == 0:
        return None
    if speed > 0:
        k = bisect.bisect_right(lines, pos)
        target = lines[k] if k < len(lines) else lines[0] + 1
        return (target - pos) / speed
    k = bisect.bisect_left(lines, pos) - 1
    target = lines[k] if k >= 0 else lines[-1] - 1
    return (target - pos) / speed


class VertexHit(Exception):
    """The trajectory runs through a crossing; excluded as non-generic."""


def events(
    model: FlatMultiCurve,
    eta: co.Coorientation,
    start,
    direction,
    horizon: Fraction,
    include_start: bool = False,
) -> Iterator[TrajectoryEvent]:
    """Edge crossings in time order up to ``horizon`` (inclusive)."""
    x, y = F(start[0]) % 1, F(start[1]) % 1
    ux, uy = F(direction[0]), F(direction[1])
    t = F(0)
    if include_start:
        ev = _event_at(model, eta, x, y, ux, uy, t)
        if ev is not None:
            yield ev
    while True:
        dx = _next_line(model.abscissas, x, ux)
        dy = _next_line(model.heights, y, uy)
        if dx is None and dy is None:
            return
        if dx is not None and dy is not None and dx == dy:
            step = dx
        else:
            step = min(d for d in (dx, dy) if d is not None)
        t += step
        if t > horizon:
            return
        x = (x + step * ux) % 1
        y = (y + step * uy) % 1
        ev = _event_at(model, eta, x, y, ux, uy, t)
        if ev is not None:
            yield ev


def _event_at(model, eta, x, y, ux, uy, t):
    on_v = x in model.abscissas
    on_h = y in model.heights
    if on_v and on_h:
        raise VertexHit(f"trajectory meets a crossing at time {t}")
    if on_h:
        i = model.heights.index(y)
        e = model.h_edge(i, model.column(x))
    elif on_v:
        j = model.abscissas.index(x)
        e = model.v_edge(model.row(y), j)
    else:
        return None
    nx, ny = model.normal(eta, e)
    return TrajectoryEvent(t, e, nx * ux + ny * uy > 0, (x, y))


NO_RETURN = None


def first_return_time(
    model: FlatMultiCurve,
    eta: co.Coorientation,
    start,
    direction,
    horizon: Fraction | int = 100,
) -> Fraction | None:
    """First positive time the trajectory meets the section, or ``None`` within the horizon."""
    if model.on_gamma(start):
        raise StartOnGamma("start point lies on the multi-curve")
    return _first_hit(model, eta, start, direction, F(horizon))


def _first_hit(model, eta, start, direction, horizon, include_start=False):
    for ev in events(model, eta, start, direction, horizon, include_start):
        if ev.hit:
            return ev.time
    return None


def _blocked(model: FlatMultiCurve, eta: co.Coorientation, sx: int, sy: int):
    """Hit masks per circle for velocities in the open quadrant ``(sx, sy)``."""
    h = np.zeros((model.p, model.q), dtype=bool)
    v = np.zeros((model.q, model.p), dtype=bool)
    for i in range(model.p):
        for j in range(model.q):
            nx, ny = model.normal(eta, model.h_edge(i, j))
            h[i, j] = nx * sx + ny * sy > 0
            nx, ny = model.normal(eta, model.v_edge(i, j))
            v[j, i] = nx * sx + ny * sy > 0
    return h, v


def _family(cross_marks, other_marks, p0, o0, a, b, den, hmax, mask):
    """Candidates ``(numerator, denominator, kind)`` of rescaled times for one family.

    Everything is an integer over ``den``; the velocity is ``(a, b)`` with ``b``
    the component across the circles and time rescaled so it is integral.
    Crossing ``k`` of circle ``i`` happens at ``(d_i + k * den) / (den * |b|)``
    where the other coordinate has numerator ``o0 * |b| + a * (d_i + k * den)``
    modulo ``den * |b|``.
    """
    if b == 0:
        return []
    bb = abs(b)
    mod = den * bb
    d = np.array([((c - p0) if b > 0 else (p0 - c)) % den or den for c in cross_marks], dtype=object)
    # last admissible k per circle: d + k * den <= hmax
    kmax = [(hmax - int(di)) // den for di in d]
    top = max(kmax)
    if top < 0:
        return []
    if mod * (abs(a) + 1) * (top + 2) > 2 ** 62:
        return None
    ks = np.arange(top + 1, dtype=np.int64)
    dd = np.array([int(x) for x in d], dtype=np.int64)[:, None]
    pos = (o0 * bb + a * (dd + ks[None, :] * den)) % mod
    marks = np.array(other_marks, dtype=np.int64) * bb
    idx = np.searchsorted(marks, pos, side="left")
    exact = (idx < len(marks)) & (marks[np.minimum(idx, len(marks) - 1)] == pos)
    col = (idx - 1) % len(marks)
    valid = ks[None, :] <= np.array(kmax, dtype=np.int64)[:, None]
    hit = mask[np.arange(len(cross_marks))[:, None], col] & ~exact & valid
    exact &= valid
    out = []
    for kind, m in (("hit", hit), ("vertex", exact)):
        rows, cols = np.nonzero(m)
        if len(rows):
            times = dd[rows, 0] + cols * den
            k = int(np.argmin(times))
            out.append((int(times[k]), mod, kind))
    return out


def first_hit_fast(model: FlatMultiCurve, eta: co.Coorientation, start, direction, horizon) -> Fraction | None:
    """Same answer as walking the events one by one, computed circle by circle in integers."""
    x0, y0 = F(start[0]) % 1, F(start[1]) % 1
    ux, uy = F(direction[0]), F(direction[1])
    c = math.lcm(ux.denominator, uy.denominator)
    a, b = int(ux * c), int(uy * c)
    den = math.lcm(x0.denominator, y0.denominator, *(z.denominator for z in model.heights + model.abscissas))
    X0, Y0 = int(x0 * den), int(y0 * den)
    hs = [int(z * den) for z in model.heights]
    xs = [int(z * den) for z in model.abscissas]
    key = (eta.bits, (a > 0) - (a < 0), (b > 0) - (b < 0))
    cache = model.__dict__.setdefault("_mask_cache", {})
    if key not in cache:
        cache[key] = _blocked(model, eta, key[1], key[2])
    hmask, vmask = cache[key]
    cands = []
    # rescaled time tau = t / c; the bound below is d + k * den <= horizon * den * |b| / c
    for cross, other, p0, o0, across, along, mask in (
        (hs, xs, Y0, X0, b, a, hmask),
        (xs, hs, X0, Y0, a, b, vmask),
    ):
        if across == 0:
            continue
        hmax = math.floor(F(horizon) * den * abs(across) / c)
        got = _family(cross, other, p0, o0, along, across, den, hmax, mask)
        if got is None:
            return _first_hit(model, eta, start, direction, horizon)
        cands.extend((F(num, mod) * c, kind) for num, mod, kind in got)
    if not cands:
        return None
    t, kind = min(cands, key=lambda z: (z[0], z[1] == "hit"))
    if kind == "vertex":
        raise VertexHit(f"trajectory meets a crossing at time {t}")
    return t


def random_start(rng: random.Random, model: FlatMultiCurve, denom: int = 997) -> tuple[Fraction, Fraction]:
    while True:
        pt = (F(rng.randrange(denom), denom), F(rng.randrange(denom), denom))
        if not model.on_gamma(pt):
            return pt


def random_direction(rng: random.Random, denom: int = 101) -> tuple[Fraction, Fraction]:
    # s in (-1, 1] covers half the circle; the sign flip covers the rest
    s = F(rng.randrange(-denom + 1, denom + 1), denom)
    u = rational_direction(s)
    return u if rng.random() < 0.5 else (-u[0], -u[1])


def cycle_displacement(model: FlatMultiCurve, walk) -> tuple[int, int]:
    """Homology class of a closed dual walk as an integer vector on the torus."""
    dx = dy = 0
    for e, direction in walk:
        a = model.map.edges[e][0]
        # crossing the first dart from right to left moves along its left normal
        ux, uy = DART_DIRECTIONS[a % 4]
        lx, ly = -uy, ux
        sx, sy = direction * lx, direction * ly
        if e >= model.p * model.q:
            # vertical edge of row i: wrapping happens across the seam x = 0
            j = (e - model.p * model.q) % model.q
            if (sx > 0 and j == model.q - 1) or (sx < 0 and j == 0):
                dx += sx
        else:
            i = e // model.q
            if (sy > 0 and i == model.p - 1) or (sy < 0 and i == 0):
                dy += sy
    return dx, dy


def escape_witness(model: FlatMultiCurve, eta: co.Coorientation, walk=None, grid: int = 8):
    """A periodic trajectory that never meets the section, guided by a directed dual cycle.

    The direction is opposite to the cycle's homology class.  A rational
    direction with integer displacement closes up after unit time, so an empty
    hit list over one period proves the orbit never returns.
    """
    if walk is None:
        ok, walk = co.acyclicity(model.map, eta)
        if ok:
            return None
    dx, dy = cycle_displacement(model, walk)
    if (dx, dy) == (0, 0):
        return None
    w = (F(-dx), F(-dy))
    cands = []
    for a in range(grid):
        for b in range(grid):
            cands.append((F(2 * a + 1, 2 * grid), F(2 * b + 1, 2 * grid)))
    for pt in cands:
        if model.on_gamma(pt):
            continue
        try:
            if _first_hit(model, eta, pt, w, F(1)) is None:
                return {"start": pt, "direction": w, "period": F(1)}
        except VertexHit:
            continue
    return None


@dataclass
class BirkhoffVerdict:
    bounded: bool
    max_time: Fraction | None
    bound_sq: Fraction
    within_bound: bool
    samples: int
    skipped: int
    escapes: int
    witness: dict | None
    histogram: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        w = None
        if self.witness:
            w = {
                "start": [str(c) for c in self.witness["start"]],
                "direction": [str(c) for c in self.witness["direction"]],
                "note": "periodic orbit with no return (no return within horizon)",
            }
        return {
            "bounded": self.bounded,
            "max_return_time": float(self.max_time) if self.max_time is not None else None,
            "bound": float(self.bound_sq) ** 0.5,
            "within_bound": self.within_bound,
            "samples": self.samples,
            "skipped": self.skipped,
            "no_return_within_horizon": self.escapes,
            "histogram": dict(sorted(self.histogram.items(), key=lambda kv: float(kv[0]))),
            "witness": w,
        }


def verify_birkhoff(
    model: FlatMultiCurve,
    eta: co.Coorientation,
    samples: int = 1000,
    horizon: Fraction | int = 100,
    seed: int = 0,
) -> BirkhoffVerdict:
    """Sample first hitting times; for cyclic coorientations also look for an escaping orbit."""
    rng = random.Random(seed)
    n = model.map.num_faces
    bound_sq = n * n * model.max_diameter_sq()
    times = []
    skipped = escapes = 0
    for _ in range(samples):
        start = random_start(rng, model)
        u = random_direction(rng)
        try:
            t = first_hit_fast(model, eta, start, u, F(horizon))
        except VertexHit:
            skipped += 1
            continue
        if t is None:
            escapes += 1
        else:
            times.append(t)
    witness = None
    if not co.is_acyclic(model.map, eta):
        witness = escape_witness(model, eta)
    max_t = max(times) if times else None
    bounded = witness is None and escapes == 0
    within = max_t is None or max_t * max_t <= bound_sq
    hist: dict[str, int] = {}
    for t in times:
        key = str(int(t * 10) / 10)
        hist[key] = hist.get(key, 0) + 1
    return BirkhoffVerdict(bounded, max_t, bound_sq, within, samples, skipped, escapes, witness, hist)


def _point_on_edge(rng: random.Random, model: FlatMultiCurve, e: int, denom: int = 997):
    pq = model.p * model.q
    while True:
        r = F(rng.randrange(1, denom), denom)
        if e < pq:
            i, j = divmod(e, model.q)
            x = (model.abscissas[j] + r * model.widths()[j]) % 1
            pt = (x, model.heights[i])
        else:
            i, j = divmod(e - pq, model.q)
            y = (model.heights[i] + r * model.gaps()[i]) % 1
            pt = (model.abscissas[j], y)
        if pt[0] not in model.abscissas or pt[1] not in model.heights:
            return pt


@dataclass
class FactorizationVerdict:
    ok: bool
    samples: int
    skipped: int
    failures: list
    max_time: Fraction | None


def factorization_times(model, sections, start, u, horizon):
    """Hitting times ``s_0 = 0 <= ... <= s_n`` along consecutive sections, and the first return.

    Reads the events once and stops as soon as both are known.  A time is
    ``None`` when the horizon runs out first.
    """
    eta = sections[0]
    s = [F(0)]
    ret = None
    for ev in events(model, eta, start, u, F(horizon), include_start=True):
        while len(s) < len(sections):
            nx, ny = model.normal(sections[len(s)], ev.edge)
            if nx * u[0] + ny * u[1] <= 0:
                break
            s.append(ev.time)
        if ret is None and ev.time > 0 and ev.hit:
            ret = ev.time
        if ret is not None and len(s) == len(sections):
            return s, ret
    return (s if len(s) == len(sections) else None), ret


def verify_factorization(
    model: FlatMultiCurve,
    eta: co.Coorientation,
    partial_representation: Sequence[int],
    samples: int = 1000,
    seed: int = 0,
    horizon: Fraction | int = 100,
) -> FactorizationVerdict:
    """Check the return map splits into successive partial returns along the flip sequence."""
    seq = co.flip_algorithm(model.map, eta, partial_representation)
    rng = random.Random(seed)
    failures = []
    skipped = 0
    max_t = None
    done = 0
    edges = list(range(model.map.num_edges))
    while done < samples:
        e = rng.choice(edges)
        start = _point_on_edge(rng, model, e)
        u = random_direction(rng)
        nx, ny = model.normal(eta, e)
        if nx * u[0] + ny * u[1] <= 0:
            u = (-u[0], -u[1])
        if nx * u[0] + ny * u[1] == 0:
            continue
        done += 1
        try:
            s, ret = factorization_times(model, seq, start, u, horizon)
        except VertexHit:
            skipped += 1
            continue
        if s is None or ret is None:
            failures.append({"start": start, "direction": u, "reason": "no hit within horizon"})
            continue
        monotone = all(a <= b for a, b in zip(s, s[1:]))
        if not monotone or s[-1] != ret:
            failures.append({"start": start, "direction": u, "times": s, "return": ret})
        max_t = ret if max_t is None or ret > max_t else max_t
    return FactorizationVerdict(not failures, samples, skipped, failures, max_t)


def grid_dual_cycle(model: FlatMultiCurve, kind: str, index: int = 0) -> list[tuple[int, int]]:
    """Dual walk going east through row ``index`` (``horizontal``) or north through column ``index``."""
    m = model.map
    dual = m.dual
    steps = []
    if kind == "horizontal":
        edges = [model.v_edge(index, j) for j in range(1, model.q)] + [model.v_edge(index, 0)]
        face = model.cell_face(index, 0)
    else:
        edges = [model.h_edge(i, index) for i in range(1, model.p)] + [model.h_edge(0, index)]
        face = model.cell_face(0, index)
    for e in edges:
        if dual.tail[e] == face:
            steps.append((e, 1))
            face = dual.head[e]
        else:
            steps.append((e, -1))
            face = dual.tail[e]
    return steps


def class_coordinates(model: FlatMultiCurve, eta: co.Coorientation) -> tuple[int, int]:
    m = model.map
    return (
        co.cohomology_eval(m, eta, grid_dual_cycle(model, "horizontal")),
        co.cohomology_eval(m, eta, grid_dual_cycle(model, "vertical")),
    )
