import random

import pytest

from birkhoff import coorient as co
from birkhoff.cohomology import (
    Cochain,
    class_of,
    coboundary,
    cochain_equivalent,
    construct_coorientation,
    is_cocycle,
    is_height,
    solve_heights,
    strand_cochain,
    vertex_loop,
)
from birkhoff.errors import NotACocycle, ParityMismatch

from conftest import bundled, eulerian


def realizable_by_enumeration(m, omega, pool):
    return any(cochain_equivalent(m, class_of(m, e), omega) for e in pool)


@pytest.mark.parametrize("name", ["T1", "T6", "G2"])
def test_round_trip_every_eulerian(name):
    m = bundled(name)
    for eta in eulerian(name):
        omega = class_of(m, eta)
        nu = construct_coorientation(m, omega)
        assert isinstance(nu, co.Coorientation)
        assert co.is_eulerian(m, nu)
        assert cochain_equivalent(m, class_of(m, nu), omega)


def test_round_trip_shifted_representative(T6):
    rng = random.Random(0)
    for eta in eulerian("T6")[:10]:
        pot = [rng.randrange(-5, 6) for _ in range(T6.num_faces)]
        omega = class_of(T6, eta) + coboundary(T6, pot)
        nu = construct_coorientation(T6, omega)
        assert cochain_equivalent(T6, class_of(T6, nu), class_of(T6, eta))


def test_heights_have_unit_jumps(T6):
    omega = class_of(T6, eulerian("T6")[5])
    h, cert = solve_heights(T6, omega)
    assert cert is None and is_height(T6, omega, h.values)


def test_vertex_loops_are_closed(G2):
    for v in range(G2.num_vertices):
        co.check_closed_walk(G2, vertex_loop(G2, v))


def test_strand_cochains_are_cocycles(G2):
    for s in range(len(G2.strands)):
        assert is_cocycle(G2, strand_cochain(G2, s))


def random_cocycle(m, pool, rng):
    omega = class_of(m, rng.choice(pool))
    for s in range(len(m.strands)):
        omega = omega + strand_cochain(m, s).scaled(2 * rng.randrange(-3, 4))
    return omega


@pytest.mark.parametrize("name", ["T6", "G2"])
def test_existence_matches_brute_force(name):
    m = bundled(name)
    pool = eulerian(name)
    rng = random.Random(11)
    seen = {True: 0, False: 0}
    for _ in range(60):
        omega = random_cocycle(m, pool, rng)
        res = construct_coorientation(m, omega)
        found = isinstance(res, co.Coorientation)
        assert found == realizable_by_enumeration(m, omega, pool)
        seen[found] += 1
        if not found:
            faces = co.check_closed_walk(m, list(res.cycle))
            assert faces == list(res.faces)
            assert res.length == len(res.cycle)
            assert sum(d * omega.weights[e] for e, d in res.cycle) == res.omega
            assert res.length < abs(res.omega)
    assert seen[True] and seen[False]


def test_known_certificate(T6):
    # five times a strand: its dual cycle of length 3 carries class 5
    omega = strand_cochain(T6, 2).scaled(5)
    cert = construct_coorientation(T6, omega)
    assert not isinstance(cert, co.Coorientation)
    assert (cert.length, cert.omega) == (3, 5)
    assert cert.to_dict()["cycle"] == list(cert.faces)


def test_parity_mismatch(T6):
    with pytest.raises(ParityMismatch):
        solve_heights(T6, Cochain.of([0] * T6.num_edges))


def test_not_a_cocycle(T6):
    w = [0] * T6.num_edges
    w[0] = 1
    with pytest.raises(NotACocycle):
        solve_heights(T6, Cochain.of(w))
    with pytest.raises(NotACocycle):
        solve_heights(T6, Cochain.of([1]))


def test_cochain_equivalence_detects_difference(T6):
    a = class_of(T6, eulerian("T6")[0])
    assert cochain_equivalent(T6, a, a + coboundary(T6, [1, 0, 2, 0, 0, 3]))
    assert not cochain_equivalent(T6, a, a + strand_cochain(T6, 0).scaled(2))
