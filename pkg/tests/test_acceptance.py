"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line, then asserts."""
import itertools
import random

import pytest

from birkhoff import birkhoff_surface as bs
from birkhoff import coorient as co
from birkhoff import monodromy as mo
from birkhoff import torus_oracle as to
from birkhoff.cohomology import class_of, cochain_equivalent, construct_coorientation, strand_cochain

from conftest import acyclic, bundled, eulerian
from test_coorient import brute_eulerian


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, detail

    return emit


def _classes(m, pool):
    reps = []
    for e in pool:
        if not any(cochain_equivalent(m, class_of(m, r), class_of(m, e)) for r in reps):
            reps.append(e)
    return reps


def test_1_flip_cyclicity(report, T6):
    rng = random.Random(1)
    runs = failures = 0
    for eta in acyclic("T6"):
        orders = list(co.partial_representations(T6, eta))
        for order in rng.sample(orders, min(10, len(orders))):
            seq = co.flip_algorithm(T6, eta, order)
            runs += 1
            ok = len(seq) == 7 and seq[-1] == eta and all(x != eta for x in seq[1:-1])
            for k in range(1, 7):
                done = set(order[:k])
                for e in range(T6.num_edges):
                    straddle = (T6.dual.tail[e] in done) != (T6.dual.head[e] in done)
                    ok &= (seq[k].bits[e] != eta.bits[e]) == straddle
            failures += not ok
    report(1, "flip cyclicity", failures == 0 and runs > 0,
           f"{runs} runs over {len(acyclic('T6'))} acyclic coorientations, {failures} failures (exact)")


def test_2_class_round_trip(report):
    checked = failures = 0
    for name in ("T1", "T6"):
        m = bundled(name)
        for bits in brute_eulerian(m):
            eta = co.Coorientation(bits)
            nu = construct_coorientation(m, class_of(m, eta))
            checked += 1
            failures += not (isinstance(nu, co.Coorientation)
                             and cochain_equivalent(m, class_of(m, nu), class_of(m, eta)))
    certs = cert_failures = 0
    for name in ("T1", "T6"):
        m = bundled(name)
        pool = eulerian(name)
        found = 0
        for k in itertools.count(1):
            if found == 10:
                break
            omega = class_of(m, pool[k % len(pool)]) + strand_cochain(m, k % len(m.strands)).scaled(2 * (k + 1))
            # keep classes the enumeration proves infeasible
            if any(cochain_equivalent(m, class_of(m, e), omega) for e in pool):
                continue
            found += 1
            cert = construct_coorientation(m, omega)
            certs += 1
            ok = not isinstance(cert, co.Coorientation)
            if ok:
                value = sum(d * omega.weights[e] for e, d in cert.cycle)
                co.check_closed_walk(m, list(cert.cycle))
                ok = value == cert.omega and cert.length == len(cert.cycle) < abs(value)
            cert_failures += not ok
    report(2, "class construction round-trip", failures == 0 and cert_failures == 0 and certs == 20,
           f"{checked} round trips ({failures} bad), {certs} infeasible classes ({cert_failures} without a valid certificate)")


GRIDS = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]


def test_3_acyclic_iff_birkhoff(report):
    total = agree = bound_ok = bounded_cases = 0
    for p, q in GRIDS:
        model = to.embed_grid(p, q)
        for i, eta in enumerate(co.enumerate_eulerian(model.map)):
            v = to.verify_birkhoff(model, eta, samples=1000, horizon=100, seed=i)
            ac = co.is_acyclic(model.map, eta)
            total += 1
            agree += v.bounded == ac and (ac or v.witness is not None)
            if v.bounded:
                bounded_cases += 1
                bound_ok += v.within_bound
    ok = total == agree and bound_ok == bounded_cases
    report(3, "acyclicity <=> Birkhoff (flat)", ok,
           f"{agree}/{total} coorientations agree on grids up to 2x3 (1000 directions each, horizon 100); "
           f"{bound_ok}/{bounded_cases} bounded cases within n*d")


def test_4_partial_return_factorization(report):
    model = to.embed_grid(2, 3)
    n = bad = skipped = 0
    for i, eta in enumerate(acyclic("T6")):
        order = next(co.partial_representations(model.map, eta, limit=1))
        v = to.verify_factorization(model, eta, order, samples=1000, seed=i)
        n += v.samples
        skipped += v.skipped
        bad += len(v.failures)
    report(4, "partial-return factorization", bad == 0 and n == 24000,
           f"{n} samples over 24 coorientations, {bad} failures, {skipped} non-generic skipped (exact rationals)")


def test_5_word_shape(report):
    words = bad = 0
    for name in ("T6", "G2"):
        m = bundled(name)
        n = m.num_vertices + m.num_faces
        cells = sorted([("f", i) for i in range(m.num_faces)] + [("v", i) for i in range(m.num_vertices)])
        for eta in acyclic(name):
            mono = mo.Monodromy(m, eta)
            rel = co.coherent_order(m, eta)
            for rep in co.representations(m, eta, limit=20):
                w = mono.word(rep)
                words += 1
                pos = {co.node_index(m, lab): k for k, lab in enumerate(reversed(w.labels))}
                ok = (len(w) == n and all(e.sign == -1 for e in w.entries)
                      and sorted(w.labels) == cells and all(pos[a] < pos[b] for a, b in rel))
                bad += not ok
    report(5, "twist word shape", bad == 0, f"{words} words (length 12 on T6), {bad} malformed")


def test_6_representation_independence(report, T6):
    reps_seen = distinct = 0
    for eta in acyclic("T6"):
        mono = mo.Monodromy(T6, eta)
        mats = set()
        for rep in co.representations(T6, eta, limit=100):
            mats.add(tuple(map(tuple, mono.matrix(rep).tolist())))
            reps_seen += 1
        distinct += len(mats) != 1
    report(6, "representation independence", distinct == 0,
           f"{reps_seen} representations, {distinct} coorientations with differing matrices")


def test_7_symplectic(report):
    mats = bad = 0
    for name in ("T1", "T6", "G2"):
        m = bundled(name)
        for eta in acyclic(name):
            mono = mo.Monodromy(m, eta)
            for lab in mono.curves:
                T = mono.twist(lab)
                mats += 1
                bad += not (mo.is_symplectic(T, mono.J) and mo.det(T) == 1)
            for rep in co.representations(m, eta, limit=5):
                M = mono.matrix(rep)
                mats += 1
                bad += not (mo.is_symplectic(M, mono.J) and mo.det(M) == 1)
    report(7, "symplectic preservation", bad == 0 and mats > 0,
           f"{mats} matrices on T6 and G2 (T1 has no acyclic coorientation), {bad} violations")


def test_8_hurwitz_shadow(report, T6):
    pairs = poly_bad = trace_bad = 0
    for eta, nu in itertools.combinations(acyclic("T6"), 2):
        if not cochain_equivalent(T6, class_of(T6, eta), class_of(T6, nu)):
            continue
        res = mo.hurwitz_compare(T6, eta, nu)
        pairs += 1
        poly_bad += not res["charpoly_equal"]
        trace_bad += not res["moves_preserve_product"]
    report(8, "Hurwitz/conjugacy shadow", pairs > 0 and poly_bad == 0 and trace_bad == 0,
           f"{pairs} cohomologous pairs, {poly_bad} charpoly mismatches, {trace_bad} traces changing the product")


def test_9_flip_connectivity(report, T6):
    strata = bad = 0
    for r in _classes(T6, eulerian("T6")):
        rep = mo.flip_connectivity(T6, class_of(T6, r))
        if rep["acyclic"]:
            strata += 1
            bad += rep["acyclic_components"] != 1
    report(9, "flip connectivity", strata > 0 and bad == 0,
           f"{strata} acyclic strata, {bad} with more than one component")


def test_10_surface_invariants(report):
    details = []
    chi_ok = b_ok = genus_ok = True
    for name in ("T1", "T6", "G2"):
        m = bundled(name)
        genera = set()
        chis = set()
        for eta in eulerian(name):
            model = bs.build_skeleton(m, eta)
            chis.add(model.euler_characteristic)
            chi_ok &= model.euler_characteristic == -4 * m.num_vertices
            b_ok &= model.num_boundary == 2 * len(m.strands)
            twice = 2 - model.euler_characteristic - model.num_boundary
            genus_ok &= twice % 2 == 0
            genera.add(model.genus)
        genus_ok &= len(genera) == 1
        details.append(f"{name}: chi={sorted(chis)} vs -4V={-4 * m.num_vertices}")
    detail = "; ".join(details) + f"; b=2*strands {b_ok}; genus integral and eta-independent {genus_ok}"
    report(10, "surface invariants", chi_ok and b_ok and genus_ok, detail)
