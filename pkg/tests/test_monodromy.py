import itertools
import random

import pytest
import sympy

from birkhoff import coorient as co
from birkhoff import monodromy as mo
from birkhoff.cohomology import class_of, cochain_equivalent, strand_cochain
from birkhoff.errors import BadRepresentation, ClassEmpty, NotAcyclic, NotCohomologous

from conftest import acyclic, bundled, eulerian


def sym(M):
    return sympy.Matrix([[int(x) for x in row] for row in M])


def sympy_charpoly(M):
    lam = sympy.Symbol("x")
    return [int(c) for c in sym(M).charpoly(lam).all_coeffs()]


def test_matrix_helpers_match_sympy():
    rng = random.Random(5)
    for n in (1, 2, 3, 5, 7):
        A = mo.as_matrix([[rng.randrange(-4, 5) for _ in range(n)] for _ in range(n)])
        assert mo.det(A) == int(sym(A).det())
        assert mo.charpoly(A) == sympy_charpoly(A)


def test_twist_formula_on_torus_basis():
    # on a torus with <a, b> = 1, the negative twist along a sends b to b - a
    J = mo.as_matrix([[0, 1], [-1, 0]])
    T = mo.twist_matrix_from_class(J, [1, 0])
    assert T.tolist() == [[1, -1], [0, 1]]
    assert mo.is_symplectic(T, J)


def test_word_shape_t6(T6):
    for eta in acyclic("T6"):
        mono = mo.Monodromy(T6, eta)
        rel = co.coherent_order(T6, eta)
        for rep in co.representations(T6, eta, limit=3):
            word = mono.word(rep)
            assert len(word) == 12
            assert all(e.sign == -1 for e in word.entries)
            assert sorted(word.labels) == sorted([("f", i) for i in range(6)] + [("v", i) for i in range(6)])
            # applied first = lowest in the order; written last
            pos = {co.node_index(T6, lab): i for i, lab in enumerate(reversed(word.labels))}
            assert all(pos[a] < pos[b] for a, b in rel)


def test_word_text_format(T6):
    word = mo.twist_word(T6, acyclic("T6")[0])
    for k, line in enumerate(word.lines()):
        assert line.startswith(f"{k}: T^-1[gamma_")
        assert line.endswith(")]")


def test_bad_representation(T6):
    eta = acyclic("T6")[0]
    rep = mo.first_representation(T6, eta)
    with pytest.raises(BadRepresentation):
        mo.Monodromy(T6, eta).word(rep[::-1])


def test_cyclic_rejected(T1):
    with pytest.raises(NotAcyclic):
        mo.Monodromy(T1, eulerian("T1")[0])


@pytest.mark.parametrize("name", ["T6", "G2"])
def test_symplectic_and_unimodular(name):
    m = bundled(name)
    for eta in acyclic(name):
        mono = mo.Monodromy(m, eta)
        for lab in mono.curves:
            T = mono.twist(lab)
            assert mo.is_symplectic(T, mono.J)
            assert mo.det(T) == 1
        M = mono.matrix(mo.first_representation(m, eta))
        assert mo.is_symplectic(M, mono.J)
        assert int(sym(M).det()) == 1


def test_representation_independence_g2(G2):
    for eta in acyclic("G2"):
        mono = mo.Monodromy(G2, eta)
        mats = {tuple(map(tuple, mono.matrix(r).tolist())) for r in co.representations(G2, eta, limit=40)}
        assert len(mats) == 1


def test_commuting_normalize_keeps_product(T6):
    for eta in acyclic("T6")[:6]:
        mono = mo.Monodromy(T6, eta)
        ref = None
        for rep in co.representations(T6, eta, limit=20):
            word = mono.word(rep)
            norm = mo.commuting_normalize(word)
            assert mono.matrix_of_labels(norm.labels).tolist() == mono.matrix(rep).tolist()
            ref = ref or norm.labels
            assert norm.labels == ref


def test_non_adjacent_twists_commute(G2):
    for eta in acyclic("G2")[:4]:
        mono = mo.Monodromy(G2, eta)
        labels = list(mono.curves)
        for x, y in itertools.combinations(labels, 2):
            if not mo.adjacent(G2, x, y):
                a, b = mono.twist(x), mono.twist(y)
                assert (mo.matmul(a, b) == mo.matmul(b, a)).all()


def test_frozen_t6_charpoly(T6):
    # one value for the whole acyclic set, computed with sympy and frozen
    polys = {tuple(sympy_charpoly(mo.monodromy(T6, e))) for e in acyclic("T6")}
    assert polys == {tuple(mo.charpoly(mo.monodromy(T6, acyclic("T6")[0])))}


def test_hurwitz_compare_single_pair(T6):
    pool = acyclic("T6")
    eta = pool[0]
    nu = next(x for x in pool[1:] if cochain_equivalent(T6, class_of(T6, eta), class_of(T6, x)))
    rep = mo.hurwitz_compare(T6, eta, nu)
    assert rep["moves_preserve_product"] and rep["charpoly_equal"] and rep["stepwise_charpoly_equal"]
    cur = eta
    for f in rep["flip_path"]:
        cur = co.flip(T6, cur, f)
    assert cur == nu


def test_hurwitz_needs_same_class(T6):
    pool = acyclic("T6")
    eta = pool[0]
    other = next(x for x in pool if not cochain_equivalent(T6, class_of(T6, eta), class_of(T6, x)))
    with pytest.raises(NotCohomologous):
        mo.hurwitz_compare(T6, eta, other)


def test_hurwitz_pairs_g2(G2):
    pool = acyclic("G2")
    for eta, nu in itertools.combinations(pool, 2):
        if cochain_equivalent(G2, class_of(G2, eta), class_of(G2, nu)):
            rep = mo.hurwitz_compare(G2, eta, nu)
            assert rep["moves_preserve_product"] and rep["charpoly_equal"]


def test_flip_connectivity_cyclic_class(T6):
    # class with three units along one family of strands: cyclic members only
    cyclic = [e for e in eulerian("T6") if not co.is_acyclic(T6, e)]
    classes = {}
    for e in cyclic:
        key = next((k for k in classes if cochain_equivalent(T6, class_of(T6, k), class_of(T6, e))), e)
        classes.setdefault(key, []).append(e)
    for rep_eta, members in classes.items():
        report = mo.flip_connectivity(T6, class_of(T6, rep_eta))
        assert report["members"] == len(members) + report["acyclic"]
        if report["cyclic"]:
            assert report["cyclic_components"] >= 1
            assert len(report["cycle_union_connected"]) == report["cyclic_components"]
            ob = report["obstruction"]
            if ob is not None:
                a, b = co.Coorientation(tuple(ob["eta"])), co.Coorientation(tuple(ob["nu"]))
                assert cochain_equivalent(T6, class_of(T6, a), class_of(T6, b))
                assert mo.flip_path(T6, a, b) is None


def test_class_empty(T6):
    with pytest.raises(ClassEmpty):
        mo.flip_connectivity(T6, class_of(T6, eulerian("T6")[0]) + strand_cochain(T6, 0).scaled(6))


def test_common_model_word_t6(T6):
    pool = acyclic("T6")
    ref = pool[0]
    for nu in pool[:8]:
        res = mo.common_model_word(T6, ref, nu)
        assert res["found"]
        M = mo.Monodromy(T6, ref).matrix_of_labels(res["word"].labels)
        assert mo.charpoly(M) == mo.charpoly(mo.monodromy(T6, nu))
        assert sorted(res["sigma"]) == sorted(mo.first_representation(T6, nu))


def test_common_model_word_g2(G2):
    pool = acyclic("G2")
    ref = pool[0]
    for nu in pool:
        res = mo.common_model_word(G2, ref, nu, limit=20000)
        assert res["found"], nu


def _classes(m, pool):
    reps = []
    for e in pool:
        if not any(cochain_equivalent(m, class_of(m, r), class_of(m, e)) for r in reps):
            reps.append(e)
    return reps


def test_t6_class_census(T6):
    # frozen from exhaustive BFS: 12 realizable classes, two of them acyclic
    reports = [mo.flip_connectivity(T6, class_of(T6, r)) for r in _classes(T6, eulerian("T6"))]
    assert len(reports) == 12
    assert sorted(r["members"] for r in reports) == [1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 12, 12]
    assert [r["acyclic_components"] for r in reports if r["acyclic"]] == [1, 1]
    assert sum(r.get("obstruction") is not None for r in reports) == 6
