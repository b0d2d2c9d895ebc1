import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from birkhoff import surface_map as sm
from birkhoff.errors import BadInvolution, DanglingDart, DisconnectedMap, NonQuadrivalent

from conftest import bundled, grid


def naive_faces(desc):
    """Face tracing straight from the JSON description, as an independent check."""
    ccw = {}
    for v in desc["vertices"]:
        ds = v["darts"]
        for k, d in enumerate(ds):
            ccw[d] = ds[(k + 1) % 4]
    pair = {}
    for a, b in desc["edges"]:
        pair[a], pair[b] = b, a
    seen, faces = set(), []
    for d0 in sorted(ccw):
        if d0 in seen:
            continue
        cyc, d = [], d0
        while d not in seen:
            seen.add(d)
            cyc.append(d)
            d = pair[ccw[d]]
        faces.append(cyc)
    return faces


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)])
def test_grid_counts(p, q):
    m = grid(p, q)
    assert (m.num_vertices, m.num_edges, m.num_faces, m.genus) == (p * q, 2 * p * q, p * q, 1)
    assert len(m.strands) == p + q
    assert sorted(len(f) for f in m.faces) == [4] * (p * q)


def test_bundled_maps():
    t1, t6, g2 = bundled("T1"), bundled("T6"), bundled("G2")
    assert t1.summary() == {"name": "T1", "V": 1, "E": 2, "F": 1, "genus": 1, "strands": 2}
    assert t6.summary() == {"name": "T6", "V": 6, "E": 12, "F": 6, "genus": 1, "strands": 5}
    assert (g2.num_vertices, g2.genus, len(g2.strands)) == (6, 2, 2)


@pytest.mark.parametrize("name", ["T1", "T6", "G2"])
def test_faces_match_naive_tracing(name):
    m = bundled(name)
    desc = m.to_dict()
    ours = sorted(sorted(m.dart_ids[d] for d in f) for f in m.faces)
    assert ours == sorted(sorted(f) for f in naive_faces(desc))


def test_strands_cover_every_edge_twice_as_darts():
    m = bundled("T6")
    darts = [d for s in m.strand_darts for d in s]
    assert sorted(m.edge_of[d] for d in darts) == list(range(m.num_edges))


def test_dual_graph_orientation():
    m = bundled("T6")
    for e, (a, _) in enumerate(m.edges):
        assert m.dual.tail[e] == m.right_face(a)
        assert m.dual.head[e] == m.left_face(a)
    # T1 has dual loops
    t1 = bundled("T1")
    assert all(t == h for t, h in zip(t1.dual.tail, t1.dual.head))


def test_round_trip_json():
    m = bundled("G2")
    text = json.dumps(m.to_dict())
    m2 = sm.build_map(text)
    assert m2.to_dict() == m.to_dict()
    assert m2.summary() == m.summary()


def _t1_desc():
    return {"vertices": [{"id": 0, "darts": [0, 1, 2, 3]}], "edges": [[0, 2], [1, 3]]}


def test_error_non_quadrivalent():
    desc = {"vertices": [{"id": 0, "darts": [0, 1, 2]}], "edges": [[0, 2]]}
    with pytest.raises(NonQuadrivalent):
        sm.build_map(desc)


def test_error_self_pairing():
    desc = _t1_desc()
    desc["edges"] = [[0, 0], [1, 3]]
    with pytest.raises(BadInvolution):
        sm.build_map(desc)


def test_error_unpaired_dart():
    desc = _t1_desc()
    desc["edges"] = [[0, 2]]
    with pytest.raises(BadInvolution):
        sm.build_map(desc)


def test_error_dangling_dart():
    desc = _t1_desc()
    desc["edges"] = [[0, 2], [1, 7]]
    with pytest.raises(DanglingDart):
        sm.build_map(desc)


def test_error_disconnected():
    desc = {
        "vertices": [{"id": 0, "darts": [0, 1, 2, 3]}, {"id": 1, "darts": [4, 5, 6, 7]}],
        "edges": [[0, 2], [1, 3], [4, 6], [5, 7]],
    }
    with pytest.raises(DisconnectedMap):
        sm.build_map(desc)


def test_error_record_is_machine_readable():
    try:
        sm.build_map({"vertices": [{"id": 0, "darts": [0]}], "edges": []})
    except NonQuadrivalent as exc:
        assert exc.record()["error"] == "non_quadrivalent"


def _scramble(desc, rng):
    ids = [d for v in desc["vertices"] for d in v["darts"]]
    new = rng.sample(range(10 * len(ids)), len(ids))
    ren = dict(zip(ids, new))
    verts = []
    for v in desc["vertices"]:
        ds = [ren[d] for d in v["darts"]]
        k = rng.randrange(4)
        verts.append({"id": v["id"], "darts": ds[k:] + ds[:k]})
    rng.shuffle(verts)
    edges = [[ren[b], ren[a]] if rng.random() < 0.5 else [ren[a], ren[b]] for a, b in desc["edges"]]
    rng.shuffle(edges)
    return {"vertices": verts, "edges": edges}


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), name=st.sampled_from(["T1", "T6", "G2"]))
def test_relabel_invariance(seed, name):
    m = bundled(name)
    m2 = sm.build_map(_scramble(m.to_dict(), random.Random(seed)))
    assert (m2.num_vertices, m2.num_edges, m2.num_faces, m2.genus) == (
        m.num_vertices, m.num_edges, m.num_faces, m.genus)
    assert sorted(map(len, m2.faces)) == sorted(map(len, m.faces))
    assert sorted(map(len, m2.strands)) == sorted(map(len, m.strands))
