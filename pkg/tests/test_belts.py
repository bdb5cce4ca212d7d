import networkx as nx
import pytest

from polykit.belts import (Belt, PolytopeClass, belts_through, check_scc, classify,
                           enumerate_belts, is_good_pair, is_ideal_vertex_condition,
                           surrounding_belt)
from polykit.constructions import antiprism, ideal_from_quadgraph

from conftest import face_graph


def oracle_belts(p):
    """Belts as chordless cycles of the face graph, minus vertex triangles."""
    out = set()
    verts = set(p.vertices)
    for cyc in nx.chordless_cycles(face_graph(p)):
        if len(cyc) < 3:
            continue
        if len(cyc) == 3 and tuple(sorted(cyc)) in verts:
            continue
        out.add(frozenset(cyc))
    return out


def oracle_pog_witness(p, belts, i, j, k):
    """Some belt through i, j avoiding k with k missing one of the two arcs."""
    for b in belts:
        f = b.faces
        if i not in f or j not in f or k in f:
            continue
        if p.adjacent(i, j):
            continue
        a1, a2 = b.arcs(i, j)
        if not any(p.adjacent(k, x) for x in a1) or not any(p.adjacent(k, x) for x in a2):
            return True
    return False


def test_belts_match_chordless_cycles(small_corpus):
    for p in small_corpus:
        mine = enumerate_belts(p)
        assert {frozenset(b.faces) for b in mine} == oracle_belts(p)
        assert len({b.faces for b in mine}) == len(mine)
        for b in mine:
            cyc = b.faces
            for x in range(len(cyc)):
                assert p.adjacent(cyc[x], cyc[x - 1])


def test_belt_order_is_canonical(named):
    p = named("Pe3")
    bs = enumerate_belts(p)
    assert bs == sorted(bs, key=lambda b: (b.k, b.faces))
    for b in bs:
        assert b.faces[0] == min(b.faces) and b.faces[1] < b.faces[-1]


def test_belt_examples(named):
    cube4 = enumerate_belts(named("cube"), 4)
    assert len(cube4) == 3 and all(b.trivial for b in cube4)
    assert enumerate_belts(named("simplex"), 3) == []
    b3 = enumerate_belts(named("prism", 3), 3)
    assert len(b3) == 1 and all(named("prism", 3).degree(f) == 4 for f in b3[0].faces)


def test_classify_examples(named):
    expected = {
        "simplex": PolytopeClass.NotFlag,
        "dodecahedron": PolytopeClass.Pogorelov,
        "Pe3": PolytopeClass.IdealAlmostPogorelov,
        "As3": PolytopeClass.AlmostPogorelov,
        "cube": PolytopeClass.AlmostPogorelov,
        "M5xI": PolytopeClass.AlmostPogorelov,
        "P8": PolytopeClass.FlagOnly,
    }
    for name, tag in expected.items():
        assert classify(named(name))[0] == tag, name
    assert classify(named("prism", 3))[0] == PolytopeClass.NotFlag
    assert classify(named("prism", 6))[0] == PolytopeClass.FlagOnly


def test_ideal_antiprism_family():
    for k in (3, 4, 5, 6):
        p = ideal_from_quadgraph(antiprism(k))
        assert is_ideal_vertex_condition(p)
        assert classify(p)[0] == PolytopeClass.IdealAlmostPogorelov
        assert 2 * len(enumerate_belts(p, 4)) == p.m - 2


def test_scc_against_oracle(small_corpus, named):
    corpus = [p for p in small_corpus if p.m > 4] + [named("P8"), named("As3")]
    for p in corpus:
        belts = enumerate_belts(p)
        quads = set(p.quadrangles())
        want = {"flag": True, "pogorelov": True, "almost_pogorelov": True}
        for i, j in p.n2_pairs():
            for k in range(p.m):
                if k in (i, j):
                    continue
                flag_w = any(i in b.faces and j in b.faces and k not in b.faces for b in belts)
                pog_w = oracle_pog_witness(p, belts, i, j, k)
                touches = any(q in quads and p.adjacent(q, k) for q in (i, j))
                want["flag"] &= flag_w
                want["pogorelov"] &= pog_w
                want["almost_pogorelov"] &= pog_w == (not touches)
        for variant, ok in want.items():
            holds, triple = check_scc(p, variant)
            assert holds == ok, (variant, p.to_text())
            assert (triple is None) == holds


def test_scc_examples(named):
    assert check_scc(named("dodecahedron"), "pogorelov")[0]
    assert check_scc(named("Pe3"), "almost_pogorelov")[0]
    assert check_scc(named("P8"), "almost_pogorelov")[0]
    assert not check_scc(named("Pe3"), "pogorelov")[0]
    ok, triple = check_scc(named("prism", 3), "flag")
    assert not ok and len(triple) == 3
    with pytest.raises(ValueError):
        check_scc(named("cube"), "bogus")


def test_good_pairs(named):
    pe = named("Pe3")
    quads = pe.quadrangles()
    n2 = pe.n2_pairs()
    for w in n2:
        if w[0] in quads and w[1] in quads:
            assert all(is_good_pair(pe, w2, w) for w2 in n2 if w2 != w)
    d = named("dodecahedron")
    n2 = d.n2_pairs()
    assert all(is_good_pair(d, w2, w) for w in n2 for w2 in n2 if w2 != w)
    a = named("As3")
    n2 = a.n2_pairs()
    assert any(not is_good_pair(a, w2, w) for w in n2 for w2 in n2 if w2 != w)


def test_belts_through(named):
    cube = named("cube")
    assert len(belts_through(cube, {4, 5})) == 2
    assert len(belts_through(cube, {4, 5}, forbidden={0})) == 1
    pe = named("Pe3")
    b = next(b for b in enumerate_belts(pe, 4))
    got = belts_through(pe, {b.faces[0], b.faces[2]})
    assert b in got
    # adjacent faces only appear as consecutive members
    i, j = pe.edges[0]
    for c in belts_through(pe, {i, j}):
        x, y = c.faces.index(i), c.faces.index(j)
        assert (x - y) % c.k in (1, c.k - 1)


def test_surrounding_belt(named):
    pe = named("Pe3")
    for q in pe.quadrangles():
        sb = surrounding_belt(pe, q)
        assert sb is not None and set(sb) == set(pe.neighbors[q])
    pr = named("prism", 3)
    quad = next(f for f in range(pr.m) if pr.degree(f) == 4)
    # the other two squares touch each other and both triangles: a chord
    assert surrounding_belt(pr, quad) is None


def test_belt_json(named):
    b = enumerate_belts(named("cube"), 4)[0]
    js = b.to_json()
    assert js["k"] == 4 and min(js["faces"]) >= 1 and len(js["trivial_around"]) == 2
    assert isinstance(b, Belt)


def test_belt_counts_relabel_invariant(named):
    import random

    p = named("As3")
    for s in range(5):
        q, _ = p.random_relabel(random.Random(s))
        for k in range(3, 8):
            assert len(enumerate_belts(q, k)) == len(enumerate_belts(p, k))
        assert classify(q)[0] == classify(p)[0]
