import random

import networkx as nx
import pytest

from polykit.belts import PolytopeClass, classify
from polykit.constructions import (GeneralPolytope3, QuadGraph, antiprism, as_general, cut_edge,
                                   cut_edge_pair, cut_vertex, edge_twist, ideal_from_quadgraph,
                                   make_named, medial, planar_map_from_edges, pyramid,
                                   recover_base, truncate_full)
from polykit.core import SimplePolytope3, are_isomorphic
from polykit.corpus import base_polytopes, random_twist_sequence, restricted_twists
from polykit.errors import BadParameter, NotFound, NotMedial, PreconditionViolated
from polykit.planar import PlanarMap


def graph_of(mp: PlanarMap) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(mp.n))
    g.add_edges_from(mp.edges)
    return g


def same_map(a: PlanarMap, b: PlanarMap) -> bool:
    return a.canonical_code == b.canonical_code


def test_named_sizes(named):
    sizes = {"simplex": 4, "cube": 6, "M5xI": 7, "As3": 9, "P8": 8, "Pe3": 14, "dodecahedron": 12}
    for name, m in sizes.items():
        p = named(name)
        assert isinstance(p, SimplePolytope3) and p.m == m
    assert named("prism", 6).m == 8
    assert isinstance(named("pyramid", 5), GeneralPolytope3)
    assert isinstance(named("antiprism", 5), QuadGraph)


def test_named_errors():
    with pytest.raises(BadParameter):
        make_named("prism")
    with pytest.raises(BadParameter):
        make_named("icosidodecahedron")


def test_antiprism3_is_octahedron(named):
    oct_graph = graph_of(named("octahedron").map)
    assert nx.is_isomorphic(graph_of(antiprism(3).map), oct_graph)
    assert same_map(antiprism(3).map, named("octahedron").map)


def test_as3_from_three_cuts(named):
    # three pairwise non-adjacent, pairwise orthogonal cube edges
    p = named("cube")
    for e in [(0, 2), (3, 4), (1, 5)]:
        p = cut_edge(p, e)
    assert are_isomorphic(p, named("As3"))[0]


def test_cut_one_cube_edge(named):
    p = cut_edge(named("cube"), (0, 2))
    assert p.m == 7
    assert p.p_vector() == {4: 5, 5: 2}


def test_cut_vertex_tetrahedron(named):
    p = cut_vertex(named("simplex"), (0, 1, 2))
    assert p.m == 5 and p.p_vector() == {3: 2, 4: 3}
    assert are_isomorphic(p, named("prism", 3))[0]
    with pytest.raises(NotFound):
        cut_vertex(named("cube"), (0, 1, 2))


def test_cut_added_face_sizes(named):
    pe = named("Pe3")
    v = pe.vertices[0]
    assert cut_vertex(pe, v).degree(pe.m) == 3
    e = next(e for e in pe.edges if pe.degree(e[0]) == 6 and pe.degree(e[1]) == 6)
    assert cut_edge(pe, e).degree(pe.m) == 4
    f = next(i for i in range(pe.m) if pe.degree(i) == 6)
    a, b = [x for x in next(t for t in pe.vertices if f in t) if x != f]
    q = cut_edge_pair(pe, (f, a), (f, b))
    assert q.m == 15 and q.degree(pe.m) == 5


def test_cut_preconditions(named):
    cube = named("cube")
    with pytest.raises(PreconditionViolated):
        cut_edge(cube, (0, 2), preserve_apog=True)
    with pytest.raises(NotFound):
        cut_edge(cube, (0, 1))
    with pytest.raises(PreconditionViolated):
        cut_edge_pair(cube, (4, 0), (4, 2))


def test_truncate_tetrahedron_is_pe3(named):
    p = truncate_full(named("simplex"))
    assert p.m == 14 and p.p_vector()[4] == 6
    assert are_isomorphic(p, named("Pe3"))[0]


def test_truncate_cube(named):
    p = truncate_full(named("cube"))
    assert p.m == 26 and p.p_vector()[4] == 12


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_truncate_pyramid_matches_antiprism(k):
    p = truncate_full(pyramid(k))
    assert p.m == 4 * k + 2
    assert are_isomorphic(p, ideal_from_quadgraph(antiprism(k)))[0]


def test_truncation_face_counts():
    for q in base_polytopes(9):
        p = truncate_full(q)
        assert p.m == q.f0 + q.f1 + q.f2
        assert p.p_vector().get(4, 0) == q.f1
        assert p.m == 2 * (q.f1 + 1)


@pytest.mark.parametrize("k", [3, 4, 5, 7])
def test_medial_of_pyramid_is_antiprism(k):
    assert same_map(medial(pyramid(k)).map, antiprism(k).map)


def test_medial_examples(named):
    assert same_map(medial(named("simplex")).map, named("octahedron").map)
    mc = medial(named("cube"))
    assert mc.n == 12 and all(len(r) == 4 for r in mc.map.rot)
    assert same_map(mc.map, medial(named("octahedron")).map)


def test_recover_base_examples(named):
    for k in (3, 4, 5):
        q1, q2 = recover_base(antiprism(k))
        for q in (q1, q2):
            assert same_map(q.map, pyramid(k).map)
            assert same_map(medial(q).map, antiprism(k).map)
    q, qd = recover_base(medial(named("cube")))
    assert same_map(q.map, as_general(named("cube")).map)
    assert same_map(qd.map, named("octahedron").map)


def test_recover_base_rejects_two_connected():
    # two octahedra, each missing one edge, joined by two edges: 4-regular but 2-connected
    g = nx.Graph()
    for off in (0, 6):
        octa = nx.octahedral_graph()
        g.add_edges_from((a + off, b + off) for a, b in octa.edges)
    g.remove_edges_from([(0, 1), (6, 7)])
    g.add_edges_from([(0, 6), (1, 7)])
    assert all(d == 4 for _, d in g.degree()) and nx.node_connectivity(g) == 2
    mp = planar_map_from_edges(list(g.edges))
    with pytest.raises(NotMedial):
        recover_base(mp)
    with pytest.raises(NotMedial):
        QuadGraph(mp)


def test_ideal_from_quadgraph_examples(named):
    assert are_isomorphic(ideal_from_quadgraph(antiprism(3)), named("Pe3"))[0]
    p = ideal_from_quadgraph(antiprism(4))
    assert p.m == 18 and p.p_vector()[4] == 8
    q = ideal_from_quadgraph(medial(named("cube")))
    assert q.m == 26 and are_isomorphic(q, truncate_full(named("cube")))[0]


def test_ideal_quadrangles_pairwise_disjoint():
    for k in (3, 4, 5):
        p = ideal_from_quadgraph(antiprism(k))
        quads = p.quadrangles()
        assert len(quads) == 2 * k
        assert not any(p.adjacent(a, b) for a in quads for b in quads if a < b)


def test_edge_twist_restricted_on_antiprism4():
    g = antiprism(4)
    fi, e1, e2 = restricted_twists(g)[0]
    h = edge_twist(g, e1, e2, restricted=True, face=fi)
    assert h.n == g.n + 1
    q, qd = recover_base(h)
    assert same_map(medial(q).map, h.map)
    assert classify(ideal_from_quadgraph(h))[0] == PolytopeClass.IdealAlmostPogorelov


def test_edge_twist_preconditions():
    g = antiprism(4)
    cyc = g.map.faces[0]
    with pytest.raises(PreconditionViolated):
        edge_twist(g, (cyc[0], cyc[1]), (cyc[1], cyc[2]))
    sq = next(c for c in g.map.faces if len(c) == 4)
    # opposite sides of a square both touch the side between them
    h = edge_twist(g, (sq[0], sq[1]), (sq[2], sq[3]), restricted=True)
    assert h.n == 9
    tri = next(c for c in g.map.faces if len(c) == 3 and not set(c) & {sq[0], sq[1]})
    with pytest.raises(PreconditionViolated):
        edge_twist(g, (sq[0], sq[1]), (tri[0], tri[1]))


def test_random_restricted_twist_sequences():
    rng = random.Random(2024)
    count = 0
    for _ in range(1000):
        seq = random_twist_sequence(antiprism(4), 3, rng)
        for h in seq[1:]:
            q, _ = recover_base(h)
            assert same_map(medial(q).map, h.map)
            count += 1
    assert count == 3000


def test_planar_map_from_edges_rejects_nonplanar():
    from polykit.errors import NotPolytopal

    k33 = [(a, b) for a in range(3) for b in range(3, 6)]
    with pytest.raises(NotPolytopal):
        planar_map_from_edges(k33)


def test_general_polytope_dual(named):
    oct_ = named("octahedron")
    assert (oct_.f0, oct_.f1, oct_.f2) == (6, 12, 8)
    assert not oct_.is_simple()
    assert as_general(named("cube")).is_simple()
