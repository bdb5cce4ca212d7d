import random

import pytest

from polykit.constructions import antiprism, ideal_from_quadgraph
from polykit.errors import InvalidCharacteristic, NotEvenPolytope, SizeBound
from polykit.toric import (E, CharacteristicMap, FaceColoring, canonical_lambda, face_ring_dims,
                           face_ring_presentation, four_coloring, gl3_z2, lambda_from_coloring,
                           pairs_z2_equivalent, stanley_reisner_generators, three_coloring,
                           three_colorings)


def test_gl3_z2_order():
    assert len(gl3_z2()) == 168


def test_pe3_three_colorings(named):
    pe = named("Pe3")
    allc = three_colorings(pe)
    assert len(allc) == 6 and all(c.is_proper(pe) for c in allc)
    assert three_coloring(pe).is_proper(pe)


def test_cube_coloring_by_opposite_pairs(named):
    cube = named("cube")
    c = three_coloring(cube).colors
    for i, j in cube.n2_pairs():
        assert c[i] == c[j]


def test_odd_faces_rejected(named):
    with pytest.raises(NotEvenPolytope):
        three_coloring(named("As3"))


def test_canonical_lambda_pe3(named):
    pe = named("Pe3")
    lam = canonical_lambda(pe)
    quads = set(pe.quadrangles())
    for i, col in enumerate(lam.columns):
        if i in quads:
            assert col == E[3]
        else:
            assert col in (E[1], E[2])
    assert lam.reduce_mod2().mode == "Z2"
    assert len(lam.matrix()) == 3 and len(lam.matrix()[0]) == pe.m


def test_canonical_lambda_validates_everywhere():
    for k in (3, 4, 5):
        p = ideal_from_quadgraph(antiprism(k))
        lam = canonical_lambda(p)
        assert len(p.vertices) == 2 * (p.m - 2)
        CharacteristicMap(p, lam.columns, "Z")
        CharacteristicMap(p, lam.columns, "Z2")


def test_four_coloring_lambda_valid(small_corpus):
    for p in small_corpus:
        c = four_coloring(p)
        assert c.is_proper(p) and set(c.colors) <= {1, 2, 3, 4}
        lam = lambda_from_coloring(p, c)
        assert lam.mode == "Z"
        lam.reduce_mod2()


def test_four_coloring_deterministic(named):
    p = named("dodecahedron")
    assert four_coloring(p) == four_coloring(p)


def test_invalid_characteristic(named):
    cube = named("cube")
    with pytest.raises(InvalidCharacteristic):
        CharacteristicMap(cube, [E[1]] * 6)
    with pytest.raises(InvalidCharacteristic):
        CharacteristicMap(cube, [E[1]] * 5)
    # (1,1,0), (0,1,1), (1,0,1) has determinant 2
    bad = [(1, 1, 0), (1, 1, 0), (0, 1, 1), (0, 1, 1), (1, 0, 1), (1, 0, 1)]
    with pytest.raises(InvalidCharacteristic):
        CharacteristicMap(cube, bad, "Z")
    with pytest.raises(InvalidCharacteristic):
        CharacteristicMap(cube, bad, "Z2")


def test_cube_small_cover(named):
    cube = named("cube")
    assert face_ring_dims(cube, canonical_lambda(cube), "small_cover_Z2") == (1, 3, 3, 1)


def test_face_ring_dims_are_h_vector(small_corpus):
    # Betti numbers of a small cover / quasitoric manifold equal the h-vector (1, m-3, m-3, 1)
    for p in small_corpus:
        lam = lambda_from_coloring(p, four_coloring(p))
        want = (1, p.m - 3, p.m - 3, 1)
        assert face_ring_dims(p, lam, "small_cover_Z2") == want
        if p.m <= 7:
            assert face_ring_dims(p, lam, "quasitoric_Z") == want
            assert face_ring_dims(p, lam, "quasitoric_Z2") == want


def test_quasitoric_needs_integral_map(named):
    cube = named("cube")
    with pytest.raises(InvalidCharacteristic):
        face_ring_dims(cube, canonical_lambda(cube, "Z2"), "quasitoric_Z")
    with pytest.raises(ValueError):
        face_ring_dims(cube, canonical_lambda(cube), "bogus")


def test_stanley_reisner_generators(named):
    cube = named("cube")
    assert stanley_reisner_generators(cube) == [(0, 1), (2, 3), (4, 5)]
    pr = named("prism", 3)
    gens = stanley_reisner_generators(pr)
    assert any(len(g) == 3 for g in gens)
    pres = face_ring_presentation(cube, canonical_lambda(cube))
    assert len(pres["generators"]) == 6 and len(pres["linear_forms"]) == 3


def test_pairs_equivalent_relabel(named):
    pe = named("Pe3")
    lam = canonical_lambda(pe)
    q, perm = pe.random_relabel(random.Random(4))
    cols = [None] * pe.m
    for i, c in enumerate(lam.columns):
        cols[perm[i]] = c
    assert pairs_z2_equivalent(pe, lam, q, CharacteristicMap(q, cols, "Z"))


def test_pairs_equivalent_colour_swap(named):
    pe = named("Pe3")
    lam = canonical_lambda(pe)
    swap = {E[1]: E[2], E[2]: E[1], E[3]: E[3]}
    lam2 = CharacteristicMap(pe, [swap[c] for c in lam.columns])
    assert pairs_z2_equivalent(pe, lam, pe, lam2)


def test_pairs_not_equivalent(named):
    cube, m5 = named("cube"), named("M5xI")
    lam_c = canonical_lambda(cube)
    lam_m = lambda_from_coloring(m5, four_coloring(m5))
    assert not pairs_z2_equivalent(cube, lam_c, m5, lam_m)
    # a change of basis cannot turn three distinct vectors into four
    p = named("prism", 6)
    a = canonical_lambda(p)
    cols = list(three_coloring(p).colors)
    cols[0] = 4
    b = lambda_from_coloring(p, FaceColoring(tuple(cols), 4))
    assert len(set(a.columns)) == 3 and len(set(b.columns)) == 4
    assert not pairs_z2_equivalent(p, a, p, b)
    with pytest.raises(SizeBound):
        pairs_z2_equivalent(p, a, p, b, max_m=5)
