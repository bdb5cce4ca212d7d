"""Named polytopes and the operations that generate new ones.

Operations on simple polytopes are carried out on the nerve: every cut is a
local rewrite of the triangle set, after which the rotation system is rebuilt
and the result validated.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .core import SimplePolytope3
from .errors import (BadParameter, NotFound, NotMedial, NotPolytopal,
                     PreconditionViolated, PolykitError)
from .planar import PlanarMap


class GeneralPolytope3:
    """A combinatorial 3-polytope, not necessarily simple: a 3-connected plane graph."""

    def __init__(self, graph: PlanarMap, validate: bool = True):
        self.map = graph
        if validate:
            graph.check_polytopal()

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence[int]]) -> "GeneralPolytope3":
        return cls(PlanarMap.from_faces(faces))

    @property
    def f0(self) -> int:
        return self.map.n

    @property
    def f1(self) -> int:
        return self.map.num_edges

    @property
    def f2(self) -> int:
        return len(self.map.faces)

    def dual(self) -> "GeneralPolytope3":
        return GeneralPolytope3(self.map.dual(), validate=False)

    def is_simple(self) -> bool:
        return all(len(r) == 3 for r in self.map.rot)

    def __repr__(self):
        return f"GeneralPolytope3(f0={self.f0}, f1={self.f1}, f2={self.f2})"


class QuadGraph:
    """A 4-regular 3-connected plane graph (graph of an ideal right-angled polytope)."""

    def __init__(self, graph: PlanarMap, validate: bool = True):
        self.map = graph
        if validate:
            if any(len(r) != 4 for r in graph.rot):
                raise NotMedial("graph is not 4-regular")
            if not graph.is_spherical():
                raise NotPolytopal("rotation system does not describe a sphere")
            if not graph.is_3_connected():
                raise NotMedial("graph is not 3-connected")

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence[int]]) -> "QuadGraph":
        return cls(PlanarMap.from_faces(faces))

    @property
    def n(self) -> int:
        return self.map.n

    def __repr__(self):
        return f"QuadGraph(n={self.n}, faces={len(self.map.faces)})"


def as_general(p: SimplePolytope3 | GeneralPolytope3) -> GeneralPolytope3:
    if isinstance(p, GeneralPolytope3):
        return p
    return GeneralPolytope3(p.graph(), validate=False)


def planar_map_from_edges(edges: Sequence[tuple[int, int]]) -> PlanarMap:
    """Embed a planar graph (unique embedding if 3-connected)."""
    import networkx as nx

    g = nx.Graph()
    g.add_edges_from(edges)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise NotPolytopal("graph is not planar")
    nodes = sorted(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    rot = [[index[w] for w in emb.neighbors_cw_order(v)] for v in nodes]
    return PlanarMap(rot)


# -- named objects ---------------------------------------------------------------

def simplex() -> SimplePolytope3:
    return SimplePolytope3.from_triangles(combinations(range(4), 3))


def cube() -> SimplePolytope3:
    # faces 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z
    return SimplePolytope3.from_triangles(
        [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])


def prism(k: int) -> SimplePolytope3:
    """k-gonal prism: faces 0 (top), 1 (bottom), 2..k+1 (sides)."""
    if k < 3:
        raise BadParameter("prism needs k >= 3")
    tris = []
    for i in range(k):
        a, b = 2 + i, 2 + (i + 1) % k
        tris.append((0, a, b))
        tris.append((1, a, b))
    return SimplePolytope3.from_triangles(tris)


def pyramid(k: int) -> GeneralPolytope3:
    """k-gonal pyramid: base vertices 0..k-1, apex k."""
    if k < 3:
        raise BadParameter("pyramid needs k >= 3")
    faces = [list(range(k))] + [[k, (i + 1) % k, i] for i in range(k)]
    return GeneralPolytope3.from_faces(faces)


def antiprism(k: int) -> QuadGraph:
    """k-antiprism: top cycle 0..k-1, bottom cycle k..2k-1."""
    if k < 3:
        raise BadParameter("antiprism needs k >= 3")
    top = list(range(k))
    bot = [k + i for i in range(k)]
    faces = [top, bot[::-1]]
    for i in range(k):
        j = (i + 1) % k
        faces.append([top[i], top[j], bot[i]])
        faces.append([top[j], bot[j], bot[i]])
    return QuadGraph.from_faces(faces)


def dodecahedron() -> SimplePolytope3:
    # nerve = icosahedron: 0 top, 1..5 upper ring, 6..10 lower ring, 11 bottom
    tris = []
    for i in range(5):
        u, u1 = 1 + i, 1 + (i + 1) % 5
        l, l1 = 6 + i, 6 + (i + 1) % 5
        tris += [(0, u, u1), (u, l, u1), (u1, l, l1), (11, l1, l)]
    return SimplePolytope3.from_triangles(tris)


def permutohedron() -> SimplePolytope3:
    """Pe^3: faces are the proper nonempty subsets of {0,1,2,3}, incident when nested."""
    subsets = [s for s in range(1, 15)]
    index = {s: i for i, s in enumerate(subsets)}
    tris = []
    for a in subsets:
        for b in subsets:
            for c in subsets:
                if a & b == a != b and b & c == b != c and bin(a).count("1") == 1 and bin(b).count("1") == 2:
                    tris.append((index[a], index[b], index[c]))
    return SimplePolytope3.from_triangles(tris)


def associahedron() -> SimplePolytope3:
    """As^3: cube with three pairwise disjoint, pairwise orthogonal edges cut."""
    p = cube()
    for e in [(0, 2), (3, 4), (1, 5)]:
        p = cut_edge(p, e)
    return p


def p8() -> SimplePolytope3:
    """The cube with two disjoint orthogonal edges cut."""
    p = cube()
    for e in [(0, 2), (3, 4)]:
        p = cut_edge(p, e)
    return p


NAMED = ("simplex", "cube", "prism", "pyramid", "antiprism", "M5xI", "As3", "Pe3", "P8",
         "dodecahedron", "octahedron")


def make_named(name: str, k: int | None = None):
    """Build a named object; ``k`` is required for the prism/pyramid/antiprism families."""
    if name in ("prism", "pyramid", "antiprism"):
        if k is None:
            raise BadParameter(f"{name} needs a parameter k")
        return {"prism": prism, "pyramid": pyramid, "antiprism": antiprism}[name](k)
    builders = {
        "simplex": simplex,
        "cube": cube,
        "M5xI": lambda: prism(5),
        "As3": associahedron,
        "Pe3": permutohedron,
        "P8": p8,
        "dodecahedron": dodecahedron,
        "octahedron": lambda: as_general(cube()).dual(),
    }
    if name not in builders:
        raise BadParameter(f"unknown polytope {name!r}")
    return builders[name]()


# -- cuts -----------------------------------------------------------------------

def _apexes(p: SimplePolytope3, i: int, j: int) -> list[int]:
    return [next(x for x in t if x != i and x != j) for t in p.vertices if i in t and j in t]


def cut_vertex(p: SimplePolytope3, v: Sequence[int]) -> SimplePolytope3:
    """Cut off the vertex ``v`` (given by its three faces); adds a triangle."""
    t = tuple(sorted(v))
    if t not in p.vertices:
        raise NotFound(f"{v} is not a vertex")
    n = p.m
    i, j, k = t
    tris = [x for x in p.vertices if x != t] + [(i, j, n), (j, k, n), (i, k, n)]
    return SimplePolytope3.from_triangles(tris, m=n + 1)


def cut_edge(p: SimplePolytope3, e: Sequence[int], preserve_apog: bool = False) -> SimplePolytope3:
    """Cut off the edge ``F_i ∩ F_j``; adds a quadrangle.

    With ``preserve_apog`` the edge must not lie in a quadrangle.
    """
    i, j = e
    if not p.adjacent(i, j):
        raise NotFound(f"faces {i}, {j} do not share an edge")
    if preserve_apog and (p.degree(i) == 4 or p.degree(j) == 4):
        raise PreconditionViolated("edge lies in a quadrangle")
    k, l = _apexes(p, i, j)
    n = p.m
    drop = {tuple(sorted((i, j, k))), tuple(sorted((i, j, l)))}
    tris = [x for x in p.vertices if x not in drop]
    tris += [(i, k, n), (j, k, n), (i, l, n), (j, l, n)]
    return SimplePolytope3.from_triangles(tris, m=n + 1)


def cut_edge_pair(p: SimplePolytope3, e1: Sequence[int], e2: Sequence[int],
                  min_face_size: int = 6) -> SimplePolytope3:
    """Cut two adjacent edges of one face by a single plane; adds a pentagon."""
    common = set(e1) & set(e2)
    if len(common) != 1 or len(set(e1)) != 2 or len(set(e2)) != 2:
        raise PreconditionViolated("edges must lie in exactly one common face")
    (f,) = common
    a = next(x for x in e1 if x != f)
    b = next(x for x in e2 if x != f)
    if not (p.adjacent(f, a) and p.adjacent(f, b)):
        raise NotFound("not edges of the polytope")
    if tuple(sorted((f, a, b))) not in p.vertices:
        raise PreconditionViolated("edges are not adjacent")
    if p.degree(f) < min_face_size:
        raise PreconditionViolated(f"face has {p.degree(f)} < {min_face_size} sides")
    a2 = next(x for x in _apexes(p, f, a) if x != b)
    b2 = next(x for x in _apexes(p, f, b) if x != a)
    n = p.m
    drop = {tuple(sorted(t)) for t in [(f, a2, a), (f, a, b), (f, b, b2)]}
    tris = [x for x in p.vertices if x not in drop]
    tris += [(n, f, a2), (n, a2, a), (n, a, b), (n, b, b2), (n, b2, f)]
    return SimplePolytope3.from_triangles(tris, m=n + 1)


# -- truncation and medial graphs -------------------------------------------------

def truncate_full(q: SimplePolytope3 | GeneralPolytope3) -> SimplePolytope3:
    """Cut off all vertices of ``q``, then all old edges.

    Faces of the result: the faces of ``q`` (same order), then one triangle-
    descended face per vertex, then one quadrangle per edge.  Its nerve is the
    barycentric subdivision of the boundary complex of ``q``.
    """
    g = as_general(q).map
    nf = len(g.faces)
    edge_index = {e: i for i, e in enumerate(g.edges)}
    tris = []
    for fi, cyc in enumerate(g.faces):
        k = len(cyc)
        for t in range(k):
            u, v = cyc[t], cyc[(t + 1) % k]
            e = nf + g.n + edge_index[(min(u, v), max(u, v))]
            tris.append((fi, nf + u, e))
            tris.append((fi, nf + v, e))
    return SimplePolytope3.from_triangles(tris, m=nf + g.n + g.num_edges)


def medial(q: SimplePolytope3 | GeneralPolytope3) -> QuadGraph:
    """Medial graph: vertices are edges of ``q``, joined when consecutive in a face."""
    g = as_general(q).map
    edge_index = {e: i for i, e in enumerate(g.edges)}

    def eid(u, v):
        return edge_index[(min(u, v), max(u, v))]

    faces = []
    for cyc in g.faces:
        faces.append([eid(cyc[t], cyc[(t + 1) % len(cyc)]) for t in range(len(cyc))])
    for v in range(g.n):
        faces.append([eid(v, w) for w in g.rot[v]])
    return QuadGraph(PlanarMap.from_faces(faces, n=g.num_edges))


def _checkerboard(g: PlanarMap) -> list[int]:
    faces = g.faces
    colour = [-1] * len(faces)
    colour[0] = 0
    stack = [0]
    while stack:
        fi = stack.pop()
        cyc = faces[fi]
        for t in range(len(cyc)):
            u, v = cyc[t], cyc[(t + 1) % len(cyc)]
            gj = g.face_of_dart(v, u)
            if colour[gj] < 0:
                colour[gj] = 1 - colour[fi]
                stack.append(gj)
            elif colour[gj] == colour[fi]:
                raise NotMedial("faces are not checkerboard colourable")
    return colour


def _base_from_class(g: PlanarMap, colour: list[int], cls: int) -> PlanarMap:
    """Polytope whose vertices are faces of colour ``cls`` and faces are the others."""
    verts = [fi for fi, c in enumerate(colour) if c == cls]
    index = {fi: i for i, fi in enumerate(verts)}
    cycles = []
    for fi, cyc in enumerate(g.faces):
        if colour[fi] == cls:
            continue
        k = len(cyc)
        cycles.append([index[g.face_of_dart(cyc[(t + 1) % k], cyc[t])] for t in range(k)])
    return PlanarMap.from_faces(cycles, n=len(verts))


def recover_base(graph: QuadGraph | PlanarMap) -> tuple[GeneralPolytope3, GeneralPolytope3]:
    """The dual pair ``(Q, Q*)`` whose medial graph is ``graph``.

    ``Q`` is the member with at least as many vertices as faces.
    """
    g = graph.map if isinstance(graph, QuadGraph) else graph
    if any(len(r) != 4 for r in g.rot):
        raise NotMedial("graph is not 4-regular")
    if not g.is_spherical():
        raise NotMedial("rotation system does not describe a sphere")
    if not g.is_3_connected():
        raise NotMedial("graph is not 3-connected")
    colour = _checkerboard(g)
    try:
        maps = [_base_from_class(g, colour, c) for c in (0, 1)]
    except PolykitError as exc:
        raise NotMedial(str(exc)) from None
    for mp in maps:
        if not (mp.is_spherical() and mp.is_3_connected()):
            raise NotMedial("recovered base graph is not polytopal")
    a, b = maps
    if (a.n, a.canonical_code) < (b.n, b.canonical_code):
        a, b = b, a
    return GeneralPolytope3(a, validate=False), GeneralPolytope3(b, validate=False)


def ideal_from_quadgraph(graph: QuadGraph) -> SimplePolytope3:
    """Truncate every vertex of the 4-regular graph into a quadrangle.

    Faces of the result: the faces of ``graph`` first, then one quadrangle per
    vertex.
    """
    g = graph.map if isinstance(graph, QuadGraph) else graph
    nf = len(g.faces)
    tris = []
    for x, y in g.edges:
        f, h = g.face_of_dart(x, y), g.face_of_dart(y, x)
        tris.append((nf + x, f, h))
        tris.append((nf + y, f, h))
    return SimplePolytope3.from_triangles(tris, m=nf + g.n)


def edge_twist(graph: QuadGraph, e1: Sequence[int], e2: Sequence[int],
               restricted: bool = False, face: int | None = None) -> QuadGraph:
    """Twist two disjoint edges of a common face through a new crossing vertex.

    With the face boundary read as ``a, b, ..., c, d, ...`` for ``e1 = ab`` and
    ``e2 = cd``, both edges are deleted and a new vertex ``x`` is joined to
    ``a, b, c, d`` inside the face, so the strands ``a-b`` and ``c-d`` become
    ``a-x-c`` and ``b-x-d``.
    """
    g = graph.map
    u1, v1 = e1
    u2, v2 = e2
    if not (g.adjacent(u1, v1) and g.adjacent(u2, v2)):
        raise NotFound("not edges of the graph")
    if {u1, v1} & {u2, v2}:
        raise PreconditionViolated("edges share a vertex")
    candidates = []
    for fi, cyc in enumerate(g.faces):
        k = len(cyc)
        darts = [(cyc[t], cyc[(t + 1) % k]) for t in range(k)]
        und = [frozenset(d) for d in darts]
        if frozenset(e1) in und and frozenset(e2) in und:
            candidates.append(fi)
    if face is not None:
        if face not in candidates:
            raise PreconditionViolated("edges do not both bound the given face")
        candidates = [face]
    if not candidates:
        raise PreconditionViolated("edges do not lie on a common face")
    fi = candidates[0]
    cyc = list(g.faces[fi])
    k = len(cyc)
    i = next(t for t in range(k) if {cyc[t], cyc[(t + 1) % k]} == set(e1))
    j = next(t for t in range(k) if {cyc[t], cyc[(t + 1) % k]} == set(e2))
    if restricted and (j - i) % k != 2 and (i - j) % k != 2:
        raise PreconditionViolated("edges are not both adjacent to one edge of the face")
    a, b = cyc[i], cyc[(i + 1) % k]
    c, d = cyc[j], cyc[(j + 1) % k]
    x = g.n
    new_faces = []
    # the twisted face splits into two
    arc1 = [cyc[(i + 1 + t) % k] for t in range((j - i) % k)]       # b .. c
    arc2 = [cyc[(j + 1 + t) % k] for t in range((i - j) % k)]       # d .. a
    new_faces.append([x] + arc1)
    new_faces.append([x] + arc2)
    for gj, other in enumerate(g.faces):
        if gj == fi:
            continue
        out = []
        kk = len(other)
        for t in range(kk):
            p_, q_ = other[t], other[(t + 1) % kk]
            out.append(p_)
            if (p_, q_) in ((b, a), (d, c)):
                out.append(x)
        new_faces.append(out)
    try:
        mp = PlanarMap.from_faces(new_faces, n=g.n + 1)
        return QuadGraph(mp)
    except PolykitError as exc:
        raise PreconditionViolated(f"twist does not give a valid graph: {exc}") from None
