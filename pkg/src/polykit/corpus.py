"""Test corpora: all simple 3-polytopes up to 11 faces, named specimens, ideal families."""

from __future__ import annotations

import random
from importlib import resources
from itertools import combinations

from .constructions import (GeneralPolytope3, QuadGraph, antiprism, cut_edge, cut_edge_pair,
                            edge_twist, ideal_from_quadgraph, make_named, planar_map_from_edges,
                            truncate_full)
from .core import SimplePolytope3, read_planar_code, write_planar_code
from .errors import PolykitError, PreconditionViolated

# number of simple 3-polytopes with m = 4..11 faces
KNOWN_COUNTS = {4: 1, 5: 1, 6: 2, 7: 5, 8: 14, 9: 50, 10: 233, 11: 1249}
DATA_FILE = "simple_m4_11.pc"


def _split(p: SimplePolytope3, v: int, i: int, j: int) -> SimplePolytope3:
    """Split face v of the nerve along neighbours r[i], r[j]."""
    r = p.neighbors[v]
    d = len(r)
    n = p.m
    moved = set()
    t = i
    while t != j:
        moved.add((r[t], r[(t + 1) % d]))
        t = (t + 1) % d
    tris = []
    for tri in p.vertices:
        if v in tri:
            a, b = [x for x in tri if x != v]
            if (a, b) in moved or (b, a) in moved:
                tris.append((n, a, b))
                continue
        tris.append(tri)
    tris.append((v, r[i], n))
    tris.append((v, n, r[j]))
    return SimplePolytope3.from_triangles(tris, m=n + 1)


def generate_simple_polytopes(max_m: int) -> dict[int, list[SimplePolytope3]]:
    """All simple 3-polytopes with at most ``max_m`` faces, in canonical form.

    Nerves are grown from the tetrahedron boundary by vertex splits (every
    sphere triangulation other than the tetrahedron has a contractible edge),
    and deduplicated by canonical code.
    """
    out = {4: [make_named("simplex").canonical_form()]}
    for m in range(5, max_m + 1):
        seen = {}
        for p in out[m - 1]:
            for v in range(p.m):
                d = p.degree(v)
                for i in range(d):
                    for j in range(d):
                        if i == j:
                            continue
                        q = _split(p, v, i, j)
                        code = q.canonical_code
                        if code not in seen:
                            seen[code] = q.canonical_form()
        out[m] = [seen[c] for c in sorted(seen)]
    return out


def exhaustive_corpus(max_m: int = 11) -> list[SimplePolytope3]:
    """All simple 3-polytopes with ``4 <= m <= max_m`` (at most 11) from the packaged file."""
    if max_m > 11:
        raise ValueError("the packaged corpus stops at m = 11")
    data = resources.files("polykit.data").joinpath(DATA_FILE).read_bytes()
    return [p for p in read_planar_code(data) if p.m <= max_m]


def write_corpus_file(path, max_m: int = 11) -> int:
    polys = [p for m, lst in sorted(generate_simple_polytopes(max_m).items()) for p in lst]
    with open(path, "wb") as fh:
        fh.write(write_planar_code(polys))
    return len(polys)


def curated() -> dict[str, SimplePolytope3]:
    names = {
        "simplex": make_named("simplex"),
        "cube": make_named("cube"),
        "M5xI": make_named("M5xI"),
        "As3": make_named("As3"),
        "P8": make_named("P8"),
        "Pe3": make_named("Pe3"),
        "dodecahedron": make_named("dodecahedron"),
    }
    for k in (3, 6, 7, 8):
        names[f"prism{k}"] = make_named("prism", k)
    return names


# -- base polytopes and ideal families ---------------------------------------------

def base_polytopes(max_edges: int) -> list[GeneralPolytope3]:
    """All 3-polytopes with at most ``max_edges`` edges (brute force over graphs)."""
    import networkx as nx

    found = {}
    for n in range(4, 2 * max_edges // 3 + 1):
        pairs = list(combinations(range(n), 2))
        for e in range(max(6, (3 * n + 1) // 2), max_edges + 1):
            for edges in combinations(pairs, e):
                deg = [0] * n
                for a, b in edges:
                    deg[a] += 1
                    deg[b] += 1
                if min(deg) < 3:
                    continue
                g = nx.Graph(edges)
                if g.number_of_nodes() != n or nx.node_connectivity(g) < 3:
                    continue
                if not nx.check_planarity(g)[0]:
                    continue
                mp = planar_map_from_edges(edges)
                found.setdefault(mp.canonical_code, mp)
    return [GeneralPolytope3(found[c]) for c in sorted(found, key=lambda c: (len(c), c))]


def restricted_twists(g: QuadGraph) -> list[tuple[int, tuple[int, int], tuple[int, int]]]:
    """All (face, e1, e2) describing a restricted twist of ``g``."""
    out = []
    for fi, cyc in enumerate(g.map.faces):
        k = len(cyc)
        if k < 4:
            continue
        for i in range(k):
            e1 = (cyc[i], cyc[(i + 1) % k])
            e2 = (cyc[(i + 2) % k], cyc[(i + 3) % k])
            if set(e1) & set(e2):
                continue
            out.append((fi, e1, e2))
    return out


def random_twist_sequence(g: QuadGraph, steps: int, rng: random.Random) -> list[QuadGraph]:
    """Apply ``steps`` random restricted twists, returning every intermediate graph."""
    seq = [g]
    for _ in range(steps):
        opts = restricted_twists(g)
        rng.shuffle(opts)
        for fi, e1, e2 in opts:
            try:
                g = edge_twist(g, e1, e2, restricted=True, face=fi)
                break
            except PreconditionViolated:
                continue
        else:
            break
        seq.append(g)
    return seq


def ideal_corpus(max_edges: int = 9, max_k: int = 6, twist_steps: int = 0,
                 max_m: int | None = None, seed: int = 0) -> list[SimplePolytope3]:
    """Ideal almost Pogorelov polytopes, deduplicated up to isomorphism.

    Sources: full truncations of base polytopes with few edges, the ideal
    polytopes of antiprisms, and restricted twist sequences from the
    4-antiprism.
    """
    seen: dict[tuple, SimplePolytope3] = {}

    def add(p):
        if max_m is None or p.m <= max_m:
            seen.setdefault(p.canonical_code, p)

    for q in base_polytopes(max_edges):
        add(truncate_full(q))
    for k in range(3, max_k + 1):
        if max_m is None or 4 * k + 2 <= max_m:
            add(ideal_from_quadgraph(antiprism(k)))
    if twist_steps:
        rng = random.Random(seed)
        for g in random_twist_sequence(antiprism(4), twist_steps, rng)[1:]:
            add(ideal_from_quadgraph(g))
    return [seen[c] for c in sorted(seen, key=lambda c: (len(c), c))]


def apog_cut_closure(seed: SimplePolytope3, max_m: int) -> list[SimplePolytope3]:
    """Everything reachable from ``seed`` by cutting an edge not in a quadrangle or a
    pair of adjacent edges of a face with at least six sides, up to ``max_m`` faces."""
    seen = {seed.canonical_code: seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for p in frontier:
            if p.m >= max_m:
                continue
            children = []
            for e in p.edges:
                try:
                    children.append(cut_edge(p, e, preserve_apog=True))
                except PolykitError:
                    pass
            for v in p.vertices:
                for f in v:
                    if p.degree(f) < 6:
                        continue
                    a, b = [x for x in v if x != f]
                    children.append(cut_edge_pair(p, (f, a), (f, b)))
            for c in children:
                code = c.canonical_code
                if code not in seen:
                    seen[code] = c
                    nxt.append(c)
        frontier = nxt
    return [seen[c] for c in sorted(seen, key=lambda c: (len(c), c))]
