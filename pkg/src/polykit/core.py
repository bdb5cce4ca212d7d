"""Simple 3-polytopes, their nerve complexes, parsing and isomorphism.

Faces are numbered ``0..m-1`` internally; the ``.poly`` text format and all
user-facing output number them ``1..m``.  A simple polytope is stored through
its nerve: the triangulated 2-sphere whose vertices are the faces of ``P``,
with the cyclic order of neighbours of every face as rotation system.
Triangles of the nerve are the vertices of ``P``.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import MalformedInput, NotPolytopal, NotSimple
from .planar import PlanarMap

OmegaSubset = int  # bitmask over face indices


def to_mask(faces: Iterable[int]) -> int:
    mk = 0
    for f in faces:
        mk |= 1 << f
    return mk


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class SimplePolytope3:
    """Combinatorial simple 3-polytope with ``m`` faces.

    ``neighbors[i]`` is the cyclic sequence of faces adjacent to face ``i``
    (0-based).  Instances are immutable; derived data is cached.
    """

    def __init__(self, neighbors: Sequence[Sequence[int]] | PlanarMap, validate: bool = True):
        nerve_map = neighbors if isinstance(neighbors, PlanarMap) else PlanarMap(neighbors)
        self.map = nerve_map
        if validate:
            self._validate()

    def _validate(self) -> None:
        m = self.map.n
        if m < 4:
            raise NotPolytopal(f"m={m}: a simple 3-polytope has at least 4 faces")
        for i, r in enumerate(self.map.rot):
            if len(r) < 3:
                raise NotPolytopal(f"face {i + 1} has only {len(r)} neighbours")
        if not self.map.is_connected():
            raise NotPolytopal("face adjacency graph is disconnected")
        if not self.map.is_spherical():
            raise NotPolytopal("rotation system does not describe a sphere")
        for f in self.map.faces:
            if len(f) != 3:
                raise NotSimple(f"a vertex lies on {len(f)} faces")
        if len(set(self.vertices)) != len(self.vertices):
            raise NotSimple("two vertices lie on the same three faces")
        if not self.map.is_3_connected():
            raise NotPolytopal("face adjacency graph is not 3-connected")
        f0, f1 = self.f0, self.f1
        if f0 != 2 * (m - 2) or f1 != 3 * (m - 2):
            raise NotPolytopal("face counts violate the Euler relation")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_triangles(cls, triangles: Iterable[Sequence[int]], m: int | None = None) -> "SimplePolytope3":
        """Build from the vertex set of ``P`` given as face triples."""
        return cls(PlanarMap.from_faces(triangles, n=m))

    # -- structure ----------------------------------------------------------

    @property
    def m(self) -> int:
        return self.map.n

    @property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return self.map.rot

    @property
    def adj(self) -> tuple[int, ...]:
        return self.map.adj_masks

    def adjacent(self, i: int, j: int) -> bool:
        return (self.adj[i] >> j) & 1 == 1

    def degree(self, i: int) -> int:
        """Number of edges of face ``i``."""
        return len(self.map.rot[i])

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.map.edges

    @cached_property
    def vertices(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(sorted(tuple(sorted(f)) for f in self.map.faces))

    @property
    def f0(self) -> int:
        return len(self.map.faces)

    @property
    def f1(self) -> int:
        return self.map.num_edges

    def p_vector(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degree(i) for i in range(self.m)).items()))

    def n2_pairs(self) -> list[tuple[int, int]]:
        """Unordered pairs of disjoint faces, lexicographically ordered."""
        return [(i, j) for i, j in combinations(range(self.m), 2) if not self.adjacent(i, j)]

    def quadrangles(self) -> list[int]:
        return [i for i in range(self.m) if self.degree(i) == 4]

    def nerve(self) -> "NerveComplex":
        return NerveComplex(self.m, self.edges, self.vertices)

    def graph(self) -> PlanarMap:
        """Vertex-edge graph of ``P`` (a cubic planar map), dual to the nerve."""
        return self.map.dual()

    # -- labelling ----------------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> "SimplePolytope3":
        """Rename face ``i`` to ``perm[i]``."""
        return SimplePolytope3(self.map.relabel(perm), validate=False)

    def random_relabel(self, rng: random.Random) -> tuple["SimplePolytope3", list[int]]:
        perm = list(range(self.m))
        rng.shuffle(perm)
        return self.relabel(perm), perm

    @property
    def canonical_code(self) -> tuple[int, ...]:
        return self.map.canonical_code

    @property
    def canonical_hash(self) -> str:
        return self.map.canonical_hash

    def canonical_form(self) -> "SimplePolytope3":
        _, labs = self.map.canonical()
        return self.relabel(labs[0])

    # -- i/o ----------------------------------------------------------------

    def to_text(self, comment: str | None = None) -> str:
        lines = []
        if comment:
            lines.extend(f"# {c}" for c in comment.splitlines())
        lines.append(f"polytope m={self.m}")
        for i, r in enumerate(self.neighbors):
            lines.append(f"{i + 1}: " + " ".join(str(j + 1) for j in r))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return isinstance(other, SimplePolytope3) and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"SimplePolytope3(m={self.m}, p={self.p_vector()})"


@dataclass(frozen=True)
class NerveComplex:
    """The simplicial 2-sphere dual to a simple polytope.

    Vertices are ``0..m-1`` with their natural order; edges and triangles are
    sorted tuples.
    """

    m: int
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple((1 << a) | (1 << b) for a, b in self.edges)

    @cached_property
    def triangle_masks(self) -> tuple[int, ...]:
        return tuple((1 << a) | (1 << b) | (1 << c) for a, b, c in self.triangles)

    @cached_property
    def adj(self) -> tuple[int, ...]:
        out = [0] * self.m
        for a, b in self.edges:
            out[a] |= 1 << b
            out[b] |= 1 << a
        return tuple(out)

    @cached_property
    def simplex_set(self) -> frozenset[int]:
        """All simplices (including the empty one) as bitmasks."""
        s = {0}
        s.update(1 << v for v in range(self.m))
        s.update(self.edge_masks)
        s.update(self.triangle_masks)
        return frozenset(s)

    def is_simplex(self, mask: int) -> bool:
        return mask in self.simplex_set

    def full_subcomplex(self, omega: int):
        """Vertices, edges and triangles of the full subcomplex on ``omega``."""
        verts = members(omega)
        edges = [e for e, mk in zip(self.edges, self.edge_masks) if mk & omega == mk]
        tris = [t for t, mk in zip(self.triangles, self.triangle_masks) if mk & omega == mk]
        return verts, edges, tris

    def euler_characteristic(self) -> int:
        return self.m - len(self.edges) + len(self.triangles)

    def is_2_sphere(self) -> bool:
        """Euler characteristic 2, every edge in two triangles, every link a cycle."""
        if self.euler_characteristic() != 2:
            return False
        count = Counter()
        for t in self.triangles:
            for e in combinations(t, 2):
                count[e] += 1
        if any(count[e] != 2 for e in self.edges) or set(count) != set(self.edges):
            return False
        for v in range(self.m):
            link_edges = [tuple(x for x in t if x != v) for t in self.triangles if v in t]
            deg = Counter()
            for a, b in link_edges:
                deg[a] += 1
                deg[b] += 1
            if not link_edges or any(d != 2 for d in deg.values()):
                return False
            # connected single cycle
            nbr: dict[int, list[int]] = {}
            for a, b in link_edges:
                nbr.setdefault(a, []).append(b)
                nbr.setdefault(b, []).append(a)
            start = next(iter(nbr))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in nbr[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(nbr):
                return False
        return True


# -- parsing ------------------------------------------------------------------

_HEADER = re.compile(r"^\s*polytope\s+m\s*=\s*(\d+)\s*$")
_FACE = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")


def parse_text(text: str) -> SimplePolytope3:
    polys = parse_text_many(text)
    if len(polys) != 1:
        raise MalformedInput(f"expected one polytope, found {len(polys)}")
    return polys[0]


def parse_text_many(text: str) -> list[SimplePolytope3]:
    blocks: list[tuple[int, dict[int, list[int]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        h = _HEADER.match(line)
        if h:
            blocks.append((int(h.group(1)), {}))
            continue
        f = _FACE.match(line)
        if not f or not blocks:
            raise MalformedInput(f"line {lineno}: cannot parse {raw!r}")
        try:
            nbrs = [int(x) for x in re.split(r"[,\s]+", f.group(2).strip()) if x]
        except ValueError:
            raise MalformedInput(f"line {lineno}: non-integer neighbour") from None
        face = int(f.group(1))
        if face in blocks[-1][1]:
            raise MalformedInput(f"line {lineno}: face {face} listed twice")
        blocks[-1][1][face] = nbrs
    out = []
    for m, table in blocks:
        if sorted(table) != list(range(1, m + 1)):
            raise MalformedInput(f"polytope m={m}: faces must be exactly 1..{m}")
        rot = []
        for i in range(1, m + 1):
            if any(not 1 <= j <= m for j in table[i]):
                raise MalformedInput(f"face {i}: neighbour out of range")
            rot.append([j - 1 for j in table[i]])
        out.append(SimplePolytope3(rot))
    return out


PLANAR_CODE_HEADER = b">>planar_code<<"


def read_planar_code(data: bytes, kind: str = "cubic") -> list[SimplePolytope3]:
    """Decode a planar-code stream.

    ``kind="cubic"`` reads graphs of simple polytopes (every vertex of valence
    3); ``kind="triangulation"`` reads nerves directly.
    """
    if kind not in ("cubic", "triangulation"):
        raise ValueError(kind)
    pos = 0
    big_endian = False
    if data.startswith(b">>planar_code"):
        end = data.find(b"<<", 2)
        if end < 0:
            raise MalformedInput("unterminated planar_code header")
        big_endian = b"be" in data[:end]
        pos = end + 2
    out = []
    while pos < len(data):
        n = data[pos]
        pos += 1
        wide = n == 0
        if wide:
            if pos + 2 > len(data):
                raise MalformedInput("truncated planar code")
            n = int.from_bytes(data[pos:pos + 2], "big" if big_endian else "little")
            pos += 2
        rot: list[list[int]] = []
        for _ in range(n):
            r = []
            while True:
                if wide:
                    if pos + 2 > len(data):
                        raise MalformedInput("truncated planar code")
                    x = int.from_bytes(data[pos:pos + 2], "big" if big_endian else "little")
                    pos += 2
                else:
                    if pos >= len(data):
                        raise MalformedInput("truncated planar code")
                    x = data[pos]
                    pos += 1
                if x == 0:
                    break
                r.append(x - 1)
            rot.append(r)
        out.append(_from_planar_graph(PlanarMap(rot), kind))
    return out


def _from_planar_graph(g: PlanarMap, kind: str) -> SimplePolytope3:
    if kind == "triangulation":
        return SimplePolytope3(g)
    if any(len(r) != 3 for r in g.rot):
        raise NotSimple("planar code graph is not cubic")
    if not g.is_spherical():
        raise NotPolytopal("rotation system does not describe a sphere")
    if not g.is_3_connected():
        raise NotPolytopal("cubic graph is not 3-connected")
    return SimplePolytope3(g.dual())


def write_planar_code(polys: Iterable[SimplePolytope3], kind: str = "cubic") -> bytes:
    chunks = [PLANAR_CODE_HEADER]
    for p in polys:
        g = p.graph() if kind == "cubic" else p.map
        if g.n > 255:
            raise ValueError("only graphs with at most 255 vertices are supported")
        buf = bytearray([g.n])
        for r in g.rot:
            buf.extend(w + 1 for w in r)
            buf.append(0)
        chunks.append(bytes(buf))
    return b"".join(chunks)


def parse_polytope(data: bytes | str) -> SimplePolytope3:
    """Parse ``.poly`` text or a single-graph planar-code stream."""
    if isinstance(data, bytes):
        if data.startswith(b">>planar_code"):
            polys = read_planar_code(data)
            if len(polys) != 1:
                raise MalformedInput(f"expected one graph, found {len(polys)}")
            return polys[0]
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedInput("neither text nor planar code") from None
    return parse_text(data)


def load_polytopes(data: bytes | str) -> list[SimplePolytope3]:
    if isinstance(data, bytes):
        if data.startswith(b">>planar_code"):
            return read_planar_code(data)
        data = data.decode("utf-8")
    return parse_text_many(data)


# -- free functions mirroring the methods ---------------------------------------

def nerve(p: SimplePolytope3) -> NerveComplex:
    return p.nerve()


def n2_pairs(p: SimplePolytope3) -> list[tuple[int, int]]:
    return p.n2_pairs()


def p_vector(p: SimplePolytope3) -> dict[int, int]:
    return p.p_vector()


def are_isomorphic(p: SimplePolytope3, q: SimplePolytope3) -> tuple[bool, list[int] | None]:
    """Combinatorial equivalence test with a witness face bijection ``p -> q``."""
    phi = p.map.isomorphism_to(q.map)
    return phi is not None, phi
