"""Face colourings, characteristic maps and face-ring quotients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Sequence

from .core import SimplePolytope3
from .errors import (InvalidCharacteristic, NotEvenPolytope, SearchExhausted, SizeBound)
from .linalg import field_of

E = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1), 4: (1, 1, 1)}


@dataclass(frozen=True)
class FaceColoring:
    colors: tuple[int, ...]  # colour of face i, in 1..k
    k: int

    def is_proper(self, p: SimplePolytope3) -> bool:
        return all(self.colors[a] != self.colors[b] for a, b in p.edges)

    def to_json(self) -> dict:
        return {"k": self.k, "colors": list(self.colors)}


def _search(p: SimplePolytope3, k: int, order: list[int], want_all: bool):
    col = [0] * p.m
    nbrs = p.neighbors
    found = []

    def rec(t):
        if t == len(order):
            found.append(tuple(col))
            return not want_all
        f = order[t]
        used = {col[g] for g in nbrs[f]}
        for c in range(1, k + 1):
            if c not in used:
                col[f] = c
                if rec(t + 1):
                    return True
                col[f] = 0
        return False

    rec(0)
    return found


def _bfs_order(p: SimplePolytope3, start: int) -> list[int]:
    seen = [start]
    i = 0
    while i < len(seen):
        for g in p.neighbors[seen[i]]:
            if g not in seen:
                seen.append(g)
        i += 1
    return seen


def four_coloring(p: SimplePolytope3) -> FaceColoring:
    """A proper colouring with colours 1..4; faces tried by decreasing degree."""
    order = sorted(range(p.m), key=lambda f: (-p.degree(f), f))
    res = _search(p, 4, order, want_all=False)
    if not res:
        raise SearchExhausted("no 4-colouring found")
    return FaceColoring(res[0], 4)


def three_colorings(p: SimplePolytope3) -> list[FaceColoring]:
    """Every proper 3-colouring (exhaustive)."""
    if any(p.degree(f) % 2 for f in range(p.m)):
        raise NotEvenPolytope("a face has an odd number of edges")
    res = _search(p, 3, _bfs_order(p, 0), want_all=True)
    return [FaceColoring(c, 3) for c in sorted(res)]


def three_coloring(p: SimplePolytope3) -> FaceColoring:
    """The 3-colouring of an even polytope, checked unique up to permuting colours."""
    allc = three_colorings(p)
    if not allc:
        raise SearchExhausted("no 3-colouring found")
    if len(allc) != 6:
        raise AssertionError(f"{len(allc)} colourings, expected the 6 permutations of one")
    base = allc[0].colors
    for c in allc:
        perm = {}
        for a, b in zip(base, c.colors):
            if perm.setdefault(a, b) != b:
                raise AssertionError("3-colouring is not unique up to permutation")
    return allc[0]


# -- characteristic maps ----------------------------------------------------------

def _det3(a, b, c) -> int:
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


class CharacteristicMap:
    """Vectors ``Λ(F_i)`` in Z^3 (``mode="Z"``) or Z_2^3 (``mode="Z2"``), checked at every vertex."""

    def __init__(self, p: SimplePolytope3, columns: Sequence[Sequence[int]], mode: str = "Z"):
        if mode not in ("Z", "Z2"):
            raise ValueError(f"unknown mode {mode!r}")
        if len(columns) != p.m or any(len(c) != 3 for c in columns):
            raise InvalidCharacteristic("need one vector in rank 3 per face")
        cols = tuple(tuple(int(x) % 2 if mode == "Z2" else int(x) for x in c) for c in columns)
        self.P = p
        self.columns = cols
        self.mode = mode
        for v in p.vertices:
            d = _det3(*(cols[i] for i in v))
            if (mode == "Z" and abs(d) != 1) or (mode == "Z2" and d % 2 == 0):
                raise InvalidCharacteristic(f"vectors at vertex {[i + 1 for i in v]} are not a basis")

    def reduce_mod2(self) -> "CharacteristicMap":
        return CharacteristicMap(self.P, self.columns, "Z2")

    def matrix(self) -> list[list[int]]:
        """The 3 x m matrix."""
        return [[c[r] for c in self.columns] for r in range(3)]

    def to_json(self) -> dict:
        return {"mode": self.mode, "columns": [list(c) for c in self.columns]}


def lambda_from_coloring(p: SimplePolytope3, coloring: FaceColoring, mode: str = "Z") -> CharacteristicMap:
    """``Λ_c(F_i) = e_{c(i)}`` with ``e_4 = e_1 + e_2 + e_3``."""
    return CharacteristicMap(p, [E[c] for c in coloring.colors], mode)


def canonical_lambda(p: SimplePolytope3, mode: str = "Z") -> CharacteristicMap:
    """The map from the 3-colouring, quadrangles in the third colour when they share one."""
    col = three_coloring(p).colors
    quads = {col[f] for f in p.quadrangles()}
    order = []
    for c in col:
        if c not in order:
            order.append(c)
    if len(quads) == 1:
        q = quads.pop()
        rest = [c for c in order if c != q]
        perm = {rest[0]: 1, rest[1]: 2, q: 3}
    else:
        perm = {c: i + 1 for i, c in enumerate(order)}
    return lambda_from_coloring(p, FaceColoring(tuple(perm[c] for c in col), 3), mode)


# -- face rings -----------------------------------------------------------------------

def stanley_reisner_generators(p: SimplePolytope3) -> list[tuple[int, ...]]:
    """Minimal non-faces of the nerve: disjoint pairs and pairwise-adjacent triples without a vertex."""
    gens = [tuple(e) for e in p.n2_pairs()]
    verts = set(p.vertices)
    for t in combinations(range(p.m), 3):
        if all(p.adjacent(a, b) for a, b in combinations(t, 2)) and t not in verts:
            gens.append(t)
    return sorted(gens, key=lambda g: (len(g), g))


def _monomials(p: SimplePolytope3, d: int) -> list[tuple[int, ...]]:
    """Degree-d monomials (sorted index tuples) supported on a simplex of the nerve."""
    simp = p.nerve().simplex_set
    out = []

    def rec(start, cur, mask):
        if len(cur) == d:
            out.append(tuple(cur))
            return
        for i in range(start, p.m):
            nm = mask | (1 << i)
            if nm in simp:
                cur.append(i)
                rec(i, cur, nm)
                cur.pop()

    rec(0, [], 0)
    return out


def _sparse_rank(rows: list[dict], p: int) -> int:
    """Rank of sparse rows ``{col: value}`` over Q (p = 0) or GF(p)."""
    pivots: dict[int, dict] = {}
    rk = 0
    for r in rows:
        r = {k: (Fraction(v) if p == 0 else v % p) for k, v in r.items()}
        r = {k: v for k, v in r.items() if v}
        while r:
            c = min(r)
            if c not in pivots:
                inv = 1 / r[c] if p == 0 else pow(r[c], -1, p)
                r = {k: (v * inv if p == 0 else v * inv % p) for k, v in r.items()}
                pivots[c] = r
                rk += 1
                break
            f = r[c]
            for k, v in pivots[c].items():
                nv = r.get(k, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rk


def _quotient_dims(p: SimplePolytope3, cols, fp: int, top: int = 4) -> list[int]:
    simp = p.nerve().simplex_set
    mon = {d: _monomials(p, d) for d in range(top + 1)}
    dims = [1]
    for d in range(1, top + 1):
        idx = {mnm: i for i, mnm in enumerate(mon[d])}
        rows = []
        for low in mon[d - 1]:
            lmask = 0
            for i in low:
                lmask |= 1 << i
            for r in range(3):
                row: dict[int, int] = {}
                for i in range(p.m):
                    coef = cols[i][r]
                    if coef and (lmask | (1 << i)) in simp:
                        key = idx[tuple(sorted(low + (i,)))]
                        row[key] = row.get(key, 0) + coef
                if row:
                    rows.append(row)
        dims.append(len(mon[d]) - _sparse_rank(rows, fp))
    return dims


MODES = ("small_cover_Z2", "quasitoric_Z", "quasitoric_Z2")


def face_ring_dims(p: SimplePolytope3, lam: CharacteristicMap, mode: str = "small_cover_Z2") -> tuple[int, ...]:
    """Dimensions of ``k[v_1..v_m] / (I_P + J_Λ)`` in v-degrees 0..3.

    Degree 4 is computed too and must vanish; Poincaré duality is asserted.
    In ``quasitoric_Z`` mode the dimensions over Q and over Z_2 must agree.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "small_cover_Z2" or mode == "quasitoric_Z2":
        CharacteristicMap(p, lam.columns, "Z2")
        dims = _quotient_dims(p, lam.columns, field_of("Z2"))
    else:
        if lam.mode != "Z":
            raise InvalidCharacteristic("quasitoric mode over Z needs an integral map")
        dims = _quotient_dims(p, lam.columns, field_of("Q"))
        dims2 = _quotient_dims(p, lam.columns, field_of("Z2"))
        if dims != dims2:
            raise AssertionError(f"dimensions over Q {dims} and Z2 {dims2} differ")
    if dims[4] != 0:
        raise AssertionError("quotient does not vanish in degree 4")
    out = tuple(dims[:4])
    if out != out[::-1]:
        raise AssertionError(f"Poincaré duality fails: {out}")
    return out


def face_ring_presentation(p: SimplePolytope3, lam: CharacteristicMap) -> dict:
    forms = []
    for r in range(3):
        forms.append([[i + 1, lam.columns[i][r]] for i in range(p.m) if lam.columns[i][r]])
    return {
        "generators": [f"v{i + 1}" for i in range(p.m)],
        "stanley_reisner": [[i + 1 for i in g] for g in stanley_reisner_generators(p)],
        "linear_forms": forms,
    }


# -- equivalence of pairs ------------------------------------------------------------------

def gl3_z2() -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for bits in iproduct((0, 1), repeat=9):
        mat = (bits[0:3], bits[3:6], bits[6:9])
        if _det3(*mat) % 2:
            out.append(mat)
    return out


def pairs_z2_equivalent(p: SimplePolytope3, lam: CharacteristicMap, q: SimplePolytope3,
                        lam2: CharacteristicMap, max_m: int = 20) -> bool:
    """Whether some combinatorial equivalence and some ``C ∈ GL(3, Z_2)`` carry one map to the other."""
    if max(p.m, q.m) > max_m:
        raise SizeBound(f"m exceeds {max_m}")
    if p.m != q.m:
        return False
    isos = p.map.all_isomorphisms_to(q.map)
    if not isos:
        return False
    a = [tuple(x % 2 for x in c) for c in lam.columns]
    b = [tuple(x % 2 for x in c) for c in lam2.columns]
    mats = gl3_z2()
    for phi in isos:
        for C in mats:
            if all(tuple(sum(C[r][s] * a[i][s] for s in range(3)) % 2 for r in range(3)) == b[phi[i]]
                   for i in range(p.m)):
                return True
    return False
