"""Multigraded cohomology of moment-angle manifolds of simple 3-polytopes.

The group ``H^{-i, 2ω}(Z_P)`` is the reduced cohomology ``H̃^{|ω|-i-1}(K_ω)``
of the full subcomplex of the nerve on ``ω``.  Everything below is indexed by
``(ω, d)`` with ``d`` the reduced degree; the total degree is ``|ω| + d + 1``.

The ring structure is computed in the Koszul model
``Λ[u_1..u_m] ⊗ Z[K] / (v_i², u_i v_i)`` with ``d u_i = v_i``: a cochain on
``K_ω`` in degree ``d`` is a combination of monomials ``u_J v_σ`` with
``J ⊔ σ = ω`` and ``|σ| = d + 1``, and monomials multiply by
``(u_J v_σ)(u_J' v_σ') = ε(J, J') u_{J∪J'} v_{σ∪σ'}``, where ``ε`` is the
sign of the permutation sorting the concatenation ``J J'``.  This product is
graded commutative and associative on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _subsets
from .core import NerveComplex, SimplePolytope3, members, popcount, to_mask
from .errors import NotInBeltSpan, SizeBound, TorsionDetected, ZeroElement
from .linalg import (convert, field_of, in_span, nullspace, rank,
                     reduce_vector, rref, smith_invariants)

DEFAULT_MAX_M = 20


# -- single full subcomplexes -----------------------------------------------------

def _boundary_matrices(K: NerveComplex, omega: int):
    verts, edges, tris = K.full_subcomplex(omega)
    vpos = {v: i for i, v in enumerate(verts)}
    epos = {e: i for i, e in enumerate(edges)}
    d1 = []
    for a, b in edges:
        row = [0] * len(verts)
        row[vpos[a]] = -1
        row[vpos[b]] = 1
        d1.append(row)
    d2 = []
    for a, b, c in tris:
        row = [0] * len(edges)
        row[epos[(b, c)]] = 1
        row[epos[(a, c)]] = -1
        row[epos[(a, b)]] = 1
        d2.append(row)
    return verts, edges, tris, d1, d2


def full_subcomplex_betti(K: NerveComplex, omega: int) -> tuple[tuple[int, int, int, int], bool]:
    """Reduced Betti numbers ``(b̃_-1, b̃_0, b̃_1, b̃_2)`` of ``K_ω`` and a torsion flag.

    Integral Smith normal forms are used, so the flag is exact.  Torsion is
    never expected; it raises :class:`TorsionDetected`.
    """
    if omega == 0:
        return (1, 0, 0, 0), False
    verts, edges, tris, d1, d2 = _boundary_matrices(K, omega)
    s1 = smith_invariants(d1) if d1 else []
    s2 = smith_invariants(d2) if d2 else []
    torsion = any(x != 1 for x in s1 + s2)
    if torsion:
        raise TorsionDetected(f"torsion in the full subcomplex on {members(omega)}")
    r1, r2 = len(s1), len(s2)
    b0 = len(verts) - r1 - 1
    b1 = len(edges) - r1 - r2
    b2 = len(tris) - r2
    return (0, b0, b1, b2), torsion


# -- bigraded tables ------------------------------------------------------------------

@dataclass
class BigradedBettiTable:
    """Reduced Betti numbers of all full subcomplexes.

    ``b0[ω]``, ``b1[ω]`` are the reduced Betti numbers of ``K_ω`` in degrees 0
    and 1; degree -1 is nonzero only at ``ω = ∅`` and degree 2 only at ``[m]``.
    """

    m: int
    b0: np.ndarray
    b1: np.ndarray
    components: np.ndarray | None = None

    def reduced_betti(self, omega: int) -> tuple[int, int, int, int]:
        full = (1 << self.m) - 1
        return (int(omega == 0), int(self.b0[omega]), int(self.b1[omega]), int(omega == full))

    def rank(self, i: int, omega: int) -> int:
        """Rank of ``H^{-i, 2ω}``."""
        d = popcount(omega) - i - 1
        if not -1 <= d <= 2:
            return 0
        return self.reduced_betti(omega)[d + 1]

    @cached_property
    def _sizes(self) -> np.ndarray:
        idx = np.arange(1 << self.m, dtype=np.int64)
        sizes = np.zeros(1 << self.m, dtype=np.int64)
        for v in range(self.m):
            sizes += (idx >> v) & 1
        return sizes

    def aggregates(self) -> dict[tuple[int, int], int]:
        """Ranks of ``H^{-i, 2j}`` summed over ``|ω| = j``."""
        out: dict[tuple[int, int], int] = {}
        sizes = self._sizes
        b0 = np.bincount(sizes, weights=self.b0.astype(np.int64), minlength=self.m + 1)
        b1 = np.bincount(sizes, weights=self.b1.astype(np.int64), minlength=self.m + 1)
        out[(0, 0)] = 1
        for j in range(1, self.m + 1):
            if b0[j]:
                out[(j - 1, j)] = int(round(b0[j]))
            if b1[j]:
                out[(j - 2, j)] = int(round(b1[j]))
        out[(self.m - 3, self.m)] = out.get((self.m - 3, self.m), 0) + 1
        return dict(sorted(out.items()))

    def total_ranks(self) -> list[int]:
        """Ranks of ``H^k(Z_P)`` for ``k = 0..m+3``."""
        tot = [0] * (self.m + 4)
        for (i, j), r in self.aggregates().items():
            tot[2 * j - i] += r
        return tot

    def check_duality(self) -> bool:
        full = (1 << self.m) - 1
        idx = np.arange(1 << self.m)
        comp = full ^ idx
        # b̃_0(ω) = b̃_1(complement) away from ∅ and [m]
        inner = (idx != 0) & (idx != full)
        return bool(np.all(self.b0[inner] == self.b1[comp[inner]]))

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "bigraded": [[i, j, r] for (i, j), r in self.aggregates().items()],
            "total": self.total_ranks(),
        }


def _check_size(m: int, max_m: int | None):
    bound = DEFAULT_MAX_M if max_m is None else max_m
    if m > bound:
        raise SizeBound(f"m={m} exceeds the bound {bound}")


def bigraded_table(p: SimplePolytope3, max_m: int | None = None,
                   method: str = "fast") -> BigradedBettiTable:
    """Full table of reduced Betti numbers of all full subcomplexes.

    ``method="fast"`` counts components and uses the Euler characteristic;
    ``method="linalg"`` ranks every boundary matrix by integer elimination and
    certifies torsion-freeness.
    """
    _check_size(p.m, max_m)
    cache_key = "_table_" + method
    hit = p.__dict__.get(cache_key)
    if hit is not None:
        return hit
    K = p.nerve()
    adj, edges, tris, emasks, tmasks, edge_id = _subsets.nerve_arrays(K)
    m = p.m
    V, E, T = _subsets.face_counts_all(m, emasks, tmasks)
    full = (1 << m) - 1
    if method == "fast":
        C = _subsets.components_all(m, adj)
        b0 = np.maximum(C - 1, 0)
        b1 = C - V + E - T
        b1[full] = 0
        table = BigradedBettiTable(m, b0.astype(np.int32), b1.astype(np.int32), C)
    elif method == "linalg":
        r1, r2 = _subsets.boundary_ranks_all(m, edges, tris, edge_id)
        stuck = np.nonzero((r1 < 0) | (r2 < 0))[0]
        for mask in stuck:
            _, _, _, d1, d2 = _boundary_matrices(K, int(mask))
            s1 = smith_invariants(d1) if d1 else []
            s2 = smith_invariants(d2) if d2 else []
            if any(x != 1 for x in s1 + s2):
                raise TorsionDetected(f"torsion in the full subcomplex on {members(int(mask))}")
            r1[mask], r2[mask] = len(s1), len(s2)
        b0 = V - r1 - 1
        b0[0] = 0
        b1 = E - r1 - r2
        b2 = T - r2
        if b2[full] != 1 or np.any(b2[:full] != 0):
            raise AssertionError("top cohomology outside the full sphere")
        table = BigradedBettiTable(m, b0.astype(np.int32), b1.astype(np.int32))
    else:
        raise ValueError(f"unknown method {method!r}")
    p.__dict__[cache_key] = table
    return table


def hochster_total_ranks(p: SimplePolytope3, table: BigradedBettiTable | None = None) -> list[int]:
    """``rk H^k = Σ_{|ω|=k-1} b̃_0(K_ω) + Σ_{|ω|=k-2} b̃_1(K_ω)``, plus the unit and top class."""
    t = table or bigraded_table(p)
    sizes = t._sizes
    m = p.m
    out = [0] * (m + 4)
    out[0] = 1
    out[m + 3] += 1
    for k in range(m + 4):
        if 1 <= k - 1 <= m:
            out[k] += int(t.b0[sizes == k - 1].sum())
        if 0 <= k - 2 <= m:
            out[k] += int(t.b1[sizes == k - 2].sum())
    return out


# -- the ring --------------------------------------------------------------------------

def _sort_sign(j1: int, j2: int) -> int:
    """Sign of the permutation sorting the concatenation of two disjoint sets."""
    inv = 0
    for a in members(j1):
        inv += popcount(j2 & ((1 << a) - 1))
    return -1 if inv & 1 else 1


class _OmegaData:
    """Cochains, coboundaries and a fixed cohomology basis of one ``K_ω``."""

    __slots__ = ("omega", "simplices", "index", "B", "H", "reps")

    def __init__(self, ring: "HochsterRing", omega: int):
        fp = ring.p
        simp = [s for s in ring.subsets_of(omega) if s in ring.simplex_set]
        self.omega = omega
        self.simplices = {}
        self.index = {}
        for d in (-1, 0, 1, 2):
            lst = sorted((s for s in simp if popcount(s) == d + 1), key=lambda s: members(s))
            self.simplices[d] = lst
            self.index[d] = {s: i for i, s in enumerate(lst)}

        def delta_rows(d):
            """Coboundary images of the degree-d basis cochains, in degree d+1 coordinates."""
            rows = []
            tgt = self.index.get(d + 1, {})
            n_t = len(self.simplices.get(d + 1, []))
            for s in self.simplices[d]:
                row = [0] * n_t
                J = omega & ~s
                pos = 0
                for j in members(J):
                    t = s | (1 << j)
                    if t in tgt:
                        row[tgt[t]] = -1 if pos & 1 else 1
                    pos += 1
                rows.append(row)
            return rows

        self.B = {}
        self.H = {}
        self.reps = {}
        for d in (-1, 0, 1, 2):
            n = len(self.simplices[d])
            if n == 0:
                self.B[d] = ([], [])
                self.H[d] = ([], [])
                self.reps[d] = []
                continue
            # cocycles: kernel of the coboundary, as rows x with x * D = 0
            if d < 2 and self.simplices.get(d + 1):
                D = delta_rows(d)
                cols = [[D[i][j] for i in range(n)] for j in range(len(D[0]))]
                Z = nullspace(cols, n, fp)
            else:
                Z = [[convert(int(i == j), fp) for j in range(n)] for i in range(n)]
            if d > -1 and self.simplices[d - 1]:
                Brows, Bpiv = rref(delta_rows(d - 1), n, fp)
            else:
                Brows, Bpiv = [], []
            reduced = [reduce_vector(z, Brows, Bpiv, fp) for z in Z]
            reduced = [z for z in reduced if any(z)]
            Hrows, Hpiv = rref(reduced, n, fp) if reduced else ([], [])
            self.B[d] = (Brows, Bpiv)
            self.H[d] = (Hrows, Hpiv)
            lst = self.simplices[d]
            self.reps[d] = [{lst[i]: x for i, x in enumerate(r) if x} for r in Hrows]

    def dim(self, d: int) -> int:
        return len(self.reps.get(d, []))


class RingElement:
    """An element of ``H*(Z_P)`` as coordinate vectors on the fixed bases of the ``(ω, d)`` pieces."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring: "HochsterRing", comps: dict[tuple[int, int], tuple]):
        self.ring = ring
        self.comps = {k: tuple(v) for k, v in comps.items() if any(v)}

    def degrees(self) -> set[int]:
        return {popcount(o) + d + 1 for o, d in self.comps}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is zero or not homogeneous")
        return ds.pop()

    def is_zero(self) -> bool:
        return not self.comps

    def support(self) -> list[int]:
        return sorted({o for o, _ in self.comps})

    def __add__(self, other: "RingElement") -> "RingElement":
        fp = self.ring.p
        out = dict(self.comps)
        for k, v in other.comps.items():
            if k in out:
                s = [a + b for a, b in zip(out[k], v)]
                out[k] = tuple(x % fp for x in s) if fp else tuple(s)
            else:
                out[k] = v
        return RingElement(self.ring, out)

    def scale(self, c) -> "RingElement":
        fp = self.ring.p
        c = convert(c, fp)
        return RingElement(self.ring, {k: tuple((c * x) % fp if fp else c * x for x in v)
                                       for k, v in self.comps.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return self.ring.product(self, other)

    def __eq__(self, other):
        return isinstance(other, RingElement) and self.comps == other.comps

    def __repr__(self):
        parts = [f"(ω={members(o)}, d={d}): {list(v)}" for (o, d), v in sorted(self.comps.items())]
        return "RingElement(" + ", ".join(parts) + ")"


class HochsterRing:
    """``H*(Z_P)`` over ``Q`` or ``Z2`` with the Koszul-model product.

    Bases of the pieces are computed lazily and cached on the instance; they
    depend on the face labelling, so a relabelled polytope gets its own ring.
    """

    def __init__(self, p: SimplePolytope3, field: str = "Q", max_m: int | None = None):
        _check_size(p.m, max_m)
        self.P = p
        self.m = p.m
        self.field = field
        self.p = field_of(field)
        self.nerve = p.nerve()
        self.simplex_set = self.nerve.simplex_set
        self._data: dict[int, _OmegaData] = {}
        self._prod: dict = {}

    # -- pieces ----------------------------------------------------------------

    @staticmethod
    def subsets_of(omega: int) -> Iterable[int]:
        s = omega
        while True:
            yield s
            if s == 0:
                return
            s = (s - 1) & omega

    def data(self, omega: int) -> _OmegaData:
        d = self._data.get(omega)
        if d is None:
            d = _OmegaData(self, omega)
            self._data[omega] = d
        return d

    def dim(self, omega: int, d: int) -> int:
        return self.data(omega).dim(d)

    def coords(self, omega: int, d: int, cochain: dict[int, object]) -> tuple:
        """Coordinates of the class of a cocycle given as ``{simplex mask: coefficient}``."""
        od = self.data(omega)
        lst = od.simplices[d]
        if not lst:
            return ()
        idx = od.index[d]
        v = [convert(0, self.p)] * len(lst)
        for s, c in cochain.items():
            v[idx[s]] = convert(c, self.p)
        Brows, Bpiv = od.B[d]
        v = reduce_vector(v, Brows, Bpiv, self.p)
        _, Hpiv = od.H[d]
        return tuple(v[c] for c in Hpiv)

    def is_cocycle(self, omega: int, d: int, cochain: dict) -> bool:
        return not any(self.coboundary(omega, d, cochain).values())

    def coboundary(self, omega: int, d: int, cochain: dict) -> dict:
        out: dict[int, object] = {}
        for s, c in cochain.items():
            J = omega & ~s
            pos = 0
            for j in members(J):
                t = s | (1 << j)
                if t in self.simplex_set:
                    val = -c if pos & 1 else c
                    out[t] = out.get(t, 0) + val
                pos += 1
        if self.p:
            out = {k: v % self.p for k, v in out.items()}
        return {k: v for k, v in out.items() if v}

    def representative(self, x: RingElement) -> dict[tuple[int, int], dict]:
        out = {}
        for (o, d), vec in x.comps.items():
            reps = self.data(o).reps[d]
            acc: dict[int, object] = {}
            for c, r in zip(vec, reps):
                if c:
                    for s, val in r.items():
                        acc[s] = acc.get(s, 0) + c * val
            if self.p:
                acc = {k: v % self.p for k, v in acc.items()}
            out[(o, d)] = {k: v for k, v in acc.items() if v}
        return out

    # -- named elements ------------------------------------------------------------

    def element(self, omega: int, d: int, vec: Sequence) -> RingElement:
        if len(vec) != self.dim(omega, d):
            raise ValueError("coefficient vector has the wrong length")
        return RingElement(self, {(omega, d): tuple(convert(x, self.p) for x in vec)})

    def basis_element(self, omega: int, d: int, a: int = 0) -> RingElement:
        n = self.dim(omega, d)
        return self.element(omega, d, [int(i == a) for i in range(n)])

    def basis(self, omega: int, d: int) -> list[RingElement]:
        return [self.basis_element(omega, d, a) for a in range(self.dim(omega, d))]

    def unit(self) -> RingElement:
        return self.basis_element(0, -1)

    def fundamental(self) -> RingElement:
        return self.basis_element((1 << self.m) - 1, 2)

    def omega_tilde(self, i: int, j: int) -> RingElement:
        """Generator of ``H̃^0(K_{ij})`` for a disjoint face pair."""
        if self.P.adjacent(i, j) or i == j:
            raise ValueError(f"faces {i}, {j} are not disjoint")
        return self.basis_element((1 << i) | (1 << j), 0)

    def belt_class(self, faces: Iterable[int]) -> RingElement:
        """Generator of ``H̃^1(K_ω)`` for the face set of a belt."""
        omega = to_mask(faces)
        if self.dim(omega, 1) != 1:
            raise ValueError("not the face set of a belt")
        return self.basis_element(omega, 1)

    def zero(self) -> RingElement:
        return RingElement(self, {})

    # -- products -------------------------------------------------------------------

    def cochain_product(self, o1: int, z1: dict, o2: int, z2: dict) -> dict:
        out: dict[int, object] = {}
        for s1, c1 in z1.items():
            j1 = o1 & ~s1
            for s2, c2 in z2.items():
                s = s1 | s2
                if s not in self.simplex_set:
                    continue
                sign = _sort_sign(j1, o2 & ~s2)
                out[s] = out.get(s, 0) + (c1 * c2 if sign > 0 else -c1 * c2)
        if self.p:
            out = {k: v % self.p for k, v in out.items()}
        return {k: v for k, v in out.items() if v}

    def basis_product(self, o1: int, d1: int, a: int, o2: int, d2: int, b: int) -> tuple:
        """Coordinates of (basis a of (o1,d1)) * (basis b of (o2,d2)) in (o1|o2, d1+d2+1)."""
        key = (o1, d1, a, o2, d2, b)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        o, d = o1 | o2, d1 + d2 + 1
        if o1 & o2 or d > 2 or self.dim(o, d) == 0:
            res = ()
        else:
            z = self.cochain_product(o1, self.data(o1).reps[d1][a], o2, self.data(o2).reps[d2][b])
            res = self.coords(o, d, z) if z else tuple(convert(0, self.p) for _ in range(self.dim(o, d)))
        self._prod[key] = res
        return res

    def product(self, x: RingElement, y: RingElement) -> RingElement:
        fp = self.p
        out: dict[tuple[int, int], list] = {}
        for (o1, d1), v1 in x.comps.items():
            for (o2, d2), v2 in y.comps.items():
                if o1 & o2:
                    continue
                o, d = o1 | o2, d1 + d2 + 1
                n = self.dim(o, d) if d <= 2 else 0
                if n == 0:
                    continue
                acc = out.setdefault((o, d), [convert(0, fp)] * n)
                for a, ca in enumerate(v1):
                    if not ca:
                        continue
                    for b, cb in enumerate(v2):
                        if not cb:
                            continue
                        res = self.basis_product(o1, d1, a, o2, d2, b)
                        c = ca * cb
                        for t, r in enumerate(res):
                            if r:
                                acc[t] += c * r
        if fp:
            out = {k: [x % fp for x in v] for k, v in out.items()}
        return RingElement(self, {k: tuple(v) for k, v in out.items()})

    def multiplication_block(self, x: RingElement, src: tuple[int, int]) -> dict[tuple[int, int], list[list]]:
        """Matrices of ``y -> x*y`` restricted to the piece ``src``, keyed by target piece.

        Each matrix has one row per basis vector of ``src``.
        """
        o2, d2 = src
        n2 = self.dim(o2, d2)
        out: dict[tuple[int, int], list[list]] = {}
        for (o1, d1), v1 in x.comps.items():
            if o1 & o2:
                continue
            o, d = o1 | o2, d1 + d2 + 1
            if d > 2:
                continue
            n = self.dim(o, d)
            if n == 0:
                continue
            mat = out.setdefault((o, d), [[convert(0, self.p)] * n for _ in range(n2)])
            for b in range(n2):
                for a, ca in enumerate(v1):
                    if not ca:
                        continue
                    res = self.basis_product(o1, d1, a, o2, d2, b)
                    for t, r in enumerate(res):
                        if r:
                            mat[b][t] += ca * r
        if self.p:
            for mat in out.values():
                for row in mat:
                    for t in range(len(row)):
                        row[t] %= self.p
        return out

    def total_dim(self) -> int:
        t = bigraded_table(self.P, max_m=self.m)
        return 2 + int(t.b0.sum()) + int(t.b1.sum())

    def nonzero_pieces(self) -> list[tuple[int, int]]:
        t = bigraded_table(self.P, max_m=self.m)
        out = [(0, -1)]
        for mask in np.nonzero(t.b0)[0]:
            out.append((int(mask), 0))
        for mask in np.nonzero(t.b1)[0]:
            out.append((int(mask), 1))
        out.append(((1 << self.m) - 1, 2))
        return out


def cohomology_ring(p: SimplePolytope3, field: str = "Q") -> HochsterRing:
    key = "_ring_" + field
    r = p.__dict__.get(key)
    if r is None:
        r = HochsterRing(p, field, max_m=max(p.m, DEFAULT_MAX_M))
        p.__dict__[key] = r
    return r


def product(x: RingElement, y: RingElement) -> RingElement:
    return x.ring.product(x, y)


# -- ranks used by the criteria ------------------------------------------------------

def _ring(p, field="Q"):
    return p if isinstance(p, HochsterRing) else cohomology_ring(p, field)


def h3_h3_pairing_rank(p, field: str = "Q") -> int:
    """Rank of the product pairing ``H^3 ⊗ H^3 -> H^6`` on the basis of pair classes."""
    R = _ring(p, field)
    P = R.P
    n2 = [to_mask(e) for e in P.n2_pairs()]
    rows = []
    col = {o: i for i, o in enumerate(n2)}
    for y in n2:
        blocks: dict[int, list] = {}
        for x in n2:
            if x & y:
                continue
            o = x | y
            if R.dim(o, 1) == 0:
                continue
            res = R.basis_product(x, 0, 0, y, 0, 0)
            blocks.setdefault(o, []).append((col[x], res))
        for o, items in blocks.items():
            for t in range(R.dim(o, 1)):
                row = [0] * len(n2)
                for c, res in items:
                    row[c] = res[t]
                rows.append(row)
    return rank(rows, len(n2), R.p) if rows else 0


def a3_rank(p, field: str = "Q") -> int:
    """``rk A_3``: dimension of the kernel of the ``H^3 × H^3 -> H^6`` pairing."""
    R = _ring(p, field)
    return len(R.P.n2_pairs()) - h3_h3_pairing_rank(R, field)


def a3_rank_combinatorial(p: SimplePolytope3) -> int:
    """Number of disjoint face pairs contained together in no 4-belt."""
    from .belts import enumerate_belts

    covered = set()
    for b in enumerate_belts(p, 4):
        f = b.faces
        covered.add(tuple(sorted((f[0], f[2]))))
        covered.add(tuple(sorted((f[1], f[3]))))
    return sum(1 for e in p.n2_pairs() if e not in covered)


def bk_rank(p: SimplePolytope3, k: int) -> int:
    """Number of ``ω`` with ``|ω| = k`` whose full subcomplex is a chordless k-cycle.

    Computed from the nerve alone; it is the rank of the span of belt classes
    in degree ``k + 2``, since those classes live in distinct multidegrees.
    """
    return bk_ranks(p).get(k, 0)


def bk_ranks(p: SimplePolytope3) -> dict[int, int]:
    hit = p.__dict__.get("_bk")
    if hit is not None:
        return hit
    K = p.nerve()
    adj, _, _, emasks, tmasks, _ = _subsets.nerve_arrays(K)
    cyc = _subsets.cycles_all(p.m, adj)
    t = bigraded_table(p, max_m=max(p.m, DEFAULT_MAX_M))
    _, _, T = _subsets.face_counts_all(p.m, emasks, tmasks)
    ok = (cyc == 1) & (T == 0) & (t.b1 == 1)
    sizes = t._sizes
    counts = np.bincount(sizes[ok], minlength=p.m + 1)
    out = {k: int(counts[k]) for k in range(3, p.m - 1)}
    p.__dict__["_bk"] = out
    return out


def i7_rank(p, field: str = "Q") -> int:
    """Rank of the image of ``H^3 ⊗ H^4 -> H^7``.

    ``H^4`` is spanned by ``H̃^0(K_τ)`` with ``|τ| = 3``; products land in
    ``H̃^1(K_ρ)`` with ``|ρ| = 5``, so the rank is a sum of per-``ρ`` block ranks.
    """
    R = _ring(p, field)
    P = R.P
    t = bigraded_table(P, max_m=max(P.m, DEFAULT_MAX_M))
    n2 = [to_mask(e) for e in P.n2_pairs()]
    by_target: dict[int, list] = {}
    for w in n2:
        rest = ((1 << P.m) - 1) & ~w
        for tau_t in combinations(members(rest), 3):
            tau = to_mask(tau_t)
            if t.b0[tau] == 0:
                continue
            rho = w | tau
            if t.b1[rho] == 0:
                continue
            by_target.setdefault(rho, []).append((w, tau))
    total = 0
    for rho, pairs in by_target.items():
        rows = []
        for w, tau in pairs:
            for b in range(R.dim(tau, 0)):
                rows.append(list(R.basis_product(w, 0, 0, tau, 0, b)))
        total += rank(rows, R.dim(rho, 1), R.p)
    return total


def annihilator_dim(p, x: RingElement) -> int:
    """``dim {y ∈ H : x·y = 0}`` by assembling the multiplication map piece by piece."""
    R = x.ring if isinstance(x, RingElement) else _ring(p)
    if x.is_zero():
        raise ZeroElement("annihilator of zero")
    pieces = R.nonzero_pieces()
    # union-find over sources and targets
    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    blocks = {}
    for src in pieces:
        b = R.multiplication_block(x, src)
        for tgt, mat in b.items():
            blocks[(src, tgt)] = mat
            ra, rb = find(("s", src)), find(("t", tgt))
            if ra != rb:
                parent[ra] = rb
    groups: dict = {}
    for (src, tgt), mat in blocks.items():
        groups.setdefault(find(("s", src)), []).append((src, tgt, mat))
    total_rank = 0
    for items in groups.values():
        srcs = sorted({s for s, _, _ in items})
        tgts = sorted({t for _, t, _ in items})
        soff, off = {}, 0
        for s in srcs:
            soff[s] = off
            off += R.dim(*s)
        nrows = off
        toff, off = {}, 0
        for tg in tgts:
            toff[tg] = off
            off += R.dim(*tg)
        ncols = off
        M = [[0] * ncols for _ in range(nrows)]
        for s, tg, mat in items:
            for i, row in enumerate(mat):
                for j, v in enumerate(row):
                    if v:
                        M[soff[s] + i][toff[tg] + j] = v
        total_rank += rank(M, ncols, R.p)
    return R.total_dim() - total_rank


def annihilator_dim_pair(p: SimplePolytope3, pair: tuple[int, int],
                         table: BigradedBettiTable | None = None) -> int:
    """``dim Ann(ω̃)`` for a disjoint pair, from component counts alone.

    Multiplication by ``ω̃ = {a, b}`` is injective on the unit, has rank one on
    ``H̃^1(K_{[m]∖ω})`` and on ``H̃^0(K_τ)`` has rank
    ``c(τ) - c(τ∪a) - c(τ∪b) + c(τ∪{a,b})`` (``c`` = number of components).
    """
    t = table or bigraded_table(p)
    C = t.components
    if C is None:
        t = bigraded_table(p, method="fast")
        C = t.components
    a, b = pair
    ab = (1 << a) | (1 << b)
    idx = np.arange(1 << p.m, dtype=np.int64)
    tau = idx[(idx & ab) == 0]
    C = C.astype(np.int64)
    r = C[tau] - C[tau | (1 << a)] - C[tau | (1 << b)] + C[tau | ab]
    rk = int(r.sum()) + 2
    total = 2 + int(t.b0.sum()) + int(t.b1.sum())
    return total - rk


def annihilator_multiset(p: SimplePolytope3) -> list[int]:
    t = bigraded_table(p, method="fast")
    return sorted(annihilator_dim_pair(p, e, t) for e in p.n2_pairs())


def in_belt_span(x: RingElement) -> bool:
    R = x.ring
    for (o, d) in x.comps:
        if d != 1 or R.dim(o, 1) != 1:
            return False
        verts, edges, tris = R.nerve.full_subcomplex(o)
        if tris or len(edges) != len(verts):
            return False
    return True


def divides(x: RingElement, pair: tuple[int, int]) -> bool:
    """Whether the pair class divides a combination of belt classes.

    Decided by the support rule: every belt with nonzero coefficient must
    contain both faces of the pair.
    """
    if not in_belt_span(x):
        raise NotInBeltSpan("element is not a combination of belt classes")
    w = (1 << pair[0]) | (1 << pair[1])
    return all(o & w == w for o, _ in x.comps)


def divides_algebraic(x: RingElement, pair: tuple[int, int]) -> bool:
    """Whether ``x = ω̃ · z`` has a solution ``z`` over the ring's field."""
    R = x.ring
    i, j = pair
    if R.P.adjacent(i, j):
        raise ValueError(f"faces {i}, {j} are not disjoint")
    w = (1 << i) | (1 << j)
    for (o, d), vec in x.comps.items():
        if o & w != w:
            return False
        tau = o & ~w
        rows = [list(R.basis_product(w, 0, 0, tau, d - 1, b)) for b in range(R.dim(tau, d - 1))]
        if not rows or not in_span(list(vec), rows, R.dim(o, d), R.p):
            return False
    return True
