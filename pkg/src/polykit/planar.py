"""Rotation-system planar maps.

A :class:`PlanarMap` is a simple connected graph on vertices ``0..n-1``
together with a cyclic order of the neighbours of every vertex.  Faces are
traced with the rule ``(u, v) -> (v, succ_v(u))``.  Every combinatorial object
in the package (nerves of simple polytopes, general polytopes, medial graphs)
is stored as one of these.
"""

from __future__ import annotations

import hashlib
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

from .errors import MalformedInput, NotPolytopal


class PlanarMap:
    __slots__ = ("rot", "_pos", "__dict__")

    def __init__(self, rot: Sequence[Sequence[int]]):
        rot = tuple(tuple(int(x) for x in r) for r in rot)
        n = len(rot)
        pos = []
        for v, r in enumerate(rot):
            d = {}
            for i, w in enumerate(r):
                if not 0 <= w < n:
                    raise MalformedInput(f"vertex {v}: neighbour {w} out of range")
                if w == v:
                    raise MalformedInput(f"vertex {v}: loop")
                if w in d:
                    raise MalformedInput(f"vertex {v}: repeated neighbour {w}")
                d[w] = i
            pos.append(d)
        for v in range(n):
            for w in rot[v]:
                if v not in pos[w]:
                    raise MalformedInput(f"edge {v}-{w} is not symmetric")
        self.rot = rot
        self._pos = pos

    # -- construction -----------------------------------------------------

    @classmethod
    def from_faces(cls, faces: Iterable[Sequence[int]], n: int | None = None) -> "PlanarMap":
        """Build a map from the vertex cycles of its faces.

        Face orientations are made coherent automatically; a surface that is
        not a closed orientable one raises :class:`NotPolytopal`.
        """
        faces = [tuple(f) for f in faces]
        if not faces:
            raise MalformedInput("no faces")
        if n is None:
            n = 1 + max(max(f) for f in faces)
        edge_faces: dict[tuple[int, int], list[int]] = {}
        for fi, f in enumerate(faces):
            if len(f) < 3 or len(set(f)) != len(f):
                raise MalformedInput(f"bad face {f}")
            for a, b in zip(f, f[1:] + f[:1]):
                edge_faces.setdefault((min(a, b), max(a, b)), []).append(fi)
        for e, fl in edge_faces.items():
            if len(fl) != 2:
                raise NotPolytopal(f"edge {e} lies in {len(fl)} faces")
        # propagate orientations; flip[fi] says whether face fi is reversed
        flip: list[bool | None] = [None] * len(faces)

        def darts(fi):
            f = faces[fi][::-1] if flip[fi] else faces[fi]
            return set(zip(f, f[1:] + f[:1]))

        for start in range(len(faces)):
            if flip[start] is not None:
                continue
            flip[start] = False
            queue = deque([start])
            while queue:
                fi = queue.popleft()
                ds = darts(fi)
                for a, b in ds:
                    for gj in edge_faces[(min(a, b), max(a, b))]:
                        if gj == fi:
                            continue
                        if flip[gj] is None:
                            flip[gj] = False
                            if (a, b) in darts(gj):
                                flip[gj] = True
                            queue.append(gj)
                        elif (a, b) in darts(gj):
                            raise NotPolytopal("surface is not orientable")
        succ: list[dict[int, int]] = [dict() for _ in range(n)]
        for fi, f in enumerate(faces):
            f = f[::-1] if flip[fi] else f
            k = len(f)
            for i in range(k):
                x, v, y = f[i - 1], f[i], f[(i + 1) % k]
                if x in succ[v]:
                    raise NotPolytopal(f"vertex {v} is not a disc neighbourhood")
                succ[v][x] = y
        rot = []
        for v in range(n):
            s = succ[v]
            if not s:
                raise MalformedInput(f"isolated vertex {v}")
            first = min(s)
            cyc = [first]
            w = s[first]
            while w != first:
                cyc.append(w)
                if len(cyc) > len(s):
                    break
                w = s[w]
            if len(cyc) != len(s):
                raise NotPolytopal(f"vertex {v} is a pinch point")
            rot.append(cyc)
        return cls(rot)

    # -- basic structure --------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rot)

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def succ(self, v: int, u: int) -> int:
        r = self.rot[v]
        return r[(self._pos[v][u] + 1) % len(r)]

    def pred(self, v: int, u: int) -> int:
        r = self.rot[v]
        return r[(self._pos[v][u] - 1) % len(r)]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u in range(self.n) for v in self.rot[u] if u < v))

    @property
    def num_edges(self) -> int:
        return sum(len(r) for r in self.rot) // 2

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        out = []
        for r in self.rot:
            mk = 0
            for w in r:
                mk |= 1 << w
            out.append(mk)
        return tuple(out)

    @cached_property
    def _face_data(self):
        faces = []
        dart_face = {}
        for u in range(self.n):
            for v in self.rot[u]:
                if (u, v) in dart_face:
                    continue
                fi = len(faces)
                cyc = []
                a, b = u, v
                while (a, b) not in dart_face:
                    dart_face[(a, b)] = fi
                    cyc.append(a)
                    a, b = b, self.succ(b, a)
                faces.append(tuple(cyc))
        return tuple(faces), dart_face

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Vertex cycles of the faces, in tracing order."""
        return self._face_data[0]

    def face_of_dart(self, u: int, v: int) -> int:
        return self._face_data[1][(u, v)]

    def is_connected(self, removed: int = 0) -> bool:
        alive = [v for v in range(self.n) if not (removed >> v) & 1]
        if not alive:
            return True
        seen = 1 << alive[0]
        stack = [alive[0]]
        masks = self.adj_masks
        while stack:
            v = stack.pop()
            new = masks[v] & ~seen & ~removed
            seen |= new
            while new:
                low = new & -new
                stack.append(low.bit_length() - 1)
                new ^= low
        return bin(seen).count("1") == len(alive)

    def is_spherical(self) -> bool:
        return self.is_connected() and self.n - self.num_edges + len(self.faces) == 2

    def is_3_connected(self) -> bool:
        if self.n < 4 or not self.is_connected():
            return False
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if not self.is_connected((1 << a) | (1 << b)):
                    return False
        return True

    def check_polytopal(self) -> None:
        """Raise :class:`NotPolytopal` unless this is a 3-connected plane graph."""
        if not self.is_spherical():
            raise NotPolytopal("rotation system does not describe a sphere")
        if not self.is_3_connected():
            raise NotPolytopal("graph is not 3-connected")

    def dual(self) -> "PlanarMap":
        cycles = []
        for v in range(self.n):
            cycles.append([self.face_of_dart(v, w) for w in self.rot[v]])
        return PlanarMap.from_faces(cycles, n=len(self.faces))

    def relabel(self, perm: Sequence[int]) -> "PlanarMap":
        """Return the map with vertex ``v`` renamed ``perm[v]``."""
        rot = [None] * self.n
        for v, r in enumerate(self.rot):
            rot[perm[v]] = [perm[w] for w in r]
        return PlanarMap(rot)

    def mirror(self) -> "PlanarMap":
        return PlanarMap([r[::-1] for r in self.rot])

    # -- canonical form -----------------------------------------------------

    def _code_from(self, v0: int, w0: int, forward: bool, best: list[int] | None):
        """BFS code from root dart (v0, w0); aborts early once worse than ``best``."""
        n = self.n
        label = [-1] * n
        first = [0] * n
        order = [v0]
        label[v0] = 0
        first[v0] = w0
        code: list[int] = []
        pos = self._pos
        rot = self.rot
        k = 0
        idx = 0
        smaller = best is None
        while idx < len(order):
            x = order[idx]
            idx += 1
            r = rot[x]
            d = len(r)
            p = pos[x][first[x]]
            step = 1 if forward else -1
            for t in range(d):
                y = r[(p + step * t) % d]
                if label[y] < 0:
                    label[y] = len(order)
                    first[y] = x
                    order.append(y)
                c = label[y] + 1
                if not smaller:
                    b = best[k]
                    if c > b:
                        return None, None
                    if c < b:
                        smaller = True
                code.append(c)
                k += 1
            if not smaller and best[k] != 0:
                smaller = True
            code.append(0)
            k += 1
        return code, label

    def _roots(self):
        degs = [len(r) for r in self.rot]
        key = min((degs[v], degs[w]) for v in range(self.n) for w in self.rot[v])
        return [(v, w) for v in range(self.n) for w in self.rot[v] if (degs[v], degs[w]) == key]

    def canonical(self) -> tuple[tuple[int, ...], list[list[int]]]:
        """Minimal BFS code over all roots and both orientations.

        Returns the code and every labelling (vertex -> canonical index)
        that attains it; the labellings differ by automorphisms.
        """
        best: list[int] | None = None
        labels: list[list[int]] = []
        for v, w in self._roots():
            for forward in (True, False):
                code, lab = self._code_from(v, w, forward, best)
                if code is None:
                    continue
                if best is None or code < best:
                    best = code
                    labels = [lab]
                elif code == best:
                    labels.append(lab)
        return tuple(best), labels

    @cached_property
    def canonical_code(self) -> tuple[int, ...]:
        return self.canonical()[0]

    @cached_property
    def canonical_hash(self) -> str:
        data = ",".join(map(str, self.canonical_code)).encode()
        return hashlib.sha256(data).hexdigest()[:16]

    def isomorphism_to(self, other: "PlanarMap") -> list[int] | None:
        """A vertex bijection self -> other preserving the map up to mirror."""
        if self.n != other.n or self.num_edges != other.num_edges:
            return None
        code_a, labs_a = self.canonical()
        code_b, labs_b = other.canonical()
        if code_a != code_b:
            return None
        inv_b = [0] * other.n
        for v, c in enumerate(labs_b[0]):
            inv_b[c] = v
        return [inv_b[labs_a[0][v]] for v in range(self.n)]

    def all_isomorphisms_to(self, other: "PlanarMap") -> list[list[int]]:
        if self.n != other.n or self.num_edges != other.num_edges:
            return []
        code_a, labs_a = self.canonical()
        code_b, labs_b = other.canonical()
        if code_a != code_b:
            return []
        out = []
        la = labs_a[0]
        for lb in labs_b:
            inv_b = [0] * other.n
            for v, c in enumerate(lb):
                inv_b[c] = v
            out.append([inv_b[la[v]] for v in range(self.n)])
        return out

    def __eq__(self, other):
        return isinstance(other, PlanarMap) and self.rot == other.rot

    def __hash__(self):
        return hash(self.rot)

    def __repr__(self):
        return f"PlanarMap(n={self.n}, e={self.num_edges}, f={len(self.faces)})"
