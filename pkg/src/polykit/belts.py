"""Belts, family classification and separable-circuit checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .core import SimplePolytope3, members, to_mask


class PolytopeClass(str, Enum):
    NotFlag = "NotFlag"
    FlagOnly = "FlagOnly"
    Pogorelov = "Pogorelov"
    AlmostPogorelov = "AlmostPogorelov"
    IdealAlmostPogorelov = "IdealAlmostPogorelov"


APOG_CLASSES = (PolytopeClass.Pogorelov, PolytopeClass.AlmostPogorelov,
                PolytopeClass.IdealAlmostPogorelov)


@dataclass(frozen=True)
class Belt:
    """A k-belt: a chordless cycle of faces, no three sharing a vertex.

    ``faces`` starts at the smallest face and runs towards its smaller
    neighbour.  ``trivial_around`` lists the faces that make up a one-face
    side of the belt (empty when the belt is non-trivial).
    """

    faces: tuple[int, ...]
    trivial_around: tuple[int, ...] = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return len(self.faces)

    @property
    def mask(self) -> int:
        return to_mask(self.faces)

    @property
    def trivial(self) -> bool:
        return bool(self.trivial_around)

    def arcs(self, a: int, b: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The two open arcs of the cycle between members ``a`` and ``b``."""
        f = self.faces
        i, j = f.index(a), f.index(b)
        if i > j:
            i, j = j, i
        return f[i + 1:j], f[j + 1:] + f[:i]

    def to_json(self) -> dict:
        return {"faces": [x + 1 for x in self.faces], "k": self.k,
                "trivial_around": [x + 1 for x in self.trivial_around]}


def _normalize(cycle: list[int]) -> tuple[int, ...]:
    s = cycle.index(min(cycle))
    c = cycle[s:] + cycle[:s]
    if c[-1] < c[1]:
        c = [c[0]] + c[1:][::-1]
    return tuple(c)


def _components(p: SimplePolytope3, mask: int) -> list[int]:
    """Connected components (as masks) of the faces in ``mask``."""
    adj = p.adj
    out = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            for v in members(frontier):
                nxt |= adj[v]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        rest &= ~comp
    return out


def _all_belts(p: SimplePolytope3) -> tuple[Belt, ...]:
    cached = p.__dict__.get("_belts")
    if cached is not None:
        return cached
    adj = p.adj
    m = p.m
    vertex_set = set(p.vertices)
    found = []

    def extend(path, pmask, blocked):
        s = path[0]
        last = path[-1]
        t = len(path)
        cand = adj[last] & ~pmask & ~blocked & ~((1 << (s + 1)) - 1)
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            if t >= 2 and (adj[w] >> s) & 1:
                if path[1] < w:
                    if t == 2 and tuple(sorted((s, path[1], w))) in vertex_set:
                        continue
                    found.append(path + [w])
                continue
            nb = blocked | (adj[last] if t >= 2 else 0)
            extend(path + [w], pmask | low, nb)

    for s in range(m):
        extend([s], 1 << s, 0)

    full = (1 << m) - 1
    belts = []
    for cyc in found:
        mk = to_mask(cyc)
        sides = _components(p, full & ~mk)
        around = []
        for comp in sides:
            if comp & (comp - 1) == 0:
                around.append(comp.bit_length() - 1)
        belts.append(Belt(_normalize(cyc), tuple(sorted(around))))
    belts.sort(key=lambda b: (b.k, b.faces))
    out = tuple(belts)
    p.__dict__["_belts"] = out
    return out


def enumerate_belts(p: SimplePolytope3, k: int | None = None) -> list[Belt]:
    """All k-belts (all belts if ``k`` is None), in canonical order."""
    bs = _all_belts(p)
    if k is None:
        return list(bs)
    return [b for b in bs if b.k == k]


def belts_through(p: SimplePolytope3, faces, forbidden=()) -> list[Belt]:
    need = to_mask(faces)
    avoid = to_mask(forbidden)
    return [b for b in _all_belts(p) if b.mask & need == need and not b.mask & avoid]


# -- classification -------------------------------------------------------------

def is_ideal_vertex_condition(p: SimplePolytope3) -> bool:
    """Every vertex lies on exactly one quadrangle."""
    quad = {i for i in range(p.m) if p.degree(i) == 4}
    return all(sum(1 for f in v if f in quad) == 1 for v in p.vertices)


def _is_cube_or_pentagonal_prism(p: SimplePolytope3) -> bool:
    from .constructions import cube, prism

    pv = p.p_vector()
    if pv == {4: 6}:
        return p.canonical_code == cube().canonical_code
    if pv == {4: 5, 5: 2}:
        return p.canonical_code == prism(5).canonical_code
    return False


def classify(p: SimplePolytope3) -> tuple[PolytopeClass, dict]:
    """The finest family ``p`` belongs to, with the witnessing data."""
    if p.m == 4:
        return PolytopeClass.NotFlag, {"reason": "simplex"}
    b3 = enumerate_belts(p, 3)
    if b3:
        return PolytopeClass.NotFlag, {"reason": "3-belt", "belts": [b.to_json() for b in b3]}
    b4 = enumerate_belts(p, 4)
    if not b4:
        return PolytopeClass.Pogorelov, {"reason": "no 3- or 4-belts"}
    bad = [b for b in b4 if not b.trivial]
    if bad:
        return PolytopeClass.FlagOnly, {"reason": "non-trivial 4-belt",
                                        "belts": [b.to_json() for b in bad]}
    ev = {"reason": "all 4-belts trivial", "belts4": len(b4), "quadrangles": len(p.quadrangles())}
    special = _is_cube_or_pentagonal_prism(p)
    ev["excluded_family_member"] = special
    ideal = is_ideal_vertex_condition(p)
    if not special:
        ev["b4_condition"] = 2 * len(b4) == p.m - 2
        assert ev["b4_condition"] == ideal, "vertex test and belt count disagree"
    if ideal:
        return PolytopeClass.IdealAlmostPogorelov, ev
    return PolytopeClass.AlmostPogorelov, ev


def is_flag(p: SimplePolytope3) -> bool:
    return classify(p)[0] != PolytopeClass.NotFlag


def is_pogorelov(p: SimplePolytope3) -> bool:
    return classify(p)[0] == PolytopeClass.Pogorelov


def is_almost_pogorelov(p: SimplePolytope3) -> bool:
    return classify(p)[0] in APOG_CLASSES


def is_ideal(p: SimplePolytope3) -> bool:
    return classify(p)[0] == PolytopeClass.IdealAlmostPogorelov


# -- separable circuit conditions -------------------------------------------------

def _witness_tables(p: SimplePolytope3):
    """For each disjoint pair (i, j), the masks of faces k admitting a witness belt.

    ``flag_ok[i, j]``: some belt through i, j misses k.
    ``pog_ok[i, j]``: additionally k misses one of the two arcs between i and j.
    """
    cached = p.__dict__.get("_witness")
    if cached is not None:
        return cached
    adj = p.adj
    flag_ok: dict[tuple[int, int], int] = {}
    pog_ok: dict[tuple[int, int], int] = {}
    full = (1 << p.m) - 1
    for b in _all_belts(p):
        f = b.faces
        k = len(f)
        outside = full & ~b.mask
        for x in range(k):
            for y in range(x + 2, k):
                if x == 0 and y == k - 1:
                    continue
                i, j = f[x], f[y]
                key = (i, j) if i < j else (j, i)
                n1 = 0
                for a in f[x + 1:y]:
                    n1 |= adj[a]
                n2 = 0
                for a in f[y + 1:] + f[:x]:
                    n2 |= adj[a]
                flag_ok[key] = flag_ok.get(key, 0) | outside
                pog_ok[key] = pog_ok.get(key, 0) | (outside & (~n1 | ~n2))
    out = (flag_ok, pog_ok)
    p.__dict__["_witness"] = out
    return out


def check_scc(p: SimplePolytope3, variant: str) -> tuple[bool, tuple[int, int, int] | None]:
    """Evaluate a separable circuit condition.

    Returns ``(holds, first violating triple)``.  The simplex has no disjoint
    face pairs, so every condition is vacuous there; it is reported as not
    holding since it is excluded from all three families.
    """
    if variant not in ("flag", "pogorelov", "almost_pogorelov"):
        raise ValueError(f"unknown variant {variant!r}")
    if p.m == 4:
        return False, None
    flag_ok, pog_ok = _witness_tables(p)
    quads = to_mask(p.quadrangles())
    adj = p.adj
    for i, j in p.n2_pairs():
        fo = flag_ok.get((i, j), 0)
        po = pog_ok.get((i, j), 0)
        for k in range(p.m):
            if k == i or k == j:
                continue
            if variant == "flag":
                ok = (fo >> k) & 1
            elif variant == "pogorelov":
                ok = (po >> k) & 1
            else:
                touches = ((quads >> i) & 1 and (adj[i] >> k) & 1) or \
                          ((quads >> j) & 1 and (adj[j] >> k) & 1)
                ok = bool((po >> k) & 1) == (not touches)
            if not ok:
                return False, (i, j, k)
    return True, None


def is_good_pair(p: SimplePolytope3, omega_prime, omega) -> bool:
    """Whether ``omega_prime = {s, t}`` is good for ``omega = {p, q}``."""
    s, t = sorted(omega_prime)
    a, b = omega
    _, pog_ok = _witness_tables(p)
    ok = pog_ok.get((s, t), 0)
    return bool((ok >> a) & 1 or (ok >> b) & 1)


def belt_classes(p: SimplePolytope3, k: int) -> list[int]:
    """Face masks of the k-belts (the supports of the belt classes)."""
    return [b.mask for b in enumerate_belts(p, k)]


def surrounding_belt(p: SimplePolytope3, face: int) -> tuple[int, ...] | None:
    """The neighbours of ``face`` in cyclic order if they form a belt."""
    ring = list(p.neighbors[face])
    for b in enumerate_belts(p, len(ring)):
        if b.faces == _normalize(ring):
            return b.faces
    return None


__all__ = ["Belt", "PolytopeClass", "APOG_CLASSES", "enumerate_belts", "belts_through",
           "classify", "check_scc", "is_good_pair", "is_flag", "is_pogorelov",
           "is_almost_pogorelov", "is_ideal", "is_ideal_vertex_condition", "belt_classes",
           "surrounding_belt"]
