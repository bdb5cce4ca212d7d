"""Invariant fingerprints, criterion checks and relabelling experiments."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from typing import Sequence

from .belts import (APOG_CLASSES, PolytopeClass, _is_cube_or_pentagonal_prism, check_scc,
                    classify, enumerate_belts, is_ideal_vertex_condition)
from .cohomology import (DEFAULT_MAX_M, a3_rank, annihilator_multiset, bigraded_table,
                         bk_ranks, cohomology_ring, h3_h3_pairing_rank, i7_rank)
from .core import SimplePolytope3
from .errors import NotEvenPolytope, SizeBound
from .toric import canonical_lambda, face_ring_dims

CRITERIA = ("flag_h4", "apog_ranks", "ideal_b4", "scc_equiv", "pogorelov_h3h3")


@dataclass(frozen=True)
class Fingerprint:
    m: int
    betti: tuple[int, ...]
    bigraded: tuple[tuple[int, int, int], ...]
    bk: tuple[tuple[int, int], ...]
    a3: int
    i7: int
    p_vector: tuple[tuple[int, int], ...]
    tag: str
    annihilators: tuple[int, ...]
    face_ring: tuple[int, ...] | None

    def to_json(self) -> dict:
        d = asdict(self)
        return json.loads(json.dumps(d))

    def key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def fingerprint(p: SimplePolytope3, max_m: int | None = None) -> Fingerprint:
    bound = DEFAULT_MAX_M if max_m is None else max_m
    if p.m > bound:
        raise SizeBound(f"m={p.m} exceeds the bound {bound}")
    t = bigraded_table(p, max_m=bound)
    R = cohomology_ring(p)
    try:
        fr = face_ring_dims(p, canonical_lambda(p), "small_cover_Z2")
    except NotEvenPolytope:
        fr = None
    return Fingerprint(
        m=p.m,
        betti=tuple(t.total_ranks()),
        bigraded=tuple((i, j, r) for (i, j), r in t.aggregates().items()),
        bk=tuple(sorted(bk_ranks(p).items())),
        a3=a3_rank(R),
        i7=i7_rank(R),
        p_vector=tuple(sorted(p.p_vector().items())),
        tag=classify(p)[0].value,
        annihilators=tuple(annihilator_multiset(p)),
        face_ring=fr,
    )


def _h4_target(m: int) -> int:
    return (m - 2) * (m - 4) * (m - 6) // 3


def verify_criterion(p: SimplePolytope3, criterion: str) -> dict:
    """Evaluate both sides of an equivalence independently.

    ``lhs`` is the combinatorial side, ``rhs`` the cohomological one.  When
    the polytope falls outside the hypotheses of the criterion the report has
    ``applicable = False`` and ``agree = None``.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    tag, _ = classify(p)
    flag = tag != PolytopeClass.NotFlag
    rep = {"criterion": criterion, "m": p.m, "class": tag.value, "hash": p.canonical_hash}
    num: dict = {}
    if criterion == "flag_h4":
        applicable = p.m > 4
        h4 = bigraded_table(p).total_ranks()[4]
        num = {"rk_H4": h4, "target": _h4_target(p.m)}
        lhs, rhs = flag, h4 == _h4_target(p.m)
    elif criterion == "apog_ranks":
        applicable = flag
        R = cohomology_ring(p)
        b = bk_ranks(p)
        b4, b5 = b.get(4, 0), b.get(5, 0)
        n2 = len(p.n2_pairs())
        a3 = a3_rank(R)
        i7 = i7_rank(R)
        num = {"rk_B4": b4, "rk_B5": b5, "rk_H3": n2, "rk_A3": a3, "rk_I7": i7,
               "belts4": len(enumerate_belts(p, 4)), "belts5": len(enumerate_belts(p, 5))}
        lhs = tag in APOG_CLASSES and not _is_cube_or_pentagonal_prism(p)
        rhs = 2 * b4 == n2 - a3 and i7 == b5 + (p.m - 5) * b4
        num["eq_B4"] = 2 * b4 == n2 - a3
        num["eq_I7"] = i7 == b5 + (p.m - 5) * b4
    elif criterion == "ideal_b4":
        applicable = tag in APOG_CLASSES and not _is_cube_or_pentagonal_prism(p)
        b4 = bk_ranks(p).get(4, 0)
        num = {"rk_B4": b4, "p4": len(p.quadrangles())}
        lhs, rhs = is_ideal_vertex_condition(p), 2 * b4 == p.m - 2
    elif criterion == "scc_equiv":
        applicable = True
        from .constructions import p8

        is_p8 = p.canonical_code == p8().canonical_code
        f, _ = check_scc(p, "flag")
        g, _ = check_scc(p, "pogorelov")
        a, _ = check_scc(p, "almost_pogorelov")
        num = {"scc_flag": f, "scc_pogorelov": g, "scc_almost_pogorelov": a, "is_P8": is_p8}
        lhs = (flag, tag == PolytopeClass.Pogorelov, tag in APOG_CLASSES or is_p8)
        rhs = (f, g, a)
        lhs, rhs = list(lhs), list(rhs)
    else:
        applicable = flag
        pr = h3_h3_pairing_rank(cohomology_ring(p))
        num = {"pairing_rank": pr}
        lhs, rhs = tag == PolytopeClass.Pogorelov, pr == 0
    rep.update(applicable=applicable, lhs=lhs, rhs=rhs, numbers=num,
               agree=(lhs == rhs) if applicable else None)
    return rep


def rigidity_experiment(corpus: Sequence[SimplePolytope3], relabelings: int = 100,
                        seed: int = 0, max_m: int | None = None) -> dict:
    """Fingerprint soundness under relabelling and pairwise separation.

    Soundness failures are hard errors (``sound = False``); collisions between
    non-isomorphic members are findings, listed under ``collisions``.
    """
    rng = random.Random(seed)
    members_ = sorted(corpus, key=lambda p: p.canonical_hash)
    prints = []
    failures = []
    for p in members_:
        fp = fingerprint(p, max_m)
        prints.append(fp)
        for _ in range(relabelings):
            q, perm = p.random_relabel(rng)
            if fingerprint(q, max_m) != fp:
                failures.append({"hash": p.canonical_hash, "perm": [x + 1 for x in perm]})
                break
    classes: dict[str, list[int]] = {}
    for idx, fp in enumerate(prints):
        classes.setdefault(fp.key(), []).append(idx)
    collisions = []
    for idxs in classes.values():
        if len(idxs) < 2:
            continue
        codes = {members_[i].canonical_code for i in idxs}
        if len(codes) > 1:
            collisions.append(sorted(members_[i].canonical_hash for i in idxs))
    return {
        "members": len(members_),
        "distinct_types": len({p.canonical_code for p in members_}),
        "fingerprint_classes": len(classes),
        "relabelings": relabelings,
        "sound": not failures,
        "soundness_failures": failures,
        "collisions": sorted(collisions),
        "hashes": [p.canonical_hash for p in members_],
    }
