"""Command-line interface: ``polykit <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .belts import classify, enumerate_belts
from .cohomology import (a3_rank, bigraded_table, bk_ranks, cohomology_ring,
                         h3_h3_pairing_rank, i7_rank)
from .constructions import (QuadGraph, cut_edge, cut_vertex,
                            ideal_from_quadgraph, make_named, medial, truncate_full)
from .core import SimplePolytope3, are_isomorphic, load_polytopes, parse_polytope
from .errors import PolykitError
from .rigidity import CRITERIA, fingerprint, verify_criterion
from .toric import (MODES, canonical_lambda, face_ring_dims, face_ring_presentation,
                    four_coloring, lambda_from_coloring)


class UsageError(Exception):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


# -- input ----------------------------------------------------------------------------

def _named(spec: str):
    name, _, k = spec.partition(":")
    return make_named(name, int(k) if k else None)


def load_one(arg: str) -> SimplePolytope3:
    """A file path, or ``@name`` / ``@family:k`` for a named simple polytope."""
    if arg.startswith("@"):
        obj = _named(arg[1:])
        if not isinstance(obj, SimplePolytope3):
            raise UsageError(f"{arg} is not a simple polytope")
        return obj
    path = Path(arg)
    if not path.is_file():
        raise UsageError(f"no such file: {arg}")
    return parse_polytope(path.read_bytes())


def load_corpus(arg: str) -> list[SimplePolytope3]:
    """A directory of .poly files, a multi-polytope file, or ``m_le_<n>`` for the packaged corpus."""
    path = Path(arg)
    if not path.exists() and arg.startswith("m_le_"):
        from .corpus import exhaustive_corpus

        return exhaustive_corpus(int(arg.rstrip("/")[5:]))
    if path.is_dir():
        out = []
        for f in sorted(path.iterdir()):
            if f.is_file() and f.suffix in (".poly", ".pc", ".txt"):
                out.extend(load_polytopes(f.read_bytes()))
        return out
    if path.is_file():
        return load_polytopes(path.read_bytes())
    if arg.startswith("@"):
        return [load_one(arg)]
    raise UsageError(f"no such corpus: {arg}")


# -- cache ------------------------------------------------------------------------------

class Cache:
    """On-disk store of canonical JSON results keyed by polytope type and computation."""

    def __init__(self, root: str | None):
        self.root = Path(root) if root else None
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def key(self, p: SimplePolytope3, computation: str, params: dict) -> str:
        raw = canonical_json([p.canonical_hash, computation, params, __version__])
        return hashlib.sha256(raw.encode()).hexdigest()[:32]

    def get_or_compute(self, p, computation, params, fn):
        if not self.root:
            return fn(p)
        k = self.key(p, computation, params)
        f = self.root / f"{k}.json"
        if f.exists():
            entry = json.loads(f.read_text("utf-8"))
            return json.loads(entry["value"])
        value = fn(p)
        entry = {"key": k, "hash": p.canonical_hash, "computation": computation,
                 "params": params, "version": __version__,
                 "polytope": p.canonical_form().to_text(), "value": canonical_json(value)}
        tmp = f.with_suffix(".tmp")
        tmp.write_text(canonical_json(entry), "utf-8")
        tmp.replace(f)
        return value

    def entries(self):
        if not self.root:
            return []
        return sorted(self.root.glob("*.json"))


COMPUTATIONS = {}


def computation(name):
    def deco(fn):
        COMPUTATIONS[name] = fn
        return fn
    return deco


@computation("invariants")
def _invariants(p: SimplePolytope3, field: str = "Q", max_m: int = 20, bigraded: bool = False) -> dict:
    t = bigraded_table(p, max_m=max_m)
    R = cohomology_ring(p, field)
    out = {
        "m": p.m,
        "field": field,
        "total_ranks": t.total_ranks(),
        "rk_Bk": {str(k): v for k, v in bk_ranks(p).items()},
        "rk_A3": a3_rank(R),
        "pairing_rank": h3_h3_pairing_rank(R),
        "rk_I7": i7_rank(R),
        "p_vector": {str(k): v for k, v in p.p_vector().items()},
    }
    if bigraded:
        out["bigraded"] = [[i, j, r] for (i, j), r in t.aggregates().items()]
    return out


@computation("fingerprint")
def _fingerprint(p: SimplePolytope3, max_m: int = 20) -> dict:
    return fingerprint(p, max_m).to_json()


# -- output ------------------------------------------------------------------------------

def _emit(args, obj, text: str | None = None, rows: list[list] | None = None):
    fmt = args.format
    if fmt == "json":
        s = canonical_json(obj) + "\n"
    elif fmt == "text":
        s = (text if text is not None else _to_text(obj)) + "\n"
    else:
        if rows is None:
            raise UsageError("csv output is not available for this subcommand")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        s = buf.getvalue()
    if args.out:
        Path(args.out).write_text(s, "utf-8")
    else:
        sys.stdout.write(s)


def _to_text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, str, bool)) for x in
                                                             (v if isinstance(v, list) else [])):
                lines.append(f"{pad}{k}:")
                lines.append(_to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {canonical_json(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_to_text(x, indent) if isinstance(x, (dict, list)) else f"{pad}{x}" for x in obj)
    return f"{pad}{obj}"


# -- subcommands ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    obj = _named(args.name if args.k is None else f"{args.name}:{args.k}")
    for op in args.op or []:
        if op == "truncate":
            obj = truncate_full(obj)
        elif op == "medial":
            obj = medial(obj)
        elif op == "ideal":
            if not isinstance(obj, QuadGraph):
                obj = medial(obj)
            obj = ideal_from_quadgraph(obj)
        else:
            raise UsageError(f"unknown operation {op}")
    for spec in args.cut_edge or []:
        i, j = (int(x) - 1 for x in spec.split(","))
        obj = cut_edge(obj, (i, j))
    for spec in args.cut_vertex or []:
        obj = cut_vertex(obj, [int(x) - 1 for x in spec.split(",")])
    params = "-".join(filter(None, [str(args.k) if args.k else "", *(args.op or []),
                                    *("e" + s.replace(",", "_") for s in args.cut_edge or []),
                                    *("v" + s.replace(",", "_") for s in args.cut_vertex or [])])) or "0"
    if isinstance(obj, SimplePolytope3):
        text = obj.to_text()
        name = f"{args.name}-{params}-{obj.canonical_hash}.poly"
        if args.snapshot_dir:
            d = Path(args.snapshot_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / name).write_text(text, "utf-8")
        _emit(args, {"kind": "simple", "m": obj.m, "hash": obj.canonical_hash,
                     "neighbors": [[j + 1 for j in r] for r in obj.neighbors], "file": name},
              text=text.rstrip("\n"))
    else:
        kind = "quadgraph" if isinstance(obj, QuadGraph) else "general"
        mp = obj.map
        _emit(args, {"kind": kind, "n": mp.n, "hash": mp.canonical_hash,
                     "rotation": [[j + 1 for j in r] for r in mp.rot]})
    return 0


def cmd_classify(args) -> int:
    p = load_one(args.polytope)
    tag, ev = classify(p)
    _emit(args, {"class": tag.value, "evidence": ev},
          text=tag.value + "\n" + canonical_json(ev))
    return 0


def cmd_belts(args) -> int:
    p = load_one(args.polytope)
    belts = enumerate_belts(p, args.k)
    records = [b.to_json() for b in belts]
    if args.format == "json":
        s = "".join(canonical_json(r) + "\n" for r in records)
        if args.out:
            Path(args.out).write_text(s, "utf-8")
        else:
            sys.stdout.write(s)
        return 0
    rows = [["k", "faces", "trivial_around"]] + [
        [r["k"], " ".join(map(str, r["faces"])), " ".join(map(str, r["trivial_around"]))] for r in records]
    _emit(args, records, text="\n".join(" ".join(map(str, r["faces"])) for r in records), rows=rows)
    return 0


def cmd_invariants(args, cache: Cache) -> int:
    p = load_one(args.polytope)
    params = {"field": args.field, "max_m": args.max_m, "bigraded": args.bigraded}
    out = cache.get_or_compute(p, "invariants", params,
                               lambda q: _invariants(q, args.field, args.max_m, args.bigraded))
    rows = None
    if args.format == "csv":
        t = bigraded_table(p, max_m=args.max_m)
        rows = [["i", "j", "rank"]] + [[i, j, r] for (i, j), r in t.aggregates().items()]
    _emit(args, out, rows=rows)
    return 0


def cmd_toric(args) -> int:
    p = load_one(args.polytope)
    if args.coloring == "canonical":
        lam = canonical_lambda(p)
    else:
        lam = lambda_from_coloring(p, four_coloring(p))
    if args.mode != "quasitoric_Z":
        lam_used = lam.reduce_mod2()
    else:
        lam_used = lam
    dims = face_ring_dims(p, lam_used, args.mode)
    out = {"lambda": [list(c) for c in lam.columns], "presentation": face_ring_presentation(p, lam),
           "dims": list(dims), "mode": args.mode}
    _emit(args, out)
    return 0


def _verify_one(payload):
    text, criterion = payload
    return verify_criterion(parse_polytope(text), criterion)


def cmd_verify(args) -> int:
    corpus = []
    for c in args.corpus or []:
        corpus.extend(load_corpus(c))
    for f in args.polytopes or []:
        corpus.append(load_one(f))
    if not corpus:
        raise UsageError("nothing to verify")
    if any(p.m > args.max_m for p in corpus):
        raise UsageError(f"corpus contains polytopes with m > {args.max_m}")
    payloads = [(p.to_text(), args.criterion) for p in corpus]
    if args.threads > 1:
        with ProcessPoolExecutor(args.threads) as ex:
            reports = list(ex.map(_verify_one, payloads, chunksize=16))
    else:
        reports = [verify_criterion(p, args.criterion) for p in corpus]
    bad = [r for r in reports if r["agree"] is False]
    summary = {
        "criterion": args.criterion,
        "members": len(reports),
        "applicable": sum(1 for r in reports if r["applicable"]),
        "agree": sum(1 for r in reports if r["agree"]),
        "disagreements": len(bad),
        "failures": bad,
    }
    _emit(args, summary,
          text=f"{args.criterion}: {summary['members']} members, {summary['applicable']} applicable, "
               f"{summary['disagreements']} disagreements")
    return 1 if bad else 0


def cmd_compare(args) -> int:
    p, q = load_one(args.first), load_one(args.second)
    ok, phi = are_isomorphic(p, q)
    out = {"isomorphic": ok, "bijection": [x + 1 for x in phi] if phi else None}
    _emit(args, out, text="isomorphic" if ok else "not isomorphic")
    return 0


def cmd_fingerprint(args, cache: Cache) -> int:
    p = load_one(args.polytope)
    out = cache.get_or_compute(p, "fingerprint", {"max_m": args.max_m},
                               lambda q: _fingerprint(q, args.max_m))
    _emit(args, out)
    return 0


def cmd_cache(args, cache: Cache) -> int:
    if not cache.root:
        raise UsageError("no cache directory (use --cache-dir or POLYKIT_CACHE)")
    entries = cache.entries()
    if args.action == "stats":
        _emit(args, {"entries": len(entries), "dir": str(cache.root)})
        return 0
    if args.action == "clear":
        for f in entries:
            f.unlink()
        _emit(args, {"removed": len(entries)})
        return 0
    rng = random.Random(args.seed)
    k = max(1, -(-len(entries) * 5 // 100)) if entries else 0
    sample = rng.sample(entries, k) if entries else []
    mismatches = []
    for f in sample:
        entry = json.loads(f.read_text("utf-8"))
        p = parse_polytope(entry["polytope"])
        fn = COMPUTATIONS[entry["computation"]]
        fresh = canonical_json(fn(p, **entry["params"]))
        if fresh != entry["value"]:
            mismatches.append(entry["key"])
    _emit(args, {"checked": len(sample), "entries": len(entries), "mismatches": mismatches})
    return 1 if mismatches else 0


# -- parser -----------------------------------------------------------------------------------

def _add_globals(parser, suppress: bool):
    def d(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--field", choices=("Q", "Z2"), default=d("Q"))
    parser.add_argument("--max-m", type=int, default=d(20))
    parser.add_argument("--cache-dir", default=d(None))
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--out", default=d(None))
    parser.add_argument("--format", choices=("json", "text", "csv"), default=d("json"))
    parser.add_argument("--threads", type=int, default=d(1))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polykit", description="Simple 3-polytopes and moment-angle cohomology.")
    _add_globals(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="build a named object")
    s.add_argument("name")
    s.add_argument("--k", type=int)
    s.add_argument("--op", action="append", choices=("truncate", "medial", "ideal"))
    s.add_argument("--cut-edge", action="append", metavar="I,J")
    s.add_argument("--cut-vertex", action="append", metavar="I,J,K")
    s.add_argument("--snapshot-dir")

    s = sub.add_parser("classify", parents=[common], help="family of a polytope")
    s.add_argument("polytope")

    s = sub.add_parser("belts", parents=[common], help="enumerate belts")
    s.add_argument("polytope")
    s.add_argument("--k", type=int)

    s = sub.add_parser("invariants", parents=[common], help="cohomology ranks")
    s.add_argument("polytope")
    s.add_argument("--bigraded", action="store_true")

    s = sub.add_parser("toric", parents=[common], help="characteristic map and face ring")
    s.add_argument("polytope")
    s.add_argument("--mode", choices=MODES, default="small_cover_Z2")
    s.add_argument("--coloring", choices=("canonical", "four"), default="canonical")

    s = sub.add_parser("verify", parents=[common], help="check a criterion on a corpus")
    s.add_argument("polytopes", nargs="*")
    s.add_argument("--criterion", choices=CRITERIA, required=True)
    s.add_argument("--corpus", action="append")

    s = sub.add_parser("compare", parents=[common], help="isomorphism test")
    s.add_argument("first")
    s.add_argument("second")

    s = sub.add_parser("fingerprint", parents=[common], help="invariant fingerprint")
    s.add_argument("polytope")

    s = sub.add_parser("cache", parents=[common], help="inspect the result cache")
    s.add_argument("action", choices=("stats", "clear", "selfcheck"))
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cache = Cache(args.cache_dir or os.environ.get("POLYKIT_CACHE"))
    try:
        if args.command in ("invariants", "fingerprint", "cache"):
            return globals()["cmd_" + args.command](args, cache)
        return globals()["cmd_" + args.command](args)
    except UsageError as exc:
        print(f"polykit: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"polykit: assertion failed: {exc}", file=sys.stderr)
        return 1
    except PolykitError as exc:
        print(f"polykit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
