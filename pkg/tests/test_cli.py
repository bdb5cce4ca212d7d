import json
import subprocess
import sys

import pytest

from polykit.cli import canonical_json, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pe3_file(tmp_path, capsys):
    code, out, _ = call(capsys, "construct", "Pe3", "--format", "text")
    assert code == 0
    path = tmp_path / "pe3.poly"
    path.write_text(out)
    return path


@pytest.fixture
def cube_file(tmp_path, capsys):
    code, out, _ = call(capsys, "construct", "cube", "--format", "text")
    path = tmp_path / "cube.poly"
    path.write_text(out)
    return path


def test_classify_pe3(capsys, pe3_file):
    code, out, _ = call(capsys, "classify", str(pe3_file))
    assert code == 0
    rec = json.loads(out)
    assert rec["class"] == "IdealAlmostPogorelov" and rec["evidence"]["belts4"] == 6
    code, out, _ = call(capsys, "--format", "text", "classify", str(pe3_file))
    assert out.splitlines()[0] == "IdealAlmostPogorelov"


def test_invariants_cube(capsys, cube_file):
    code, out, _ = call(capsys, "invariants", "--bigraded", str(cube_file))
    rec = json.loads(out)
    assert code == 0 and rec["total_ranks"][3] == 3
    assert [1, 2, 3] in rec["bigraded"]
    code, out, _ = call(capsys, "invariants", "--format", "csv", str(cube_file))
    assert out.splitlines()[0] == "i,j,rank" and "1,2,3" in out.splitlines()


def test_output_is_canonical_and_stable(capsys, pe3_file, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run(["fingerprint", str(pe3_file), "--out", str(out1)]) == 0
    assert run(["fingerprint", str(pe3_file), "--out", str(out2)]) == 0
    a = out1.read_bytes()
    assert a == out2.read_bytes()
    obj = json.loads(a)
    assert a.decode().strip() == canonical_json(obj)
    assert "." not in a.decode().replace("IdealAlmostPogorelov", "")


def test_verify_corpus(capsys):
    code, out, _ = call(capsys, "verify", "--criterion", "flag_h4", "--corpus", "m_le_8/")
    rec = json.loads(out)
    assert code == 0 and rec["disagreements"] == 0 and rec["members"] == 23


def test_verify_threads(capsys):
    code, out, _ = call(capsys, "--threads", "2", "verify", "--criterion", "scc_equiv",
                        "--corpus", "m_le_7")
    assert code == 0 and json.loads(out)["members"] == 9


def test_belts_json_lines(capsys):
    code, out, _ = call(capsys, "belts", "@cube", "--k", "4")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert all(json.loads(x)["k"] == 4 for x in lines)


def test_toric(capsys):
    code, out, _ = call(capsys, "toric", "@cube")
    rec = json.loads(out)
    assert rec["dims"] == [1, 3, 3, 1]
    assert len(rec["lambda"]) == 6 and all(len(r) == 3 for r in rec["lambda"])


def test_compare(capsys, pe3_file):
    code, out, _ = call(capsys, "compare", "@Pe3", str(pe3_file))
    assert json.loads(out)["isomorphic"]
    code, out, _ = call(capsys, "compare", "@cube", "@M5xI")
    assert not json.loads(out)["isomorphic"]


def test_construct_snapshot(capsys, tmp_path):
    snap = tmp_path / "snaps"
    code, out, _ = call(capsys, "construct", "prism", "--k", "5", "--snapshot-dir", str(snap))
    rec = json.loads(out)
    files = list(snap.iterdir())
    assert code == 0 and [f.name for f in files] == [rec["file"]]
    assert rec["file"] == f"prism-5-{rec['hash']}.poly"
    code, out, _ = call(capsys, "construct", "antiprism", "--k", "4")
    assert json.loads(out)["kind"] == "quadgraph"
    code, out, _ = call(capsys, "construct", "pyramid", "--k", "3", "--op", "truncate")
    assert json.loads(out)["m"] == 14


def test_usage_errors(capsys, tmp_path):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "classify", str(tmp_path / "missing.poly"))[0] == 2
    bad = tmp_path / "bad.poly"
    bad.write_text("polytope m=4\n1: 2 3\n")
    assert call(capsys, "classify", str(bad))[0] == 2
    assert call(capsys, "construct", "prism")[0] == 2
    assert call(capsys, "--format", "csv", "classify", "@cube")[0] == 2
    assert call(capsys, "--max-m", "10", "invariants", "@dodecahedron")[0] == 2


def test_cache_roundtrip_and_selfcheck(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    monkeypatch.setenv("POLYKIT_CACHE", str(cache))
    code, first, _ = call(capsys, "invariants", "@As3")
    code, second, _ = call(capsys, "invariants", "@As3")
    assert first == second
    for name in ("cube", "P8", "M5xI"):
        call(capsys, "fingerprint", f"@{name}")
    code, out, _ = call(capsys, "cache", "stats")
    assert json.loads(out)["entries"] == 4
    code, out, _ = call(capsys, "cache", "selfcheck")
    rec = json.loads(out)
    assert code == 0 and rec["checked"] == 1 and rec["mismatches"] == []
    # tamper with an entry: the self-check must notice
    for f in cache.glob("*.json"):
        entry = json.loads(f.read_text())
        entry["value"] = entry["value"].replace('"m":', '"m_":')
        f.write_text(canonical_json(entry))
    code, out, _ = call(capsys, "cache", "selfcheck")
    assert code == 1 and json.loads(out)["mismatches"]
    code, out, _ = call(capsys, "cache", "clear")
    assert json.loads(out)["removed"] == 4


def test_cache_hit_is_labelling_independent(capsys, tmp_path):
    import random

    from polykit.constructions import make_named

    p = make_named("As3")
    q, _ = p.random_relabel(random.Random(1))
    f = tmp_path / "q.poly"
    f.write_text(q.to_text())
    cache = str(tmp_path / "c")
    code, a, _ = call(capsys, "--cache-dir", cache, "invariants", "@As3")
    code, b, _ = call(capsys, "--cache-dir", cache, "invariants", str(f))
    code, c, _ = call(capsys, "invariants", str(f))
    assert a == b == c


def test_entry_point():
    res = subprocess.run([sys.executable, "-m", "polykit.cli", "classify", "@dodecahedron"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["class"] == "Pogorelov"
