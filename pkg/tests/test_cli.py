import json
import os
import subprocess
import sys

import pytest

from abcqi.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def mat(tmp_path, name, rows):
    return write(tmp_path, name, {"rows": rows})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ajf_examples(tmp_path, capsys):
    code, out, _ = run(capsys, "ajf", mat(tmp_path, "a.json", [[2]]))
    assert code == 0
    doc = json.loads(out)
    assert doc == [{"size": 1, "modulus": {"minpoly": [-2, 1], "interval": ["2", "2"], "approx": "2.00000000000000000000"}}]
    code, out, _ = run(capsys, "ajf", mat(tmp_path, "b.json", [[0, -2], [1, 0]]))
    doc = json.loads(out)
    assert code == 0 and [b["size"] for b in doc] == [1, 1]
    assert all(b["modulus"]["minpoly"] == [-2, 0, 1] for b in doc)


def test_ajf_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, out, err = run(capsys, "ajf", str(bad))
    assert code == 2 and json.loads(out)["error"] == "PARSE_ERROR" and "malformed JSON" in err
    code, out, _ = run(capsys, "ajf", mat(tmp_path, "s.json", [[1, 2], [2, 4]]))
    assert code == 3 and json.loads(out)["error"] == "SINGULAR"
    code, out, _ = run(capsys, "ajf", mat(tmp_path, "f.json", [[1.5]]))
    assert code == 2


def test_classify_exit_codes(tmp_path, capsys):
    two, three, eight = (mat(tmp_path, f"{k}.json", [[k]]) for k in (2, 3, 8))
    uni = mat(tmp_path, "u.json", [[1, 1], [0, 1]])
    code, out, _ = run(capsys, "classify", two, eight)
    doc = json.loads(out)
    assert code == 0 and doc["equivalent"] and doc["witness"] == [3, 1] and doc["certificate"] == "MATCHED"
    code, out, _ = run(capsys, "classify", two, three)
    assert code == 1 and json.loads(out)["certificate"] == "DET_INDEPENDENT"
    code, out, _ = run(capsys, "classify", uni, two)
    assert code == 3 and json.loads(out)["error"] == "POLYCYCLIC_OUT_OF_SCOPE"
    code, _, _ = run(capsys, "classify", mat(tmp_path, "z.json", [[0]]), two)
    assert code == 3
    code, _, _ = run(capsys, "classify", two)
    assert code == 2


def corpus(tmp_path, entries, name="corpus.json"):
    return write(tmp_path, name, entries)


def test_batch_classes(tmp_path, capsys):
    c = corpus(tmp_path, [{"id": f"m{k}", "rows": [[k]]} for k in (8, 2, 3, 4)])
    code, out, _ = run(capsys, "classify", "--batch", c)
    doc = json.loads(out)
    assert code == 0
    assert doc["classes"] == [["m2", "m4", "m8"], ["m3"]] and doc["consistent"]
    assert [e["id"] for e in doc["entries"]] == ["m2", "m3", "m4", "m8"]
    assert len(doc["pairs"]) == 6
    assert doc["config"] == {"precision": 60, "t_max": 40.0, "degree_threshold": 0.2, "max_multiple": 8, "output": None}


def test_batch_empty(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", "--batch", corpus(tmp_path, []))
    doc = json.loads(out)
    assert code == 0 and doc["entries"] == [] and doc["pairs"] == [] and doc["classes"] == []


def test_batch_partial_failures(tmp_path, capsys):
    c = corpus(
        tmp_path,
        [
            {"id": "sing", "rows": [[1, 2], [2, 4]]},
            {"id": "a", "rows": [[2, 0], [0, 2]]},
            {"id": "b", "rows": [[4, 0], [0, 4]]},
            {"id": "poly", "rows": [[1, 1], [0, 1]]},
            {"id": "flt", "rows": [[0.5]]},
        ],
    )
    code, out, _ = run(capsys, "classify", "--batch", c)
    doc = json.loads(out)
    status = {e["id"]: e["status"] for e in doc["entries"]}
    assert code == 0
    assert status == {"a": "OK", "b": "OK", "flt": "PARSE_ERROR", "poly": "POLYCYCLIC_OUT_OF_SCOPE", "sing": "SINGULAR"}
    assert doc["classes"] == [["a", "b"]]


def test_batch_determinism(tmp_path, capsys):
    entries = [{"id": f"e{k}", "rows": r, "metadata": {"src": "t"}} for k, r in enumerate([[[2]], [[9]], [[3]], [[27]], [[-4]]])]
    out_path = str(tmp_path / "result.json")
    texts = []
    for order in (entries, list(reversed(entries))):
        c = corpus(tmp_path, order, "c.json")
        assert run(capsys, "classify", "--batch", c, "--output", out_path)[0] == 0
        texts.append(open(out_path, "rb").read())
    assert texts[0] == texts[1]
    doc = json.loads(texts[0])
    assert doc["config"]["output"] == out_path
    assert doc["classes"] == [["e0", "e4"], ["e1", "e2", "e3"]]


def test_batch_rejects_two_files(tmp_path, capsys):
    c = corpus(tmp_path, [])
    assert run(capsys, "classify", "--batch", c, c)[0] == 2


@pytest.mark.parametrize("rows,recon", [([[2, 1], [0, 2]], True), ([[1, 1], [0, 1]], None), ([[2, 1], [1, 1]], True)])
def test_verify_examples(tmp_path, capsys, rows, recon):
    code, out, _ = run(capsys, "verify", mat(tmp_path, "m.json", rows))
    props = json.loads(out)["properties"]
    assert code == 0
    assert props["growth_envelopes"]["passed"] and props["shadowing"]["passed"] and props["cocycle"]["passed"]
    assert props["reconstruction"]["passed"] is recon
    if recon is None:
        assert props["reconstruction"]["skipped"] == "CENTER_PRESENT"
    if rows == [[2, 1], [0, 2]]:
        blocks = props["reconstruction"]["blocks"]
        assert [b["size"] for b in blocks] == [2] and abs(float(blocks[0]["modulus"]) - 2) < 1e-6


def test_growth_command(tmp_path, capsys):
    m = mat(tmp_path, "m.json", [[2, 1], [0, 2]])
    code, out, _ = run(capsys, "growth", m)
    doc = json.loads(out)
    assert code == 0 and sorted(p["degree"] for p in doc["profiles"]) == [0, 1]
    csv_path = str(tmp_path / "g.csv")
    code, out, _ = run(capsys, "growth", m, "--vector", "0,1", "--csv", csv_path)
    (p,) = json.loads(out)["profiles"]
    assert p["degree"] == 1 and p["status"] == "RESOLVED"
    assert open(csv_path).readline().strip() == "t,log_norm"
    assert run(capsys, "growth", m, "--vector", "0,0")[0] == 2
    assert run(capsys, "growth", m, "--vector", "1,2,3")[0] == 2


def test_qm_dist(capsys):
    code, out, _ = run(capsys, "qm-dist", "2", "0:1110", "0:1111")
    doc = json.loads(out)
    assert code == 0 and doc["distance"] == "1/8" and doc["divergence_height"] == 3
    code, out, _ = run(capsys, "qm-dist", "2", "--", "-1:1", "-1:0")
    assert json.loads(out)["distance"] == "2"
    code, out, _ = run(capsys, "qm-dist", "2", "0:1", "0:1")
    assert json.loads(out)["distance"] == "0"
    assert run(capsys, "qm-dist", "2", "0:3", "0:1")[0] == 2
    assert run(capsys, "qm-dist", "1", "0:0", "0:0")[0] == 2
    assert run(capsys, "qm-dist", "2", "bogus", "0:1")[0] == 2


def test_flags_echoed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ABCQI_PRECISION", "30")
    c = corpus(tmp_path, [{"id": "a", "rows": [[2]]}])
    code, out, _ = run(capsys, "classify", "--batch", c, "--max-multiple", "3", "--t-max", "20")
    cfg = json.loads(out)["config"]
    assert cfg["precision"] == 30 and cfg["max_multiple"] == 3 and cfg["t_max"] == 20.0
    code, out, _ = run(capsys, "classify", "--batch", c, "--precision", "0")
    assert code == 2


def test_console_script_subprocess(tmp_path):
    m = mat(tmp_path, "m.json", [[2]])
    n = mat(tmp_path, "n.json", [[3]])
    env = dict(os.environ, ABCQI_PRECISION="40")
    r = subprocess.run([sys.executable, "-m", "abcqi.cli", "classify", m, n], capture_output=True, text=True, env=env)
    assert r.returncode == 1 and json.loads(r.stdout)["certificate"] == "DET_INDEPENDENT"
