import json
import subprocess
import sys

import pytest

from xfam.cli import main, read_params
from xfam.constructions import frankl_family
from xfam.core import ParameterError, format_family, parse_family, to_mask
from xfam.generating import parse_generators


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_frankl(capsys):
    code, out, _ = run(["construct", "--family", "frankl", "--n", "8", "--k", "4", "--t", "3", "--r", "1"], capsys)
    assert code == 0
    assert len(out.splitlines()) == 1 + 5
    assert parse_family(out) == frankl_family(8, 4, 3, 1)


def test_construct_star_and_pairs(capsys, tmp_path):
    path = tmp_path / "s.fam"
    code, _, _ = run(["construct", "--family", "star", "--n", "8", "--k", "4", "--T", "2,5,7", "--out", str(path)], capsys)
    assert code == 0 and len(parse_family(path.read_text())) == 5
    code, out, _ = run(["construct", "--family", "extremal-pairs", "--n", "8", "--m", "8", "--k", "4",
                        "--l", "4", "--t", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and [d["descriptor"]["construction"] for d in doc] == ["star", "frankl"]
    assert all(d["product"] == "25" for d in doc)


def test_construct_missing_flag(capsys):
    code, _, err = run(["construct", "--family", "frankl", "--n", "8"], capsys)
    assert code == 2 and "--k" in err


def test_compress_and_generators(capsys, tmp_path):
    path = tmp_path / "f.fam"
    path.write_text("8 4\n" + "\n".join(format(to_mask(s), "x") for s in ([2, 3, 4, 5], [2, 3, 4, 6])) + "\n")
    code, out, _ = run(["compress", str(path)], capsys)
    assert code == 0 and parse_family(out).members == (0b1111, 0b10111)
    path.write_text(format_family(frankl_family(8, 4, 3, 1)))
    code, out, _ = run(["generators", str(path)], capsys)
    assert code == 0 and len(parse_generators(out)) == 5


def test_bad_family_file(capsys, tmp_path):
    path = tmp_path / "bad.fam"
    path.write_text("8 4\n7\n")
    code, _, err = run(["compress", str(path)], capsys)
    assert code == 2 and "popcount" in err


def test_audit(capsys):
    code, out, _ = run(["audit", "--lemma", "3.2", "--kmax", "8", "--nmax", "60"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == [] and doc["tuples_checked"] > 0
    code, out, _ = run(["audit", "--lemma", "case3", "--n", "12", "--m", "12", "--k", "5", "--l", "5", "--t", "3"], capsys)
    assert code == 0 and json.loads(out)["tuples_checked"] == 1


def test_search_both(capsys):
    code, out, _ = run(["search", "--n", "8", "--m", "8", "--k", "4", "--l", "4", "--t", "3",
                        "--method", "both", "--jobs", "1"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["max_product"] == "25" and len(doc["optima"]) == 2
    assert isinstance(doc["candidates_enumerated"], str)


def test_search_deterministic(capsys):
    argv = ["search", "--n", "7", "--m", "6", "--k", "3", "--l", "3", "--t", "2", "--method", "raw"]
    docs = []
    for _ in range(2):
        code, out, _ = run(argv, capsys)
        doc = json.loads(out)
        doc.pop("runtime_ms")
        docs.append(json.dumps(doc))
    assert docs[0] == docs[1]


def test_search_capacity_is_usage_error(capsys):
    code, _, err = run(["search", "--n", "12", "--m", "12", "--k", "5", "--l", "5", "--t", "3"], capsys)
    assert code == 2 and "raw" in err


def test_paths(capsys):
    code, out, _ = run(["paths", "--lemma", "4.1", "--n", "9", "--m", "9", "--k", "5", "--l", "5", "--t", "3",
                        "--r", "1", "--T", "1,2,3,4,5", "--j", "6", "--A", "7", "--B", "7"], capsys)
    doc = json.loads(out)
    assert code == 0 and all(doc["checks"].values()) and len(doc["A_sequence"]) == 2
    code, out, _ = run(["paths", "--lemma", "4.2", "--T", "1,2,3,4", "--tprime", "2", "--A", "1,2,3",
                        "--B", "1,2,4"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["path"]) == 4


def test_read_params():
    assert read_params("8 8 4 4 3\n# note\n9,9,4,4,3  # trailing\n\n") == [(8, 8, 4, 4, 3), (9, 9, 4, 4, 3)]
    with pytest.raises(ParameterError):
        read_params("8 8 4 4\n")


def test_certify(capsys, tmp_path):
    params = tmp_path / "p.txt"
    params.write_text("8 8 4 4 3\n9 9 4 4 3\n8 8 4 4 2\n")
    out_dir = tmp_path / "bundle"
    code, _, _ = run(["certify", str(params), "--out", str(out_dir), "--jobs", "1", "--samples", "20"], capsys)
    summary = json.loads((out_dir / "summary.json").read_text())
    statuses = [r["status"] for r in summary["tuples"]]
    assert code == 0 and statuses == ["CONFIRMED", "CONFIRMED", "SKIPPED"]
    assert "t < 3" in summary["tuples"][2]["reason"]
    sub = out_dir / "n8_m8_k4_l4_t3"
    assert sorted(p.name for p in sub.iterdir()) == [
        "lemma3.1.json", "lemma3.2.json", "lemma3.3.json", "properties.json", "theorem.json"]
    theorem = json.loads((sub / "theorem.json").read_text())
    assert theorem["status"] == "CONFIRMED" and len(theorem["certificate"]["optima"]) == 2


def test_certify_empty(capsys, tmp_path):
    params = tmp_path / "empty.txt"
    params.write_text("")
    out_dir = tmp_path / "bundle"
    code, _, _ = run(["certify", str(params), "--out", str(out_dir)], capsys)
    summary = json.loads((out_dir / "summary.json").read_text())
    assert code == 0 and summary["tuples"] == []


def test_usage_errors_exit_2():
    for argv in (["bogus"], ["search", "--n", "8", "--frobnicate"], []):
        proc = subprocess.run([sys.executable, "-m", "xfam", *argv], capture_output=True, text=True)
        assert proc.returncode == 2
        assert "usage" in proc.stderr
