import io
import json
import os
import subprocess
import sys

from k3lat.cli import run


def _run(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, buf.getvalue()


def _json(argv):
    code, text = _run(argv + ["--json"])
    assert code == 0
    return json.loads(text)


def test_analyze():
    out = _json(["analyze", "U+2E8+A1"])
    assert list(out) == ["command", "input", "budgets", "results", "tool_version"]
    res = out["results"]
    assert res["rank"] == 19
    assert res["signature"] == [1, 18]
    assert res["determinant"] == 2
    assert res["even"] and res["hyperbolic"]
    assert res["elementary_divisors"] == [1] * 18 + [2]
    assert res["catalog"]["kind"] == "InList"


def test_analyze_text():
    code, text = _run(["analyze", "U(2)+D4"])
    assert code == 0
    assert "rank: 6" in text and "determinant: -16" in text


def test_parse_normalizes():
    res = _json(["parse", "A4+U+A1"])["results"]
    assert res["normal_form"] == "U+A1+A4"
    assert res["rank"] == 7


def test_parse_error_exit_code(capsys):
    code, _ = _run(["analyze", "U+E9"])
    assert code == 1
    err = capsys.readouterr().err
    assert "offset 2" in err and "^" in err


def test_unknown_list_is_an_error(capsys):
    code, _ = _run(["verify-lists", "NoSuchList"])
    assert code == 1


def test_gram_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("3\n0 1 0\n1 0 0\n0 0 -4\n")
    res = _json(["analyze", "--gram", str(p)])["results"]
    assert res["rank"] == 3 and res["determinant"] == 4
    assert res["catalog"]["kind"] == "NotFound"
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n")
    assert _run(["analyze", "--gram", str(bad)])[0] == 1


def test_roots_definite_and_indefinite():
    assert _json(["roots", "E8"])["results"]["count"] == 240
    res = _json(["roots", "U(2)+[-4]"])["results"]
    assert res["has_root"]["answer"] == "False" and res["has_root"]["certified"]


def test_isotropic_and_fibrations():
    res = _json(["isotropic", "U+[-4]", "--bound", "3"])["results"]
    assert res["has_isotropic"]["answer"] == "True"
    res = _json(["fibrations", "U+[-4]", "--bound", "3"])["results"]
    assert res["condition"]["answer"] == "False"
    assert res["condition"]["witness"] == [1, 0, 0]


def test_vinberg():
    res = _json(["vinberg", "U+3A1"])["results"]
    assert res["status"] == "FiniteVolumeCertified"
    assert res["walls"] == len(res["roots"])


def test_census_negative_control():
    res = _json(["census", "U+[-4]", "--bound", "20", "--max-roots", "30"])["results"]
    assert res["verdict"] == "ExactlyOneFibrationWithInfiniteMW"


def test_exceptional_not_applicable():
    res = _json(["exceptional", "U+E8"])["results"]
    assert "not_applicable" in res


def test_strict_exit_on_unknown():
    code, text = _run(["fibrations", "U+A1", "--bound", "3", "--strict"])
    assert code == 2
    assert "UnknownAtBudget" in text
    assert _run(["fibrations", "U+A1", "--bound", "3"])[0] == 0


def test_verify_lists_subset():
    res = _json(["verify-lists", "Rank6Plus2Reflective", "--entries", "U+4A1", "U+A4"])["results"]
    assert [r["entry"] for r in res["entries"]] == ["U+4A1", "U+A4"]
    assert res["passed"] == 2


def test_report_battery():
    res = _json(["report", "U+3A1"])["results"]
    assert list(res) == ["invariants", "condition", "two_reflectivity", "census",
                         "rational_curves", "enriques", "arithmeticity"]
    assert res["rational_curves"]["label"] == "Finite"
    assert res["enriques"]["label"] == "RankBelow10NoEnriquesInvolution"


def test_timing_only_on_request():
    assert "timing" not in _json(["analyze", "U"])
    assert "timing" in _json(["analyze", "U", "--timing"])


def test_module_entry_point_and_threads():
    outs = []
    for t in ("1", "4"):
        env = dict(os.environ, K3LAT_THREADS=t)
        p = subprocess.run([sys.executable, "-m", "k3lat", "analyze", "U(3)+2A2", "--json"],
                           capture_output=True, text=True, env=env, check=True)
        outs.append(p.stdout)
    assert outs[0] == outs[1]
