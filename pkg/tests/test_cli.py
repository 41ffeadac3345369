import io
import json
import subprocess
import sys

import pytest

from gsp6.cli import main
from gsp6.curves import CurveEquation
from gsp6.localp import TypeHTemplate


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_weil_search():
    code, out = run(["weil-search", "--ell", "5", "--q", "47", "--max", "1", "--format", "json"])
    assert code == 0
    assert json.loads(out)["triples"] == [[1, 1, 1]]
    code, out = run(["weil-search", "--ell", "5", "--q", "47", "--max", "1"])
    assert code == 0 and "triples: [[1, 1, 1]]" in out


def test_census_json_round_trip():
    code, out = run(["census", "--ell", "5", "--q", "47", "--degree6", "--format", "json"])
    assert code == 0
    d = json.loads(out)
    assert d["d4_minus"] == d["d4_minus_formula"] == 12
    assert d["d6_minus_r6"] > 0
    assert json.loads(json.dumps(d, sort_keys=True)) == d


def test_count_points(tmp_path):
    curve = write(tmp_path, "c.json", CurveEquation.hyperelliptic("x^7 - x + 1", 7).to_json())
    code, out = run(["count-points", "--curve", curve, "--q", "7", "--format", "json"])
    d = json.loads(out)
    assert code == 0 and (d["N1"], d["N2"], d["N3"]) == ("15", "43", "393")
    code, out = run(["count-points", "--curve", curve, "--q", "7", "--r", "2", "--format", "json"])
    assert json.loads(out)["N"] == "43"
    code, _ = run(["count-points", "--curve", curve, "--q", "11"])
    assert code == 2


def test_curve_search():
    code, out = run(["curve-search", "--ell", "5", "--q", "47", "--limit", "100", "--format", "json"])
    assert code == 0
    d = json.loads(out)
    e = CurveEquation.from_dict(d["curve"])
    assert e.modulus == 47
    code, _ = run(["curve-search", "--ell", "5", "--q", "47", "--limit", "0"])
    assert code == 1


def test_check_localp(tmp_path):
    lifted = CurveEquation.hyperelliptic([25039, -33803, -35995, 27231, -27231, 33804, -14085, 1])
    curve = write(tmp_path, "f.json", lifted.to_json())
    code, out = run(["check-localp", "--curve", curve, "--p", "7", "--format", "json"])
    assert code == 0 and json.loads(out)["passed"] is True
    tmpl = write(tmp_path, "t.json", json.dumps(TypeHTemplate(7, (-120, 274, -225, 85, -15, 1)).to_dict()))
    code, _ = run(["check-localp", "--curve", curve, "--p", "7", "--template", tmpl])
    assert code == 0
    bad = write(tmp_path, "g.json", CurveEquation.hyperelliptic("x^7 + x + 1").to_json())
    code, _ = run(["check-localp", "--curve", bad, "--p", "7"])
    assert code == 1


def test_lift(tmp_path):
    fp = write(tmp_path, "fp.json", CurveEquation.quartic("x^4 + y^4 + x^2 - y^2 + 3*x").to_json())
    fq = write(tmp_path, "fq.json",
               CurveEquation.quartic("x^4 + y^3 + x^3*y + x*y^2 + 1", 97).to_json())
    code, out = run(["lift", "--fp", fp, "--fq", fq, "--p", "3", "--q", "97", "--format", "json"])
    assert code == 0
    f = CurveEquation.from_dict(json.loads(out))
    assert f.as_dict()[(1, 0)] == 1164


def test_pipeline_and_verify(tmp_path):
    cert = tmp_path / "cert.json"
    code, out = run(["pipeline", "--ell", "5", "--p", "7", "--q", "47", "--out", str(cert),
                     "--format", "json"])
    assert code == 0 and json.loads(out)["conclusion"] is True
    code, out = run(["verify", "--cert", str(cert), "--format", "json"])
    assert code == 0 and json.loads(out)["verified"] is True

    d = json.loads(cert.read_text())
    d["f"]["terms"][0]["c"] = str(int(d["f"]["terms"][0]["c"]) + 1)
    tampered = write(tmp_path, "bad.json", json.dumps(d))
    code, _ = run(["verify", "--cert", tampered])
    assert code == 1


def test_threads_do_not_change_output(monkeypatch):
    argv = ["pipeline", "--ell", "5", "--p", "7", "--q", "47", "--format", "json"]
    outs = [run(argv + ["--threads", str(t)])[1] for t in (1, 3)]
    monkeypatch.setenv("GSP6_THREADS", "2")
    outs.append(run(argv)[1])
    assert outs[0] == outs[1] == outs[2]


def test_usage_errors(tmp_path, monkeypatch, capsys):
    assert run(["pipeline", "--ell", "5", "--p", "5", "--q", "47"])[0] == 2
    assert run(["weil-search", "--ell", "x", "--q", "47"])[0] == 2
    assert run(["weil-search", "--ell", "5", "--q", "47", "--threads", "0"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["verify", "--cert", str(tmp_path / "missing.json")])[0] == 2
    assert "--cert" in capsys.readouterr().err
    monkeypatch.setenv("GSP6_THREADS", "zero")
    assert run(["weil-search", "--ell", "5", "--q", "47"])[0] == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "gsp6.cli", "weil-search", "--ell", "3",
                           "--q", "19", "--max", "1", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["triples"] == [[1, 0, 1]]
