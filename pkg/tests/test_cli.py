import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from pochette.cli import main
from pochette.diagram import S4_PROFILE, HomologyProfile, homology_closed, load_diagram
from pochette.surgery import certificate_schema

GOLDEN = Path(__file__).parent / "golden"
DIAGRAMS = resources.files("pochette.data").joinpath("diagrams")


def diagram_path(name):
    return str(DIAGRAMS.joinpath(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_word_output(capsys):
    code, out, _ = run(capsys, "word", "--slope", "3/2", "--eps", "0", "--lift")
    assert code == 0
    assert out == (GOLDEN / "word_3_2.txt").read_text()
    assert out.splitlines()[0] == "E2.E1^2"
    code, out, _ = run(capsys, "word", "--slope", "-3/-2", "--eps", "1", "--json")
    report = json.loads(out)
    assert report["slope"] == "3/2" and report["image_of_m"] == [-3, -2] and report["verified"]


def test_surgery_certificate_golden(capsys):
    code, out, _ = run(capsys, "surgery", diagram_path("s4.json"), "--pochette", "c1,u1",
                       "--slope", "5/2", "--eps", "1")
    assert code == 0
    cert = json.loads(out)
    jsonschema.validate(cert, certificate_schema())
    assert cert == json.loads((GOLDEN / "surgery_s4_5_2.json").read_text())
    assert HomologyProfile.from_json(cert["profile"])[1].torsion == (5,)


def test_surgery_diagram_mode(capsys, tmp_path):
    out_path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "surgery", diagram_path("s4_clasped.json"), "--pochette", "c1,u1",
                       "--slope", "1/4", "--eps", "0", "--mode", "diagram",
                       "--simply-connected", "yes", "--out", str(out_path))
    assert code == 0
    cert = json.loads(out_path.read_text())
    assert cert["diagram_consistent"]
    assert HomologyProfile.from_json(cert["diagram_profile"]) == S4_PROFILE
    assert cert["homeomorphism"] == "Homeomorphic"
    assert cert["classification"] == "HomologySphere"


def test_surgery_failures(capsys):
    code, out, _ = run(capsys, "surgery", diagram_path("s4.json"), "--pochette", "c1,u1",
                       "--slope", "2/1", "--eps", "0", "--no-t2")
    assert code == 1
    assert json.loads(out)["classification"] == "HypothesesNotMet"
    code, _, err = run(capsys, "surgery", diagram_path("s4.json"), "--pochette", "c1,k1",
                       "--slope", "1/0", "--eps", "0")
    assert code == 2 and "error" in err
    # the standard S^4 has no dotted circle to designate
    code, _, _ = run(capsys, "surgery", diagram_path("s4_standard.json"), "--pochette", "c1,u1",
                     "--slope", "1/0", "--eps", "0")
    assert code == 2


def test_homology_command(capsys, tmp_path):
    code, out, _ = run(capsys, "homology", diagram_path("s1xs3.json"))
    assert code == 0
    assert "H_1 = Z" in out and "homology 4-sphere: no" in out
    code, out, _ = run(capsys, "homology", diagram_path("s4_clasped.json"), "--cancel", "--json")
    data = json.loads(out)
    assert data["homology_sphere"] and data["euler_characteristic"] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"one_handles": [], "two_handles": [], "n3": 0, "n4": 1, "extra": 1}')
    code, _, _ = run(capsys, "homology", str(bad))
    assert code == 2
    code, _, _ = run(capsys, "homology", str(tmp_path / "missing.json"))
    assert code == 2


def test_family_command(capsys, tmp_path):
    path = tmp_path / "f.json"
    code, out, _ = run(capsys, "family", "fig2", "--s", "2", "--t", "1", "--m", "1,-1",
                       "--n", "0,0,0", "--out", str(path))
    assert code == 0
    assert homology_closed(load_diagram(path)) == S4_PROFILE
    code, _, err = run(capsys, "family", "fig2", "--s", "2", "--t", "1", "--m", "1,1")
    assert code == 2 and "sum" in err
    code, out, _ = run(capsys, "family", "fig1", "--k", "2")
    assert code == 0 and json.loads(out)["n3"] == 1
    assert run(capsys, "family", "fig1")[0] == 2


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--range", "6", "--json")
    assert code == 0
    summary = json.loads(out)
    assert summary["failures"] == [] and summary["cases"] == 2 * summary["pairs"]
    assert run(capsys, "verify", "--range", "0")[0] == 2


def test_argparse_errors_exit_2():
    for argv in (["word", "--slope", "2/4", "--eps", "0"], ["word", "--slope", "1/0", "--eps", "3"], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pochette", "word", "--slope", "inf", "--eps", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "E0"
