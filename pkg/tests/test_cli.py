import json
import math
import os

import pytest

from expsub.cli import EXIT_OK, EXIT_PARSE, EXIT_STRICT, JobSpec, main
from expsub.formats import parse_input
from expsub.laurent import ParseError

from conftest import INPUTS


def inp(name):
    return os.path.join(INPUTS, name)


def run_json(capsys, *argv):
    assert main(list(argv)) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_analyze_ledrappier(capsys):
    doc = run_json(capsys, "analyze", inp("ledrappier.txt"))
    assert doc["summary"]["n"] == "{45 deg} U {180 deg} U {270 deg}"
    assert doc["nv"]["kind"] == "exact" and doc["flags"]["integer_in_ideal"] == 2
    assert doc["expansive"]["verdict"] == "expansive-certified"


def test_analyze_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["analyze", inp("line3.txt"), "-o", str(out)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_bad_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("dim: 2\ngens: 1 + u + \n")
    assert main(["analyze", str(bad)]) == EXIT_PARSE
    assert "line 2" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.txt")]) == EXIT_PARSE


def test_render_svg(tmp_path):
    rep = tmp_path / "r.json"
    assert main(["analyze", inp("ledrappier.txt"), "-o", str(rep)]) == EXIT_OK
    svg = tmp_path / "n.svg"
    assert main(["render", str(rep), "--svg", str(svg)]) == EXIT_OK
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<line") == 3


def test_render_empty_set_is_bare_circle(tmp_path):
    # a finite module: N is empty
    src = tmp_path / "finite.txt"
    src.write_text("dim: 2\ngens: 5; u - 2; v - 3\n")
    svg = tmp_path / "e.svg"
    assert main(["render", str(src), "--svg", str(svg)]) == EXIT_OK
    text = svg.read_text()
    assert text.count("<circle") == 1 and "<line" not in text and "<polyline" not in text


def test_render_sphere(tmp_path):
    svg = tmp_path / "s.svg"
    assert main(["render", inp("ledrappier3d.txt"), "--mode", "sampled", "--angular-res", "3",
                 "--svg", str(svg)]) == EXIT_OK
    text = svg.read_text()
    for label in ("upper", "lower", "disk"):
        assert f">{label}<" in text


def test_amoeba_and_nv(capsys, tmp_path):
    assert main(["amoeba", inp("line3.txt")]) == EXIT_OK
    rows = [ln for ln in capsys.readouterr().out.splitlines() if ln and not ln.startswith("#")]
    assert len(rows) > 1000
    doc = run_json(capsys, "nv", inp("line3.txt"), "--angular-res", "1")
    assert doc["nv"]["kind"] == "sampled" and len(doc["asymptotic_directions"]) == 3


def test_nn_and_ranks(capsys):
    doc = run_json(capsys, "nn", inp("ledrappier.txt"))
    assert doc["nn"]["summary"] == "{45 deg} U {180 deg} U {270 deg}"
    doc = run_json(capsys, "ranks", inp("ledrappier.txt"), "--samples", "20")
    assert doc["ranks"]["exprk"] == 1


def test_homoclinic_command(capsys):
    doc = run_json(capsys, "homoclinic", inp("times_two.txt"), "--radius", "8")
    assert doc["convolution_defect"]["mod1"] < 1e-9
    assert "0 0.5" in doc["values"]


def test_oracle_command(capsys):
    doc = run_json(capsys, "oracle", inp("ledrappier.txt"), "--samples", "8")
    assert doc["modulus"] == 2
    r = math.sqrt(0.5)
    got = [x for d in doc["nonexpansive"] for x in d]
    assert got == pytest.approx([r, r, -1.0, 0.0, 0.0, -1.0], abs=1e-8)


def test_strict_exit(capsys):
    assert main(["nn", inp("ledrappier.txt"), "--strict"]) == EXIT_OK
    capsys.readouterr()
    # a one-pair budget leaves the axis directions undecided
    assert main(["analyze", inp("ledrappier.txt"), "--strict", "--gb-budget", "1"]) == EXIT_STRICT


def test_jobspec_validation(tmp_path):
    with pytest.raises(ValueError):
        JobSpec("frobnicate", inp("ledrappier.txt"))
    with pytest.raises(FileNotFoundError):
        JobSpec("analyze", str(tmp_path / "nope"))
    with pytest.raises(ValueError):
        JobSpec("analyze", inp("ledrappier.txt"), angular_res=0)
    with pytest.raises(ValueError):
        JobSpec("analyze", inp("ledrappier.txt"), mode="fast")


@pytest.mark.parametrize("text, where", [
    ("gens: u\n", "dim"),
    ("dim: x\ngens: u\n", "line 1"),
    ("dim: 2\n", "exactly one"),
    ("dim: 2\ngens: u; v\nrow: u, v\n", "exactly one"),
    ("dim: 2\ngens: u\ngens: v\n", "duplicate"),
    ("dim: 2\nvars: a\ngens: a\n", "variable names"),
    ("dim: 2\ncolour: red\n", "expected one of"),
    ("dim: 1\ngens: u - q\n", "line 2"),
])
def test_grammar_errors(text, where):
    with pytest.raises(ParseError, match=where):
        parse_input(text)


def test_grammar_accepts_rows_and_comments():
    spec = parse_input(open(inp("module.txt")).read())
    assert len(spec.rows) == 2 and spec.dim == 2
    assert len(spec.ideal().gens) == 1
    spec = parse_input("# header\ndim: 3\ngens: 1 + u + v; w - 2   # trailing\nparam_map: z, -z - 1, 2\n")
    assert spec.vars == ("u", "v", "w") and len(spec.param_map) == 3
