import json
import subprocess
import sys

import pytest

from arithsurf import formats
from arithsurf.cli import main

from conftest import FIXTURES, fixture_paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fixture(name):
    return str(FIXTURES / f"{name}.json")


def test_cone_resolve(capsys):
    code, out, _ = run(capsys, "cone", "resolve", '{"u":[1,0],"v":[-2,5]}')
    assert code == 0 and json.loads(out)["weights"] == [-3, -2]


def test_cone_chain_and_panels(capsys):
    code, out, _ = run(capsys, "cone", "panels", '{"weights":[-3,-2]}')
    data = json.loads(out)
    assert code == 0 and data["union"] == data["embedding_dim"] == 4
    code, out, _ = run(capsys, "cone", "chain", '{"weights":[-2]}')
    assert json.loads(out)["weights"] == [-2]
    code, out, _ = run(capsys, "cone", "star", '{"u":[1,0],"v":[1,2]}')
    assert json.loads(out)["rays"] == [[1, 0], [1, 1], [1, 2]]


def test_classify_stable(capsys):
    code, out, _ = run(capsys, "model", "classify", fixture("genus2_two_lines"))
    rep = json.loads(out)
    assert code == 0 and rep["stable"] is True


def test_classify_p_override_identical_verdicts(capsys):
    _, a, _ = run(capsys, "model", "classify", fixture("genus2_two_lines"))
    _, b, _ = run(capsys, "model", "classify", fixture("genus2_two_lines"), "--p", "0")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "p"}
    assert strip(a) == strip(b)


def test_classify_exit_zero_for_negative_verdict(capsys):
    code, out, _ = run(capsys, "model", "classify", fixture("genus3_mult2"), "--p", "2")
    assert code == 0 and json.loads(out)["log_smooth"] is False


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "model", "classify", str(bad))[0] == 1
    assert run(capsys, "model", "classify", fixture("aeb_a1"), "--p", "4")[0] == 1
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"p": 0, "components": [{"id": "A", "m": 1, "kd": 1, "sep": True, "kind": "P1", "s": -1}], "edges": [], "branches": []}))
    assert run(capsys, "model", "ncd", str(invalid))[0] == 1
    rational = tmp_path / "rational.json"
    rational.write_text(json.dumps({"p": 0, "components": [{"id": "A", "m": 1, "kd": 1, "sep": True, "kind": "P1", "s": 0}], "edges": [], "branches": []}))
    code, _, err = run(capsys, "model", "ncd", str(rational))
    assert code == 2 and "error" in err
    assert run(capsys, "model", "blowdown", fixture("genus2_two_lines"), "--component", "A")[0] == 2
    assert run(capsys, "cone", "chain", '{"weights":[-1]}')[0] == 1


def test_blowup_then_blowdown(capsys, tmp_path):
    code, out, _ = run(capsys, "model", "blowup", fixture("genus2_two_lines"), "--at", "edge:0")
    assert code == 0
    path = tmp_path / "up.json"
    path.write_text(out)
    new = [c["id"] for c in json.loads(out)["components"] if c["id"] not in ("A", "B")]
    code, out, _ = run(capsys, "model", "blowdown", str(path), "--component", new[0])
    assert code == 0
    from arithsurf.fiber_graph import isomorphic

    assert isomorphic(formats.loads_model(out), formats.load_model(fixture("genus2_two_lines")))


def test_dot_output(capsys):
    code, out, _ = run(capsys, "model", "lreg", fixture("aeb_a1"), "--format", "dot")
    assert code == 0 and out.lstrip().startswith(("graph", "digraph"))
    assert "shape=diamond" in out and "m=1" in out and "x1 (-2)" in out


def test_esets_and_emin(capsys):
    code, out, _ = run(capsys, "model", "esets", fixture("aeb_a1"))
    assert code == 0 and "E" in json.dumps(json.loads(out))
    code, out, _ = run(capsys, "model", "emin", fixture("genus3_mult2"))
    assert json.loads(out) == {"p": 3, "e_min": 2}
    assert run(capsys, "model", "emin", fixture("genus3_mult2"), "--p", "2")[0] == 2


@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.stem)
def test_fixture_round_trip_byte_identical(path):
    text = path.read_text()
    assert formats.dumps(formats.model_to_json(formats.loads_model(text))) == text
    assert "." not in "".join(ch for ch in text if not ch.isalpha() and ch not in '"_')


def test_batch_jobs_match_serial(capsys):
    files = [str(p) for p in fixture_paths()]
    _, serial, _ = run(capsys, "model", "classify", *files)
    _, parallel, _ = run(capsys, "model", "classify", *files, "--jobs", "2")
    assert serial == parallel and len(json.loads(serial)) == len(files)


def test_deterministic_subprocess():
    cmd = [sys.executable, "-m", "arithsurf", "model", "classify", fixture("exc_e_blownup"), "--format", "text"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and "stable=True" in a
