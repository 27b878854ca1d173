import json
import subprocess
import sys

import pytest

from properad.cli import main

MU = "v0:mu(2,1)\nin:0.0,0.1\nout:0.0\n"
HANDLE = "v0:delta(1,2)\nv1:mu(2,1)\ne:0.0->1.0\ne:0.1->1.1\nin:0.0\nout:1.0\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_reduce(tmp_path, capsys):
    p = tmp_path / "mu.g"
    p.write_text(MU)
    assert run(capsys, "reduce", str(p)) == (0, "(2,1,g=0,deg=0)\n", "")
    h = tmp_path / "handle.g"
    h.write_text(HANDLE)
    code, out, _ = run(capsys, "reduce", str(h), "--n", "3", "--all-orders")
    assert code == 0 and out == "(1,1,g=1,deg=3)\n"


def test_reduce_bad_graph(tmp_path, capsys):
    p = tmp_path / "bad.g"
    p.write_text("v0:mu(2,1)\nin:0.0\nout:0.0\n")
    code, _, err = run(capsys, "reduce", str(p))
    assert code == 2 and "dangling" in err
    code, _, _ = run(capsys, "reduce", str(tmp_path / "missing.g"))
    assert code == 2


def test_compose(capsys):
    assert run(capsys, "compose", "2,1,0", "1,2,0")[:2] == (0, "(2,2,g=0,deg=2)\n")
    assert run(capsys, "compose", "1,2,0", "2,1,0", "--edges", "2")[:2] == (0, "(1,1,g=1,deg=2)\n")
    assert run(capsys, "compose", "2,1,0", "1,2,0", "--edges", "2")[0] == 2


def test_dsq(capsys):
    code, out, _ = run(capsys, "dsq", "2", "1", "3")
    assert code == 0 and "PASS" in out
    assert run(capsys, "dsq", "4", "4", "3")[0] == 3
    assert run(capsys, "dsq", "2", "1", "--n", "3")[0] == 2


def test_euler(capsys):
    assert run(capsys, "euler", "s2")[:2] == (0, "chi = 2\n")
    code, out, _ = run(capsys, "euler", "cp2", "--format", "structured")
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[0] == {"command": "euler", "format": "properad-cli/1"}
    assert lines[1] == {"chi": 3}


def test_resolve(tmp_path, capsys):
    report = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "resolve", "perturbed", "--report", str(report))
    assert code == 0 and "chain map audit: PASS" in out
    assert report.read_text().strip()
    code, out, _ = run(capsys, "resolve", "broken")
    assert code == 1 and "obstruction at weight 2" in out
    assert run(capsys, "resolve", "nosuchtarget")[0] == 2


def test_dualize(capsys):
    code, out, _ = run(capsys, "dualize", "t2")
    assert code == 0 and out.rstrip().endswith("PASS")


def test_dilie(capsys):
    assert run(capsys, "dilie", "sl2")[0] == 0
    code, _, err = run(capsys, "dilie", "heisenberg3")
    assert code == 1 and "Killing form degenerate" in err
    assert run(capsys, "dilie", "so3", "--algebra", "s2")[0] == 0


def test_tensor_check_and_graphs(capsys):
    code, out, _ = run(capsys, "tensor-check", "--max-arity", "3", "--n", "2")
    assert code == 0 and out.rstrip().endswith("tensor check: PASS")
    code, out, _ = run(capsys, "graphs", "2", "1", "--max-vertices", "2")
    assert code == 0 and out.startswith("2 graphs")
    assert run(capsys, "graphs", "1", "1", "--max-vertices", "9")[0] == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "properad", "euler", "t2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == "chi = 0\n"


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


FROB_MID = "v0:mu(2,1)\nv1:delta(1,2)\ne:0.0->1.0\nin:0.0,0.1\nout:1.0,1.1\n"
FROB_LEFT = "v0:delta(1,2)\nv1:mu(2,1)\ne:0.0->1.1\nin:1.0,0.0\nout:1.0,0.1\n"


def test_frobenius_relation_sides_agree(tmp_path, capsys):
    outs = []
    for i, text in enumerate((FROB_MID, FROB_LEFT)):
        p = tmp_path / f"side{i}.g"
        p.write_text(text)
        code, out, _ = run(capsys, "reduce", str(p), "--all-orders")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == "(2,2,g=0,deg=2)\n"


def test_structured_output_is_deterministic(capsys):
    first = run(capsys, "resolve", "perturbed", "--format", "structured")
    second = run(capsys, "resolve", "perturbed", "--format", "structured")
    assert first == second
    assert json.loads(first[1].splitlines()[0])["format"] == "properad-cli/1"
