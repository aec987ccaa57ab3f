import json
import subprocess
import sys

import pytest

from cehom.cli import run

SEQ = """ring IntegersMod 4
module k gens 1 relations 1x1 [[2]]
complex A bounded 0 0
  term 0 k
end
complex B bounded 0 0
  term 0 free 1
end
complex C bounded 0 0
  term 0 k
end
map f A B
  comp 0 1x1 [[2]]
end
map g B C
  comp 0 1x1 [[1]]
end
sequence s f g
"""

DISK = """ring IntegersMod 4
complex D bounded 0 1
  term 0 free 1
  term 1 free 1
  diff 1 1x1 [[1]]
end
"""

SPHERE_K = """ring PolyQuotient 2 [0,0,1]
module k gens 1 relations 1x1 [[[0,1]]]
complex S bounded 0 0
  term 0 k
end
"""

RESIDUE = """ring MonomialQuotient 2 2 [[2,0],[1,1],[0,2]]
module k gens 1 relations 1x2 [[[0,1,0],[0,0,1]]]
"""


@pytest.fixture
def write(tmp_path):
    def _w(text, name="in.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _w


def test_classify_example(capsys):
    assert run(["classify", "--example"]) == 0
    assert "strongly C-E Gorenstein projective: Yes" in capsys.readouterr().out


def test_classify_json_with_object(capsys):
    assert run(["classify", "--example", "--json", "--gp-object"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "Yes" and rep["gp_object"]["route"] == "minimize"
    assert len(rep["input_sha256"]) == 64 and rep["seed"] == 1


def test_ce_projective_no(capsys):
    assert run(["ce-projective", "--example"]) == 1
    assert "Z not projective" in capsys.readouterr().out


def test_sequence_commands(write, capsys):
    path = write(SEQ)
    assert run(["ce-exact", path]) == 0
    assert run(["xi-triangle", path]) == 1
    assert "xi-triangle: No" in capsys.readouterr().out


def test_resolve_then_verify(write, tmp_path, capsys):
    out = str(tmp_path / "res.txt")
    assert run(["resolve", write(DISK), "--depth", "2", "--out", out]) == 0
    assert run(["verify-resolution", out]) == 0
    assert "resolution verifies: Yes" in capsys.readouterr().out


def test_resolve_rejects_non_exact(write):
    assert run(["resolve", write(SPHERE_K)]) == 3


def test_minimize_and_equivalence(write, capsys):
    assert run(["minimize", write(DISK)]) == 0
    assert "eliminated 1 disk summand(s)" in capsys.readouterr().out
    text = DISK + "complex Z bounded 0 0\n  term 0 free 0\nend\nmap z D Z\nend\n"
    assert run(["homotopy-equiv", write(text)]) == 0


def test_gp_module_verdicts(write, capsys):
    assert run(["gp-module", write(RESIDUE)]) == 2
    assert "Gorenstein projective: Unknown" in capsys.readouterr().out
    assert run(["gp-module", write(SPHERE_K, "k.txt")]) == 0


def test_classify_no(write):
    assert run(["classify", write(SPHERE_K)]) == 1


def test_input_errors(write, capsys):
    assert run(["classify", write("ring IntegersMod 4\ncomplex C oops\n")]) == 3
    assert run(["classify", "/nonexistent/file"]) == 3
    assert run(["no-such-command", "x"]) == 3
    assert run(["suite", "no-such-suite"]) == 3
    with pytest.raises(SystemExit) as e:
        run(["classify", "--depth", "two"])
    assert e.value.code == 3


def test_suite_command(capsys):
    assert run(["suite", "lemma34", "--count", "8", "--seed", "2"]) == 0
    assert "suite lemma34: 8/8 pass (seed 2)" in capsys.readouterr().out


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "cehom", "classify", "--example"], capture_output=True, text=True)
    assert p.returncode == 0
    assert "strongly C-E Gorenstein projective: Yes" in p.stdout
