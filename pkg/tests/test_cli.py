import shutil
import subprocess
import sys
from importlib.resources import files

import pytest

from eqposets.cli import main


def data(kind, name):
    return str(files("eqposets").joinpath("data", kind, name))


@pytest.fixture
def k6_file(tmp_path):
    p = tmp_path / "k6.poset"
    p.write_text("poset K6\npoint a weak\npoint b weak\n")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_poset_criterion(capsys, k6_file):
    code, out, _ = run(capsys, "poset", "criterion", k6_file)
    assert code == 0 and out.strip() == "OneParameter (1 critical occurrence: K6)"


def test_poset_check_and_sincere(capsys):
    code, out, _ = run(capsys, "poset", "check", data("posets", "A25.poset"))
    assert code == 0 and "3 points" in out
    code, out, _ = run(capsys, "poset", "sincere", "A25*")
    assert out.strip() == "A25 (anti)"


def test_tits_eval(capsys):
    code, out, _ = run(capsys, "tits", "eval", data("posets", "A25.poset"), "--d", "1; a=1, eta=1")
    assert code == 0 and out.strip() == "1"


def test_tits_classify_and_roots(capsys):
    code, out, _ = run(capsys, "tits", "classify", "K6", "--d", "2; a=2, b=2")
    assert out.strip() == "ImaginaryRoot"
    code, out, _ = run(capsys, "tits", "roots", "K6", "--box", "1,2,2")
    assert "(1,1,0)\t1" in out.splitlines()


def test_tits_missing_vector(capsys):
    code, _, err = run(capsys, "tits", "eval", "K6")
    assert code == 2 and "--d" in err


def test_corep_commands(capsys, tmp_path):
    s = tmp_path / "s.corep"
    code, out, _ = run(capsys, "catalog", "emit", "K6", "--x", "t^2+t+1", "--out", str(s))
    assert code == 0
    code, out, _ = run(capsys, "corep", "dim", str(s))
    assert out.startswith("2; a=2, b=2\tf=0\tindecomposable")
    ss = tmp_path / "ss.corep"
    run(capsys, "corep", "sum", str(s), str(s), "--out", str(ss))
    code, out, _ = run(capsys, "corep", "decompose", str(ss))
    assert code == 0 and out.count("# summand") == 2
    code, out, _ = run(capsys, "corep", "iso", str(s), str(s))
    assert out.strip() == "isomorphic"
    code, out, _ = run(capsys, "corep", "dual", str(s))
    assert out.startswith("corep K6* field gf2")


def test_catalog_emit_listed(capsys):
    code, out, _ = run(capsys, "catalog", "emit", "F17")
    assert out.splitlines()[2] == "1 | x"
    code, out, _ = run(capsys, "catalog", "emit", "4(A25-5)", "--field", "qsqrt2")
    assert out.startswith("corep A25 field qsqrt2")
    code, out, _ = run(capsys, "catalog", "emit", "K6-5", "--n", "2")
    assert code == 0


def test_catalog_emit_errors(capsys):
    assert run(capsys, "catalog", "emit", "K6")[0] == 2
    assert run(capsys, "catalog", "emit", "nope")[0] == 2
    assert run(capsys, "catalog", "emit", "K8", "--x", "t+1", "--variant", "separable")[0] == 2


def test_malformed_file_line_number(capsys, tmp_path):
    bad = tmp_path / "bad.corep"
    bad.write_text("corep K6 field gf2\nstripes: a=1 b=1\n1 | 1 1\n")
    code, _, err = run(capsys, "corep", "dim", str(bad))
    assert code == 2 and "bad.corep:3:" in err


def test_missing_file_and_bad_subcommand(capsys):
    assert run(capsys, "corep", "dim", "/no/such.corep")[0] == 2
    assert run(capsys, "poset", "explode", "K6")[0] == 2


def test_verify_exit_codes(capsys, tmp_path):
    out = tmp_path / "r.tsv"
    code, text, _ = run(capsys, "verify", "series", "--poset", "K6", "--n", "1", "--out", str(out))
    assert code == 0 and "PASS" in text
    assert out.read_text().startswith("case\texpected\tcomputed\tstatus\n")
    # two A40* rows disagree with the tabulated values
    code, text, _ = run(capsys, "verify", "tables")
    assert code == 1 and "A40*" in text


def test_verify_output_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    run(capsys, "verify", "theorem-d", "--poset", "K6", "--box", "1", "--out", str(a))
    run(capsys, "verify", "theorem-d", "--poset", "K6", "--box", "1", "--out", str(b), "--threads", "2")
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.skipif(shutil.which("eqp") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["eqp", "tits", "eval", "A25", "--d", "1; a=1, eta=1"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1"


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "eqposets.cli", "poset", "criterion", "K8"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("OneParameter")
