import copy
import json
import subprocess
import sys

import pytest

from totalpos import catalog
from totalpos.cli import EXIT_FAIL, EXIT_OK, EXIT_PRECISION, EXIT_USAGE, main
from totalpos.matrix import Matrix

NEAR = "1 1\n1 1000000000000000000000000000000000000000000000000000000000001/" + "1" + "0" * 60 + "\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


class TestClassify:
    def test_moment_hankel_auto(self, capsys):
        code, rep = run_json(capsys, "classify", "--case", "exam_jw")
        assert code == EXIT_OK
        assert rep["method"] == "hankel"
        assert (rep["classification"]["tp_order"], rep["classification"]["tn_order"]) == (2, 3)
        assert rep["config"]["case"] == "exam_jw"

    def test_cryer_a_gp(self, capsys):
        code, out, _ = run(capsys, "classify", "--case", "cryer_a", "--method", "gp")
        assert code == EXIT_OK
        assert "criterion not satisfied" in out and "first failing minor" in out

    def test_identity_file(self, capsys, files):
        p = files("i.txt", "1 0 0\n0 1 0\n0 0 1\n")
        code, rep = run_json(capsys, "classify", "--input", p)
        assert code == EXIT_OK
        assert rep["classification"]["tn_order"] == 3 and rep["classification"]["tp_order"] == 0

    def test_hankel_on_non_hankel(self, capsys, files):
        p = files("a.txt", "1 2\n3 4\n")
        assert run(capsys, "classify", "--input", p, "--method", "hankel")[0] == EXIT_USAGE

    def test_parse_failure(self, capsys, files):
        p = files("bad.txt", "1 x\n3 4\n")
        assert run(capsys, "classify", "--input", p)[0] == EXIT_USAGE
        p = files("float.txt", "0.5 1\n1 1\n")
        assert run(capsys, "classify", "--input", p)[0] == EXIT_USAGE

    def test_json_input_round_trip(self, capsys, files):
        A = Matrix([[1, 2], [3, 7]])
        p = files("a.json", json.dumps(A.to_json()))
        code, rep = run_json(capsys, "hankel-gen", "--factorial", "--n", "3")
        assert Matrix.from_json(rep["matrix"]).shape == (3, 3)
        code, rep = run_json(capsys, "classify", "--input", p)
        assert rep["classification"]["tp_order"] == 2


class TestPower:
    def test_moment_hankel_half(self, capsys):
        code, rep = run_json(capsys, "power", "--case", "exam_jw", "--t", "1/2")
        assert code == EXIT_OK
        assert rep["classification"]["tn_order"] == 2
        assert rep["certificates"]["tn_witness"]["sign"] == -1

    def test_fh(self, capsys):
        code, rep = run_json(capsys, "power", "--family", "fh", "--n", "4", "--t", "3/2")
        w = rep["classification"]["tn_witness"]
        assert w is not None and w["rows"] == w["cols"]
        code, rep = run_json(capsys, "power", "--family", "fh", "--n", "4", "--t", "2")
        assert rep["classification"]["tn_order"] == 4

    def test_precision_exhaustion(self, capsys, files):
        p = files("near.txt", NEAR)
        code, out, err = run(capsys, "power", "--input", p, "--t", "1/2", "--bits", "64")
        assert code == EXIT_PRECISION
        assert "enclosure" in err and "64 bits" in err
        assert run(capsys, "power", "--input", p, "--t", "1/2")[0] == EXIT_OK

    def test_precision_env(self, capsys, files, monkeypatch):
        p = files("near.txt", NEAR)
        monkeypatch.setenv("TOTALPOS_BITS", "64")
        assert run(capsys, "power", "--input", p, "--t", "1/2")[0] == EXIT_PRECISION

    def test_decimal_rejected(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["power", "--case", "exam_jw", "--t", "0.5"])
        assert info.value.code == EXIT_USAGE


class TestScan:
    def test_fh_failures(self, capsys):
        code, rep = run_json(capsys, "scan", "--family", "fh", "--n", "4", "--t-range", "0:3", "--steps", "12")
        assert code == EXIT_OK
        assert rep["tn_failures"] == ["1/4", "1/2", "3/4", "5/4", "3/2", "7/4"]
        assert rep["tn_failures_above_critical_exponent"] == []

    def test_moment_hankel(self, capsys):
        code, rep = run_json(capsys, "scan", "--family", "exam_jw", "--t-range", "0:2", "--steps", "8")
        assert rep["tn_failures"] == ["1/4", "1/2", "3/4"]

    def test_tp2_never_fails(self, capsys, files):
        p = files("tp2.txt", "1 2\n3 7\n")
        code, rep = run_json(capsys, "scan", "--input", p, "--t-range", "0:4", "--steps", "8")
        assert code == EXIT_OK
        assert rep["tn_failures"] == [] and rep["tp_failures"] == []
        assert run(capsys, "scan", "--t-range", "0:1")[0] == EXIT_USAGE


class TestRepro:
    def test_all(self, capsys):
        assert run(capsys, "repro", "--all")[0] == EXIT_OK

    def test_tp4_counterexample(self, capsys):
        code, out, _ = run(capsys, "repro", "--case", "fallat07")
        assert code == EXIT_OK and "-114904113" in out

    def test_unknown(self, capsys):
        assert run(capsys, "repro", "--case", "nosuch")[0] == EXIT_USAGE

    def test_both_or_neither(self, capsys):
        assert run(capsys, "repro")[0] == EXIT_USAGE
        assert run(capsys, "repro", "--all", "--case", "fallat07")[0] == EXIT_USAGE

    def test_claim_failure_exit(self, capsys, monkeypatch):
        case = copy.deepcopy(catalog.load_case("fallat07"))
        for claim in case["claims"]:
            if claim.get("expected") == "-114904113":
                claim["expected"] = "0"
        monkeypatch.setattr(catalog, "load_case", lambda cid: case)
        assert run(capsys, "repro", "--case", "fallat07")[0] == EXIT_FAIL

    def test_param_override(self, capsys):
        code, rep = run_json(capsys, "repro", "--case", "hadamard4sym", "--param", "a1=8", "--param", "a0=40")
        assert rep["params"]["a0"] == "40"


class TestHadamard:
    def test_product_observed_failure(self, capsys, files):
        a = files("a.txt", "1 0 0\n0 1 0\n0 0 1\n")
        b = files("b.txt", "1 1 1\n1 1 1\n1 1 1\n")
        code, rep = run_json(capsys, "hadamard", "--a", a, "--b", b, "--op", "sum")
        assert code == EXIT_OK
        assert rep["report"]["observed_failure"] and not rep["report"]["violation"]
        assert Matrix.from_json(rep["result"]) == Matrix([[2, 1, 1], [1, 2, 1], [1, 1, 2]])

    def test_dimension_mismatch(self, capsys, files):
        a = files("a.txt", "1 0\n0 1\n")
        b = files("b.txt", "1\n")
        assert run(capsys, "hadamard", "--a", a, "--b", b)[0] == EXIT_USAGE


class TestHankelGen:
    def test_measure(self, capsys, tmp_path):
        out = tmp_path / "h.json"
        code, rep = run_json(capsys, "hankel-gen", "--measure", "1:1,2:1", "--n", "3", "--output", str(out))
        assert code == EXIT_OK
        H = Matrix.from_json(json.loads(out.read_text()))
        assert H == Matrix.from_json(rep["matrix"])
        assert H.rows[0] == (2, 3, 5)
        assert rep["stieltjes"]["strict"] is False

    def test_exactly_one_source(self, capsys):
        assert run(capsys, "hankel-gen", "--n", "3")[0] == EXIT_USAGE
        assert run(capsys, "hankel-gen", "--n", "3", "--factorial", "--lambda2", "2")[0] == EXIT_USAGE

    def test_random_is_seeded(self, capsys):
        a = run(capsys, "hankel-gen", "--random", "3", "--n", "3", "--seed", "5")[1]
        b = run(capsys, "hankel-gen", "--random", "3", "--n", "3", "--seed", "5")[1]
        assert a == b


class TestExpPoly:
    def test_moment_hankel(self, capsys):
        code, rep = run_json(capsys, "exppoly", "--case", "exam_jw")
        assert code == EXIT_OK
        assert rep["text"] == "-125^t + 2*135^t - 153^t - 162^t + 170^t"
        assert rep["laguerre_bound"] == 3 and rep["roots"]["complete"]

    def test_minor(self, capsys):
        code, out, _ = run(capsys, "exppoly", "--case", "exam_jw", "--minor", "1,2;1,2")
        assert code == EXIT_OK and "f(t) =" in out
        assert run(capsys, "exppoly", "--case", "exam_jw", "--minor", "1,2")[0] == EXIT_USAGE


def test_harness_small(capsys):
    code, out, _ = run(capsys, "harness", "--max-size", "2", "--iterations", "3")
    assert code == EXIT_OK


def test_unknown_flag():
    with pytest.raises(SystemExit) as info:
        main(["classify", "--case", "exam_jw", "--bogus"])
    assert info.value.code == EXIT_USAGE


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "totalpos", "classify", "--case", "exam_jw", "--format", "json"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0
    assert json.loads(r.stdout)["classification"]["tn_order"] == 3
