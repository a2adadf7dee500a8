import json
import subprocess
import sys

import pytest

from strength_verify import canonical
from strength_verify.cli import EXIT_INPUT, EXIT_OK, EXIT_REFUTED, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK
    return json.loads(out)


class TestSliceRank:
    @pytest.mark.parametrize("n,d,expected", [(3, 4, 3), (3, 2, 2), (1, 9, 1), (6, 4, 5)])
    def test_values(self, capsys, n, d, expected):
        data = run_json(capsys, "slice-rank", "--n", str(n), "--d", str(d))
        assert data["slice_rank"] == str(expected)

    def test_family(self, capsys):
        data = run_json(capsys, "slice-rank", "--n", "4", "--degrees", "4,3")
        assert data["degrees"] == ["3", "4"]
        assert run(capsys, "slice-rank", "--n", "4", "--degrees", "2,3")[0] == EXIT_INPUT

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "slice-rank", "--n", "3", "--d", "4")
        assert code == EXIT_OK
        assert "slice_rank: 3" in out.splitlines()


class TestFEval:
    def test_exceptional_value(self, capsys):
        data = run_json(capsys, "f-eval", "--n", "3", "--d", "4", "--m", "2", "--tail", "1", "--key")
        assert data["f"] == data["f_series"] == "1"
        assert data["key_inequality"]["exceptional"] is True

    def test_default_tail(self, capsys):
        data = run_json(capsys, "f-eval", "--n", "3", "--d", "4", "--m", "1")
        assert data["ell_tail"] == ["0"] and data["f"] == "1"

    def test_bad_tail_is_input_error(self, capsys):
        code, _, err = run(capsys, "f-eval", "--n", "3", "--d", "6", "--m", "1", "--tail", "1")
        assert code == EXIT_INPUT
        assert "error" in err


class TestFrobergAndSymbolic:
    def test_froberg(self, capsys):
        data = run_json(capsys, "froberg", "--n", "2", "--degrees", "2,2", "--d", "4")
        assert data["series"] == ["1", "3", "4", "4", "4"]
        assert data["coeff"] == "4"

    def test_froberg_csv(self, capsys):
        code, out, _ = run(capsys, "froberg", "--n", "2", "--degrees", "2,2", "--d", "2", "--format", "csv")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "key,value"
        assert "coeff,4" in out.splitlines()

    def test_symbolic_quartic(self, capsys):
        data = run_json(capsys, "symbolic", "--d", "4")
        assert data["statements"]["B"]["g"] == "1/6*m^3 - 2*m*l2 + 17/6*m + 2*l2 - 3"
        assert data["M"] == "21"

    def test_compute_n(self, capsys):
        data = run_json(capsys, "compute-n", "--d", "4")
        assert data["N_published"] == "755"
        assert 700 <= int(data["N_computed"]) <= 800


class TestCoverage:
    def test_cells(self, capsys):
        data = run_json(capsys, "coverage")
        cells = {(int(c["n"]), int(c["d"])): c["label"] for c in data["cells"]}
        assert cells[2, 3] == "red"
        assert cells[4, 5] == "green"
        assert cells[8, 10] == "open"
        assert len(cells) == 7 * 11

    def test_text_grid(self, capsys):
        code, out, _ = run(capsys, "coverage", "--max-n", "3", "--max-d", "4")
        assert code == EXIT_OK
        assert out.splitlines()[1].split() == ["2", "R", "R", "R"]

    def test_csv_rows(self, capsys):
        code, out, _ = run(capsys, "coverage", "--max-n", "2", "--max-d", "3", "--format", "csv")
        assert out.splitlines() == ["n,d,label", "2,2,red", "2,3,red"]


class TestOracle:
    def test_hf(self, capsys):
        data = run_json(capsys, "oracle", "--n", "2", "--degrees", "2,2", "--d", "2")
        assert data["hf_value"] == "4"

    def test_tangent(self, capsys):
        data = run_json(capsys, "oracle", "--mode", "tangent", "--n", "3", "--d", "4", "--ells", "1,1")
        assert data["oracle_hf"] == data["f_value"] == "1"

    def test_sfc(self, capsys):
        data = run_json(capsys, "oracle", "--mode", "sfc", "--n", "3", "--degrees", "2,3,4", "--d", "6")
        assert data["verdict"] == "pass"

    def test_composite_modulus_rejected(self, capsys):
        code, _, _ = run(capsys, "oracle", "--n", "2", "--degrees", "2", "--d", "2", "--p", "100")
        assert code == EXIT_INPUT


class TestVerify:
    def test_quartic(self, capsys):
        code, out, _ = run(capsys, "verify", "--d", "4", "--format", "json")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["verdict"] == "verified"
        keys = [(r["n"], r["m"], r["ell_tail"]) for r in data["exceptional"]]
        assert keys == [("3", "2", ["1"]), ("3", "3", ["2"])]
        assert canonical.dumps(canonical.normalize(data)) == out.strip()

    def test_summary_and_certificate_file(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        code, out, _ = run(capsys, "verify", "--d", "5", "--output", str(path))
        assert code == EXIT_OK
        assert "verdict: verified" in out
        assert json.loads(path.read_text())["d"] == "5"

    def test_records_csv(self, capsys, tmp_path):
        path = tmp_path / "cases.csv"
        assert run(capsys, "verify", "--d", "4", "--records", str(path))[0] == EXIT_OK
        lines = path.read_text().splitlines()
        assert lines[0] == "n,d,m,l2,lhs,rhs,strict,exceptional"
        assert len(lines) == 185

    def test_refuted_exit_code(self, capsys, monkeypatch):
        import strength_verify.verifier as v

        monkeypatch.setattr(v, "is_exceptional", lambda *a: False)
        code, out, _ = run(capsys, "verify", "--d", "4")
        assert code == EXIT_REFUTED
        assert "verdict: refuted" in out

    @pytest.mark.parametrize("d", ["11", "3"])
    def test_out_of_scope(self, capsys, d):
        assert run(capsys, "verify", "--d", d)[0] == EXIT_INPUT


class TestParser:
    def test_missing_argument(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["slice-rank"])
        assert exc.value.code == EXIT_INPUT

    def test_bad_list(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["froberg", "--n", "2", "--degrees", "2,x", "--d", "2"])
        assert exc.value.code == EXIT_INPUT

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "strength_verify.cli", "slice-rank", "--n", "3", "--d", "4", "--format", "json"],
            capture_output=True,
            text=True,
            check=False,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["slice_rank"] == "3"
