import json

import pytest

from symrank import cli
from symrank.multiplier import VerificationError


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


class TestBoundCommand:
    def test_constructive_example(self, capsys):
        code, out = run(
            capsys, "bound", "--p", "5", "--n", "100", "--field", "p2",
            "--method", "constructive", "--policy", "empirical",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["value_int"] == 300
        assert doc["witnesses"]["l_k"] == 97 and doc["witnesses"]["l_k1"] == 101
        assert doc["policy"]["name"] == "empirical"

    def test_closed_form(self, capsys):
        code, out = run(capsys, "bound", "--p", "5", "--n", "100", "--method", "closed")
        assert code == 0
        doc = json.loads(out)
        assert doc["value_int"] == 316 and doc["valid_unconditional"] is False

    def test_method_all_bundles_reports(self, capsys):
        code, out = run(capsys, "bound", "--p", "5", "--n", "100", "--field", "p")
        assert code == 0
        doc = json.loads(out)
        methods = [r.get("method") for r in doc["reports"]]
        assert methods == ["closed_prime", "constructive"]

    def test_too_small_n_is_infeasible(self, capsys):
        code, out = run(capsys, "bound", "--p", "5", "--n", "3", "--method", "constructive")
        assert code == 2
        doc = json.loads(out)
        assert doc["error"] == "infeasible" and "reason" in doc

    def test_alpha_with_dudek_is_usage_error(self, capsys):
        code, out = run(capsys, "bound", "--p", "5", "--n", "100", "--alpha", "1/2")
        assert code == 1
        assert json.loads(out)["error"] == "usage"

    def test_bad_p_is_usage_error(self, capsys):
        code, out = run(capsys, "bound", "--p", "6", "--n", "100")
        assert code == 1

    def test_text_format(self, capsys):
        code, out = run(
            capsys, "bound", "--p", "5", "--n", "100", "--method", "closed",
            "--format", "text",
        )
        assert code == 0
        assert "value_int: 316" in out


class TestGapsCommand:
    def test_example(self, capsys):
        code, out = run(capsys, "gaps", "--limit", "100000", "--alpha", "2/3")
        assert code == 0
        doc = json.loads(out)
        assert doc["violations"] == [7]
        assert "runtime_ms" not in doc  # reproducible by default

    def test_timing_flag_adds_runtime(self, capsys):
        code, out = run(capsys, "gaps", "--limit", "1000", "--timing")
        assert code == 0
        assert "runtime_ms" in json.loads(out)

    def test_bad_alpha(self, capsys):
        code, out = run(capsys, "gaps", "--limit", "1000", "--alpha", "x/y")
        assert code == 1


class TestGenusCommand:
    def test_level_mode(self, capsys):
        code, out = run(capsys, "genus", "--N", "143")
        assert code == 0
        assert json.loads(out)["genus"] == 13

    def test_family_mode(self, capsys):
        code, out = run(capsys, "genus", "--family", "11l", "--l", "97", "--p", "5")
        assert code == 0
        doc = json.loads(out)
        assert doc["genus"] == 97 and doc["n1_lower_p2"] == 392

    def test_family_p_mismatch(self, capsys):
        code, out = run(capsys, "genus", "--family", "23l", "--l", "97", "--p", "5")
        assert code == 1

    def test_exclusive_flags(self, capsys):
        code, out = run(capsys, "genus", "--N", "143", "--family", "11l", "--l", "5", "--p", "7")
        assert code == 1

    def test_missing_flags(self, capsys):
        code, out = run(capsys, "genus", "--family", "11l")
        assert code == 1


class TestMultCommand:
    def test_example(self, capsys):
        code, out = run(
            capsys, "mult", "--q", "2", "--n", "3", "--allow-deg2", "--verify", "exhaustive"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["rank"] == 6
        assert doc["verification"]["failures"] == 0
        assert doc["verification"]["pairs_checked"] == 64

    def test_infeasible(self, capsys):
        code, out = run(capsys, "mult", "--q", "2", "--n", "4", "--allow-deg2")
        assert code == 2
        assert "reason" in json.loads(out)

    def test_emit_tensor(self, capsys, tmp_path):
        path = tmp_path / "tensor.json"
        code, out = run(
            capsys, "mult", "--q", "2", "--n", "2", "--emit-tensor", str(path)
        )
        assert code == 0
        doc = json.loads(path.read_text())
        assert doc["rank"] == 3
        assert json.loads(out)["tensor_path"] == str(path)

    def test_random_mode_reports_seed(self, capsys):
        code, out = run(capsys, "mult", "--q", "2", "--n", "2", "--verify", "random:32")
        assert code == 0
        doc = json.loads(out)
        assert doc["verification"]["mode"] == "random"
        assert doc["verification"]["seed"] == cli.DEFAULT_SEED

    def test_bad_verify_mode(self, capsys):
        code, out = run(capsys, "mult", "--q", "2", "--n", "2", "--verify", "never")
        assert code == 1

    def test_verification_failure_maps_to_exit_3(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise VerificationError(2, 2, 1, 2, 3, 0)

        monkeypatch.setattr(cli.multiplier, "verify", boom)
        code, out = run(capsys, "mult", "--q", "2", "--n", "2")
        assert code == 3
        assert json.loads(out)["error"] == "verification_failure"


class TestCompareCommand:
    def test_example(self, capsys):
        code, out = run(capsys, "compare", "--p", "5", "--n", "100")
        assert code == 0
        doc = json.loads(out)
        assert doc["p2"]["smallest"] == "constructive"
        assert doc["p2"]["methods"][0]["value_int"] == 300


class TestTableCommand:
    def test_csv_shape(self, capsys):
        code, out = run(
            capsys, "table", "--p-set", "5,7", "--n-range", "50:60:5", "--format", "csv"
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "p,n,field,method,value_real,value_int,valid,policy,l_k,l_k1,genus,caveats"
        # 2 p-values x 3 n-values x 2 fields x 4 methods
        assert len(lines) == 1 + 2 * 3 * 2 * 4

    def test_json_rows(self, capsys):
        code, out = run(capsys, "table", "--p-set", "5", "--n-range", "100:100")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert {r["method"] for r in rows} >= {"constructive", "closed_quadratic", "prior_vi"}

    def test_bad_ranges(self, capsys):
        assert run(capsys, "table", "--p-set", "5", "--n-range", "60:50")[0] == 1
        assert run(capsys, "table", "--p-set", "a,b", "--n-range", "50:60")[0] == 1

    def test_infeasible_cells_become_caveat_rows(self, capsys):
        # p=17, n=20: the pair threshold is below 2, so the constructive
        # route is infeasible and the row says so instead of aborting
        code, out = run(capsys, "table", "--p-set", "17", "--n-range", "20:20", "--format", "csv")
        assert code == 0
        rows = out.strip().split("\n")[1:]
        constructive = [r for r in rows if ",constructive," in r]
        assert len(constructive) == 2
        assert all("infeasible: pair_selection" in r for r in constructive)


class TestUsageAndDeterminism:
    def test_unknown_flag(self, capsys):
        assert run(capsys, "bound", "--p", "5", "--n", "9", "--frob", "1")[0] == 1

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_missing_required(self, capsys):
        assert run(capsys, "bound", "--p", "5")[0] == 1

    def test_csv_only_for_table(self, capsys):
        assert run(capsys, "bound", "--p", "5", "--n", "9", "--format", "csv")[0] == 1

    def test_help_exits_zero(self, capsys):
        assert cli.main(["--help"]) == 0

    @pytest.mark.parametrize(
        "argv",
        [
            ("bound", "--p", "5", "--n", "100", "--method", "all"),
            ("gaps", "--limit", "10000"),
            ("genus", "--N", "253"),
            ("mult", "--q", "3", "--n", "2"),
            ("mult", "--q", "7", "--n", "5", "--allow-deg2", "--verify", "random:200", "--seed", "9"),
            ("compare", "--p", "7", "--n", "60"),
            ("table", "--p-set", "5", "--n-range", "30:40:10", "--format", "csv"),
        ],
    )
    def test_byte_identical_reruns(self, capsys, argv):
        code1, out1 = run(capsys, *argv)
        code2, out2 = run(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2
