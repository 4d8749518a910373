import csv
import io
import json

import pytest

from polymac.cli import (
    EXIT_OK,
    EXIT_REJECT,
    EXIT_USAGE,
    SWEEP_COLUMNS,
    expand_families,
    main,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSignVerify:
    def test_sign_prints_tag(self, capsys):
        code, out, _ = run_cli(
            capsys, "sign", "--p", "5", "--l", "3", "--k1", "2", "--k2", "3",
            "--msg", "1,4",
        )
        assert code == EXIT_OK
        assert out.strip() == "3"

    def test_verify_round_trip(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--p", "5", "--l", "3", "--k1", "2", "--k2", "3",
            "--msg", "1,4", "--tag", "3",
        )
        assert code == EXIT_OK
        assert out.strip() == "accept"

    def test_verify_rejects_perturbed_tag(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--p", "5", "--l", "3", "--k1", "2", "--k2", "3",
            "--msg", "1,4", "--tag", "4",
        )
        assert code == EXIT_REJECT
        assert out.strip() == "reject"

    def test_non_prime_modulus_is_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "sign", "--p", "6", "--l", "2", "--k1", "1", "--k2", "1",
            "--msg", "1",
        )
        assert code == EXIT_USAGE
        assert "prime" in err

    def test_overlong_message_is_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "sign", "--p", "5", "--l", "1", "--k1", "1", "--k2", "1",
            "--msg", "1,2",
        )
        assert code == EXIT_USAGE
        assert "length" in err

    def test_missing_flag_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sign", "--p", "5"])
        assert exc.value.code == EXIT_USAGE

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "sign", "--p", "5", "--l", "3", "--k1", "2", "--k2", "3",
            "--msg", "1,4", "--format", "json",
        )
        assert code == EXIT_OK
        assert json.loads(out) == {"tag": 3}


class TestDistance:
    def test_default_other_is_uniform(self, capsys):
        code, out, _ = run_cli(
            capsys, "distance", "--probs", "1/2,1/5,1/5,1/10,0",
        )
        assert code == EXIT_OK
        assert out.startswith("3/10")

    def test_explicit_other(self, capsys):
        code, out, _ = run_cli(
            capsys, "distance", "--probs", "1,0", "--other", "0,1",
            "--format", "json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["distance"]["exact"] == "1/1"


class TestPmax:
    def test_table_with_oracle_matches(self, capsys):
        code, out, _ = run_cli(
            capsys, "pmax", "--n", "4", "--delta", "1/4", "--oracle", "8",
            "--format", "json",
        )
        assert code == EXIT_OK
        rows = json.loads(out)["rows"]
        assert len(rows) == 3
        assert all(row["match"] for row in rows)

    def test_single_s_value(self, capsys):
        code, out, _ = run_cli(
            capsys, "pmax", "--n", "10", "--delta", "1/5", "--s", "3",
        )
        assert code == EXIT_OK
        assert "1/2" in out

    def test_saturated_case(self, capsys):
        code, out, _ = run_cli(
            capsys, "pmax", "--n", "10", "--delta", "1/5", "--s", "9",
            "--format", "json",
        )
        assert json.loads(out)["rows"][0]["closed_exact"] == "1/1"

    def test_out_of_range_delta_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "pmax", "--n", "4", "--delta", "9/10")
        assert code == EXIT_USAGE


class TestExtremal:
    def test_prints_distribution_and_distance(self, capsys):
        code, out, _ = run_cli(
            capsys, "extremal", "--n", "5", "--delta", "3/10", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["probs"] == ["1/2", "1/5", "1/5", "1/10", "0/1"]
        assert payload["delta"] == "3/10"


class TestAttack:
    def test_uniform_passes_with_exit_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, "attack", "--p", "5", "--l", "1", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["all_pass"] is True
        assert payload["exact_advantage"]["adaptive_optimal"]["exact"] == "1/5"

    def test_skewed_pass_against_general_bound(self, capsys):
        code, out, _ = run_cli(
            capsys, "attack", "--p", "5", "--l", "1",
            "--k1-dist", "extremal:1/5", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["bounds"]["general_eq9"]["raw"]["exact"] == "3/5"

    def test_mc_brackets_exact(self, capsys):
        code, out, _ = run_cli(
            capsys, "attack", "--p", "5", "--l", "1", "--mc-trials", "20000",
            "--seed", "5", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        exact = payload["exact_advantage"]["adaptive_optimal"]["decimal"]
        lo, hi = payload["monte_carlo"]["adaptive_optimal"]["ci99"]
        assert lo <= exact <= hi

    def test_byte_identical_json_for_same_config(self, capsys):
        argv = ["attack", "--p", "5", "--l", "2", "--k1-dist", "extremal:2/5",
                "--seed", "9", "--format", "json"]
        code1, out1, _ = run_cli(capsys, *argv)
        code2, out2, _ = run_cli(capsys, *argv)
        assert code1 == code2 == EXIT_OK
        assert out1 == out2

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "cell.json"
        cfg.write_text(json.dumps({"p": 5, "l": 1, "k1_dist": "extremal:1/5"}))
        code, out, _ = run_cli(
            capsys, "attack", "--config", str(cfg), "--format", "json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["config"]["k1_spec"] == "extremal:1/5"
        # flag overrides the file
        code, out, _ = run_cli(
            capsys, "attack", "--config", str(cfg), "--k1-dist", "uniform",
            "--format", "json",
        )
        assert json.loads(out)["config"]["k1_spec"] == "uniform"

    def test_missing_p_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "attack", "--l", "1")
        assert code == EXIT_USAGE

    def test_human_output_names_formulas(self, capsys):
        code, out, _ = run_cli(capsys, "attack", "--p", "5", "--l", "1")
        assert code == EXIT_OK
        for token in ("uniform_eq2", "general_eq9", "simplified_eq10", "mu_comment"):
            assert token in out

    def test_probe_full_length_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "attack", "--p", "3", "--l", "2", "--k1-dist", "extremal:1/3",
            "--probe-full-length", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["config"]["probe_full_length"] is True
        assert payload["all_pass"] is True

    def test_fixed_degree_flag_changes_tag(self, capsys):
        base = ["--p", "5", "--l", "3", "--k1", "2", "--k2", "0", "--msg", "1"]
        _, out_default, _ = run_cli(capsys, "sign", *base)
        _, out_fixed, _ = run_cli(capsys, "sign", *base, "--fixed-degree")
        assert out_default != out_fixed


class TestSweep:
    def test_expand_families(self):
        specs = expand_families(
            ["uniform", "extremal", "point:0"], ["1/p", "2/p"]
        )
        assert specs == ["uniform", "extremal:1/p", "extremal:2/p", "point:0"]

    def parse(self, out):
        return list(csv.DictReader(io.StringIO(out)))

    def test_row_count_and_all_pass(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--primes", "3,5", "--lengths", "1,2",
            "--families", "extremal", "--delta-grid", "0,1/p,2/p",
        )
        assert code == EXIT_OK
        rows = self.parse(out)
        assert len(rows) == 2 * 2 * 3 * 3
        assert all(row["all_pass"] == "True" for row in rows)
        assert all(row["error"] == "" for row in rows)

    def test_zero_distance_rows_match_uniform_bound(self, capsys):
        _, out, _ = run_cli(
            capsys, "sweep", "--primes", "3,5", "--lengths", "1",
            "--families", "uniform",
        )
        for row in self.parse(out):
            assert row["delta1_exact"] == "0/1"
            assert row["bound_eq9_exact"] == row["bound_eq2_exact"]

    def test_deterministic_output(self, capsys):
        argv = ["sweep", "--primes", "3", "--lengths", "1",
                "--families", "uniform,extremal", "--delta-grid", "1/p"]
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert out1 == out2

    def test_columns_match_contract(self, capsys):
        _, out, _ = run_cli(
            capsys, "sweep", "--primes", "3", "--lengths", "1",
            "--families", "uniform",
        )
        header = out.splitlines()[0].split(",")
        assert header == SWEEP_COLUMNS

    def test_cell_errors_recorded_in_row(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--primes", "3,5", "--lengths", "1",
            "--families", "point:4",
        )
        assert code == EXIT_OK  # errors are not bound violations
        rows = self.parse(out)
        assert len(rows) == 2
        bad = [r for r in rows if r["p"] == "3"]
        good = [r for r in rows if r["p"] == "5"]
        assert bad[0]["error"] != "" and bad[0]["all_pass"] == ""
        assert good[0]["error"] == "" and good[0]["all_pass"] == "True"

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({
            "primes": [3], "lengths": [1], "families": ["uniform"],
        }))
        code, out, _ = run_cli(capsys, "sweep", "--config", str(cfg))
        assert code == EXIT_OK
        assert len(self.parse(out)) == 1
