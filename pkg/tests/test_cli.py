import json
import math

import pytest

from cvdiscord.cli import main
from cvdiscord.homodyne import RECORD_COLUMNS

TMSV_STATE_SNL = "2,2,1.7320508075688772,1.7320508075688772"
H_ONE = 1.5 * math.log2(1.5) + 0.5

RECORDS_CSV = """rf_hz,var_xa,var_ya,var_xb,var_yb,var_xminus,var_yplus,snl_ref,n_samples
300000,2.0,2.0,2.0,2.0,1.2,1.2,1,100000
700000,2.0,2.0,2.0,2.0,0.3,0.3,1,100000
1500000,2.0,2.0,2.0,2.0,0.9,0.9,1,100000
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestReport:
    def test_vacuum_snl(self, capsys):
        code, out, err = run(capsys, "report", "--state", "1,1,0,0", "--units", "snl")
        assert code == 0
        payload = json.loads(out)
        assert payload["discord_ab"] == 0.0
        assert payload["flags"]["classical"] is True
        assert payload["inseparability"] == 2.0

    def test_pure_tmsv_snl(self, capsys):
        code, out, _ = run(capsys, "report", "--state", TMSV_STATE_SNL)
        payload = json.loads(out)
        assert code == 0
        assert payload["discord_ab"] == pytest.approx(H_ONE, abs=1e-6)
        assert payload["flags"]["entangled_sufficient"] is True
        assert payload["e_min_branch"] == "first"

    def test_half_units(self, capsys):
        code, out, _ = run(
            capsys, "report", "--state", "0.5,0.5,0,0", "--units", "half"
        )
        assert code == 0
        assert json.loads(out)["discord_ab"] == 0.0

    def test_record_input(self, capsys):
        joint = 2.0 - math.sqrt(3.0)
        record = f"0,2,2,2,2,{joint},{joint},1,1000000"
        code, out, _ = run(capsys, "report", "--record", record)
        assert code == 0
        assert json.loads(out)["discord_ab"] == pytest.approx(H_ONE, abs=1e-4)

    def test_unphysical_exits_2(self, capsys):
        code, _, err = run(capsys, "report", "--state", "2,2,1.9,1.9")
        assert code == 2
        assert "unphysical" in err
        assert "d_minus" in err

    def test_parse_error_names_field(self, capsys):
        code, _, err = run(capsys, "report", "--state", "2,2,x,1.7")
        assert code == 1
        assert "c1" in err

    def test_wrong_arity(self, capsys):
        code, _, err = run(capsys, "report", "--state", "1,2,3")
        assert code == 1
        assert "4 comma-separated" in err

    def test_missing_input_is_usage_error(self, capsys):
        code, _, err = run(capsys, "report")
        assert code == 1

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run(
            capsys, "report", "--state", "1,1,0,0", "--output", str(path)
        )
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["discord_ab"] == 0.0


class TestSweepLoss:
    def test_vacuum_zero_column(self, capsys):
        code, out, _ = run(
            capsys, "sweep-loss", "--state", "1,1,0,0", "--etas", "0:1:5"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("eta_or_rf,discord_ab")
        assert len(lines) == 6
        assert all(line.split(",")[1] == "0" for line in lines[1:])

    def test_monotone_discord_column(self, capsys):
        code, out, _ = run(
            capsys, "sweep-loss", "--state", TMSV_STATE_SNL, "--etas", "0:1:21"
        )
        assert code == 0
        values = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
        assert len(values) == 21
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_json_format(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep-loss", "--state", "1,1,0,0", "--etas", "0,0.5,1",
            "--format", "json",
        )
        assert code == 0
        rows = json.loads(out)
        assert [row["eta_or_rf"] for row in rows] == [0.0, 0.5, 1.0]

    def test_decreasing_grid_rejected(self, capsys):
        code, _, err = run(
            capsys, "sweep-loss", "--state", "1,1,0,0", "--etas", "1,0.5"
        )
        assert code == 1
        assert "increasing" in err

    def test_eta_outside_range_rejected(self, capsys):
        code, _, err = run(
            capsys, "sweep-loss", "--state", "1,1,0,0", "--etas", "0,0.5,1.5"
        )
        assert code == 1


class TestSweepSpectrum:
    def test_valid_file(self, capsys, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text(RECORDS_CSV)
        code, out, err = run(capsys, "sweep-spectrum", "--input", str(path))
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4
        discords = [float(line.split(",")[1]) for line in lines[1:]]
        assert discords[1] > discords[0]  # stronger squeezing, more discord

    def test_missing_header(self, capsys, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text("1,2,3,4,5,6,7,8,9\n")
        code, _, err = run(capsys, "sweep-spectrum", "--input", str(path))
        assert code == 1
        assert "header" in err

    def test_empty_file(self, capsys, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text("")
        code, _, err = run(capsys, "sweep-spectrum", "--input", str(path))
        assert code == 1

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "sweep-spectrum", "--input", str(tmp_path / "nope.csv")
        )
        assert code == 1

    def test_bad_row_warns_and_skips(self, capsys, tmp_path):
        text = RECORDS_CSV + "2000000,2.0,1.5,2.0,2.0,1.0,1.0,1,100000\n"
        path = tmp_path / "records.csv"
        path.write_text(text)
        code, out, err = run(capsys, "sweep-spectrum", "--input", str(path))
        assert code == 0
        assert "warning" in err and "2000000" in err
        assert len(out.strip().splitlines()) == 4


class TestSubchannels:
    def test_flip_at_high_overlap(self, capsys):
        code, out, _ = run(
            capsys,
            "subchannels", "--state", TMSV_STATE_SNL, "--overlap", "0.9",
        )
        assert code == 0
        payload = json.loads(out)
        verdicts = {v["selection"]: v["classification"] for v in payload["verdicts"]}
        assert verdicts == {"matched": "subadditive", "mismatched": "superadditive"}
        assert set(payload["pairs"]) == {"I-III", "I-IV", "II-III", "II-IV"}

    def test_bad_overlap(self, capsys):
        code, _, err = run(
            capsys, "subchannels", "--state", "1,1,0,0", "--overlap", "1.5"
        )
        assert code == 1


class TestSimulate:
    def test_writes_three_files(self, capsys, tmp_path):
        prefix = str(tmp_path / "sim")
        code, out, _ = run(
            capsys,
            "simulate", "--state", TMSV_STATE_SNL, "--samples", "10000",
            "--seed", "7", "--output", prefix,
        )
        assert code == 0
        sum_lines = (tmp_path / "sim.sum.csv").read_text().splitlines()
        assert sum_lines[0] == "phase_rad,variance_snl"
        assert len(sum_lines) == 34  # header + default 33 phases
        assert (tmp_path / "sim.difference.csv").exists()
        payload = json.loads((tmp_path / "sim.record.json").read_text())
        assert payload["seed"] == 7
        assert payload["record"]["n_samples"] == 10000
        assert payload["extracted_state"]["half"]["n"] == pytest.approx(1.0, abs=0.05)

    def test_unphysical_state_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "simulate", "--state", "2,2,1.9,1.9", "--samples", "10000",
            "--output", str(tmp_path / "sim"),
        )
        assert code == 2

    def test_too_few_phases_rejected(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "simulate", "--state", "1,1,0,0", "--samples", "10000",
            "--phases", "8", "--output", str(tmp_path / "sim"),
        )
        assert code == 1

    def test_env_seed_override(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("DISCORD_SEED", "123")
        prefix = str(tmp_path / "sim")
        code, _, _ = run(
            capsys,
            "simulate", "--state", "1,1,0,0", "--samples", "10000",
            "--seed", "7", "--output", prefix,
        )
        assert code == 0
        assert json.loads((tmp_path / "sim.record.json").read_text())["seed"] == 123


class TestOracleCheck:
    def test_passes_and_reports_branches(self, capsys):
        code, out, _ = run(capsys, "oracle-check", "--n-states", "25", "--seed", "3")
        assert code == 0
        assert "result: PASS" in out
        first = int(out.split("branch_first: ")[1].split("\n")[0])
        second = int(out.split("branch_second: ")[1].split("\n")[0])
        assert first + second == 25

    def test_deterministic_output(self, capsys):
        _, first_out, _ = run(capsys, "oracle-check", "--n-states", "10", "--seed", "5")
        _, second_out, _ = run(capsys, "oracle-check", "--n-states", "10", "--seed", "5")
        assert first_out == second_out

    def test_seed_changes_samples_not_verdict(self, capsys):
        code_a, out_a, _ = run(capsys, "oracle-check", "--n-states", "15", "--seed", "1")
        code_b, out_b, _ = run(capsys, "oracle-check", "--n-states", "15", "--seed", "2")
        assert code_a == code_b == 0
        assert out_a != out_b

    def test_rejects_zero_states(self, capsys):
        code, _, err = run(capsys, "oracle-check", "--n-states", "0")
        assert code == 1
