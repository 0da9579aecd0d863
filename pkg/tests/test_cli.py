import json
import subprocess
import sys

import pytest

from spectropy.cli import main
from tests.conftest import write_text


def run_cli(*argv):
    return main([str(a) for a in argv])


def read_csv_rows(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, ln.split(","))) for ln in lines[1:]]


@pytest.fixture
def small_csv(tmp_path):
    return write_text(
        tmp_path / "small.csv",
        "614.1,614.3\n-100,-120\n-110,-120\n-100,-120\n-120,-120\n",
    )


class TestDutyCycleCommand:
    def test_two_threshold_columns(self, small_csv, tmp_path, capsys):
        out = tmp_path / "dc.csv"
        assert run_cli("duty-cycle", small_csv, "--threshold", "-107", "--threshold", "-114", "--output", out) == 0
        header, rows = read_csv_rows(out)
        assert header == ["freq_mhz", "duty_cycle_-107", "duty_cycle_-114"]
        assert rows[0] == {"freq_mhz": "614.1", "duty_cycle_-107": "0.5", "duty_cycle_-114": "0.75"}
        assert (tmp_path / "dc.json").exists()

    def test_default_thresholds_are_both_classics(self, small_csv, tmp_path):
        out = tmp_path / "dc.csv"
        run_cli("duty-cycle", small_csv, "--output", out)
        header, _ = read_csv_rows(out)
        assert header == ["freq_mhz", "duty_cycle_-107", "duty_cycle_-114"]

    def test_empty_file_exit_2(self, tmp_path, capsys):
        empty = write_text(tmp_path / "empty.csv", "")
        code = run_cli("duty-cycle", empty, "--output", tmp_path / "x.csv")
        assert code == 2
        assert "EmptyTrace" in capsys.readouterr().err

    def test_quiet_band_is_all_zeros(self, tmp_path):
        path = write_text(tmp_path / "t.csv", "614.1\n-120\n-120\n-120\n")
        out = tmp_path / "dc.csv"
        run_cli("duty-cycle", path, "--threshold", "-114", "--output", out)
        _, rows = read_csv_rows(out)
        assert rows[0]["duty_cycle_-114"] == "0"

    def test_before_average_flag(self, tmp_path):
        # one loud sample then quiet: averaging smears it below threshold
        path = write_text(tmp_path / "t.csv", "614.1\n-90\n-140\n-140\n-140\n")
        raw = tmp_path / "raw.csv"
        avg = tmp_path / "avg.csv"
        run_cli("duty-cycle", path, "--threshold", "-107", "--block", "4", "--before-average", "--output", raw)
        run_cli("duty-cycle", path, "--threshold", "-107", "--block", "4", "--output", avg)
        assert read_csv_rows(raw)[1][0]["duty_cycle_-107"] == "0.25"
        assert read_csv_rows(avg)[1][0]["duty_cycle_-107"] == "1"


class TestAnalyzeCommand:
    def test_periodic_input_highly_predictable(self, tmp_path):
        trace = tmp_path / "tr.csv"
        run_cli("synth", "--model", "periodic", "--pattern", "0,1,2,3,4,5,6,7",
                "--repeats", "420", "--bands", "3", "--output", trace)
        out = tmp_path / "an.csv"
        assert run_cli("analyze", trace, "--q", "8", "--output", out) == 0
        header, rows = read_csv_rows(out)
        assert header == ["freq_mhz", "e_rand", "e_unc", "e_actual", "pi_max", "clamped", "n"]
        assert len(rows) == 3
        for row in rows:
            assert row["e_rand"] == "3"
            assert float(row["pi_max"]) > 0.99

    def test_rows_sorted_by_frequency(self, tmp_path):
        path = write_text(tmp_path / "t.csv", "614.5,614.1\n-100,-90\n-101,-91\n-102,-92\n")
        out = tmp_path / "an.csv"
        run_cli("analyze", path, "--output", out)
        _, rows = read_csv_rows(out)
        assert [r["freq_mhz"] for r in rows] == ["614.1", "614.5"]

    def test_aggressive_block_exit_3(self, tmp_path, capsys):
        path = write_text(tmp_path / "t.csv", "614.1\n" + "\n".join(["-100"] * 8) + "\n")
        code = run_cli("analyze", path, "--block", "8", "--output", tmp_path / "x.csv")
        assert code == 3
        assert "SequenceTooShort" in capsys.readouterr().err

    def test_block_larger_than_trace_exit_3(self, tmp_path, capsys):
        path = write_text(tmp_path / "t.csv", "614.1\n-100\n-101\n")
        assert run_cli("analyze", path, "--block", "99", "--output", tmp_path / "x.csv") == 3
        assert "BlockLargerThanTrace" in capsys.readouterr().err

    def test_rerun_is_byte_identical(self, tmp_path):
        trace = tmp_path / "tr.csv"
        run_cli("synth", "--model", "gaussian", "--n", "400", "--bands", "4", "--seed", "5", "--output", trace)
        out1, out2 = tmp_path / "a1.csv", tmp_path / "a2.csv"
        run_cli("analyze", trace, "--q", "8", "--output", out1)
        run_cli("analyze", trace, "--q", "8", "--output", out2)
        assert out1.read_bytes() == out2.read_bytes()

    def test_from_manifest_reproduces(self, tmp_path):
        trace = tmp_path / "tr.csv"
        run_cli("synth", "--model", "gaussian", "--n", "300", "--bands", "3", "--seed", "2", "--output", trace)
        out1, out2 = tmp_path / "a1.csv", tmp_path / "a2.csv"
        run_cli("analyze", trace, "--q", "6", "--strategy", "equal-frequency", "--block", "2", "--output", out1)
        assert run_cli("analyze", "--from-manifest", tmp_path / "a1.json", "--output", out2) == 0
        assert out1.read_bytes() == out2.read_bytes()
        manifest = json.loads((tmp_path / "a2.json").read_text())["manifest"]
        assert manifest["q"] == 6 and manifest["strategy"] == "equal-frequency"

    def test_manifest_embedded_in_report(self, small_csv, tmp_path):
        out = tmp_path / "an.csv"
        run_cli("analyze", small_csv, "--output", out)
        doc = json.loads((tmp_path / "an.json").read_text())
        assert doc["schema"] == "spectropy-report/1"
        assert doc["manifest"]["command"] == "analyze"
        assert doc["manifest"]["inputs"] == [str(small_csv)]

    def test_input_and_manifest_conflict(self, small_csv, tmp_path, capsys):
        assert run_cli("analyze", small_csv, "--from-manifest", "x.json",
                       "--output", tmp_path / "o.csv") == 3

    def test_unknown_flag_exit_3(self, small_csv, tmp_path, capsys):
        assert run_cli("analyze", small_csv, "--nope", "--output", tmp_path / "o.csv") == 3

    def test_failed_run_leaves_no_output(self, tmp_path, capsys):
        missing = tmp_path / "missing.csv"
        out = tmp_path / "an.csv"
        assert run_cli("analyze", missing, "--output", out) == 2
        assert not out.exists() and not (tmp_path / "an.json").exists()


class TestCdfCommand:
    def fake_report(self, tmp_path, name, entries):
        bands = [
            {
                "freq_mhz": f,
                "label": f"{f} MHz",
                "service": svc,
                "pi_max": pi,
                "entropy_used": 1.0,
                "clamped": False,
                "iterations": 30,
                "q": 8,
            }
            for f, svc, pi in entries
        ]
        doc = {"schema": "spectropy-report/1", "manifest": {"command": "analyze"}, "bands": bands}
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return path

    def test_two_band_service(self, tmp_path):
        rep = self.fake_report(tmp_path, "an.json", [(614.1, "TV", 0.8), (614.3, "TV", 0.9)])
        out = tmp_path / "cdf.csv"
        assert run_cli("cdf", rep, "--output", out) == 0
        header, rows = read_csv_rows(out)
        assert header == ["service", "pi_max", "cum_fraction"]
        assert [(r["pi_max"], r["cum_fraction"]) for r in rows] == [("0.8", "0.5"), ("0.9", "1")]

    def test_unmapped_bands_grouped_unassigned(self, tmp_path):
        rep = self.fake_report(tmp_path, "an.json", [(614.1, None, 0.7)])
        out = tmp_path / "cdf.csv"
        run_cli("cdf", rep, "--output", out)
        _, rows = read_csv_rows(out)
        assert rows[0]["service"] == "unassigned"

    def test_service_map_overrides(self, tmp_path):
        rep = self.fake_report(tmp_path, "an.json", [(614.1, None, 0.7), (2450.0, None, 0.9)])
        smap = write_text(tmp_path / "s.json", '{"TV": [614.0, 698.0], "ISM": [2400.1, 2483.3]}')
        out = tmp_path / "cdf.csv"
        run_cli("cdf", rep, "--service-map", smap, "--output", out)
        _, rows = read_csv_rows(out)
        assert sorted({r["service"] for r in rows}) == ["ISM", "TV"]

    def test_cdf_minimum_matches_band_minimum(self, tmp_path, rng):
        pis = rng.uniform(0.2, 1.0, 50)
        entries = [(614.1 + 0.2 * i, "TV", float(p)) for i, p in enumerate(pis)]
        rep = self.fake_report(tmp_path, "an.json", entries)
        out = tmp_path / "cdf.csv"
        run_cli("cdf", rep, "--output", out)
        _, rows = read_csv_rows(out)
        assert float(rows[0]["pi_max"]) == pytest.approx(float(pis.min()), abs=1e-9)

    def test_malformed_report_exit_2(self, tmp_path, capsys):
        bad = write_text(tmp_path / "bad.json", "{not json")
        assert run_cli("cdf", bad, "--output", tmp_path / "o.csv") == 2

    def test_services_flow_from_analyze_reports(self, tmp_path):
        # services attached at analyze time survive into the cdf grouping
        trace = write_text(tmp_path / "t.csv", "614.1,2450.0\n-100,-90\n-101,-91\n-102,-92\n")
        smap = write_text(tmp_path / "s.json", '{"TV": [614.0, 698.0], "ISM": [2400.1, 2483.3]}')
        run_cli("analyze", trace, "--service-map", smap, "--output", tmp_path / "an.csv")
        out = tmp_path / "cdf.csv"
        run_cli("cdf", tmp_path / "an.json", "--output", out)
        _, rows = read_csv_rows(out)
        assert sorted({r["service"] for r in rows}) == ["ISM", "TV"]


class TestSynthCommand:
    def test_gaussian_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("synth", "--model", "gaussian", "--n", "3360", "--seed", "7", "--output", a)
        run_cli("synth", "--model", "gaussian", "--n", "3360", "--seed", "7", "--output", b)
        assert a.read_bytes() == b.read_bytes()

    def test_bad_markov_spec_exit_3(self, tmp_path, capsys):
        spec = write_text(
            tmp_path / "chain.json",
            '{"matrix": [[0.9, 0.2], [0.1, 0.9]], "initial": [0.5, 0.5], "seed": 1}',
        )
        code = run_cli("synth", "--model", "markov", "--spec", spec, "--n", "100",
                       "--output", tmp_path / "o.csv")
        assert code == 3
        assert "InvalidStochasticMatrix" in capsys.readouterr().err

    def test_periodic_row_arithmetic(self, tmp_path):
        out = tmp_path / "p.csv"
        run_cli("synth", "--model", "periodic", "--pattern", "0,1,2,3,4,5,6,7",
                "--repeats", "420", "--output", out)
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 3360

    def test_markov_trace_generated(self, tmp_path):
        spec = write_text(
            tmp_path / "chain.json",
            '{"matrix": [[0.9, 0.1], [0.1, 0.9]], "initial": [0.5, 0.5], "seed": 1}',
        )
        out = tmp_path / "m.csv"
        assert run_cli("synth", "--model", "markov", "--spec", spec, "--n", "500",
                       "--bands", "2", "--output", out) == 0
        header, rows = read_csv_rows(out)
        assert len(header) == 2 and len(rows) == 500

    def test_iid_levels_within_alphabet(self, tmp_path):
        out = tmp_path / "i.csv"
        run_cli("synth", "--model", "iid", "--q", "4", "--n", "200", "--output", out)
        _, rows = read_csv_rows(out)
        assert {int(r["614.1"]) for r in rows} <= {0, 1, 2, 3}


class TestModuleInvocation:
    def test_runs_as_module_with_exit_codes(self, tmp_path):
        empty = write_text(tmp_path / "empty.csv", "")
        proc = subprocess.run(
            [sys.executable, "-m", "spectropy", "duty-cycle", str(empty),
             "--output", str(tmp_path / "o.csv")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert "EmptyTrace" in proc.stderr

    def test_version_flag(self):
        proc = subprocess.run(
            [sys.executable, "-m", "spectropy", "--version"], capture_output=True, text=True
        )
        assert proc.returncode == 0
        assert "spectropy" in proc.stdout
