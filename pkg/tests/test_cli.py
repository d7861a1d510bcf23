"""End-to-end command-line checks: exit codes, files, determinism."""

import json

import pytest

from xyzbethe.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from xyzbethe.expressions import parse_complex

N2 = ["--n", "2", "--tau", "0.6i", "--eta", "pi/10", "--starts", "40"]


class TestParsing:
    @pytest.mark.parametrize("text,value", [
        ("0.6i", 0.6j),
        ("pi/10", 0.3141592653589793),
        ("1/e + i*pi/10", 1 / 2.718281828459045 + 0.3141592653589793j),
        ("0.4+1.8i", 0.4 + 1.8j),
        ("-2^2", -4.0),
        ("2(3+i)", 6 + 2j),
        ("i*pi^2/10", 1j * 3.141592653589793 ** 2 / 10),
    ])
    def test_expressions(self, text, value):
        assert abs(parse_complex(text) - value) < 1e-12

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_complex("pi pie")


class TestSolveAndVerify:
    def test_round_trip(self, tmp_path):
        base = str(tmp_path / "sol")
        assert main(["solve-xyz", *N2, "--out", base]) == EXIT_OK
        assert (tmp_path / "sol.json").exists()
        assert (tmp_path / "sol.csv").exists()
        assert main(["verify", *N2, "--solutions", base + ".json"]) == EXIT_OK

    def test_verify_flags_missing_row(self, tmp_path):
        base = str(tmp_path / "sol")
        main(["solve-xyz", *N2, "--out", base])
        data = json.loads((tmp_path / "sol.json").read_text())
        data["solutions"] = data["solutions"][1:]
        (tmp_path / "sol.json").write_text(json.dumps(data))
        assert main(["verify", *N2,
                     "--solutions", base + ".json"]) == EXIT_VERIFY

    def test_require_complete_passes(self):
        assert main(["solve-xyz", *N2, "--require-complete"]) == EXIT_OK

    def test_missing_eta_is_usage_error(self):
        assert main(["solve-xyz", "--n", "2", "--tau", "0.6i"]) == EXIT_USAGE

    def test_unknown_flag_is_usage_error(self):
        assert main(["solve-xyz", *N2, "--frobnicate"]) == EXIT_USAGE

    def test_determinism(self, tmp_path):
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        main(["solve-xyz", *N2, "--seed", "11", "--out", a])
        main(["solve-xyz", *N2, "--seed", "11", "--out", b])
        assert ((tmp_path / "a.json").read_bytes()
                == (tmp_path / "b.json").read_bytes())


class TestConfigFile:
    def test_file_values_and_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n = 2\ntau = 0.6i\neta = pi/10\nstarts = 40\nseed = 3\n")
        assert main(["solve-xyz", "--config", str(cfg)]) == EXIT_OK
        captured = capsys.readouterr()
        assert "found 4 solutions" in captured.err
        # flag beats the file: an absurd eta must now fail validation
        assert main(["solve-xyz", "--config", str(cfg),
                     "--eta", "0.6i"]) == EXIT_USAGE

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("volume = 11\n")
        assert main(["solve-xyz", "--config", str(cfg), *N2]) == EXIT_USAGE


class TestXXZCommand:
    def test_solve_and_m_range(self, tmp_path, capsys):
        args = ["solve-xxz", "--n", "4", "--gamma", "i*pi^2/10",
                "--starts", "60"]
        assert main([*args, "--require-complete"]) == EXIT_OK
        captured = capsys.readouterr()
        assert "found 16 solutions" in captured.err
        assert main([*args, "--m-range", "1..2"]) == EXIT_OK
        captured = capsys.readouterr()
        assert "found 10 solutions" in captured.err


class TestDiagAndTables:
    def test_diag_csv(self, capsys):
        assert main(["diag", *N2, "--format", "csv"]) == EXIT_OK
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == 5  # header + 4 states

    def test_export_table_alignment(self, capsys):
        import re

        assert main(["export-table", *N2]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 5
        counts = {len(re.split(r"\s{2,}", line)) for line in lines}
        assert len(counts) == 1


class TestLimitScan:
    def test_outputs_and_figure(self, tmp_path):
        base = str(tmp_path / "scan")
        code = main(["limit-scan", *N2, "--out", base,
                     "--target-im-tau", "6.0"])
        assert code == EXIT_OK
        for ext in (".json", ".csv", ".png"):
            assert (tmp_path / ("scan" + ext)).exists()
        data = json.loads((tmp_path / "scan.json").read_text())
        assert all(e["xxz_index"] is not None for e in data["entries"])
