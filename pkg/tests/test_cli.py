"""Command-line interface: subcommands, config handling, exit codes."""

import csv
import math

import numpy as np
import pytest

from cropguard.cli import main


def run_cli(*argv):
    return main(list(argv))


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestSimulate:
    def test_default_initial_state_and_grid(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert run_cli("simulate", "--tf", "1", "--dt", "0.1", "--out", str(out)) == 0
        header, rows = read_csv(out)
        assert header == ["t", "X", "S", "I", "A"]
        assert len(rows) == 11
        assert [float(v) for v in rows[0]] == [0.0, 0.2, 0.07, 0.05, 0.5]
        assert float(rows[-1][0]) == 1.0
        assert all(math.isfinite(float(v)) for row in rows for v in row)

    def test_initial_state_flags(self, tmp_path):
        out = tmp_path / "sim.csv"
        run_cli("simulate", "--tf", "0.5", "--dt", "0.1", "--X0", "0.9", "--out", str(out))
        _, rows = read_csv(out)
        assert float(rows[0][1]) == 0.9

    def test_stdout_output(self, capsys):
        assert run_cli("simulate", "--tf", "0.2", "--dt", "0.1", "--out", "-") == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("t,X,S,I,A")
        assert len(lines) == 4

    def test_blowup_exits_3(self, tmp_path, capsys):
        code = run_cli(
            "simulate", "--r", "8", "--tf", "100", "--dt", "2",
            "--out", str(tmp_path / "x.csv"),
        )
        assert code == 3
        assert "integration blow-up" in capsys.readouterr().err


class TestConfig:
    def test_file_flag_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = 0.06\nlambda = 0.1\n# comment line\n\n")
        run_cli("simulate", "--config", str(cfg), "--alpha", "0.07", "--dump-config")
        dumped = dict(
            line.split(" = ")
            for line in capsys.readouterr().out.strip().splitlines()
        )
        assert float(dumped["alpha"]) == 0.07  # flag beats file
        assert float(dumped["lambda"]) == 0.1  # file beats default
        assert float(dumped["r"]) == 0.1  # untouched default

    def test_dump_config_round_trips(self, tmp_path, capsys):
        run_cli("simulate", "--dump-config")
        first = capsys.readouterr().out
        cfg = tmp_path / "dumped.cfg"
        cfg.write_text(first)
        run_cli("simulate", "--config", str(cfg), "--dump-config")
        assert capsys.readouterr().out == first

    def test_dump_config_suppresses_the_run(self, tmp_path):
        out = tmp_path / "never.csv"
        assert run_cli("simulate", "--dump-config", "--out", str(out)) == 0
        assert not out.exists()

    def test_per_command_horizon_defaults(self, capsys):
        run_cli("simulate", "--dump-config")
        sim = capsys.readouterr().out
        assert "tf = 2000.0" in sim and "dt = 0.05" in sim
        run_cli("optimize", "--dump-config")
        opt = capsys.readouterr().out
        assert "tf = 100.0" in opt and "dt = 0.01" in opt

    def test_unknown_key_names_the_line(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = 0.06\nbogus = 1\n")
        assert run_cli("simulate", "--config", str(cfg)) == 2
        err = capsys.readouterr().err
        assert "configuration error" in err
        assert f"{cfg}:2" in err
        assert "bogus" in err

    def test_malformed_line_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha 0.06\n")
        assert run_cli("simulate", "--config", str(cfg)) == 2

    def test_bad_number_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = fast\n")
        assert run_cli("simulate", "--config", str(cfg)) == 2

    def test_invalid_parameter_value_exits_2(self, capsys):
        assert run_cli("simulate", "--phi", "1.5") == 2
        assert "configuration error" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, capsys):
        assert run_cli("simulate", "--config", "/no/such/file.cfg") == 2


class TestEquilibria:
    def test_default_table(self, tmp_path):
        out = tmp_path / "eq.csv"
        assert run_cli("equilibria", "--out", str(out)) == 0
        header, rows = read_csv(out)
        assert header == [
            "kind", "X", "S", "I", "A", "residual",
            "verdict", "max_real_eig", "R0", "reason",
        ]
        table = {row[0]: row for row in rows}
        assert list(table) == ["Axial", "PestFree", "SusceptibleFree", "Coexistence"]

        ax = table["Axial"]
        assert [float(ax[i]) for i in (1, 2, 3)] == [0.0, 0.0, 0.0]
        assert float(ax[4]) == pytest.approx(0.2)
        assert ax[6] == "Unstable"
        assert float(ax[7]) == pytest.approx(0.1)
        assert ax[8] == ""  # invasion number only reported on the pest-free row

        pf = table["PestFree"]
        assert float(pf[1]) == 1.0
        assert pf[6] == "Stable"
        assert float(pf[8]) == pytest.approx(7.0 / 12.0, abs=1e-9)

        for kind in ("SusceptibleFree", "Coexistence"):
            row = table[kind]
            assert row[6] == "Nonexistent"
            assert row[1] == "" and row[7] == ""
            assert row[9] != ""

    def test_consumption_override_adds_interior_row(self, tmp_path):
        out = tmp_path / "eq.csv"
        run_cli("equilibria", "--alpha", "0.06", "--out", str(out))
        _, rows = read_csv(out)
        interior = [r for r in rows if r[0] == "Coexistence" and r[6] != "Nonexistent"]
        assert len(interior) == 1
        assert float(interior[0][4]) == pytest.approx(0.52527274625, rel=1e-9)
        assert float(interior[0][5]) < 1e-10


class TestStability:
    def test_margin_columns(self, tmp_path):
        out = tmp_path / "st.csv"
        assert run_cli("stability", "--out", str(out)) == 0
        header, rows = read_csv(out)
        assert header == [
            "kind", "X", "S", "I", "A", "verdict", "max_real_eig",
            "pure_imaginary", "rh_stable", "C1", "C2", "C3", "C4", "H1", "H2",
        ]
        assert [r[0] for r in rows] == ["Axial", "PestFree"]
        ax, pf = rows
        assert ax[5] == "Unstable" and ax[8] == "false"
        assert pf[5] == "Stable" and pf[8] == "true"
        assert float(ax[9]) == pytest.approx(0.0421428571429, rel=1e-9)
        assert ax[7] == "false" and pf[7] == "false"
        assert all(float(pf[i]) > 0.0 for i in range(9, 15))


class TestBifurcate:
    def test_sweep_grid_and_columns(self, tmp_path):
        out = tmp_path / "bif.csv"
        code = run_cli(
            "bifurcate", "--parameter", "alpha",
            "--from", "0.06", "--to", "0.10", "--steps", "3",
            "--tf", "20", "--dt", "0.1", "--out", str(out),
        )
        assert code == 0
        header, rows = read_csv(out)
        assert header == [
            "value", "X_min", "X_max", "S_min", "S_max", "I_min", "I_max",
            "A_min", "A_max", "failed", "pest_free", "coexistence",
        ]
        assert [float(r[0]) for r in rows] == pytest.approx([0.06, 0.08, 0.10])
        for row in rows:
            assert row[9] == "false"
            assert row[10] in ("Stable", "Unstable", "Marginal")
            assert row[11] != ""
            for lo_i, hi_i in ((1, 2), (3, 4), (5, 6), (7, 8)):
                assert float(row[lo_i]) <= float(row[hi_i])

    def test_lambda_is_a_sweepable_name(self, tmp_path):
        out = tmp_path / "bif.csv"
        code = run_cli(
            "bifurcate", "--parameter", "lambda",
            "--from", "0.02", "--to", "0.03", "--steps", "2",
            "--tf", "10", "--dt", "0.1", "--out", str(out),
        )
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 2

    def test_failed_row_is_reported_not_fatal(self, tmp_path):
        out = tmp_path / "bif.csv"
        code = run_cli(
            "bifurcate", "--parameter", "r", "--from", "8", "--to", "8",
            "--steps", "1", "--tf", "100", "--dt", "2", "--out", str(out),
        )
        assert code == 0
        _, rows = read_csv(out)
        assert rows[0][9] == "true"
        assert rows[0][1] == "nan"


class TestOptimize:
    def test_solution_columns_and_certificates(self, tmp_path):
        out = tmp_path / "opt.csv"
        hist = tmp_path / "hist.csv"
        code = run_cli(
            "optimize", "--tf", "2", "--dt", "0.1",
            "--out", str(out), "--history-out", str(hist),
        )
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["t", "X", "S", "I", "A", "u1", "u2", "p1", "p2", "p3", "p4"]
        assert len(rows) == 21
        u = np.array([[float(r[5]), float(r[6])] for r in rows])
        assert u.min() >= 0.0 and u.max() <= 1.0
        assert [float(v) for v in rows[-1][7:]] == [0.0, 0.0, 0.0, 0.0]

        h_header, h_rows = read_csv(hist)
        assert h_header == ["iter", "J", "control_change"]
        assert len(h_rows) >= 1
        assert [int(r[0]) for r in h_rows] == list(range(1, len(h_rows) + 1))

    def test_freeze_flag_zeroes_the_column(self, tmp_path):
        out = tmp_path / "opt.csv"
        run_cli("optimize", "--tf", "2", "--dt", "0.1", "--freeze-u1", "--out", str(out))
        _, rows = read_csv(out)
        assert all(float(r[5]) == 0.0 for r in rows)

    def test_budget_exhaustion_exits_4_but_writes_output(self, tmp_path, capsys):
        out = tmp_path / "opt.csv"
        code = run_cli(
            "optimize", "--tf", "2", "--dt", "0.1",
            "--max-iterations", "2", "--out", str(out),
        )
        assert code == 4
        assert "2 iteration" in capsys.readouterr().err
        _, rows = read_csv(out)
        assert len(rows) == 21


class TestParser:
    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as info:
            run_cli("--help")
        assert info.value.code == 0
        assert "simulate" in capsys.readouterr().out

    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            run_cli("frobnicate")
        assert info.value.code == 2
