"""CLI surface: exit codes, output formats, determinism."""

import os

import pytest

from plog.cli import main
from plog import scenarios


@pytest.fixture()
def kb_dir(tmp_path):
    for name, text in scenarios.KB_FILES.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_certain_ravens_feasible(self, kb_dir, capsys):
        code, out, _ = run(capsys, "check", str(kb_dir / "ravens.plog"))
        assert code == 0
        assert "LP: feasible" in out

    def test_subadditivity_violation_reported(self, tmp_path, capsys):
        kb = tmp_path / "bad.plog"
        kb.write_text("prop p\nprop q\nbelieve p = 0.3\nbelieve p & q = 0.4\n")
        code, out, _ = run(capsys, "check", str(kb))
        assert code == 1
        assert "SUBADD" in out
        assert "LP-INFEASIBLE" in out

    def test_hierarchical_nest_reported_with_depth(self, kb_dir, capsys):
        code, out, _ = run(capsys, "check", str(kb_dir / "nested.plog"))
        assert code == 0
        assert "HIER: yes, depth 3" in out
        assert "LP: feasible" in out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        kb = tmp_path / "broken.plog"
        kb.write_text("prop p\nbelieve p = huh\n")
        code, _, err = run(capsys, "check", str(kb))
        assert code == 2
        assert "error" in err

    def test_missing_file_exit_code(self, capsys):
        code, _, err = run(capsys, "check", "no-such-file.plog")
        assert code == 2

    def test_world_cap_exit_code(self, kb_dir, capsys, monkeypatch):
        monkeypatch.setenv("PLOG_WORLD_CAP", "3")
        code, _, err = run(capsys, "check", str(kb_dir / "ravens.plog"))
        assert code == 3
        assert "cap" in err


class TestQuery:
    def test_true_is_one(self, kb_dir, capsys):
        code, out, _ = run(capsys, "query", str(kb_dir / "ravens.plog"), "true")
        assert code == 0
        assert out.strip() == "1.000000000000"

    def test_certain_conjunction(self, kb_dir, capsys):
        code, out, _ = run(capsys, "query", str(kb_dir / "ravens.plog"), "B(r1) & B(r2)")
        assert code == 0
        assert out.strip() == "1.000000000000"

    def test_monty_hall_switch(self, kb_dir, capsys):
        code, out, _ = run(
            capsys, "query", str(kb_dir / "monty-hall.plog"),
            "prize(d2)", "--given", "picked(d1) & opened(d3)")
        assert code == 0
        assert out.strip() == "0.666666666667"

    def test_zero_probability_conditioning(self, kb_dir, capsys):
        code, _, err = run(
            capsys, "query", str(kb_dir / "ravens.plog"), "B(r1)", "--given", "~B(r1)")
        assert code == 4
        assert "zero" in err

    def test_infeasible_kb(self, tmp_path, capsys):
        kb = tmp_path / "bad.plog"
        kb.write_text("prop p\nprop q\nbelieve p = 0.3\nbelieve p & q = 0.4\n")
        code, _, err = run(capsys, "query", str(kb), "p")
        assert code == 1

    def test_determinism(self, kb_dir, capsys):
        _, first, _ = run(capsys, "query", str(kb_dir / "monty-hall.plog"), "phi9")
        _, second, _ = run(capsys, "query", str(kb_dir / "monty-hall.plog"), "phi9")
        assert first == second == "0.333333333333\n"


class TestExtend:
    def test_report_and_belief_round_trip(self, kb_dir, tmp_path, capsys):
        out_file = tmp_path / "belief.txt"
        code, out, _ = run(capsys, "extend", str(kb_dir / "nested.plog"),
                           "--report", "--out", str(out_file))
        assert code == 0
        assert "projection report" in out
        assert "duals" in out
        text = out_file.read_text()
        assert text.startswith("# plog belief v1")
        # feed the belief back as a prior: targets already hold, so the
        # projection is a fixed point
        code, out, _ = run(capsys, "query", str(kb_dir / "nested.plog"),
                           "p & q", "--prior", str(out_file))
        assert code == 0
        assert out.strip() == "0.300000000000"

    def test_belief_to_stdout(self, kb_dir, capsys):
        code, out, _ = run(capsys, "extend", str(kb_dir / "ravens.plog"))
        assert code == 0
        assert out.startswith("# plog belief v1")
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert len(lines) == 32


class TestConfirm:
    def test_naive_predictive_flat(self, capsys):
        code, out, _ = run(capsys, "confirm", "--mixture", "iid:1.0@0.5", "--n", "6")
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert all(row.split(",")[3] == "0.5" for row in rows)

    def test_mixture_posterior_converges(self, capsys):
        code, out, _ = run(capsys, "confirm", "--mixture",
                           scenarios.CONFIRMING_MIXTURE, "--n", "20")
        assert code == 0
        last = out.strip().splitlines()[-1].split(",")
        assert float(last[2]) >= 0.999999

    def test_certain_prior_all_ones(self, capsys):
        code, out, _ = run(capsys, "confirm", "--mixture", "alltrue:1.0", "--n", "4")
        rows = [r.split(",") for r in out.strip().splitlines()[1:]]
        assert all(float(x) == 1.0 for row in rows for x in row[1:])

    def test_malformed_spec(self, capsys):
        code, _, err = run(capsys, "confirm", "--mixture", "what:1.0", "--n", "4")
        assert code == 2

    def test_csv_and_plot_files(self, tmp_path, capsys):
        csv_path = tmp_path / "curve.csv"
        png_path = tmp_path / "curve.png"
        code, out, _ = run(capsys, "confirm", "--mixture", scenarios.CONFIRMING_MIXTURE,
                           "--n", "10", "--out", str(csv_path), "--plot", str(png_path))
        assert code == 0
        assert csv_path.exists() and png_path.exists()
        assert png_path.stat().st_size > 1000


class TestExample:
    def test_monty_hall_narrative(self, capsys):
        code, out, _ = run(capsys, "example", "monty-hall")
        assert code == 0
        assert "0.666666666667" in out
        assert "0.333333333333" in out
        assert "switching" in out

    def test_ravens_curves(self, capsys):
        code, out, _ = run(capsys, "example", "ravens")
        assert code == 0
        assert "1.000000000000" in out

    def test_naive_ravens_flat_half(self, capsys):
        code, out, _ = run(capsys, "example", "naive-ravens")
        assert code == 0
        assert "0.500000000000" in out

    def test_unknown_name(self, capsys):
        code, _, err = run(capsys, "example", "unknown")
        assert code == 2

    def test_outdir_writes_csv_and_figure(self, tmp_path, capsys):
        code, out, _ = run(capsys, "example", "ravens", "--outdir", str(tmp_path))
        assert code == 0
        assert (tmp_path / "ravens.csv").exists()
        assert (tmp_path / "ravens.png").exists()
