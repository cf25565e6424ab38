"""Tests for the simplexgrad command line."""

import csv
import json

import pytest

from simplexgrad.cli import EXIT_GOLDEN, EXIT_INFEASIBLE, EXIT_OK, EXIT_PARSE, EXIT_UNPOISED, main


@pytest.fixture
def example_set(tmp_path):
    path = tmp_path / "example1.csv"
    path.write_text("0.5,0\n0,1\n1,0\n")
    return path


def _write_config(tmp_path, **overrides):
    data = {
        "variant": "1b",
        "L": 2.0,
        "delta": 0.01,
        "noise_model": "none",
        "u0": [1.0, 1.0],
        "max_iters": 2,
        "multistart_count": 2,
        "objective": "sphere",
    }
    data.update(overrides)
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data))
    return path


class TestBoundsCommand:
    """Tests for simplexgrad bounds."""

    def test_json(self, example_set, capsys):
        """The report reproduces the published bounds at u_0."""
        code = main(["bounds", "--input", str(example_set), "--lipschitz", "5.3", "--format", "json"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["T_d"] == pytest.approx(10.72, abs=0.01)
        assert report["T_c"] == pytest.approx(7.73, abs=0.01)
        assert report["T_r"] == pytest.approx(4.19, abs=0.01)

    def test_reference_flag(self, example_set, capsys):
        """--ref moves the reference point."""
        main(["bounds", "--input", str(example_set), "--lipschitz", "5.3", "--ref", "1", "--format", "json"])
        report = json.loads(capsys.readouterr().out)
        assert report["ref_index"] == 1
        assert report["T_d"] == pytest.approx(26.7, abs=0.01)

    def test_ffd_file(self, tmp_path, capsys):
        """On an FFD set the three truncation bounds agree."""
        path = tmp_path / "ffd.csv"
        path.write_text("0,0\n0.1,0\n0,0.1\n")
        main(["bounds", "--input", str(path), "--lipschitz", "2", "--delta", "0.01", "--format", "json"])
        report = json.loads(capsys.readouterr().out)
        for key in ("T_d", "T_c", "T_r"):
            assert report[key] == pytest.approx(0.1414, abs=1e-4)
        assert report["N_c"] == pytest.approx(report["N_l"])

    def test_table_and_output(self, example_set, tmp_path):
        """--out writes the report into a directory, named by format."""
        out = tmp_path / "reports"
        code = main(["bounds", "--input", str(example_set), "--lipschitz", "5.3", "--out", str(out)])
        assert code == EXIT_OK
        assert (out / "bounds.txt").read_text().splitlines()[0].startswith("ref_index")
        main(["bounds", "--input", str(example_set), "--lipschitz", "5.3", "--format", "json", "--out", str(out)])
        assert json.loads((out / "bounds.json").read_text())["ref_index"] == 0

    def test_csv(self, example_set, capsys):
        """CSV output is one header row and one value row."""
        main(["bounds", "--input", str(example_set), "--lipschitz", "5.3", "--format", "csv"])
        rows = list(csv.reader(capsys.readouterr().out.splitlines()))
        assert len(rows) == 2
        assert "T_s" in rows[0]

    def test_collinear(self, tmp_path, capsys):
        """A collinear set exits with the unpoised code."""
        path = tmp_path / "line.csv"
        path.write_text("0,0\n1,1\n2,2\n")
        code = main(["bounds", "--input", str(path), "--lipschitz", "1"])
        assert code == EXIT_UNPOISED
        assert "singular_values" in capsys.readouterr().err

    def test_unparseable(self, tmp_path, capsys):
        """A malformed file exits with the parse code."""
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n")
        assert main(["bounds", "--input", str(path), "--lipschitz", "1"]) == EXIT_PARSE
        assert capsys.readouterr().err.startswith("Error:")

    def test_directory_input(self, tmp_path, capsys):
        """A directory given as input exits with the parse code, not a traceback."""
        assert main(["bounds", "--input", str(tmp_path), "--lipschitz", "1"]) == EXIT_PARSE
        assert capsys.readouterr().err.startswith("Error:")

    def test_unwritable_output(self, example_set, tmp_path, capsys):
        """An --out path that is a file exits with the parse code."""
        blocker = tmp_path / "taken"
        blocker.write_text("")
        assert main(["bounds", "--input", str(example_set), "--lipschitz", "1", "--out", str(blocker)]) == EXIT_PARSE
        assert capsys.readouterr().err.startswith("Error:")


class TestReproCommand:
    """Tests for simplexgrad repro."""

    def test_table1(self, tmp_path, capsys):
        """table1 passes and writes its CSV files."""
        code = main(["repro", "table1", "--out", str(tmp_path)])
        assert code == EXIT_OK
        assert "12/12 cells passed" in capsys.readouterr().out
        assert (tmp_path / "table1.csv").exists()
        assert (tmp_path / "table1_golden.csv").exists()

    def test_json(self, capsys):
        """JSON summaries list every cell."""
        assert main(["repro", "table3", "--format", "json"]) == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert summary["passed"] is True
        assert len(summary["cells"]) == 10

    def test_unknown(self):
        """Unknown experiments exit with the parse code."""
        assert main(["repro", "table9"]) == EXIT_PARSE

    def test_runs_flag_scope(self):
        """--runs only applies to case studies."""
        assert main(["repro", "table1", "--runs", "3"]) == EXIT_PARSE

    def test_golden_mismatch(self, monkeypatch, capsys):
        """A failing golden cell exits with the mismatch code."""
        monkeypatch.setattr("simplexgrad.repro.TABLE3", (2, 3, 7))
        assert main(["repro", "table3"]) == EXIT_GOLDEN
        captured = capsys.readouterr()
        assert "FAIL  n_u=1" in captured.out
        assert "n_u=1" in captured.err


class TestDfoCommand:
    """Tests for simplexgrad dfo."""

    def test_run(self, tmp_path, capsys):
        """A run writes trace.csv and prints a summary."""
        config = _write_config(tmp_path)
        code = main(["dfo", str(config), "--out", str(tmp_path), "--format", "json"])
        assert code == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert summary["eval_count"] == 3 + summary["iterations"]
        with (tmp_path / "trace.csv").open() as handle:
            rows = list(csv.reader(handle))
        assert rows[0][:3] == ["iter", "u1", "u2"]
        assert len(rows) == 1 + 3 + summary["iterations"]

    def test_malformed(self, tmp_path):
        """Unknown keys exit with the parse code."""
        config = _write_config(tmp_path, colour="blue")
        assert main(["dfo", str(config), "--out", str(tmp_path)]) == EXIT_PARSE

    def test_missing_objective(self, tmp_path):
        """A run needs an objective."""
        config = _write_config(tmp_path, objective=None)
        assert main(["dfo", str(config), "--out", str(tmp_path)]) == EXIT_PARSE

    def test_infeasible(self, tmp_path):
        """An infeasible step exits with code 5 and leaves a partial trace."""
        config = _write_config(tmp_path, init_step=0.01, anchor_fallback=False)
        assert main(["dfo", str(config), "--out", str(tmp_path)]) == EXIT_INFEASIBLE
        with (tmp_path / "trace.csv").open() as handle:
            assert len(list(csv.reader(handle))) == 4
