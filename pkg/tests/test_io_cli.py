from __future__ import annotations

import json

import numpy as np
import pytest

from mintime import build_grid, builtin, solve_fim, solve_fsm
from mintime.cli import main
from mintime.io import (
    read_reactivation_csv,
    read_solution_csv,
    write_reactivation_csv,
    write_solution_csv,
)


class TestSolutionCsv:
    def test_round_trip_exact(self, tmp_path):
        spec = builtin("hjb2")
        grid = build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, 21, spec.target_points)
        field, _ = solve_fsm(grid, spec)
        path = tmp_path / "sol.csv"
        write_solution_csv(path, grid, field)
        values, astar = read_solution_csv(path)
        assert np.array_equal(values, field.values)
        assert np.array_equal(astar, field.astar)

    def test_sentinel_round_trip(self, tmp_path):
        spec = builtin("hjb1")
        grid = build_grid(-2, 2, -2, 2, 5, [(0, 0)])
        from mintime import init_field

        field = init_field(grid)
        path = tmp_path / "sol.csv"
        write_solution_csv(path, grid, field)
        text = path.read_text()
        assert ",inf," in text
        values, _ = read_solution_csv(path)
        assert np.array_equal(values, field.values)

    def test_header_and_row_order(self, tmp_path):
        grid = build_grid(0, 1, 0, 1, 3, [(0, 0)])
        from mintime import init_field

        field = init_field(grid)
        path = tmp_path / "sol.csv"
        write_solution_csv(path, grid, field)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y,T,astar"
        # j outer, i inner: the first data row is node (0, 0), then (1, 0)
        assert lines[1].startswith("0,0,")
        assert lines[2].startswith("0.5,0,")


class TestReactivationCsv:
    def test_round_trip_dense(self, tmp_path):
        spec = builtin("hjb2")
        grid = build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, 15, spec.target_points)
        _, stats = solve_fim(grid, spec)
        path = tmp_path / "react.csv"
        write_reactivation_csv(path, stats.insertions)
        loaded = read_reactivation_csv(path)
        assert np.array_equal(loaded, stats.insertions)
        assert len(path.read_text().splitlines()) == 1 + 15 * 15


class TestCliSolve:
    def test_solve_writes_outputs(self, tmp_path):
        out = tmp_path / "sol.csv"
        stats = tmp_path / "stats.json"
        rc = main([
            "solve", "--problem", "hjb1", "--method", "fsm", "--n", "41",
            "--out", str(out), "--stats", str(stats),
        ])
        assert rc == 0
        payload = json.loads(stats.read_text())
        assert payload["problem"] == "hjb1"
        assert payload["method"] == "fsm"
        assert payload["n"] == 41
        assert payload["sweeps"] == 5
        assert payload["imax"] == 0
        assert set(payload) == {
            "problem", "method", "n", "dx", "eps", "sweeps",
            "node_updates", "imax", "wall_seconds",
        }
        values, _ = read_solution_csv(out)
        assert values.shape == (41, 41)

    def test_solve_fim_smallest_grid(self, tmp_path):
        out = tmp_path / "sol.csv"
        stats = tmp_path / "stats.json"
        rc = main([
            "solve", "--problem", "hjb1", "--method", "fim", "--n", "3",
            "--out", str(out), "--stats", str(stats),
        ])
        assert rc == 0
        values, _ = read_solution_csv(out)
        assert values[1, 1] == 0.0
        assert values[0, 1] == pytest.approx(2.0)  # dx = 2 at n = 3

    def test_solve_fim_reactivation_map(self, tmp_path):
        react = tmp_path / "react.csv"
        rc = main([
            "solve", "--problem", "hjb2", "--method", "fim", "--n", "21",
            "--out", str(tmp_path / "s.csv"), "--stats", str(tmp_path / "st.json"),
            "--reactivation", str(react),
        ])
        assert rc == 0
        counts = read_reactivation_csv(react)
        assert counts.max() >= 1

    def test_reactivation_requires_fim(self, tmp_path):
        rc = main([
            "solve", "--problem", "hjb1", "--method", "fsm", "--n", "11",
            "--out", str(tmp_path / "s.csv"), "--stats", str(tmp_path / "st.json"),
            "--reactivation", str(tmp_path / "r.csv"),
        ])
        assert rc == 1

    def test_deterministic_outputs(self, tmp_path):
        args = lambda d: [
            "solve", "--problem", "hjb4", "--method", "fsm", "--n", "21",
            "--out", str(d / "sol.csv"), "--stats", str(d / "stats.json"),
        ]
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        d1.mkdir()
        d2.mkdir()
        assert main(args(d1)) == 0
        assert main(args(d2)) == 0
        assert (d1 / "sol.csv").read_bytes() == (d2 / "sol.csv").read_bytes()
        p1 = json.loads((d1 / "stats.json").read_text())
        p2 = json.loads((d2 / "stats.json").read_text())
        p1.pop("wall_seconds")
        p2.pop("wall_seconds")
        assert p1 == p2

    def test_no_astar_flag(self, tmp_path):
        out = tmp_path / "sol.csv"
        rc = main([
            "solve", "--problem", "hjb1", "--method", "fsm", "--n", "11",
            "--out", str(out), "--stats", str(tmp_path / "st.json"), "--no-astar",
        ])
        assert rc == 0
        _, astar = read_solution_csv(out)
        assert (astar == -1).all()

    def test_spec_file_input(self, tmp_path):
        spec_file = tmp_path / "prob.txt"
        spec_file.write_text("template = hjb1\nxmin = -1\nxmax = 1\nymin = -1\nymax = 1\n")
        rc = main([
            "solve", "--spec-file", str(spec_file), "--method", "fsm", "--n", "11",
            "--out", str(tmp_path / "s.csv"), "--stats", str(tmp_path / "st.json"),
        ])
        assert rc == 0

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--problem", "hjb9", "--method", "fsm"])
        assert exc.value.code == 1

    def test_guard_trip_exit_code(self, tmp_path, monkeypatch):
        import mintime.cli as cli
        from mintime import NonConvergenceError

        def explode(*a, **k):
            raise NonConvergenceError("guard")

        monkeypatch.setattr(cli, "solve_fsm", explode)
        rc = main([
            "solve", "--problem", "hjb1", "--method", "fsm", "--n", "11",
            "--out", str(tmp_path / "s.csv"), "--stats", str(tmp_path / "st.json"),
        ])
        assert rc == 2


class TestCliCompare:
    def test_methods_agree(self, tmp_path):
        out = tmp_path / "cmp.json"
        rc = main([
            "compare", "--problem", "hjb3", "--methods", "fsm,fim,ufsm34,ufsm14",
            "--n", "41", "--out", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        for m in ("fsm", "fim", "ufsm34", "ufsm14"):
            assert payload["vs_reference"][m]["linf"] <= 1e-9
            assert not payload["vs_reference"][m]["divergent"]

    def test_identical_method_twice_zero_diff(self, tmp_path):
        out = tmp_path / "cmp.json"
        rc = main([
            "compare", "--problem", "hjb1", "--methods", "fsm,fsm",
            "--n", "21", "--out", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["pairwise"][0]["linf"] == 0.0

    def test_needs_two_methods(self, tmp_path):
        rc = main([
            "compare", "--problem", "hjb1", "--methods", "fsm",
            "--n", "11", "--out", str(tmp_path / "c.json"),
        ])
        assert rc == 1

    def test_divergent_method_is_flagged(self, tmp_path):
        # quarter-ball pruning computes a wrong solution on hjb5 once the
        # grid resolves the hard region; the report must call it out
        out = tmp_path / "cmp.json"
        rc = main([
            "compare", "--problem", "hjb5", "--methods", "ufsm14,fsm",
            "--n", "201", "--out", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["vs_reference"]["ufsm14"]["divergent"]
        assert payload["vs_reference"]["ufsm14"]["linf"] > 1e-9
        assert not payload["vs_reference"]["fsm"]["divergent"]


class TestCliTable:
    def test_single_problem_subset(self, tmp_path):
        out = tmp_path / "table.csv"
        text = tmp_path / "table.txt"
        rc = main([
            "table", "--problems", "hjb1", "--sizes", "11,21",
            "--out", str(out), "--text", str(text),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 3  # header + 2 rows
        assert lines[0].startswith("problem,n,dx,fsm_seconds,fsm_sweeps")
        assert lines[1].split(",")[0] == "hjb1"
        assert text.read_text().strip()

    def test_row_count_is_problems_times_sizes(self, tmp_path):
        out = tmp_path / "table.csv"
        rc = main([
            "table", "--problems", "hjb1,hjb2", "--sizes", "11",
            "--out", str(out),
        ])
        assert rc == 0
        assert len(out.read_text().splitlines()) == 3
