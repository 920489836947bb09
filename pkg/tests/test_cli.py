import json
import subprocess
import sys

import pytest

from binpack3d.cli import main
from binpack3d.instance_io import load_bundled, parse_packing, write_packing
from binpack3d.model import expected_constraint_count


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def bad_packing_file(tmp_path):
    """Two cases of bundled instance 1 stacked at the origin."""
    inst = load_bundled(1)
    doc = {
        "format_version": 1,
        "instance_name": inst.name,
        "placements": [
            {"case_index": i, "bin_index": 0, "x": 0.0, "y": 0.0, "z": 0.0,
             "orientation": 1}
            for i in range(inst.num_cases)
        ],
    }
    path = tmp_path / "bad.pack.json"
    path.write_text(json.dumps(doc))
    return path


class TestSolve:
    def test_solve_bundled_writes_packing_and_report(self, tmp_path, capsys):
        out = tmp_path / "pack.json"
        trace = tmp_path / "trace.log"
        code, stdout, _ = run_cli([
            "solve", "--instance", "bundled:1", "--time-limit", "2",
            "--seed", "7", "--deterministic", "--restarts", "2",
            "--out", str(out), "--trace", str(trace)], capsys)
        assert code == 0
        report = json.loads(stdout)
        assert report["feasible"] is True
        assert report["solver"] == "heuristic"
        inst = load_bundled(1)
        pack = parse_packing(out.read_bytes(), inst)
        assert len(pack.placements) == 16
        lines = trace.read_text().splitlines()
        assert lines and all(len(ln.split()) == 2 for ln in lines)

    def test_solve_infeasible_exits_2(self, tmp_path, capsys):
        doc = {
            "format_version": 1, "name": "hopeless",
            "cases": [{"id": 0, "quantity": 1, "length": 9, "width": 9, "height": 9}],
            "bins": [{"type_id": 0, "quantity": 1, "length": 2, "width": 2, "height": 2}],
        }
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(doc))
        code, stdout, _ = run_cli(
            ["solve", "--instance", str(path), "--time-limit", "1",
             "--deterministic"], capsys)
        assert code == 2
        assert json.loads(stdout)["feasible"] is False

    def test_exact_solver_selectable(self, tmp_path, capsys):
        doc = {
            "format_version": 1, "name": "tiny",
            "cases": [{"id": 0, "quantity": 2, "length": 2, "width": 2, "height": 2}],
            "bins": [{"type_id": 0, "quantity": 1, "length": 6, "width": 6, "height": 6}],
        }
        path = tmp_path / "tiny.json"
        path.write_text(json.dumps(doc))
        code, stdout, _ = run_cli(
            ["solve", "--instance", str(path), "--solver", "exact",
             "--time-limit", "5"], capsys)
        assert code == 0
        assert json.loads(stdout)["solver"] == "exact"


class TestExport:
    def test_lp_row_count_matches_formula(self, tmp_path, capsys):
        out = tmp_path / "m.lp"
        code, stdout, _ = run_cli(
            ["export", "--instance", "bundled:1", "--mode", "linearized",
             "--out", str(out)], capsys)
        assert code == 0
        meta = json.loads(stdout)
        assert meta["constraints"] == expected_constraint_count(16, 1, (1,))
        assert meta["constraints"] == 1016
        text = out.read_text()
        assert text.startswith("\\ Model for instance bench-01")
        assert text.rstrip().endswith("End")

    def test_format_inferred_from_extension(self, tmp_path, capsys):
        out = tmp_path / "m.mps"
        code, _, _ = run_cli(["export", "--instance", "bundled:1",
                              "--out", str(out)], capsys)
        assert code == 0
        assert out.read_text().startswith("NAME")

    def test_quadratic_mps_is_an_error(self, tmp_path, capsys):
        out = tmp_path / "m.mps"
        code, _, err = run_cli(
            ["export", "--instance", "bundled:1", "--mode", "quadratic",
             "--out", str(out)], capsys)
        assert code == 1
        assert err.strip().count("\n") == 0  # single-line diagnostic
        assert not out.exists()  # no partial output

    def test_support_model_exports(self, tmp_path, capsys):
        out = tmp_path / "sup.lp"
        code, stdout, _ = run_cli(
            ["export", "--instance", "bundled:1", "--support-threshold", "0.8",
             "--out", str(out)], capsys)
        assert code == 0
        assert "sup_min[0]:" in out.read_text()


class TestValidateCommand:
    def test_feasible_round_trip(self, tmp_path, capsys):
        inst = load_bundled(1)
        from binpack3d.heuristic import solve_heuristic
        from binpack3d.solvers import SolverConfig
        res = solve_heuristic(inst, SolverConfig(time_limit=1.5, seed=1,
                                                 deterministic=True))
        path = tmp_path / "good.json"
        path.write_text(write_packing(inst, res.packing))
        code, stdout, _ = run_cli(
            ["validate", "--instance", "bundled:1", "--packing", str(path)],
            capsys)
        assert code == 0
        assert json.loads(stdout)["overall"] == "feasible"

    def test_overlapping_packing_exits_2(self, bad_packing_file, capsys):
        code, stdout, _ = run_cli(
            ["validate", "--instance", "bundled:1",
             "--packing", str(bad_packing_file)], capsys)
        assert code == 2
        doc = json.loads(stdout)
        assert doc["overall"] == "infeasible"
        assert any(v["family"] == "overlap" for v in doc["violations"])


class TestReportRender:
    def test_report_with_bound(self, tmp_path, capsys):
        inst = load_bundled(1)
        from binpack3d.heuristic import solve_heuristic
        from binpack3d.solvers import SolverConfig
        res = solve_heuristic(inst, SolverConfig(time_limit=1.5, seed=1,
                                                 deterministic=True))
        path = tmp_path / "p.json"
        path.write_text(write_packing(inst, res.packing))
        code, stdout, _ = run_cli(
            ["report", "--instance", "bundled:1", "--packing", str(path),
             "--bound", "50"], capsys)
        assert code == 0
        doc = json.loads(stdout)
        assert doc["relative_gap"] == pytest.approx(
            (doc["objective"] - 50) / doc["objective"])

    def test_render_writes_svg(self, tmp_path, capsys):
        inst = load_bundled(1)
        from binpack3d.heuristic import solve_heuristic
        from binpack3d.solvers import SolverConfig
        res = solve_heuristic(inst, SolverConfig(time_limit=1.5, seed=1,
                                                 deterministic=True))
        pack_path = tmp_path / "p.json"
        pack_path.write_text(write_packing(inst, res.packing))
        svg_path = tmp_path / "out.svg"
        code, _, _ = run_cli(
            ["render", "--instance", "bundled:1", "--packing", str(pack_path),
             "--view", "layers", "--out", str(svg_path)], capsys)
        assert code == 0
        assert svg_path.read_text().startswith("<svg")


class TestUsageErrors:
    def test_unknown_flag_rejected_with_exit_1(self, capsys):
        code, _, err = run_cli(["solve", "--instance", "bundled:1",
                                "--no-such-flag"], capsys)
        assert code == 1
        assert err.startswith("binpack3d: error:")
        assert err.strip().count("\n") == 0

    def test_missing_file_is_io_error(self, capsys):
        code, _, err = run_cli(
            ["validate", "--instance", "/nonexistent/path.json",
             "--packing", "/also/missing.json"], capsys)
        assert code == 1
        assert err.startswith("binpack3d: error:")

    def test_instances_listing(self, capsys):
        code, stdout, _ = run_cli(["instances"], capsys)
        assert code == 0
        rows = json.loads(stdout)
        assert len(rows) == 15
        assert rows[0]["ref"] == "bundled:1"
        assert rows[14]["cases"] == 158


class TestModuleEntry:
    def test_python_dash_m_invocation(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "binpack3d", "instances"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)[0]["name"] == "bench-01"
