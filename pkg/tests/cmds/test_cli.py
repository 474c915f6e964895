import json

import pytest
import yaml

from src.cmds.pointforge import main
from src.util.errors import ExitCode
from src.util.json_util import read_matrix_csv

DONE = (ExitCode.OK.value, ExitCode.NOT_CONVERGED.value)


def run(root, *argv):
    return main(["-r", str(root)] + [str(a) for a in argv])


@pytest.fixture
def circle_file(tmp_path):
    out = tmp_path / "circle.json"
    assert run(tmp_path, "build", "circle", "--cutoff", 3, "-o", out) == 0
    return out


@pytest.fixture
def graph_file(tmp_path, circle_file):
    out = tmp_path / "graph.json"
    code = run(tmp_path, "forge", circle_file, "-n", 3, "--seed", 1, "-o", out)
    assert code in DONE
    return out


class TestCli:
    def test_init(self, tmp_path, capsys):
        assert run(tmp_path, "init") == 0
        assert (tmp_path / "config" / "config.yaml").is_file()
        assert run(tmp_path, "init") == 0
        assert "already exists" in capsys.readouterr().out

    def test_init_fills_new_keys(self, tmp_path, capsys):
        path = tmp_path / "config" / "config.yaml"
        path.parent.mkdir(parents=True)
        path.write_text("solver:\n  tol: 1.0e-05\n")
        assert run(tmp_path, "init") == 0
        assert "Added new default keys" in capsys.readouterr().out
        saved = yaml.safe_load(path.read_text())
        assert saved["solver"]["tol"] == 1e-5
        assert saved["solver"]["max_iter"] == 20000
        assert saved["embed"]["dim"] == 3
        assert run(tmp_path, "init") == 0
        assert "already exists" in capsys.readouterr().out

    def test_version(self, tmp_path, capsys):
        assert run(tmp_path, "version") == 0
        assert capsys.readouterr().out.startswith("pointforge ")

    def test_build(self, tmp_path, capsys, circle_file):
        out = capsys.readouterr().out
        assert "circle-3: dim H = 7" in out
        saved = json.loads(circle_file.read_text())
        assert saved["format_version"] == 1
        assert saved["config"]["build"]["dc_coupling"] == 0.5

    def test_build_sphere_dc(self, tmp_path, capsys):
        assert run(tmp_path, "build", "sphere-dc", "--cutoff", 2, "--c", 0.25, "--algebra-degree", 2) == 0
        assert "sphere-2-paper-dc0.25: dim H = 24" in capsys.readouterr().out

    def test_unknown_geometry(self, tmp_path, capsys):
        assert run(tmp_path, "build", "torus", "--cutoff", 3) == ExitCode.INPUT_ERROR.value
        assert "UNKNOWN_GEOMETRY" in capsys.readouterr().out

    def test_invalid_cutoff(self, tmp_path):
        assert run(tmp_path, "build", "circle", "--cutoff", 0.5) == ExitCode.INPUT_ERROR.value

    def test_weyl(self, tmp_path, capsys, circle_file):
        capsys.readouterr()
        assert run(tmp_path, "weyl", circle_file) == 0
        assert capsys.readouterr().out.startswith("circle-3: dimension ")

    def test_missing_file(self, tmp_path):
        code = run(tmp_path, "weyl", tmp_path / "nothing.json")
        assert code in (ExitCode.INPUT_ERROR.value, ExitCode.IO_FAILURE.value)

    def test_forge(self, tmp_path, capsys, graph_file):
        assert "Forged 3 states, 3 distances" in capsys.readouterr().out
        report = json.loads((tmp_path / "graph.report.json").read_text())
        assert report["state_count"] == 3
        d = read_matrix_csv(tmp_path / "graph.distances.csv")
        assert d.shape == (3, 3)
        assert (d == d.T).all()

    def test_distances(self, tmp_path, capsys, graph_file, circle_file):
        out = tmp_path / "again.json"
        assert run(tmp_path, "distances", graph_file, circle_file, "-o", out) in DONE
        assert "Recomputed 3 distances on circle-3" in capsys.readouterr().out
        assert out.is_file()

    def test_distances_dimension_mismatch(self, tmp_path, graph_file):
        bigger = tmp_path / "bigger.json"
        assert run(tmp_path, "build", "circle", "--cutoff", 4, "-o", bigger) == 0
        assert run(tmp_path, "distances", graph_file, bigger) == ExitCode.INPUT_ERROR.value

    def test_embed(self, tmp_path, capsys, graph_file):
        out = tmp_path / "embedding.json"
        assert run(tmp_path, "embed", graph_file, "--dim", 2, "-o", out) in DONE
        assert "radii: mean" in capsys.readouterr().out
        saved = json.loads(out.read_text())
        assert len(saved["coords"]) == 3
        assert len(saved["radii"]["radii"]) == 3
        assert (tmp_path / "embedding.coords.csv").is_file()

    def test_embed_unknown_weights(self, tmp_path, graph_file):
        code = run(tmp_path, "embed", graph_file, "--weights", "gaussian")
        assert code == ExitCode.INPUT_ERROR.value

    def test_bounds_from_graph(self, tmp_path, capsys, graph_file):
        out = tmp_path / "bounds.csv"
        assert run(tmp_path, "bounds", graph_file, "-o", out) == 0
        assert "3 pairs" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert lines[0] == "i,j,geodesic,spectral,lower,degenerate"
        assert len(lines) == 4
        assert (tmp_path / "bounds.gp").is_file()
        report = json.loads((tmp_path / "bounds.report.json").read_text())
        assert report["format_version"] == 1
        assert report["pairs"] == 3
        assert report["converged"]
        assert report["config"]["bounds"]["samples"] >= 1

    def test_bounds_sweep(self, tmp_path, capsys, circle_file):
        out = tmp_path / "sweep.csv"
        assert run(tmp_path, "bounds", "--sweep", circle_file, "--samples", 2, "-o", out) == 0
        assert "2 pairs" in capsys.readouterr().out
        report = json.loads((tmp_path / "sweep.report.json").read_text())
        assert report["statuses"] == ["OPTIMAL", "OPTIMAL"]
        assert report["config"]["solver"]["max_iter"] > 1

    def test_bounds_sweep_iteration_cap(self, tmp_path, capsys, circle_file):
        out = tmp_path / "capped.csv"
        code = run(tmp_path, "bounds", "--sweep", circle_file, "--samples", 2, "--max-iter", 1, "-o", out)
        assert code == ExitCode.NOT_CONVERGED.value
        assert "2 distances did not reach the solver tolerance" in capsys.readouterr().out
        report = json.loads((tmp_path / "capped.report.json").read_text())
        assert not report["converged"]
        assert report["config"]["solver"]["max_iter"] == 1

    def test_bounds_needs_one_source(self, tmp_path, graph_file, circle_file):
        assert run(tmp_path, "bounds") == ExitCode.INPUT_ERROR.value
        code = run(tmp_path, "bounds", graph_file, "--sweep", circle_file)
        assert code == ExitCode.INPUT_ERROR.value

    def test_dispersion_scan(self, tmp_path, capsys):
        out = tmp_path / "dispersion.csv"
        assert run(tmp_path, "dispersion-scan", "--geometry", "circle", "--cutoffs", 3, 5, 8, "-o", out) == 0
        printed = capsys.readouterr().out
        assert "cutoff 8: eta" in printed
        assert "fit eta = a log(L)/L^2" in printed
        assert len(out.read_text().splitlines()) == 4
        assert (tmp_path / "dispersion.gp").is_file()
        report = json.loads((tmp_path / "dispersion.report.json").read_text())
        assert report["decreasing"]
        assert report["cutoffs"] == [3.0, 5.0, 8.0]
        assert report["config"]["dispersion_scan"]["cutoffs"] == [3.0, 5.0, 8.0]

    def test_dispersion_scan_not_decreasing(self, tmp_path, capsys):
        out = tmp_path / "flat.csv"
        code = run(tmp_path, "dispersion-scan", "--geometry", "circle", "--cutoffs", 4, 4, "-o", out)
        assert code == ExitCode.NOT_CONVERGED.value
        assert "not strictly decreasing" in capsys.readouterr().out
        assert not json.loads((tmp_path / "flat.report.json").read_text())["decreasing"]

    def test_dispersion_scan_bad_cutoff(self, tmp_path):
        code = run(tmp_path, "dispersion-scan", "--geometry", "circle", "--cutoffs", 1)
        assert code == ExitCode.INPUT_ERROR.value
