import pandas as pd
import pytest
from frtpp.cli import main

GRID = """\
predictiveness = ["none"]
eta_c0 = [0.0]
hypotheses = ["H0", "H1"]
methods = ["m2-disc", "itt"]
replications = 2
iterations = 30
burn_in = 10
n = 80
n_t = 40
"""


@pytest.fixture
def dataset(tmp_path):
    path = tmp_path / "data.csv"
    assert main(["generate", "--out", str(path), "--seed", "5", "--n", "60", "--n-t", "30"]) == 0
    return path


def test_generate(dataset):
    frame = pd.read_csv(dataset)
    assert list(frame.columns)[:3] == ["z", "d", "y"]
    assert len(frame) == 60 and frame["z"].sum() == 30
    assert dataset.with_name("data.truth.csv").exists()


def test_generate_is_seeded(tmp_path, dataset):
    again = tmp_path / "again.csv"
    assert main(["generate", "--out", str(again), "--seed", "5", "--n", "60", "--n-t", "30"]) == 0
    assert again.read_bytes() == dataset.read_bytes()


def test_generate_with_complier_share(tmp_path, dataset):
    shifted = tmp_path / "shifted.csv"
    argv = ["generate", "--out", str(shifted), "--seed", "5", "--n", "60", "--n-t", "30"]
    assert main(argv + ["--complier-share", "0.9"]) == 0
    assert shifted.with_name("shifted.truth.csv").exists()
    assert shifted.read_bytes() != dataset.read_bytes()
    assert main(argv + ["--complier-share", "1.5"]) == 1


def test_test_prints_one_line(capsys, dataset):
    capsys.readouterr()
    assert main(["test", "--data", str(dataset), "--iterations", "40", "--burn-in", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    p_value, kind, method, degenerate = lines[0].split(",")
    assert 0 <= float(p_value) <= 1
    assert (kind, method) == ("disc", "m2")
    assert int(degenerate) >= 0


def test_test_is_deterministic(capsys, dataset):
    argv = ["test", "--data", str(dataset), "--method", "m1", "--kind", "stat",
            "--iterations", "40", "--burn-in", "10", "--seed", "3"]
    capsys.readouterr()
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_trace(tmp_path, dataset):
    trace = tmp_path / "trace.csv"
    assert main(["test", "--data", str(dataset), "--iterations", "20", "--burn-in", "5",
                 "--trace", str(trace)]) == 0
    assert len(pd.read_csv(trace)) == 20
    assert main(["test", "--data", str(dataset), "--kind", "itt", "--trace", str(trace)]) == 1


def test_invalid_data(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("z,d,y\n1,1,0.5\n1,0,0.1\n0,1,0.2\n0,0,0.3\n")
    assert main(["test", "--data", str(path)]) == 1
    assert "one-sided-violation" in capsys.readouterr().err


def test_usage_errors(capsys, dataset):
    assert main(["frobnicate"]) == 1
    assert main(["--help"]) == 0
    assert main(["test", "--data", str(dataset), "--kind", "model", "--method", "m1"]) == 1
    assert main(["simulate", "--grid", "g.toml", "--out", "r.csv"]) == 1
    assert main(["test", "--data", str(dataset), "--iterations", "10", "--burn-in", "10"]) == 1


def test_missing_file(tmp_path):
    assert main(["test", "--data", str(tmp_path / "absent.csv")]) == 2
    assert main(["report", "--in", str(tmp_path / "absent.csv"), "--figure", "fig1",
                 "--out", str(tmp_path / "fig.svg")]) == 2


def test_simulate_and_report(tmp_path):
    grid = tmp_path / "grid.toml"
    grid.write_text(GRID)
    one, two = tmp_path / "one.csv", tmp_path / "two.csv"
    assert main(["simulate", "--grid", str(grid), "--seed", "9", "--out", str(one), "--workers", "1"]) == 0
    assert main(["simulate", "--grid", str(grid), "--seed", "9", "--out", str(two), "--workers", "2"]) == 0
    assert one.read_bytes() == two.read_bytes()
    assert len(pd.read_csv(one)) == 2 * 2

    svg, table = tmp_path / "fig1.svg", tmp_path / "fig1.txt"
    assert main(["report", "--in", str(one), "--figure", "fig1", "--out", str(svg),
                 "--table", str(table)]) == 0
    assert svg.read_text().startswith("<svg")
    assert "[fig1] H0 disc" in table.read_text()
    assert main(["report", "--in", str(one), "--figure", "fig1", "--out", str(svg),
                 "--series", "m2,model"]) == 1


def test_simulate_bad_grid(capsys, tmp_path):
    grid = tmp_path / "grid.toml"
    grid.write_text("replicates = 3\n")
    assert main(["simulate", "--grid", str(grid), "--seed", "1", "--out", str(tmp_path / "r.csv")]) == 1
    assert "unknown-keys" in capsys.readouterr().err
