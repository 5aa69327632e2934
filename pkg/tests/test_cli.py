import json

import numpy as np
import pytest

from blockfd.cli import main


def run_cli(args):
    return main(args)


def test_converge_writes_csv(tmp_path):
    out = tmp_path / "study.csv"
    code = run_cli(["converge", "--scheme", "second-block", "--bc", "periodic",
                    "--c=0,-1/4", "--n", "8,16", "--t-end", "0.05",
                    "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scheme,bc,c,N,s,error,observed_order"
    assert len(lines) == 5  # header + 2 c-values x 2 N-values
    assert lines[1].startswith("second-block,periodic,0.0,8,")
    # fraction parsing keeps the exact binary value of -0.25
    assert ",-0.25,8," in lines[3]


def test_converge_is_byte_deterministic(tmp_path):
    args = ["converge", "--scheme", "second-block", "--bc", "dirichlet",
            "--c=-1/4", "--n", "8,16", "--t-end", "0.05"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_converge_json_format(tmp_path):
    out = tmp_path / "study.json"
    code = run_cli(["converge", "--scheme", "second-block", "--bc", "periodic",
                    "--c", "0", "--n", "8,16", "--t-end", "0.02",
                    "--format", "json", "--out", str(out)])
    assert code == 0
    blob = json.loads(out.read_text())
    assert blob["metadata"]["t_end"] == 0.02
    assert len(blob["rows"]) == 2


def test_missing_scheme_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(["converge", "--bc", "periodic"])
    assert exc.value.code == 2


def test_unknown_problem_is_usage_error(tmp_path):
    code = run_cli(["converge", "--scheme", "second-block", "--bc", "periodic",
                    "--problem", "bogus", "--n", "8,16",
                    "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_instability_exit_code(tmp_path):
    with pytest.warns(UserWarning):
        code = run_cli(["converge", "--scheme", "second-block",
                        "--bc", "periodic", "--c", "0.9", "--n", "8,16",
                        "--t-end", "1.0", "--kappa", "3.0",
                        "--out", str(tmp_path / "x.csv")])
    assert code == 3


def test_analyze_stable_configuration(tmp_path):
    out = tmp_path / "analysis.json"
    assert run_cli(["analyze", "--n", "16", "--c=-1/4",
                    "--out", str(out)]) == 0
    blob = json.loads(out.read_text())
    assert blob["verdict"] == "stable"
    assert blob["det_min"] > 0.9
    assert blob["psi_norm"] <= np.sqrt(2) + 1e-8
    assert blob["advisories"] == []
    assert len(blob["symbols"]) == 9  # omega = 0..8


def test_analyze_flags_von_neumann_violation(tmp_path):
    out = tmp_path / "analysis.json"
    assert run_cli(["analyze", "--n", "16", "--c", "0.6",
                    "--out", str(out)]) == 0
    blob = json.loads(out.read_text())
    assert blob["verdict"] == "unstable"
    assert any("von Neumann" in a for a in blob["advisories"])


def test_analyze_table_reproduction(tmp_path):
    out = tmp_path / "analysis.json"
    assert run_cli(["analyze", "--n", "6", "--c=-1/4", "--table",
                    "--out", str(out)]) == 0
    table = json.loads(out.read_text())["table"]
    assert table["dirichlet"]["0"][0] == pytest.approx(-87.5415, abs=5e-5)
    assert table["neumann"]["6"][0] == pytest.approx(-43.7708, abs=5e-5)
    assert table["neumann"]["0"][0] == 0.0


def test_analyze_rejects_odd_n():
    assert run_cli(["analyze", "--n", "7", "--c", "0"]) == 2


def test_solve_t_end_zero_is_exact(tmp_path):
    out = tmp_path / "snapshot.csv"
    assert run_cli(["solve", "--scheme", "second-block", "--bc", "dirichlet",
                    "--c=-1/4", "--n", "8", "--t-end", "0",
                    "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,numerical,exact,error"
    assert len(lines) == 17
    for line in lines[1:]:
        assert float(line.split(",")[3]) == 0.0


def test_solve_short_run(tmp_path):
    out = tmp_path / "snapshot.csv"
    assert run_cli(["solve", "--scheme", "second-block", "--bc", "periodic",
                    "--c", "4/13", "--n", "8", "--t-end", "0.01",
                    "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    err = max(abs(float(r.split(",")[3])) for r in rows)
    assert 0 < err < 1.0


def test_solve_consistent_with_library(tmp_path):
    from blockfd import (SchemeSpec, build_operator, error_norm, integrate,
                         periodic_grid, problem_by_name, project)

    out = tmp_path / "snapshot.csv"
    assert run_cli(["solve", "--scheme", "second-block", "--bc", "periodic",
                    "--c=-1/4", "--n", "16", "--t-end", "0.1",
                    "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    cli_num = np.array([float(r.split(",")[1]) for r in rows])
    cli_err = np.array([float(r.split(",")[3]) for r in rows])
    g = periodic_grid(16, 1.0)
    prob = problem_by_name("exp-cos-periodic")
    op = build_operator(g, SchemeSpec("second-block", "periodic", -0.25))
    state = integrate(op, prob, 0.1)
    np.testing.assert_allclose(cli_num, state, rtol=1e-14)
    # max pointwise error and the weighted norm agree up to the
    # norm-equivalence factor sqrt(L)
    norm = error_norm(state, project(prob, g, 0.1), g.s)
    assert norm <= np.sqrt(g.L) * np.abs(cli_err).max() * (1 + 1e-12)
    assert np.abs(cli_err).max() <= norm / np.sqrt(g.s)
