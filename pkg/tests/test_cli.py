"""Command line interface: exit codes, determinism, output formats."""

import json

from click.testing import CliRunner

from orbfl.cli import main

runner = CliRunner()


def gen_instance(tmp_path, name, *args):
    path = tmp_path / name
    res = runner.invoke(main, ["gen", "-o", str(path)] + list(args))
    assert res.exit_code == 0, res.output
    return str(path)


def test_gen_deterministic_and_versioned():
    a = runner.invoke(main, ["gen", "--q", "3", "--regime", "small_w",
                             "--l-kind", "unramified", "--r", "1"])
    b = runner.invoke(main, ["gen", "--q", "3", "--regime", "small_w",
                             "--l-kind", "unramified", "--r", "1"])
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output
    data = json.loads(a.output)
    assert data["version"] == "orbfl-instance/1"
    assert data["r"] == 1


def test_gen_invalid_spec_exits_2():
    res = runner.invoke(main, ["gen", "--q", "3", "--regime", "uniformizer_w",
                               "--l-kind", "ramified", "--v", "2"])
    assert res.exit_code == 2
    assert "error" in res.output or res.exc_info is not None


def test_analytic_and_geometric(tmp_path):
    path = gen_instance(tmp_path, "i.json", "--q", "3", "--regime", "small_w",
                        "--l-kind", "unramified")
    res = runner.invoke(main, ["analytic", path])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["u_coeffs"] == [1, 0, 1]
    assert data["value_at_s0"] == 2
    res = runner.invoke(main, ["geometric", path])
    assert res.exit_code == 0
    assert json.loads(res.output)["geometric_count"] == 2


def test_analytic_hecke_word(tmp_path):
    path = gen_instance(tmp_path, "i.json", "--q", "3", "--regime",
                        "uniformizer_w", "--l-kind", "ramified", "--v", "1")
    res = runner.invoke(main, ["analytic", path, "--hecke", "1"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["u_coeffs"] == [1, 1]


def test_verify_fl_and_afl(tmp_path):
    path = gen_instance(tmp_path, "i.json", "--q", "3", "--regime", "small_w",
                        "--l-kind", "ramified")
    res = runner.invoke(main, ["verify-fl", path, "--format", "json"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["verdicts"]
    path = gen_instance(tmp_path, "u.json", "--q", "3", "--regime",
                        "uniformizer_w", "--l-kind", "ramified", "--v", "3")
    res = runner.invoke(main, ["verify-afl", path])
    assert res.exit_code == 0, res.output


def test_reduce_and_verify_reduction(tmp_path):
    path = gen_instance(tmp_path, "u.json", "--q", "3", "--regime",
                        "uniformizer_w", "--l-kind", "ramified", "--v", "1")
    res = runner.invoke(main, ["reduce", path])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["version"] == "orbfl-reduced/1"
    assert data["zsq_valuation"] == 1
    res = runner.invoke(main, ["verify-reduction", path, "--format", "json"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["passed"]


def test_reduction_conductor_one_exits_2(tmp_path):
    path = gen_instance(tmp_path, "r1.json", "--q", "3", "--regime", "small_w",
                        "--l-kind", "unramified", "--r", "1")
    res = runner.invoke(main, ["reduce", path])
    assert res.exit_code == 2


def test_table_sweep_passes():
    res = runner.invoke(main, ["table", "--q", "3", "--r-max", "1",
                               "--v-max", "3"])
    assert res.exit_code == 0, res.output
    lines = res.output.strip().splitlines()
    assert lines[0].split("\t")[0] == "q"
    body = lines[1:]
    # small_w: 2 kinds x r in {0,1}; uniformizer_w: v in {1,3}; unit_w: 2 kinds
    assert len(body) == 8
    assert all(row.split("\t")[-1] == "PASS" for row in body)


def test_table_empty_range_is_header_only():
    res = runner.invoke(main, ["table", "--regimes", ""])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("q\t")


def test_table_guard_marks_skipped():
    res = runner.invoke(main, ["table", "--q", "3", "--regimes", "small_w",
                               "--r-max", "2", "--guard", "1"])
    assert res.exit_code == 2
    assert "SKIPPED(GuardError)" in res.output


def test_missing_instance_file_errors():
    res = runner.invoke(main, ["analytic", "/nonexistent.json"])
    assert res.exit_code != 0
