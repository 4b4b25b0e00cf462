import subprocess
import sys

import pytest

from sciontree.cli import EXIT_BACKEND, EXIT_MISMATCH, EXIT_PARSE, EXIT_USAGE, main
from sciontree.io import generate_text, parse_text, read_metadata
from sciontree.scaling import CSV_COLUMNS, mean_slowdown, records_from_csv, thread_ladder

from conftest import FIXTURES


def solve_out(capsys, *args):
    assert main(["solve", *map(str, args)]) == 0
    return capsys.readouterr().out


def test_solve_ex21(capsys):
    out = solve_out(capsys, FIXTURES / "ex21.set", "--threads", 4)
    assert len(parse_text(out).images) == 3
    assert read_metadata(out)["scalarizations_solved"] == "11"


def test_solve_output_is_deterministic(capsys, tmp_path):
    path = tmp_path / "a.kp"
    path.write_text(generate_text("kp", 3, 12, 4))
    strip = lambda s: "\n".join(l for l in s.splitlines() if "wall_time" not in l and "threads" not in l)
    first = strip(solve_out(capsys, path, "--threads", 1, "--order", "2,3,1"))
    for t in (2, 4, 8):
        assert strip(solve_out(capsys, path, "--threads", t, "--order", "2,3,1")) == first
    plain = parse_text(solve_out(capsys, path)).images
    assert parse_text(first).images == plain
    casc = solve_out(capsys, path, "--warmstart-cascade")
    assert parse_text(casc).images == plain
    assert "skipped_infeasible" in read_metadata(casc)


def test_knapsack_output_is_in_profit_sense(capsys):
    out = solve_out(capsys, FIXTURES / "tiny.kp")
    assert all(c >= 0 for im in parse_text(out).images for c in im.coords)


def test_solve_out_file(tmp_path, capsys):
    target = tmp_path / "res.set"
    solve_out(capsys, FIXTURES / "ex43.set", "--out", target)
    assert len(parse_text(target.read_text()).images) == 3


def test_env_thread_budget(monkeypatch, capsys):
    monkeypatch.setenv("SCIONTREE_THREADS", "3")
    assert read_metadata(solve_out(capsys, FIXTURES / "ex21.set"))["threads"] == "3"


@pytest.mark.parametrize("argv", [
    [], ["solve"], ["frobnicate"], ["solve", "x", "--threads", "0"], ["solve", "x", "--order", "1,1,2"],
    ["gen", "kp", "1", "3", "0"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == EXIT_USAGE


def test_order_of_wrong_size(capsys):
    assert main(["solve", str(FIXTURES / "ex21.set"), "--order", "2,1"]) == EXIT_USAGE


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.set"
    bad.write_text("3 2\n1 2 3\n1 2\n")
    assert main(["solve", str(bad)]) == EXIT_PARSE
    assert "line 3" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "none.set")]) == EXIT_PARSE


def test_backend_failure_exit(tmp_path, capsys):
    path = tmp_path / "huge.ilp"
    path.write_text("2 8 0\n" + "1 " * 8 + "\n" + "-1 " * 8 + "\n" + "0 " * 8 + "\n" + "50 " * 8 + "\n")
    assert main(["solve", str(path)]) == EXIT_BACKEND


def test_verify_seeded_knapsacks(tmp_path, capsys):
    files = []
    for seed in range(20):
        k, n = 3 + seed % 2, 10 + (seed % 3) * 2
        p = tmp_path / f"kp{seed}.kp"
        p.write_text(generate_text("kp", k, n, seed))
        files.append(str(p))
    assert main(["verify", "--no-cascade", *files]) == 0
    out = capsys.readouterr().out
    assert out.count(": ok") == 20


def test_verify_reports_mismatch(monkeypatch, capsys):
    import sciontree.verify as verify

    real = verify.nondominated_of
    monkeypatch.setattr(verify, "nondominated_of", lambda inst: set(list(real(inst))[1:]))
    assert main(["verify", str(FIXTURES / "ex21.set")]) == EXIT_MISMATCH
    assert "MISMATCH" in capsys.readouterr().out


def test_verify_fixtures(capsys):
    paths = [str(p) for p in sorted(FIXTURES.iterdir())]
    assert main(["verify", "--threads", "2", *paths]) == 0


def test_scale_csv(tmp_path, capsys):
    path = tmp_path / "s.set"
    path.write_text(generate_text("explicit", 4, 500, 1))
    assert main(["scale", str(path), "--max-threads", "8"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    records = records_from_csv(text)
    assert [r.thread_budget for r in records] == [1, 2, 4, 8]
    assert len({(r.nondominated, r.scalarizations) for r in records}) == 1
    base = records[0].wall_time_seconds
    for r in records:
        assert r.slowdown == r.wall_time_seconds / base
    assert set(mean_slowdown(records)) == {1, 2, 4, 8}


def test_thread_ladder():
    assert thread_ladder(1) == [1]
    assert thread_ladder(8) == [1, 2, 4, 8]
    assert thread_ladder(6) == [1, 2, 4, 6]


def test_gen_and_module_entry(tmp_path):
    target = tmp_path / "g.kp"
    subprocess.run([sys.executable, "-m", "sciontree", "gen", "kp", "3", "5", "1", "--out", str(target)], check=True)
    assert target.read_text() == generate_text("kp", 3, 5, 1)
    res = subprocess.run([sys.executable, "-m", "sciontree", "solve", str(target)], capture_output=True, text=True)
    assert res.returncode == 0 and "scalarizations_solved" in res.stdout
