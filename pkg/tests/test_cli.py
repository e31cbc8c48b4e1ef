import pytest

from treeinspect.cli import main
from treeinspect.immersion import parse_solution
from treeinspect.tree import parse_tree

from conftest import GOLDEN


@pytest.fixture
def golden_file(tmp_path):
    p = tmp_path / "golden.tree"
    p.write_text(GOLDEN + "\n")
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_bc_dist(capsys, golden_file):
    code, out, _ = run(capsys, "solve", "--algo", "bc-dist", "--p", 6, golden_file)
    assert code == 0
    assert parse_solution(out).total == 6
    assert "nodes_explored=" in out and "runtime_ms=" in out


@pytest.mark.parametrize("algo", ["sweeping", "dftn", "bc-dist", "bc-imm", "brute-dist",
                                  "brute-imm", "mintime", "mintime-exact"])
def test_solve_then_verify(capsys, tmp_path, golden_file, algo):
    code, out, _ = run(capsys, "solve", "--algo", algo, "--p-policy", "2h+2", "--k", 2, golden_file)
    assert code == 0
    sol = tmp_path / "sol.txt"
    sol.write_text(out)
    code, out, _ = run(capsys, "verify", "--p", 6, "--k", 2, golden_file, sol)
    assert code == 0 and out.strip() == "ok"


def test_mintime_values(capsys, golden_file):
    _, out, _ = run(capsys, "solve", "--algo", "mintime", "--p", 4, "--k", 2, golden_file)
    assert parse_solution(out).makespan == 4
    _, out, _ = run(capsys, "solve", "--algo", "mintime-exact", "--p", 6, "--k", 2, golden_file)
    assert parse_solution(out).makespan == 4


def test_default_p_is_2h(capsys, golden_file):
    _, out, _ = run(capsys, "solve", "--algo", "dftn", golden_file)
    assert parse_solution(out).total == 8


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--n", 1, "--seed", 0)
    assert code == 0 and out == "1 1\n"
    target = tmp_path / "t.tree"
    assert main(["gen", "--n", "30", "--seed", "5", "--out", str(target)]) == 0
    assert parse_tree(target.read_text()).n == 30


def test_verify_bad_solution(capsys, tmp_path, golden_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("I1: 3 4 cost=6\nI2: 4 cost=4\ntotal=10 makespan=-\n")
    code, out, _ = run(capsys, "verify", golden_file, bad)
    assert code == 2
    assert "leaf multiply covered" in out


def test_verify_wrong_totals(capsys, tmp_path, golden_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("I1: 3 cost=4\nI2: 4 cost=4\nagent 1: I1 I2 time=8\ntotal=6 makespan=4\n")
    code, out, _ = run(capsys, "verify", "--p", 6, golden_file, bad)
    assert code == 2
    assert "total distance 6 claimed" in out and "makespan 4 claimed" in out


def test_schedule(capsys):
    code, out, _ = run(capsys, "schedule", "--k", 2, "--costs", "5,3,3,3")
    assert code == 0
    assert out.splitlines()[-1] == "makespan=8"


def test_exit_codes(capsys, tmp_path, golden_file):
    assert run(capsys, "solve", "--algo", "dftn", "--p", 3, golden_file)[0] == 2
    assert run(capsys, "solve", "--algo", "nope", golden_file)[0] == 1
    assert run(capsys, "solve", "--algo", "dftn", tmp_path / "missing")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    broken = tmp_path / "broken.tree"
    broken.write_text("3 1\n1 2 1\n1 2 1\n")
    code, _, err = run(capsys, "solve", "--algo", "dftn", broken)
    assert code == 2 and "line 3" in err


def test_node_limit_flag(capsys, tmp_path):
    tree = tmp_path / "t.tree"
    main(["gen", "--n", "45", "--seed", "2", "--out", str(tree)])
    code, out, err = run(capsys, "solve", "--algo", "bc-dist", "--node-limit", 1, tree)
    assert code == 0 and "optimal=false" in out and "not proven optimal" in err


def test_bench_command(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "--sizes", "10,12", "--trees-per-size", 2,
                       "--p-policy", "2h", "--k", 2, "--seed", 1, "--out-dir", tmp_path)
    assert code == 0
    assert (tmp_path / "results.csv").exists() and (tmp_path / "ratio_distance.svg").exists()
