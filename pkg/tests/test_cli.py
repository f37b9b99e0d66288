import pytest

from turbocycles.census import read_census_csv
from turbocycles.cli import cli_main
from turbocycles.graphs import read_graph, verify_s_property

from reference_values import TURBO_64000


def run(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_theory_table(capsys):
    code, out, _ = run(capsys, "theory", "--family", "turbo", "--n", "64000", "--kmax", "20")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,p_no_cycle_leq_k,variant,n"
    assert len(lines) == 18
    for line in lines[1:]:
        k, p, variant, n = line.split(",")
        assert variant == "turbo" and n == "64000"
        assert abs(float(p) - TURBO_64000[int(k)][1]) <= 1e-4


@pytest.mark.parametrize("family", ["turbo-with-u", "turbo-closed-form"])
def test_theory_variants(capsys, family):
    code, out, _ = run(capsys, "theory", "--family", family, "--n", "5000", "--kmax", "12")
    assert code == 0 and len(out.splitlines()) == 10


def test_theory_ldpc_to_file(tmp_path, capsys):
    path = tmp_path / "ldpc.csv"
    code, out, _ = run(capsys, "theory", "--family", "ldpc", "--n", "15000", "--dv", "3", "--dc", "5",
                       "--kmax", "12", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[1].endswith(",ldpc,15000,3,5")


def test_generate_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert cli_main(["generate", "--family", "turbo", "--n", "4", "--seed", "7", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("turbo n=4 seed=7 s=0\n")


def test_generate_s_random_and_ldpc(tmp_path):
    s_path, l_path = tmp_path / "s.txt", tmp_path / "l.txt"
    assert cli_main(["generate", "--family", "turbo", "--n", "500", "--s", "10", "--seed", "1",
                     "--out", str(s_path)]) == 0
    assert verify_s_property(read_graph(s_path).perm, 10)
    assert cli_main(["generate", "--family", "ldpc", "--n", "30", "--dv", "3", "--dc", "5", "--seed", "2",
                     "--out", str(l_path)]) == 0
    assert read_graph(l_path).w == 18


def test_census_outputs(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    cli_main(["generate", "--family", "turbo", "--n", "100", "--seed", "3", "--out", str(graph)])
    cen, summary = tmp_path / "c.csv", tmp_path / "s.csv"
    code, _, _ = run(capsys, "census", "--graph", str(graph), "--kmax", "10", "--nodes", "20",
                     "--seed", "5", "--out", str(cen), "--summary", str(summary), "--threads", "2")
    assert code == 0
    per_node, kmax = read_census_csv(cen)
    assert kmax == 10 and len(per_node) == 20
    lines = summary.read_text().splitlines()
    assert lines[0] == "k,frac_nodes_no_cycle_leq_k,sample_size"
    assert len(lines) == 11 and lines[-1].endswith(",20")


def test_census_named_nodes(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    cli_main(["generate", "--family", "ldpc", "--n", "2", "--dv", "2", "--dc", "2", "--seed", "1",
              "--out", str(graph)])
    code, out, _ = run(capsys, "census", "--graph", str(graph), "--kmax", "6", "--node", "v:0", "--node", "c:1")
    assert code == 0
    assert "v:0,4,1" in out and "c:1,4,1" in out


def test_simulate_compare_independence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family=turbo-random\nn=300\ngraphs=4\nnodes=10\nkmax=10\nseed=4\n")
    report, cen, ind = tmp_path / "r.csv", tmp_path / "c.csv", tmp_path / "i.csv"
    code, _, _ = run(capsys, "simulate", "--config", str(cfg), "--out", str(report),
                     "--census-out", str(cen), "--independence-out", str(ind))
    assert code == 0
    assert report.read_text().startswith("# turbocycles simulation report")
    code, out, _ = run(capsys, "compare", "--report", str(report))
    assert code == 0 and len(out.splitlines()) == 8
    code, out, _ = run(capsys, "independence", "--census", str(cen), "--family", "turbo")
    assert code == 0
    assert out == ind.read_text()


def test_simulate_thread_count_does_not_change_body(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=400\ngraphs=6\nnodes=8\nkmax=11\nseed=12\n")
    bodies = []
    for threads in ("1", "8"):
        code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--threads", threads)
        assert code == 0
        bodies.append([line for line in out.splitlines() if not line.startswith("# wall_time_s")])
    assert bodies[0] == bodies[1]


def test_compare_with_explicit_theory_mismatch(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=300\ngraphs=2\nnodes=5\nkmax=10\nseed=4\n")
    report, theory = tmp_path / "r.csv", tmp_path / "t.csv"
    cli_main(["simulate", "--config", str(cfg), "--out", str(report)])
    cli_main(["theory", "--family", "turbo", "--n", "300", "--kmax", "12", "--out", str(theory)])
    code, _, err = run(capsys, "compare", "--report", str(report), "--theory", str(theory))
    assert code == 1 and "k ranges differ" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["theory", "--family", "turbo", "--n", "100", "--kmax", "10", "--bogus"],
        ["theory", "--family", "turbo", "--n", "10", "--kmax", "12"],
        ["generate", "--family", "ldpc", "--n", "10", "--dv", "3", "--dc", "4"],
        ["generate", "--family", "turbo", "--n", "0"],
        ["census", "--graph", "/nonexistent/graph.txt", "--kmax", "6"],
        ["simulate", "--config", "/nonexistent/run.cfg"],
    ],
)
def test_invalid_input_exits_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_construction_failure_exits_two(capsys):
    code, _, err = run(capsys, "generate", "--family", "turbo", "--n", "4", "--s", "4", "--max-restarts", "3")
    assert code == 2 and "3 attempts" in err


def test_unwritable_output(capsys):
    code, _, err = run(capsys, "theory", "--family", "turbo", "--n", "100", "--kmax", "6",
                       "--out", "/nonexistent/dir/t.csv")
    assert code == 1 and "/nonexistent/dir/t.csv" in err
