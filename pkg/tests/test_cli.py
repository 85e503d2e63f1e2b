import csv
import io
import json

import pytest

from latticelinear.bench import CSV_HEADER, BenchJob, all_states, initial_state, run_bench, write_csv
from latticelinear.cli import main
from latticelinear.config import ExperimentConfig, load_config_from_toml
from latticelinear.dominating_set import mds_program
from latticelinear.errors import CapacityError, InputError
from latticelinear.graph import Graph, parse_edge_list, path_graph, write_edge_list
from latticelinear.states import IN, OUT


@pytest.fixture
def write_graph(tmp_path):
    def _write(g, name="g.txt"):
        p = tmp_path / name
        p.write_text(write_edge_list(g))
        return str(p)
    return _write


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# --- gen ----------------------------------------------------------------

def test_gen_writes_edge_list(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "--n", "4", "--m", "2", "--seed", "7", "--output", str(out)]) == 0
    g = parse_edge_list(out.read_text())
    assert g.node_count == 4 and g.edge_count == 2


def test_gen_single_node(capsys):
    assert main(["gen", "--n", "1", "--m", "0"]) == 0
    assert capsys.readouterr().out == "n=1\n"


def test_gen_too_many_edges(capsys):
    assert main(["gen", "--n", "10", "--m", "50"]) == 2
    assert "exceeds" in capsys.readouterr().err


# --- run ----------------------------------------------------------------

def test_run_mds_from_all_in(g4, write_graph, capsys):
    assert main(["run", "--alg", "mds", "--graph", write_graph(g4), "--init", "all-in"]) == 0
    out = capsys.readouterr().out
    assert "converged after 2 moves" in out
    assert "dominating_set: [0, 2]" in out


def test_run_json(g4, write_graph, capsys):
    assert main(["run", "--alg", "gc", "--graph", write_graph(g4), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["algorithm"] == "gc"
    assert data["converged"] is True
    assert data["summary"]["optimal"] is True


def test_run_smp_instance(smp_instance, tmp_path, capsys):
    path = tmp_path / "smp.json"
    path.write_text(smp_instance.to_json())
    assert main(["run", "--alg", "smp", "--instance", str(path), "--init", "1,1,1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["final_state"] == [1, 2, 2]
    assert data["moves"] <= 6


def test_run_isolated_node_colouring(write_graph, capsys):
    assert main(["run", "--alg", "gc", "--graph", write_graph(Graph(1))]) == 0
    assert "after 0 moves" in capsys.readouterr().out


def test_usage_errors(tmp_path, capsys):
    assert main(["run", "--alg", "smp"]) == 2  # no instance
    assert main(["run", "--graph", str(tmp_path / "missing.txt")]) == 2
    assert main(["run", "--init", "IN,OUT"]) == 2  # random 4-node graph, 2 values
    with pytest.raises(SystemExit):
        main(["run", "--alg", "nope"])


# --- verify -------------------------------------------------------------

def test_verify_g4(g4, write_graph, capsys):
    assert main(["verify", "--alg", "mds", "--graph", write_graph(g4), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["width"] == 4
    assert data["ok"] is True


def test_verify_naive_cover_fails(write_graph, capsys):
    assert main(["verify", "--alg", "naive-vc", "--graph", write_graph(path_graph(4))]) == 1
    assert "revisit: node 3" in capsys.readouterr().out


def test_verify_two_approx_defaults_to_reachable(two_stars, write_graph, tmp_path):
    dot = tmp_path / "lattice.dot"
    assert main(["verify", "--alg", "vc", "--graph", write_graph(two_stars), "--dot", str(dot)]) == 0
    assert "rankdir=BT" in dot.read_text()


def test_verify_capacity(two_stars, write_graph):
    assert main(["verify", "--alg", "mds", "--graph", write_graph(two_stars), "--capacity", "10"]) == 2


# --- bench --------------------------------------------------------------

def test_bench_random_inits(capsys):
    code = main(["bench", "--alg", "mds", "--n", "20", "--m", "30", "--trials", "5", "--init", "random"])
    assert code == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 5
    assert list(rows[0]) == list(CSV_HEADER)
    assert [int(r["seed"]) for r in rows] == [0, 1, 2, 3, 4]
    assert all(r["within_budget"] == "True" for r in rows)
    assert all(int(r["moves"]) <= 20 for r in rows)


def test_bench_reports_budget_overrun(write_graph, capsys):
    assert main(["bench", "--alg", "naive-vc", "--graph", write_graph(path_graph(5))]) == 1
    rows = _csv_rows(capsys.readouterr().out)
    assert rows[0]["moves"] == "6"
    assert rows[0]["within_budget"] == "False"


def test_bench_enumerate_all(edge, write_graph, capsys):
    assert main(["bench", "--alg", "gc", "--graph", write_graph(edge), "--init", "enumerate-all",
                 "--cap", "3"]) == 0
    assert len(_csv_rows(capsys.readouterr().out)) == 9


def test_bench_amr_column(g4, write_graph, capsys):
    assert main(["bench", "--alg", "mds", "--graph", write_graph(g4), "--init", "all-in", "--trials", "3",
                 "--read-model", "amr", "--lag", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {row["read_model"] for row in data["rows"]} == {"amr"}
    assert {row["lag"] for row in data["rows"]} == {2}
    assert data["mean_moves"] >= 0


def test_run_bench_keeps_job_order(g4):
    prog = mds_program()
    jobs = [BenchJob("mds", g4, initial_state(prog, g4, "random", seed), seed=seed) for seed in range(6)]
    serial = run_bench(jobs, workers=1)
    parallel = run_bench(jobs, workers=2)
    assert [r.moves for r in serial] == [r.moves for r in parallel]
    assert [r.seed for r in parallel] == list(range(6))
    buffer = io.StringIO()
    write_csv(serial, buffer)
    assert buffer.getvalue().splitlines()[0] == ",".join(CSV_HEADER)


def test_initial_state_policies(g4):
    prog = mds_program()
    assert initial_state(prog, g4, "all-in") == (IN,) * 4
    assert initial_state(prog, g4, "fixed") == (OUT,) * 4
    assert initial_state(prog, g4, "IN,OUT,IN,OUT") == (IN, OUT, IN, OUT)
    with pytest.raises(InputError):
        initial_state(prog, g4, "enumerate-all")
    with pytest.raises(CapacityError):
        list(all_states(prog, g4, capacity=8))


# --- config -------------------------------------------------------------

def test_toml_then_flags(g4, write_graph, tmp_path, capsys):
    cfg = tmp_path / "exp.toml"
    cfg.write_text(f'[experiment]\nalgorithm = "mds"\ngraph = "{write_graph(g4)}"\ninit = "all-in"\n')
    assert main(["--config", str(cfg), "run", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["final_state"] == ["IN", "OUT", "IN", "OUT"]
    assert main(["--config", str(cfg), "run", "--init", "all-out", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["final_state"] == ["OUT", "IN", "OUT", "IN"]


def test_unknown_init_policy_is_a_usage_error(capsys):
    assert main(["run", "--alg", "mds", "--init", "al-in"]) == 2


def test_toml_unknown_key(tmp_path):
    cfg = tmp_path / "exp.toml"
    cfg.write_text("[experiment]\nalgo = \"mds\"\n")
    with pytest.raises(InputError):
        load_config_from_toml(cfg)
    assert main(["--config", str(cfg), "run"]) == 2


def test_toml_missing_file_uses_defaults(tmp_path):
    assert load_config_from_toml(tmp_path / "absent.toml") == {}


def test_config_validation():
    with pytest.raises(InputError):
        ExperimentConfig(daemon="lazy").validate()
    with pytest.raises(InputError):
        ExperimentConfig(trials=0).validate()
    with pytest.raises(InputError):
        ExperimentConfig(init="randm").validate()  # neither a policy nor a state
    ExperimentConfig(init="IN,OUT,IN,OUT").validate()
    ExperimentConfig(init="3,1,2").validate()
    ExperimentConfig(init="enumerate-all").validate()
    assert str(ExperimentConfig(read_model="amr", lag=1).read) == "amr"
