import numpy as np
import pytest

from latticelinear.engine import Daemon, budget_for, replay_check, run
from latticelinear.errors import InputError
from latticelinear.graph import random_graph
from latticelinear.lattice import rank
from latticelinear.oracles import is_minimal_vertex_cover, is_vertex_cover, minimum_vertex_cover_size
from latticelinear.states import IN, OUT, CoverState, PointerState, members
from latticelinear.vertex_cover import naive_vc_program, vc_distributed_program, vc_program


def test_two_approx_first_moves(two_stars):
    prog = vc_program()
    init = prog.initial_state(two_stars)
    moves = prog.enabled_moves(two_stars, init)
    assert set(moves) == {3, 7}
    assert moves[3] == {3: CoverState(IN, True), 1: CoverState(IN, True)}  # atomic two-node write


def test_two_approx_on_two_stars(two_stars):
    prog = vc_program()
    init = prog.initial_state(two_stars)
    assert rank(init, prog, two_stars) == 12  # sum of degrees
    trace = run(prog, two_stars, init)
    assert members(trace.final_state) == {1, 3, 6, 7}
    assert trace.total_moves == 6
    assert replay_check(trace, budget_for(prog, two_stars))
    assert prog.optimal(two_stars, trace.final_state)


def test_finished_keeps_membership():
    assert CoverState(IN).finished() == CoverState(IN, True)
    assert CoverState().finished() == CoverState(OUT, True)


def test_two_approx_rejects_random_init(edge):
    with pytest.raises(InputError):
        vc_program().random_state(edge, np.random.default_rng(0))


def test_distributed_on_single_edge(edge):
    prog = vc_distributed_program()
    trace = run(prog, edge, prog.initial_state(edge))
    assert trace.final_state == (PointerState(OUT, True, None), PointerState(IN, True, 0))
    assert trace.total_moves == 2


def test_distributed_on_two_stars(two_stars):
    prog = vc_distributed_program()
    trace = run(prog, two_stars, prog.initial_state(two_stars))
    cover = members(trace.final_state)
    assert cover == {1, 3, 7}  # v4 is redundant: not minimal, still within twice the optimum
    assert is_vertex_cover(two_stars, cover)
    assert not is_minimal_vertex_cover(two_stars, cover)
    assert len(cover) <= 2 * minimum_vertex_cover_size(two_stars)


def test_distributed_point_must_be_a_neighbour(two_stars):
    prog = vc_distributed_program()
    state = list(prog.initial_state(two_stars))
    state[0] = PointerState(OUT, False, 5)
    with pytest.raises(InputError):
        prog.validate(two_stars, tuple(state))


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("make", [vc_program, vc_distributed_program])
def test_cover_within_twice_optimum(seed, make):
    g = random_graph(8, 10, seed=seed)
    prog = make()
    for daemon in Daemon:
        trace = run(prog, g, prog.initial_state(g), daemon=daemon, seed=seed)
        cover = members(trace.final_state)
        assert trace.converged
        assert trace.total_moves <= g.node_count
        assert is_vertex_cover(g, cover)
        assert len(cover) <= 2 * minimum_vertex_cover_size(g)


def _connected_graphs(n, count):
    limit = n * (n - 1) // 2
    graphs, seed = [], 0
    while len(graphs) < count:
        g = random_graph(n, n - 1 + seed % (limit - n + 2), seed=seed)
        if g.is_connected():
            graphs.append(g)
        seed += 1
    return graphs


@pytest.mark.parametrize("n", range(4, 10))
def test_two_approximation_on_connected_graphs(n):
    non_minimal = 0
    for g in _connected_graphs(n, 170):
        optimum = minimum_vertex_cover_size(g)
        for prog in (vc_program(), vc_distributed_program()):
            trace = run(prog, g, prog.initial_state(g))
            cover = members(trace.final_state)
            assert trace.converged
            assert trace.total_moves <= n
            assert is_vertex_cover(g, cover)
            assert len(cover) <= 2 * optimum
            if prog.name == "vc-dist" and not is_minimal_vertex_cover(g, cover):
                non_minimal += 1
    if n >= 8:
        assert non_minimal > 0  # the pointer-based cover is not always minimal


# --- Naive toggling -----------------------------------------------------

def test_naive_revisits_on_path(path):
    prog = naive_vc_program()
    trace = run(prog, path(4), (OUT,) * 4)
    assert trace.total_moves == 4
    assert trace.final_state == (OUT, IN, IN, OUT)
    assert not prog.history_ok(trace.node_values(3))  # v4 joins, then leaves


def test_naive_exceeds_n_moves(path):
    prog = naive_vc_program()
    g = path(5)
    trace = run(prog, g, (OUT,) * 5)
    assert trace.total_moves == 6
    assert trace.final_state == (OUT, IN, OUT, IN, OUT)
    assert not replay_check(trace, budget_for(prog, g))
