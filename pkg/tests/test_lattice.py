import json

import networkx as nx
import numpy as np
import pytest

from latticelinear.colouring import gc_program
from latticelinear.dominating_set import mds_eventually_ll_program, mds_program
from latticelinear.engine import run
from latticelinear.errors import CapacityError, InputError
from latticelinear.graph import Graph, random_graph
from latticelinear.lattice import (explore, hasse_edges, impedensable, join, meet, rank, rank_violations,
                                   read_robustness, report_to_json, to_dot, verify_partition)
from latticelinear.marriage import SmpInstance, smp_program
from latticelinear.states import IN, OUT, members, memberships
from latticelinear.vertex_cover import naive_vc_program, vc_distributed_program, vc_program

S = memberships


@pytest.fixture
def g4_report(g4):
    prog = mds_program()
    space = explore(prog, g4)
    return prog, space, verify_partition(space, prog)


def test_explore_full_space(g4):
    space = explore(mds_program(), g4)
    assert len(space) == 16
    assert space.successors(S("IN,IN,IN,IN")) == {S("IN,OUT,IN,IN"), S("IN,IN,IN,OUT")}
    assert space.successors(S("IN,OUT,IN,OUT")) == frozenset()


def test_explore_capacity(two_stars):
    with pytest.raises(CapacityError):
        explore(mds_program(), two_stars, capacity=100)


def test_g4_has_four_lattices(g4_report):
    prog, space, report = g4_report
    assert report.ok
    assert report.width == 4
    assert sorted(len(c) for c in report.classes) == [4, 4, 4, 4]
    assert set(report.suprema) == {
        S("IN,OUT,IN,OUT"), S("OUT,IN,OUT,IN"), S("OUT,IN,IN,OUT"), S("IN,OUT,OUT,IN"),
    }
    cls = report.class_of(S("IN,IN,IN,IN"))
    assert cls.states == {S("IN,IN,IN,IN"), S("IN,OUT,IN,IN"), S("IN,IN,IN,OUT"), S("IN,OUT,IN,OUT")}
    assert cls.infimum == S("IN,IN,IN,IN")
    assert all(c.meet_join_closed for c in report.classes)
    assert not report.revisit_violations


def test_single_node_lattice():
    prog = mds_program()
    space = explore(prog, Graph(1))
    report = verify_partition(space, prog)
    assert report.width == 1
    assert report.suprema == [(IN,)]


def test_meet_and_join(g4_report):
    prog, _, report = g4_report
    a, b = S("IN,OUT,IN,IN"), S("IN,IN,IN,OUT")
    assert meet(a, b, prog, report) == S("IN,IN,IN,IN")
    assert join(a, b, prog, report) == S("IN,OUT,IN,OUT")
    assert meet(a, b, prog, report) == meet(b, a, prog, report)
    assert join(a, meet(a, b, prog, report), prog, report) == a  # absorption


def test_meet_needs_one_class(g4_report):
    prog, _, report = g4_report
    with pytest.raises(InputError):
        meet(S("IN,IN,IN,IN"), S("OUT,OUT,OUT,OUT"), prog, report)
    with pytest.raises(InputError):
        join(S("IN,IN,IN,IN"), S("IN,IN,IN,IN"), prog)  # no report


def test_impedensable_by_brute_force(g4_report):
    prog, space, report = g4_report
    all_out = (OUT,) * 4
    assert impedensable(1, all_out, space, prog, report)  # v2 must join
    assert not impedensable(0, all_out, space, prog, report)
    assert not impedensable(2, S("IN,OUT,IN,OUT"), space, prog, report)  # already optimal
    with pytest.raises(InputError):
        impedensable(0, (OUT,) * 3, space, prog, report)


def test_rank(g4):
    assert rank((OUT,) * 4, mds_program(), g4) == 4
    assert rank(S("IN,OUT,IN,OUT"), mds_program(), g4) == 0


def test_eventually_ll_feasible_slice(g4):
    prog = mds_eventually_ll_program()
    space = explore(prog, g4, feasible_only=True)
    assert len(space) == 9  # one or both ends of each edge
    report = verify_partition(space, prog)
    assert report.ok
    classes = {c.supremum: c.states for c in report.classes}
    assert classes[S("OUT,IN,OUT,IN")] == {S("OUT,IN,OUT,IN")}
    assert classes[S("OUT,IN,IN,OUT")] == {S("OUT,IN,IN,IN"), S("OUT,IN,IN,OUT")}
    assert classes[S("IN,OUT,OUT,IN")] == {S("IN,IN,OUT,IN"), S("IN,OUT,OUT,IN")}
    assert len(classes[S("IN,OUT,IN,OUT")]) == 4


def test_gc_edge_lattice(edge):
    prog = gc_program()
    space = explore(prog, edge, 3)
    assert len(space) == 9
    report = verify_partition(space, prog)
    assert report.ok
    assert report.domain_cap == 3
    assert report.class_of((1, 1)).supremum == (1, 2)


def test_two_approx_reachable_slice(two_stars):
    prog = vc_program()
    space = explore(prog, two_stars, reachable_from=prog.initial_state(two_stars))
    report = verify_partition(space, prog)
    assert report.ok
    assert report.width == 1  # one lattice from the fixed start
    covers = {frozenset(i for i, v in enumerate(s) if v.st is IN) for s in space}
    assert covers == {frozenset(), frozenset({1, 3}), frozenset({6, 7}), frozenset({1, 3, 6, 7})}


def test_naive_cover_revisit_witness(path):
    prog = naive_vc_program()
    space = explore(prog, path(4))
    report = verify_partition(space, prog)
    assert not report.ok
    witness = next(w for w in report.revisit_violations if w.start == (OUT,) * 4)
    assert witness.node == 3
    assert witness.values == (OUT, IN, OUT)


def test_smp_predicate_lattice(smp_instance):
    prog = smp_program(smp_instance)
    g = smp_instance.graph()
    space = explore(prog, g)
    assert len(space) == 27
    assert space.dead_ends  # some moves exhaust a man
    report = verify_partition(space, prog)
    assert report.disjoint
    assert report.class_of((1, 1, 1)).supremum == (1, 2, 2)
    assert (3, 1, 2) in report.unsolvable
    assert join((2, 1, 1), (1, 2, 1), prog) == (2, 2, 1)
    assert meet((2, 1, 3), (1, 2, 1), prog) == (1, 1, 1)
    assert impedensable(1, (1, 1, 1), space, prog)  # J
    assert not impedensable(0, (1, 1, 1), space, prog)  # A


def test_rank_violations_are_informational(path):
    prog = mds_program()
    report = verify_partition(explore(prog, path(4)), prog)
    assert report.rank_violations  # adding v1 keeps the rank flat
    assert report.ok


def test_report_json(g4_report):
    _, _, report = g4_report
    data = json.loads(report_to_json(report))
    assert data["width"] == 4
    assert data["ok"] is True
    assert data["explored"] == 16
    assert sorted(c["size"] for c in data["classes"]) == [4, 4, 4, 4]


def test_dot_output(g4_report):
    _, space, report = g4_report
    dot = to_dot(report, space)
    assert dot.startswith("digraph lattice {")
    assert "rankdir=BT" in dot
    assert dot.count("subgraph cluster_") == 4
    assert dot.count("->") == 16  # each class is a square: four covering edges


def test_hasse_drops_transitive_edges():
    a, b, c = (0,), (1,), (2,)
    edges = hasse_edges([a, b, c], {a: frozenset({b, c}), b: frozenset({c}), c: frozenset()})
    assert set(edges) == {(a, b), (b, c)}


def test_read_robustness(g4, smp_instance, edge):
    assert read_robustness(mds_program(), g4, (IN,) * 4, lags=range(4), seeds=range(5)) == []
    smp = smp_program(smp_instance)
    assert read_robustness(smp, smp_instance.graph(), (1, 1, 1), lags=range(4), seeds=range(5)) == []
    assert read_robustness(gc_program(), edge, (1, 1), lags=range(3), seeds=range(5)) == []
    vc = vc_distributed_program()
    assert read_robustness(vc, edge, vc.initial_state(edge), lags=range(3), seeds=range(5)) == []



def test_lag_zero_agrees_on_order_dependent_start(square_with_tail):
    start = S("IN,OUT,IN,OUT,OUT")
    assert read_robustness(mds_program(), square_with_tail, start, lags=[0], seeds=range(10)) == []


@pytest.mark.parametrize("make", [mds_program, gc_program, vc_distributed_program])
def test_lag_zero_agrees_with_fresh_reads(make):
    g = random_graph(24, 40, seed=11)
    prog = make()
    if prog.fixed_init_only:
        init = prog.initial_state(g)
    else:
        init = prog.random_state(g, np.random.default_rng(11))
    assert read_robustness(prog, g, init, lags=[0], seeds=range(50)) == []


def _random_instance(n, seed):
    rng = np.random.default_rng(seed)
    men = tuple(tuple(int(w) for w in rng.permutation(n)) for _ in range(n))
    women = tuple(tuple(int(m) for m in rng.permutation(n)) for _ in range(n))
    return SmpInstance(men, women)


@pytest.mark.parametrize("n", [4, 6, 10])
def test_smp_stale_reads_keep_the_matching(n):
    # A man rejected under an old view is still rejected now.
    prog = smp_program(_random_instance(n, seed=n))
    g = prog.instance.graph()
    assert read_robustness(prog, g, prog.initial_state(g), lags=range(6), seeds=range(50)) == []


# --- Order-dependent endpoints ------------------------------------------

def test_mds_endpoint_depends_on_move_order(square_with_tail):
    prog = mds_program()
    start = S("IN,OUT,IN,OUT,OUT")
    assert set(prog.enabled_moves(square_with_tail, start)) == {0, 4}
    report = verify_partition(explore(prog, square_with_tail), prog)
    assert start in report.ambiguous
    assert not report.disjoint and not report.ok
    # v1 leaving first keeps v3; v5 joining first lets v3 leave instead
    holding = {c.supremum for c in report.classes if start in c}
    assert holding == {S("OUT,OUT,IN,OUT,IN"), S("IN,OUT,OUT,OUT,IN")}
    assert report.exhaustive and report.suprema_optimal


def _components_within_two_hops(g):
    view = g.networkx_view()
    return all(nx.diameter(view.subgraph(c)) <= 2 for c in nx.connected_components(view))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("seed", range(15))
def test_random_small_graphs_partition(n, seed):
    g = random_graph(n, min(n - 1 + seed % n, n * (n - 1) // 2), seed=seed)
    prog = mds_program()
    report = verify_partition(explore(prog, g), prog)
    assert report.exhaustive and report.suprema_optimal
    assert not report.revisit_violations and not report.divergent
    assert report.disjoint == (not report.ambiguous)
    for s in report.ambiguous:
        assert sum(1 for c in report.classes if s in c) >= 2
    if _components_within_two_hops(g):
        assert report.disjoint  # one enabled node per component at a time


# --- Rank ---------------------------------------------------------------

def test_colouring_rank_can_rise():
    # v6 recolouring frees colour 1 around v1, which has four neighbours.
    g = Graph(6, [(0, 1), (0, 2), (0, 3), (0, 5), (4, 5)])
    prog = gc_program()
    start, after = (2, 3, 3, 3, 1, 1), (2, 3, 3, 3, 1, 3)
    assert prog.enabled_moves(g, start) == {5: {5: 3}}
    assert rank(start, prog, g) == 18
    assert rank(after, prog, g) == 19
    trace = run(prog, g, start)
    assert rank_violations(trace, prog, g)[0] == (start, after)
    assert prog.optimal(g, trace.final_state)


def test_cover_rank_flat_on_done_only_moves(two_stars):
    prog = vc_program()
    trace = run(prog, two_stars, prog.initial_state(two_stars))
    flat = rank_violations(trace, prog, two_stars)
    assert len(flat) == 4  # v1, v3, v5 and v6 only set done
    assert all(members(a) == members(b) for a, b in flat)
    assert all(rank(a, prog, two_stars) == rank(b, prog, two_stars) for a, b in flat)
