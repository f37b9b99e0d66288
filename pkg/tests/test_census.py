import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from turbocycles.census import (
    census,
    count_cycles_at_node,
    count_cycles_with_u_nodes,
    cycle_counts_by_index,
    min_cycle_length_at_node,
)
from turbocycles.errors import InvalidParameterError
from turbocycles.graphs import (
    Permutation,
    build_ldpc_graph,
    build_turbo_graph,
    gen_random_permutation,
    gen_s_random_permutation,
)
from turbocycles.oracle import brute_force_node_counts, enumerate_simple_cycles

seeds = st.integers(0, 2**32)


def turbo(n, seed):
    return build_turbo_graph(gen_random_permutation(n, seed), seed=seed)


def dfs_all_nodes(graph, k_max, include_u=False):
    return {
        v: {k: c for k, c in enumerate(cycle_counts_by_index(graph, v, k_max, include_u)) if c}
        for v in range(graph.num_nodes)
    }


IDENT2 = build_turbo_graph(Permutation.identity(2))


def test_hand_enumerated_examples():
    assert count_cycles_at_node(IDENT2, (0, 0), 4) == {4: 1}
    assert count_cycles_at_node(IDENT2, (0, 0), 3) == {}
    square = build_ldpc_graph(2, 2, 2, seed=0)
    for node in [("v", 0), ("v", 1), ("c", 0), ("c", 1)]:
        assert count_cycles_at_node(square, node, 6) == {4: 1}


def test_min_cycle_length_examples():
    assert min_cycle_length_at_node(IDENT2, (0, 0), 10) == 4
    assert min_cycle_length_at_node(build_turbo_graph(Permutation.identity(5)), (0, 0), 3) is None


def test_u_node_examples():
    assert count_cycles_with_u_nodes(IDENT2, (0, 0), 6) == {6: 1}
    assert count_cycles_with_u_nodes(IDENT2, (0, 0), 5) == {}


def test_invalid_inputs():
    with pytest.raises(InvalidParameterError):
        count_cycles_at_node(IDENT2, (0, 7), 5)
    with pytest.raises(InvalidParameterError):
        count_cycles_at_node(IDENT2, (0, 0), 2)
    with pytest.raises(InvalidParameterError):
        census(IDENT2, [], 5)
    with pytest.raises(InvalidParameterError):
        census(IDENT2, [(0, 0), (0, 0)], 5)
    with pytest.raises(InvalidParameterError):
        count_cycles_with_u_nodes(build_ldpc_graph(2, 2, 2, seed=0), ("v", 0), 6)


@given(st.integers(2, 12), seeds)
def test_turbo_matches_brute_force(n, seed):
    g = turbo(n, seed)
    assert dfs_all_nodes(g, 2 * n) == brute_force_node_counts(g, 2 * n)


@given(st.sampled_from([(2, 2, 4), (2, 4, 8), (3, 6, 6), (2, 2, 6), (3, 3, 5), (2, 5, 10)]), seeds)
def test_ldpc_matches_brute_force(params, seed):
    dv, dc, n = params
    g = build_ldpc_graph(n, dv, dc, seed)
    k_max = min(2 * n, g.num_nodes)
    assert dfs_all_nodes(g, k_max) == brute_force_node_counts(g, k_max)


@given(st.integers(2, 9), seeds)
def test_u_mode_matches_brute_force(n, seed):
    g = turbo(n, seed)
    k_max = 3 * n
    assert dfs_all_nodes(g, k_max, include_u=True) == brute_force_node_counts(g, k_max, include_u=True)


def test_agrees_with_networkx_simple_cycles():
    g = turbo(9, 314)
    G = nx.Graph()
    G.add_edges_from(g.edges())
    expected = {}
    for cyc in nx.simple_cycles(G, length_bound=12):
        if len(cyc) >= 3:
            for v in cyc:
                expected.setdefault(v, {}).setdefault(len(cyc), 0)
                expected[v][len(cyc)] += 1
    got = {v: c for v, c in dfs_all_nodes(g, 12).items() if c}
    assert got == expected


@given(st.integers(2, 40), seeds, st.integers(3, 14))
def test_raw_count_is_twice_reported(n, seed, k_max):
    g = turbo(n, seed)
    v = seed % g.num_nodes
    raw = cycle_counts_by_index(g, v, k_max, raw=True)
    halved = cycle_counts_by_index(g, v, k_max)
    assert all(r % 2 == 0 for r in raw)
    assert [r // 2 for r in raw] == halved


@given(st.sampled_from([(3, 6, 20), (3, 5, 25), (2, 4, 16)]), seeds)
def test_ldpc_odd_lengths_vanish(params, seed):
    dv, dc, n = params
    g = build_ldpc_graph(n, dv, dc, seed)
    counts = cycle_counts_by_index(g, seed % g.num_nodes, 9)
    assert counts[:4] == [0, 0, 0, 0]
    assert all(counts[k] == 0 for k in range(1, 10, 2))


@given(st.integers(2, 9), seeds)
def test_u_mode_lengths_follow_cross_parity(n, seed):
    # every cycle has an even number of cross edges, so with-U length = k' + m/2*2 and
    # Σ over all lengths agrees with the plain count
    g = turbo(n, seed)
    big = 4 * n
    for v in range(g.num_nodes):
        plain = cycle_counts_by_index(g, v, big)
        with_u = cycle_counts_by_index(g, v, big, include_u=True)
        assert sum(plain) == sum(with_u)
        assert with_u[:6] == [0] * 6


@given(st.integers(2, 40), seeds, st.integers(4, 12))
def test_min_length_event_is_monotone(n, seed, k):
    g = turbo(n, seed)
    node = g.node_label(seed % g.num_nodes)
    a = min_cycle_length_at_node(g, node, k)
    b = min_cycle_length_at_node(g, node, k + 1)
    if a is not None:
        assert b == a


def test_node_totals_equal_k_times_global_count():
    g = turbo(50, 2024)
    k_max = 12
    result = census(g, range(g.num_nodes), k_max)
    totals = result.totals()
    global_counts = {}
    for cyc in enumerate_simple_cycles(g, k_max):
        global_counts[len(cyc)] = global_counts.get(len(cyc), 0) + 1
    assert totals == {k: k * c for k, c in sorted(global_counts.items())}


def test_single_node_census_matches_direct_count():
    g = turbo(30, 5)
    result = census(g, [(1, 7)], 12)
    assert result.per_node == {(1, 7): count_cycles_at_node(g, (1, 7), 12)}
    assert result.sample_size == 1


def test_census_is_order_and_worker_independent():
    g = turbo(200, 77)
    sample = random.Random(0).sample(range(g.num_nodes), 40)
    base = census(g, sample, 12)
    shuffled = list(sample)
    random.Random(1).shuffle(shuffled)
    assert census(g, shuffled, 12).per_node == base.per_node
    assert census(g, sample, 12, workers=3).per_node == base.per_node


def test_s_random_graph_has_no_short_cycles():
    perm = gen_s_random_permutation(500, 5, seed=9)
    g = build_turbo_graph(perm)
    for v in range(g.num_nodes):
        assert min_cycle_length_at_node(g, v, 7) is None


@given(st.integers(1, 8), seeds)
def test_s_random_girth_bound(S, seed):
    # an S-random permuter forbids cycles shorter than min(8, S + 3)
    n = 2 * S * S + 30
    g = build_turbo_graph(gen_s_random_permutation(n, S, seed))
    bound = min(8, S + 3)
    for v in range(0, g.num_nodes, 7):
        shortest = min_cycle_length_at_node(g, v, bound - 1)
        assert shortest is None


def test_census_summary_fraction():
    g = turbo(100, 3)
    result = census(g, range(g.num_nodes), 10)
    mins = [min(c) if c else None for c in result.per_node.values()]
    for k in range(4, 11):
        expected = sum(1 for m in mins if m is None or m > k) / g.num_nodes
        assert result.frac_no_cycle_leq(k) == expected
