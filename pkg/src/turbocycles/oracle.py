"""Brute-force cycle enumeration used to cross-check the pruned census.

Deliberately naive: every simple closed walk is generated (rooted at its
smallest vertex, with no distance pruning), reduced to a canonical vertex
tuple, and deduplicated through a set. Only usable on graphs with a few
dozen nodes.
"""

from __future__ import annotations

from .graphs import LdpcGraph, TurboGraph


def canonical_cycle(cycle: tuple[int, ...]) -> tuple[int, ...]:
    """Rotate ``cycle`` to start at its minimum vertex and orient it so the second vertex is smaller than the last."""
    i = cycle.index(min(cycle))
    rot = cycle[i:] + cycle[:i]
    if rot[1] > rot[-1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot


def enumerate_simple_cycles(graph: TurboGraph | LdpcGraph, max_edges: int) -> set[tuple[int, ...]]:
    """All simple cycles with at most ``max_edges`` edges, as canonical vertex tuples."""
    adj = graph.adjacency
    found: set[tuple[int, ...]] = set()
    for root in range(graph.num_nodes):
        stack = [(root, (root,))]
        while stack:
            v, path = stack.pop()
            for u in adj[v]:
                if u == root and len(path) >= 3:
                    found.add(canonical_cycle(path))
                elif u > root and u not in path and len(path) < max_edges:
                    stack.append((u, path + (u,)))
    return found


def cycle_length(graph, cycle: tuple[int, ...], include_u: bool = False) -> int:
    if not include_u:
        return len(cycle)
    n = graph.n
    cross = sum(1 for a, b in zip(cycle, cycle[1:] + cycle[:1]) if (a < n) != (b < n))
    return len(cycle) + cross


def brute_force_node_counts(graph, k_max: int, include_u: bool = False) -> dict[int, dict[int, int]]:
    """``{flat node index: {k: count}}`` over every node, from full enumeration."""
    counts: dict[int, dict[int, int]] = {v: {} for v in range(graph.num_nodes)}
    for cycle in enumerate_simple_cycles(graph, k_max):
        k = cycle_length(graph, cycle, include_u)
        if k > k_max:
            continue
        for v in cycle:
            counts[v][k] = counts[v].get(k, 0) + 1
    return counts
