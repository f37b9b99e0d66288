"""Exhaustive counting of bounded-length simple cycles through a start node.

Chain-edge directions play no role: cycles are counted in the undirected
graph. The search is a depth-first walk from the start node that closes a
cycle whenever it steps back onto the start with at least three edges used.
Every cycle is met twice, once per traversal direction; only the traversal
whose second vertex has a smaller index than its last vertex is kept.

The walk is pruned with exact shortest-path distances back to the start,
computed once per start node over a ball of radius ``ceil(k_max / 2)``: a
partial path of length ``L`` ending at ``u`` is abandoned when
``dist(u, start) > k_max - L``. Nodes outside the ball can never satisfy the
bound, so the pruning is exact. On turbo graphs this cuts the per-node work
from order ``2**k_max`` to roughly ``2**(k_max/2)``.

With ``include_u=True`` (turbo graphs only) cross edges have length 2, which
is the cycle length in the decoding graph that keeps the information nodes.
"""

from __future__ import annotations

import csv
import heapq
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

from .errors import InvalidParameterError
from .graphs import LdpcGraph, TurboGraph

__all__ = [
    "CycleCensus",
    "count_cycles_at_node",
    "count_cycles_with_u_nodes",
    "min_cycle_length_at_node",
    "census",
    "cycle_counts_by_index",
    "census_rows",
    "write_census_csv",
    "write_summary_csv",
    "read_census_csv",
]

Graph = TurboGraph | LdpcGraph


def _distance_ball(wadj, start: int, radius: int) -> dict[int, int]:
    dist = {start: 0}
    heap = [(0, start)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for u, w in wadj[v]:
            nd = d + w
            if nd <= radius and nd < dist.get(u, radius + 1):
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def _walk(wadj, start: int, k_max: int) -> tuple[list[int], list[int]]:
    """Return ``(counts, raw)`` indexed by cycle length; ``raw`` counts both directions."""
    counts = [0] * (k_max + 1)
    raw = [0] * (k_max + 1)
    dist = _distance_ball(wadj, start, (k_max + 1) // 2)
    on_path = {start}

    def extend(v: int, length: int, edges: int, second: int) -> None:
        for u, w in wadj[v]:
            total = length + w
            if u == start:
                if edges >= 2 and total <= k_max:
                    raw[total] += 1
                    if second < v:
                        counts[total] += 1
                continue
            if u in on_path:
                continue
            du = dist.get(u)
            if du is None or du > k_max - total:
                continue
            on_path.add(u)
            extend(u, total, edges + 1, second)
            on_path.discard(u)

    for s, w in wadj[start]:
        du = dist.get(s)
        if du is None or du > k_max - w:
            continue
        on_path.add(s)
        extend(s, w, 1, s)
        on_path.discard(s)
    return counts, raw


def _check_k_max(k_max: int) -> None:
    if k_max < 3:
        raise InvalidParameterError(f"k_max must be >= 3, got {k_max}")


def _wadj(graph: Graph, include_u: bool):
    if include_u and not isinstance(graph, TurboGraph):
        raise InvalidParameterError("U-node counting applies to turbo graphs only")
    return graph.weighted_adjacency(include_u)


def cycle_counts_by_index(graph: Graph, idx: int, k_max: int, include_u: bool = False,
                          raw: bool = False) -> list[int]:
    """Dense count list ``c[k]`` for ``k = 0..k_max`` at flat node index ``idx``.

    ``raw=True`` returns the direction-doubled traversal counts instead.
    """
    _check_k_max(k_max)
    counts, doubled = _walk(_wadj(graph, include_u), idx, k_max)
    return doubled if raw else counts


def _sparse(counts: Sequence[int]) -> dict[int, int]:
    return {k: c for k, c in enumerate(counts) if c}


def count_cycles_at_node(graph: Graph, node, k_max: int) -> dict[int, int]:
    """Number of simple cycles of each length ``k <= k_max`` through ``node``.

    Only lengths with a nonzero count appear in the result.

    >>> from turbocycles.graphs import Permutation, build_turbo_graph
    >>> count_cycles_at_node(build_turbo_graph(Permutation.identity(2)), (0, 0), 4)
    {4: 1}
    """
    idx = graph.node_index(node)
    return _sparse(cycle_counts_by_index(graph, idx, k_max))


def count_cycles_with_u_nodes(graph: TurboGraph, node, k_max: int) -> dict[int, int]:
    """Like :func:`count_cycles_at_node`, but each cross edge counts as two edges."""
    idx = graph.node_index(node)
    return _sparse(cycle_counts_by_index(graph, idx, k_max, include_u=True))


def min_cycle_length_at_node(graph: Graph, node, k_max: int, include_u: bool = False) -> int | None:
    idx = graph.node_index(node)
    counts = cycle_counts_by_index(graph, idx, k_max, include_u=include_u)
    return next((k for k, c in enumerate(counts) if c), None)


@dataclass
class CycleCensus:
    """Per-node cycle counts for a sample of start nodes.

    ``per_node`` maps each sampled node label to a sparse ``{k: count}`` dict.
    """

    k_max: int
    per_node: dict = field(default_factory=dict)
    node_sample: list = field(default_factory=list)
    include_u: bool = False

    @property
    def sample_size(self) -> int:
        return len(self.per_node)

    def min_lengths(self) -> dict:
        return {node: min(counts) if counts else None for node, counts in self.per_node.items()}

    def frac_no_cycle_leq(self, k: int) -> float:
        """Fraction of sampled nodes lying on no simple cycle of length ``<= k``."""
        free = sum(1 for counts in self.per_node.values() if not any(j <= k for j in counts))
        return free / self.sample_size

    def totals(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for counts in self.per_node.values():
            for k, c in counts.items():
                out[k] = out.get(k, 0) + c
        return dict(sorted(out.items()))


def _census_chunk(args) -> list[tuple[int, dict[int, int]]]:
    graph, indices, k_max, include_u = args
    wadj = graph.weighted_adjacency(include_u)
    return [(idx, _sparse(_walk(wadj, idx, k_max)[0])) for idx in indices]


def census(graph: Graph, node_sample: Iterable, k_max: int, include_u: bool = False,
           workers: int = 1) -> CycleCensus:
    """Count cycles up to ``k_max`` at every node of ``node_sample``.

    The result is keyed by node label, so neither sample order nor the
    number of worker processes affects it.
    """
    _check_k_max(k_max)
    sample = list(node_sample)
    if not sample:
        raise InvalidParameterError("node sample is empty")
    indices = [graph.node_index(node) for node in sample]
    if len(set(indices)) != len(indices):
        raise InvalidParameterError("node sample contains duplicates")
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    _wadj(graph, include_u)
    ordered = sorted(indices)
    if workers == 1:
        results = _census_chunk((graph, ordered, k_max, include_u))
    else:
        chunks = [ordered[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_census_chunk, [(graph, c, k_max, include_u) for c in chunks if c])
            results = sorted((item for part in parts for item in part), key=lambda t: t[0])
    per_node = {graph.node_label(idx): counts for idx, counts in results}
    return CycleCensus(k_max, per_node, [graph.node_label(i) for i in indices], include_u)


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def write_census_csv(rows: Iterable[tuple[str, dict[int, int]]], k_max: int, fh: TextIO) -> None:
    """Write ``node_id,k,count`` rows, one per node and every ``k`` in ``1..k_max``."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["node_id", "k", "count"])
    for node_id, counts in rows:
        for k in range(1, k_max + 1):
            writer.writerow([node_id, k, counts.get(k, 0)])


def write_summary_csv(per_node: Sequence[dict[int, int]], k_max: int, fh: TextIO) -> None:
    """Write ``k,frac_nodes_no_cycle_leq_k,sample_size`` for ``k`` in ``1..k_max``."""
    size = len(per_node)
    mins = [min(c) if c else k_max + 1 for c in per_node]
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["k", "frac_nodes_no_cycle_leq_k", "sample_size"])
    for k in range(1, k_max + 1):
        free = sum(1 for m in mins if m > k)
        writer.writerow([k, f"{free / size:.6f}", size])


def census_rows(graph: Graph, result: CycleCensus,
                node_id: Callable[[int], str] | None = None) -> list[tuple[str, dict[int, int]]]:
    fmt = node_id or graph.format_node
    return [(fmt(graph.node_index(label)), counts) for label, counts in result.per_node.items()]


def read_census_csv(path: str | os.PathLike) -> tuple[dict[str, dict[int, int]], int]:
    """Read a census CSV back into ``({node_id: {k: count}}, k_max)``."""
    per_node: dict[str, dict[int, int]] = {}
    k_max = 0
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["node_id", "k", "count"]:
            raise InvalidParameterError(f"{path}: expected header node_id,k,count")
        for row in reader:
            try:
                k, count = int(row["k"]), int(row["count"])
            except (TypeError, ValueError):
                raise InvalidParameterError(f"{path}: malformed row {row}") from None
            counts = per_node.setdefault(row["node_id"], {})
            if count:
                counts[k] = count
            k_max = max(k_max, k)
    if not per_node:
        raise InvalidParameterError(f"{path}: no census rows")
    return per_node, k_max
