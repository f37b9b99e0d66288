"""Turbo-graph and regular LDPC graph construction.

Every generator is deterministic in its seed. Randomness comes from numpy's
``PCG64`` bit generator (``numpy.random.default_rng``), whose output stream is
fixed across platforms and documented by numpy.

Node indexing is 0-based. A turbo graph with chain length ``n`` has top-chain
nodes ``(0, i)`` and bottom-chain nodes ``(1, i)``; the cross edge of position
``i`` joins ``(0, i)`` to ``(1, f(i))``. An LDPC graph has variable nodes
``("v", j)`` and check nodes ``("c", j)``. Internally both graphs flatten their
nodes to integers (top/variable first), which is what the cycle counter uses.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import ConstructionFailure, InvalidParameterError

__all__ = [
    "Permutation",
    "TurboGraph",
    "LdpcGraph",
    "gen_random_permutation",
    "gen_s_random_permutation",
    "verify_s_property",
    "build_turbo_graph",
    "build_ldpc_graph",
    "format_graph",
    "parse_graph",
    "write_graph",
    "read_graph",
]

SEED_LIMIT = 2**64


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise InvalidParameterError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(_check_seed(seed))


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., n-1}``; ``map[i]`` is the image of ``i``."""

    map: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.map)
        object.__setattr__(self, "map", values)
        if not values:
            raise InvalidParameterError("a permutation needs n >= 1")
        if sorted(values) != list(range(len(values))):
            raise InvalidParameterError("map is not a bijection on 0..n-1")

    @property
    def n(self) -> int:
        return len(self.map)

    def __getitem__(self, i: int) -> int:
        return self.map[i]

    def __len__(self) -> int:
        return len(self.map)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))


NodeLabel = Union[tuple, int]


class _Graph:
    """Shared helpers; subclasses provide ``num_nodes``, ``_neighbors`` and label maps."""

    num_nodes: int

    def node_index(self, node: NodeLabel) -> int:
        if isinstance(node, (int, np.integer)) and not isinstance(node, bool):
            idx = int(node)
            if 0 <= idx < self.num_nodes:
                return idx
            raise InvalidParameterError(f"node index {idx} out of range")
        return self._index_of_label(node)

    def _index_of_label(self, node) -> int:  # pragma: no cover - overridden
        raise NotImplementedError

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(nb) for nb in self._neighbors())

    def weighted_adjacency(self, include_u: bool = False) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Adjacency with edge lengths; all 1 unless ``include_u`` reweights cross edges."""
        if include_u:
            return self._u_adjacency
        return self._unit_adjacency

    @cached_property
    def _unit_adjacency(self):
        return tuple(tuple((u, 1) for u in nb) for nb in self.adjacency)

    @cached_property
    def _u_adjacency(self):
        raise InvalidParameterError("U-node weighting only applies to turbo graphs")

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edge list over flat indices, each edge once with ``u < v``."""
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]


@dataclass(frozen=True, eq=True)
class TurboGraph(_Graph):
    """Two chains of ``n`` nodes joined by the cross edges ``(0,i) -- (1,perm[i])``.

    ``seed`` and ``s`` are provenance metadata (``s = 0`` for a plain random
    permuter) and are written out with the graph.
    """

    perm: Permutation
    seed: int | None = None
    s: int = 0

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def num_nodes(self) -> int:
        return 2 * self.perm.n

    @property
    def chain_edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Directed chain edges ``(c, i) -> (c, i+1)``."""
        return [((c, i), (c, i + 1)) for c in (0, 1) for i in range(self.n - 1)]

    @property
    def cross_edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return [((0, i), (1, f)) for i, f in enumerate(self.perm.map)]

    def _index_of_label(self, node) -> int:
        try:
            chain, i = node
        except (TypeError, ValueError):
            raise InvalidParameterError(f"not a turbo node label: {node!r}") from None
        if chain not in (0, 1) or not 0 <= i < self.n:
            raise InvalidParameterError(f"unknown turbo node {node!r}")
        return chain * self.n + i

    def node_label(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.n)

    def format_node(self, idx: int) -> str:
        chain, i = divmod(idx, self.n)
        return f"{chain}:{i}"

    def is_cross(self, u: int, v: int) -> bool:
        return (u < self.n) != (v < self.n)

    def _neighbors(self):
        n = self.n
        nbrs: list[list[int]] = [[] for _ in range(2 * n)]
        for c in (0, 1):
            base = c * n
            for i in range(n - 1):
                nbrs[base + i].append(base + i + 1)
                nbrs[base + i + 1].append(base + i)
        for i, f in enumerate(self.perm.map):
            nbrs[i].append(n + f)
            nbrs[n + f].append(i)
        return nbrs

    @cached_property
    def _u_adjacency(self):
        n = self.n
        return tuple(
            tuple((u, 2 if (u < n) != (v < n) else 1) for u in nb)
            for v, nb in enumerate(self.adjacency)
        )


@dataclass(frozen=True, eq=True)
class LdpcGraph(_Graph):
    """Regular bipartite graph: ``n`` variables of degree ``d_v``, ``w`` checks of degree ``d_c``."""

    n: int
    w: int
    d_v: int
    d_c: int
    edges_vc: tuple[tuple[int, int], ...] = field(repr=False)
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges_vc", tuple(sorted((int(a), int(b)) for a, b in self.edges_vc)))
        if self.n * self.d_v != self.w * self.d_c:
            raise InvalidParameterError("n*d_v must equal w*d_c")
        if len(set(self.edges_vc)) != len(self.edges_vc):
            raise InvalidParameterError("LDPC graph has parallel edges")
        var_deg = [0] * self.n
        chk_deg = [0] * self.w
        for v, c in self.edges_vc:
            if not (0 <= v < self.n and 0 <= c < self.w):
                raise InvalidParameterError(f"edge ({v}, {c}) out of range")
            var_deg[v] += 1
            chk_deg[c] += 1
        if any(d != self.d_v for d in var_deg) or any(d != self.d_c for d in chk_deg):
            raise InvalidParameterError("LDPC graph is not (d_v, d_c)-regular")

    @property
    def num_nodes(self) -> int:
        return self.n + self.w

    def _index_of_label(self, node) -> int:
        try:
            kind, j = node
        except (TypeError, ValueError):
            raise InvalidParameterError(f"not an LDPC node label: {node!r}") from None
        if kind == "v" and 0 <= j < self.n:
            return j
        if kind == "c" and 0 <= j < self.w:
            return self.n + j
        raise InvalidParameterError(f"unknown LDPC node {node!r}")

    def node_label(self, idx: int) -> tuple[str, int]:
        return ("v", idx) if idx < self.n else ("c", idx - self.n)

    def format_node(self, idx: int) -> str:
        kind, j = self.node_label(idx)
        return f"{kind}:{j}"

    def _neighbors(self):
        nbrs: list[list[int]] = [[] for _ in range(self.n + self.w)]
        for v, c in self.edges_vc:
            nbrs[v].append(self.n + c)
            nbrs[self.n + c].append(v)
        return nbrs


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def gen_random_permutation(n: int, seed: int) -> Permutation:
    """Uniformly random permutation of ``0..n-1``, reproducible from ``seed``."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    return Permutation(tuple(_rng(seed).permutation(n).tolist()))


def verify_s_property(perm: Permutation, S: int) -> bool:
    """True iff ``|i-j| <= S`` implies ``|f(i)-f(j)| >= S`` for all ``i != j``."""
    if S < 1:
        raise InvalidParameterError(f"S must be >= 1, got {S}")
    f = np.asarray(perm.map, dtype=np.int64)
    for d in range(1, min(S, len(f) - 1) + 1):
        if np.any(np.abs(f[d:] - f[:-d]) < S):
            return False
    return True


def gen_s_random_permutation(
    n: int,
    S: int,
    seed: int,
    max_restarts: int = 100,
    max_rejections: int = 1000,
) -> Permutation:
    """Greedy S-random permutation with swap repair and restarts.

    Positions are filled left to right. A candidate is drawn uniformly from
    the values not yet used and rejected if it lies within distance ``S - 1``
    of any of the previous ``S`` placed values. After ``max_rejections``
    consecutive rejections the position is repaired by swapping: an unused
    value is moved into an earlier position whose current value fits here,
    provided both placements respect the constraint. If up to
    ``max_rejections`` random swap proposals fail, the whole construction
    restarts; after ``max_restarts`` failed attempts
    :class:`ConstructionFailure` is raised.

    Plain greedy filling tends to strand a few mutually-close values at the
    end of the sequence; the swap step unblocks those. Construction succeeds
    quickly when ``S < sqrt(n / 2)``; larger ``S`` may still work but is not
    guaranteed. No permutation exists once ``S >= n`` (for ``n > 1``).
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if S < 1:
        raise InvalidParameterError(f"S must be >= 1, got {S}")
    if max_restarts < 1 or max_rejections < 1:
        raise InvalidParameterError("max_restarts and max_rejections must be >= 1")
    rng = _rng(seed)
    for attempt in range(1, max_restarts + 1):
        result = _SRandomFill(n, S, rng, max_rejections).run()
        if result is not None:
            perm = Permutation(tuple(result))
            assert verify_s_property(perm, S)
            return perm
    raise ConstructionFailure(f"no S-random permutation found for n={n}, S={S}", max_restarts)


class _SRandomFill:
    """One construction attempt; ``run`` returns the filled sequence or ``None``."""

    def __init__(self, n: int, S: int, rng: np.random.Generator, max_rejections: int):
        self.n, self.S, self.rng = n, S, rng
        self.max_rejections = max_rejections
        self.buf: list[float] = []
        self.pos = 0

    def uniform_index(self, size: int) -> int:
        if self.pos == len(self.buf):
            self.buf = self.rng.random(4096).tolist()
            self.pos = 0
        u = self.buf[self.pos]
        self.pos += 1
        return int(u * size)

    def fits(self, v: int, placed: list[int], lo: int, hi: int, skip: int = -1) -> bool:
        """``v`` keeps distance ``>= S`` from ``placed[lo:hi]`` (ignoring index ``skip``)."""
        lim = self.S - 1
        for j in range(lo, hi):
            if j != skip and -lim <= v - placed[j] <= lim:
                return False
        return True

    def run(self):
        n, S = self.n, self.S
        remaining = list(range(n))
        placed: list[int] = []
        for i in range(n):
            lo = max(0, i - S)
            for _ in range(self.max_rejections):
                r = self.uniform_index(len(remaining))
                v = remaining[r]
                if self.fits(v, placed, lo, i):
                    remaining[r] = remaining[-1]
                    remaining.pop()
                    placed.append(v)
                    break
            else:
                if not self.swap_repair(placed, remaining, i):
                    return None
        return placed

    def swap_repair(self, placed: list[int], remaining: list[int], i: int) -> bool:
        # earlier slot j is far enough from i that the two windows never overlap
        S = self.S
        if i - S <= 0:
            return False
        lo = max(0, i - S)
        for _ in range(self.max_rejections):
            j = self.uniform_index(i - S)
            r = self.uniform_index(len(remaining))
            v, old = remaining[r], placed[j]
            if self.fits(old, placed, lo, i) and self.fits(v, placed, max(0, j - S), min(i, j + S + 1), skip=j):
                placed[j] = v
                placed.append(old)
                remaining[r] = remaining[-1]
                remaining.pop()
                return True
        return False


def build_turbo_graph(perm: Permutation, seed: int | None = None, s: int = 0) -> TurboGraph:
    """Wrap a permutation as a turbo graph (2n nodes, 2(n-1) chain edges, n cross edges)."""
    return TurboGraph(perm, seed=seed, s=s)


def build_ldpc_graph(n: int, d_v: int, d_c: int, seed: int, max_restarts: int = 1000) -> LdpcGraph:
    """Regular random LDPC graph from the configuration model.

    The ``n*d_v`` variable sockets are matched against a uniformly shuffled
    list of the ``w*d_c`` check sockets. Any matching with a repeated
    (variable, check) pair is discarded and the whole matching redrawn.
    """
    if min(n, d_v, d_c) < 1:
        raise InvalidParameterError("n, d_v and d_c must be positive")
    if (n * d_v) % d_c:
        raise InvalidParameterError(f"d_c={d_c} does not divide n*d_v={n * d_v}")
    if max_restarts < 1:
        raise InvalidParameterError("max_restarts must be >= 1")
    w = n * d_v // d_c
    if d_c > n or d_v > w:
        raise InvalidParameterError(f"no simple ({d_v},{d_c})-regular graph with n={n}, w={w}")
    rng = _rng(seed)
    var_sockets = np.repeat(np.arange(n, dtype=np.int64), d_v)
    chk_sockets = np.repeat(np.arange(w, dtype=np.int64), d_c)
    for _ in range(max_restarts):
        checks = rng.permutation(chk_sockets)
        keys = var_sockets * w + checks
        if np.unique(keys).size == keys.size:
            edges = tuple(zip(var_sockets.tolist(), checks.tolist()))
            return LdpcGraph(n, w, d_v, d_c, edges, seed=int(seed))
    raise ConstructionFailure(f"configuration model kept producing parallel edges (n={n})", max_restarts)


# ---------------------------------------------------------------------------
# Text serialization
# ---------------------------------------------------------------------------


def _seed_text(seed):
    return "none" if seed is None else str(seed)


def format_graph(graph: TurboGraph | LdpcGraph) -> str:
    if isinstance(graph, TurboGraph):
        head = f"turbo n={graph.n} seed={_seed_text(graph.seed)} s={graph.s}\n"
        return head + " ".join(map(str, graph.perm.map)) + "\n"
    if isinstance(graph, LdpcGraph):
        out = io.StringIO()
        out.write(
            f"ldpc n={graph.n} w={graph.w} dv={graph.d_v} dc={graph.d_c} seed={_seed_text(graph.seed)}\n"
        )
        for v, c in graph.edges_vc:
            out.write(f"{v} {c}\n")
        return out.getvalue()
    raise TypeError(f"cannot serialize {type(graph).__name__}")


def _parse_header(line: str) -> tuple[str, dict[str, str]]:
    parts = line.split()
    if not parts:
        raise InvalidParameterError("empty graph file")
    fields = {}
    for token in parts[1:]:
        key, sep, value = token.partition("=")
        if not sep:
            raise InvalidParameterError(f"malformed header field {token!r}")
        fields[key] = value
    return parts[0], fields


def _header_int(fields: dict[str, str], key: str, optional: bool = False):
    if key not in fields:
        raise InvalidParameterError(f"graph header is missing {key}=")
    value = fields[key]
    if optional and value == "none":
        return None
    try:
        return int(value)
    except ValueError:
        raise InvalidParameterError(f"header field {key}={value!r} is not an integer") from None


def parse_graph(text: str) -> TurboGraph | LdpcGraph:
    lines = text.splitlines()
    if not lines:
        raise InvalidParameterError("empty graph file")
    kind, fields = _parse_header(lines[0])
    body = " ".join(lines[1:]).split()
    try:
        numbers = [int(tok) for tok in body]
    except ValueError as exc:
        raise InvalidParameterError(f"non-integer token in graph body: {exc}") from None
    if kind == "turbo":
        n = _header_int(fields, "n")
        if len(numbers) != n:
            raise InvalidParameterError(f"expected {n} permutation entries, found {len(numbers)}")
        return TurboGraph(
            Permutation(tuple(numbers)),
            seed=_header_int(fields, "seed", optional=True),
            s=_header_int(fields, "s"),
        )
    if kind == "ldpc":
        if len(numbers) % 2:
            raise InvalidParameterError("odd number of integers in LDPC edge list")
        edges = tuple(zip(numbers[0::2], numbers[1::2]))
        return LdpcGraph(
            _header_int(fields, "n"),
            _header_int(fields, "w"),
            _header_int(fields, "dv"),
            _header_int(fields, "dc"),
            edges,
            seed=_header_int(fields, "seed", optional=True),
        )
    raise InvalidParameterError(f"unknown graph kind {kind!r}")


def write_graph(graph: TurboGraph | LdpcGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(graph))


def read_graph(path: str | os.PathLike) -> TurboGraph | LdpcGraph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())

