"""Seeded Monte Carlo runs: graph ensembles, node censuses, reports.

Graph ``i`` of an experiment is generated from seed ``base_seed + i``. The
start nodes of graph ``i`` are drawn without replacement from a separate
stream, ``numpy.random.SeedSequence(base_seed + i, spawn_key=(1,))``, so the
node sample never shares random numbers with graph construction. Results are
merged by graph index, never by completion order, which makes a report a
pure function of its config whatever the worker count.
"""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Sequence, TextIO

import numpy as np

from . import __version__
from .census import cycle_counts_by_index
from .errors import InvalidParameterError
from .estimator import (
    TheoryCurve,
    ldpc_prob_no_cycle_leq,
    prob_no_cycle_leq,
    prob_no_cycle_leq_with_u,
)
from .graphs import (
    SEED_LIMIT,
    build_ldpc_graph,
    build_turbo_graph,
    gen_random_permutation,
    gen_s_random_permutation,
)

__all__ = [
    "ExperimentConfig",
    "SimulationReport",
    "DESK_SCALE",
    "full_scale_config",
    "estimate_sigma",
    "run_simulation",
    "report_from_counts",
    "independence_report",
    "independence_from_counts",
    "compare_report",
    "format_report",
    "parse_report",
    "format_independence",
    "format_comparison",
]

log = logging.getLogger(__name__)

FAMILIES = ("turbo-random", "turbo-srandom", "ldpc")


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "turbo-random"
    n: int = 2000
    s: int = 0
    dv: int = 3
    dc: int = 5
    graphs: int = 50
    nodes: int = 40
    kmax: int = 14
    seed: int = 1
    include_u: bool = False
    # "all" samples every node; "variable" restricts LDPC start nodes to variables
    ldpc_nodes: str = "all"
    max_restarts: int = 1000
    out: str | None = None
    census_out: str | None = None
    independence_out: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameterError(f"family must be one of {', '.join(FAMILIES)}, got {self.family!r}")
        if self.n < 1 or self.graphs < 1 or self.nodes < 1:
            raise InvalidParameterError("n, graphs and nodes must all be >= 1")
        if not 4 <= self.kmax <= 64:
            raise InvalidParameterError(f"kmax must lie in 4..64, got {self.kmax}")
        if not 0 <= self.seed or self.seed + self.graphs > SEED_LIMIT:
            raise InvalidParameterError("seed range must stay inside [0, 2**64)")
        if self.family == "turbo-srandom" and self.s < 1:
            raise InvalidParameterError("turbo-srandom needs s >= 1")
        if self.include_u and self.family == "ldpc":
            raise InvalidParameterError("include_u applies to turbo families only")
        if self.ldpc_nodes not in ("all", "variable"):
            raise InvalidParameterError(f"ldpc_nodes must be 'all' or 'variable', got {self.ldpc_nodes!r}")
        if self.family == "ldpc" and (self.n * self.dv) % self.dc:
            raise InvalidParameterError(f"dc={self.dc} does not divide n*dv={self.n * self.dv}")
        if self.nodes > self.candidate_count:
            raise InvalidParameterError(f"cannot sample {self.nodes} distinct nodes from {self.candidate_count}")

    @property
    def is_ldpc(self) -> bool:
        return self.family == "ldpc"

    @property
    def candidate_count(self) -> int:
        if not self.is_ldpc:
            return 2 * self.n
        if self.ldpc_nodes == "variable":
            return self.n
        return self.n + self.n * self.dv // self.dc

    @property
    def sample_size(self) -> int:
        return self.graphs * self.nodes

    def graph_seed(self, i: int) -> int:
        return self.seed + i

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """Parse a flat ``key=value`` file; ``#`` starts a comment."""
        kinds = {f.name: f.type for f in fields(cls)}
        values: dict[str, object] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip().lower(), value.strip()
            if not sep or key not in kinds:
                raise InvalidParameterError(f"config line {lineno}: unrecognized entry {raw!r}")
            kind = str(kinds[key])
            try:
                if kind.startswith("bool"):
                    if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                        raise ValueError(value)
                    values[key] = value.lower() in ("true", "1", "yes")
                elif kind.startswith("int"):
                    values[key] = int(value)
                else:
                    values[key] = value or None
            except ValueError:
                raise InvalidParameterError(f"config line {lineno}: bad value for {key}: {value!r}") from None
        return cls(**values)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_text(fh.read())

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if value is None:
                continue
            if isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    def echo(self) -> str:
        """One-line description of the fields that determine results."""
        keys = ["family", "n", "s", "dv", "dc", "graphs", "nodes", "kmax", "seed", "include_u", "ldpc_nodes"]
        if not self.is_ldpc:
            keys.remove("ldpc_nodes")
            keys.remove("dv")
            keys.remove("dc")
        d = asdict(self)
        return " ".join(f"{k}={str(d[k]).lower() if isinstance(d[k], bool) else d[k]}" for k in keys)


DESK_SCALE = ExperimentConfig()


def full_scale_config(base: ExperimentConfig) -> ExperimentConfig:
    """The 200-graph x 100-node protocol at n=64000 (turbo) or n=63000 (LDPC); a long batch job."""
    d = asdict(base)
    d.update(graphs=200, nodes=100)
    if base.is_ldpc:
        d.update(n=63000 if base.n < 15000 else base.n, kmax=max(base.kmax, 12))
    else:
        d.update(n=64000, kmax=20)
    return ExperimentConfig(**d)


def estimate_sigma(p_hat: float, N: int) -> float:
    """Binomial standard error ``sqrt(p(1-p)/N)`` of an empirical proportion."""
    if not 0.0 <= p_hat <= 1.0:
        raise InvalidParameterError(f"p_hat must lie in [0, 1], got {p_hat}")
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    return math.sqrt(p_hat * (1.0 - p_hat) / N)


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def _build_graph(config: ExperimentConfig, seed: int):
    if config.family == "turbo-random":
        return build_turbo_graph(gen_random_permutation(config.n, seed), seed=seed, s=0)
    if config.family == "turbo-srandom":
        perm = gen_s_random_permutation(config.n, config.s, seed, max_restarts=config.max_restarts)
        return build_turbo_graph(perm, seed=seed, s=config.s)
    return build_ldpc_graph(config.n, config.dv, config.dc, seed, max_restarts=config.max_restarts)


def _graph_task(args: tuple[ExperimentConfig, int]) -> list[tuple[str, tuple[int, ...]]]:
    config, i = args
    seed = config.graph_seed(i)
    graph = _build_graph(config, seed)
    node_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
    picks = node_rng.choice(config.candidate_count, size=config.nodes, replace=False)
    rows = []
    for idx in sorted(int(p) for p in picks):
        counts = cycle_counts_by_index(graph, idx, config.kmax, include_u=config.include_u)
        rows.append((f"{i}/{graph.format_node(idx)}", tuple(counts)))
    return rows


def run_simulation(config: ExperimentConfig, workers: int = 1) -> "SimulationReport":
    """Generate the ensemble, census the sampled nodes, and aggregate.

    ``workers > 1`` spreads graphs over a process pool; results are identical
    for any worker count.
    """
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    started = time.perf_counter()
    tasks = [(config, i) for i in range(config.graphs)]
    if workers == 1:
        per_graph = [_graph_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_graph = list(pool.map(_graph_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    rows = [row for graph_rows in per_graph for row in graph_rows]
    report = report_from_counts(config, rows)
    report.wall_time = time.perf_counter() - started
    log.info("simulated %d nodes in %.1fs", report.sample_size, report.wall_time)
    return report


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class SimulationReport:
    """Aggregated census of one experiment.

    ``p_sim[k]`` is the fraction of sampled nodes on no cycle of length
    ``<= k``; ``free[k]`` the fraction on no cycle of length exactly ``k``;
    ``joint[k]`` the fraction with neither length ``k`` nor the next
    admissible length (``k+1`` for turbo graphs, ``k+2`` for LDPC graphs).
    """

    config: ExperimentConfig
    sample_size: int
    p_sim: dict[int, float]
    sigma: dict[int, float]
    p_theory: dict[int, float] | None = None
    free: dict[int, float] | None = None
    joint: dict[int, float] | None = None
    rows: list[tuple[str, tuple[int, ...]]] | None = None
    wall_time: float | None = None

    @property
    def k_values(self) -> list[int]:
        return sorted(self.p_sim)

    def sigma_theory(self, k: int) -> float | None:
        if self.p_theory is None or k not in self.p_theory:
            return None
        return estimate_sigma(min(max(self.p_theory[k], 0.0), 1.0), self.sample_size)

    def graph_seeds(self) -> range:
        return range(self.config.seed, self.config.seed + self.config.graphs)


def _theory_values(config: ExperimentConfig, ks: Sequence[int]) -> dict[int, float] | None:
    if config.n <= max(ks):
        return None
    if config.is_ldpc:
        w = config.n * config.dv // config.dc
        if w <= max(ks) // 2:
            return None
        return {k: ldpc_prob_no_cycle_leq(config.n, config.dv, config.dc, k) for k in ks}
    fn = prob_no_cycle_leq_with_u if config.include_u else prob_no_cycle_leq
    return {k: fn(config.n, k) for k in ks}


def _event_tables(rows, kmax: int, step: int) -> tuple[dict[int, float], dict[int, float]]:
    N = len(rows)

    def zero(counts, k):
        return k >= len(counts) or counts[k] == 0

    free = {k: sum(1 for _, c in rows if zero(c, k)) / N for k in range(1, kmax + 1)}
    joint = {
        k: sum(1 for _, c in rows if zero(c, k) and zero(c, k + step)) / N
        for k in range(1, kmax - step + 1)
    }
    return free, joint


def report_from_counts(config: ExperimentConfig, rows: list[tuple[str, Sequence[int]]]) -> SimulationReport:
    """Aggregate dense per-node counts (index ``k`` = cycles of length ``k``)."""
    if not rows:
        raise InvalidParameterError("no census rows to aggregate")
    kmax = config.kmax
    N = len(rows)
    mins = []
    for _, counts in rows:
        mins.append(next((k for k in range(1, min(len(counts), kmax + 1)) if counts[k]), kmax + 1))
    ks = list(range(4, kmax + 1))
    p_sim = {k: sum(1 for m in mins if m > k) / N for k in ks}
    sigma = {k: estimate_sigma(p, N) for k, p in p_sim.items()}
    free, joint = _event_tables(rows, kmax, 2 if config.is_ldpc else 1)
    return SimulationReport(
        config=config,
        sample_size=N,
        p_sim=p_sim,
        sigma=sigma,
        p_theory=_theory_values(config, ks),
        free=free,
        joint=joint,
        rows=[(name, tuple(c)) for name, c in rows],
    )


def _independence_rows(free, joint, kmax: int, ldpc: bool) -> list[tuple[int, float, float, float]]:
    out = []
    if ldpc:
        for r in range(1, kmax // 2):
            a, b = 2 * r, 2 * r + 2
            prod = free[a] * free[b]
            out.append((r, prod, joint[a], prod - joint[a]))
    else:
        for k in range(1, kmax):
            prod = free[k] * free[k + 1]
            out.append((k, prod, joint[k], prod - joint[k]))
    return out


def independence_report(report: SimulationReport) -> list[tuple[int, float, float, float]]:
    """Rows ``(k, P(no k) * P(no next), P(no k, no next), difference)``.

    Turbo rows run over ``k = 1..kmax-1`` comparing lengths ``k`` and ``k+1``.
    LDPC rows use a half-length index ``r = 1..kmax/2 - 1`` comparing lengths
    ``2r`` and ``2r+2``.
    """
    if report.free is None or report.joint is None:
        raise InvalidParameterError("report carries no joint-event table")
    return _independence_rows(report.free, report.joint, report.config.kmax, report.config.is_ldpc)


def independence_from_counts(rows: list[tuple[str, Sequence[int]]], kmax: int,
                             ldpc: bool) -> list[tuple[int, float, float, float]]:
    """Independence rows straight from dense per-node counts (e.g. a census CSV)."""
    if not rows:
        raise InvalidParameterError("no census rows")
    free, joint = _event_tables(rows, kmax, 2 if ldpc else 1)
    return _independence_rows(free, joint, kmax, ldpc)


def compare_report(sim: SimulationReport, theory: TheoryCurve) -> list[tuple[int, float, float, float, float]]:
    """Rows ``(k, P_simulation, P_theoretical, difference, sigma)`` over the shared k range."""
    if sim.k_values != sorted(theory.values):
        raise InvalidParameterError(
            f"k ranges differ: simulation {sim.k_values[0]}..{sim.k_values[-1]}, "
            f"theory {min(theory.values)}..{max(theory.values)}"
        )
    return [
        (k, sim.p_sim[k], theory.values[k], sim.p_sim[k] - theory.values[k], sim.sigma[k])
        for k in sim.k_values
    ]


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

REPORT_COLUMNS = "k,p_sim,sigma,p_theory,diff,sigma_theory"


def _f6(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def format_report(report: SimulationReport, timing: bool = True) -> str:
    """Report CSV with a ``#`` metadata header.

    ``sigma`` uses the simulated proportion; ``sigma_theory`` plugs in the
    theoretical one instead. Only the ``wall_time_s`` line depends on the
    machine; ``timing=False`` drops it.
    """
    cfg = report.config
    seeds = report.graph_seeds()
    lines = [
        "# turbocycles simulation report",
        f"# version={__version__}",
        f"# config: {cfg.echo()}",
        f"# sample_size={report.sample_size}",
        f"# graph_seeds={seeds.start}..{seeds.stop - 1}",
        "# node_sampling=without-replacement stream=SeedSequence(graph_seed,spawn_key=(1,))",
    ]
    if timing and report.wall_time is not None:
        lines.append(f"# wall_time_s={report.wall_time:.3f}")
    lines.append(REPORT_COLUMNS)
    for k in report.k_values:
        p = report.p_sim[k]
        pt = None if report.p_theory is None else report.p_theory.get(k)
        diff = None if pt is None else p - pt
        lines.append(f"{k},{_f6(p)},{_f6(report.sigma[k])},{_f6(pt)},{_f6(diff)},{_f6(report.sigma_theory(k))}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> SimulationReport:
    """Read a report CSV back (marginal columns only; no joint-event table)."""
    config = None
    N = None
    p_sim: dict[int, float] = {}
    sigma: dict[int, float] = {}
    p_theory: dict[int, float] = {}
    header_seen = False
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("config:"):
                pairs = body[len("config:"):].split()
                config = ExperimentConfig.from_text("\n".join(pairs))
            elif body.startswith("sample_size="):
                N = int(body.split("=", 1)[1])
            continue
        if not line.strip():
            continue
        if not header_seen:
            if line.strip() != REPORT_COLUMNS:
                raise InvalidParameterError(f"expected report header {REPORT_COLUMNS!r}")
            header_seen = True
            continue
        cells = line.split(",")
        try:
            k = int(cells[0])
            p_sim[k] = float(cells[1])
            sigma[k] = float(cells[2])
            if cells[3]:
                p_theory[k] = float(cells[3])
        except (IndexError, ValueError):
            raise InvalidParameterError(f"malformed report row {line!r}") from None
    if config is None or N is None or not p_sim:
        raise InvalidParameterError("report is missing its config, sample size or rows")
    return SimulationReport(config, N, p_sim, sigma, p_theory or None)


def format_independence(rows: list[tuple[int, float, float, float]]) -> str:
    out = ["k,product,joint,diff"]
    out += [f"{k},{prod:.6f},{joint:.6f},{diff:.6f}" for k, prod, joint, diff in rows]
    return "\n".join(out) + "\n"


def format_comparison(rows: list[tuple[int, float, float, float, float]]) -> str:
    out = ["k,p_simulation,p_theoretical,difference,sigma"]
    out += [f"{k},{ps:.6f},{pt:.6f},{d:.6f},{s:.6f}" for k, ps, pt, d, s in rows]
    return "\n".join(out) + "\n"


def write_text(text: str, path: str | os.PathLike | None, fallback: TextIO) -> None:
    if path is None or str(path) == "-":
        fallback.write(text)
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
