"""Synthetic benchmark graphs with planted communities.

Simplified stand-in for the usual power-law benchmark family: node degrees
follow a truncated power law rescaled to a target mean, community sizes are
uniform in a declared range (no overlap, no power-law sizes), and stubs are
wired by configuration-model matching inside and across communities. The
realized mixing and mean degree are always recomputed from the final edge
set rather than echoed from the request.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from . import metrics
from .graph import Graph
from .propagation import Labeling, PropagationConfig, run

_MATCH_ROUNDS = 100
_SWAP_ATTEMPTS = 50
_SIZE_ATTEMPTS = 1000


class GenerationError(ValueError):
    """Raised when a benchmark spec cannot be realized."""


@dataclass(frozen=True)
class BenchmarkSpec:
    """Parameters of one synthetic graph with planted communities.

    ``mu`` is the requested fraction of each node's edges that leave its
    community. ``degree_exponent`` shapes the power-law degree draw on
    [2, max_degree] before rescaling to ``mean_degree``.
    """

    num_nodes: int
    mean_degree: float
    max_degree: int
    mu: float
    community_size_range: tuple[int, int] = (20, 100)
    degree_exponent: float = 2.5
    seed: int = 0

    def __post_init__(self):
        if self.num_nodes < 4:
            raise GenerationError("num_nodes must be at least 4")
        if not 0.0 <= self.mu < 1.0:
            raise GenerationError(f"mu must lie in [0, 1), got {self.mu}")
        if self.mean_degree > self.max_degree:
            raise GenerationError(
                f"mean degree {self.mean_degree} exceeds max degree {self.max_degree}")
        if self.mean_degree < 2:
            raise GenerationError("mean degree below the minimum degree of 2")
        lo, hi = self.community_size_range
        if lo < 2 or lo > hi:
            raise GenerationError(f"invalid community size range ({lo}, {hi})")
        if lo > self.num_nodes:
            raise GenerationError("minimum community size exceeds the node count")


@dataclass(frozen=True, eq=False)
class PlantedGraph:
    """A generated graph, its planted partition, and honest realized stats."""

    graph: Graph
    ground_truth: Labeling
    realized_mu: float
    realized_mean_degree: float
    dropped_internal_stubs: int = 0
    dropped_external_stubs: int = 0


def _power_law_degrees(rng: np.random.Generator, n: int, exponent: float,
                       d_max: int, target_mean: float) -> np.ndarray:
    """Truncated power-law sample on [2, d_max], rescaled to the target mean."""
    d_min = 2.0
    a = 1.0 - exponent
    u = rng.random(n)
    if abs(a) < 1e-12:
        raw = d_min * (d_max / d_min) ** u
    else:
        raw = (u * (d_max ** a - d_min ** a) + d_min ** a) ** (1.0 / a)

    def mean_at(scale: float) -> tuple[float, np.ndarray]:
        degs = np.clip(np.floor(scale * raw + 0.5), 2, d_max).astype(np.int64)
        return float(degs.mean()), degs

    lo, hi = 1e-6, float(d_max)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        m, _ = mean_at(mid)
        if m < target_mean:
            lo = mid
        else:
            hi = mid
    _, degs = mean_at(0.5 * (lo + hi))
    return degs


def _draw_sizes(rng: np.random.Generator, n: int, lo: int, hi: int) -> np.ndarray:
    """Uniform community sizes in [lo, hi] tiling n exactly."""
    for _ in range(_SIZE_ATTEMPTS):
        sizes: list[int] = []
        total = 0
        while total < n:
            s = int(rng.integers(lo, hi + 1))
            if total + s > n:
                remainder = n - total
                if remainder >= lo:
                    sizes.append(remainder)
                    total = n
                else:
                    break  # cannot clip the last size into range; redraw
            else:
                sizes.append(s)
                total += s
        if total == n and len(sizes) >= 1:
            return np.asarray(sizes, dtype=np.int64)
    raise GenerationError(
        f"could not tile {n} nodes with community sizes in [{lo}, {hi}]")


def _match_stubs(rng: np.random.Generator, owners: np.ndarray,
                 community_of: np.ndarray | None) -> tuple[list[tuple[int, int]], int]:
    """Configuration-model matching of a stub pool.

    Pairs stubs by repeated shuffling, rejecting self-loops, duplicate edges
    and (when ``community_of`` is given) pairs inside one community. Stuck
    leftovers are then absorbed by degree-preserving swaps with already
    accepted edges (dense pools stall pure rejection well before they are
    actually unrealizable). Whatever survives both phases is dropped.
    """

    def ok(u: int, v: int) -> bool:
        if u == v or (min(u, v), max(u, v)) in seen:
            return False
        return community_of is None or community_of[u] != community_of[v]

    pool = owners.copy()
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for _ in range(_MATCH_ROUNDS):
        if pool.size < 2:
            break
        rng.shuffle(pool)
        leftover: list[int] = []
        if pool.size % 2:
            leftover.append(int(pool[-1]))
        made_progress = False
        for i in range(0, pool.size - 1, 2):
            u, v = int(pool[i]), int(pool[i + 1])
            if not ok(u, v):
                leftover.append(u)
                leftover.append(v)
                continue
            seen.add((min(u, v), max(u, v)))
            edges.append((min(u, v), max(u, v)))
            made_progress = True
        pool = np.asarray(leftover, dtype=np.int64)
        if not made_progress:
            break

    # Swap repair: pull a random accepted edge (x, y), rewire to (u, x) and
    # (v, y); degrees are preserved and two stuck stubs get absorbed.
    survivors: list[int] = []
    stubs = list(pool)
    while len(stubs) >= 2:
        v = stubs.pop()
        u = stubs.pop()
        absorbed = False
        for _ in range(_SWAP_ATTEMPTS):
            if not edges:
                break
            j = int(rng.integers(len(edges)))
            x, y = edges[j]
            for a, b in ((x, y), (y, x)):
                first = (min(u, a), max(u, a))
                second = (min(v, b), max(v, b))
                if first != second and ok(u, a) and ok(v, b):
                    seen.discard((x, y))
                    seen.add(first)
                    seen.add(second)
                    edges[j] = first
                    edges.append(second)
                    absorbed = True
                    break
            if absorbed:
                break
        if not absorbed:
            survivors.extend((u, v))
    survivors.extend(stubs)
    return edges, len(survivors)


def generate(spec: BenchmarkSpec) -> PlantedGraph:
    """Realize the spec into a graph plus its planted partition.

    Each node gets ``round(mu * degree)`` external stubs and the rest
    internal; internal stubs beyond what a simple graph inside the community
    can host (size - 1 per node) are dropped, as are stubs the bounded
    matching retries cannot reconcile. Identical specs (seed included)
    produce identical graphs.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.num_nodes
    degrees = _power_law_degrees(rng, n, spec.degree_exponent,
                                 spec.max_degree, spec.mean_degree)
    sizes = _draw_sizes(rng, n, *spec.community_size_range)

    external = np.floor(spec.mu * degrees + 0.5).astype(np.int64)
    internal = degrees - external

    # Seat nodes into communities that can host their internal degree
    # (a simple subgraph on s nodes caps internal degree at s - 1). Nodes
    # are placed in descending internal order into a random free seat of an
    # eligible community; when none fits, the roomiest community takes the
    # node and the excess stubs are dropped.
    community_of = np.empty(n, dtype=np.int64)
    slots = sizes.copy()
    dropped_internal = 0
    order = rng.permutation(n)
    order = order[np.argsort(-internal[order], kind="stable")]
    for v in order:
        open_c = np.flatnonzero(slots > 0)
        fitting = open_c[sizes[open_c] > internal[v]]
        if fitting.size:
            weights = slots[fitting] / slots[fitting].sum()
            c = int(rng.choice(fitting, p=weights))
        else:
            c = int(open_c[np.argmax(sizes[open_c])])
            dropped_internal += int(internal[v] - (sizes[c] - 1))
            internal[v] = sizes[c] - 1
        community_of[v] = c
        slots[c] -= 1
    if dropped_internal > 0.5 * float(internal.sum() + dropped_internal):
        raise GenerationError(
            "internal stubs systematically exceed community capacity; "
            "grow community_size_range or max_degree")

    edges: list[tuple[int, int]] = []
    for c in range(sizes.size):
        members = np.flatnonzero(community_of == c)
        owners = np.repeat(members, internal[members])
        intra, dropped = _match_stubs(rng, owners, community_of=None)
        edges.extend(intra)
        dropped_internal += dropped

    owners = np.repeat(np.arange(n), external)
    inter, dropped_external = _match_stubs(rng, owners, community_of=community_of)
    edges.extend(inter)

    if not edges:
        raise GenerationError("generated graph has no edges")
    graph = Graph.from_edges(np.asarray(edges, dtype=np.int64), num_nodes=n)
    gt = Labeling.from_labels(community_of)
    e0, e1 = graph.edges[:, 0], graph.edges[:, 1]
    crossing = int((community_of[e0] != community_of[e1]).sum())
    return PlantedGraph(
        graph=graph,
        ground_truth=gt,
        realized_mu=crossing / graph.num_edges,
        realized_mean_degree=2.0 * graph.num_edges / n,
        dropped_internal_stubs=dropped_internal,
        dropped_external_stubs=dropped_external,
    )


@dataclass(frozen=True)
class SweepRow:
    mu: float
    seed: int
    algorithm: str
    nmi: float
    modularity: float
    communities: int
    iterations: int
    gt_dissatisfied: int


@dataclass(frozen=True)
class SweepSummaryRow:
    mu: float
    algorithm: str
    runs: int
    mean_nmi: float
    mean_modularity: float
    mean_gt_dissatisfied: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    summary: list[SweepSummaryRow]


def _algorithm_names(algorithms: Sequence[PropagationConfig]) -> list[str]:
    names: list[str] = []
    for cfg in algorithms:
        name = cfg.variant
        if name in names:
            name = f"{name}-{sum(1 for x in names if x.startswith(cfg.variant)) + 1}"
        names.append(name)
    return names


def _run_cell(args) -> list[SweepRow]:
    base, mu, cell_index, algorithms, names = args
    seeds = np.random.SeedSequence((base.seed, cell_index))
    children = seeds.spawn(1 + len(algorithms))
    gen_seed = int(children[0].generate_state(1, np.uint64)[0])
    planted = generate(replace(base, mu=mu, seed=gen_seed))
    g, gt = planted.graph, planted.ground_truth
    gt_dissatisfied = metrics.dissatisfied_count(g, gt)
    rows = []
    for cfg, name, child in zip(algorithms, names, children[1:]):
        run_seed = int(child.generate_state(1, np.uint64)[0])
        labeling, trace = run(g, replace(cfg, seed=run_seed))
        rows.append(SweepRow(
            mu=mu,
            seed=cell_index,
            algorithm=name,
            nmi=metrics.nmi(labeling, gt),
            modularity=metrics.modularity(g, labeling),
            communities=labeling.num_communities,
            iterations=trace.iterations_used,
            gt_dissatisfied=gt_dissatisfied,
        ))
    return rows


def sweep(base: BenchmarkSpec, mu_values: Sequence[float], seeds_per_point: int,
          algorithms: Sequence[PropagationConfig], jobs: int = 1) -> SweepResult:
    """Run every algorithm over a grid of mixing values.

    For each (mu, replicate) a fresh graph is generated from an RNG stream
    derived from (base.seed, cell index), then every algorithm runs on it
    with its own derived seed, so results do not depend on ``jobs`` or
    completion order. Rows report NMI against the planted partition,
    modularity, and the dissatisfaction of the planted partition itself.
    """
    if not mu_values or seeds_per_point < 1 or not algorithms:
        raise GenerationError("sweep needs mu values, seeds and algorithms")
    names = _algorithm_names(algorithms)
    cells = []
    for i, mu in enumerate(mu_values):
        if not 0.0 <= mu < 1.0:
            raise GenerationError(f"mu must lie in [0, 1), got {mu}")
        for j in range(seeds_per_point):
            cells.append((base, float(mu), i * seeds_per_point + j,
                          tuple(algorithms), tuple(names)))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_cell = list(pool.map(_run_cell, cells))
    else:
        per_cell = [_run_cell(cell) for cell in cells]
    rows = [row for cell_rows in per_cell for row in cell_rows]

    summary = []
    for mu in mu_values:
        for name in names:
            hits = [r for r in rows if r.mu == float(mu) and r.algorithm == name]
            summary.append(SweepSummaryRow(
                mu=float(mu),
                algorithm=name,
                runs=len(hits),
                mean_nmi=float(np.mean([r.nmi for r in hits])),
                mean_modularity=float(np.mean([r.modularity for r in hits])),
                mean_gt_dissatisfied=float(np.mean([r.gt_dissatisfied for r in hits])),
            ))
    return SweepResult(rows=rows, summary=summary)


def write_sweep_csv(result: SweepResult, target: str | Path | IO[str]) -> None:
    """Per-cell results as CSV, one row per (mu, seed, algorithm)."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(result, fh)
        return
    target.write("mu,seed,algorithm,nmi,modularity,communities,iterations,gt_dissatisfied\n")
    for r in result.rows:
        target.write(f"{r.mu!r},{r.seed},{r.algorithm},{r.nmi!r},{r.modularity!r},"
                     f"{r.communities},{r.iterations},{r.gt_dissatisfied}\n")


def write_summary_csv(result: SweepResult, target: str | Path | IO[str]) -> None:
    """Per-(mu, algorithm) means as CSV."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_summary_csv(result, fh)
        return
    target.write("mu,algorithm,runs,mean_nmi,mean_modularity,mean_gt_dissatisfied\n")
    for s in result.summary:
        target.write(f"{s.mu!r},{s.algorithm},{s.runs},{s.mean_nmi!r},"
                     f"{s.mean_modularity!r},{s.mean_gt_dissatisfied!r}\n")
