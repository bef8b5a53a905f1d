"""Label propagation engine: classic majority voting, strength/preference
weighted voting, and capacity-controlled propagation with annealed tie-breaking."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import _kernels
from .graph import Graph

VARIANTS = ("classic", "leung", "clpa")
MODES = ("async", "sync")
ANNEAL_SCHEDULES = ("linear", "off")

_VARIANT_CODE = {"classic": _kernels.CLASSIC, "leung": _kernels.LEUNG, "clpa": _kernels.CLPA}


class ConfigError(ValueError):
    """Raised for invalid propagation configuration or schedule arguments."""


def capacity(t: int, max_iterations: int, cycles: int, num_nodes: int) -> int:
    """Per-label population ceiling at iteration ``t``.

    Starts at ``ceil(n/k)`` and grows by ``n/k`` every ``T/k`` iterations,
    reaching ``n`` (no constraint) throughout the final cycle. ``cycles`` is
    ``k``, ``max_iterations`` is ``T``.
    """
    if num_nodes < 1:
        raise ConfigError("num_nodes must be positive")
    if cycles < 1:
        raise ConfigError("cycles must be positive")
    if cycles > max_iterations:
        raise ConfigError(f"k exceeds T (k={cycles}, T={max_iterations})")
    if not 0 <= t < max_iterations:
        raise ConfigError(f"iteration {t} outside [0, {max_iterations})")
    phase = (cycles * t) // max_iterations
    cap = ((phase + 1) * num_nodes + cycles - 1) // cycles
    return min(cap, num_nodes)


def anneal_probability(t: int, max_iterations: int) -> float:
    """Linear tie-randomization schedule: 1 at t=0, 0 at the last iteration."""
    if not 0 <= t < max_iterations:
        raise ConfigError(f"iteration {t} outside [0, {max_iterations})")
    if max_iterations == 1:
        return 0.0
    return 1.0 - t / (max_iterations - 1)


@dataclass(frozen=True)
class PropagationConfig:
    """Settings for one propagation run.

    ``max_iterations`` (T) defaults to ``5 * cycles`` for the clpa variant
    and 100 otherwise. ``cycles`` (k), ``anneal`` apply to clpa only;
    ``delta`` and ``pref_exponent`` to leung only. Annealed tie-breaking
    defaults to off: on hub-heavy graphs the prolonged randomization lets
    the largest label absorb its whole capacity allowance every cycle and
    ultimately flood; without it the capped growth holds.
    """

    variant: str = "classic"
    mode: str = "async"
    max_iterations: int | None = None
    cycles: int = 100
    delta: float = 0.1
    pref_exponent: float = 0.1
    anneal: str = "off"
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.anneal not in ANNEAL_SCHEDULES:
            raise ConfigError(f"unknown anneal schedule {self.anneal!r}")
        if self.cycles < 1:
            raise ConfigError("cycles must be positive")
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigError("delta must lie in [0, 1]")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ConfigError("max_iterations must be positive")

    def resolved(self) -> "PropagationConfig":
        """Fill the default iteration budget and check cross-field constraints."""
        t_max = self.max_iterations
        if t_max is None:
            t_max = 5 * self.cycles if self.variant == "clpa" else 100
        cfg = replace(self, max_iterations=t_max)
        if cfg.variant == "clpa" and cfg.cycles > t_max:
            raise ConfigError(f"k exceeds T (k={cfg.cycles}, T={t_max})")
        return cfg


@dataclass(eq=False)
class Labeling:
    """Node-to-label assignment with incrementally maintained populations.

    ``population[l]`` counts the nodes currently holding label ``l``;
    ``strength_of`` is meaningful only for the leung variant (1.0 elsewhere).
    """

    label_of: np.ndarray
    population: np.ndarray
    strength_of: np.ndarray

    @classmethod
    def unique(cls, num_nodes: int) -> "Labeling":
        """Initial state: every node holds its own label at full strength."""
        return cls(
            label_of=np.arange(num_nodes, dtype=np.int64),
            population=np.ones(num_nodes, dtype=np.int64),
            strength_of=np.ones(num_nodes, dtype=np.float64),
        )

    @classmethod
    def from_labels(cls, labels, label_space: int | None = None) -> "Labeling":
        labels = np.asarray(labels, dtype=np.int64)
        if labels.size and labels.min() < 0:
            raise ValueError("labels must be non-negative")
        size = label_space if label_space is not None else int(labels.max()) + 1 if labels.size else 0
        return cls(
            label_of=labels,
            population=np.bincount(labels, minlength=size).astype(np.int64),
            strength_of=np.ones(labels.size, dtype=np.float64),
        )

    @property
    def num_nodes(self) -> int:
        return int(self.label_of.size)

    @property
    def num_communities(self) -> int:
        return int(np.unique(self.label_of).size)


class IterationStats(NamedTuple):
    iteration: int
    changes: int
    distinct_labels: int
    capacity: int


@dataclass
class RunTrace:
    """Per-round observability for a propagation run."""

    iterations_used: int
    converged: bool
    per_iteration: list[IterationStats]


def dense_relabel(labels: np.ndarray) -> np.ndarray:
    """Relabel to dense ids 0..C-1 in order of first occurrence."""
    labels = np.asarray(labels, dtype=np.int64)
    uniq, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(uniq.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(uniq.size)
    return rank[inverse]


def _scratch(g: Graph):
    n = g.num_nodes
    max_deg = int(g.degrees.max()) if n else 0
    return (
        np.zeros(n, dtype=np.int64),               # counts
        np.zeros(n, dtype=np.float64),             # scores
        np.zeros(max(1, max_deg), dtype=np.int64),  # touched
        np.zeros(max(1, max_deg), dtype=np.int64),  # ties
    )


def _degree_preference(g: Graph, exponent: float) -> np.ndarray:
    # isolated nodes never appear as neighbors; keep their base positive
    safe = np.where(g.degrees > 0, g.degrees, 1).astype(np.float64)
    return safe ** exponent


def update_label_classic(g: Graph, lab: Labeling, v: int, rng: np.random.Generator,
                         p: float = 0.0) -> int:
    """Most frequent label among v's neighbors; see the tie rule in the kernel.

    Pure decision: does not modify ``lab``. Isolated nodes keep their label.
    """
    u1, u2 = rng.random(), rng.random()
    counts, score, touched, ties = _scratch(g)
    label, _ = _kernels.decide_one(
        g.indptr, g.indices, np.ones(g.num_nodes), lab.label_of, lab.strength_of,
        lab.population, np.zeros(g.num_nodes, dtype=np.uint8),
        v, _kernels.CLASSIC, g.num_nodes, p, 0.0, u1, u2,
        counts, score, touched, ties)
    return int(label)


def update_label_leung(g: Graph, lab: Labeling, v: int, delta: float,
                       pref_exponent: float, rng: np.random.Generator) -> tuple[int, float]:
    """Strength- and degree-weighted vote; returns (label, attenuated strength)."""
    u1, u2 = rng.random(), rng.random()
    counts, score, touched, ties = _scratch(g)
    label, strength = _kernels.decide_one(
        g.indptr, g.indices, _degree_preference(g, pref_exponent),
        lab.label_of, lab.strength_of, lab.population,
        np.zeros(g.num_nodes, dtype=np.uint8),
        v, _kernels.LEUNG, g.num_nodes, 0.0, delta, u1, u2,
        counts, score, touched, ties)
    return int(label), float(strength)


def update_label_clpa(g: Graph, lab: Labeling, v: int, cap: int,
                      rng: np.random.Generator, p: float = 0.0) -> int:
    """Capacity-restricted majority vote, applied to ``lab`` in place.

    Labels at population >= cap cannot be joined, but v's current label is
    always admissible, so a full label never expels existing members. The
    assignment and the population counters update together.
    """
    u1, u2 = rng.random(), rng.random()
    counts, score, touched, ties = _scratch(g)
    label, _ = _kernels.decide_one(
        g.indptr, g.indices, np.ones(g.num_nodes), lab.label_of, lab.strength_of,
        lab.population, np.zeros(g.num_nodes, dtype=np.uint8),
        v, _kernels.CLPA, cap, p, 0.0, u1, u2,
        counts, score, touched, ties)
    old = int(lab.label_of[v])
    new = int(label)
    if new != old:
        lab.label_of[v] = new
        lab.population[old] -= 1
        lab.population[new] += 1
    return new


def run(g: Graph, cfg: PropagationConfig,
        check_invariants: bool = False) -> tuple[Labeling, RunTrace]:
    """Run the configured variant to convergence or the iteration budget.

    Starts from unique labels. Async mode visits nodes in a fresh seeded
    permutation each round and reads live state; sync mode decides every
    node from the previous round's snapshot. Early stop requires a
    zero-change round, and for clpa additionally that the capacity has
    reached n (constrained cycles always run in full). Final labels are
    renumbered dense by first occurrence. ``check_invariants`` recounts the
    population bookkeeping every 1000 updates.

    Identical (graph, config) pairs produce identical results bit for bit.
    """
    cfg = cfg.resolved()
    n = g.num_nodes
    rng = np.random.default_rng(cfg.seed)
    variant = _VARIANT_CODE[cfg.variant]
    is_clpa = cfg.variant == "clpa"
    sync = cfg.mode == "sync"
    t_max = cfg.max_iterations

    state = Labeling.unique(n)
    labels, pops, strengths = state.label_of, state.population, state.strength_of
    deg_pow = _degree_preference(g, cfg.pref_exponent) if cfg.variant == "leung" \
        else np.ones(n, dtype=np.float64)
    closed = np.zeros(n, dtype=np.uint8)
    counts, score, touched, ties = _scratch(g)
    update_counter = np.zeros(1, dtype=np.int64)
    check_every = 1000 if check_invariants else 0

    per_iteration: list[IterationStats] = []
    converged = False
    iterations_used = 0
    prev_cap = -1
    for t in range(t_max):
        cap = capacity(t, t_max, cfg.cycles, n) if is_clpa else n
        p = anneal_probability(t, t_max) if (is_clpa and cfg.anneal == "linear") else 0.0
        if cap != prev_cap:
            # New cycle: labels still at or above the raised capacity stay
            # closed, everything else reopens.
            closed = (pops >= cap).astype(np.uint8)
            prev_cap = cap
        order = rng.permutation(n)
        uniforms = rng.random(2 * n)
        if sync:
            labels_src, strengths_src, pops_src = labels.copy(), strengths.copy(), pops.copy()
            closed_src = closed.copy()
        else:
            labels_src, strengths_src, pops_src = labels, strengths, pops
            closed_src = closed
        changes = _kernels.run_sweep(
            g.indptr, g.indices, deg_pow, labels, labels_src,
            strengths, strengths_src, pops, pops_src, closed, closed_src,
            order, uniforms, variant, cap, p, cfg.delta,
            counts, score, touched, ties, update_counter, check_every)
        per_iteration.append(IterationStats(t, int(changes), int(np.unique(labels).size), int(cap)))
        iterations_used = t + 1
        if changes == 0 and cap >= n:
            converged = True
            break

    final = dense_relabel(labels)
    result = Labeling(
        label_of=final,
        population=np.bincount(final).astype(np.int64),
        strength_of=strengths,
    )
    return result, RunTrace(iterations_used, converged, per_iteration)


def write_labeling_csv(g: Graph, lab: Labeling, target) -> None:
    """Write the assignment as CSV ``external_node_id,community_id``."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_labeling_csv(g, lab, fh)
        return
    target.write("external_node_id,community_id\n")
    for v in range(g.num_nodes):
        target.write(f"{g.external_ids[v]},{lab.label_of[v]}\n")


def write_trace_csv(trace: RunTrace, target) -> None:
    """Write per-round stats as CSV ``iteration,changes,labels,capacity``."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_trace_csv(trace, fh)
        return
    target.write("iteration,changes,labels,capacity\n")
    for row in trace.per_iteration:
        target.write(f"{row.iteration},{row.changes},{row.distinct_labels},{row.capacity}\n")
