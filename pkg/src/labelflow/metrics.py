"""Partition quality measures: modularity, NMI, dissatisfaction, cohesion
tests, and the raw propagation objective."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO

import numpy as np

from . import _kernels
from .graph import Graph
from .propagation import Labeling, dense_relabel


class MetricsError(ValueError):
    """Raised for partitions or graphs a metric is undefined on."""


def _labels_array(part) -> np.ndarray:
    if isinstance(part, Labeling):
        return part.label_of
    return np.asarray(part, dtype=np.int64)


def _covering_labels(g: Graph, part) -> np.ndarray:
    labels = _labels_array(part)
    if labels.shape != (g.num_nodes,):
        raise MetricsError(
            f"partition covers {labels.size} nodes, graph has {g.num_nodes}")
    return labels


def modularity(g: Graph, part) -> float:
    """Intra-community edge fraction minus its degree-null expectation.

    Q = sum over communities of m_c/M - (d_c/2M)^2, with m_c the community's
    internal edge count and d_c its total degree.
    """
    if g.num_edges < 1:
        raise MetricsError("modularity is undefined on an empty graph")
    labels = dense_relabel(_covering_labels(g, part))
    n_comm = int(labels.max()) + 1
    m = g.num_edges
    e0, e1 = g.edges[:, 0], g.edges[:, 1]
    intra = labels[e0] == labels[e1]
    m_c = np.bincount(labels[e0[intra]], minlength=n_comm)
    d_c = np.bincount(labels, weights=g.degrees, minlength=n_comm)
    return float(np.sum(m_c / m - (d_c / (2.0 * m)) ** 2))


def nmi(part_a, part_b) -> float:
    """Normalized mutual information, 2*I/(H_a + H_b), natural logs.

    Invariant under label renaming and exactly symmetric in its arguments.
    Returns 1.0 when both partitions are the single all-in-one community and
    0.0 when exactly one side has zero entropy.
    """
    a = dense_relabel(_labels_array(part_a))
    b = dense_relabel(_labels_array(part_b))
    if a.size != b.size:
        raise MetricsError(f"partitions cover different node sets ({a.size} vs {b.size})")
    if a.size == 0:
        raise MetricsError("empty partitions")
    # Canonical argument order makes nmi(a, b) == nmi(b, a) bit for bit.
    if (int(b.max()), b.tobytes()) < (int(a.max()), a.tobytes()):
        a, b = b, a
    n = a.size
    n_a, n_b = int(a.max()) + 1, int(b.max()) + 1
    table = np.bincount(a * n_b + b, minlength=n_a * n_b).reshape(n_a, n_b)
    p_a = table.sum(axis=1) / n
    p_b = table.sum(axis=0) / n
    h_a = float(-np.sum(p_a * np.log(p_a)))
    h_b = float(-np.sum(p_b * np.log(p_b)))
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    ii, jj = np.nonzero(table)
    p = table[ii, jj] / n
    mutual = float(np.sum(p * (np.log(p) - np.log(p_a[ii]) - np.log(p_b[jj]))))
    return min(max(2.0 * mutual / (h_a + h_b), 0.0), 1.0)


def dissatisfied_count(g: Graph, part) -> int:
    """Nodes with strictly more neighbors in some other community than their own."""
    labels = dense_relabel(_covering_labels(g, part))
    max_deg = int(g.degrees.max()) if g.num_nodes else 0
    counts = np.zeros(g.num_nodes, dtype=np.int64)
    touched = np.zeros(max(1, max_deg), dtype=np.int64)
    return int(_kernels.count_dissatisfied(g.indptr, g.indices, labels, counts, touched))


def _internal_degrees(g: Graph, labels: np.ndarray) -> np.ndarray:
    e0, e1 = g.edges[:, 0], g.edges[:, 1]
    intra = labels[e0] == labels[e1]
    return (np.bincount(e0[intra], minlength=g.num_nodes)
            + np.bincount(e1[intra], minlength=g.num_nodes))


def strong_weak_flags(g: Graph, part) -> tuple[np.ndarray, np.ndarray]:
    """Cohesion tests per community, indexed by first-occurrence order.

    strong: every member has more neighbors inside than outside.
    weak: the community's total internal degree exceeds its external one.
    """
    labels = dense_relabel(_covering_labels(g, part))
    n_comm = int(labels.max()) + 1
    d_in = _internal_degrees(g, labels)
    d_out = g.degrees - d_in
    sizes = np.bincount(labels, minlength=n_comm)
    strong = np.bincount(labels, weights=(d_in > d_out), minlength=n_comm) == sizes
    weak = (np.bincount(labels, weights=d_in, minlength=n_comm)
            > np.bincount(labels, weights=d_out, minlength=n_comm))
    return strong, weak


def lpa_objective(g: Graph, part) -> int:
    """Twice the intra-community edge count: what raw propagation climbs.

    Maximal value 2M is reached exactly when every connected component is
    monochromatic, the degenerate all-one-community outcome included.
    """
    labels = _covering_labels(g, part)
    intra = labels[g.edges[:, 0]] == labels[g.edges[:, 1]]
    return 2 * int(intra.sum())


@dataclass(frozen=True)
class CommunityReport:
    """Per-community and global quality summary of one partition."""

    community_count: int
    sizes: list[int]
    modularity: float
    dissatisfied_count: int
    strong_flags: list[bool]
    weak_flags: list[bool]
    objective_h: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)


def community_report(g: Graph, part) -> CommunityReport:
    """Assemble the full quality report for a partition of ``g``."""
    labels = dense_relabel(_covering_labels(g, part))
    sizes = np.bincount(labels, minlength=int(labels.max()) + 1)
    strong, weak = strong_weak_flags(g, labels)
    return CommunityReport(
        community_count=int(sizes.size),
        sizes=[int(s) for s in sizes],
        modularity=modularity(g, labels),
        dissatisfied_count=dissatisfied_count(g, labels),
        strong_flags=[bool(f) for f in strong],
        weak_flags=[bool(f) for f in weak],
        objective_h=lpa_objective(g, labels),
    )


def load_ground_truth(source: str | Path | IO[str], g: Graph) -> tuple[Labeling, int]:
    """Read a community file: one line per community, external node ids.

    Returns the labeling plus the number of nodes that appeared in more than
    one community (only the first listed membership is kept). Every node of
    the graph must be assigned.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_ground_truth(fh, g)
    labels = np.full(g.num_nodes, -1, dtype=np.int64)
    multi_assigned = 0
    community = 0
    for lineno, line in enumerate(source, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for token in stripped.split():
            try:
                internal = g.internal_id(int(token))
            except (ValueError, KeyError):
                raise MetricsError(f"line {lineno}: unknown node id {token!r}") from None
            if labels[internal] >= 0:
                multi_assigned += 1
            else:
                labels[internal] = community
        community += 1
    if (labels < 0).any():
        missing = int((labels < 0).sum())
        raise MetricsError(f"ground truth leaves {missing} node(s) unassigned")
    return Labeling.from_labels(labels), multi_assigned
