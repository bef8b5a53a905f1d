"""Immutable undirected simple graph backed by CSR adjacency arrays."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

logger = logging.getLogger(__name__)


class EdgeListError(ValueError):
    """Raised when an edge-list source cannot be turned into a graph."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph over dense internal node ids ``0..n-1``.

    Neighbors of node ``v`` are ``indices[indptr[v]:indptr[v+1]]``, sorted
    ascending. ``external_ids[v]`` is the id node ``v`` carried in the input;
    for programmatically built graphs it is the identity. Instances are
    immutable after construction and safe to share across threads/processes.
    """

    num_nodes: int
    edges: np.ndarray        # (m, 2) int64, each row (u, v) with u < v
    indptr: np.ndarray       # (n + 1,) int64
    indices: np.ndarray      # (2m,) int64
    degrees: np.ndarray      # (n,) int64
    external_ids: np.ndarray  # (n,) int64
    dropped_self_loops: int = 0
    dropped_duplicates: int = 0
    _external_to_internal: dict = field(default_factory=dict, repr=False)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def degree(self, v: int) -> int:
        """Number of neighbors of node ``v`` (internal id)."""
        if not 0 <= v < self.num_nodes:
            raise IndexError(f"node id {v} out of range [0, {self.num_nodes})")
        return int(self.degrees[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted internal ids adjacent to ``v``. View, do not mutate."""
        if not 0 <= v < self.num_nodes:
            raise IndexError(f"node id {v} out of range [0, {self.num_nodes})")
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def internal_id(self, external_id: int) -> int:
        return self._external_to_internal[int(external_id)]

    @classmethod
    def from_edges(
        cls,
        edge_pairs: Iterable[tuple[int, int]] | np.ndarray,
        num_nodes: int | None = None,
        external_ids: np.ndarray | None = None,
    ) -> "Graph":
        """Build a graph from (u, v) pairs, dropping self-loops and duplicates.

        With ``num_nodes`` given, ids must already be dense in
        ``[0, num_nodes)`` and isolated nodes are allowed. Otherwise the node
        set is the union of endpoint ids and ids are remapped to dense
        internal ids in ascending external order.
        """
        raw = np.asarray(list(edge_pairs) if not isinstance(edge_pairs, np.ndarray) else edge_pairs,
                         dtype=np.int64)
        if raw.size == 0:
            raw = raw.reshape(0, 2)
        if raw.ndim != 2 or raw.shape[1] != 2:
            raise EdgeListError("edge array must have shape (m, 2)")
        if raw.size and raw.min() < 0:
            raise EdgeListError("negative node ids are not allowed")

        loop_mask = raw[:, 0] == raw[:, 1]
        dropped_loops = int(loop_mask.sum())
        raw = raw[~loop_mask]

        if num_nodes is None:
            if raw.size == 0:
                raise EdgeListError("empty graph")
            ext = np.unique(raw)
            n = int(ext.size)
            edges = np.searchsorted(ext, raw)
        else:
            if num_nodes < 1:
                raise EdgeListError("num_nodes must be positive")
            n = int(num_nodes)
            if raw.size and raw.max() >= n:
                raise EdgeListError(f"edge endpoint {raw.max()} >= num_nodes {n}")
            ext = np.arange(n, dtype=np.int64) if external_ids is None \
                else np.asarray(external_ids, dtype=np.int64)
            if ext.shape != (n,):
                raise EdgeListError("external_ids must have one entry per node")
            edges = raw

        # Canonical (min, max) rows, then dedupe.
        edges = np.sort(edges, axis=1)
        if edges.shape[0]:
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            keep = np.ones(edges.shape[0], dtype=bool)
            keep[1:] = np.any(edges[1:] != edges[:-1], axis=1)
            dropped_dups = int((~keep).sum())
            edges = edges[keep]
        else:
            dropped_dups = 0

        degrees = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        # Sorted adjacency keeps neighbor iteration order deterministic.
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        indices = np.ascontiguousarray(dst[order])

        g = cls(
            num_nodes=n,
            edges=edges,
            indptr=indptr,
            indices=indices,
            degrees=degrees,
            external_ids=ext,
            dropped_self_loops=dropped_loops,
            dropped_duplicates=dropped_dups,
            _external_to_internal={int(e): i for i, e in enumerate(ext)},
        )
        for arr in (g.edges, g.indptr, g.indices, g.degrees, g.external_ids):
            arr.setflags(write=False)
        return g


def load_edge_list(
    source: str | Path | IO[str] | IO[bytes],
    delimiter: str | None = None,
    comment: str = "#",
    one_based: bool = False,
    num_nodes: int | None = None,
) -> Graph:
    """Parse an edge-list into a :class:`Graph`.

    One edge per line, two integer tokens split on ``delimiter`` (``None`` =
    any whitespace); lines starting with ``comment`` and blank lines are
    skipped. ``one_based`` shifts all ids down by one on read. Pass
    ``num_nodes`` to declare the node count explicitly (required to represent
    isolated nodes); ids must then be dense in ``[0, num_nodes)`` after the
    shift. Duplicate edges and self-loops are dropped with a logged count.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_edge_list(fh, delimiter=delimiter, comment=comment,
                                  one_based=one_based, num_nodes=num_nodes)
    if isinstance(source, bytes):
        return load_edge_list(io.StringIO(source.decode("utf-8")),
                              delimiter=delimiter, comment=comment,
                              one_based=one_based, num_nodes=num_nodes)

    pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(source, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        stripped = line.strip()
        if not stripped or stripped.startswith(comment):
            continue
        tokens = stripped.split(delimiter)
        if len(tokens) != 2:
            raise EdgeListError(f"line {lineno}: expected two tokens, got {len(tokens)}: {stripped!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer node id in {stripped!r}") from None
        if one_based:
            u, v = u - 1, v - 1
        if u < 0 or v < 0:
            raise EdgeListError(f"line {lineno}: negative node id after base adjustment")
        pairs.append((u, v))

    if not pairs:
        raise EdgeListError("empty graph")
    g = Graph.from_edges(pairs, num_nodes=num_nodes)
    if g.dropped_self_loops or g.dropped_duplicates:
        logger.warning(
            "edge list cleanup: dropped %d self-loop(s) and %d duplicate edge(s)",
            g.dropped_self_loops, g.dropped_duplicates,
        )
    return g


def write_edge_list(g: Graph, target: str | Path | IO[str]) -> None:
    """Write the graph as text, one ``u v`` pair per line in external ids."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            write_edge_list(g, fh)
        return
    ext = g.external_ids
    for u, v in g.edges:
        target.write(f"{ext[u]} {ext[v]}\n")


def write_remap_csv(g: Graph, target: str | Path | IO[str]) -> None:
    """Write the retained id remap as CSV ``external_id,internal_id``."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_remap_csv(g, fh)
        return
    target.write("external_id,internal_id\n")
    for i, e in enumerate(g.external_ids):
        target.write(f"{e},{i}\n")
