"""Acceptance suite: one test per top-level criterion, in order.

Each test prints a single CRITERION line (visible with ``pytest -s``). The
mu-grid experiments (criteria 2, 3 and 8) share one module-scoped sweep so
the graphs are generated and the algorithms run exactly once.
"""

import os
import time
from dataclasses import dataclass

import numpy as np
import pytest

import labelflow as lf
from labelflow import (BenchmarkSpec, Graph, Labeling, PropagationConfig,
                       attraction_power, dissatisfied_count, generate,
                       load_edge_list, modularity, nmi, run,
                       update_label_classic)
from labelflow.cli import main as cli_main

from conftest import random_graph
from oracles import (intra_edge_scan, labeled_connected_graphs,
                     modularity_pairsum, nmi_contingency,
                     objective_membership_sum, set_partitions)

SPEC = dict(num_nodes=1000, mean_degree=20, max_degree=100)
GRID_MUS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.55, 0.6, 0.65, 0.7, 0.8)
SEEDS_PER_POINT = 10
CLPA_KWARGS = dict(variant="clpa", cycles=100, max_iterations=500)


def _report(number: int, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    print(f"CRITERION {number} {verdict}: {detail}", flush=True)
    assert passed, f"criterion {number}: {detail}"


# ------------------------------------------------------------- shared grid

@dataclass
class GridResult:
    mean_nmi: dict        # (mu, algorithm) -> mean NMI over seeds
    gt_dissatisfied: dict  # mu -> mean planted-partition dissatisfied count
    elapsed: float


@pytest.fixture(scope="module")
def mu_grid():
    start = time.perf_counter()
    nmis = {}
    dissatisfied = {}
    for mu in GRID_MUS:
        per_algo = {"classic": [], "clpa": []}
        gt_dis = []
        for seed in range(SEEDS_PER_POINT):
            planted = generate(BenchmarkSpec(mu=mu, seed=1000 + seed, **SPEC))
            g, gt = planted.graph, planted.ground_truth
            gt_dis.append(dissatisfied_count(g, gt))
            for algo, cfg in (
                ("classic", PropagationConfig(variant="classic", seed=seed)),
                ("clpa", PropagationConfig(seed=seed, **CLPA_KWARGS)),
            ):
                labeling, _ = run(g, cfg)
                per_algo[algo].append(nmi(labeling, gt))
        for algo, values in per_algo.items():
            nmis[(mu, algo)] = float(np.mean(values))
        dissatisfied[mu] = float(np.mean(gt_dis))
    return GridResult(nmis, dissatisfied, time.perf_counter() - start)


def _hub_graph(seed: int) -> Graph:
    """Planted partition at mu=0.45 plus 20 hubs wired to 15% of the network."""
    planted = generate(BenchmarkSpec(mu=0.45, seed=seed, **SPEC))
    rng = np.random.default_rng(seed + 77_777)
    n_total = planted.graph.num_nodes + 20
    edges = [tuple(e) for e in planted.graph.edges.tolist()]
    wired = round(0.15 * n_total)
    all_ids = np.arange(n_total)
    for hub in range(planted.graph.num_nodes, n_total):
        others = all_ids[all_ids != hub]
        targets = rng.choice(others, size=wired, replace=False)
        edges.extend((hub, int(t)) for t in targets)
    return Graph.from_edges(np.asarray(edges, dtype=np.int64), num_nodes=n_total)


# ---------------------------------------------------------------- criteria

def test_criterion_1_floodfill_prevention():
    start = time.perf_counter()
    classic_frac, clpa_frac = [], []
    for seed in range(10):
        g = _hub_graph(seed)
        labeling, _ = run(g, PropagationConfig(variant="classic", seed=seed))
        classic_frac.append(labeling.population.max() / g.num_nodes)
        labeling, _ = run(g, PropagationConfig(seed=seed, **CLPA_KWARGS))
        clpa_frac.append(labeling.population.max() / g.num_nodes)
    elapsed = time.perf_counter() - start
    floods = sum(f >= 0.9 for f in classic_frac)
    worst_clpa = max(clpa_frac)
    passed = floods >= 7 and worst_clpa <= 0.6 and elapsed < 30.0
    _report(1, passed,
            f"classic floods {floods}/10 seeds (need >=7), "
            f"clpa max community fraction {worst_clpa:.3f} (need <=0.6), "
            f"{elapsed:.1f}s (budget 30s)")


def test_criterion_2_low_mu_nmi(mu_grid):
    low_mus = (0.1, 0.2, 0.3, 0.4, 0.5)
    means = {mu: mu_grid.mean_nmi[(mu, "clpa")] for mu in low_mus}
    passed = all(v >= 0.95 for v in means.values()) and mu_grid.elapsed < 300.0
    detail = ", ".join(f"mu={mu}: {v:.4f}" for mu, v in means.items())
    _report(2, passed,
            f"clpa mean NMI {detail} (need >=0.95 each); "
            f"whole grid took {mu_grid.elapsed:.0f}s (budget 300s)")


def test_criterion_3_landing_point_ordering(mu_grid):
    def landing(algo):
        holds = [mu for mu in GRID_MUS if mu_grid.mean_nmi[(mu, algo)] >= 0.5]
        return max(holds) if holds else 0.0

    classic_landing = landing("classic")
    clpa_landing = landing("clpa")
    passed = classic_landing < clpa_landing
    _report(3, passed,
            f"largest mu with mean NMI >= 0.5: classic {classic_landing}, "
            f"clpa {clpa_landing} (classic must be strictly smaller)")


def test_criterion_4_modularity_direction():
    classic_q, clpa_q = [], []
    for graph_seed in range(5):
        planted = generate(BenchmarkSpec(mu=0.5, seed=graph_seed, **SPEC))
        g = planted.graph
        for seed in range(10):
            labeling, _ = run(g, PropagationConfig(variant="classic", seed=seed))
            classic_q.append(modularity(g, labeling))
            labeling, _ = run(g, PropagationConfig(seed=seed, **CLPA_KWARGS))
            clpa_q.append(modularity(g, labeling))
    mean_classic, mean_clpa = float(np.mean(classic_q)), float(np.mean(clpa_q))
    passed = mean_clpa >= mean_classic
    _report(4, passed,
            f"mean modularity at mu=0.5: clpa {mean_clpa:.4f} vs classic "
            f"{mean_classic:.4f} (clpa must not be lower)")


@pytest.mark.skipif("LABELFLOW_GRQ_PATH" not in os.environ,
                    reason="set LABELFLOW_GRQ_PATH to a local GRQ edge list to enable")
def test_criterion_4_grq_extension():
    g = load_edge_list(os.environ["LABELFLOW_GRQ_PATH"])
    classic_q, clpa_q = [], []
    for seed in range(20):
        labeling, _ = run(g, PropagationConfig(variant="classic", seed=seed))
        classic_q.append(modularity(g, labeling))
        labeling, _ = run(g, PropagationConfig(seed=seed, **CLPA_KWARGS))
        clpa_q.append(modularity(g, labeling))
    mean_classic, mean_clpa = float(np.mean(classic_q)), float(np.mean(clpa_q))
    passed = abs(mean_classic - 0.735) <= 0.06 and abs(mean_clpa - 0.797) <= 0.06
    _report(4, passed,
            f"GRQ: classic Q {mean_classic:.3f} (expect 0.735 +-0.06), "
            f"clpa Q {mean_clpa:.3f} (expect 0.797 +-0.06)")


def test_criterion_5_zero_dissatisfaction():
    rng = np.random.default_rng(123)
    runs = 0
    violations = 0
    for _ in range(10):
        g = random_graph(rng, 100, 0.06)
        for seed in range(10):
            labeling, trace = run(g, PropagationConfig(variant="classic", seed=seed))
            assert trace.converged
            runs += 1
            if dissatisfied_count(g, labeling) != 0:
                violations += 1
    passed = runs == 100 and violations == 0
    _report(5, passed,
            f"{runs} converged classic runs, {violations} with dissatisfied nodes "
            f"(need exactly 0)")


def test_criterion_6_attraction_monte_carlo():
    g = random_graph(np.random.default_rng(42), 20, 0.25)
    assert int((g.degrees == 0).sum()) == 0
    n = g.num_nodes
    trials = 10_000
    initial = Labeling.unique(n)
    counts = np.zeros((trials, n))
    for trial in range(trials):
        rng = np.random.default_rng(trial)
        chosen = [update_label_classic(g, initial, v, rng) for v in range(n)]
        counts[trial] = np.bincount(chosen, minlength=n)
    mean = counts.mean(axis=0)
    stderr = counts.std(axis=0, ddof=1) / np.sqrt(trials)
    expected = attraction_power(g).values
    deviations = np.abs(mean - expected)
    passed = bool(np.all(deviations <= 3.0 * stderr + 1e-12))
    worst = int(np.argmax(deviations - 3.0 * stderr))
    _report(6, passed,
            f"first-iteration adopter counts match attraction power within 3 SE "
            f"for all {n} nodes (worst node {worst}: |{mean[worst]:.4f} - "
            f"{expected[worst]:.4f}| vs 3SE={3 * stderr[worst]:.4f})")


def test_criterion_7_oracle_equivalences():
    # modularity against the literal pair sum, exhaustively
    checked = 0
    for n in (2, 3, 4, 5):
        for edges in labeled_connected_graphs(n):
            g = Graph.from_edges(edges, num_nodes=n)
            for part in set_partitions(range(n)):
                labels = np.asarray(part)
                assert modularity(g, labels) == pytest.approx(
                    modularity_pairsum(g, labels), abs=1e-12)
                checked += 1
    import networkx as nx
    atlas6 = [G for G in nx.graph_atlas_g()
              if len(G) == 6 and nx.is_connected(G)]
    for G in atlas6:
        g = Graph.from_edges(list(G.edges()), num_nodes=6)
        for part in set_partitions(range(6)):
            labels = np.asarray(part)
            assert modularity(g, labels) == pytest.approx(
                modularity_pairsum(g, labels), abs=1e-12)
            checked += 1

    # NMI against the contingency-table oracle on 1000 random pairs
    rng = np.random.default_rng(7)
    for _ in range(1000):
        size = int(rng.integers(2, 50))
        a = rng.integers(0, 6, size)
        b = rng.integers(0, 6, size)
        assert nmi(a, b) == pytest.approx(nmi_contingency(a.tolist(), b.tolist()),
                                          abs=1e-12)

    # objective against the explicit edge scan and the membership triple sum
    for _ in range(200):
        g = random_graph(rng, int(rng.integers(3, 12)), 0.4)
        labels = rng.integers(0, 4, g.num_nodes)
        h = lf.lpa_objective(g, labels)
        assert h == 2 * intra_edge_scan(g, labels)
        assert h == objective_membership_sum(g, labels.tolist())

    _report(7, True,
            f"modularity == pair-sum oracle on {checked} (graph, partition) pairs "
            f"(labeled-exhaustive N<=5, atlas N=6); NMI == contingency oracle on "
            f"1000 pairs; objective == 2x intra-edge scan on 200 graphs")


def test_criterion_8_ground_truth_dissatisfaction(mu_grid):
    zero_region = [mu_grid.gt_dissatisfied[mu] for mu in (0.1, 0.2, 0.3, 0.4, 0.5)]
    growth = [mu_grid.gt_dissatisfied[mu] for mu in (0.6, 0.7, 0.8)]
    passed = all(v == 0.0 for v in zero_region) and growth[0] < growth[1] < growth[2]
    _report(8, passed,
            f"planted-partition dissatisfied means: mu<=0.5 -> {zero_region} "
            f"(need all 0), mu in (0.6, 0.7, 0.8) -> "
            f"{[round(v, 2) for v in growth]} (need strictly increasing)")


def test_criterion_9_cli_byte_determinism(tmp_path):
    fixture = tmp_path / "graph.txt"
    fixture.write_text("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n")

    def detect_blob(tag):
        out = tmp_path / f"det_{tag}"
        assert cli_main(["detect", "--algo", "clpa", "--k", "100", "--seed", "7",
                         "--out", str(out), str(fixture)]) == 0
        return b"".join((tmp_path / f"det_{tag}{s}").read_bytes() for s in (
            ".communities.csv", ".trace.csv", ".report.json", ".remap.csv",
            ".manifest.json"))

    def bench_blob(tag):
        out = tmp_path / f"bench_{tag}"
        assert cli_main(["bench", "--n", "200", "--dbar", "8", "--dmax", "20",
                         "--sizes", "15,40", "--mu-list", "0.1,0.3", "--seeds", "2",
                         "--algos", "classic,clpa", "--k", "10", "--T", "50",
                         "--seed", "5", "--jobs", "2", "--out", str(out)]) == 0
        return b"".join((tmp_path / f"bench_{tag}{s}").read_bytes() for s in (
            ".sweep.csv", ".summary.csv", ".manifest.json"))

    detect_same = detect_blob("one") == detect_blob("two")
    bench_same = bench_blob("one") == bench_blob("two")
    passed = detect_same and bench_same
    _report(9, passed,
            f"byte-identical outputs across two runs: detect={detect_same}, "
            f"bench={bench_same}")
