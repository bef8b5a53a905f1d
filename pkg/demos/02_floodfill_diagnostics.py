"""Predicting and preventing flood-fills.

Attraction power (the expected number of first-round adopters of a node's
label) can be read off the degree structure before any propagation runs.
Where it is concentrated on a few stars, plain label propagation is headed
for a flood and the pre-run report says so. A second failure mode, driven by
high mixing rather than stars, is invisible to the forecast but equally
fixed by the capacity schedule; this script shows both.
"""

import numpy as np

import labelflow as lf
from labelflow.benchgen import BenchmarkSpec, generate

# --- part 1: the forecast on structures it is built for ---------------------

ring = lf.Graph.from_edges([(i, (i + 1) % 50) for i in range(50)])
planted = generate(BenchmarkSpec(num_nodes=1000, mean_degree=20, max_degree=100,
                                 mu=0.3, seed=0))
star = lf.Graph.from_edges([(0, i) for i in range(1, 101)])

print("pre-run risk reports")
for name, g in (("50-ring", ring), ("planted mu=0.3", planted.graph),
                ("star N=101", star)):
    rep = lf.flood_fill_report(g)
    print(f"  {name:<15} variance {rep.variance:8.2f}  max degree "
          f"{rep.max_degree:4d}  risk {rep.risk}")

# --- part 2: a mixing-driven flood and its prevention ------------------------
# Planted partition at mu=0.45 (borderline structure) plus 20 hubs wired to
# 15% of the network. The hubs glue distant regions together and classic
# propagation hands almost every node to one label.

base = generate(BenchmarkSpec(num_nodes=1000, mean_degree=20, max_degree=100,
                              mu=0.45, seed=0))
rng = np.random.default_rng(77_777)
n = base.graph.num_nodes + 20
edges = [tuple(e) for e in base.graph.edges.tolist()]
for hub in range(base.graph.num_nodes, n):
    others = np.setdiff1d(np.arange(n), [hub])
    for t in rng.choice(others, size=round(0.15 * n), replace=False):
        edges.append((hub, int(t)))
hubby = lf.Graph.from_edges(np.asarray(edges, dtype=np.int64), num_nodes=n)

rep = lf.flood_fill_report(hubby)
print(f"\nhub-heavy mixing graph: variance {rep.variance:.2f}, risk {rep.risk}")
print("(the forecast stays quiet here: this flood comes from the mixing level,"
      "\n not from first-iteration attraction, so only the run itself reveals it)")

print("\nlargest community fraction over 5 seeds:")
print("  seed  classic   clpa(k=100,T=500)")
for seed in range(5):
    classic, _ = lf.run(hubby, lf.PropagationConfig(variant="classic", seed=seed))
    clpa, _ = lf.run(hubby, lf.PropagationConfig(variant="clpa", cycles=100,
                                                 max_iterations=500, seed=seed))
    print(f"  {seed}     {classic.population.max() / n:7.2f}"
          f"   {clpa.population.max() / n:7.2f}")

print("\nclassic hands nearly the whole graph to one label; the growing"
      "\ncapacity schedule keeps every community near its planted size.")
