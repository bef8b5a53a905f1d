"""Accuracy versus mixing: a desk-scale benchmark sweep.

Generates planted-partition graphs over a grid of mixing values and compares
classic label propagation with the capacity-controlled variant by NMI
against the planted communities. The classic curve collapses shortly after
mu=0.5; the controlled one keeps near-perfect recovery well past it.
"""

import labelflow as lf
from labelflow.benchgen import BenchmarkSpec, sweep

base = BenchmarkSpec(num_nodes=1000, mean_degree=20, max_degree=100, mu=0.1, seed=0)
algorithms = [
    lf.PropagationConfig(variant="classic"),
    lf.PropagationConfig(variant="clpa", cycles=100, max_iterations=500),
]

result = sweep(base,
               mu_values=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7],
               seeds_per_point=5,
               algorithms=algorithms)

print("mu    algorithm  mean NMI  mean Q   gt dissatisfied")
for row in result.summary:
    print(f"{row.mu:<5} {row.algorithm:<9}  {row.mean_nmi:7.4f}  "
          f"{row.mean_modularity:6.4f}   {row.mean_gt_dissatisfied:.1f}")

print("\nNotes: gt dissatisfied counts nodes of the *planted* partition with "
      "more neighbors\noutside their community than inside; once it departs "
      "from zero (mu > 0.5) the\nplanted partition stops being an equilibrium "
      "that any propagation variant could hold.")
