"""Column sparsification of a certified matrix: per row and partition part,
keep one entry; then keep the columns that moved little and stayed sparse.

Run:  python demos/03_sparsify.py
"""

import numpy as np

import riplab as rl

rng = np.random.default_rng(3)

# a dense matrix certified to be a near l1-isometry on pairs
n, k = 18, 2
a = np.eye(n) + 0.04 * rng.standard_normal((n, n)) / n
model = rl.Model("general", n, k)
report = rl.rip1_interval(a, model)
print(f"input: dense {n}x{n}, exact RIP constant eps-hat = {report.eps_lo:.4f}")
print(f"nonzeros per column before: {np.count_nonzero(a, axis=0).mean():.1f} (avg)")

outcome = rl.sparsify(a, k, eps_in=0.05)
print(f"after sparsify (thresholds: perturbation <= {outcome.perturbation_limit}, "
      f"nnz <= {outcome.nnz_limit}):")
print(f"  kept {len(outcome.kept_columns)} of {len(outcome.covered_columns)} columns")
print(f"  worst column perturbation: {outcome.per_column_perturbation.max():.4f}")
print(f"  nonzeros per kept column: {outcome.per_column_nnz.max()} (max)")

reduced = rl.Model("general", len(outcome.kept_columns), k)
after = rl.rip1_interval(outcome.b.a, reduced)
print(f"  RIP constant of the sparsified matrix: {after.eps_lo:.4f} "
      f"(guaranteed <= eps-hat + 9*eps_in = {report.eps_lo + 0.45:.4f})")

# the model-aware variant partitions along the model's own sparse parts
block = rl.Model("block", 8, 4, 2)
out_block, l = rl.model_sparsify(np.eye(8), block, eps_in=0.01)
print(f"model-aware on identity (block n=8): kept {len(out_block.kept_columns)} columns, "
      f"output should be RIP at order l={l}")
