"""The closed-form bounds and the little combinatorial oracles that witness
them: l1 ball packings, sparse-set counting, and collision tails.

Run:  python demos/05_bounds.py
"""

import riplab as rl

print("row-count shape evaluators (base-2 logs, explicit constants):")
print("  general-lower(n=1024, k=16, l=4)  =", rl.evaluate("general-lower", n=1024, k=16, l=4))
print("  block-lower(n=4096, k=64, b=8)    =", rl.evaluate("block-lower", n=4096, k=64, b=8))
print("  tree-lower(n=4095, k=64)          =", round(rl.evaluate("tree-lower", n=4095, k=64), 2))
print("  plan-d(n=1024, k=16, l=4, eps=.25) =", round(rl.evaluate("plan-d", n=1024, k=16, l=4, eps=0.25), 2))

print("volume bound vs greedy packings (pairwise-separated points in the l1 ball):")
for d in range(1, 5):
    res = rl.packing_oracle(d, trials=20000, seed=d)
    print(f"  d={d}: greedy found {res.size:4d} points;"
          f" the ball-volume argument caps it at 4^d = {4 ** d}"
          f" (ball-volume ratio {res.ratio_bound:.1f})")

print("sparse-set counting against its two bound families:")
for t in (2, 4, 8):
    rep = rl.counting_check(rl.Model("block", 64, 8, 4), t)
    print(f"  t={t}: exact {rep.exact} <= min(binomial {min(rep.binom_model, rep.binom_ambient)},"
          f" exponential {min(rep.exp_model, rep.exp_ambient):.3g})")

print("neighborhood-deficit tails (random d-subsets of [m], t columns):")
rep = rl.collision_tail_estimate(100, 5, 4, 0.25, trials=20000, seed=0)
print(f"  observed frequency {rep.frequency:.4f} vs binomial tail {rep.binom_tail:.4f}"
      f" vs concentration expression {rep.concentration_bound:.4f}")
rep = rl.collision_tail_estimate(400, 5, 4, 0.25, trials=20000, seed=0)
print(f"  at m=400: frequency {rep.frequency:.4f} vs binomial tail {rep.binom_tail:.4f}")

print("chernoff multiplier at tau=1 (each unit of mean):", round(rl.evaluate("chernoff", mu=1, tau=1), 5))
