"""Tour of the sparsity models: membership, counting, projection, covers.

Run:  python demos/01_sparsity_models.py
"""

import numpy as np

import riplab as rl

# Three families over [n]: all k-sets, unions of contiguous blocks, and
# rooted subtrees of a heap-indexed binary tree.
block = rl.Model("block", 8, 4, 2)
tree = rl.Model("tree", 15, 4)

print("block model:", rl.format_model(block))
print("  {1,2,5,6} is a member (blocks 1 and 3):", rl.is_member(block, (1, 2, 5, 6)))
print("  {1,2,3,5} splits block 2:", rl.is_member(block, (1, 2, 3, 5)))
print("  {1,3,5} touches 3 blocks, sparse?", rl.is_sparse(block, (1, 3, 5)))

print("tree model:", rl.format_model(tree))
print("  members are rooted subtrees; |T_4| =", rl.model_size(tree))
print("  first few members:", list(rl.enumerate_members(tree))[:4])

print("counting sparse sets of each size:")
for t in range(1, block.k + 1):
    print(f"  #(block-family, {t}) = {rl.count_sparse_sets(block, t)}")

x = np.array([3.0, 0.5, -1.0, 2.0, 0.0, 4.0, -2.5, 0.1])
support, projected = rl.project(block, x)
print("best block support of", x.tolist(), "->", support)
print("  retained l1 mass:", np.abs(projected).sum(), "of", np.abs(x).sum())

# A rooted cover of scattered tree nodes: top levels plus root paths.
scattered = (9, 13, 15)
cover = rl.tree_cover(15, scattered)
print("tree cover of", scattered, "->", cover, f"(size {len(cover)})")

# Partition [n] into disjoint sparse parts (used by the sparsifier).
l, parts = rl.model_partition(rl.Model("tree", 127, 16))
print(f"tree n=127, k=16 partitions into {len(parts)} sparse parts of sizes",
      sorted({len(p) for p in parts}), f"with every {l}-set sparse")
