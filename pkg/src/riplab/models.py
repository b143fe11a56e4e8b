"""Sparsity models over [n]: membership, enumeration, counting, projection,
tree covers and sparse partitions.

Coordinates are 1-based; a support is a sorted tuple of distinct coordinates.
Vectors are numpy arrays of length n, with ``x[j - 1]`` holding coordinate j.

Three kinds of model:

* ``general`` -- members are all k-subsets of [n];
* ``block``   -- [n] splits into contiguous blocks B_i = {(i-1)b+1 .. ib};
  members are exact unions of k/b blocks (b must divide k and n);
* ``tree``    -- n = 2^(h+1)-1 and coordinates are heap indices of a full
  binary tree (root 1, children of i are 2i and 2i+1); members are rooted
  subtrees with exactly k vertices.

A set is *sparse* for a model when it is contained in some member.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapError, InputError, ModelUnsupportedError

KINDS = ("general", "block", "tree")

#: default bound on how many sets an exhaustive enumeration may produce
DEFAULT_ENUM_CAP = 2_000_000

#: default threshold multiplier in the tree partition precondition k > c*log2(n)
DEFAULT_C_PART = 2.0


@dataclass(frozen=True)
class Model:
    """A support family over [n] with sparsity k (block kind also carries b)."""

    kind: str
    n: int
    k: int
    b: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.n, int) or not isinstance(self.k, int):
            raise InputError("n and k must be integers")
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise InputError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if self.kind == "block":
            b = self.b
            if not isinstance(b, int) or b < 1:
                raise InputError("block model needs a positive integer block size b")
            if self.k % b != 0 or self.n % b != 0:
                raise InputError(f"b={b} must divide both k={self.k} and n={self.n}")
        else:
            if self.b is not None:
                raise InputError("b is only meaningful for block models")
        if self.kind == "tree" and (self.n + 1) & self.n != 0:
            raise InputError(f"tree model needs n = 2^(h+1)-1, got n={self.n}")

    @property
    def num_blocks(self) -> int:
        return self.n // self.b

    @property
    def height(self) -> int:
        """Depth h of the full binary tree (root at depth 0)."""
        return (self.n + 1).bit_length() - 2


def parse_model(text: str) -> Model:
    """Parse the text form ``kind:n=..,k=..[,b=..]``."""
    try:
        kind, _, rest = text.partition(":")
        kind = kind.strip()
        fields = {}
        for item in rest.split(","):
            if not item.strip():
                continue
            key, _, val = item.partition("=")
            fields[key.strip()] = int(val)
    except ValueError as exc:
        raise InputError(f"cannot parse model text {text!r}") from exc
    if kind not in KINDS:
        raise InputError(f"unknown model kind {kind!r} in {text!r}")
    if "n" not in fields or "k" not in fields:
        raise InputError(f"model text {text!r} must set n and k")
    return Model(kind, fields["n"], fields["k"], fields.get("b"))


def format_model(model: Model) -> str:
    if model.kind == "block":
        return f"block:n={model.n},k={model.k},b={model.b}"
    return f"{model.kind}:n={model.n},k={model.k}"


def normalize_support(n: int, support) -> tuple:
    """Sorted tuple of distinct 1-based coordinates, validated against [n]."""
    items = [int(j) for j in support]
    out = tuple(sorted(set(items)))
    if len(out) != len(items):
        raise InputError("support contains duplicate coordinates")
    if out and (out[0] < 1 or out[-1] > n):
        bad = [j for j in out if j < 1 or j > n]
        raise InputError(f"coordinates {bad} outside [1, {n}]")
    return out


def parse_support(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(sorted(int(t) for t in text.split(",")))
    except ValueError as exc:
        raise InputError(f"cannot parse support {text!r}") from exc


def format_support(support) -> str:
    return ",".join(str(j) for j in sorted(support))


# -- tree helpers ------------------------------------------------------------

def tree_children(i: int, n: int) -> list:
    return [c for c in (2 * i, 2 * i + 1) if c <= n]


def tree_path_to_root(i: int) -> list:
    path = []
    while i >= 1:
        path.append(i)
        i //= 2
    return path


def tree_closure(support) -> frozenset:
    """Smallest parent-closed set containing the support (its rooted hull)."""
    out = set()
    for j in support:
        while j >= 1 and j not in out:
            out.add(j)
            j //= 2
    return frozenset(out)


def _touched_blocks(model: Model, support) -> set:
    return {(j - 1) // model.b for j in support}


# -- membership --------------------------------------------------------------

def is_member(model: Model, support) -> bool:
    """True iff the support is exactly a member of the family."""
    s = normalize_support(model.n, support)
    if len(s) != model.k:
        return False
    if model.kind == "general":
        return True
    if model.kind == "block":
        # k elements spread over exactly k/b blocks must fill each block
        return len(_touched_blocks(model, s)) == model.k // model.b
    members = set(s)
    return 1 in members and all(j == 1 or j // 2 in members for j in s)


def is_sparse(model: Model, support) -> bool:
    """True iff the support is contained in some member."""
    s = normalize_support(model.n, support)
    if model.kind == "general":
        return len(s) <= model.k
    if model.kind == "block":
        return len(_touched_blocks(model, s)) <= model.k // model.b
    return len(tree_closure(s)) <= model.k


# -- enumeration and counting ------------------------------------------------

def enumerate_members(model: Model, cap: int | None = DEFAULT_ENUM_CAP):
    """Yield every member of the family once, in a fixed deterministic order."""
    if cap is not None and model_size(model) > cap:
        raise CapError(
            f"family has {model_size(model)} members, over the cap {cap}; "
            "use a monte-carlo mode or raise the cap")
    if model.kind == "general":
        yield from itertools.combinations(range(1, model.n + 1), model.k)
        return
    if model.kind == "block":
        b = model.b
        for blocks in itertools.combinations(range(model.num_blocks), model.k // b):
            yield tuple(j for i in blocks for j in range(i * b + 1, i * b + b + 1))
        return
    yield from _tree_members(model.n, model.k)


def _tree_members(n: int, k: int):
    # connected-subgraph enumeration: at each step either take the next
    # frontier vertex (its children join the frontier) or drop it for good
    def rec(current, frontier):
        if len(current) == k:
            yield tuple(sorted(current))
            return
        for i, v in enumerate(frontier):
            ext = frontier[i + 1:] + tree_children(v, n)
            yield from rec(current + [v], ext)

    yield from rec([1], tree_children(1, n))


def model_size(model: Model) -> int:
    """Exact number of members, |M_k| (big integers, never overflows)."""
    if model.kind == "general":
        return math.comb(model.n, model.k)
    if model.kind == "block":
        return math.comb(model.num_blocks, model.k // model.b)
    return _tree_count_table(model.height, model.k)[model.height][model.k]


@lru_cache(maxsize=None)
def _tree_count_table(h: int, kmax: int):
    """table[d][s] = number of rooted subtrees with s vertices in a full
    binary tree of depth d (s=0 counts the empty subtree)."""
    table = [[1, 1] + [0] * (kmax - 1)]
    for _ in range(1, h + 1):
        prev = table[-1]
        cur = [0] * (kmax + 1)
        cur[0] = 1
        for s in range(1, kmax + 1):
            cur[s] = sum(prev[a] * prev[s - 1 - a] for a in range(s))
        table.append(cur)
    return tuple(tuple(row) for row in table)


def count_sparse_sets(model: Model, t: int, cap: int | None = DEFAULT_ENUM_CAP) -> int:
    """#(M_k, t): number of sparse sets of size exactly t."""
    _check_t(model, t)
    if model.kind == "general":
        return math.comb(model.n, t)
    if model.kind == "block":
        return _count_block_sparse(model, t)
    return len(_tree_sparse_sets(model, t, cap))


def enumerate_sparse_sets(model: Model, t: int, cap: int | None = DEFAULT_ENUM_CAP):
    """Yield each sparse set of size exactly t once (deterministic order)."""
    _check_t(model, t)
    if model.kind in ("general", "block"):
        count = count_sparse_sets(model, t, cap=None)
        if cap is not None and count > cap:
            raise CapError(f"{count} sparse sets of size {t}, over the cap {cap}")
    if model.kind == "general":
        yield from itertools.combinations(range(1, model.n + 1), t)
        return
    if model.kind == "block":
        yield from _block_sparse_sets(model, t)
        return
    yield from _tree_sparse_sets(model, t, cap)


def _check_t(model: Model, t: int) -> None:
    if not 1 <= t <= model.k:
        raise InputError(f"need 1 <= t <= k, got t={t} with k={model.k}")


def _compositions(total: int, parts: int, limit: int):
    """All tuples of `parts` integers in [1, limit] summing to `total`."""
    if parts == 1:
        if 1 <= total <= limit:
            yield (total,)
        return
    for first in range(1, min(limit, total - parts + 1) + 1):
        for rest in _compositions(total - first, parts - 1, limit):
            yield (first,) + rest


def _block_sparse_sets(model: Model, t: int):
    b = model.b
    jmax = min(model.k // b, t)
    for j in range(-(-t // b), jmax + 1):
        for blocks in itertools.combinations(range(model.num_blocks), j):
            coords = [range(i * b + 1, i * b + b + 1) for i in blocks]
            for counts in _compositions(t, j, b):
                pools = [itertools.combinations(c, cnt) for c, cnt in zip(coords, counts)]
                for pick in itertools.product(*pools):
                    yield tuple(itertools.chain.from_iterable(pick))


def _count_block_sparse(model: Model, t: int) -> int:
    b = model.b
    total = 0
    for j in range(-(-t // b), min(model.k // b, t) + 1):
        # sets of size t inside j chosen blocks that touch every one of them
        onto = sum((-1) ** i * math.comb(j, i) * math.comb((j - i) * b, t)
                   for i in range(j + 1))
        total += math.comb(model.num_blocks, j) * onto
    return total


def _tree_sparse_sets(model: Model, t: int, cap: int | None):
    seen = set()
    for member in enumerate_members(model, cap=None):
        for sub in itertools.combinations(member, t):
            seen.add(sub)
            if cap is not None and len(seen) > cap:
                raise CapError(f"over {cap} tree-sparse sets of size {t}")
    return sorted(seen)


# -- sampling ----------------------------------------------------------------

def random_member(model: Model, rng: np.random.Generator) -> tuple:
    """A uniformly random member of the family."""
    if model.kind == "general":
        picks = rng.choice(model.n, size=model.k, replace=False)
        return tuple(sorted(int(j) + 1 for j in picks))
    if model.kind == "block":
        b = model.b
        blocks = rng.choice(model.num_blocks, size=model.k // b, replace=False)
        return tuple(sorted(j for i in blocks for j in range(int(i) * b + 1, int(i) * b + b + 1)))
    return _tree_random_member(model, rng)


def _tree_random_member(model: Model, rng: np.random.Generator) -> tuple:
    table = _tree_count_table(model.height, model.k)
    out = []

    def sample(v: int, depth_left: int, size: int) -> None:
        if size == 0:
            return
        out.append(v)
        if size == 1:
            return
        sub = table[depth_left - 1]
        weights = [sub[a] * sub[size - 1 - a] for a in range(size)]
        pick = int(rng.integers(sum(weights)))
        a = 0
        while pick >= weights[a]:
            pick -= weights[a]
            a += 1
        sample(2 * v, depth_left - 1, a)
        sample(2 * v + 1, depth_left - 1, size - 1 - a)

    sample(1, model.height, model.k)
    return tuple(sorted(out))


# -- projection --------------------------------------------------------------

def project(model: Model, x) -> tuple:
    """Best member T and the restriction of x to T (max retained l1 mass).

    Ties break toward the lowest coordinate/block index; the tree DP uses a
    fixed deterministic reconstruction order.  Returns ``(T, x_projected)``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n,):
        raise InputError(f"vector has shape {x.shape}, expected ({model.n},)")
    weight = np.abs(x)
    if model.kind == "general":
        # stable sort keeps ascending index order among equal weights
        order = np.argsort(-weight, kind="stable")
        chosen = sorted(int(j) + 1 for j in order[: model.k])
    elif model.kind == "block":
        masses = weight.reshape(model.num_blocks, model.b).sum(axis=1)
        order = np.argsort(-masses, kind="stable")
        blocks = sorted(int(i) for i in order[: model.k // model.b])
        chosen = [j for i in blocks for j in range(i * model.b + 1, i * model.b + model.b + 1)]
    else:
        chosen = _tree_project(model, weight)
    chosen = tuple(chosen)
    out = np.zeros_like(x)
    idx = np.asarray(chosen, dtype=int) - 1
    out[idx] = x[idx]
    return chosen, out


def _tree_project(model: Model, weight: np.ndarray) -> list:
    """Exact tree knapsack: per-vertex DP table over rooted-subtree sizes."""
    n, k = model.n, model.k
    tables: dict[int, list] = {}

    def solve(v: int) -> list:
        w = float(weight[v - 1])
        kids = tree_children(v, n)
        if not kids:
            tables[v] = [0.0, w]
            return tables[v]
        left = solve(kids[0])
        right = solve(kids[1]) if len(kids) > 1 else [0.0]
        cap = min(k, len(left) + len(right) - 1)
        best = [0.0] * (cap + 1)
        for s in range(1, cap + 1):
            best[s] = w + max(
                left[a] + right[s - 1 - a]
                for a in range(s)
                if a < len(left) and s - 1 - a < len(right))
        tables[v] = best
        return best

    solve(1)
    chosen: list[int] = []

    def rebuild(v: int, size: int) -> None:
        if size == 0:
            return
        chosen.append(v)
        if size == 1:
            return
        kids = tree_children(v, n)
        left = tables[kids[0]]
        right = tables[kids[1]] if len(kids) > 1 else [0.0]
        best = max(left[a] + right[size - 1 - a]
                   for a in range(size)
                   if a < len(left) and size - 1 - a < len(right))
        # first split achieving the max: deterministic tie-breaking
        pick = next(a for a in range(size)
                    if a < len(left) and size - 1 - a < len(right)
                    and left[a] + right[size - 1 - a] == best)
        rebuild(kids[0], pick)
        if len(kids) > 1:
            rebuild(kids[1], size - 1 - pick)

    rebuild(1, k)
    return sorted(chosen)


# -- tree cover --------------------------------------------------------------

def tree_cover(n: int, support) -> tuple:
    """Rooted subtree containing the support: the top ceil(log2 |S|) levels
    plus every root-to-element path.

    The result size is checked against 2|S| + |S|*ceil(log2(n/|S|)).
    """
    if (n + 1) & n != 0:
        raise InputError(f"tree cover needs n = 2^(h+1)-1, got n={n}")
    s = normalize_support(n, support)
    if not s:
        raise InputError("tree cover of an empty support is undefined")
    levels = (len(s) - 1).bit_length()
    cover = set(range(1, (1 << levels)))
    for u in s:
        cover.update(tree_path_to_root(u))
    out = tuple(sorted(cover))
    budget = 2 * len(s) + len(s) * _ceil_log2_ratio(n, len(s))
    if len(out) > budget:
        raise AssertionError(
            f"cover size {len(out)} exceeded the bound {budget} for |S|={len(s)}, n={n}")
    return out


def _ceil_log2_ratio(num: int, den: int) -> int:
    """Smallest c >= 0 with den * 2^c >= num."""
    c = 0
    while (den << c) < num:
        c += 1
    return c


# -- partitions (sparse cover of a constant fraction of [n]) ------------------

def model_partition(model: Model, c_part: float = DEFAULT_C_PART) -> tuple:
    """Largest l with every l-set sparse, plus disjoint sparse parts of size
    >= k/2 covering at least a quarter of [n].

    Returns ``(l, parts)``.  Raises ModelUnsupportedError when the model
    cannot satisfy the construction (tree kind needs k > c_part*log2(n)).
    """
    n, k = model.n, model.k
    if model.kind in ("general", "block"):
        # consecutive runs of k coordinates (= k/b whole blocks for block kind)
        parts = [tuple(range(i + 1, i + k + 1)) for i in range(0, n - k + 1, k)]
        leftover = n % k
        if leftover and 2 * leftover >= k:
            parts.append(tuple(range(n - leftover + 1, n + 1)))
        l = k if model.kind == "general" else model.k // model.b
        return l, parts
    return _tree_partition(model, c_part)


def _tree_partition(model: Model, c_part: float) -> tuple:
    n, k, h = model.n, model.k, model.height
    if k <= c_part * math.log2(n):
        raise ModelUnsupportedError(
            f"tree partition needs k > {c_part}*log2(n) = {c_part * math.log2(n):.2f}, got k={k}")
    l = 0
    while True:
        t = l + 1
        if t <= k and 2 * t + t * _ceil_log2_ratio(n, t) <= k:
            l = t
        else:
            break
    if l < 1:
        raise ModelUnsupportedError(
            f"no l >= 1 satisfies the cover bound 2l + l*ceil(log2(n/l)) <= k for k={k}, n={n}")
    for depth in range(h + 1):
        full = (1 << (h + 1 - depth)) - 1
        size = min(k - depth, full)
        if size < 1:
            break
        if 2 * size >= k and 4 * (size << depth) >= n:
            parts = [_heap_prefix(root, size, n)
                     for root in range(1 << depth, (1 << (depth + 1)))]
            return l, parts
    raise ModelUnsupportedError(
        f"no depth gives parts >= k/2 covering n/4 for tree n={n}, k={k}")


def _heap_prefix(root: int, size: int, n: int) -> tuple:
    """First `size` vertices of the subtree at `root` in level order."""
    out = []
    level = [root]
    while len(out) < size:
        nxt = []
        for v in level:
            if len(out) == size:
                break
            out.append(v)
            nxt.extend(tree_children(v, n))
        level = nxt
    return tuple(sorted(out))
