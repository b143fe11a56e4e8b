"""Closed-form bound evaluators and the small-scale combinatorial oracles
that witness them (l1 ball packings, sparse-set counting, collision tails).

Every asymptotic form takes an explicit ``constant`` multiplier (default 1)
and is a *shape evaluator*: the underlying statements are order bounds, so no
constant baked in here is ground truth.  Logarithms are base 2 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import models
from .errors import InputError

KINDS = (
    "volume", "tradeoff", "general-lower", "block-lower", "tree-lower",
    "counting", "concentration-tail", "chernoff", "plan-d",
)


@dataclass(frozen=True)
class BoundQuery:
    kind: str
    params: dict = field(default_factory=dict)
    constant: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown bound kind {self.kind!r}; expected one of {KINDS}")
        if self.constant <= 0:
            raise InputError("constant must be positive")


def evaluate(kind: str, constant: float = 1.0, **params) -> float:
    return eval_bound(BoundQuery(kind, params, constant))


def _log2_pos(value: float, label: str) -> float:
    if value <= 1.0:
        raise InputError(f"{label} needs its argument > 1, got {value}")
    return math.log2(value)


def eval_bound(query: BoundQuery) -> float:
    """Evaluate one closed-form bound.

    Kinds and parameters (c is the query constant):

    * volume(d): c * 4^d                  -- max packing size in d dimensions
    * tradeoff(s, m, k, n): s*log2(m/(s k)) - c*log2(n/k)  -- signed slack of
      the column-sparsity/row tradeoff (>= 0 means consistent at constant c)
    * general-lower(n, k, l): c * k * log2(n/k) / log2(k/l)
    * block-lower(n, k, b):  c * k * (1 + log2(n/k)/log2(b))
    * tree-lower(n, k):      c * k * log2(n/k) / log2(log2(n/k))
    * counting(n, k, t, size): c * min(size*(e k/t)^t, (e n/t)^t)
    * concentration-tail(m, d, t, eps, delta): c * (delta*eps*m/(d t))^(-eps d t)
    * chernoff(mu, tau): c * (e^tau / (1+tau)^(1+tau))^mu
    * plan-d(n, k, l, eps): c * log2(n/l) / (eps * log2(k/l))
    """
    kind, p, c = query.kind, query.params, query.constant
    try:
        if kind == "volume":
            d = int(p["d"])
            if d < 0:
                raise InputError("volume needs d >= 0")
            return c * float(4 ** d)
        if kind == "tradeoff":
            s, m, k, n = p["s"], p["m"], p["k"], p["n"]
            if min(s, m, k, n) <= 0:
                raise InputError("tradeoff needs positive s, m, k, n")
            return s * math.log2(m / (s * k)) - c * _log2_pos(n / k, "log2(n/k)")
        if kind == "general-lower":
            n, k, l = p["n"], p["k"], p["l"]
            if l <= 0 or k <= l:
                raise InputError(f"log2(k/l) needs k > l > 0, got k={k}, l={l}")
            if n < k:
                raise InputError(f"log2(n/k) needs n >= k, got n={n}, k={k}")
            return c * k * math.log2(n / k) / _log2_pos(k / l, "log2(k/l)")
        if kind == "block-lower":
            n, k, b = p["n"], p["k"], p["b"]
            if n < k:
                raise InputError(f"log2(n/k) needs n >= k, got n={n}, k={k}")
            return c * k * (1.0 + math.log2(n / k) / _log2_pos(b, "log2(b)"))
        if kind == "tree-lower":
            n, k = p["n"], p["k"]
            inner = _log2_pos(n / k, "log2(n/k)")
            return c * k * inner / _log2_pos(inner, "log2(log2(n/k))")
        if kind == "counting":
            n, k, t, size = p["n"], p["k"], p["t"], p["size"]
            if t < 1:
                raise InputError("counting needs t >= 1")
            return c * min(size * (math.e * k / t) ** t, (math.e * n / t) ** t)
        if kind == "concentration-tail":
            m, d, t, eps, delta = p["m"], p["d"], p["t"], p["eps"], p["delta"]
            base = delta * eps * m / (d * t)
            if base <= 0:
                raise InputError(f"tail base delta*eps*m/(dt) must be positive, got {base}")
            return c * base ** (-eps * d * t)
        if kind == "chernoff":
            mu, tau = p["mu"], p["tau"]
            if tau <= 0 or mu <= 0:
                raise InputError("chernoff needs tau > 0 and mu > 0")
            return c * (math.exp(tau) / (1.0 + tau) ** (1.0 + tau)) ** mu
        if kind == "plan-d":
            n, k, l, eps = p["n"], p["k"], p["l"], p["eps"]
            if l <= 0 or k <= l:
                raise InputError(f"log2(k/l) needs k > l > 0, got k={k}, l={l}")
            if eps <= 0:
                raise InputError("plan-d needs eps > 0")
            return c * _log2_pos(n / l, "log2(n/l)") / (eps * math.log2(k / l))
    except KeyError as exc:
        raise InputError(f"{kind} is missing parameter {exc.args[0]!r}") from exc
    raise InputError(f"unknown bound kind {kind!r}")


# -- packing oracles -----------------------------------------------------------

@dataclass
class PackingResult:
    size: int
    ratio_bound: float  # ((norm_cap + min_dist/2) / (min_dist/2))^d from the ball argument


def packing_oracle(d: int, norm_cap: float = 1.1, min_dist: float = 0.9,
                   trials: int = 100_000, seed: int = 0) -> PackingResult:
    """Greedy randomized maximal packing of the l1 ball of radius norm_cap
    with pairwise l1 distances >= min_dist.  Never exceeds 4^d at the default
    radii."""
    if not 1 <= d <= 8:
        raise InputError(f"packing oracle supports 1 <= d <= 8, got {d}")
    if trials < 1:
        raise InputError("need trials >= 1")
    rng = np.random.default_rng(seed)
    radius = min_dist / 2.0
    bound = ((norm_cap + radius) / radius) ** d
    accepted = np.empty((trials, d))
    count = 0
    batch = 8192
    done = 0
    while done < trials:
        size = min(batch, trials - done)
        weights = rng.dirichlet(np.ones(d), size=size)
        # half the candidates hug the boundary: the greedy fills better there
        exponent = np.where(rng.random(size) < 0.5, 1.0 / d, 1.0 / (4.0 * d))
        radii = norm_cap * rng.random(size) ** exponent
        signs = rng.integers(0, 2, size=(size, d)) * 2.0 - 1.0
        cands = signs * weights * radii[:, None]
        for vec in cands:
            if count == 0 or np.abs(accepted[:count] - vec).sum(axis=1).min() >= min_dist:
                accepted[count] = vec
                count += 1
        done += size
    return PackingResult(size=count, ratio_bound=bound)


@dataclass
class PackingWitness:
    vectors: np.ndarray
    log2_size: float


def packing_witness(n: int, k: int, trials: int = 20_000, seed: int = 0) -> PackingWitness:
    """Greedy family of (k/2)-sparse unit-l1 vectors with pairwise l1
    distances >= 1; an empirical stand-in for the probabilistic packing."""
    if n > 64 or k > 8:
        raise InputError(f"witness oracle is desk-scale only (n <= 64, k <= 8), got n={n}, k={k}")
    if k < 2 or k > n:
        raise InputError(f"need 2 <= k <= n, got k={k}, n={n}")
    if trials < 1:
        raise InputError("need trials >= 1")
    s = k // 2
    rng = np.random.default_rng(seed)
    accepted = []
    acc = np.empty((trials, n))
    count = 0
    for _ in range(trials):
        idx = rng.choice(n, size=s, replace=False)
        vec = np.zeros(n)
        vec[idx] = (rng.integers(0, 2, size=s) * 2.0 - 1.0) * rng.dirichlet(np.ones(s))
        if count == 0 or np.abs(acc[:count] - vec).sum(axis=1).min() >= 1.0:
            acc[count] = vec
            count += 1
    accepted = acc[:count].copy()
    return PackingWitness(vectors=accepted, log2_size=math.log2(count))


# -- counting ------------------------------------------------------------------

@dataclass
class CountingReport:
    exact: int
    binom_model: int    # |M_k| * C(k, t)
    binom_ambient: int  # C(n, t)
    exp_model: float    # |M_k| * (e k / t)^t
    exp_ambient: float  # (e n / t)^t


def counting_check(model: models.Model, t: int,
                   cap: int = models.DEFAULT_ENUM_CAP) -> CountingReport:
    """Exact #(M_k, t) via enumeration, against the four counting bounds.

    Raises RuntimeError if the exact count exceeds any bound (it never
    should; that would be an internal inconsistency).
    """
    exact = models.count_sparse_sets(model, t, cap=cap)
    size = models.model_size(model)
    report = CountingReport(
        exact=exact,
        binom_model=size * math.comb(model.k, t),
        binom_ambient=math.comb(model.n, t),
        exp_model=size * (math.e * model.k / t) ** t,
        exp_ambient=(math.e * model.n / t) ** t,
    )
    slop = 1.0 + 1e-12
    if exact > report.binom_model or exact > report.binom_ambient:
        raise RuntimeError(f"exact count {exact} beats a binomial bound: {report}")
    if exact > report.exp_model * slop or exact > report.exp_ambient * slop:
        raise RuntimeError(f"exact count {exact} beats an exponential bound: {report}")
    return report


# -- collision tails -------------------------------------------------------------

def binomial_tail(n: int, p: float, cutoff: float) -> float:
    """Pr[Binomial(n, p) >= cutoff], exact summation via math.comb."""
    if n < 0:
        raise InputError("need n >= 0")
    p = min(1.0, max(0.0, p))
    start = max(0, math.ceil(cutoff - 1e-12))
    if start > n:
        return 0.0
    total = 0.0
    for i in range(start, n + 1):
        total += math.comb(n, i) * (p ** i) * ((1.0 - p) ** (n - i))
    return min(1.0, total)


@dataclass
class CollisionTailReport:
    frequency: float
    binom_tail: float
    concentration_bound: float  # concentration-tail evaluated at delta = 1


def collision_tail_estimate(m: int, d: int, t: int, eps: float,
                            trials: int = 10_000, seed: int = 0) -> CollisionTailReport:
    """Monte Carlo frequency of |N(T)| < (1 - eps) d t over random size-t sets
    of fresh left vertices, next to the exact binomial tail and the
    concentration-tail expression (qualitative comparison only)."""
    if trials < 1000:
        raise InputError(f"need trials >= 1000, got {trials}")
    if d > m:
        raise InputError(f"degree d={d} cannot exceed m={m}")
    rng = np.random.default_rng(seed)
    threshold = (1.0 - eps) * d * t
    hits = 0
    for _ in range(trials):
        cover: set = set()
        for _ in range(t):
            cover.update(int(v) for v in rng.choice(m, size=d, replace=False))
        if len(cover) < threshold - 1e-9:
            hits += 1
    return CollisionTailReport(
        frequency=hits / trials,
        binom_tail=binomial_tail(d * t, d * t / m, eps * d * t),
        concentration_bound=evaluate("concentration-tail", m=m, d=d, t=t, eps=eps, delta=1.0),
    )
