"""Verification oracles: expansion, generalized expansion, RIP-1 constants
(exact LP oracle and Monte Carlo), the sign-vector derandomization, and the
l1/l2/linf norm-gap inequality.

Exact modes scan every sparse subset of every family member; their work is
bounded by explicit caps and a CapError suggests the Monte Carlo mode when a
cap would be exceeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lp, models
from .errors import CapError, InputError
from .sketch import BipartiteGraph, as_array

#: cap on |M_k| * 2^k subset scans in exact expansion / slack modes
DEFAULT_WORK_CAP = 5_000_000

#: cap on the number of sign-pattern LPs in exact RIP modes
DEFAULT_LP_CAP = 200_000

_TOL = 1e-9


@dataclass
class ExpansionReport:
    ok: bool
    worst_support: tuple | None
    worst_ratio: float  # min over scanned S of |N(S)| / (d |S|)
    mode: str
    checked: int


@dataclass
class SlackReport:
    min_ratio: float  # min over sparse S of (sum_i max_{j in S} |a_ij|) / |S|
    worst_support: tuple | None
    max_col_norm: float
    checked: int


@dataclass
class RipReport:
    """Certified interval for the RIP-1 constant with a witness.

    Exact mode: eps_lo == eps_hi and the witness x is model-sparse with
    ||x||_1 = 1 and | ||Ax||_1 - 1 | = eps_lo.  Monte Carlo mode: eps_lo is
    the best sampled lower bound and eps_hi is +inf.
    """

    eps_lo: float
    eps_hi: float
    worst_support: tuple
    worst_vector: np.ndarray
    mode: str
    samples: int | None = None
    seed: int | None = None
    op_norm_1: float | None = None


# -- expansion ----------------------------------------------------------------

def expansion_check(graph: BipartiteGraph, model: models.Model, eps: float,
                    mode: str = "exact", cap: int = DEFAULT_WORK_CAP,
                    samples: int = 4000, seed: int = 0) -> ExpansionReport:
    """Does every sparse S satisfy |N(S)| >= (1 - eps) d |S|?

    Exact mode scans all subsets of all members (incremental neighborhood
    counts); Monte Carlo mode samples random members and random subsets.
    """
    if graph.n != model.n:
        raise InputError(f"graph has n={graph.n}, model has n={model.n}")
    if mode == "exact":
        work = models.model_size(model) * (2 ** model.k)
        if work > cap:
            raise CapError(
                f"exact expansion scan needs ~{work} subset steps, over the cap {cap}; "
                "use mode='monte-carlo'")
        return _expansion_exact(graph, model, eps)
    if mode in ("monte-carlo", "mc"):
        return _expansion_mc(graph, model, eps, samples, seed)
    raise InputError(f"unknown mode {mode!r}")


def _expansion_exact(graph: BipartiteGraph, model: models.Model, eps: float) -> ExpansionReport:
    d = graph.d
    adj = graph.adj
    counts = np.zeros(graph.m + 1, dtype=np.int64)
    worst = [math.inf, None]  # ratio, support
    checked = 0
    violation: list = []

    def scan(member, start, stack, cover):
        nonlocal checked
        for idx in range(start, len(member)):
            u = member[idx]
            added = 0
            for v in adj[u - 1]:
                if counts[v] == 0:
                    added += 1
                counts[v] += 1
            stack.append(u)
            cov = cover + added
            checked += 1
            ratio = cov / (d * len(stack))
            if ratio < worst[0]:
                worst[0] = ratio
                worst[1] = tuple(sorted(stack))
            if cov < (1.0 - eps) * d * len(stack) - _TOL:
                violation.append(tuple(sorted(stack)))
            else:
                scan(member, idx + 1, stack, cov)
            stack.pop()
            for v in adj[u - 1]:
                counts[v] -= 1
            if violation:
                return

    for member in models.enumerate_members(model, cap=None):
        scan(member, 0, [], 0)
        if violation:
            return ExpansionReport(False, violation[0], worst[0], "exact", checked)
    return ExpansionReport(True, worst[1], worst[0], "exact", checked)


def _expansion_mc(graph: BipartiteGraph, model: models.Model, eps: float,
                  samples: int, seed: int) -> ExpansionReport:
    d = graph.d
    rng = np.random.default_rng(seed)
    worst = math.inf
    worst_set = None
    checked = 0
    ok = True
    for _ in range(samples):
        member = models.random_member(model, rng)
        t = int(rng.integers(1, model.k + 1))
        pick = rng.choice(model.k, size=t, replace=False)
        subset = tuple(sorted(member[int(i)] for i in pick))
        for s in (member, subset):
            cov = len(set().union(*(graph.adj[u - 1] for u in s)))
            checked += 1
            ratio = cov / (d * len(s))
            if ratio < worst:
                worst = ratio
                worst_set = s
            if cov < (1.0 - eps) * d * len(s) - _TOL:
                ok = False
    return ExpansionReport(ok, worst_set, worst,
                           f"monte-carlo(samples={samples},seed={seed})", checked)


# -- generalized expansion -----------------------------------------------------

def row_max_sum(mat, support) -> float:
    """sum_i max_{j in S} |a_ij| computed with exact (fsum) accumulation."""
    arr = as_array(mat)
    idx = np.asarray(models.normalize_support(arr.shape[1], support), dtype=int) - 1
    if idx.size == 0:
        return 0.0
    return math.fsum(np.abs(arr[:, idx]).max(axis=1).tolist())


def generalized_expander_slack(mat, model: models.Model,
                               cap: int = DEFAULT_WORK_CAP) -> SlackReport:
    """Worst row-max-sum ratio over sparse sets, plus the max column l1 norm.

    The matrix is a generalized eps-expander for the model iff
    ``min_ratio >= 1 - eps`` and ``max_col_norm <= 1 + eps``.
    """
    arr = as_array(mat)
    if arr.shape[1] != model.n:
        raise InputError(f"matrix has {arr.shape[1]} columns, model has n={model.n}")
    work = models.model_size(model) * (2 ** model.k)
    if work > cap:
        raise CapError(f"exact slack scan needs ~{work} subset steps, over the cap {cap}")
    absa = np.abs(arr)
    max_col = float(absa.sum(axis=0).max())
    best = [math.inf, None]
    checked = 0

    def scan(member, start, stack, rowmax):
        nonlocal checked
        for idx in range(start, len(member)):
            u = member[idx]
            newmax = np.maximum(rowmax, absa[:, u - 1])
            stack.append(u)
            checked += 1
            ratio = math.fsum(newmax.tolist()) / len(stack)
            if ratio < best[0]:
                best[0] = ratio
                best[1] = tuple(sorted(stack))
            scan(member, idx + 1, stack, newmax)
            stack.pop()

    zero = np.zeros(arr.shape[0])
    for member in models.enumerate_members(model, cap=None):
        scan(member, 0, [], zero)
    return SlackReport(best[0], best[1], max_col, checked)


# -- RIP-1 interval -------------------------------------------------------------

def _sign_patterns(p: int) -> np.ndarray:
    """All sign vectors in {-1,+1}^p with first coordinate +1."""
    if p == 1:
        return np.ones((1, 1))
    rest = ((np.arange(1 << (p - 1))[:, None] >> np.arange(p - 1)) & 1)
    return np.hstack([np.ones((1 << (p - 1), 1)), 1.0 - 2.0 * rest])


def _merged_rows(body: np.ndarray) -> tuple:
    """Collapse rows equal up to sign into (rows, multiplicities).

    |(-v) @ x| == |v @ x|, so rows may be sign-normalized first; exact float
    equality grouping, which pays off on graph matrices where most rows
    within a support are single-edge duplicates.
    """
    if body.shape[0] == 0:
        return body, np.zeros(0)
    lead = np.argmax(body != 0.0, axis=1)
    signs = np.sign(body[np.arange(body.shape[0]), lead])
    signs[signs == 0.0] = 1.0
    uniq, counts = np.unique(body * signs[:, None], axis=0, return_counts=True)
    return uniq, counts.astype(float)


def rip_exact_over_supports(mat, supports) -> RipReport:
    """Exact RIP-1 deviation over a family of supports.

    Upper side: the max column l1 norm over the supports (the max of
    ||Ax||_1 over the unit cross-polytope face is attained at a vertex).
    Lower side: one LP per sign pattern per support, minimizing ||A_T x||_1
    over the face { sigma_j x_j >= 0, sum sigma_j x_j = 1 }.
    """
    arr = as_array(mat)
    n = arr.shape[1]
    col_norms = np.abs(arr).sum(axis=0)
    hi = -math.inf
    hi_col = None
    hi_support = None
    lo = math.inf
    lo_data = None
    for support in supports:
        idx = np.asarray(support, dtype=int) - 1
        local = int(np.argmax(col_norms[idx]))
        if col_norms[idx[local]] > hi:
            hi = float(col_norms[idx[local]])
            hi_col = support[local]
            hi_support = tuple(support)
        p = len(support)
        if p == 1:
            # single column: the face minimum is the column norm itself
            if col_norms[idx[0]] < lo:
                lo = float(col_norms[idx[0]])
                lo_data = (tuple(support), np.ones(1), np.ones(1))
            continue
        sub = arr[:, idx]
        live = np.flatnonzero(np.abs(sub).sum(axis=1) > 0)
        body, mult = _merged_rows(sub[live])
        for sigma in _sign_patterns(p):
            if body.size == 0:
                u, val = np.eye(p)[0], 0.0
            else:
                u, val = lp.min_l1_on_simplex(body * sigma, weights=mult)
            if val < lo:
                lo = val
                lo_data = (tuple(support), sigma.copy(), u.copy())
    if hi_support is None:
        raise InputError("no supports supplied")
    eps = max(hi - 1.0, 1.0 - lo)
    if hi - 1.0 >= 1.0 - lo:
        witness = np.zeros(n)
        witness[hi_col - 1] = 1.0
        support = hi_support
    else:
        support, sigma, u = lo_data
        witness = np.zeros(n)
        witness[np.asarray(support, dtype=int) - 1] = sigma * u
        support = tuple(support)
    return RipReport(eps_lo=eps, eps_hi=eps, worst_support=support,
                     worst_vector=witness, mode="exact")


def rip1_interval(mat, model: models.Model, mode: str = "exact",
                  cap: int = DEFAULT_LP_CAP, samples: int = 4000,
                  seed: int = 0) -> RipReport:
    """Certified RIP-1 constant of the matrix over the model.

    All members have size k, so every member is maximal and the per-member
    LP family also covers every sparse vector supported inside it.
    """
    arr = as_array(mat)
    if arr.shape[1] != model.n:
        raise InputError(f"matrix has {arr.shape[1]} columns, model has n={model.n}")
    if mode == "exact":
        lps = models.model_size(model) * (2 ** (model.k - 1))
        if lps > cap:
            raise CapError(
                f"exact RIP oracle needs {lps} LPs, over the cap {cap}; use mode='monte-carlo'")
        return rip_exact_over_supports(arr, models.enumerate_members(model, cap=None))
    if mode in ("monte-carlo", "mc"):
        return _rip_mc(arr, model, samples, seed)
    raise InputError(f"unknown mode {mode!r}")


def _rip_mc(arr: np.ndarray, model: models.Model, samples: int, seed: int,
            doubled: bool = False) -> RipReport:
    rng = np.random.default_rng(seed)
    n = arr.shape[1]
    worst = -1.0
    witness = None
    w_support = None
    for _ in range(samples):
        support = models.random_member(model, rng)
        if doubled:
            other = models.random_member(model, rng)
            support = tuple(sorted(set(support) | set(other)))
        idx = np.asarray(support, dtype=int) - 1
        signs = rng.integers(0, 2, size=idx.size) * 2.0 - 1.0
        mags = rng.exponential(size=idx.size)
        x = np.zeros(n)
        x[idx] = signs * mags / mags.sum()
        dev = abs(float(np.abs(arr @ x).sum()) - 1.0)
        if dev > worst:
            worst = dev
            witness = x
            w_support = support
    label = "monte-carlo" + ("-doubled" if doubled else "")
    return RipReport(eps_lo=worst, eps_hi=math.inf, worst_support=w_support,
                     worst_vector=witness, mode=label, samples=samples, seed=seed)


# -- sign vector ----------------------------------------------------------------

def sign_vector(mat) -> np.ndarray:
    """A +-1 vector x with ||Ax||_1 <= sum_i ||row_i||_2.

    Conditional-expectation greedy on Phi = sum_i sqrt((prefix dot)^2 +
    remaining squared mass): concavity of sqrt makes some next bit
    non-increasing, and Phi of a full assignment equals ||Ax||_1.
    """
    arr = as_array(mat)
    m, n = arr.shape
    sq = arr * arr
    # suffix[:, j] = sum of squares of columns j.. (suffix[:, n] = 0)
    suffix = np.zeros((m, n + 1))
    if n:
        suffix[:, :n] = np.cumsum(sq[:, ::-1], axis=1)[:, ::-1]
    dot = np.zeros(m)
    x = np.empty(n)
    for j in range(n):
        col = arr[:, j]
        rest = suffix[:, j + 1]
        plus = float(np.sqrt((dot + col) ** 2 + rest).sum())
        minus = float(np.sqrt((dot - col) ** 2 + rest).sum())
        if plus <= minus:
            x[j] = 1.0
            dot += col
        else:
            x[j] = -1.0
            dot -= col
    return x


# -- norm gap --------------------------------------------------------------------

def norm_gap_check(y) -> tuple:
    """(lhs, rhs) of ||y||_1 - ||y||_inf <= (1 + 1/sqrt(2)) (||y||_1 - ||y||_2)."""
    arr = np.asarray(y, dtype=float).ravel()
    if arr.size == 0:
        return 0.0, 0.0
    l1 = float(np.abs(arr).sum())
    linf = float(np.abs(arr).max())
    l2 = float(np.sqrt((arr * arr).sum()))
    return l1 - linf, (1.0 + 2.0 ** -0.5) * (l1 - l2)
