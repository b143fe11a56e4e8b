"""Dense two-phase simplex with Bland's rule.

The exact oracles and the l1 regressions only ever produce small problems
(a few dozen variables and rows), so a plain dense tableau is enough.  All
variables are nonnegative; callers split free variables themselves.

An external solver can be plugged in through :func:`use_solver`; it must
accept the same ``(c, a_ub, b_ub, a_eq, b_eq)`` signature as
:func:`solve_min` and return ``(z, value)``.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, LpError

TOL = 1e-9

_solver = None


def use_solver(fn) -> None:
    """Install an external LP backend (None restores the built-in simplex)."""
    global _solver
    _solver = fn


def solve_min(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, tol=TOL, max_iter=None):
    """Minimize ``c @ z`` subject to ``a_ub @ z <= b_ub``, ``a_eq @ z == b_eq``
    and ``z >= 0``.  Returns ``(z, value)``.

    Deterministic: Bland's entering/leaving rule, so no cycling and identical
    pivots on identical input.
    """
    if _solver is not None:
        return _solver(c, a_ub, b_ub, a_eq, b_eq)

    c = np.asarray(c, dtype=float)
    nvar = c.size
    rows = []
    rhs = []
    n_ub = 0
    if a_ub is not None:
        a_ub = np.asarray(a_ub, dtype=float)
        b_ub = np.asarray(b_ub, dtype=float)
        n_ub = a_ub.shape[0]
        rows.append(np.hstack([a_ub, np.eye(n_ub)]))
        rhs.append(b_ub)
    if a_eq is not None:
        a_eq = np.asarray(a_eq, dtype=float)
        b_eq = np.asarray(b_eq, dtype=float)
        pad = np.zeros((a_eq.shape[0], n_ub))
        rows.append(np.hstack([a_eq, pad]))
        rhs.append(b_eq)
    if not rows:
        raise InputError("LP needs at least one constraint")
    mat = np.vstack(rows)
    b = np.concatenate(rhs)
    nstruct = nvar + n_ub
    nrows = mat.shape[0]

    flip = b < 0
    mat[flip] *= -1.0
    b = np.where(flip, -b, b)

    # slack columns double as the initial basis wherever they kept coefficient +1
    basis = np.full(nrows, -1, dtype=int)
    need_art = []
    for i in range(nrows):
        if i < n_ub and not flip[i]:
            basis[i] = nvar + i
        else:
            need_art.append(i)
    nart = len(need_art)
    tab = np.zeros((nrows + 1, nstruct + nart + 1))
    tab[:nrows, :nstruct] = mat
    tab[:nrows, -1] = b
    for j, i in enumerate(need_art):
        tab[i, nstruct + j] = 1.0
        basis[i] = nstruct + j

    if max_iter is None:
        max_iter = 200 * (nrows + nstruct + nart + 10)

    if nart:
        tab[-1, :] = 0.0
        tab[-1, nstruct:nstruct + nart] = 1.0
        for i in need_art:
            tab[-1, :] -= tab[i, :]
        _iterate(tab, basis, nstruct + nart, tol, max_iter)
        if tab[-1, -1] < -tol * 10:
            raise LpError(f"infeasible (phase-1 objective {-tab[-1, -1]:.3e})")
        tab, basis = _drop_artificials(tab, basis, nstruct, tol)

    nrows = len(basis)
    tab[-1, :] = 0.0
    tab[-1, :nvar] = c
    for i in range(nrows):
        cb = tab[-1, basis[i]]
        if cb != 0.0:
            tab[-1, :] -= cb * tab[i, :]
    _iterate(tab, basis, nstruct, tol, max_iter)

    z = np.zeros(nstruct)
    for i in range(nrows):
        z[basis[i]] = tab[i, -1]
    x = z[:nvar]
    return x, float(c @ x)


def _iterate(tab, basis, ncols, tol, max_iter):
    nrows = len(basis)
    body = tab[:nrows]
    for _ in range(max_iter):
        reduced = tab[-1, :ncols]
        negs = np.flatnonzero(reduced < -tol)
        if negs.size == 0:
            return
        enter = int(negs[0])  # Bland: smallest eligible index
        col = body[:, enter]
        pos = np.flatnonzero(col > tol)
        if pos.size == 0:
            raise LpError("unbounded")
        ratios = body[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + tol * (1.0 + abs(best))]
        leave = int(ties[np.argmin(basis[ties])])  # Bland: smallest basic index
        _pivot(tab, leave, enter)
        basis[leave] = enter
    raise LpError(f"simplex iteration limit {max_iter} reached")


def _pivot(tab, row, col):
    tab[row, :] /= tab[row, col]
    column = tab[:, col].copy()
    column[row] = 0.0
    tab -= np.outer(column, tab[row, :])
    tab[:, col] = 0.0
    tab[row, col] = 1.0


def _drop_artificials(tab, basis, nstruct, tol):
    """Pivot basic artificials out after phase 1, dropping redundant rows."""
    keep = []
    for i in range(len(basis)):
        if basis[i] < nstruct:
            keep.append(i)
            continue
        cand = np.flatnonzero(np.abs(tab[i, :nstruct]) > tol)
        if cand.size:
            _pivot(tab, i, int(cand[0]))
            basis[i] = int(cand[0])
            keep.append(i)
        # else: all-zero row, redundant constraint -> drop
    rows = keep + [tab.shape[0] - 1]
    new_tab = tab[rows, :][:, list(range(nstruct)) + [tab.shape[1] - 1]]
    new_basis = basis[keep]
    return new_tab, new_basis


# -- problem builders used by the oracles -------------------------------------
#
# Both builders use |r| = r + 2*max(0, -r), which models an l1 objective with
# one inequality row per matrix row instead of two.

def l1_fit(a, y):
    """min over free x of ``||y - a @ x||_1``; returns ``(x, residual)``.

    Rows of ``a`` that are entirely zero cannot be fit and contribute
    ``|y_i|`` to the residual directly.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    y = np.asarray(y, dtype=float)
    m, p = a.shape
    if y.shape != (m,):
        raise InputError(f"y has shape {y.shape}, expected ({m},)")
    live = np.flatnonzero(np.abs(a).sum(axis=1) > 0)
    base = float(np.abs(np.delete(y, live)).sum())
    if p == 0 or live.size == 0:
        return np.zeros(p), float(np.abs(y).sum())
    sub = a[live]
    yy = y[live]
    mm = live.size
    # |y - ax| = (y - ax) + 2 max(0, ax - y): variables (x+, x-, t) >= 0 with
    # t >= ax - y, objective sum(y) - 1'a x + 2 sum(t)
    col = sub.sum(axis=0)
    c = np.concatenate([-col, col, 2.0 * np.ones(mm)])
    a_ub = np.hstack([sub, -sub, -np.eye(mm)])
    z, _ = solve_min(c, a_ub, yy)
    x = z[:p] - z[p:2 * p]
    return x, float(np.abs(yy - sub @ x).sum()) + base


def min_l1_on_simplex(mat, weights=None):
    """min of ``sum_i w_i |(mat @ u)_i|`` over the probability simplex.

    ``weights`` default to 1 (the plain l1 norm of ``mat @ u``); they let
    callers merge duplicate rows with multiplicities.  Returns ``(u, value)``.
    """
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    m, p = mat.shape
    if p == 0:
        raise InputError("simplex minimization needs at least one column")
    w = np.ones(m) if weights is None else np.asarray(weights, dtype=float)
    live = np.flatnonzero(np.abs(mat).sum(axis=1) > 0)
    if live.size == 0:
        u = np.zeros(p)
        u[0] = 1.0
        return u, 0.0
    sub = mat[live]
    ww = w[live]
    mm = live.size
    # w|Mu| = w(Mu) + 2w max(0, -Mu): variables (u, t) >= 0 with t >= -Mu
    c = np.concatenate([ww @ sub, 2.0 * ww])
    a_ub = np.hstack([-sub, -np.eye(mm)])
    b_ub = np.zeros(mm)
    a_eq = np.concatenate([np.ones(p), np.zeros(mm)])[None, :]
    b_eq = np.ones(1)
    z, _ = solve_min(c, a_ub, b_ub, a_eq, b_eq)
    u = z[:p]
    return u, float(ww @ np.abs(sub @ u))
