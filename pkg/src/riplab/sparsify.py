"""Column sparsification: keep one entry per row within each partition part,
then keep exactly the columns meeting the Markov thresholds.

For a matrix certified (k, eps)-RIP-1 the thresholds are perturbation
<= 9*eps per kept column and ceil(3m/k) nonzeros per kept column, and at
least a third of the covered columns must survive; fewer survivors mean the
input was not actually certified and raise CertificationError.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models
from .errors import CertificationError, InputError
from .sketch import MeasurementMatrix, as_array

#: slack when comparing float perturbations against the 9*eps threshold
_FP_SLOP = 1e-12


@dataclass
class SparsifyOutcome:
    b: MeasurementMatrix
    kept_columns: list
    per_column_perturbation: np.ndarray  # aligned with kept_columns
    per_column_nnz: np.ndarray           # aligned with kept_columns
    covered_columns: list                # every column inside some part
    covered_perturbation: np.ndarray
    covered_nnz: np.ndarray
    kept_mask: np.ndarray
    perturbation_limit: float
    nnz_limit: int


def default_partition(n: int, k: int) -> list:
    """Consecutive parts of size k covering [n]; the last may be smaller."""
    parts = [tuple(range(i + 1, min(i + k, n) + 1)) for i in range(0, n, k)]
    return parts


def sparsify(mat, k: int, eps_in: float, partition=None) -> SparsifyOutcome:
    """Per row and per part keep only the largest-magnitude entry (ties to the
    lowest column), then keep the columns with perturbation <= 9*eps_in and
    at most ceil(3m/k) nonzeros.

    ``partition`` defaults to consecutive size-k parts covering [n]; parts
    must be pairwise disjoint.  Columns outside every part are dropped.
    """
    arr = as_array(mat)
    m, n = arr.shape
    if k < 1:
        raise InputError(f"need k >= 1, got {k}")
    if eps_in < 0:
        raise InputError(f"need eps_in >= 0, got {eps_in}")
    if partition is None:
        partition = default_partition(n, k)
    parts = [models.normalize_support(n, part) for part in partition]
    covered: list = []
    seen: set = set()
    for part in parts:
        if not part:
            raise InputError("empty partition part")
        if seen.intersection(part):
            raise InputError("partition parts must be pairwise disjoint")
        seen.update(part)
        covered.extend(part)
    covered.sort()

    pruned = np.zeros_like(arr)
    rows = np.arange(m)
    for part in parts:
        idx = np.asarray(part, dtype=int) - 1
        winners = np.argmax(np.abs(arr[:, idx]), axis=1)  # first max: lowest column
        win_cols = idx[winners]
        pruned[rows, win_cols] = arr[rows, win_cols]

    cov_idx = np.asarray(covered, dtype=int) - 1
    perturbation = np.abs(arr[:, cov_idx] - pruned[:, cov_idx]).sum(axis=0)
    nnz = np.count_nonzero(pruned[:, cov_idx], axis=0)
    pert_limit = 9.0 * eps_in
    nnz_limit = -(-3 * m // k)  # ceil(3m/k)
    keep = (perturbation <= pert_limit + _FP_SLOP) & (nnz <= nnz_limit)
    kept_columns = [covered[i] for i in np.flatnonzero(keep)]
    required = -(-len(covered) // 3)  # ceil of a third of the covered columns
    if len(kept_columns) < required:
        raise CertificationError(
            f"only {len(kept_columns)} of {len(covered)} columns met the thresholds "
            f"(needed {required}); the input was not (k={k}, eps={eps_in})-RIP-1")
    kept_idx = np.asarray(kept_columns, dtype=int) - 1
    b = MeasurementMatrix(pruned[:, kept_idx], provenance="sparsified")
    return SparsifyOutcome(
        b=b,
        kept_columns=kept_columns,
        per_column_perturbation=perturbation[keep],
        per_column_nnz=nnz[keep],
        covered_columns=covered,
        covered_perturbation=perturbation,
        covered_nnz=nnz,
        kept_mask=keep,
        perturbation_limit=pert_limit,
        nnz_limit=nnz_limit,
    )


def model_sparsify(mat, model: models.Model, eps_in: float,
                   c_part: float = models.DEFAULT_C_PART) -> tuple:
    """Sparsify along the model's sparse partition; returns ``(outcome, l)``.

    l is the order for which the output should be (l, O(eps_in))-RIP-1 on its
    kept columns, to be confirmed downstream with rip1_interval over the
    general model of order l.
    """
    arr = as_array(mat)
    if arr.shape[1] != model.n:
        raise InputError(f"matrix has {arr.shape[1]} columns, model has n={model.n}")
    l, parts = models.model_partition(model, c_part=c_part)
    outcome = sparsify(arr, model.k, eps_in, partition=parts)
    return outcome, l
