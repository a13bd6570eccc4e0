"""Exact k-nearest-neighbour retrieval over rows of a dense similarity matrix.

Neighbours are ranked by decreasing similarity; equal similarities rank by
ascending entity index. The query entity is never its own neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SimfuseError, SimilarityView


class EmptyCandidatePool(SimfuseError, ValueError):
    pass


@dataclass(frozen=True)
class NeighborList:
    indices: tuple[int, ...]
    similarities: tuple[float, ...]

    def __len__(self):
        return len(self.indices)


def _candidate_bool(n: int, candidate_mask) -> np.ndarray:
    if candidate_mask is None:
        return np.ones(n, dtype=bool)
    arr = np.asarray(candidate_mask)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise ValueError(f"boolean candidate mask must have shape ({n},)")
        return arr.copy()
    out = np.zeros(n, dtype=bool)
    out[np.asarray(sorted(candidate_mask), dtype=int)] = True
    return out


def knn_of(view, query_index: int, k: int, candidate_mask=None) -> NeighborList:
    """The ``k`` most similar candidates of ``query_index`` (self excluded)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    row = np.asarray(view.matrix if isinstance(view, SimilarityView) else view)[query_index]
    n = row.shape[0]
    if not 0 <= query_index < n:
        raise IndexError(query_index)
    cand = _candidate_bool(n, candidate_mask)
    cand[query_index] = False
    pool = np.flatnonzero(cand)
    if pool.size == 0:
        raise EmptyCandidatePool(f"no candidates left for query {query_index}")
    order = pool[np.argsort(-row[pool], kind="stable")][:k]
    return NeighborList(tuple(int(i) for i in order), tuple(float(row[i]) for i in order))


def _topk_rows(m: np.ndarray, k: int) -> np.ndarray:
    """Column indices of the k largest entries of each row, ties by ascending column.

    Excluded entries must be -inf and every row must hold at least k finite entries.
    Runs in O(rows * cols) apart from the final sort of k items per row.
    """
    r, n = m.shape
    if 4 * k >= n:
        return np.argsort(-m, axis=1, kind="stable")[:, :k]
    kth = -np.partition(-m, k - 1, axis=1)[:, k - 1][:, None]
    above = m > kth
    tied = m == kth
    need = k - above.sum(axis=1)
    sel = above | tied
    # rows holding more boundary ties than free slots keep the lowest columns
    crowded = np.flatnonzero(tied.sum(axis=1) > need)
    if crowded.size:
        t = tied[crowded]
        sel[crowded] = above[crowded] | (t & (np.cumsum(t, axis=1) <= need[crowded, None]))
    cols = np.nonzero(sel)[1].reshape(r, k)
    vals = np.take_along_axis(m, cols, axis=1)
    return np.take_along_axis(cols, np.argsort(-vals, axis=1, kind="stable"), axis=1)


def knn_table(matrix, k: int, candidate_mask=None, rows=None) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``knn_of`` for many query rows at once.

    Returns ``(indices, similarities)`` of shape (len(rows), k') where
    k' = min(k, pool size). Rows whose pool sizes differ (a query that is itself
    a candidate loses one slot) are handled separately; all must reach k'.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    s = np.asarray(matrix.matrix if isinstance(matrix, SimilarityView) else matrix, dtype=float)
    n = s.shape[0]
    rows = np.arange(n) if rows is None else np.asarray(rows, dtype=int)
    cand = _candidate_bool(n, candidate_mask)
    if rows.size == 0:
        return np.zeros((0, 0), dtype=int), np.zeros((0, 0))
    self_in = cand[rows]
    pool = cand.sum() - self_in
    if np.any(pool == 0):
        raise EmptyCandidatePool("a query row has no candidates")
    kk = int(min(k, pool.min()))
    if pool.max() > pool.min() and k > pool.min():
        # a query that is also a candidate would otherwise get fewer neighbours
        raise EmptyCandidatePool(f"k={k} exceeds the candidate pool of some rows")
    block = s[rows]  # fancy indexing copies
    if not cand.all():
        block[:, ~cand] = -np.inf
    block[np.arange(rows.size), rows] = -np.inf
    idx = _topk_rows(block, kk)
    return idx, np.take_along_axis(s[rows], idx, axis=1)
