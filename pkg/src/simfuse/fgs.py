"""Fine-grained selective similarity integration.

Each entity gets its own weight for every view. Weights start from the local
interaction consistency of the entity's interacting pairs, zero rows of known
entities are filled with the global view utility, new entities borrow the
weights of their nearest known neighbours, the smallest ``floor(rho * m)``
weights of every row are dropped, and rows are renormalised. The fused matrix
combines the views row by row.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    EntityKind,
    FusedSimilarity,
    Method,
    ShapeMismatch,
    SimfuseError,
    WeightMatrix,
    as_views,
    check_views,
)
from .knn import knn_table

log = logging.getLogger(__name__)


class NoKnownEntities(SimfuseError, ValueError):
    pass


class ZeroRow(SimfuseError, ArithmeticError):
    pass


class DegenerateGlobal(RuntimeWarning):
    pass


@dataclass(frozen=True)
class FgsParams:
    k: int = 5
    rho: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("FGS k must be >= 1")
        if not 0 <= self.rho < 1:
            raise ValueError("FGS rho must lie in [0, 1)")


def n_filtered(rho: float, m: int) -> int:
    """Number of weights zeroed per row: floor(rho * m), leaving at least one view."""
    return max(0, min(math.floor(rho * m + 1e-9), m - 1))


def _w(w) -> np.ndarray:
    return np.array(w.matrix if isinstance(w, WeightMatrix) else w, dtype=float)


def _kind(w, default=EntityKind.DRUG) -> EntityKind:
    return w.entity_kind if isinstance(w, WeightMatrix) else default


def _index_mask(n: int, idx) -> np.ndarray:
    arr = np.asarray(idx)
    if arr.dtype == bool:
        return arr.copy()
    out = np.zeros(n, dtype=bool)
    out[np.asarray(sorted(idx), dtype=int)] = True
    return out


_POPCOUNT = np.array([bin(b).count("1") for b in range(256)], dtype=np.int64)


def shared_positive_counts(y: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """counts[i, r] = number of columns where both row i and row idx[i, r] are 1."""
    packed = np.packbits(y.astype(bool), axis=1)
    out = np.empty(idx.shape, dtype=np.int64)
    for r in range(idx.shape[1]):
        out[:, r] = _POPCOUNT[packed[idx[:, r]] & packed].sum(axis=1)
    return out


def fgs_init_weights(views, y, k: int = 5) -> WeightMatrix:
    """W[i, h] = sum_j C_h[i, j] * Y[i, j]; new entities get all-zero rows.

    Only interacting cells enter the sum, where the consistency is the
    similarity share of neighbours also interacting with j; summed over j this
    is the similarity-weighted count of positives shared with each neighbour.
    """
    views = as_views(views)
    check_views(views)
    yy = np.asarray(getattr(y, "matrix", y), dtype=float)
    w = np.empty((yy.shape[0], len(views)))
    for h, v in enumerate(views):
        idx, sims = knn_table(v.matrix, k)
        denom = sims.sum(axis=1)
        shared = (sims * shared_positive_counts(yy, idx)).sum(axis=1)
        w[:, h] = np.divide(shared, denom, out=np.zeros_like(shared), where=denom > 0)
    return WeightMatrix(w, views[0].entity_kind)


def fgs_complete_zero_rows(w, known_set, v=None) -> WeightMatrix:
    """Give every known entity with an all-zero row the column-sum vector of ``w``."""
    mat = _w(w)
    n, m = mat.shape
    known = _index_mask(n, known_set)
    gv = mat.sum(axis=0) if v is None else np.asarray(v, dtype=float)
    zero = known & ~mat.any(axis=1)
    if zero.any():
        if not gv.any():
            warnings.warn("global weight vector is all zero; using uniform rows", DegenerateGlobal,
                          stacklevel=2)
            gv = np.ones(m)
        mat[zero] = gv
    return WeightMatrix(mat, _kind(w))


def fgs_infer_new_entity_weights(w, views, new_set, known_set, k: int = 5,
                                 fallback=None) -> WeightMatrix:
    """Each new entity sums, per view, the weights of its k nearest known entities.

    Rows of known entities are only read. An inferred row that comes out all
    zero is replaced by ``fallback`` (the global vector; uniform if absent).
    """
    views = as_views(views)
    n = check_views(views)
    mat = _w(w)
    if mat.shape != (n, len(views)):
        raise ShapeMismatch(f"weights {mat.shape} for {len(views)} views of size {n}")
    new = np.flatnonzero(_index_mask(n, new_set))
    known = _index_mask(n, known_set)
    if new.size == 0:
        return WeightMatrix(mat, _kind(w))
    if not known.any():
        raise NoKnownEntities("cannot infer weights of new entities without known ones")
    if known[new].any():
        raise ValueError("new and known entity sets overlap")
    src = mat.copy()
    for h, v in enumerate(views):
        idx, _ = knn_table(v.matrix, k, candidate_mask=known, rows=new)
        mat[new, h] = src[idx, h].sum(axis=1)
    zero = ~mat[new].any(axis=1)
    if zero.any():
        warnings.warn(f"{int(zero.sum())} inferred weight row(s) are all zero; using the global vector",
                      DegenerateGlobal, stacklevel=2)
        fb = np.ones(mat.shape[1]) if fallback is None or not np.any(fallback) else np.asarray(fallback)
        mat[new[zero]] = fb
    return WeightMatrix(mat, _kind(w))


def fgs_select(w, rho: float) -> WeightMatrix:
    """Zero the floor(rho * m) smallest weights of every row (lower view index first on ties)."""
    if not 0 <= rho < 1:
        raise ValueError("rho must lie in [0, 1)")
    mat = _w(w)
    drop = n_filtered(rho, mat.shape[1])
    if drop:
        order = np.argsort(mat, axis=1, kind="stable")[:, :drop]
        np.put_along_axis(mat, order, 0.0, axis=1)
    return WeightMatrix(mat, _kind(w))


def fgs_normalize(w) -> WeightMatrix:
    mat = _w(w)
    s = mat.sum(axis=1, keepdims=True)
    if np.any(s <= 0):
        raise ZeroRow(f"rows {np.flatnonzero(s[:, 0] <= 0).tolist()} have no positive weight")
    return WeightMatrix(mat / s, _kind(w))


def fuse_rows(views, w) -> np.ndarray:
    """Row-wise combination: fused[i] = sum_h W[i, h] * S_h[i]."""
    views = as_views(views)
    mat = _w(w)
    out = np.zeros_like(views[0].matrix)
    for h, v in enumerate(views):
        out += mat[:, h:h + 1] * v.matrix
    return out


def fgs_weights(views, y, params: FgsParams | None = None, init=None) -> WeightMatrix:
    """Final fine-grained weight matrix.

    ``init`` replaces the consistency-based initial weights (n x m), which is
    how the reductions to AVE and LIC are exercised.
    """
    params = params or FgsParams()
    views = as_views(views)
    n = check_views(views)
    yy = np.asarray(getattr(y, "matrix", y), dtype=float)
    if yy.shape[0] != n:
        raise ShapeMismatch(f"{yy.shape[0]} interaction rows for views of size {n}")
    known = yy.any(axis=1)
    if init is None:
        w0 = fgs_init_weights(views, yy, params.k)
    else:
        w0 = WeightMatrix(np.where(known[:, None], _w(init), 0.0), views[0].entity_kind)
    v = w0.matrix.sum(axis=0)
    w1 = fgs_complete_zero_rows(w0, known, v)
    w2 = fgs_infer_new_entity_weights(w1, views, ~known, known, params.k, fallback=v)
    w3 = fgs_select(w2, params.rho)
    return fgs_normalize(w3)


def fgs_fuse(views, y, params: FgsParams | None = None, init=None) -> tuple[FusedSimilarity, WeightMatrix]:
    params = params or FgsParams()
    w = fgs_weights(views, y, params, init)
    fused = FusedSimilarity(fuse_rows(views, w), Method.FGS, {"k": params.k, "rho": params.rho})
    return fused, w
