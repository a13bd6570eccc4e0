"""Similarity network fusion and the two view-selection wrappers around it."""

from __future__ import annotations

import logging
import warnings
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .core import FusedSimilarity, Method, SimfuseError, as_views, check_views
from .knn import knn_table

log = logging.getLogger(__name__)


class TooFewViews(SimfuseError, ValueError):
    pass


@dataclass(frozen=True)
class SnfParams:
    k: int = 5
    iters: int = 2
    alpha: float = 1.0  # carried for configuration fidelity; the diffusion does not use it
    c1: float = 0.7
    c2: float = 0.6
    normalization: str = "column"  # or "row"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("SNF k must be >= 1")
        if self.iters < 1:
            raise ValueError("SNF iters must be >= 1")
        if not (0 < self.c1 <= 1 and 0 < self.c2 <= 1):
            raise ValueError("c1 and c2 must lie in (0, 1]")
        if self.normalization not in ("column", "row"):
            raise ValueError("normalization must be 'column' or 'row'")


def _mat(v) -> np.ndarray:
    return v.matrix if hasattr(v, "matrix") else np.asarray(v, dtype=float)


def snf_normalize(view, normalization: str = "column") -> np.ndarray:
    """Half of the mass on the diagonal, the other half spread off-diagonal.

    ``column``: P[i, j] = S[i, j] / (2 * sum_{l != j} S[l, j]), so every
    column's off-diagonal entries sum to 0.5. ``row`` is the usual SNF
    convention with the roles of rows and columns swapped.
    """
    s = np.asarray(_mat(view), dtype=float)
    n = s.shape[0]
    off = s.copy()
    np.fill_diagonal(off, 0.0)
    axis = 0 if normalization == "column" else 1
    denom = off.sum(axis=axis)
    bad = denom <= 0
    if bad.any():
        warnings.warn(f"{int(bad.sum())} degenerate line(s) in SNF normalisation; using uniform mass",
                      RuntimeWarning, stacklevel=2)
    safe = np.where(bad, 1.0, denom)
    if axis == 0:
        p = off / (2.0 * safe[None, :])
        p[:, bad] = 0.5 / (n - 1)
    else:
        p = off / (2.0 * safe[:, None])
        p[bad, :] = 0.5 / (n - 1)
    np.fill_diagonal(p, 0.5)
    return p


def snf_local_affinity(view, k: int = 5) -> np.ndarray:
    """Row-stochastic kNN sparsification (self excluded from the neighbourhood)."""
    s = np.asarray(_mat(view), dtype=float)
    n = s.shape[0]
    idx, sims = knn_table(s, k)
    denom = sims.sum(axis=1)
    bad = denom <= 0
    if bad.any():
        warnings.warn(f"{int(bad.sum())} zero-similarity neighbourhood(s); using uniform affinity",
                      RuntimeWarning, stacklevel=2)
    vals = np.where(bad[:, None], 1.0 / idx.shape[1], sims / np.where(bad, 1.0, denom)[:, None])
    q = np.zeros((n, n))
    np.put_along_axis(q, idx, vals, axis=1)
    return q


def snf_fuse(views, params: SnfParams | None = None) -> FusedSimilarity:
    """Synchronous cross-view diffusion for ``params.iters`` rounds, then the mean."""
    params = params or SnfParams()
    views = as_views(views)
    check_views(views)
    m = len(views)
    if m < 2:
        raise TooFewViews("SNF needs at least two views")
    p = [snf_normalize(v, params.normalization) for v in views]
    q = [snf_local_affinity(v, params.k) for v in views]
    for _ in range(params.iters):
        total = sum(p)
        p = [q[h] @ ((total - p[h]) / (m - 1)) @ q[h].T for h in range(m)]
    fused = sum(p) / m
    if not np.all(np.isfinite(fused)):
        raise FloatingPointError("SNF produced non-finite values")
    return FusedSimilarity(fused, Method.SNF, asdict(params))


def fuse_subset(views, subset: Sequence[int], params: SnfParams) -> np.ndarray:
    """A single selected view is used as-is; two or more go through SNF."""
    chosen = [views[h] for h in subset]
    if len(chosen) == 1:
        return np.array(_mat(chosen[0]), dtype=float)
    return snf_fuse(chosen, params).matrix


# -- SNF-H -----------------------------------------------------------------

def view_entropy(view) -> float:
    """Mean Shannon entropy of the row-normalised matrix, scaled to [0, 1] by log(n)."""
    s = np.asarray(_mat(view), dtype=float)
    n = s.shape[0]
    rows = s.sum(axis=1, keepdims=True)
    p = np.where(rows > 0, s / np.where(rows > 0, rows, 1.0), 1.0 / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(p > 0, p * np.log(p), 0.0).sum(axis=1)
    return float(h.mean() / np.log(n))


def snfh_select(views, params: SnfParams | None = None, atol: float = 1e-12) -> list[int]:
    """Heuristic selection: entropy filter, then greedy redundancy removal.

    A view is dropped when its entropy exceeds the c1-quantile of all view
    entropies. Among the survivors, pairs are visited by ascending Frobenius
    distance; a pair closer than the c2-quantile of the survivors' pairwise
    distances (or numerically identical) loses its higher-entropy member,
    the higher index on ties.
    """
    params = params or SnfParams()
    views = as_views(views)
    check_views(views)
    m = len(views)
    ent = np.array([view_entropy(v) for v in views])
    keep = [h for h in range(m) if not ent[h] > np.quantile(ent, params.c1)]
    pairs = [(float(np.linalg.norm(views[a].matrix - views[b].matrix)), a, b)
             for i, a in enumerate(keep) for b in keep[i + 1:]]
    if not pairs:
        return keep
    thr = float(np.quantile([d for d, _, _ in pairs], params.c2))
    alive = set(keep)
    for d, a, b in sorted(pairs):
        if a not in alive or b not in alive:
            continue
        if d < thr or d <= atol:
            drop = b if ent[b] >= ent[a] else a
            alive.discard(drop)
    return sorted(alive)


# -- SNF-F -----------------------------------------------------------------

def snff_select(views, y, base_model=None, cv_seed: int = 0, other_similarity=None,
                params: SnfParams | None = None, folds: int = 5) -> list[int]:
    """Greedy forward selection by inner pair-CV AUPR of a base model.

    ``other_similarity`` is the fused matrix of the opposite entity side the
    base model needs; the identity matrix is used when omitted. Views are
    added while the best candidate strictly improves AUPR; the result
    lists views in the order they were added.
    """
    from .cv import inner_pair_folds
    from .metrics import aupr
    from .predictor import NeighborhoodPredictor

    params = params or SnfParams()
    views = as_views(views)
    check_views(views)
    m = len(views)
    if m == 1:
        return [0]
    yy = np.asarray(getattr(y, "matrix", y), dtype=float)
    model = base_model if base_model is not None else NeighborhoodPredictor()
    other = np.eye(yy.shape[1]) if other_similarity is None else np.asarray(
        getattr(other_similarity, "matrix", other_similarity), dtype=float)
    fold_masks = inner_pair_folds(yy, folds, cv_seed)

    def score(subset):
        s = fuse_subset(views, subset, params)
        vals = []
        for test in fold_masks:
            y_train = np.where(test, 0.0, yy)
            model.fit(s, other, y_train)
            pred = model.score_matrix(np.arange(yy.shape[0]), np.arange(yy.shape[1]))
            if yy[test].any():
                vals.append(aupr(pred[test], yy[test]))
        return float(np.mean(vals)) if vals else 0.0

    selected: list[int] = []
    best = -np.inf
    while len(selected) < m:
        cands = [(score(selected + [h]), h) for h in range(m) if h not in selected]
        # max AUPR, lowest index on ties
        val, h = max(cands, key=lambda t: (t[0], -t[1]))
        if not val > best:
            break
        selected.append(h)
        best = val
        log.debug("snf-f added view %d (aupr %.4f)", h, val)
    return selected
