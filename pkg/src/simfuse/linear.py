"""Linear similarity integration: AVE, KA, HSIC and LIC global view weights.

All four produce one weight per view on the probability simplex, and the
fused matrix is the entry-wise convex combination of the views.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    DegenerateInput,
    FusedSimilarity,
    InteractionMatrix,
    Method,
    ShapeMismatch,
    SimfuseError,
    SimilarityView,
    as_views,
    check_views,
)
from .knn import knn_table

log = logging.getLogger(__name__)


class AllZeroAlignment(SimfuseError, ValueError):
    pass


class NoInteractions(SimfuseError, ValueError):
    pass


class NonFinite(SimfuseError, FloatingPointError):
    pass


@dataclass(frozen=True, eq=False)
class GlobalWeights:
    weights: np.ndarray
    method: Method
    objective_trace: tuple[float, ...] = field(default=())

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "method", Method(self.method))

    def __len__(self):
        return self.weights.size


def _y(y) -> np.ndarray:
    return np.asarray(y.matrix if isinstance(y, InteractionMatrix) else y, dtype=float)


def _mat(v) -> np.ndarray:
    return v.matrix if isinstance(v, SimilarityView) else np.asarray(v, dtype=float)


def fuse_linear(views: Sequence[SimilarityView], w, params=None) -> FusedSimilarity:
    views = as_views(views)
    n = check_views(views)
    weights = w.weights if isinstance(w, GlobalWeights) else np.asarray(w, dtype=float)
    if weights.shape != (len(views),):
        raise ShapeMismatch(f"{weights.size} weights for {len(views)} views")
    out = np.zeros((n, n))
    for wh, v in zip(weights, views):
        out += wh * v.matrix
    method = w.method if isinstance(w, GlobalWeights) else Method.AVE
    p = {"weights": [float(x) for x in weights]}
    p.update(params or {})
    return FusedSimilarity(out, method, p)


def _to_simplex(values: np.ndarray) -> np.ndarray:
    return values / values.sum()


def ave_weights(m: int) -> GlobalWeights:
    if m < 1:
        raise ValueError("m must be >= 1")
    return GlobalWeights(np.full(m, 1.0 / m), Method.AVE)


def ideal_similarity(y) -> np.ndarray:
    """Z = Y Y^T, rows of ``y`` being the entities to fuse."""
    y = _y(y)
    return y @ y.T


def kernel_alignment(a, z) -> float:
    """Normalised Frobenius inner product <A, Z> / (|A| |Z|)."""
    a = _mat(a)
    z = np.asarray(z, dtype=float)
    if a.shape != z.shape:
        raise ShapeMismatch(f"alignment of {a.shape} with {z.shape}")
    na = np.sqrt(np.sum(a * a))
    nz = np.sqrt(np.sum(z * z))
    if na == 0 or nz == 0:
        raise DegenerateInput("kernel alignment with an all-zero matrix")
    return float(np.sum(a * z) / (na * nz))


def ka_weights(views, y) -> GlobalWeights:
    views = as_views(views)
    check_views(views)
    z = ideal_similarity(y)
    if not z.any():
        raise AllZeroAlignment("interaction matrix has no ones; every alignment is zero")
    align = np.array([kernel_alignment(v, z) for v in views])
    if align.sum() <= 0:
        raise AllZeroAlignment("all views have zero alignment with the ideal similarity")
    return GlobalWeights(_to_simplex(align), Method.KA)


# -- HSIC ------------------------------------------------------------------

def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = 1} (sort-based, O(m log m))."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


@dataclass(frozen=True, eq=False)
class HsicProblem:
    """The HSIC multiple-kernel objective reduced to the m weights.

    f(w) = lin . w + lambda1 * w' L w + lambda2 * |w|^2   (``penalize=False``)

    With ``penalize=True`` both regularisers enter with a minus sign.
    """

    lin: np.ndarray
    laplacian: np.ndarray
    lambda1: float
    lambda2: float
    penalize: bool = False

    @property
    def quad(self) -> np.ndarray:
        sign = -1.0 if self.penalize else 1.0
        m = self.lin.size
        return sign * (self.lambda1 * self.laplacian + self.lambda2 * np.eye(m))

    def value(self, w) -> float:
        w = np.asarray(w, dtype=float)
        return float(self.lin @ w + w @ self.quad @ w)

    def gradient(self, w) -> np.ndarray:
        return self.lin + 2.0 * self.quad @ w


def hsic_problem(views, y, lambda1: float = 0.25, lambda2: float = 0.25,
                 penalize: bool = False) -> HsicProblem:
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("lambda1 and lambda2 must be >= 0")
    views = as_views(views)
    n = check_views(views)
    z = ideal_similarity(y)
    # H Z H, with H the centring matrix
    zc = z - z.mean(axis=0, keepdims=True)
    zc = zc - zc.mean(axis=1, keepdims=True)
    lin = np.array([np.sum(v.matrix * zc.T) for v in views]) / n**2
    m = len(views)
    u = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            u[i, j] = u[j, i] = kernel_alignment(views[i], views[j].matrix)
    lap = np.diag(u.sum(axis=1)) - u
    return HsicProblem(lin, lap, float(lambda1), float(lambda2), penalize)


def _ascend(problem: HsicProblem, w0: np.ndarray, step: float, max_iters: int,
            tol: float) -> tuple[np.ndarray, list[float]]:
    w = project_simplex(w0)
    trace = [problem.value(w)]
    for _ in range(max_iters):
        w_new = project_simplex(w + step * problem.gradient(w))
        f_new = problem.value(w_new)
        if not np.isfinite(f_new):
            raise NonFinite("HSIC objective became non-finite")
        if f_new < trace[-1]:
            # only reachable through round-off; keep the monotone iterate
            break
        w = w_new
        trace.append(f_new)
        if trace[-1] - trace[-2] <= tol:
            break
    return w, trace


def hsic_weights(views, y, lambda1: float = 0.25, lambda2: float = 0.25,
                 max_iters: int = 500, tol: float = 1e-9,
                 penalize: bool = False) -> GlobalWeights:
    """Maximise the HSIC objective over the simplex by projected gradient ascent.

    The printed objective is convex in w (L is a graph Laplacian), so its
    maximum sits on a vertex and a single ascent from the barycentre can stall
    on a symmetric stationary point. The ascent is therefore also started from
    every vertex and the best end point is kept (first one on ties).
    """
    problem = hsic_problem(views, y, lambda1, lambda2, penalize)
    m = problem.lin.size
    if not np.all(np.isfinite(problem.lin)):
        raise NonFinite("non-finite HSIC coefficients")
    if m == 1:
        return GlobalWeights(np.ones(1), Method.HSIC, (problem.value(np.ones(1)),))
    lip = 2.0 * np.linalg.norm(problem.quad, 2)
    step = 1.0 / lip if lip > 0 else 1.0
    starts = [np.full(m, 1.0 / m)] + list(np.eye(m))
    best_w, best_trace = None, None
    for w0 in starts:
        w, trace = _ascend(problem, w0, step, max_iters, tol)
        if best_trace is None or trace[-1] > best_trace[-1]:
            best_w, best_trace = w, trace
    best_w = best_w / best_w.sum()
    return GlobalWeights(best_w, Method.HSIC, tuple(best_trace))


# -- LIC -------------------------------------------------------------------

def lic_consistency_matrix(view, y, k: int = 5, literal_indicator: bool = False) -> np.ndarray:
    """Similarity-weighted agreement of each entity's kNNs with its own labels.

    ``C[i, j]`` is the share (by similarity) of i's k nearest neighbours l whose
    label ``Y[l, j]`` equals ``Y[i, j]``. ``literal_indicator=True`` compares
    ``Y[i, l]`` instead, indexing a column by the neighbour id; it needs
    n_rows <= n_cols. A neighbourhood with zero total similarity gives 0.
    """
    s = _mat(view)
    y = _y(y)
    n, n_t = y.shape
    if s.shape != (n, n):
        raise ShapeMismatch(f"view {s.shape} vs interactions {y.shape}")
    idx, sims = knn_table(s, k)
    denom = sims.sum(axis=1)
    # binary labels: [a == b] = a*b + (1-a)*(1-b), so only the similarity mass
    # of neighbours labelled 1 is needed
    if literal_indicator:
        if n > n_t:
            raise ShapeMismatch("literal indicator needs at least as many columns as rows")
        pos = (sims * np.take_along_axis(y, idx, axis=1)).sum(axis=1)[:, None]  # Y[i, l]
    else:
        pos = np.zeros_like(y)
        for r in range(idx.shape[1]):
            pos += sims[:, r:r + 1] * y[idx[:, r]]  # Y[l, j]
    num = y * pos + (1.0 - y) * (denom[:, None] - pos)
    out = np.zeros_like(num)
    ok = denom > 0
    out[ok] = num[ok] / denom[ok, None]
    return out


def lic_view_scores(views, y, k: int = 5, literal_indicator: bool = False) -> np.ndarray:
    """Mean consistency over the interacting pairs, one value per view."""
    views = as_views(views)
    check_views(views)
    yy = _y(y)
    pos = yy == 1
    if not pos.any():
        raise NoInteractions("LIC weights need at least one interaction")
    return np.array([lic_consistency_matrix(v, yy, k, literal_indicator)[pos].mean() for v in views])


def lic_weights(views, y, k: int = 5, literal_indicator: bool = False) -> GlobalWeights:
    c = lic_view_scores(views, y, k, literal_indicator)
    if c.sum() <= 0:
        log.warning("all LIC view scores are zero; falling back to uniform weights")
        return GlobalWeights(np.full(c.size, 1.0 / c.size), Method.LIC)
    return GlobalWeights(_to_simplex(c), Method.LIC)
