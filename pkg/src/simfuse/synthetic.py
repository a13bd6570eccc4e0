"""Planted-signal synthetic datasets.

Drugs and targets fall into hidden clusters; every drug cluster interacts
densely with the same number of target clusters and sparsely with the rest. Signal views are high
within a cluster and low across clusters (plus clipped Gaussian noise); noise
views are i.i.d. uniform random symmetric matrices that say nothing about the
interactions.
"""

from __future__ import annotations

import numpy as np

from .core import Dataset, EntityKind, InteractionMatrix, SimilarityView


def _clusters(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    return rng.permutation(np.arange(n) % k)


def block_similarity(labels: np.ndarray, rng: np.random.Generator, noise_level: float,
                     within: float = 0.7, across: float = 0.3) -> np.ndarray:
    same = labels[:, None] == labels[None, :]
    s = np.where(same, within, across).astype(float)
    if noise_level > 0:
        e = rng.normal(0.0, noise_level, s.shape)
        s = s + np.triu(e, 1) + np.triu(e, 1).T
    s = np.clip(s, 0.0, 1.0)
    np.fill_diagonal(s, 1.0)
    return s


def generate_synthetic(n_d: int = 60, n_t: int = 60, m_d: int = 4, m_t: int = 4, signal_views: int = 1,
                       noise_level: float = 0.2, seed: int = 0, n_clusters: int = 4,
                       blocks_per_cluster: int = 2, p_in: float = 0.6, p_out: float = 0.01,
                       within: float = 0.7, across: float = 0.3, return_truth: bool = False):
    """Build a dataset whose first ``signal_views`` views per side carry the planted structure."""
    if min(n_d, n_t) < 4:
        raise ValueError("synthetic datasets need at least 4 drugs and 4 targets")
    if not (1 <= signal_views <= m_d and signal_views <= m_t):
        raise ValueError("signal_views must lie in [1, min(m_d, m_t)]")
    rng = np.random.default_rng(seed)
    kd, kt = min(n_clusters, n_d // 2), min(n_clusters, n_t // 2)
    dlab, tlab = _clusters(rng, n_d, kd), _clusters(rng, n_t, kt)

    active = np.zeros((kd, kt), dtype=bool)
    for a in range(kd):
        active[a, rng.choice(kt, size=min(blocks_per_cluster, kt), replace=False)] = True
    dens = np.where(active[dlab][:, tlab], p_in, p_out)
    y = (rng.random((n_d, n_t)) < dens).astype(float)

    def views(labels, m, kind, prefix):
        out = []
        for h in range(m):
            if h < signal_views:
                s = block_similarity(labels, rng, noise_level, within, across)
                out.append(SimilarityView(s, kind, f"{prefix}signal{h}"))
            else:
                u = rng.random((labels.size, labels.size))
                s = np.triu(u, 1) + np.triu(u, 1).T
                np.fill_diagonal(s, 1.0)
                out.append(SimilarityView(s, kind, f"{prefix}noise{h}"))
        return out

    dv = views(dlab, m_d, EntityKind.DRUG, "d_")
    tv = views(tlab, m_t, EntityKind.TARGET, "t_")
    inter = InteractionMatrix(y, [f"D{i:04d}" for i in range(n_d)], [f"T{j:04d}" for j in range(n_t)])
    ds = Dataset(dv, tv, inter, (f"synthetic seed={seed} signal_views={signal_views} noise={noise_level}",))
    if return_truth:
        return ds, {"drug_clusters": dlab, "target_clusters": tlab, "active_blocks": active}
    return ds
