"""Ranking metrics with exact tie handling."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from .core import SimfuseError


class DegenerateLabels(SimfuseError, ValueError):
    pass


class NoPositives(DegenerateLabels):
    pass


def _prep(scores, labels):
    s = np.asarray(scores, dtype=float).ravel()
    y = np.asarray(labels).ravel()
    if s.shape != y.shape:
        raise ValueError(f"{s.size} scores for {y.size} labels")
    return s, y.astype(bool)


def auc(scores, labels) -> float:
    """Probability that a random positive outranks a random negative (ties count 1/2)."""
    s, y = _prep(scores, labels)
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("AUC needs at least one positive and one negative label")
    ranks = rankdata(s)  # average ranks over ties
    return float((ranks[y].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def aupr(scores, labels) -> float:
    """Step-wise area under the precision-recall curve (average precision).

    Scores are swept in decreasing order and equal scores are consumed as one
    block, so the value does not depend on the order of tied items.
    """
    s, y = _prep(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        raise NoPositives("AUPR needs at least one positive label")
    order = np.argsort(-s, kind="stable")
    s, y = s[order], y[order]
    # last index of every block of equal scores
    ends = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp = np.cumsum(y)[ends]
    seen = ends + 1
    gained = np.diff(np.r_[0, tp])
    return float(np.sum((tp / seen) * gained) / n_pos)
