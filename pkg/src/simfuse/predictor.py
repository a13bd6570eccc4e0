"""Neighbourhood interaction-profile predictor and the base-model protocol.

The built-in model scores a pair from the interaction profiles of the k most
similar *known* drugs (targets), weighting the r-th neighbour by
``eta**(r-1) * similarity``. Which estimate is used depends on whether the
drug and the target of the pair have interactions in the training matrix.
"""

from __future__ import annotations

import enum
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .knn import knn_table


class Mode(str, enum.Enum):
    NEW_DRUG = "new_drug"
    NEW_TARGET = "new_target"
    NEW_BOTH = "new_both"
    KNOWN_PAIR = "known_pair"


@runtime_checkable
class BaseModel(Protocol):
    def fit(self, fused_drug, fused_target, y_train) -> "BaseModel": ...

    def predict(self, pairs: Sequence[tuple[int, int]]) -> np.ndarray: ...

    def score_matrix(self, drugs, targets) -> np.ndarray: ...


def _arr(x) -> np.ndarray:
    return np.asarray(x.matrix if hasattr(x, "matrix") else x, dtype=float)


def neighbor_weights(s: np.ndarray, known: np.ndarray, k: int, eta: float) -> np.ndarray:
    """Dense (n x n) matrix of decayed neighbour weights over known entities.

    Row i holds ``eta**(r-1) * s[i, n_r]`` at the column of its r-th nearest
    known neighbour (itself excluded), zero elsewhere.
    """
    n = s.shape[0]
    out = np.zeros((n, n))
    n_known = int(known.sum())
    for member in (True, False):
        rows = np.flatnonzero(known == member)
        pool = n_known - 1 if member else n_known
        if rows.size == 0 or pool < 1:
            continue
        idx, sims = knn_table(s, min(k, pool), candidate_mask=known, rows=rows)
        decay = eta ** np.arange(idx.shape[1])
        block = np.zeros((rows.size, n))
        np.put_along_axis(block, idx, sims * decay, axis=1)
        out[rows] = block
    return out


def _row_normalize(w: np.ndarray) -> np.ndarray:
    s = w.sum(axis=1, keepdims=True)
    return np.divide(w, s, out=np.zeros_like(w), where=s > 0)


class NeighborhoodPredictor:
    """Weighted-kNN interaction-profile model.

    NewDrug pairs use the drug-side estimate, NewTarget pairs the target-side
    one, KnownPair the mean of both (each entity excluded from its own
    neighbourhood), and NewBoth the drug-neighbour average of target-side
    estimates, which equals the target-neighbour average of drug-side ones.
    A pair without any known support scores 0.
    """

    def __init__(self, k: int = 5, eta: float = 0.7):
        if k < 1:
            raise ValueError("k must be >= 1")
        if not 0 < eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        self.k = k
        self.eta = eta
        self._fitted = False

    def get_params(self) -> dict:
        return {"k": self.k, "eta": self.eta}

    def fit(self, fused_drug, fused_target, y_train) -> "NeighborhoodPredictor":
        sd, st, y = _arr(fused_drug), _arr(fused_target), _arr(y_train)
        n_d, n_t = y.shape
        if sd.shape != (n_d, n_d) or st.shape != (n_t, n_t):
            raise ValueError(f"similarities {sd.shape}, {st.shape} do not match interactions {y.shape}")
        self.y_ = y
        self.known_drugs_ = y.any(axis=1)
        self.known_targets_ = y.any(axis=0)
        self.wd_ = _row_normalize(neighbor_weights(sd, self.known_drugs_, self.k, self.eta))
        self.wt_ = _row_normalize(neighbor_weights(st, self.known_targets_, self.k, self.eta))
        self.drug_est_ = self.wd_ @ y          # [i, j]: drug-side estimate
        self.target_est_ = y @ self.wt_.T      # [i, j]: target-side estimate
        self.both_est_ = self.wd_ @ self.target_est_
        self._fitted = True
        return self

    def _check(self):
        if not self._fitted:
            raise RuntimeError("model is not fitted")

    def mode_of(self, d: int, t: int) -> Mode:
        self._check()
        kd, kt = self.known_drugs_[d], self.known_targets_[t]
        if kd and kt:
            return Mode.KNOWN_PAIR
        if kt:
            return Mode.NEW_DRUG
        if kd:
            return Mode.NEW_TARGET
        return Mode.NEW_BOTH

    def predict_pair(self, d: int, t: int, mode: Mode | str | None = None) -> float:
        self._check()
        actual = self.mode_of(d, t)
        if mode is not None and Mode(mode) is not actual:
            raise ValueError(f"pair ({d}, {t}) is {actual.value}, not {Mode(mode).value}")
        if actual is Mode.NEW_DRUG:
            return float(self.drug_est_[d, t])
        if actual is Mode.NEW_TARGET:
            return float(self.target_est_[d, t])
        if actual is Mode.KNOWN_PAIR:
            return float(0.5 * (self.drug_est_[d, t] + self.target_est_[d, t]))
        return float(self.both_est_[d, t])

    def predict(self, pairs) -> np.ndarray:
        return np.array([self.predict_pair(d, t) for d, t in pairs], dtype=float)

    def score_matrix(self, drugs, targets) -> np.ndarray:
        self._check()
        drugs = np.asarray(drugs, dtype=int)
        targets = np.asarray(targets, dtype=int)
        kd = self.known_drugs_[drugs][:, None]
        kt = self.known_targets_[targets][None, :]
        de = self.drug_est_[np.ix_(drugs, targets)]
        te = self.target_est_[np.ix_(drugs, targets)]
        both = self.both_est_[np.ix_(drugs, targets)]
        return np.where(kd & kt, 0.5 * (de + te),
                        np.where(kt, de, np.where(kd, te, both)))
