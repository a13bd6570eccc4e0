"""Cross-validation plans for the cold-start prediction settings.

CVS_d / CVS_t hold out folds of drugs / targets, CVS_dt crosses a drug split
with a target split (3 x 3 blocks by default), CVS_p holds out folds of
drug-target pairs and cluCVS_d holds out whole single-linkage clusters of
drugs. Held-out entities are blanked from the training interactions so they
become new entities for the integrators and the model.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import Dataset, SimfuseError
from .rng import SplitMix64


class TooFewEntities(SimfuseError, ValueError):
    pass


class SingleCluster(SimfuseError, ValueError):
    pass


class CvSetting(str, enum.Enum):
    CVS_D = "CVS_d"
    CVS_T = "CVS_t"
    CVS_DT = "CVS_dt"
    CVS_P = "CVS_p"
    CLU_CVS_D = "cluCVS_d"

    @classmethod
    def parse(cls, value) -> "CvSetting":
        if isinstance(value, cls):
            return value
        for s in cls:
            if s.value.lower() == str(value).lower() or s.name.lower() == str(value).lower():
                return s
        raise ValueError(f"unknown CV setting {value!r}; valid: {', '.join(s.value for s in cls)}")


def chunk_assign(order, folds: int) -> np.ndarray:
    """Fold id per item: consecutive chunks of ``order``, the first n % folds one larger."""
    order = np.asarray(order, dtype=int)
    out = np.empty(order.size, dtype=int)
    for f, part in enumerate(np.array_split(order, folds)):
        out[part] = f
    return out


@dataclass(frozen=True)
class Fold:
    index: int
    test_mask: np.ndarray     # cells scored in this fold
    blank_mask: np.ndarray    # cells zeroed in the training interactions
    test_drugs: np.ndarray
    test_targets: np.ndarray

    def train_y(self, y) -> np.ndarray:
        return np.where(self.blank_mask, 0.0, np.asarray(getattr(y, "matrix", y), dtype=float))


@dataclass(frozen=True, eq=False)
class CvPlan:
    setting: CvSetting
    folds: int
    seed: int
    shape: tuple[int, int]
    drug_assign: np.ndarray | None = None
    target_assign: np.ndarray | None = None
    pair_assign: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_test_blocks(self) -> int:
        return self.folds * self.folds if self.setting is CvSetting.CVS_DT else self.folds

    def iter_folds(self):
        n_d, n_t = self.shape
        all_d, all_t = np.arange(n_d), np.arange(n_t)
        if self.setting in (CvSetting.CVS_D, CvSetting.CLU_CVS_D):
            for f in range(self.folds):
                rows = self.drug_assign == f
                mask = np.repeat(rows[:, None], n_t, axis=1)
                yield Fold(f, mask, mask, all_d[rows], all_t)
        elif self.setting is CvSetting.CVS_T:
            for f in range(self.folds):
                cols = self.target_assign == f
                mask = np.repeat(cols[None, :], n_d, axis=0)
                yield Fold(f, mask, mask, all_d, all_t[cols])
        elif self.setting is CvSetting.CVS_DT:
            for a in range(self.folds):
                rows = self.drug_assign == a
                for b in range(self.folds):
                    cols = self.target_assign == b
                    test = rows[:, None] & cols[None, :]
                    blank = rows[:, None] | cols[None, :]
                    yield Fold(a * self.folds + b, test, blank, all_d[rows], all_t[cols])
        else:
            for f in range(self.folds):
                mask = self.pair_assign == f
                yield Fold(f, mask, mask, all_d[mask.any(axis=1)], all_t[mask.any(axis=0)])

    def to_rows(self) -> list[tuple[str, str, int]]:
        """(kind, id, fold) rows in entity order; pairs are written as 'i,j'."""
        rows = []
        if self.drug_assign is not None:
            rows += [("drug", str(i), int(f)) for i, f in enumerate(self.drug_assign)]
        if self.target_assign is not None:
            rows += [("target", str(j), int(f)) for j, f in enumerate(self.target_assign)]
        if self.pair_assign is not None:
            n_d, n_t = self.shape
            rows += [("pair", f"{i},{j}", int(self.pair_assign[i, j]))
                     for i in range(n_d) for j in range(n_t)]
        return rows


def _shape(ds) -> tuple[int, int]:
    if isinstance(ds, Dataset):
        return ds.interactions.shape
    if hasattr(ds, "matrix"):
        return ds.matrix.shape
    return tuple(np.shape(ds))


def make_cv_plan(ds, setting="CVS_d", folds: int | None = None, seed: int = 0) -> CvPlan:
    setting = CvSetting.parse(setting)
    if setting is CvSetting.CLU_CVS_D:
        raise ValueError("use make_cluster_cv_plan for cluCVS_d")
    if folds is None:
        folds = 3 if setting is CvSetting.CVS_DT else 10
    if folds < 2:
        raise ValueError("folds must be >= 2")
    n_d, n_t = _shape(ds)
    rng = SplitMix64(seed)
    drug_rng, target_rng = rng.split(), rng.split()

    def need(n, what):
        if n < folds:
            raise TooFewEntities(f"{n} {what} cannot fill {folds} folds")

    kw = {}
    if setting in (CvSetting.CVS_D, CvSetting.CVS_DT):
        need(n_d, "drugs")
        kw["drug_assign"] = chunk_assign(drug_rng.permutation(n_d), folds)
    if setting in (CvSetting.CVS_T, CvSetting.CVS_DT):
        need(n_t, "targets")
        kw["target_assign"] = chunk_assign(target_rng.permutation(n_t), folds)
    if setting is CvSetting.CVS_P:
        need(n_d * n_t, "pairs")
        kw["pair_assign"] = chunk_assign(drug_rng.permutation(n_d * n_t), folds).reshape(n_d, n_t)
    return CvPlan(setting, folds, seed, (n_d, n_t), **kw)


def single_linkage_clusters(s, threshold: float) -> np.ndarray:
    """Cluster labels where any pair with similarity > threshold is merged (transitively)."""
    s = np.asarray(getattr(s, "matrix", s), dtype=float)
    link = (s > threshold) | (s.T > threshold)
    np.fill_diagonal(link, False)
    _, labels = connected_components(link, directed=False)
    return labels


def make_cluster_cv_plan(ds: Dataset, structural_view_label: str, threshold: float = 0.6,
                         folds: int = 10, seed: int = 0) -> CvPlan:
    """Assign whole drug clusters to folds so homologous drugs never straddle train and test.

    Clusters are visited in a seeded random order and each goes to the fold
    that currently holds the fewest drugs (lowest fold id on ties).
    """
    views = {v.label: v for v in ds.drug_views}
    if structural_view_label not in views:
        raise KeyError(f"no drug view labelled {structural_view_label!r}; have {sorted(views)}")
    labels = single_linkage_clusters(views[structural_view_label], threshold)
    n_clusters = int(labels.max()) + 1
    if n_clusters == 1:
        raise SingleCluster(
            f"all {labels.size} drugs form one cluster at threshold {threshold}; raise the threshold")
    if n_clusters < folds:
        raise TooFewEntities(f"{n_clusters} clusters cannot fill {folds} folds")
    sizes = np.zeros(folds, dtype=int)
    assign = np.empty(labels.size, dtype=int)
    for c in SplitMix64(seed).permutation(n_clusters):
        f = int(np.argmin(sizes))
        members = labels == c
        assign[members] = f
        sizes[f] += int(members.sum())
    return CvPlan(CvSetting.CLU_CVS_D, folds, seed, ds.interactions.shape, drug_assign=assign,
                  meta={"threshold": threshold, "view": structural_view_label,
                        "clusters": n_clusters})


def inner_pair_folds(y, folds: int, seed: int) -> list[np.ndarray]:
    """Pair folds over the known-drug x known-target cells of ``y`` (used by SNF-F)."""
    y = np.asarray(getattr(y, "matrix", y))
    rows, cols = np.flatnonzero(y.any(axis=1)), np.flatnonzero(y.any(axis=0))
    cells = [(i, j) for i in rows for j in cols]
    folds = min(folds, len(cells))
    if folds < 2:
        return []
    assign = chunk_assign(SplitMix64(seed).permutation(len(cells)), folds)
    out = []
    for f in range(folds):
        mask = np.zeros(y.shape, dtype=bool)
        for (i, j), a in zip(cells, assign):
            if a == f:
                mask[i, j] = True
        out.append(mask)
    return out
