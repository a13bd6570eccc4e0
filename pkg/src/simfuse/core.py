"""Domain types shared by the integrators, the predictor and the evaluation harness.

Every container here is immutable: arrays are copied on construction and
flagged read-only, so instances can be shared freely between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np


class SimfuseError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatch(SimfuseError, ValueError):
    pass


class DegenerateInput(SimfuseError, ValueError):
    pass


class EntityKind(str, enum.Enum):
    DRUG = "drug"
    TARGET = "target"


class Method(str, enum.Enum):
    AVE = "ave"
    KA = "ka"
    HSIC = "hsic"
    LIC = "lic"
    SNF = "snf"
    SNF_H = "snf_h"
    SNF_F = "snf_f"
    FGS = "fgs"


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SimilarityView:
    """One n x n similarity matrix over drugs or targets."""

    matrix: np.ndarray
    entity_kind: EntityKind = EntityKind.DRUG
    label: str = ""

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2:
            raise ShapeMismatch(f"similarity view {self.label!r} must be 2-D, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "entity_kind", EntityKind(self.entity_kind))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    """Binary drug x target interaction matrix with entity ids."""

    matrix: np.ndarray
    drug_ids: tuple[str, ...] = ()
    target_ids: tuple[str, ...] = ()

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2:
            raise ShapeMismatch(f"interaction matrix must be 2-D, got shape {m.shape}")
        n_d, n_t = m.shape
        drug_ids = tuple(self.drug_ids) or tuple(f"d{i}" for i in range(n_d))
        target_ids = tuple(self.target_ids) or tuple(f"t{j}" for j in range(n_t))
        if len(drug_ids) != n_d or len(target_ids) != n_t:
            raise ShapeMismatch(
                f"id lists ({len(drug_ids)}, {len(target_ids)}) do not match matrix shape {m.shape}"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "drug_ids", drug_ids)
        object.__setattr__(self, "target_ids", target_ids)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def transpose(self) -> "InteractionMatrix":
        return InteractionMatrix(self.matrix.T, self.target_ids, self.drug_ids)


@dataclass(frozen=True, eq=False)
class Dataset:
    drug_views: tuple[SimilarityView, ...]
    target_views: tuple[SimilarityView, ...]
    interactions: InteractionMatrix
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "drug_views", tuple(self.drug_views))
        object.__setattr__(self, "target_views", tuple(self.target_views))
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def n_drugs(self) -> int:
        return self.interactions.shape[0]

    @property
    def n_targets(self) -> int:
        return self.interactions.shape[1]

    def views(self, kind: EntityKind | str) -> tuple[SimilarityView, ...]:
        return self.drug_views if EntityKind(kind) is EntityKind.DRUG else self.target_views

    def with_interactions(self, y) -> "Dataset":
        """Copy of the dataset with the interaction values replaced (ids kept)."""
        inter = InteractionMatrix(y, self.interactions.drug_ids, self.interactions.target_ids)
        return Dataset(self.drug_views, self.target_views, inter, self.notes)


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Per-entity, per-view fusion weights (n x m)."""

    matrix: np.ndarray
    entity_kind: EntityKind = EntityKind.DRUG

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "entity_kind", EntityKind(self.entity_kind))

    def is_simplex(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.all(m >= 0) and np.all(np.abs(m.sum(axis=1) - 1.0) <= tol))


@dataclass(frozen=True, eq=False)
class FusedSimilarity:
    matrix: np.ndarray
    method: Method
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "params", dict(self.params))


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:  # truthy when there is something to report
        return bool(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


def _check_view(view: SimilarityView, n: int, where: str, out: list[str]) -> None:
    m = view.matrix
    if m.shape != (n, n):
        out.append(f"{where}: shape {m.shape} != ({n}, {n})")
        return
    if not np.all(np.isfinite(m)):
        out.append(f"{where}: non-finite entries")
        return
    if np.any(m < 0) or np.any(m > 1):
        out.append(f"{where}: entries outside [0, 1]")
    if np.any(np.diag(m) != 1.0):
        out.append(f"{where}: diagonal != 1")


def validate_dataset(ds: Dataset) -> ValidationReport:
    """List every invariant violation of ``ds``; an empty report means valid."""
    out: list[str] = []
    y = ds.interactions.matrix
    n_d, n_t = y.shape
    if n_d < 2 or n_t < 2:
        out.append(f"interactions: need at least 2 drugs and 2 targets, got {y.shape}")
    if not np.all(np.isfinite(y)) or np.any((y != 0) & (y != 1)):
        out.append("interactions: non-binary interaction")
    if not ds.drug_views:
        out.append("no drug views")
    if not ds.target_views:
        out.append("no target views")
    for h, v in enumerate(ds.drug_views):
        _check_view(v, n_d, f"drug view {h} ({v.label})", out)
        if v.entity_kind is not EntityKind.DRUG:
            out.append(f"drug view {h} ({v.label}): entity kind {v.entity_kind.value}")
    for h, v in enumerate(ds.target_views):
        _check_view(v, n_t, f"target view {h} ({v.label})", out)
        if v.entity_kind is not EntityKind.TARGET:
            out.append(f"target view {h} ({v.label}): entity kind {v.entity_kind.value}")
    return ValidationReport(out)


def _as_array(y) -> np.ndarray:
    return y.matrix if isinstance(y, InteractionMatrix) else np.asarray(y)


def new_entities(y) -> tuple[frozenset[int], frozenset[int]]:
    """Indices of all-zero rows (new drugs) and all-zero columns (new targets)."""
    m = _as_array(y)
    drugs = frozenset(np.flatnonzero(~m.any(axis=1)).tolist())
    targets = frozenset(np.flatnonzero(~m.any(axis=0)).tolist())
    return drugs, targets


def known_mask(y, axis: int = 1) -> np.ndarray:
    """Boolean mask of entities with at least one interaction (rows for axis=1)."""
    return _as_array(y).any(axis=axis)


def sparsity(y) -> float:
    m = _as_array(y)
    return float(np.count_nonzero(m)) / m.size


def check_views(views: Sequence[SimilarityView]) -> int:
    """Shared shape precondition of the integrators; returns n."""
    if len(views) == 0:
        raise ShapeMismatch("at least one view is required")
    n = views[0].matrix.shape[0]
    for v in views:
        if v.matrix.shape != (n, n):
            raise ShapeMismatch(f"view {v.label!r} has shape {v.matrix.shape}, expected ({n}, {n})")
    return n


def as_views(views, kind: EntityKind | str = EntityKind.DRUG) -> list[SimilarityView]:
    """Accept SimilarityView objects or bare arrays."""
    return [v if isinstance(v, SimilarityView) else SimilarityView(v, kind, f"view{h}")
            for h, v in enumerate(views)]
