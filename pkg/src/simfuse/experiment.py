"""Experiment runner: integrate on training data, fit the base model, score held-out pairs."""

from __future__ import annotations

import copy
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import Dataset, SimfuseError
from .cv import CvPlan, Fold
from .integrate import integrate, parse_method, resolve_params
from .linear import ave_weights, fuse_linear
from .metrics import aupr, auc
from .predictor import NeighborhoodPredictor


class FoldError(SimfuseError, RuntimeError):
    def __init__(self, fold: int, cause: BaseException):
        super().__init__(f"fold {fold} failed: {cause!r}")
        self.fold = fold
        self.cause = cause


@dataclass(frozen=True)
class FoldResult:
    fold: int
    aupr: float
    auc: float


@dataclass
class EvalReport:
    setting: str
    integrator: str
    params: dict
    base_model: dict
    seed: int
    folds: list[FoldResult] = field(default_factory=list)

    @property
    def mean_aupr(self) -> float:
        return sum(f.aupr for f in self.folds) / len(self.folds)

    @property
    def mean_auc(self) -> float:
        return sum(f.auc for f in self.folds) / len(self.folds)

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "integrator": self.integrator,
            "params": self.params,
            "base_model": self.base_model,
            "seed": self.seed,
            "folds": [asdict(f) for f in self.folds],
            "mean_aupr": self.mean_aupr,
            "mean_auc": self.mean_auc,
        }

    def to_json(self) -> str:
        # json writes floats with repr, the shortest round-trip form
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_tsv(self) -> str:
        buf = io.StringIO()
        buf.write("setting\tintegrator\tfold\taupr\tauc\n")
        for f in self.folds:
            buf.write(f"{self.setting}\t{self.integrator}\t{f.fold}\t{f.aupr!r}\t{f.auc!r}\n")
        return buf.getvalue()


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SIMFUSE_THREADS", "1")))
    except ValueError:
        return 1


def _model_factory(base_model):
    if base_model is None:
        return NeighborhoodPredictor, NeighborhoodPredictor().get_params()
    if isinstance(base_model, dict):
        return (lambda: NeighborhoodPredictor(**base_model)), NeighborhoodPredictor(**base_model).get_params()
    params = base_model.get_params() if hasattr(base_model, "get_params") else {}
    desc = {"name": type(base_model).__name__, **params}
    return (lambda: copy.deepcopy(base_model)), desc


def fused_pair(ds: Dataset, method, params: dict, y_train: np.ndarray, make_model=None):
    """Drug-side and target-side fused matrices computed from ``y_train`` only."""
    if parse_method(method).value == "snf_f":
        # the model inside forward selection needs a similarity for the other side
        other_t = fuse_linear(ds.target_views, ave_weights(len(ds.target_views))).matrix
        other_d = fuse_linear(ds.drug_views, ave_weights(len(ds.drug_views))).matrix
        bm = make_model() if make_model else None
        drug = integrate(method, ds.drug_views, y_train, params, other_t, bm)
        target = integrate(method, ds.target_views, y_train.T, params, other_d, bm)
        return drug, target
    drug = integrate(method, ds.drug_views, y_train, params)
    target = integrate(method, ds.target_views, y_train.T, params)
    return drug, target


def run_fold(ds: Dataset, fold: Fold, method, params, make_model, labels) -> tuple[FoldResult, np.ndarray]:
    y_train = fold.train_y(ds.interactions.matrix)
    drug, target = fused_pair(ds, method, params, y_train, make_model)
    model = make_model()
    model.fit(drug.fused, target.fused, y_train)
    scores = model.score_matrix(np.arange(ds.n_drugs), np.arange(ds.n_targets))[fold.test_mask]
    truth = labels[fold.test_mask]
    return FoldResult(fold.index, aupr(scores, truth), auc(scores, truth)), scores


def run_experiment(ds: Dataset, integrator, base_model=None, plan: CvPlan | None = None,
                   labels=None, threads: int | None = None) -> EvalReport:
    """Cross-validated AUPR/AUC of one integrator with one base model.

    ``integrator`` is a method name or ``{"method": ..., **params}``.
    ``labels`` are the ground-truth interactions used for scoring (defaults to
    the dataset's own); training never reads test cells of the dataset.
    """
    if isinstance(integrator, dict):
        integrator = dict(integrator)
        method = parse_method(integrator.pop("method"))
        params = resolve_params(method, integrator)
    else:
        method = parse_method(integrator)
        params = resolve_params(method)
    if plan is None:
        from .cv import make_cv_plan
        plan = make_cv_plan(ds, "CVS_d", 10, 0)
    truth = np.asarray(ds.interactions.matrix if labels is None else getattr(labels, "matrix", labels))
    make_model, model_desc = _model_factory(base_model)
    folds = list(plan.iter_folds())

    def job(fold: Fold) -> FoldResult:
        try:
            return run_fold(ds, fold, method, params, make_model, truth)[0]
        except Exception as exc:  # a failed fold aborts the report with its id
            raise FoldError(fold.index, exc) from exc

    threads = default_threads() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, folds))
    else:
        results = [job(f) for f in folds]
    return EvalReport(plan.setting.value, method.value, params, model_desc, plan.seed, results)
