import json

import numpy as np
import pytest

from simfuse.core import Dataset
from simfuse.cv import make_cv_plan
from simfuse.experiment import FoldError, run_experiment
from simfuse.predictor import NeighborhoodPredictor
from simfuse.synthetic import generate_synthetic

SETTINGS = [("CVS_d", 5), ("CVS_t", 5), ("CVS_dt", 3), ("CVS_p", 5)]


def _taint(ds, plan, seed):
    """Randomise every test cell of every fold, one fold at a time."""
    rng = np.random.default_rng(seed)
    out = []
    for f in plan.iter_folds():
        y = ds.interactions.matrix.copy()
        y[f.test_mask] = rng.random(int(f.test_mask.sum())) < .5
        out.append((f.index, ds.with_interactions(y)))
    return out


@pytest.mark.parametrize("setting,folds", SETTINGS)
@pytest.mark.parametrize("method", ["fgs", "lic", "snf_h"])
def test_taint(setting, folds, method):
    ds = generate_synthetic(24, 20, 3, 3, 1, .2, 3)
    plan = make_cv_plan(ds, setting, folds, 1)
    clean = run_experiment(ds, method, plan=plan)
    reached = False
    for idx, tainted in _taint(ds, plan, 0):
        rep = run_experiment(tainted, method, plan=plan, labels=ds.interactions.matrix)
        assert rep.folds[idx] == clean.folds[idx]
        reached |= rep.folds != clean.folds
    # the taint does reach the folds that train on those cells
    assert reached


def test_mean_of_folds():
    ds = generate_synthetic(30, 30, 3, 3, 1, .2, 0)
    rep = run_experiment(ds, "ave", plan=make_cv_plan(ds, "CVS_d", 5, 0))
    assert abs(rep.mean_aupr - np.mean([f.aupr for f in rep.folds])) <= 1e-12
    assert abs(rep.mean_auc - np.mean([f.auc for f in rep.folds])) <= 1e-12
    assert all(0 <= f.aupr <= 1 and 0 <= f.auc <= 1 for f in rep.folds)


@pytest.mark.parametrize("method", ["ave", "fgs", "snf", "hsic"])
def test_single_view_is_identity(method):
    ds = generate_synthetic(24, 24, 2, 2, 1, .2, 1)
    one = Dataset(ds.drug_views[:1], ds.target_views[:1], ds.interactions)
    plan = make_cv_plan(ds, "CVS_d", 4, 0)
    direct = run_experiment(one, "ave", plan=plan)
    assert run_experiment(one, method, plan=plan).folds == direct.folds


@pytest.mark.parametrize("threads", [1, 3])
def test_reports_byte_identical(threads):
    ds = generate_synthetic(30, 24, 3, 3, 1, .2, 2)
    plan = make_cv_plan(ds, "CVS_dt", 3, 4)
    base = run_experiment(ds, "fgs", plan=plan, threads=1)
    rep = run_experiment(ds, "fgs", plan=plan, threads=threads)
    assert rep.to_json() == base.to_json() and rep.to_tsv() == base.to_tsv()
    assert json.loads(rep.to_json())["integrator"] == "fgs"


def test_tsv_columns():
    ds = generate_synthetic(20, 20, 2, 2, 1, .2, 0)
    tsv = run_experiment(ds, "ave", plan=make_cv_plan(ds, "CVS_t", 4, 0)).to_tsv()
    lines = tsv.splitlines()
    assert lines[0] == "setting\tintegrator\tfold\taupr\tauc" and len(lines) == 5


def test_failed_fold_reports_index():
    class Broken(NeighborhoodPredictor):
        def fit(self, *a):
            raise RuntimeError("boom")

    ds = generate_synthetic(20, 20, 2, 2, 1, .2, 0)
    with pytest.raises(FoldError) as err:
        run_experiment(ds, "ave", Broken(), plan=make_cv_plan(ds, "CVS_d", 4, 0))
    assert err.value.fold == 0


def test_custom_model_substitutes():
    class Popularity:
        def fit(self, sd, st, y):
            self.pop = y.sum(axis=0)
            return self

        def predict(self, pairs):
            return np.array([self.pop[t] for _, t in pairs], dtype=float)

        def score_matrix(self, d, t):
            return np.tile(self.pop[np.asarray(t)], (len(d), 1)).astype(float)

    ds = generate_synthetic(20, 20, 2, 2, 1, .2, 0)
    rep = run_experiment(ds, "fgs", Popularity(), plan=make_cv_plan(ds, "CVS_d", 4, 0))
    assert rep.base_model["name"] == "Popularity" and len(rep.folds) == 4
