import numpy as np
import pytest

from helpers import sym_view
from simfuse.core import Dataset, EntityKind, InteractionMatrix, SimilarityView
from simfuse.cv import (
    CvSetting, SingleCluster, TooFewEntities, chunk_assign, make_cluster_cv_plan, make_cv_plan,
    single_linkage_clusters,
)
from simfuse.rng import SplitMix64


def test_splitmix_reference_values():
    # published reference outputs for seed 1234567
    g = SplitMix64(1234567)
    assert [g.next() for _ in range(3)] == [6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_chunk_sizes_54_into_10():
    sizes = np.bincount(chunk_assign(range(54), 10))
    assert sorted(sizes.tolist()) == [5] * 6 + [6] * 4


def test_cvs_dt_covers_every_cell_once():
    plan = make_cv_plan(np.zeros((12, 9)), "CVS_dt", 3, 5)
    cover = np.zeros((12, 9), dtype=int)
    folds = list(plan.iter_folds())
    assert len(folds) == 9 == plan.n_test_blocks
    for f in folds:
        cover += f.test_mask
        # test rows and columns are blanked from training
        assert f.blank_mask[f.test_drugs].all() and f.blank_mask[:, f.test_targets].all()
    assert np.all(cover == 1)


@pytest.mark.parametrize("setting", ["CVS_d", "CVS_t", "CVS_p"])
def test_coverage_and_determinism(setting):
    y = np.zeros((23, 17))
    a, b = make_cv_plan(y, setting, 5, 7), make_cv_plan(y, setting, 5, 7)
    cover = sum(f.test_mask.astype(int) for f in a.iter_folds())
    assert np.all(cover == 1)
    assert a.to_rows() == b.to_rows()
    assert a.to_rows() != make_cv_plan(y, setting, 5, 8).to_rows()


def test_train_y_blanks_test_entities():
    rng = np.random.default_rng(0)
    y = (rng.random((10, 6)) < .5).astype(float)
    for f in make_cv_plan(y, "CVS_d", 5, 0).iter_folds():
        ty = f.train_y(y)
        assert not ty[f.test_drugs].any()
        keep = np.setdiff1d(np.arange(10), f.test_drugs)
        assert np.array_equal(ty[keep], y[keep])


def test_too_few_entities():
    with pytest.raises(TooFewEntities):
        make_cv_plan(np.zeros((3, 20)), "CVS_d", 5)


def test_parse_setting():
    assert CvSetting.parse("cvs_dt") is CvSetting.CVS_DT
    with pytest.raises(ValueError):
        CvSetting.parse("bogus")


def _cluster_ds(s):
    n = s.shape[0]
    return Dataset([SimilarityView(s, EntityKind.DRUG, "chem")],
                   [SimilarityView(np.eye(2), EntityKind.TARGET, "t")],
                   InteractionMatrix(np.ones((n, 2)), [str(i) for i in range(n)], ["a", "b"]))


def test_linkage_chain_and_threshold():
    s = np.array([[1, .7, .1], [.7, 1, .7], [.1, .7, 1]])
    lab = single_linkage_clusters(s, .6)
    assert len(set(lab.tolist())) == 1
    assert len(set(single_linkage_clusters(s, .8).tolist())) == 3


def test_cluster_plan_keeps_clusters_together():
    rng = np.random.default_rng(1)
    s = sym_view(rng, 30) * .5
    s[3, 7] = s[7, 3] = .7
    s[7, 12] = s[12, 7] = .9
    np.fill_diagonal(s, 1)
    plan = make_cluster_cv_plan(_cluster_ds(s), "chem", .6, 5, 0)
    a = plan.drug_assign
    assert a[3] == a[7] == a[12]
    assert sorted(np.bincount(a).tolist())[-1] - sorted(np.bincount(a).tolist())[0] <= 3


def test_no_merge_reduces_to_singletons():
    rng = np.random.default_rng(2)
    s = sym_view(rng, 12) * .5
    np.fill_diagonal(s, 1)
    plan = make_cluster_cv_plan(_cluster_ds(s), "chem", .6, 4, 0)
    assert plan.meta["clusters"] == 12


def test_single_cluster_error():
    with pytest.raises(SingleCluster):
        make_cluster_cv_plan(_cluster_ds(np.ones((5, 5))), "chem", .6, 2, 0)
