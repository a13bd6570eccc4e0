"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v -s`` (or
``python3 tests/test_acceptance.py``). Criterion 9 needs the NR and GPCR
benchmark datasets, pointed to by the SIMFUSE_NR_MANIFEST and
SIMFUSE_GPCR_MANIFEST environment variables; it is skipped otherwise.
"""

from __future__ import annotations

import os
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from helpers import interactions, lists, sym_view  # noqa: E402
from simfuse.cli import bench_rows, main as cli_main  # noqa: E402
from simfuse.core import sparsity  # noqa: E402
from simfuse.cv import make_cv_plan  # noqa: E402
from simfuse.experiment import run_experiment  # noqa: E402
from simfuse.fgs import (  # noqa: E402
    FgsParams, fgs_complete_zero_rows, fgs_fuse, fgs_infer_new_entity_weights, fgs_init_weights,
    n_filtered,
)
from simfuse.integrate import METHODS, integrate  # noqa: E402
from simfuse.io import load_dataset  # noqa: E402
from simfuse.linear import (  # noqa: E402
    ave_weights, fuse_linear, hsic_weights, ka_weights, lic_consistency_matrix, lic_weights,
)
from simfuse.metrics import aupr, auc  # noqa: E402
from simfuse.snf import SnfParams, snf_fuse, snfh_select  # noqa: E402
from simfuse.synthetic import generate_synthetic  # noqa: E402


@pytest.fixture
def verdict(capsys):
    def emit(tag: str, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[acceptance] {tag} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"{tag} {title}: {detail}"
    return emit


# -- instance families (shared with criterion 5) -------------------------------

RHOS = (0.0, 1 / 3, 0.5)


def fgs_instances(count=50):
    for seed in range(count):
        rng = np.random.default_rng(1000 + seed)
        n_d, n_t = int(rng.integers(2, 13)), int(rng.integers(2, 13))
        m, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        rho = RHOS[seed % 3]
        zeros = 0.4 if seed % 4 == 0 else 0.0
        vs = [sym_view(rng, n_d, zeros) for _ in range(m)]
        y = interactions(rng, n_d, n_t, p=0.3, new_rows=int(rng.integers(0, max(1, n_d // 3) + 1)))
        yield vs, y, k, rho


def baseline_instances(count=50):
    for seed in range(count):
        rng = np.random.default_rng(2000 + seed)
        n, t = int(rng.integers(3, 13)), int(rng.integers(2, 10))
        m = int(rng.integers(2, 5))
        zeros = 0.3 if seed % 5 == 0 else 0.0
        yield [sym_view(rng, n, zeros) for _ in range(m)], interactions(rng, n, t, p=0.35)


def hsic_instances(count=20):
    for seed in range(count):
        rng = np.random.default_rng(3000 + seed)
        n = int(rng.integers(4, 9))
        yield [sym_view(rng, n) for _ in range(3)], interactions(rng, n, int(rng.integers(3, 7)), p=0.4)


def _err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def _simplex(w, tol=1e-12) -> bool:
    w = np.asarray(w, dtype=float)
    return bool(np.all(w >= 0) and np.all(np.abs(w.sum(axis=-1) - 1) <= tol))


# -- criteria -----------------------------------------------------------------

def test_c1_fgs_oracle_equivalence(verdict):
    worst, t0 = 0.0, time.perf_counter()
    for vs, y, k, rho in fgs_instances():
        fused, w = fgs_fuse(vs, y, FgsParams(k, rho))
        f_o, w_o = oracles.fgs(lists(vs), lists(y), k, rho)
        worst = max(worst, _err(fused.matrix, f_o), _err(w.matrix, w_o))
    dt = time.perf_counter() - t0
    verdict("C1", "FGS pipeline oracle equivalence (50 instances)", worst <= 1e-12 and dt < 5,
            f"max |diff| = {worst:.2e} (tol 1e-12), {dt:.2f} s (limit 5 s)")


def test_c2_baseline_oracle_equivalence(verdict):
    worst, mismatched, t0 = 0.0, 0, time.perf_counter()
    for vs, y in baseline_instances():
        lv, ly = lists(vs), lists(y)
        worst = max(worst, _err(ka_weights(vs, y).weights, oracles.ka_weights(lv, ly)))
        worst = max(worst, _err(lic_weights(vs, y, 5).weights, oracles.lic_weights(lv, ly, 5)))
        worst = max(worst, _err(lic_consistency_matrix(vs[0], y, 5), oracles.consistency(lv[0], ly, 5)))
        worst = max(worst, _err(snf_fuse(vs, SnfParams(k=5, iters=2)).matrix, oracles.snf(lv, 5, 2)))
        mismatched += snfh_select(vs, SnfParams()) != oracles.snfh(lv, 0.7, 0.6)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and mismatched == 0 and dt < 10
    verdict("C2", "baseline oracle equivalence (KA, LIC, consistency, SNF, SNF-H)", ok,
            f"max |diff| = {worst:.2e} (tol 1e-10), SNF-H mismatches {mismatched}, {dt:.2f} s (limit 10 s)")


def test_c3_hsic_grid_optimality(verdict):
    worst_gap, t0 = -np.inf, time.perf_counter()
    grid = list(oracles.grid_points_3(0.01))
    for vs, y in hsic_instances():
        res = hsic_weights(vs, y, 0.25, 0.25)
        terms = oracles.hsic_terms(lists(vs), lists(y))
        best = max(oracles.hsic_value(terms, g, 0.25, 0.25) for g in grid)
        got = oracles.hsic_value(terms, res.weights.tolist(), 0.25, 0.25)
        worst_gap = max(worst_gap, best - got)
    dt = time.perf_counter() - t0
    verdict("C3", "HSIC solver vs 0.01 simplex grid (20 problems)", worst_gap <= 1e-3 and dt < 30,
            f"worst (grid best - returned) = {worst_gap:.2e} (tol 1e-3), {dt:.2f} s (limit 30 s)")


def test_c4_metric_correctness(verdict):
    worst = 0.0
    for seed in range(200):
        rng = np.random.default_rng(4000 + seed)
        n = int(rng.integers(2, 80))
        levels = int(rng.integers(1, 6)) if seed % 2 == 0 else 1000  # heavy ties on even seeds
        s = rng.integers(0, levels, size=n) / levels
        y = rng.random(n) < rng.uniform(0.1, 0.6)
        y[0], y[-1] = True, False
        worst = max(worst, abs(auc(s, y) - oracles.auc(s.tolist(), y.tolist())),
                    abs(aupr(s, y) - oracles.aupr(s.tolist(), y.tolist())))
    perfect = auc([.9, .8, .3, .1], [1, 1, 0, 0]) == 1.0 and aupr([.9, .8, .3, .1], [1, 1, 0, 0]) == 1.0
    constant = auc(np.full(7, .4), [1, 0, 0, 1, 0, 1, 0]) == 0.5
    verdict("C4", "AUC/AUPR vs brute force (200 vectors)", worst <= 1e-12 and perfect and constant,
            f"max |diff| = {worst:.2e} (tol 1e-12), perfect=1.0: {perfect}, constant AUC=0.5: {constant}")


def test_c5_weight_invariants(verdict):
    bad = []
    for i, (vs, y, k, rho) in enumerate(fgs_instances()):
        known = y.any(axis=1)
        w0 = fgs_init_weights(vs, y, k)
        v = w0.matrix.sum(axis=0)
        pre = fgs_infer_new_entity_weights(fgs_complete_zero_rows(w0, known, v), vs, ~known, known, k,
                                           fallback=v).matrix
        _, w = fgs_fuse(vs, y, FgsParams(k, rho))
        if not _simplex(w.matrix):
            bad.append(f"fgs#{i} not simplex")
        clean = ~(pre == 0).any(axis=1)
        zeros = (w.matrix == 0).sum(axis=1)
        if np.any(zeros[clean] != n_filtered(rho, len(vs))):
            bad.append(f"fgs#{i} selection zeros")
    for i, (vs, y) in enumerate(baseline_instances()):
        for name, w in (("ka", ka_weights(vs, y)), ("lic", lic_weights(vs, y, 5))):
            if not _simplex(w.weights):
                bad.append(f"{name}#{i}")
    for i, (vs, y) in enumerate(hsic_instances()):
        if not _simplex(hsic_weights(vs, y).weights):
            bad.append(f"hsic#{i}")
    verdict("C5", "weight-matrix invariants", not bad, "all simplex-valid, exact selection zeros"
            if not bad else ", ".join(bad[:10]))


def test_c6_reduction_laws(verdict):
    rng = np.random.default_rng(6)
    errs = {}
    vs, y = [sym_view(rng, 10) for _ in range(4)], interactions(rng, 10, 7, new_rows=3)
    fused, _ = fgs_fuse(vs, y, FgsParams(3, 0.0), init=np.ones((10, 4)))
    errs["a"] = _err(fused.matrix, fuse_linear(vs, ave_weights(4)).matrix)
    errs["b"] = _err(fuse_linear(vs, ave_weights(4)).matrix, np.mean(vs, axis=0))
    single = sym_view(rng, 10)
    errs["c"] = max(_err(integrate(m, [single], y).fused.matrix, single) for m in METHODS)
    errs["c"] = max(errs["c"], _err(fgs_fuse([single], y)[0].matrix, single))
    ok = all(e <= 1e-12 for e in errs.values())
    verdict("C6", "reduction laws", ok, ", ".join(f"({k}) {v:.1e}" for k, v in errs.items()) + " (tol 1e-12)")


def test_c7_planted_signal(verdict):
    t0 = time.perf_counter()
    fgs_scores, ave_scores = [], []
    for seed in range(10):
        ds = generate_synthetic(60, 60, 4, 4, 1, 0.2, seed)
        plan = make_cv_plan(ds, "CVS_d", 10, seed)
        fgs_scores.append(run_experiment(ds, "fgs", plan=plan).mean_aupr)
        ave_scores.append(run_experiment(ds, "ave", plan=plan).mean_aupr)
    dt = time.perf_counter() - t0
    wins = sum(f > a for f, a in zip(fgs_scores, ave_scores))
    ok = wins >= 8 and np.mean(fgs_scores) >= np.mean(ave_scores) and dt < 120
    verdict("C7", "planted-signal superiority of FGS over AVE", ok,
            f"FGS wins {wins}/10 seeds, mean AUPR {np.mean(fgs_scores):.4f} vs {np.mean(ave_scores):.4f}, "
            f"{dt:.1f} s (limit 120 s)")


def test_c8_complexity_scaling(verdict):
    sizes = [200, 400, 800]
    fgs = bench_rows("fgs", sizes, views=6, k=5, rho=0.5, repeats=5)
    snf = bench_rows("snf", [800], views=6, k=5, repeats=3)
    wt = [w for _, _, w in fgs]
    ratios = [wt[i + 1] / wt[i] for i in range(len(wt) - 1)]
    faster = fgs[-1][1] < snf[-1][1]
    ok = all(r <= 4.6 for r in ratios) and faster
    verdict("C8", "FGS weight time per doubling and FGS vs SNF at n=800", ok,
            f"weight ratios {', '.join(f'{r:.2f}' for r in ratios)} (limit 4.6); "
            f"total FGS {fgs[-1][1]:.3f} s vs SNF {snf[-1][1]:.3f} s")


PINS = {
    "NR": ("SIMFUSE_NR_MANIFEST", 54, 26, 166, 0.118, 9),
    "GPCR": ("SIMFUSE_GPCR_MANIFEST", 223, 95, 1096, 0.052, 9),
}


@pytest.mark.parametrize("name", sorted(PINS))
def test_c9_dataset_pins(verdict, name):
    env, n_d, n_t, n_int, sp, m = PINS[name]
    path = os.environ.get(env)
    if not path:
        pytest.skip(f"C9 {name}: set {env} to a dataset manifest to run this pin")
    ds = load_dataset(path)
    y = ds.interactions.matrix
    got = (y.shape[0], y.shape[1], int(y.sum()), sparsity(y))
    ok = got[:3] == (n_d, n_t, n_int) and abs(got[3] - sp) <= 1e-3
    detail = f"(n_d, n_t, interactions, sparsity) = {got[:3] + (round(got[3], 4),)}"
    if name == "NR":
        _, w = fgs_fuse(ds.drug_views, y, FgsParams(5, 0.5))
        ok = ok and w.matrix.shape == (n_d, m) and _simplex(w.matrix)
        detail += f", drug weights {w.matrix.shape}"
    verdict("C9", f"{name} dataset pins", ok, detail)


def test_c10_leakage_and_determinism(verdict, tmp_path, monkeypatch):
    ds = generate_synthetic(30, 24, 4, 4, 1, 0.2, 10)
    leaks = 0
    for setting, folds in (("CVS_d", 5), ("CVS_t", 5), ("CVS_dt", 3), ("CVS_p", 5)):
        plan = make_cv_plan(ds, setting, folds, 2)
        clean = run_experiment(ds, "fgs", plan=plan)
        rng = np.random.default_rng(folds)
        for fold in plan.iter_folds():
            y = ds.interactions.matrix.copy()
            y[fold.test_mask] = rng.random(int(fold.test_mask.sum())) < 0.5
            rep = run_experiment(ds.with_interactions(y), "fgs", plan=plan, labels=ds.interactions.matrix)
            leaks += rep.folds[fold.index] != clean.folds[fold.index]
    manifest = tmp_path / "data"
    cli_main(["gen", "--out", str(manifest), "--n-drugs", "30", "--n-targets", "24", "--seed", "10"])
    outputs = set()
    for i, threads in enumerate(("1", "2", "4", "1")):
        monkeypatch.setenv("SIMFUSE_THREADS", threads)
        out = tmp_path / f"run{i}"
        code = cli_main(["eval", str(manifest / "synthetic.manifest"), "--method", "fgs", "--setting",
                         "CVS_dt", "--seed", "5", "--out", str(out)])
        outputs.add((code, (out / "report.json").read_bytes(), (out / "report.tsv").read_bytes()))
    ok = leaks == 0 and len(outputs) == 1
    verdict("C10", "leakage taint and byte-identical reports", ok,
            f"{leaks} fold(s) changed under taint; {len(outputs)} distinct report set(s) over threads 1/2/4/1")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
