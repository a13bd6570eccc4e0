"""One entry point for every similarity integration method."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import FusedSimilarity, Method, as_views, check_views
from .fgs import FgsParams, fgs_fuse
from .linear import ave_weights, fuse_linear, hsic_weights, ka_weights, lic_weights
from .snf import SnfParams, fuse_subset, snff_select, snfh_select

METHODS = tuple(m.value for m in Method)

DEFAULTS: dict[str, dict[str, Any]] = {
    "ave": {},
    "ka": {},
    "hsic": {"lambda1": 0.25, "lambda2": 0.25, "max_iters": 500, "tol": 1e-9},
    "lic": {"k": 5},
    "snf": {"snf_k": 5, "snf_iters": 2, "alpha": 1.0},
    "snf_h": {"snf_k": 5, "snf_iters": 2, "alpha": 1.0, "c1": 0.7, "c2": 0.6},
    "snf_f": {"snf_k": 5, "snf_iters": 2, "alpha": 1.0, "inner_folds": 5, "cv_seed": 0},
    "fgs": {"k": 5, "rho": 0.5},
}


@dataclass(frozen=True, eq=False)
class IntegrationResult:
    fused: FusedSimilarity
    weights: Any = None        # GlobalWeights, WeightMatrix or list of selected views


def parse_method(name) -> Method:
    key = str(getattr(name, "value", name)).lower().replace("-", "_")
    try:
        return Method(key)
    except ValueError:
        raise ValueError(f"unknown method {name!r}; valid methods: {', '.join(METHODS)}") from None


def resolve_params(method, params: dict | None = None) -> dict:
    method = parse_method(method)
    out = dict(DEFAULTS[method.value])
    for key, val in (params or {}).items():
        if key in out:
            out[key] = val
    return out


def _snf_params(p: dict) -> SnfParams:
    return SnfParams(k=int(p["snf_k"]), iters=int(p["snf_iters"]), alpha=float(p.get("alpha", 1.0)),
                     c1=float(p.get("c1", 0.7)), c2=float(p.get("c2", 0.6)))


def integrate(method, views, y, params: dict | None = None, other_similarity=None,
              base_model=None) -> IntegrationResult:
    """Fuse ``views`` whose rows match the rows of ``y`` (pass Y.T for targets).

    A single view passes through unchanged for every method.
    """
    method = parse_method(method)
    p = resolve_params(method, params)
    views = as_views(views)
    check_views(views)
    y = np.asarray(getattr(y, "matrix", y), dtype=float)

    if method is Method.FGS:
        fused, w = fgs_fuse(views, y, FgsParams(k=int(p["k"]), rho=float(p["rho"])))
        return IntegrationResult(fused, w)
    if method in (Method.AVE, Method.KA, Method.HSIC, Method.LIC):
        if method is Method.AVE or len(views) == 1:
            w = ave_weights(len(views))
        elif method is Method.KA:
            w = ka_weights(views, y)
        elif method is Method.HSIC:
            w = hsic_weights(views, y, p["lambda1"], p["lambda2"], int(p["max_iters"]), p["tol"])
        else:
            w = lic_weights(views, y, int(p["k"]))
        fused = fuse_linear(views, w)
        return IntegrationResult(FusedSimilarity(fused.matrix, method, {**p, **fused.params}), w)

    sp = _snf_params(p)
    if method is Method.SNF:
        selected = list(range(len(views)))
    elif method is Method.SNF_H:
        selected = snfh_select(views, sp)
    else:
        selected = snff_select(views, y, base_model, int(p["cv_seed"]), other_similarity, sp,
                               int(p["inner_folds"]))
    fused = fuse_subset(views, sorted(selected), sp)
    return IntegrationResult(FusedSimilarity(fused, method, {**p, "selected": list(selected)}),
                             list(selected))
