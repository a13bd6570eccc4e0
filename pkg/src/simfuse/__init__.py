"""Multi-view similarity integration for drug-target interaction prediction."""

from .core import (
    Dataset,
    EntityKind,
    FusedSimilarity,
    InteractionMatrix,
    Method,
    SimilarityView,
    ValidationReport,
    WeightMatrix,
    new_entities,
    sparsity,
    validate_dataset,
)
from .cv import CvPlan, CvSetting, make_cluster_cv_plan, make_cv_plan
from .experiment import EvalReport, run_experiment
from .fgs import FgsParams, fgs_fuse, fgs_weights
from .integrate import METHODS, integrate
from .io import load_dataset, save_dataset
from .knn import NeighborList, knn_of
from .linear import (
    GlobalWeights,
    ave_weights,
    fuse_linear,
    hsic_weights,
    ka_weights,
    kernel_alignment,
    lic_consistency_matrix,
    lic_weights,
)
from .metrics import aupr, auc
from .predictor import BaseModel, NeighborhoodPredictor
from .snf import SnfParams, snf_fuse, snff_select, snfh_select
from .synthetic import generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EntityKind",
    "FusedSimilarity",
    "InteractionMatrix",
    "Method",
    "SimilarityView",
    "ValidationReport",
    "WeightMatrix",
    "new_entities",
    "sparsity",
    "validate_dataset",
    "CvPlan",
    "CvSetting",
    "make_cluster_cv_plan",
    "make_cv_plan",
    "EvalReport",
    "run_experiment",
    "FgsParams",
    "fgs_fuse",
    "fgs_weights",
    "METHODS",
    "integrate",
    "load_dataset",
    "save_dataset",
    "NeighborList",
    "knn_of",
    "GlobalWeights",
    "ave_weights",
    "fuse_linear",
    "hsic_weights",
    "ka_weights",
    "kernel_alignment",
    "lic_consistency_matrix",
    "lic_weights",
    "aupr",
    "auc",
    "BaseModel",
    "NeighborhoodPredictor",
    "SnfParams",
    "snf_fuse",
    "snff_select",
    "snfh_select",
    "generate_synthetic",
    "__version__",
]
