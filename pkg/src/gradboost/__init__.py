"""Gradient boosted regression stumps and trees for binary classification.

A small numpy library exposing the full training loop (residual fitting,
second-order leaf values, score accumulation), prediction, an exact
bisection minimizer for auditing the closed-form leaf step, and CSV/JSON
tooling via the command line.
"""

from .booster import (
    IterationRecord,
    LeafRecord,
    Model,
    TrainConfig,
    TrainingState,
    TrainingTrace,
    replay,
    total_loss,
    train,
)
from .dataset import DataError, Dataset, EmptyDatasetError, load_csv, save_csv
from .leaf_values import (
    NEWTON_DENOMINATOR_FLOOR,
    LeafSample,
    exact_leaf_value,
    leaf_loss,
    leaf_loss_derivative,
    leaf_value_terms,
    log_odds,
    newton_leaf_value,
    newton_step,
    residuals,
    sigmoid,
)
from .tree import Leaf, RegressionTree, Split, SplitCandidate, best_split, fit_tree

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "Dataset",
    "EmptyDatasetError",
    "IterationRecord",
    "Leaf",
    "LeafRecord",
    "LeafSample",
    "Model",
    "NEWTON_DENOMINATOR_FLOOR",
    "RegressionTree",
    "Split",
    "SplitCandidate",
    "TrainConfig",
    "TrainingState",
    "TrainingTrace",
    "best_split",
    "exact_leaf_value",
    "fit_tree",
    "leaf_loss",
    "leaf_loss_derivative",
    "leaf_value_terms",
    "load_csv",
    "log_odds",
    "newton_leaf_value",
    "newton_step",
    "replay",
    "residuals",
    "save_csv",
    "sigmoid",
    "total_loss",
    "train",
]
