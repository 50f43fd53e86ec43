"""Boosting driver: additive residual-tree training, prediction, and the
per-iteration bookkeeping trace."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .leaf_values import LeafSample, leaf_value_terms, newton_step, sigmoid
from .tree import RegressionTree, fit_tree


@dataclass(frozen=True)
class TrainConfig:
    """Knobs for one training run."""

    n_trees: int = 3
    learning_rate: float = 0.1
    max_depth: int = 1
    min_leaf: int = 1
    forced_splits: tuple[tuple[int, float], ...] | None = None
    threshold: float = 0.5

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must be in (0, 1)")
        if self.forced_splits is not None:
            forced = tuple((int(f), float(t)) for f, t in self.forced_splits)
            object.__setattr__(self, "forced_splits", forced)
            if len(forced) != self.n_trees:
                raise ValueError("forced_splits must supply one (feature, threshold) pair per tree")
            if self.max_depth != 1:
                raise ValueError("forced_splits requires max_depth=1")


@dataclass(frozen=True)
class Model:
    """Fitted additive ensemble.  Prediction starts from a raw score of 0."""

    trees: tuple[RegressionTree, ...]
    learning_rate: float
    n_features: int
    feature_names: tuple[str, ...] = ()
    format_version: int = 1

    def predict_raw(self, x) -> float:
        """Sum of learning-rate-scaled tree outputs for one instance."""
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {x.shape[0]}")
        score = 0.0
        for tree in self.trees:
            score += self.learning_rate * tree.apply(x)[1]
        return score

    def predict_proba(self, x) -> float:
        return sigmoid(self.predict_raw(x))

    def predict_label(self, x, threshold: float = 0.5) -> int:
        """1 when the probability reaches the threshold, else 0."""
        if not 0.0 < threshold < 1.0:
            raise ValueError("threshold must be in (0, 1)")
        return 1 if self.predict_proba(x) >= threshold else 0


@dataclass
class TrainingState:
    """Mutable per-instance working set threaded through the iterations."""

    scores: np.ndarray
    probs: np.ndarray
    residuals: np.ndarray


@dataclass(frozen=True)
class LeafRecord:
    """Audit record for one leaf of one iteration.

    members holds ascending 0-based instance indices; denominator is the raw
    p(1-p) sum before the division floor is applied.
    """

    leaf_id: int
    members: np.ndarray
    numerator: float
    denominator: float
    value: float


@dataclass(frozen=True)
class IterationRecord:
    """Everything one boosting iteration computed, in the order it happened."""

    iteration: int
    residuals: np.ndarray
    leaf_ids: np.ndarray
    prior_probs: np.ndarray
    scores: np.ndarray
    probs: np.ndarray
    leaves: tuple[LeafRecord, ...]
    total_loss: float


@dataclass(frozen=True)
class TrainingTrace:
    records: tuple[IterationRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final_loss(self) -> float:
        return self.records[-1].total_loss


def total_loss(labels, probs) -> float:
    """Total cross-entropy of predicted probabilities against binary labels."""
    y = np.asarray(labels, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    terms = np.where(y == 1.0, -np.log(p), -np.log1p(-p))
    return math.fsum(terms.tolist())


def _boost_pass(m, tree, X, y, state, learning_rate, leaf_value_fn) -> tuple[dict, IterationRecord]:
    """Run one boosting iteration over an already-built tree.

    leaf_value_fn(leaf_id, numerator, denominator, empty) supplies each
    leaf's value; training computes it, replay reads it off the model.
    """
    state.residuals = y - state.probs
    prior_probs = state.probs
    assignment = tree.leaf_assignment(X)
    leaf_values: dict[int, float] = {}
    leaf_records = []
    for leaf_id in sorted(assignment):
        members = assignment[leaf_id]
        if members.size == 0:
            numerator = denominator = 0.0
        else:
            sample = LeafSample(
                labels=y[members],
                prior_scores=state.scores[members],
                prior_probs=prior_probs[members],
            )
            numerator, denominator = leaf_value_terms(sample)
        value = leaf_value_fn(leaf_id, numerator, denominator, members.size == 0)
        if members.size:
            state.scores[members] = state.scores[members] + learning_rate * value
        leaf_values[leaf_id] = value
        leaf_records.append(LeafRecord(leaf_id, members, numerator, denominator, value))
    state.probs = sigmoid(state.scores)
    leaf_ids = np.zeros(y.shape[0], dtype=np.intp)
    for record in leaf_records:
        leaf_ids[record.members] = record.leaf_id
    iteration_record = IterationRecord(
        iteration=m,
        residuals=state.residuals,
        leaf_ids=leaf_ids,
        prior_probs=prior_probs,
        scores=state.scores.copy(),
        probs=state.probs,
        leaves=tuple(leaf_records),
        total_loss=total_loss(y, state.probs),
    )
    return leaf_values, iteration_record


def train(dataset: Dataset, config: TrainConfig) -> tuple[Model, TrainingTrace]:
    """Fit an additive ensemble of residual trees with second-order leaf values.

    Starts every instance at raw score 0 (probability 0.5).  Each iteration
    fits a tree to the current residuals (or builds the configured forced
    stump), replaces its leaf values with the Newton step, and advances the
    scores by learning_rate times the leaf value.
    """
    if dataset.labels is None:
        raise ValueError("training requires a labeled dataset")
    if config.forced_splits is not None:
        for feature_index, _ in config.forced_splits:
            if not 0 <= feature_index < dataset.n_features:
                raise ValueError(f"forced split feature index {feature_index} out of range")
    X = dataset.features
    y = dataset.labels
    n = dataset.n_rows
    state = TrainingState(
        scores=np.zeros(n), probs=np.full(n, 0.5), residuals=np.zeros(n)
    )
    trees = []
    records = []
    for m in range(1, config.n_trees + 1):
        forced = config.forced_splits[m - 1] if config.forced_splits is not None else None
        tree = fit_tree(
            X,
            y - state.probs,
            max_depth=config.max_depth,
            min_leaf=config.min_leaf,
            forced_split=forced,
        )
        leaf_values, record = _boost_pass(
            m,
            tree,
            X,
            y,
            state,
            config.learning_rate,
            lambda leaf_id, num, den, empty: 0.0 if empty else newton_step(num, den),
        )
        trees.append(tree.with_leaf_values(leaf_values))
        records.append(record)
    model = Model(
        trees=tuple(trees),
        learning_rate=config.learning_rate,
        n_features=dataset.n_features,
        feature_names=dataset.feature_names,
    )
    return model, TrainingTrace(tuple(records))


def replay(model: Model, dataset: Dataset) -> TrainingTrace:
    """Recompute the per-iteration bookkeeping of an existing model on a
    labeled dataset, reading leaf values off the model instead of refitting."""
    if dataset.labels is None:
        raise ValueError("replay requires a labeled dataset")
    if dataset.n_features != model.n_features:
        raise ValueError(
            f"data has {dataset.n_features} feature columns, model expects {model.n_features}"
        )
    X = dataset.features
    y = dataset.labels
    n = dataset.n_rows
    state = TrainingState(
        scores=np.zeros(n), probs=np.full(n, 0.5), residuals=np.zeros(n)
    )
    records = []
    for m, tree in enumerate(model.trees, start=1):
        stored = {leaf.leaf_id: leaf.value for leaf in tree.leaves()}
        _, record = _boost_pass(
            m,
            tree,
            X,
            y,
            state,
            model.learning_rate,
            lambda leaf_id, num, den, empty: stored[leaf_id],
        )
        records.append(record)
    return TrainingTrace(tuple(records))
