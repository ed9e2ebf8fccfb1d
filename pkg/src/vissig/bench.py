"""Synthetic position-sensitivity experiment.

Three classes draw the same noisy half-circle stroke, each starting from
its own origin. Plain lead-lag signatures only see increments, so the
classes look alike; adding the I-visibility lift exposes the start point.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .path import PiecewiseLinearPath, refine
from .pipeline import RunConfig, extract
from .transforms import parse_chain

CLASS_OFFSETS = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]])
NOISE = 0.1
BASE_KNOTS = 8
DEPTH = 3
RIDGE = 1e-3
TRAIN_FRACTION = 0.8
PLAIN_BAND = (0.20, 0.55)
VIS_MIN = 0.95


def base_shape(n_knots: int = BASE_KNOTS) -> np.ndarray:
    """Half-circle of radius 1 from the origin to ``(2, 0)``."""
    theta = np.linspace(0.0, np.pi, n_knots)
    return np.column_stack([1.0 - np.cos(theta), np.sin(theta)])


@dataclass
class SyntheticDataset:
    streams: list[np.ndarray]
    labels: np.ndarray
    n_classes: int
    noise: float
    n_knots: int
    offsets: np.ndarray


def synth_dataset(
    seed: int, per_class: int, offsets: np.ndarray | None = None, noise: float = NOISE
) -> SyntheticDataset:
    if per_class < 2:
        raise ValueError(f"per_class must be >= 2, got {per_class}")
    offsets = CLASS_OFFSETS if offsets is None else np.asarray(offsets, dtype=np.float64)
    rng = np.random.default_rng(seed)
    shape = base_shape()
    streams, labels = [], []
    for label, origin in enumerate(offsets):
        for _ in range(per_class):
            pts = shape + origin + rng.normal(0.0, noise, size=shape.shape)
            m = int(rng.integers(1, 4))
            streams.append(refine(PiecewiseLinearPath.from_points(pts), m).positions.copy())
            labels.append(label)
    return SyntheticDataset(streams, np.array(labels), len(offsets), noise, BASE_KNOTS, offsets)


@dataclass
class LinearModel:
    weights: np.ndarray  # (n_features, n_classes)
    bias: np.ndarray  # (n_classes,)
    ridge: float


def ridge_fit(features: np.ndarray, labels: np.ndarray, ridge: float = RIDGE) -> LinearModel:
    """One-vs-rest ridge regression on one-hot targets; the bias is unpenalized."""
    if ridge <= 0:
        raise ValueError("ridge parameter must be positive")
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    classes = int(y.max()) + 1
    if len(np.unique(y)) < 2:
        raise ValueError("need at least two classes")
    Y = np.eye(classes)[y]
    x_mean, y_mean = X.mean(axis=0), Y.mean(axis=0)
    Xc, Yc = X - x_mean, Y - y_mean
    gram = Xc.T @ Xc + ridge * np.eye(X.shape[1])
    try:
        W = np.linalg.solve(gram, Xc.T @ Yc)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"ridge system is singular: {exc}") from None
    return LinearModel(W, y_mean - x_mean @ W, ridge)


def ridge_scores(model: LinearModel, features: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if X.shape[1] != model.weights.shape[0]:
        raise ValueError(f"{X.shape[1]} features for a model with {model.weights.shape[0]}")
    return X @ model.weights + model.bias


def ridge_predict(model: LinearModel, features: np.ndarray) -> np.ndarray:
    # argmax returns the first maximum, so ties go to the lowest class index
    return np.argmax(ridge_scores(model, features), axis=1)


def train_test_split(labels: np.ndarray, rng: np.random.Generator, fraction: float = TRAIN_FRACTION):
    """Per-class shuffled split so every class keeps the same train share."""
    train, test = [], []
    for c in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == c))
        cut = int(round(fraction * idx.size))
        train.extend(idx[:cut])
        test.extend(idx[cut:])
    return np.sort(train), np.sort(test)


def _feature_matrix(data: SyntheticDataset, chain: str) -> np.ndarray:
    config = RunConfig(depth=DEPTH, chain=parse_chain(chain))
    items = [(str(i), None, s) for i, s in enumerate(data.streams)]
    return np.vstack([r.features for r in extract(items, config)])


def evaluate(data: SyntheticDataset, chain: str, seed: int, ridge: float = RIDGE) -> dict:
    X = _feature_matrix(data, chain)
    train, test = train_test_split(data.labels, np.random.default_rng(seed))
    model = ridge_fit(X[train], data.labels[train], ridge)
    return {
        "train_accuracy": float(np.mean(ridge_predict(model, X[train]) == data.labels[train])),
        "test_accuracy": float(np.mean(ridge_predict(model, X[test]) == data.labels[test])),
        "feature_len": int(X.shape[1]),
    }


def run_benchmark(seed: int = 42, per_class: int = 60, timing: bool = False) -> dict:
    """Compare lead-lag signatures with and without the I-visibility lift.

    ``elapsed_ms`` is ``None`` unless ``timing`` is set, which keeps the
    default report byte-for-byte reproducible.
    """
    start = time.perf_counter()
    data = synth_dataset(seed, per_class)
    plain = evaluate(data, "leadlag", seed)
    vis = evaluate(data, "leadlag,vis_i", seed)
    elapsed = (time.perf_counter() - start) * 1e3
    passed = PLAIN_BAND[0] <= plain["test_accuracy"] <= PLAIN_BAND[1] and (
        vis["test_accuracy"] >= VIS_MIN
    )
    return {
        "seed": seed,
        "per_class": per_class,
        "accuracy_plain": plain["test_accuracy"],
        "accuracy_vis": vis["test_accuracy"],
        "train_accuracy_plain": plain["train_accuracy"],
        "train_accuracy_vis": vis["train_accuracy"],
        "feature_len_plain": plain["feature_len"],
        "feature_len_vis": vis["feature_len"],
        "elapsed_ms": round(elapsed, 3) if timing else None,
        "passed": bool(passed),
    }
