"""Multinomial logistic regression over sparse string features.

Training is deterministic full-batch gradient descent with step halving
whenever a step would increase the L2-regularized loss. Scoring an
unseen feature name contributes zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np


class MaxentError(ValueError):
    pass


@dataclass
class TrainConfig:
    l2: float = 1.0
    max_iters: int = 500
    tol: float = 1e-4
    step: float = 1.0


class MaxentModel:
    def __init__(self, labels: Sequence[str], feature_index: Mapping[str, int], weights: np.ndarray):
        self.labels = tuple(labels)
        self.feature_index = dict(feature_index)
        self.weights = weights  # (n_features, n_labels)
        if weights.shape != (len(self.feature_index), len(self.labels)):
            raise MaxentError(
                f"weight shape {weights.shape} does not match "
                f"{len(self.feature_index)} features x {len(self.labels)} labels"
            )

    def scores(self, features: Mapping[str, float]) -> np.ndarray:
        z = np.zeros(len(self.labels))
        for name, value in features.items():
            k = self.feature_index.get(name)
            if k is not None:
                z += value * self.weights[k]
        return z

    def predict_proba(self, features: Mapping[str, float]) -> np.ndarray:
        z = self.scores(features)
        z -= z.max()
        e = np.exp(z)
        return e / e.sum()

    def predict(self, features: Mapping[str, float]) -> str:
        return self.labels[int(np.argmax(self.scores(features)))]

    def to_text(self) -> str:
        lines = ["amrkit-maxent 1", "labels\t" + "\t".join(self.labels)]
        rows = []
        for name, k in self.feature_index.items():
            for li, label in enumerate(self.labels):
                w = self.weights[k, li]
                if w != 0.0:
                    rows.append((name, label, w))
        rows.sort()
        lines.extend(f"{name}\t{label}\t{float(w)!r}" for name, label, w in rows)
        return "".join(line + "\n" for line in lines)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "MaxentModel":
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        if not lines or lines[0] != "amrkit-maxent 1":
            raise MaxentError(f"{path}: not a version-1 maxent model file")
        if len(lines) < 2 or not lines[1].startswith("labels\t"):
            raise MaxentError(f"{path}: missing labels line")
        labels = tuple(lines[1].split("\t")[1:])
        label_pos = {lab: i for i, lab in enumerate(labels)}
        entries = []
        for lineno, line in enumerate(lines[2:], 3):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MaxentError(f"{path}:{lineno}: expected 'feature TAB label TAB weight'")
            name, label, w_text = parts
            if label not in label_pos:
                raise MaxentError(f"{path}:{lineno}: unknown label {label!r}")
            try:
                w = float(w_text)
            except ValueError:
                raise MaxentError(f"{path}:{lineno}: bad weight {w_text!r}") from None
            entries.append((name, label_pos[label], w))
        feature_index = {name: i for i, name in enumerate(sorted({e[0] for e in entries}))}
        weights = np.zeros((len(feature_index), len(labels)))
        for name, li, w in entries:
            weights[feature_index[name], li] = w
        return cls(labels, feature_index, weights)


def _encode(
    examples: Sequence[tuple[Mapping[str, float], str]], labels: Sequence[str]
) -> tuple[dict[str, int], list[tuple[np.ndarray, np.ndarray]], np.ndarray]:
    label_pos = {lab: i for i, lab in enumerate(labels)}
    feature_index: dict[str, int] = {}
    rows = []
    y = np.empty(len(examples), dtype=np.int64)
    for i, (features, label) in enumerate(examples):
        if label not in label_pos:
            raise MaxentError(f"example {i}: unknown label {label!r}")
        y[i] = label_pos[label]
        idx = []
        val = []
        for name, value in features.items():
            if not np.isfinite(value):
                raise MaxentError(f"example {i}: non-finite value for feature {name!r}")
            k = feature_index.setdefault(name, len(feature_index))
            idx.append(k)
            val.append(float(value))
        rows.append((np.asarray(idx, dtype=np.int64), np.asarray(val)))
    return feature_index, rows, y


def loss_and_grad(
    weights: np.ndarray,
    rows: Sequence[tuple[np.ndarray, np.ndarray]],
    y: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray]:
    """Regularized negative log-likelihood and its gradient."""
    grad = l2 * weights
    loss = 0.5 * l2 * float((weights**2).sum())
    for i, (idx, val) in enumerate(rows):
        z = val @ weights[idx]
        zmax = z.max() if z.size else 0.0
        e = np.exp(z - zmax)
        logz = np.log(e.sum()) + zmax
        loss += logz - z[y[i]]
        p = e / e.sum()
        p[y[i]] -= 1.0
        np.add.at(grad, idx, val[:, None] * p[None, :])
    return loss, grad


def train_maxent(
    examples: Sequence[tuple[Mapping[str, float], str]],
    labels: Sequence[str],
    config: TrainConfig = TrainConfig(),
) -> MaxentModel:
    """Fit weights by deterministic batch descent to the gradient tolerance."""
    if not examples:
        raise MaxentError("no training examples")
    feature_index, rows, y = _encode(examples, labels)
    weights = np.zeros((len(feature_index), len(labels)))
    loss, grad = loss_and_grad(weights, rows, y, config.l2)
    step = config.step
    for iteration in range(config.max_iters):
        if not np.isfinite(loss):
            raise MaxentError(f"non-finite loss at iteration {iteration}")
        if np.abs(grad).max() <= config.tol:
            break
        while True:
            candidate = weights - step * grad
            new_loss, new_grad = loss_and_grad(candidate, rows, y, config.l2)
            if np.isfinite(new_loss) and new_loss <= loss + 1e-12:
                break
            step *= 0.5
            if step < 1e-14:
                return MaxentModel(labels, feature_index, weights)
        weights, loss, grad = candidate, new_loss, new_grad
    return MaxentModel(labels, feature_index, weights)
