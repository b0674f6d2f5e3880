"""Exact binary-classification evaluation.

Confusion counts, positive-class and macro F1, and ROC-AUC in the
Mann-Whitney form (probability a random positive outscores a random
negative, ties counted one half).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLabels, ShapeError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def flipped(self) -> "ConfusionMatrix":
        """The same predictions with class 0 treated as positive."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


@dataclass(frozen=True)
class EvalReport:
    """One evaluated model on one dataset."""

    confusion: ConfusionMatrix
    f1_positive: float
    f1_macro: float
    roc_auc: float
    threshold: float
    n: int

    def to_dict(self) -> dict:
        cm = self.confusion
        return {
            "tp": cm.tp,
            "fp": cm.fp,
            "fn": cm.fn,
            "tn": cm.tn,
            "f1_positive": self.f1_positive,
            "f1_macro": self.f1_macro,
            "roc_auc": self.roc_auc,
            "threshold": self.threshold,
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_aligned(scores, labels):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 1 or labels.ndim != 1 or scores.shape[0] != labels.shape[0]:
        raise ShapeError(
            f"scores and labels must be aligned 1-D vectors, got {scores.shape} vs {labels.shape}"
        )
    if scores.shape[0] == 0:
        raise ShapeError("cannot evaluate zero examples")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be binary (0/1)")
    return scores, labels.astype(np.int64)


def confusion(scores, labels, threshold: float = 0.5) -> ConfusionMatrix:
    """Counts at a decision threshold; score >= threshold predicts positive."""
    scores, labels = _check_aligned(scores, labels)
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    pred = scores >= threshold
    pos = labels == 1
    tp = int(np.count_nonzero(pred & pos))
    fp = int(np.count_nonzero(pred & ~pos))
    fn = int(np.count_nonzero(~pred & pos))
    tn = int(np.count_nonzero(~pred & ~pos))
    return ConfusionMatrix(tp, fp, fn, tn)


def f1(cm: ConfusionMatrix) -> float:
    """Positive-class F1; any 0/0 resolves to 0 by convention."""
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def f1_macro(cm: ConfusionMatrix) -> float:
    """Mean of the F1 computed with each class taken as the positive one."""
    return 0.5 * (f1(cm) + f1(cm.flipped()))


def roc_auc(scores, labels) -> float:
    """Pair-counting AUC: [#(s+ > s-) + 0.5 * #(s+ = s-)] / (n+ * n-).

    Counted exactly by a single ascending sweep over score groups.
    """
    scores, labels = _check_aligned(scores, labels)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("ROC-AUC needs at least one positive and one negative label")

    order = np.argsort(scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]

    pairs = 0.0
    negatives_below = 0
    i = 0
    n = scores.shape[0]
    while i < n:
        j = i
        while j < n and sorted_scores[j] == sorted_scores[i]:
            j += 1
        group_pos = int(np.count_nonzero(sorted_labels[i:j] == 1))
        group_neg = (j - i) - group_pos
        pairs += group_pos * negatives_below + 0.5 * group_pos * group_neg
        negatives_below += group_neg
        i = j
    return pairs / (n_pos * n_neg)


def evaluate(scores, labels, threshold: float = 0.5) -> EvalReport:
    """Assemble the full report: confusion, F1 variants, ROC-AUC."""
    cm = confusion(scores, labels, threshold)
    return EvalReport(
        confusion=cm,
        f1_positive=f1(cm),
        f1_macro=f1_macro(cm),
        roc_auc=roc_auc(scores, labels),
        threshold=threshold,
        n=cm.n,
    )


def roc_points(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    """(false-positive-rate, true-positive-rate) staircase for plotting."""
    scores, labels = _check_aligned(scores, labels)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("ROC curve needs both classes present")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    tp = np.cumsum(sorted_labels == 1)
    fp = np.cumsum(sorted_labels == 0)
    # keep only the last point of each tied-score run
    keep = np.append(sorted_scores[1:] != sorted_scores[:-1], True)
    tpr = np.concatenate(([0.0], tp[keep] / n_pos))
    fpr = np.concatenate(([0.0], fp[keep] / n_neg))
    return fpr, tpr
