"""
Accuracy metrics restricted to pixels that carry ground truth (label > 0).
"""
from typing import Dict, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix

from srland.exceptions import ParameterError


def _restrict(y_pred, y_true) -> Tuple[np.ndarray, np.ndarray]:
    y_pred = np.asarray(y_pred).reshape(-1)
    y_true = np.asarray(y_true).reshape(-1)
    if y_pred.shape != y_true.shape:
        raise ParameterError(f"label arrays differ in size: {y_pred.size} vs {y_true.size}")
    mask = y_true > 0
    if not mask.any():
        raise ParameterError("ground truth has no labeled pixel")
    return y_pred[mask], y_true[mask]


def _confusion(y_pred, y_true) -> Tuple[np.ndarray, np.ndarray]:
    """Confusion matrix (rows: truth) over the union of labels, plus the truth classes."""
    y_pred, y_true = _restrict(y_pred, y_true)
    labels = np.union1d(y_true, y_pred)
    cm = confusion_matrix(y_true, y_pred, labels=labels)
    present = np.isin(labels, np.unique(y_true))
    return cm, present


def overall_accuracy(y_pred, y_true) -> float:
    y_pred, y_true = _restrict(y_pred, y_true)
    return float(np.mean(y_pred == y_true))


def average_accuracy(y_pred, y_true) -> float:
    """Unweighted mean recall over classes present in the ground truth."""
    cm, present = _confusion(y_pred, y_true)
    recalls = np.diag(cm)[present] / cm.sum(axis=1)[present]
    return float(np.mean(recalls))


def cohens_kappa(y_pred, y_true) -> float:
    """Chance-corrected agreement; 1 if agreement is certain by chance and perfect, else 0."""
    cm, _ = _confusion(y_pred, y_true)
    total = cm.sum()
    observed = np.trace(cm) / total
    expected = float(np.dot(cm.sum(axis=0), cm.sum(axis=1))) / total ** 2
    if expected >= 1.0:
        return 1.0 if observed == 1.0 else 0.0
    kappa = (observed - expected) / (1.0 - expected)
    return float(np.clip(kappa, -1.0, 1.0))


def evaluate(y_pred, y_true) -> Dict[str, float]:
    return {
        'overall_accuracy': overall_accuracy(y_pred, y_true),
        'average_accuracy': average_accuracy(y_pred, y_true),
        'kappa': cohens_kappa(y_pred, y_true),
    }
