"""ROC evaluation over detector scores.

The curve sweeps a decision threshold over the observed scores (prediction is
"match" when score >= threshold), which makes the trapezoidal area identical
to the Mann-Whitney statistic: ties between a positive and a negative score
count one half.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError


@dataclass
class RocSummary:
    points: list                 # (false-positive rate, true-positive rate)
    auc: float
    tp_at_fp: dict = field(default_factory=dict)


def roc_summary(positive_scores, negative_scores, fp_rates=()):
    """Threshold-sweep ROC, trapezoidal AUC, and TP rates at requested FP rates.

    ``tp_at_fp[q]`` is the largest true-positive rate achievable while keeping
    the false-positive rate at or below ``q``.
    """
    pos = np.asarray(list(positive_scores), dtype=np.float64)
    neg = np.asarray(list(negative_scores), dtype=np.float64)
    if pos.size == 0:
        raise InputError("positive score list is empty")
    if neg.size == 0:
        raise InputError("negative score list is empty")

    thresholds = np.unique(np.concatenate([pos, neg]))[::-1]
    points = [(0.0, 0.0)]
    for t in thresholds:
        fpr = float((neg >= t).mean())
        tpr = float((pos >= t).mean())
        points.append((fpr, tpr))

    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    auc = float(np.trapezoid(ys, xs))

    tp_at_fp = {}
    for q in fp_rates:
        feasible = ys[xs <= q]
        tp_at_fp[float(q)] = float(feasible.max()) if feasible.size else 0.0
    return RocSummary(points=points, auc=auc, tp_at_fp=tp_at_fp)
