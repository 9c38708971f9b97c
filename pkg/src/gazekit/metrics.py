"""Frame-wise agreement metrics.

Ratios whose denominator is zero are ``None`` rather than 0 so that a
classifier that never predicts a class is not reported as having zero
precision for it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from gazekit.errors import LengthMismatch, ZeroVariance, InputError
from gazekit.model import LabelSeries

Ratio = Optional[float]


def _check_pair(a: LabelSeries, b: LabelSeries) -> None:
    if len(a) != len(b):
        raise LengthMismatch(len(a), len(b))
    if len(a) == 0:
        raise InputError("cannot evaluate empty label series")


def _ratio(num: int, den: int) -> Ratio:
    return num / den if den else None


def _f1(precision: Ratio, recall: Ratio) -> Ratio:
    if precision is None or recall is None or precision + recall == 0:
        return None
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with fixation as the positive class."""

    tp_f: int
    fn_f: int
    fp_f: int
    tn_f: int

    @classmethod
    def from_labels(cls, pred: LabelSeries, truth: LabelSeries) -> ConfusionMatrix:
        _check_pair(pred, truth)
        p = pred.codes == 0
        t = truth.codes == 0
        return cls(
            int(np.count_nonzero(p & t)),
            int(np.count_nonzero(~p & t)),
            int(np.count_nonzero(p & ~t)),
            int(np.count_nonzero(~p & ~t)),
        )

    @property
    def total(self) -> int:
        return self.tp_f + self.fn_f + self.fp_f + self.tn_f


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision_f: Ratio
    recall_f: Ratio
    f1_f: Ratio
    precision_s: Ratio
    recall_s: Ratio
    f1_s: Ratio
    fixation_proportion_pred: float
    fixation_proportion_truth: float

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix) -> MetricsReport:
        n = cm.total
        precision_f = _ratio(cm.tp_f, cm.tp_f + cm.fp_f)
        recall_f = _ratio(cm.tp_f, cm.tp_f + cm.fn_f)
        # saccade block: roles swapped, tn_f are the saccade hits
        precision_s = _ratio(cm.tn_f, cm.tn_f + cm.fn_f)
        recall_s = _ratio(cm.tn_f, cm.tn_f + cm.fp_f)
        return cls(
            accuracy=(cm.tp_f + cm.tn_f) / n,
            precision_f=precision_f,
            recall_f=recall_f,
            f1_f=_f1(precision_f, recall_f),
            precision_s=precision_s,
            recall_s=recall_s,
            f1_s=_f1(precision_s, recall_s),
            fixation_proportion_pred=(cm.tp_f + cm.fp_f) / n,
            fixation_proportion_truth=(cm.tp_f + cm.fn_f) / n,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> MetricsReport:
        return cls(**d)

    @staticmethod
    def csv_header() -> str:
        return ",".join(MetricsReport.__dataclass_fields__)

    def csv_row(self) -> str:
        return ",".join("" if v is None else repr(float(v)) for v in asdict(self).values())


def evaluate(pred: LabelSeries, truth: LabelSeries) -> MetricsReport:
    return MetricsReport.from_confusion(ConfusionMatrix.from_labels(pred, truth))


def agreement(a: LabelSeries, b: LabelSeries) -> float:
    """Percentage of frames with identical labels."""
    _check_pair(a, b)
    return 100.0 * np.count_nonzero(a.codes == b.codes) / len(a)


def pearson_r(a: Sequence[float], b: Sequence[float]) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) != len(b):
        raise LengthMismatch(len(a), len(b))
    if len(a) < 2:
        raise InputError("pearson_r needs at least two points")
    da = a - a.mean()
    db = b - b.mean()
    saa = float(da @ da)
    sbb = float(db @ db)
    if saa == 0 or sbb == 0:
        raise ZeroVariance("pearson_r undefined for a constant input")
    r = float(da @ db) / np.sqrt(saa * sbb)
    return float(np.clip(r, -1.0, 1.0))
