"""
Scoring types. All scores are on the percent scale (0-100).
"""

from dataclasses import dataclass, field

from django.db import models

from apps.core.constants import PERCENT
from apps.dataset.types import Box, Label


class PredictionClass(models.TextChoices):
    REAL = "real", "Real text"
    TAMPERED = "tampered", "Tampered text"


LABEL_TO_CLASS = {
    Label.AUTHENTIC: PredictionClass.REAL,
    Label.TAMPERED: PredictionClass.TAMPERED,
}


class EvalMode(models.TextChoices):
    INSTANCE = "instance", "Instance level"
    PIXEL = "pixel", "Pixel level"


class Distortion(models.TextChoices):
    NONE = "none", "No distortion"
    JPEG75 = "jpeg75", "JPEG quality 75"
    RESIZE_HALF = "resize0.5", "Resize to half width and height"


@dataclass(frozen=True)
class Prediction:
    box: Box
    cls: str
    score: float


@dataclass(frozen=True)
class PredictionSet:
    """Detector output for one image."""

    image: str
    predictions: tuple[Prediction, ...] = ()

    def of_class(self, cls: str) -> list[Prediction]:
        return [prediction for prediction in self.predictions if prediction.cls == cls]


def f1_score(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def ratio(numerator: float, denominator: float) -> float:
    """Percent ratio with 0/0 -> 0."""
    return PERCENT * numerator / denominator if denominator else 0.0


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    iou: float | None = None

    @classmethod
    def from_pr(cls, precision: float, recall: float, iou: float | None = None):
        return cls(precision, recall, f1_score(precision, recall), iou)

    def as_dict(self) -> dict:
        data = {"precision": self.precision, "recall": self.recall, "f1": self.f1}
        if self.iou is not None:
            data["iou"] = self.iou
        return data


@dataclass(frozen=True)
class MatchCounts:
    true_positives: int = 0
    predictions: int = 0
    ground_truth: int = 0

    def __add__(self, other: "MatchCounts") -> "MatchCounts":
        return MatchCounts(
            self.true_positives + other.true_positives,
            self.predictions + other.predictions,
            self.ground_truth + other.ground_truth,
        )

    def scores(self) -> ClassScores:
        return ClassScores.from_pr(
            ratio(self.true_positives, self.predictions),
            ratio(self.true_positives, self.ground_truth),
        )


@dataclass(frozen=True)
class PixelCounts:
    true_positives: int = 0
    false_positives: int = 0
    false_negatives: int = 0

    def __add__(self, other: "PixelCounts") -> "PixelCounts":
        return PixelCounts(
            self.true_positives + other.true_positives,
            self.false_positives + other.false_positives,
            self.false_negatives + other.false_negatives,
        )

    def scores(self) -> ClassScores:
        tp, fp, fn = self.true_positives, self.false_positives, self.false_negatives
        # Both maps empty: perfect agreement.
        iou = PERCENT if tp + fp + fn == 0 else ratio(tp, tp + fp + fn)
        return ClassScores.from_pr(ratio(tp, tp + fp), ratio(tp, tp + fn), iou)


class Protocol(models.TextChoices):
    """Relation between the training and the test session of a matrix cell."""

    CLOSED_SET = "closed_set", "Same session"
    CROSS_METHOD = "cross_method", "Cross tampering method"
    CROSS_SOURCE = "cross_source", "Cross source dataset"
    CROSS_BOTH = "cross_both", "Cross tampering method and source dataset"


def mean_scores(scores: list[ClassScores]) -> ClassScores:
    """Arithmetic mean of P/R/F; IoU is averaged only when every entry carries one."""
    count = len(scores)
    ious = [s.iou for s in scores]
    return ClassScores(
        precision=sum(s.precision for s in scores) / count,
        recall=sum(s.recall for s in scores) / count,
        f1=sum(s.f1 for s in scores) / count,
        iou=None if None in ious else sum(ious) / count,
    )


def mean_dict(scores: ClassScores) -> dict:
    data = {"mP": scores.precision, "mR": scores.recall, "mF": scores.f1}
    if scores.iou is not None:
        data["mIoU"] = scores.iou
    return data


@dataclass
class EvalMatrix:
    """
    Cells keyed by ``(train_session, test_session)``, each holding per-class scores.
    ``aggregates`` holds mP/mR/mF (and mIoU in pixel mode) per class over all cells;
    ``protocols`` holds the same means restricted to each Protocol's cells.
    """

    sessions: tuple[str, ...]
    cells: dict[tuple[str, str], dict[str, ClassScores]] = field(default_factory=dict)
    aggregates: dict[str, ClassScores] = field(default_factory=dict)
    protocols: dict[str, dict[str, ClassScores]] = field(default_factory=dict)
    protocol_cells: dict[str, list[tuple[str, str]]] = field(default_factory=dict)

    @property
    def class_mean(self) -> ClassScores:
        return mean_scores(list(self.aggregates.values()))

    @property
    def overall_mf(self) -> float:
        return self.class_mean.f1

    def protocol_mean(self, protocol: str) -> ClassScores:
        return mean_scores(list(self.protocols[protocol].values()))

    def as_dict(self) -> dict:
        return {
            "sessions": list(self.sessions),
            "cells": [
                {
                    "train": train,
                    "test": test,
                    **{cls: scores.as_dict() for cls, scores in sorted(cell.items())},
                }
                for (train, test), cell in self.cells.items()
            ],
            "aggregates": {
                cls: mean_dict(scores) for cls, scores in sorted(self.aggregates.items())
            },
            "class_mean": mean_dict(self.class_mean),
            "protocols": {
                protocol: {
                    "cells": len(self.protocol_cells[protocol]),
                    **{cls: mean_dict(scores) for cls, scores in sorted(by_class.items())},
                    "class_mean": mean_dict(self.protocol_mean(protocol)),
                }
                for protocol, by_class in self.protocols.items()
            },
            "overall_mF": self.overall_mf,
        }
