"""
The 9x9 open-set matrix: a detector trained on each session is tested on every
session's test split, and the 81 cells are averaged into mP / mR / mF, overall and per
evaluation protocol (closed set, cross method, cross source, cross both).
"""

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from apps.core.exceptions import AggregationError
from apps.dataset.constants import SESSION_METHODS, SESSION_NAMES, SOURCE_DATASETS
from apps.dataset.types import Session
from apps.evaluation.predictions import load_predictions
from apps.evaluation.session import CLASSES, evaluate_session
from apps.evaluation.types import (
    ClassScores,
    Distortion,
    EvalMatrix,
    EvalMode,
    Protocol,
    mean_scores,
)

logger = logging.getLogger(__name__)


def pred_filename(train: str, test: str) -> str:
    return f"{train}__{test}.jsonl"


def matrix_pairs(sessions=SESSION_NAMES) -> list[tuple[str, str]]:
    return [(train, test) for train in sessions for test in sessions]


def protocol_of(train: str, test: str) -> str:
    """
    Classify a cell by what changes between training and test session. Sessions outside
    the benchmark count as their own method and source.
    """
    if train == test:
        return Protocol.CLOSED_SET
    same_method = SESSION_METHODS.get(train, train) == SESSION_METHODS.get(test, test)
    same_source = SOURCE_DATASETS.get(train, train) == SOURCE_DATASETS.get(test, test)
    if same_source and not same_method:
        return Protocol.CROSS_METHOD
    if same_method and not same_source:
        return Protocol.CROSS_SOURCE
    # No two benchmark sessions share both method and source.
    return Protocol.CROSS_BOTH


def aggregate_matrix(
    cells: dict[tuple[str, str], dict[str, ClassScores]], sessions=SESSION_NAMES
) -> EvalMatrix:
    """
    Per-class means over every cell, and over the cells of each evaluation protocol.

    Raises:
        AggregationError: a (train, test) pair or one of its classes is missing.
    """
    sessions = tuple(sessions)
    pairs = matrix_pairs(sessions)
    missing = [
        pair
        for pair in pairs
        if pair not in cells or any(cls not in cells[pair] for cls in CLASSES)
    ]
    if missing:
        raise AggregationError(missing)

    grouped = {protocol: [] for protocol in Protocol.values}
    for pair in pairs:
        grouped[protocol_of(*pair)].append(pair)
    protocol_cells = {protocol: members for protocol, members in grouped.items() if members}

    return EvalMatrix(
        sessions=sessions,
        cells={pair: dict(cells[pair]) for pair in pairs},
        aggregates={cls: mean_scores([cells[pair][cls] for pair in pairs]) for cls in CLASSES},
        protocols={
            protocol: {
                cls: mean_scores([cells[pair][cls] for pair in members]) for cls in CLASSES
            }
            for protocol, members in protocol_cells.items()
        },
        protocol_cells=protocol_cells,
    )


def missing_prediction_files(preds_dir, sessions=SESSION_NAMES) -> list[tuple[str, str]]:
    preds_dir = Path(preds_dir)
    return [
        (train, test)
        for train, test in matrix_pairs(sessions)
        if not (preds_dir / pred_filename(train, test)).is_file()
    ]


def evaluate_matrix(
    sessions: list[Session],
    preds_dir,
    mode: str = EvalMode.INSTANCE,
    iou_threshold: float = 0.5,
    score_threshold: float = 0.5,
    threads: int = 1,
    distortion: str = Distortion.NONE,
) -> EvalMatrix:
    """
    Score all cells in parallel. Only the test manifests of ``sessions`` are used.

    Raises:
        AggregationError: a session or a prediction file is missing.
    """
    names = [session.name for session in sessions]
    absent = [name for name in SESSION_NAMES if name not in names]
    if absent:
        raise AggregationError(
            [(train, test) for train, test in matrix_pairs() if train in absent or test in absent]
        )
    missing = missing_prediction_files(preds_dir)
    if missing:
        raise AggregationError(missing)

    tests = {session.name: session.test_manifest for session in sessions}
    preds_dir = Path(preds_dir)

    def score(pair):
        train, test = pair
        predictions = load_predictions(preds_dir / pred_filename(train, test))
        return pair, evaluate_session(
            tests[test], predictions, mode, iou_threshold, score_threshold, distortion
        )

    with ThreadPoolExecutor(max_workers=threads) as pool:
        cells = dict(pool.map(score, matrix_pairs()))
    matrix = aggregate_matrix(cells)
    logger.info("Evaluated %d cell(s); overall mF %.2f", len(cells), matrix.overall_mf)
    return matrix


SUMMARY_HEADER = ["protocol", "cells", "class", "mP", "mR", "mF", "mIoU"]
ALL_CELLS = "all"


def _summary_rows(name: str, cells: int, by_class: dict[str, ClassScores], mean: ClassScores):
    for cls, scores in [*((cls, by_class[cls]) for cls in CLASSES), ("mean", mean)]:
        iou = "" if scores.iou is None else f"{scores.iou:.2f}"
        yield [
            name,
            cells,
            cls,
            f"{scores.precision:.2f}",
            f"{scores.recall:.2f}",
            f"{scores.f1:.2f}",
            iou,
        ]


def write_matrix(matrix: EvalMatrix, json_path, csv_path) -> tuple[Path, Path]:
    """
    JSON holds every cell plus the aggregates and protocol breakdown. The CSV holds one
    9x9 F-score grid per class (rows = training session, columns = test session) for
    heatmap plotting, followed by a summary table with one row per protocol and class.
    """
    json_path = Path(json_path)
    csv_path = Path(csv_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.parent.mkdir(parents=True, exist_ok=True)

    json_path.write_text(json.dumps(matrix.as_dict(), indent=2, sort_keys=True) + "\n", "utf-8")
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for cls in CLASSES:
            writer.writerow([cls, "train\\test", *matrix.sessions])
            for train in matrix.sessions:
                row = (f"{matrix.cells[(train, test)][cls].f1:.2f}" for test in matrix.sessions)
                writer.writerow(["", train, *row])

        writer.writerow(SUMMARY_HEADER)
        for protocol, by_class in matrix.protocols.items():
            cells = len(matrix.protocol_cells[protocol])
            writer.writerows(
                _summary_rows(protocol, cells, by_class, matrix.protocol_mean(protocol))
            )
        writer.writerows(
            _summary_rows(ALL_CELLS, len(matrix.cells), matrix.aggregates, matrix.class_mean)
        )
    return json_path, csv_path
