"""Ablation and throughput harnesses over a :class:`SequenceBundle`."""
from __future__ import annotations

import csv
import io
import statistics
import time
from typing import NamedTuple, Sequence

import numpy as np

from ..adaptation import TrackerConfig, default_config
from ..geometry import COST_KINDS
from ..mot_io import SequenceBundle
from ..postprocess import postprocess
from ..scene import SceneProfile, detection_height_samples, scene_profile
from ..tracker import Track, Tracker
from .metrics import EvalReport, evaluate

TABLE_MODES = ("default", "same_timeout", "fixed_hyperparameter", "simple_offline", "advanced_offline")
COST_GRID = tuple(f"cost:{k}+iou" for k in ("iou", "giou", "diou", "eiou", "bbsi"))


class AblationRow(NamedTuple):
    mode: str
    report: EvalReport


def sequence_profile(bundle: SequenceBundle, config: TrackerConfig) -> SceneProfile:
    heights = detection_height_samples(bundle.detections, bundle.n_frames, config.count_threshold)
    return scene_profile(bundle.keypoint_samples, heights,
                         depth_threshold=config.depth_threshold, stationary_px=config.stationary_px)


def _config_for(mode: str, base: TrackerConfig) -> TrackerConfig:
    if mode in ("default", "simple_offline", "advanced_offline"):
        return base
    if mode == "same_timeout":
        return base.replace(timeout_marginal=base.timeout_central)
    if mode == "fixed_hyperparameter":
        return base.replace(adaptive=False)
    if mode.startswith("cost:"):
        first, _, second = mode[5:].partition("+")
        second = second or "iou"
        for kind in (first, second):
            if kind not in COST_KINDS:
                raise ValueError(f"unknown cost kind {kind!r} in mode {mode!r}")
        return base.replace(first_cost=first, second_cost=second)
    raise ValueError(f"unknown ablation mode {mode!r}")


def run_mode(bundle: SequenceBundle, mode: str, config: TrackerConfig | None = None) -> list[Track]:
    """Track ``bundle`` under one ablation mode and return the output tracks."""
    base = config or default_config()
    cfg = _config_for(mode, base)
    tracks = Tracker(cfg, bundle.meta).run(bundle.detections, bundle.n_frames)
    if mode == "simple_offline":
        tracks = postprocess(tracks, cfg, None, bundle.meta.frame_rate, mode="simple")
    elif mode == "advanced_offline":
        tracks = postprocess(tracks, cfg, sequence_profile(bundle, cfg), bundle.meta.frame_rate, mode="advanced")
    return tracks


def ablate(bundle: SequenceBundle, modes: Sequence[str] = TABLE_MODES, config: TrackerConfig | None = None,
           iou_threshold: float = 0.5) -> list[AblationRow]:
    """Evaluate each mode on ``bundle`` (which must carry ground truth).

    Modes are the five table modes in :data:`TABLE_MODES` and cost-function
    pairs written ``cost:<first>+<second>``, see :data:`COST_GRID`.
    """
    if bundle.ground_truth is None:
        raise ValueError("ablation needs ground truth")
    return [AblationRow(m, evaluate(bundle.ground_truth, run_mode(bundle, m, config), iou_threshold))
            for m in modes]


_COLUMNS = ("mode", "MOTA", "IDF1", "IDSW", "FP", "FN", "GT")


def _cells(row: AblationRow) -> list[str]:
    r = row.report
    return [row.mode, f"{r.mota:.4f}", f"{r.idf1:.4f}", str(r.id_switches),
            str(r.false_positives), str(r.false_negatives), str(r.gt_count)]


def format_table(rows: Sequence[AblationRow]) -> str:
    cells = [list(_COLUMNS)] + [_cells(r) for r in rows]
    widths = [max(len(c[k]) for c in cells) for k in range(len(_COLUMNS))]
    lines = []
    for c in cells:
        lines.append("  ".join(c[0].ljust(widths[0]) if k == 0 else c[k].rjust(widths[k])
                               for k in range(len(c))))
    return "\n".join(lines) + "\n"


def format_csv(rows: Sequence[AblationRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_COLUMNS)
    for r in rows:
        writer.writerow(_cells(r))
    return buf.getvalue()


def preload(bundle: SequenceBundle) -> list[np.ndarray]:
    """Per-frame ``(N, 5)`` detection arrays for frames ``1..n_frames``."""
    frames = []
    for f in range(1, bundle.n_frames + 1):
        dets = bundle.detections.get(f, ())
        arr = np.array([(*d.box, d.score) for d in dets], dtype=float).reshape(-1, 5)
        frames.append(arr)
    return frames


def throughput(bundle: SequenceBundle, repetitions: int = 5, config: TrackerConfig | None = None) -> float:
    """Median frames per second of the tracking loop over ``repetitions`` runs.

    Detections are converted to arrays before timing starts, so only the
    tracker is measured. An empty sequence gives ``inf``.
    """
    frames = preload(bundle)
    if not frames:
        return float("inf")
    rates = []
    for _ in range(max(1, repetitions)):
        tracker = Tracker(config, bundle.meta)
        t0 = time.perf_counter()
        for f, arr in enumerate(frames, 1):
            tracker.step(arr, f)
        rates.append(len(frames) / (time.perf_counter() - t0))
    return statistics.median(rates)
