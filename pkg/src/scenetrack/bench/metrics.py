"""CLEAR MOT accuracy (MOTA) and identity F1 (IDF1).

Per frame, ground-truth objects keep the hypothesis they were last matched
to while the pair still overlaps at the IoU threshold; the rest are paired
by minimum-cost assignment on ``1 - IoU``. A ground-truth object matched to a
different hypothesis than last time counts as an identity switch. IDF1 uses
a single optimal one-to-one correspondence between ground-truth and
hypothesis identities over the whole sequence.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..geometry import BoundingBox, pairwise_iou


@dataclass(frozen=True)
class EvalReport:
    mota: float
    idf1: float
    id_switches: int
    false_positives: int
    false_negatives: int
    gt_count: int
    matches: int = 0
    idtp: int = 0
    hyp_count: int = 0

    @property
    def recall(self) -> float:
        return self.matches / self.gt_count if self.gt_count else math.nan

    @property
    def precision(self) -> float:
        return self.matches / self.hyp_count if self.hyp_count else math.nan

    def as_dict(self) -> dict:
        return {
            "MOTA": self.mota, "IDF1": self.idf1, "IDSW": self.id_switches,
            "FP": self.false_positives, "FN": self.false_negatives, "GT": self.gt_count,
        }


FrameBoxes = Mapping[int, Iterable[tuple[int, BoundingBox]]]


def frames_from_tracks(tracks) -> dict[int, list[tuple[int, BoundingBox]]]:
    """Regroup track histories into ``frame -> [(id, box), ...]``."""
    frames: dict[int, list] = defaultdict(list)
    for t in tracks:
        for o in t.history:
            frames[o.frame].append((t.id, o.box))
    return dict(frames)


def _split(items) -> tuple[list[int], np.ndarray]:
    items = list(items)
    ids = [int(i) for i, _ in items]
    boxes = np.array([b for _, b in items], dtype=float).reshape(-1, 4)
    return ids, boxes


def evaluate(gt: FrameBoxes, results, iou_threshold: float = 0.5) -> EvalReport:
    """Score ``results`` against ``gt``.

    Both are ``frame -> [(id, box)]`` mappings; ``results`` may also be a
    list of tracks. A pair counts as a match when IoU >= ``iou_threshold``.
    With no ground truth at all, MOTA and IDF1 are NaN.
    """
    if not isinstance(results, Mapping):
        results = frames_from_tracks(results)
    last_hyp: dict[int, int] = {}
    fp = fn = idsw = n_match = n_gt = n_hyp = 0
    # (gt id, hyp id) -> frames in which the pair overlaps enough
    pair_hits: dict[tuple[int, int], int] = defaultdict(int)

    for frame in sorted(set(gt) | set(results)):
        g_ids, g_boxes = _split(gt.get(frame, ()))
        h_ids, h_boxes = _split(results.get(frame, ()))
        n_gt += len(g_ids)
        n_hyp += len(h_ids)
        if not g_ids or not h_ids:
            fn += len(g_ids)
            fp += len(h_ids)
            continue
        ious = pairwise_iou(g_boxes, h_boxes)
        valid = ious >= iou_threshold
        for i, j in zip(*np.nonzero(valid)):
            pair_hits[(g_ids[i], h_ids[j])] += 1

        g_used = np.zeros(len(g_ids), dtype=bool)
        h_used = np.zeros(len(h_ids), dtype=bool)
        h_index = {h: j for j, h in enumerate(h_ids)}
        for i, g in enumerate(g_ids):
            j = h_index.get(last_hyp.get(g, None), None)
            if j is not None and not h_used[j] and valid[i, j]:
                g_used[i] = h_used[j] = True
                n_match += 1

        free = valid & ~g_used[:, None] & ~h_used[None, :]
        if free.any():
            costs = np.where(free, 1.0 - ious, 2.0)
            rows, cols = linear_sum_assignment(costs)
            for i, j in zip(rows, cols):
                if not free[i, j]:
                    continue
                g, h = g_ids[i], h_ids[j]
                if g in last_hyp and last_hyp[g] != h:
                    idsw += 1
                last_hyp[g] = h
                g_used[i] = h_used[j] = True
                n_match += 1
        fn += int((~g_used).sum())
        fp += int((~h_used).sum())

    idtp = _identity_true_positives(pair_hits)
    if n_gt == 0:
        mota = idf1 = math.nan
    else:
        mota = 1.0 - (fn + fp + idsw) / n_gt
        idf1 = 2.0 * idtp / (n_gt + n_hyp)
    return EvalReport(mota, idf1, idsw, fp, fn, n_gt, n_match, idtp, n_hyp)


def _identity_true_positives(pair_hits: Mapping[tuple[int, int], int]) -> int:
    if not pair_hits:
        return 0
    g_ids = sorted({g for g, _ in pair_hits})
    h_ids = sorted({h for _, h in pair_hits})
    gi = {g: i for i, g in enumerate(g_ids)}
    hi = {h: j for j, h in enumerate(h_ids)}
    weights = np.zeros((len(g_ids), len(h_ids)))
    for (g, h), n in pair_hits.items():
        weights[gi[g], hi[h]] = n
    rows, cols = linear_sum_assignment(weights, maximize=True)
    return int(weights[rows, cols].sum())
