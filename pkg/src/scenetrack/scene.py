"""Scene features that steer offline post-processing.

Camera motion: a frame pair counts as stationary when at least one matched
keypoint moved less than a few pixels, and a majority vote over sampled
pairs decides for the whole video. Scene depth: the depth score compares the
mean detection height with the midrange height; sampled frames are averaged
and compared with a threshold.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

N_SAMPLES = 5


class KeypointMatch(NamedTuple):
    prev: tuple[float, float]
    cur: tuple[float, float]


class SceneProfile(NamedTuple):
    fixed_camera: bool
    deep_scene: bool
    depth_scores: tuple[float, ...] = ()
    stationary_votes: tuple[bool, ...] = ()


def displacement(m: KeypointMatch) -> float:
    return math.hypot(m.cur[0] - m.prev[0], m.cur[1] - m.prev[1])


def _displacements(matches) -> np.ndarray:
    if isinstance(matches, np.ndarray):
        arr = matches.reshape(-1, 4)
        return np.hypot(arr[:, 2] - arr[:, 0], arr[:, 3] - arr[:, 1])
    return np.array([displacement(m) for m in matches], dtype=float)


def frame_pair_is_stationary(matches: Sequence[KeypointMatch] | np.ndarray, threshold: float = 5.0) -> bool:
    """True when some keypoint moved strictly less than ``threshold`` pixels.

    ``matches`` may also be an ``(N, 4)`` array of ``prev_x, prev_y, cur_x, cur_y``.
    An empty list is no evidence of a fixed camera.
    """
    d = _displacements(matches)
    return bool(d.size and np.any(d < threshold))


def majority(votes: Sequence[bool]) -> bool:
    if len(votes) == 0:
        raise ValueError("need at least one vote")
    return 2 * sum(bool(v) for v in votes) > len(votes)


def classify_camera(samples: Sequence[Sequence[KeypointMatch]], threshold: float = 5.0) -> bool:
    """Fixed camera when a strict majority of sampled frame pairs is stationary."""
    if len(samples) == 0:
        raise ValueError("camera classification needs at least one sample")
    return majority([frame_pair_is_stationary(s, threshold) for s in samples])


def depth_score(heights: Sequence[float]) -> float:
    """``|mean - midrange| / midrange`` of the detection heights."""
    h = np.asarray(heights, dtype=float)
    if h.size < 2:
        raise ValueError("depth score needs at least two heights")
    if np.any(h <= 0):
        raise ValueError("heights must be positive")
    midrange = (h.max() + h.min()) / 2.0
    return float(abs(h.mean() - midrange) / midrange)


def classify_depth(samples: Sequence[Sequence[float]], threshold: float = 0.5) -> tuple[bool, list[float]]:
    """Deep scene when the mean depth score of usable samples exceeds ``threshold``.

    Samples with fewer than two heights are skipped. Returns the verdict and
    the per-sample scores that entered the mean.
    """
    scores = [depth_score(s) for s in samples if len(s) >= 2]
    if not scores:
        return False, []
    return float(np.mean(scores)) > threshold, scores


def sample_frame_indices(n_frames: int, k: int = N_SAMPLES) -> list[int]:
    """Zero-based indices ``floor(i * (n_frames - 1) / k)`` for ``i < k``.

    Each index is the first frame of a sampled pair; short videos give
    repeated indices, which are dropped.
    """
    if n_frames < 1:
        return []
    out = []
    for i in range(k):
        idx = (i * (n_frames - 1)) // k
        if idx not in out:
            out.append(idx)
    return out


def scene_profile(keypoint_samples, height_samples, *, depth_threshold: float = 0.5,
                  stationary_px: float = 5.0) -> SceneProfile:
    """Combine camera and depth verdicts.

    Empty keypoint samples are treated as not taken (short videos). With no
    keypoint evidence at all (``None`` or only empty samples) the camera is
    treated as moving.
    """
    present = [s for s in (keypoint_samples or ()) if len(s)]
    votes = [frame_pair_is_stationary(s, stationary_px) for s in present]
    fixed = majority(votes) if votes else False
    deep, scores = classify_depth(height_samples, depth_threshold)
    return SceneProfile(fixed, deep, tuple(scores), tuple(votes))


def detection_height_samples(detections, n_frames: int, min_score: float = 0.0) -> list[list[float]]:
    """Heights of detections scoring above ``min_score`` in the sampled frames.

    ``detections`` maps 1-based frame numbers to sequences of objects with
    ``box`` and ``score`` attributes.
    """
    samples = []
    for idx in sample_frame_indices(n_frames):
        frame = detections.get(idx + 1, ())
        samples.append([d.box.height() for d in frame if d.score > min_score and d.box.height() > 0])
    return samples
