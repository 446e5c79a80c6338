"""Deterministic synthetic sequences for tracking tests and benchmarks.

Objects move on straight lines (optionally bouncing off the frame edges),
detections are the ground-truth boxes plus Gaussian corner jitter, and
occlusion episodes either remove an object's detections or lower their score.
A camera pan shifts every box and every background keypoint by the same
per-frame offset.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ..adaptation import SceneMetadata
from ..geometry import BoundingBox
from ..mot_io import SequenceBundle
from ..scene import KeypointMatch, N_SAMPLES, sample_frame_indices
from ..tracker import Detection


class Occlusion(NamedTuple):
    start: int
    duration: int
    ids: tuple[int, ...]
    # 0 drops the detections; a positive level replaces their score.
    dip: float = 0.0


@dataclass
class SynthSpec:
    n_objects: int = 10
    n_frames: int = 100
    width: float = 1920.0
    height: float = 1080.0
    frame_rate: float = 30.0
    box_width: tuple[float, float] = (40.0, 60.0)
    box_height: tuple[float, float] = (100.0, 160.0)
    # Speed range in px/frame; direction is drawn uniformly.
    speed: tuple[float, float] = (0.0, 1.0)
    jitter: float = 0.0
    occlusions: Sequence[Occlusion] = ()
    # Expected false positives per frame (Poisson).
    fp_rate: float = 0.0
    fp_score: tuple[float, float] = (0.35, 0.9)
    score: float = 0.95
    camera_pan: tuple[float, float] = (0.0, 0.0)
    n_keypoints: int = 50
    keypoint_noise: float = 0.5
    # "grid" spreads starting positions over the central region, "random"
    # draws them anywhere inside the frame.
    layout: str = "grid"
    # Fraction of the frame kept free on each side by the grid layout.
    border: float = 0.15
    on_exit: str = "clamp"
    # Explicit starting boxes and velocities override layout and speed.
    initial_boxes: Sequence[tuple[float, float, float, float]] | None = None
    velocities: Sequence[tuple[float, float]] | None = None

    def __post_init__(self):
        if self.n_objects < 0 or self.n_frames < 0:
            raise ValueError("object and frame counts must be nonnegative")
        if self.jitter < 0:
            raise ValueError("jitter must be nonnegative")
        for occ in self.occlusions:
            if occ.duration < 0 or not 0.0 <= occ.dip <= 1.0:
                raise ValueError(f"bad occlusion episode {occ}")
        if self.on_exit not in ("clamp", "retire"):
            raise ValueError("on_exit must be 'clamp' or 'retire'")
        if self.layout not in ("grid", "random"):
            raise ValueError("layout must be 'grid' or 'random'")


def _initial_state(spec: SynthSpec, rng: np.random.Generator):
    n = spec.n_objects
    if spec.initial_boxes is not None:
        boxes = np.array(spec.initial_boxes, dtype=float).reshape(n, 4)
        centers = np.column_stack([(boxes[:, 0] + boxes[:, 2]) / 2, (boxes[:, 1] + boxes[:, 3]) / 2])
        sizes = np.column_stack([boxes[:, 2] - boxes[:, 0], boxes[:, 3] - boxes[:, 1]])
    else:
        sizes = np.column_stack([rng.uniform(*spec.box_width, n), rng.uniform(*spec.box_height, n)])
        if spec.layout == "grid":
            cols = int(np.ceil(np.sqrt(n * spec.width / spec.height))) if n else 1
            rows = int(np.ceil(n / cols)) if n else 1
            x0, x1 = spec.border * spec.width, (1 - spec.border) * spec.width
            y0, y1 = spec.border * spec.height, (1 - spec.border) * spec.height
            k = np.arange(n)
            cx = x0 + (k % cols + 0.5) * (x1 - x0) / cols
            cy = y0 + (k // cols + 0.5) * (y1 - y0) / rows
            centers = np.column_stack([cx, cy])
        else:
            centers = np.column_stack([
                rng.uniform(sizes[:, 0] / 2, spec.width - sizes[:, 0] / 2),
                rng.uniform(sizes[:, 1] / 2, spec.height - sizes[:, 1] / 2),
            ])
    if spec.velocities is not None:
        velocity = np.array(spec.velocities, dtype=float).reshape(n, 2)
    else:
        speed = rng.uniform(*spec.speed, n)
        angle = rng.uniform(0, 2 * np.pi, n)
        velocity = np.column_stack([speed * np.cos(angle), speed * np.sin(angle)])
    return centers, sizes, velocity


def generate_sequence(spec: SynthSpec, seed: int = 0, name: str = "SYNTH") -> SequenceBundle:
    """Build a full sequence (ground truth, detections, keypoint samples)."""
    rng = np.random.default_rng(seed)
    centers, sizes, velocity = _initial_state(spec, rng)
    pan = np.asarray(spec.camera_pan, dtype=float)
    alive = np.ones(spec.n_objects, dtype=bool)
    half = sizes / 2

    dropped: dict[tuple[int, int], float] = {}
    for occ in spec.occlusions:
        for f in range(occ.start, occ.start + occ.duration):
            for i in occ.ids:
                dropped[(f, i)] = occ.dip

    gt: dict[int, list[tuple[int, BoundingBox]]] = {}
    dets: dict[int, list[Detection]] = {}
    for frame in range(1, spec.n_frames + 1):
        if frame > 1:
            centers = centers + velocity + pan
            lo, hi = half, np.array([spec.width, spec.height]) - half
            outside = (centers < lo) | (centers > hi)
            if spec.on_exit == "clamp":
                velocity = np.where(outside, -velocity, velocity)
                centers = np.clip(centers, lo, hi)
            else:
                alive &= ~outside.any(axis=1)
        frame_gt, frame_det = [], []
        for i in np.flatnonzero(alive):
            oid = int(i) + 1
            x1, y1 = centers[i] - half[i]
            x2, y2 = centers[i] + half[i]
            box = BoundingBox(x1, y1, x2, y2)
            frame_gt.append((oid, box))
            dip = dropped.get((frame, oid))
            if dip == 0.0:
                continue
            if spec.jitter > 0:
                noisy = np.array(box) + rng.normal(0.0, spec.jitter, 4)
                noisy = np.array([min(noisy[0], noisy[2] - 1), min(noisy[1], noisy[3] - 1), noisy[2], noisy[3]])
                box = BoundingBox(*noisy)
            frame_det.append(Detection(box, spec.score if dip is None else dip))
        for _ in range(rng.poisson(spec.fp_rate) if spec.fp_rate > 0 else 0):
            w, h = rng.uniform(*spec.box_width), rng.uniform(*spec.box_height)
            x, y = rng.uniform(0, spec.width - w), rng.uniform(0, spec.height - h)
            frame_det.append(Detection(BoundingBox(x, y, x + w, y + h), rng.uniform(*spec.fp_score)))
        gt[frame] = frame_gt
        if frame_det:
            dets[frame] = frame_det

    samples = []
    for _ in sample_frame_indices(max(spec.n_frames, 2), N_SAMPLES):
        prev = np.column_stack([rng.uniform(0, spec.width, spec.n_keypoints),
                                rng.uniform(0, spec.height, spec.n_keypoints)])
        cur = prev + pan + rng.normal(0.0, spec.keypoint_noise, prev.shape)
        samples.append([KeypointMatch(tuple(p), tuple(c)) for p, c in zip(prev.tolist(), cur.tolist())])
    while len(samples) < N_SAMPLES:
        samples.append([])

    meta = SceneMetadata(spec.frame_rate, spec.width, spec.height, spec.n_frames)
    return SequenceBundle(name, meta, dets, gt, samples)


def generate(spec: SynthSpec, seed: int = 0):
    """Return ``(ground_truth, detections, keypoint_samples)`` for ``spec``."""
    bundle = generate_sequence(spec, seed)
    return bundle.ground_truth, bundle.detections, bundle.keypoint_samples


def density_spec(objects_per_frame: int = 32, n_frames: int = 600, seed_jitter: float = 1.0) -> SynthSpec:
    """A crowd at a fixed density, for throughput measurements."""
    return SynthSpec(n_objects=objects_per_frame, n_frames=n_frames, speed=(0.5, 2.0),
                     jitter=seed_jitter, fp_rate=1.0)
