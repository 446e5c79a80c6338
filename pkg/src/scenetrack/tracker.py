"""Online two-stage tracker without a motion model.

Each frame runs: drop expired lost tracks, pool active and lost tracks,
split detections into definite (score > HTH) and possible (LTH < score <= HTH),
match the pool to definite detections on the BBSI cost, spawn new tracks from
unmatched definite detections that clear NTH, match leftover tracks to
possible detections on ``1 - IoU``, and mark what is still unmatched as lost
at the center or at the margin of the frame.
"""
from __future__ import annotations

import enum
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .adaptation import (
    SceneMetadata,
    Thresholds,
    TrackerConfig,
    VideoParams,
    adaptive_thresholds,
    default_config,
    derive_video_params,
)
from .assignment import solve
from .geometry import BoundingBox, cost_matrix


class TrackStatus(enum.Enum):
    ACTIVE = "active"
    LOST_AT_CENTER = "lost_at_center"
    LOST_AT_MARGIN = "lost_at_margin"


class _DetectionFields(NamedTuple):
    box: BoundingBox
    score: float


class Detection(_DetectionFields):
    __slots__ = ()

    def __new__(cls, box: BoundingBox, score: float) -> "Detection":
        score = float(score)
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"detection score must lie in [0, 1], got {score}")
        if not isinstance(box, BoundingBox):
            box = BoundingBox(*box)
        return super().__new__(cls, box, score)


class Observation(NamedTuple):
    frame: int
    box: BoundingBox
    score: float
    # True for boxes filled in offline by interpolation.
    synthetic: bool = False


class Track:
    """An identity and the boxes observed for it, one per active frame."""

    __slots__ = ("id", "status", "history")

    def __init__(self, track_id: int, history: list[Observation] | None = None,
                 status: TrackStatus = TrackStatus.ACTIVE):
        self.id = track_id
        self.status = status
        self.history: list[Observation] = list(history or [])

    @property
    def last_box(self) -> BoundingBox:
        return self.history[-1].box

    @property
    def last_score(self) -> float:
        return self.history[-1].score

    @property
    def last_frame(self) -> int:
        return self.history[-1].frame

    @property
    def is_lost(self) -> bool:
        return self.status is not TrackStatus.ACTIVE

    def record(self, frame: int, box: BoundingBox, score: float) -> None:
        if self.history and frame <= self.history[-1].frame:
            raise ValueError(f"track {self.id}: frame {frame} does not follow {self.history[-1].frame}")
        self.history.append(Observation(frame, box, score))
        self.status = TrackStatus.ACTIVE

    def copy(self) -> "Track":
        return Track(self.id, self.history, self.status)

    def __len__(self) -> int:
        return len(self.history)

    def __repr__(self) -> str:
        span = f"{self.history[0].frame}-{self.last_frame}" if self.history else "empty"
        return f"Track(id={self.id}, status={self.status.value}, frames={span}, n={len(self.history)})"


class StepLog(NamedTuple):
    """What one call to :meth:`Tracker.step` did, by track id."""

    frame: int
    thresholds: Thresholds
    pruned: list[int]
    matched_first: list[int]
    matched_second: list[int]
    created: list[int]
    lost: list[int]
    n_definite: int
    n_possible: int


def classify_loss_location(box: BoundingBox, width: float, height: float,
                           hmargin: float, vmargin: float) -> TrackStatus:
    """Lost at the margin when the box center lies strictly inside a border band."""
    cx = (box[0] + box[2]) / 2.0
    cy = (box[1] + box[3]) / 2.0
    if cx < hmargin or cx > width - hmargin or cy < vmargin or cy > height - vmargin:
        return TrackStatus.LOST_AT_MARGIN
    return TrackStatus.LOST_AT_CENTER


def _as_arrays(detections) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(detections, np.ndarray):
        arr = np.asarray(detections, dtype=float).reshape(-1, 5)
        boxes, scores = arr[:, :4], arr[:, 4]
        if np.any(boxes[:, 2] < boxes[:, 0]) or np.any(boxes[:, 3] < boxes[:, 1]):
            raise ValueError("detection array holds a box with negative extent")
        if np.any((scores < 0.0) | (scores > 1.0)):
            raise ValueError("detection scores must lie in [0, 1]")
        return boxes, scores
    if len(detections) == 0:
        return np.zeros((0, 4)), np.zeros(0)
    boxes = np.array([d.box for d in detections], dtype=float)
    scores = np.array([d.score for d in detections], dtype=float)
    return boxes, scores


class Tracker:
    """Stateful per-sequence tracker.

    Feed frames in increasing order with :meth:`step`. ``tracks`` keeps every
    track ever created, so the full output is available after the last frame.
    """

    def __init__(self, config: TrackerConfig | None = None, scene: SceneMetadata | None = None):
        if scene is None:
            raise ValueError("scene metadata (frame rate and frame size) is required")
        self.config = config or default_config()
        self.scene = SceneMetadata(*scene).validate()
        self.params: VideoParams = derive_video_params(self.config, self.scene)
        self.active: list[Track] = []
        self.lost: list[Track] = []
        self.tracks: list[Track] = []
        self.next_id = 1
        self.frame_no = 0
        self.last_log: StepLog | None = None

    def _loss_status(self, box: BoundingBox) -> TrackStatus:
        return classify_loss_location(box, self.scene.width, self.scene.height,
                                      self.params.hmargin, self.params.vmargin)

    def prune_lost(self, frame_no: int) -> list[int]:
        """Forget lost tracks whose timeout has passed; returns their ids."""
        ctime, mtime = self.params.ctime, self.params.mtime
        keep, dropped = [], []
        for track in self.lost:
            age = frame_no - track.last_frame
            limit = ctime if track.status is TrackStatus.LOST_AT_CENTER else mtime
            (dropped if age > limit else keep).append(track)
        self.lost = keep
        return [t.id for t in dropped]

    def _spawn(self, frame_no: int, box: BoundingBox, score: float) -> Track:
        track = Track(self.next_id)
        self.next_id += 1
        track.record(frame_no, box, score)
        self.tracks.append(track)
        return track

    def step(self, detections: Sequence[Detection] | np.ndarray, frame_no: int | None = None) -> list[Track]:
        """Advance one frame and return the tracks active in it.

        ``detections`` is a sequence of :class:`Detection` or an ``(N, 5)``
        array of ``x1, y1, x2, y2, score`` rows. ``frame_no`` defaults to the
        previous frame plus one.
        """
        if frame_no is None:
            frame_no = self.frame_no + 1
        if frame_no <= self.frame_no:
            raise ValueError(f"frame {frame_no} does not follow frame {self.frame_no}")
        self.frame_no = frame_no
        config = self.config
        boxes, scores = _as_arrays(detections)
        thr = adaptive_thresholds(config, scores)

        pruned = self.prune_lost(frame_no)
        pool = self.active + self.lost
        # Python-level views for building observations; frame order is
        # already guaranteed above, so histories are appended directly.
        box_rows = boxes.tolist()
        score_list = scores.tolist()

        definite = np.flatnonzero(scores > thr.hth)
        possible = np.flatnonzero((scores > config.lth) & (scores <= thr.hth))
        definite_list, possible_list = definite.tolist(), possible.tolist()

        matched: list[Track] = []
        created: list[Track] = []
        first_ids: list[int] = []
        second_ids: list[int] = []
        unmatched: list[Track] = []

        if pool:
            pool_boxes = np.array([t.history[-1].box for t in pool], dtype=float)
            costs = cost_matrix(pool_boxes, boxes[definite], config.first_cost)
            result = solve(costs, thr.mth1)
            for i, j, _ in result.matches:
                d = definite_list[j]
                track = pool[i]
                track.history.append(Observation(frame_no, BoundingBox._make(box_rows[d]), score_list[d]))
                track.status = TrackStatus.ACTIVE
                matched.append(track)
                first_ids.append(track.id)
            unmatched = [pool[i] for i in result.unmatched_rows]
            leftover = definite[result.unmatched_cols]
        else:
            leftover = definite

        for d in leftover.tolist():
            if score_list[d] >= thr.nth:
                created.append(self._spawn(frame_no, BoundingBox._make(box_rows[d]), score_list[d]))

        if unmatched and len(possible):
            ut_boxes = np.array([t.history[-1].box for t in unmatched], dtype=float)
            costs = cost_matrix(ut_boxes, boxes[possible], config.second_cost)
            result = solve(costs, config.mth2)
            for i, j, _ in result.matches:
                d = possible_list[j]
                track = unmatched[i]
                track.history.append(Observation(frame_no, BoundingBox._make(box_rows[d]), score_list[d]))
                track.status = TrackStatus.ACTIVE
                matched.append(track)
                second_ids.append(track.id)
            unmatched = [unmatched[i] for i in result.unmatched_rows]

        newly_lost = []
        for track in unmatched:
            if track.status is TrackStatus.ACTIVE:
                newly_lost.append(track.id)
            track.status = self._loss_status(track.last_box)

        self.active = sorted(matched, key=_by_id) + created
        self.lost = sorted(unmatched, key=_by_id)
        self.last_log = StepLog(
            frame=frame_no, thresholds=thr, pruned=pruned,
            matched_first=first_ids, matched_second=second_ids,
            created=[t.id for t in created], lost=newly_lost,
            n_definite=len(definite), n_possible=len(possible),
        )
        return list(self.active)

    def run(self, frames: Mapping[int, Sequence[Detection]] | Iterable[tuple[int, Sequence[Detection]]],
            n_frames: int | None = None) -> list[Track]:
        """Track a whole sequence and return every track created.

        ``frames`` maps frame numbers to detections. Frames missing from the
        mapping are stepped with no detections up to ``n_frames`` (or the last
        frame present), so lost-track ageing stays correct.
        """
        items = dict(frames.items() if isinstance(frames, Mapping) else frames)
        last = max(items, default=0)
        if n_frames is not None:
            last = max(last, n_frames)
        empty = np.zeros((0, 5))
        for f in range(self.frame_no + 1, last + 1):
            self.step(items.get(f, empty), f)
        return self.tracks


def _by_id(track: Track) -> int:
    return track.id


def new_tracker(config: TrackerConfig | None, scene: SceneMetadata) -> Tracker:
    return Tracker(config, scene)


def track_sequence(frames, scene: SceneMetadata, config: TrackerConfig | None = None,
                   n_frames: int | None = None) -> list[Track]:
    return Tracker(config, scene).run(frames, n_frames)
