"""Readers and writers for MOTChallenge-style text files.

Detection and result files hold one box per line::

    frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z

Ground truth uses the same first six columns followed by a consider flag,
a class and a visibility ratio. Keypoint-match files hold
``sample_index,prev_x,prev_y,cur_x,cur_y`` with ``sample_index`` in 0..4.
Only ``.`` is accepted as the decimal separator.
"""
from __future__ import annotations

import configparser
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .adaptation import SceneMetadata
from .geometry import BoundingBox
from .scene import N_SAMPLES, KeypointMatch
from .tracker import Detection, Observation, Track


class MOTFormatError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass
class SequenceBundle:
    name: str
    meta: SceneMetadata
    detections: dict[int, list[Detection]]
    ground_truth: dict[int, list[tuple[int, BoundingBox]]] | None = None
    keypoint_samples: list[list[KeypointMatch]] | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n_frames(self) -> int:
        if self.meta.length:
            return int(self.meta.length)
        frames = list(self.detections) + list(self.ground_truth or {})
        return max(frames, default=0)


def _rows(path, min_cols: int):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) < min_cols:
                raise MOTFormatError(path, lineno, f"expected at least {min_cols} fields, got {len(parts)}")
            try:
                yield lineno, [float(p) for p in parts]
            except ValueError:
                raise MOTFormatError(path, lineno, f"non-numeric field in {line!r}") from None


def _frame(path, lineno: int, value: float) -> int:
    if value != int(value) or value < 1:
        raise MOTFormatError(path, lineno, f"frame must be a positive integer, got {value}")
    return int(value)


def _box(path, lineno: int, left, top, width, height) -> BoundingBox:
    if width < 0 or height < 0:
        raise MOTFormatError(path, lineno, "negative box width or height")
    return BoundingBox(left, top, left + width, top + height)


def read_detections(path, normalize_scores: bool = True) -> dict[int, list[Detection]]:
    """Per-frame detections, with boxes in corner form.

    When ``normalize_scores`` is set and the file's largest score exceeds 1,
    every score is divided by that maximum. Scores are then clipped to
    ``[0, 1]``.
    """
    raw = []
    for lineno, row in _rows(path, 7):
        raw.append((_frame(path, lineno, row[0]), _box(path, lineno, *row[2:6]), row[6]))
    top = max((s for _, _, s in raw), default=0.0)
    scale = top if normalize_scores and top > 1.0 else 1.0
    frames: dict[int, list[Detection]] = defaultdict(list)
    for frame, box, score in raw:
        frames[frame].append(Detection(box, min(max(score / scale, 0.0), 1.0)))
    return dict(sorted(frames.items()))


def read_ground_truth(path, classes: Iterable[int] | None = None) -> dict[int, list[tuple[int, BoundingBox]]]:
    """Per-frame ``(id, box)`` pairs, skipping rows whose consider flag is 0.

    ``classes`` restricts rows to the given class ids when the file has a
    class column.
    """
    wanted = None if classes is None else {int(c) for c in classes}
    frames: dict[int, list] = defaultdict(list)
    for lineno, row in _rows(path, 6):
        if len(row) >= 7 and row[6] == 0:
            continue
        if wanted is not None and len(row) >= 8 and int(row[7]) not in wanted:
            continue
        frames[_frame(path, lineno, row[0])].append((int(row[1]), _box(path, lineno, *row[2:6])))
    return dict(sorted(frames.items()))


def read_results(path) -> list[Track]:
    """Tracks from a results file, ordered by id, histories ordered by frame."""
    by_id: dict[int, list[Observation]] = defaultdict(list)
    for lineno, row in _rows(path, 6):
        frame = _frame(path, lineno, row[0])
        score = row[6] if len(row) >= 7 else 1.0
        by_id[int(row[1])].append(Observation(frame, _box(path, lineno, *row[2:6]), score))
    tracks = []
    for tid in sorted(by_id):
        hist = sorted(by_id[tid], key=lambda o: o.frame)
        for a, b in zip(hist, hist[1:]):
            if a.frame == b.frame:
                raise ValueError(f"{path}: track {tid} has two boxes in frame {a.frame}")
        tracks.append(Track(tid, hist))
    return tracks


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def format_results(tracks: Iterable[Track]) -> str:
    rows = []
    for t in tracks:
        for o in t.history:
            rows.append((o.frame, t.id, o.box, o.score))
    rows.sort(key=lambda r: (r[0], r[1]))
    out = []
    for frame, tid, box, score in rows:
        left, top, w, h = box.to_ltwh()
        out.append(f"{frame},{tid},{_fmt(left)},{_fmt(top)},{_fmt(w)},{_fmt(h)},{score:.3f},-1,-1,-1\n")
    return "".join(out)


def write_results(path, tracks: Iterable[Track]) -> None:
    """Write tracks sorted by frame then id; coordinates use two decimals."""
    text = format_results(tracks)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_detections(path, frames: dict[int, list[Detection]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for frame in sorted(frames):
            for d in frames[frame]:
                left, top, w, h = d.box.to_ltwh()
                fh.write(f"{frame},-1,{_fmt(left)},{_fmt(top)},{_fmt(w)},{_fmt(h)},{d.score:.3f},-1,-1,-1\n")


def write_ground_truth(path, frames: dict[int, list[tuple[int, BoundingBox]]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for frame in sorted(frames):
            for tid, box in sorted(frames[frame], key=lambda p: p[0]):
                left, top, w, h = box.to_ltwh()
                fh.write(f"{frame},{tid},{_fmt(left)},{_fmt(top)},{_fmt(w)},{_fmt(h)},1,1,1\n")


def read_seqinfo(path) -> SceneMetadata:
    """Frame rate, size and length from a ``seqinfo.ini`` file."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    section = parser["Sequence"] if parser.has_section("Sequence") else parser[parser.default_section]
    values = {}
    for key in ("frameRate", "imWidth", "imHeight"):
        if key not in section:
            raise KeyError(f"{path}: missing key {key}")
        values[key] = float(section[key])
    length = int(section["seqLength"]) if "seqLength" in section else None
    return SceneMetadata(values["frameRate"], values["imWidth"], values["imHeight"], length)


def write_seqinfo(path, name: str, meta: SceneMetadata) -> None:
    def num(x):
        return str(int(x)) if float(x).is_integer() else str(x)

    lines = ["[Sequence]", f"name={name}", f"frameRate={num(meta.frame_rate)}",
             f"seqLength={meta.length or 0}", f"imWidth={num(meta.width)}",
             f"imHeight={num(meta.height)}", "imExt=.jpg", "imDir=img1"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_keypoints(path) -> list[list[KeypointMatch]]:
    """Five lists of keypoint matches, one per sampled frame pair."""
    samples: list[list[KeypointMatch]] = [[] for _ in range(N_SAMPLES)]
    for lineno, row in _rows(path, 5):
        k = row[0]
        if k != int(k) or not 0 <= k < N_SAMPLES:
            raise MOTFormatError(path, lineno, f"sample index must be in 0..{N_SAMPLES - 1}, got {row[0]}")
        samples[int(k)].append(KeypointMatch((row[1], row[2]), (row[3], row[4])))
    return samples


def write_keypoints(path, samples: list[list[KeypointMatch]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for k, sample in enumerate(samples):
            for m in sample:
                fh.write(f"{k},{m.prev[0]:.3f},{m.prev[1]:.3f},{m.cur[0]:.3f},{m.cur[1]:.3f}\n")


def load_sequence(directory, det_path=None, keypoints_path=None) -> SequenceBundle:
    """Load a MOTChallenge sequence directory.

    Expects ``seqinfo.ini`` and ``det/det.txt``; ``gt/gt.txt`` and
    ``keypoints.txt`` are optional.
    """
    meta = read_seqinfo(os.path.join(directory, "seqinfo.ini"))
    det_path = det_path or os.path.join(directory, "det", "det.txt")
    gt_path = os.path.join(directory, "gt", "gt.txt")
    kp_path = keypoints_path or os.path.join(directory, "keypoints.txt")
    return SequenceBundle(
        name=os.path.basename(os.path.normpath(directory)),
        meta=meta,
        detections=read_detections(det_path),
        ground_truth=read_ground_truth(gt_path) if os.path.exists(gt_path) else None,
        keypoint_samples=read_keypoints(kp_path) if os.path.exists(kp_path) else None,
    )


def save_sequence(directory, bundle: SequenceBundle) -> None:
    os.makedirs(os.path.join(directory, "det"), exist_ok=True)
    write_seqinfo(os.path.join(directory, "seqinfo.ini"), bundle.name, bundle.meta)
    write_detections(os.path.join(directory, "det", "det.txt"), bundle.detections)
    if bundle.ground_truth is not None:
        os.makedirs(os.path.join(directory, "gt"), exist_ok=True)
        write_ground_truth(os.path.join(directory, "gt", "gt.txt"), bundle.ground_truth)
    if bundle.keypoint_samples is not None:
        write_keypoints(os.path.join(directory, "keypoints.txt"), bundle.keypoint_samples)
