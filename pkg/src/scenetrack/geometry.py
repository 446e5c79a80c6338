"""Bounding boxes, overlap descriptors and association costs.

Boxes use corner form ``(x1, y1, x2, y2)`` in pixels with ``y`` growing
downward. Every descriptor has a scalar form taking two :class:`BoundingBox`
values and a ``pairwise_*`` form taking ``(N, 4)`` and ``(M, 4)`` arrays and
returning an ``(N, M)`` matrix.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

EPS = 1e-7

COST_KINDS = ("first", "second", "bbsi", "iou", "giou", "diou", "eiou")


class _Corners(NamedTuple):
    x1: float
    y1: float
    x2: float
    y2: float


class BoundingBox(_Corners):
    """Axis-aligned pixel rectangle.

    Zero-width or zero-height boxes are allowed; a negative extent raises
    ``ValueError``.
    """

    __slots__ = ()

    def __new__(cls, x1: float, y1: float, x2: float, y2: float) -> "BoundingBox":
        x1, y1, x2, y2 = float(x1), float(y1), float(x2), float(y2)
        if not (x2 >= x1 and y2 >= y1):
            raise ValueError(f"box has negative extent: ({x1}, {y1}, {x2}, {y2})")
        return super().__new__(cls, x1, y1, x2, y2)

    @classmethod
    def from_ltwh(cls, left: float, top: float, width: float, height: float) -> "BoundingBox":
        return cls(left, top, left + width, top + height)

    def to_ltwh(self) -> tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2 - self.x1, self.y2 - self.y1)

    def width(self) -> float:
        return self.x2 - self.x1

    def height(self) -> float:
        return self.y2 - self.y1

    def center(self) -> tuple[float, float]:
        return ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)

    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def shifted(self, dx: float, dy: float) -> "BoundingBox":
        return BoundingBox(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)


def _enclosing(a: BoundingBox, b: BoundingBox) -> tuple[float, float]:
    return max(a.x2, b.x2) - min(a.x1, b.x1), max(a.y2, b.y2) - min(a.y1, b.y1)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union; 0 when both boxes have zero area."""
    iw = max(0.0, min(a.x2, b.x2) - max(a.x1, b.x1))
    ih = max(0.0, min(a.y2, b.y2) - max(a.y1, b.y1))
    inter = iw * ih
    union = a.area() + b.area() - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def giou(a: BoundingBox, b: BoundingBox) -> float:
    wc, hc = _enclosing(a, b)
    area_c = wc * hc
    if area_c <= 0.0:
        return 0.0
    inter = max(0.0, min(a.x2, b.x2) - max(a.x1, b.x1)) * max(0.0, min(a.y2, b.y2) - max(a.y1, b.y1))
    union = a.area() + b.area() - inter
    return iou(a, b) - (area_c - union) / area_c


def diou(a: BoundingBox, b: BoundingBox) -> float:
    wc, hc = _enclosing(a, b)
    diag2 = wc * wc + hc * hc
    if diag2 <= 0.0:
        return iou(a, b)
    (ax, ay), (bx, by) = a.center(), b.center()
    return iou(a, b) - ((ax - bx) ** 2 + (ay - by) ** 2) / diag2


def eiou(a: BoundingBox, b: BoundingBox) -> float:
    wc, hc = _enclosing(a, b)
    value = diou(a, b)
    if hc > 0.0:
        value -= (a.height() - b.height()) ** 2 / (hc * hc)
    if wc > 0.0:
        value -= (a.width() - b.width()) ** 2 / (wc * wc)
    return value


def bbsi(a: BoundingBox, b: BoundingBox, eps: float = EPS, *, literal_axes: bool = False) -> float:
    """Bounding Box Similarity Index, in ``(-1, 3]``.

    Sum of an approximate DIoU (IoU minus a Manhattan center-distance term)
    and two shape-agreement terms. The height term uses the vertical extent
    of the intersection and the width term the horizontal extent.

    ``literal_axes=True`` swaps the two extents (horizontal overlap paired
    with the height difference). It exists only so tests can document how
    the two readings differ; the tracker never sets it.
    """
    overlap_x = max(0.0, min(a.x2, b.x2) - max(a.x1, b.x1))
    overlap_y = max(0.0, min(a.y2, b.y2) - max(a.y1, b.y1))
    h_eff, w_eff = (overlap_x, overlap_y) if literal_axes else (overlap_y, overlap_x)
    s_h = h_eff / (h_eff + abs(b.height() - a.height()) + eps)
    s_w = w_eff / (w_eff + abs(b.width() - a.width()) + eps)
    wc, hc = _enclosing(a, b)
    (ax, ay), (bx, by) = a.center(), b.center()
    s_c = (abs(ax - bx) + abs(ay - by)) / (hc + wc) if hc + wc > 0.0 else 0.0
    return iou(a, b) - s_c + s_h + s_w


def cost_first(a: BoundingBox, b: BoundingBox) -> float:
    """``1 - BBSI/3``; spans ``[0, 4/3)`` in practice."""
    return 1.0 - bbsi(a, b) / 3.0


def cost_second(a: BoundingBox, b: BoundingBox) -> float:
    return 1.0 - iou(a, b)


# ---------------------------------------------------------------------------
# Vectorized forms. ``a`` is (N, 4), ``b`` is (M, 4); results are (N, M).


def as_array(boxes: Sequence[BoundingBox] | np.ndarray) -> np.ndarray:
    """Stack boxes into a float ``(N, 4)`` array (an empty input gives ``(0, 4)``)."""
    arr = np.asarray(boxes, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 4))
    return arr.reshape(-1, 4)


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # 0 wherever the denominator is not positive.
    num, den = np.broadcast_arrays(num, den)
    return np.divide(num, den, out=np.zeros(num.shape), where=den > 0.0)


def _pair_terms(a: np.ndarray, b: np.ndarray):
    ax1, ay1, ax2, ay2 = (a[:, k, None] for k in range(4))
    bx1, by1, bx2, by2 = (b[None, :, k] for k in range(4))
    ow = np.clip(np.minimum(ax2, bx2) - np.maximum(ax1, bx1), 0.0, None)
    oh = np.clip(np.minimum(ay2, by2) - np.maximum(ay1, by1), 0.0, None)
    inter = ow * oh
    union = (ax2 - ax1) * (ay2 - ay1) + (bx2 - bx1) * (by2 - by1) - inter
    iou_m = _safe_div(inter, union)
    wc = np.maximum(ax2, bx2) - np.minimum(ax1, bx1)
    hc = np.maximum(ay2, by2) - np.minimum(ay1, by1)
    dx = (ax1 + ax2) / 2.0 - (bx1 + bx2) / 2.0
    dy = (ay1 + ay2) / 2.0 - (by1 + by2) / 2.0
    dw = (ax2 - ax1) - (bx2 - bx1)
    dh = (ay2 - ay1) - (by2 - by1)
    return iou_m, ow, oh, union, wc, hc, dx, dy, dw, dh


def _overlaps(a: np.ndarray, b: np.ndarray):
    # Intersection extents and IoU only; the tracker's hot path needs no more.
    ow = np.maximum(np.minimum.outer(a[:, 2], b[:, 2]) - np.maximum.outer(a[:, 0], b[:, 0]), 0.0)
    oh = np.maximum(np.minimum.outer(a[:, 3], b[:, 3]) - np.maximum.outer(a[:, 1], b[:, 1]), 0.0)
    inter = ow * oh
    union = np.add.outer((a[:, 2] - a[:, 0]) * (a[:, 3] - a[:, 1]), (b[:, 2] - b[:, 0]) * (b[:, 3] - b[:, 1])) - inter
    return ow, oh, _safe_div(inter, union)


def pairwise_iou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_array(a), as_array(b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    return _overlaps(a, b)[2]


def pairwise_giou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_array(a), as_array(b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    iou_m, _, _, union, wc, hc, *_ = _pair_terms(a, b)
    area_c = wc * hc
    return np.where(area_c > 0.0, iou_m - _safe_div(area_c - union, area_c), 0.0)


def pairwise_diou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_array(a), as_array(b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    iou_m, _, _, _, wc, hc, dx, dy, _, _ = _pair_terms(a, b)
    return iou_m - _safe_div(dx * dx + dy * dy, wc * wc + hc * hc)


def pairwise_eiou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_array(a), as_array(b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    iou_m, _, _, _, wc, hc, dx, dy, dw, dh = _pair_terms(a, b)
    value = iou_m - _safe_div(dx * dx + dy * dy, wc * wc + hc * hc)
    return value - _safe_div(dh * dh, hc * hc) - _safe_div(dw * dw, wc * wc)


def pairwise_bbsi(a: np.ndarray, b: np.ndarray, eps: float = EPS) -> np.ndarray:
    a, b = as_array(a), as_array(b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    ow, oh, iou_m = _overlaps(a, b)
    aw, ah = a[:, 2] - a[:, 0], a[:, 3] - a[:, 1]
    bw, bh = b[:, 2] - b[:, 0], b[:, 3] - b[:, 1]
    span = (np.maximum.outer(a[:, 2], b[:, 2]) - np.minimum.outer(a[:, 0], b[:, 0])
            + np.maximum.outer(a[:, 3], b[:, 3]) - np.minimum.outer(a[:, 1], b[:, 1]))
    # Manhattan distance between centers, from doubled center coordinates.
    manhattan = 0.5 * (np.abs(np.subtract.outer(a[:, 0] + a[:, 2], b[:, 0] + b[:, 2]))
                       + np.abs(np.subtract.outer(a[:, 1] + a[:, 3], b[:, 1] + b[:, 3])))
    s_h = oh / (oh + np.abs(np.subtract.outer(ah, bh)) + eps)
    s_w = ow / (ow + np.abs(np.subtract.outer(aw, bw)) + eps)
    s_c = _safe_div(manhattan, span)
    return iou_m - s_c + s_h + s_w


def cost_matrix(tracks, detections, kind: str = "first") -> np.ndarray:
    """Association cost between every track box (rows) and detection box (columns).

    ``first``/``bbsi`` gives ``1 - BBSI/3`` and ``second``/``iou`` gives
    ``1 - IoU``. The other descriptors are mapped to ``[0, 1)`` by
    ``(1 - d) / span`` where span is 2 for GIoU/DIoU and 4 for EIoU.
    """
    a, b = as_array(tracks), as_array(detections)
    if kind in ("first", "bbsi"):
        return 1.0 - pairwise_bbsi(a, b) / 3.0
    if kind in ("second", "iou"):
        return 1.0 - pairwise_iou(a, b)
    if kind == "giou":
        return (1.0 - pairwise_giou(a, b)) / 2.0
    if kind == "diou":
        return (1.0 - pairwise_diou(a, b)) / 2.0
    if kind == "eiou":
        return (1.0 - pairwise_eiou(a, b)) / 4.0
    raise ValueError(f"unknown cost kind {kind!r}; expected one of {COST_KINDS}")
