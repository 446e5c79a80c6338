"""Overlap descriptors side by side.

Walks through IoU, GIoU, DIoU, EIoU and BBSI on a few hand-built box pairs
and shows where each one separates candidates that the previous one ties.
Run with ``python demos/descriptors.py``.
"""
import numpy as np

from scenetrack.geometry import BoundingBox as B, bbsi, cost_matrix, diou, eiou, giou, iou

# Boxes are (x1, y1, x2, y2) in pixels.
ref = B(0, 0, 10, 10)

# Two disjoint candidates: IoU is 0 for both, GIoU prefers the nearer one.
near, far = B(12, 0, 22, 10), B(30, 0, 40, 10)
print("disjoint   IoU  near/far:", iou(ref, near), iou(ref, far))
print("disjoint   GIoU near/far:", round(giou(ref, near), 4), round(giou(ref, far), 4))

# Two boxes inside the reference: GIoU ties, DIoU prefers the centered one.
centered, corner = B(2.5, 2.5, 7.5, 7.5), B(0, 0, 5, 5)
print("contained  GIoU centered/corner:", giou(ref, centered), giou(ref, corner))
print("contained  DIoU centered/corner:", diou(ref, centered), round(diou(ref, corner), 4))

# Concentric candidates with equal IoU: DIoU ties, EIoU prefers the same shape.
ref8 = B(0, 0, 8, 8)
same_shape, stretched = B(-1, -1, 9, 9), B(-2.25, 0, 10.25, 8)
print("concentric DIoU same/stretched:", diou(ref8, same_shape), diou(ref8, stretched))
print("concentric EIoU same/stretched:", round(eiou(ref8, same_shape), 4), round(eiou(ref8, stretched), 4))

# A case where EIoU picks the wrong candidate and BBSI the right one: the
# correct box is a slightly shrunk copy, the wrong one is shifted and taller.
tracklet, correct, wrong = B(0, 0, 10, 20), B(1, 1, 6, 20), B(0, 3, 14, 28)
print("EIoU  correct/wrong:", round(eiou(tracklet, correct), 4), round(eiou(tracklet, wrong), 4))
print("BBSI  correct/wrong:", round(bbsi(tracklet, correct), 4), round(bbsi(tracklet, wrong), 4))

# BBSI stays informative for disjoint boxes, which is what lets the tracker
# follow fast objects without a motion model.
print("BBSI of two disjoint, aligned boxes:", bbsi(ref, B(20, 0, 30, 10)))

# The tracker works on cost matrices: rows are tracks, columns detections.
tracks = np.array([[0, 0, 10, 20], [50, 0, 60, 20]], dtype=float)
detections = np.array([[52, 1, 62, 21], [1, 0, 11, 20], [200, 0, 210, 20]], dtype=float)
print("first-stage cost (1 - BBSI/3):")
print(np.round(cost_matrix(tracks, detections, "first"), 3))
print("second-stage cost (1 - IoU):")
print(np.round(cost_matrix(tracks, detections, "second"), 3))
