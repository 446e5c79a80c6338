"""Kalman-free online multi-object tracking with scene-adaptive thresholds."""
from .adaptation import SceneMetadata, TrackerConfig, adaptive_thresholds, default_config, derive_video_params
from .assignment import MatchResult, solve
from .geometry import BoundingBox, bbsi, cost_first, cost_matrix, cost_second, diou, eiou, giou, iou
from .postprocess import PostprocessParams, compute_params, interpolate_gaps, postprocess, remove_short_tracks
from .scene import KeypointMatch, SceneProfile, classify_camera, classify_depth, depth_score
from .tracker import Detection, Observation, Track, Tracker, TrackStatus, new_tracker, track_sequence

__version__ = "0.1.0"

__all__ = [
    "BoundingBox", "Detection", "KeypointMatch", "MatchResult", "Observation", "PostprocessParams",
    "SceneMetadata", "SceneProfile", "Track", "Tracker", "TrackerConfig", "TrackStatus",
    "adaptive_thresholds", "bbsi", "classify_camera", "classify_depth", "compute_params", "cost_first",
    "cost_matrix", "cost_second", "default_config", "depth_score", "derive_video_params", "diou",
    "eiou", "giou", "interpolate_gaps", "iou", "new_tracker", "postprocess", "remove_short_tracks",
    "solve", "track_sequence",
]
