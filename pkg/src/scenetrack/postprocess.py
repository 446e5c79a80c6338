"""Offline track refinement: short-track removal and gap interpolation."""
from __future__ import annotations

from typing import NamedTuple, Sequence

from .adaptation import TrackerConfig, round_half_up
from .geometry import BoundingBox
from .scene import SceneProfile
from .tracker import Observation, Track

MODES = ("simple", "advanced")


class PostprocessParams(NamedTuple):
    n_min: int
    n_dti: int


def interpolation_coefficient(config: TrackerConfig, fixed_camera: bool, deep_scene: bool) -> float:
    # (fixed, deep): (T, T) -> Cd1, (T, F) -> Cd2, (F, T) -> Cd3, (F, F) -> Cd4
    index = (0 if fixed_camera else 2) + (0 if deep_scene else 1)
    return config.cd[index]


def compute_params(config: TrackerConfig, profile: SceneProfile | None, frame_rate: float,
                   mode: str = "advanced") -> PostprocessParams:
    """Minimum track length and interpolation timeout, both in frames.

    ``simple`` mode ignores the scene and uses the fixed-camera, shallow-scene
    coefficient, i.e. the setting where straight-line gap filling is safest.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode == "simple" or profile is None:
        cd = interpolation_coefficient(config, True, False)
    else:
        cd = interpolation_coefficient(config, profile.fixed_camera, profile.deep_scene)
    return PostprocessParams(round_half_up(config.cm * frame_rate), round_half_up(cd * frame_rate))


def remove_short_tracks(tracks: Sequence[Track], n_min: int) -> list[Track]:
    """Keep tracks with at least ``n_min`` observed (non-synthetic) frames."""
    return [t for t in tracks if sum(not o.synthetic for o in t.history) >= n_min]


def _lerp_box(a: BoundingBox, b: BoundingBox, t: float) -> BoundingBox:
    return BoundingBox(*(pa + (pb - pa) * t for pa, pb in zip(a, b)))


def interpolate_gaps(track: Track, n_dti: int) -> Track:
    """Fill each gap of at most ``n_dti`` frames with linearly interpolated boxes.

    Gaps are judged one at a time, so a track can have some gaps filled and
    others left open. Filled entries carry score 0 and ``synthetic=True``.
    Returns a new track; the input is not modified.
    """
    history = sorted(track.history, key=lambda o: o.frame)
    out: list[Observation] = []
    for prev, nxt in zip(history, history[1:]):
        out.append(prev)
        gap = nxt.frame - prev.frame
        if 1 < gap <= n_dti:
            for f in range(prev.frame + 1, nxt.frame):
                t = (f - prev.frame) / gap
                out.append(Observation(f, _lerp_box(prev.box, nxt.box, t), 0.0, True))
    if history:
        out.append(history[-1])
    return Track(track.id, out, track.status)


def postprocess(tracks: Sequence[Track], config: TrackerConfig, profile: SceneProfile | None,
                frame_rate: float, mode: str = "advanced") -> list[Track]:
    """Remove short tracks, then interpolate gaps in the survivors."""
    params = compute_params(config, profile, frame_rate, mode)
    kept = remove_short_tracks(tracks, params.n_min)
    return [interpolate_gaps(t, params.n_dti) for t in kept]
