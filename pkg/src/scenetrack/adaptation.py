"""Tracker hyperparameters and their adaptation to scene metadata.

Per video, the lost-track timeouts scale with frame rate and the central
region margins scale with frame size. Per frame, the detection thresholds
and the first-stage gate move linearly with ``log10`` of the object count.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

# Largest value 1 - BBSI/3 can take (BBSI > -1).
FIRST_COST_SPAN = 4.0 / 3.0
_OPEN = 1e-6


@dataclass(frozen=True)
class TrackerConfig:
    """All tracker, adaptation and post-processing coefficients.

    Timeouts are in seconds and margins are fractions of the frame size;
    :func:`derive_video_params` turns them into frames and pixels.
    """

    lth: float = 0.30
    mth2: float = 0.10
    hth0: float = 0.82
    hth_m: float = 0.10
    nth0: float = 0.70
    nth_m: float = 0.10
    mth0: float = 0.50
    mth_m: float = 0.05
    margin_h: float = 0.10
    margin_v: float = 0.10
    timeout_central: float = 1.00
    timeout_marginal: float = 0.70
    # Score above which a detection counts toward crowd size; None means LTH.
    cth: float | None = None
    cm: float = 1.0
    cd: tuple[float, float, float, float] = (0.7, 1.0, 0.1, 0.7)
    depth_threshold: float = 0.5
    stationary_px: float = 5.0
    # Ablation switches. The defaults are the full method.
    adaptive: bool = True
    first_cost: str = "first"
    second_cost: str = "second"

    def __post_init__(self):
        object.__setattr__(self, "cd", tuple(float(c) for c in self.cd))
        if len(self.cd) != 4:
            raise ValueError("cd needs exactly four coefficients")
        for name in ("hth0", "nth0"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not 0.0 < self.mth0 < FIRST_COST_SPAN:
            raise ValueError(f"mth0 must lie in (0, 4/3), got {self.mth0}")
        if not 0.0 <= self.lth < 1.0:
            raise ValueError(f"lth must lie in [0, 1), got {self.lth}")
        nonneg = ("mth2", "margin_h", "margin_v", "timeout_central", "timeout_marginal", "cm",
                  "depth_threshold", "stationary_px")
        for name in nonneg:
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if min(self.cd) < 0:
            raise ValueError("cd coefficients must be nonnegative")
        if self.cth is not None and self.cth < 0:
            raise ValueError("cth must be nonnegative")

    @property
    def count_threshold(self) -> float:
        return self.lth if self.cth is None else self.cth

    def replace(self, **changes) -> "TrackerConfig":
        return dataclasses.replace(self, **changes)


class SceneMetadata(NamedTuple):
    frame_rate: float
    width: float
    height: float
    length: int | None = None

    def validate(self) -> "SceneMetadata":
        if not (self.frame_rate > 0 and self.width > 0 and self.height > 0):
            raise ValueError(f"frame rate and dimensions must be positive: {self}")
        return self


class VideoParams(NamedTuple):
    ctime: int
    mtime: int
    hmargin: float
    vmargin: float


class Thresholds(NamedTuple):
    hth: float
    nth: float
    mth1: float


PROFILES: dict[str, TrackerConfig] = {
    "mot17": TrackerConfig(),
    "mot20": TrackerConfig(
        lth=0.15, mth2=0.30, hth0=0.70, hth_m=0.07, nth0=0.55, nth_m=0.02,
        mth0=0.45, mth_m=0.05, margin_h=0.10, margin_v=0.15,
        timeout_central=1.00, timeout_marginal=0.50,
        cm=1.5, cd=(0.5, 0.5, 0.5, 0.5),
    ),
}


def default_config(profile: str = "mot17") -> TrackerConfig:
    try:
        return PROFILES[profile.lower()]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; expected one of {sorted(PROFILES)}") from None


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def derive_video_params(config: TrackerConfig, meta: SceneMetadata) -> VideoParams:
    meta.validate()
    return VideoParams(
        ctime=round_half_up(config.timeout_central * meta.frame_rate),
        mtime=round_half_up(config.timeout_marginal * meta.frame_rate),
        hmargin=config.margin_h * meta.width,
        vmargin=config.margin_v * meta.height,
    )


def crowd_count(scores, threshold: float) -> float:
    """``log10`` of the number of scores above ``threshold``, floored at 0."""
    n = int(np.count_nonzero(np.asarray(scores, dtype=float) > threshold))
    return math.log10(max(n, 1))


def thresholds_for_count(config: TrackerConfig, count: float) -> Thresholds:
    hth = config.hth0 - config.hth_m * count
    nth = config.nth0 + config.nth_m * count
    mth1 = config.mth0 - config.mth_m * count
    return Thresholds(
        hth=min(max(hth, config.lth), 1.0 - _OPEN),
        nth=min(max(nth, _OPEN), 1.0 - _OPEN),
        mth1=min(max(mth1, _OPEN), FIRST_COST_SPAN - _OPEN),
    )


def adaptive_thresholds(config: TrackerConfig, detections) -> Thresholds:
    """Per-frame (HTH, NTH, MTH1) from the detections of that frame.

    ``detections`` may be a sequence of objects with a ``score`` attribute or
    an array of scores. With ``config.adaptive`` off the intercepts are used.
    """
    if not config.adaptive:
        return thresholds_for_count(config, 0.0)
    if isinstance(detections, np.ndarray):
        scores = detections
    else:
        scores = [d.score for d in detections]
    return thresholds_for_count(config, crowd_count(scores, config.count_threshold))


# Flat ``key = value`` files use the symbol names below.
SYMBOLS: dict[str, str] = {
    "LTH": "lth",
    "MTH2": "mth2",
    "HTH0": "hth0",
    "HTHm": "hth_m",
    "NTH0": "nth0",
    "NTHm": "nth_m",
    "MTH0": "mth0",
    "MTHm": "mth_m",
    "HMargin": "margin_h",
    "VMargin": "margin_v",
    "CTime": "timeout_central",
    "MTime": "timeout_marginal",
    "CTH": "cth",
    "Cm": "cm",
    "DepthThreshold": "depth_threshold",
    "StationaryPx": "stationary_px",
}
_CD_KEYS = ("Cd1", "Cd2", "Cd3", "Cd4")


def apply_overrides(config: TrackerConfig, items: Mapping[str, str] | Iterable[tuple[str, str]]) -> TrackerConfig:
    """Return ``config`` with symbol-named overrides applied.

    ``Cm1``..``Cm4`` are accepted and must agree, since a single minimum
    track-length coefficient is used for every scene type.
    """
    pairs = items.items() if isinstance(items, Mapping) else items
    changes: dict = {}
    cd = list(config.cd)
    cms = []
    for key, raw in pairs:
        key = key.strip()
        value = raw.strip() if isinstance(raw, str) else raw
        if key in SYMBOLS:
            name = SYMBOLS[key]
            changes[name] = None if name == "cth" and str(value).lower() in ("", "none") else float(value)
        elif key in _CD_KEYS:
            cd[_CD_KEYS.index(key)] = float(value)
        elif key in ("Cm1", "Cm2", "Cm3", "Cm4"):
            cms.append(float(value))
        else:
            raise KeyError(f"unknown hyperparameter {key!r}")
    if cms:
        if max(cms) - min(cms) > 1e-12:
            raise ValueError("Cm1..Cm4 must be equal; a single coefficient is used")
        changes["cm"] = cms[0]
    changes["cd"] = tuple(cd)
    return config.replace(**changes)


def parse_config_text(text: str) -> list[tuple[str, str]]:
    items = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        items.append((key.strip(), value.strip()))
    return items


def load_config(path, base: TrackerConfig | None = None) -> TrackerConfig:
    with open(path, encoding="utf-8") as fh:
        items = parse_config_text(fh.read())
    return apply_overrides(base or default_config(), items)


def format_config(config: TrackerConfig) -> str:
    lines = [f"{key} = {getattr(config, name)}" for key, name in SYMBOLS.items()]
    lines += [f"{key} = {value}" for key, value in zip(_CD_KEYS, config.cd)]
    return "\n".join(lines) + "\n"
