import math

import numpy as np
import pytest

from scenetrack.adaptation import (
    PROFILES, SceneMetadata, TrackerConfig, Thresholds, adaptive_thresholds, apply_overrides, crowd_count,
    default_config, derive_video_params, format_config, load_config, parse_config_text, round_half_up,
    thresholds_for_count,
)
from scenetrack.geometry import BoundingBox
from scenetrack.tracker import Detection


def test_mot17_profile_matches_table():
    c = default_config("mot17")
    assert (c.lth, c.mth2, c.hth0, c.hth_m, c.nth0, c.nth_m, c.mth0, c.mth_m) == \
        (0.30, 0.10, 0.82, 0.10, 0.70, 0.10, 0.50, 0.05)
    assert (c.margin_h, c.margin_v, c.timeout_central, c.timeout_marginal) == (0.10, 0.10, 1.00, 0.70)
    assert c.cm == 1.0
    assert c.cd == (0.7, 1.0, 0.1, 0.7)


def test_mot20_profile_matches_table():
    c = default_config("mot20")
    assert (c.lth, c.mth2, c.hth0, c.hth_m, c.nth0, c.nth_m, c.mth0, c.mth_m) == \
        (0.15, 0.30, 0.70, 0.07, 0.55, 0.02, 0.45, 0.05)
    assert (c.margin_h, c.margin_v, c.timeout_central, c.timeout_marginal) == (0.10, 0.15, 1.00, 0.50)
    assert c.cm == 1.5
    assert c.cd == (0.5, 0.5, 0.5, 0.5)


def test_profile_lookup():
    assert default_config() == PROFILES["mot17"]
    assert default_config("MOT20") == PROFILES["mot20"]
    with pytest.raises(ValueError):
        default_config("kitti")


def test_merged_cm_overrides():
    c = apply_overrides(default_config(), {"Cm1": "1.0", "Cm2": "1.0", "Cm3": "1.0", "Cm4": "1.0"})
    assert c.cm == 1.0
    with pytest.raises(ValueError):
        apply_overrides(default_config(), {"Cm1": "1.0", "Cm2": "2.0"})


@pytest.mark.parametrize("changes", [
    {"hth0": 0.0}, {"hth0": 1.0}, {"nth0": 1.2}, {"mth0": 0.0}, {"mth0": 1.4},
    {"lth": -0.1}, {"timeout_central": -1.0}, {"margin_h": -0.1}, {"cd": (1, 2, 3)}, {"cd": (1, 1, 1, -1)},
])
def test_config_validation(changes):
    with pytest.raises(ValueError):
        TrackerConfig(**changes)


def test_mth0_accepts_as_computed_cost_scale():
    assert TrackerConfig(mth0=0.9).mth0 == 0.9


@pytest.mark.parametrize("fps,size,expected", [
    (30, (1920, 1080), (30, 21, 192, 108)),
    (10, (640, 480), (10, 7, 64, 48)),
    (14, (1920, 1080), (14, 10, 192, 108)),
    (1, (100, 100), (1, 1, 10, 10)),
])
def test_derive_video_params(fps, size, expected):
    p = derive_video_params(default_config(), SceneMetadata(fps, *size))
    assert tuple(p) == pytest.approx(expected)
    assert isinstance(p.ctime, int) and isinstance(p.mtime, int)


def test_derive_video_params_mot20():
    p = derive_video_params(default_config("mot20"), SceneMetadata(25, 1920, 1080))
    assert tuple(p) == pytest.approx((25, 13, 192, 162))


@pytest.mark.parametrize("meta", [SceneMetadata(0, 10, 10), SceneMetadata(30, 0, 10), SceneMetadata(30, 10, -1)])
def test_derive_video_params_rejects_bad_metadata(meta):
    with pytest.raises(ValueError):
        derive_video_params(default_config(), meta)


def test_round_half_up():
    assert [round_half_up(x) for x in (0.5, 1.5, 2.5, 9.8, 12.5, 37.5, 2.49)] == [1, 2, 3, 10, 13, 38, 2]


def test_derive_linear_in_frame_rate():
    c = default_config()
    for fps in range(1, 61):
        a = derive_video_params(c, SceneMetadata(fps, 100, 100))
        b = derive_video_params(c, SceneMetadata(2 * fps, 100, 100))
        assert b.ctime == 2 * fps * c.timeout_central
        assert abs(b.mtime - 2 * c.timeout_marginal * fps) <= 0.5
        assert abs(a.mtime - c.timeout_marginal * fps) <= 0.5


def _dets(n, score=0.95):
    return [Detection(BoundingBox(0, 0, 1, 1), score) for _ in range(n)]


@pytest.mark.parametrize("n,expected", [(1, (0.82, 0.70, 0.50)), (10, (0.72, 0.80, 0.45)),
                                        (0, (0.82, 0.70, 0.50)), (100, (0.62, 0.90, 0.40))])
def test_adaptive_thresholds_examples(n, expected):
    t = adaptive_thresholds(default_config(), _dets(n))
    assert isinstance(t, Thresholds)
    assert tuple(t) == pytest.approx(expected, abs=1e-12)


def test_adaptive_thresholds_accepts_scores():
    t = adaptive_thresholds(default_config(), np.full(10, 0.9))
    assert tuple(t) == pytest.approx((0.72, 0.80, 0.45))


def test_count_uses_cth_default_lth():
    cfg = default_config()
    assert cfg.count_threshold == cfg.lth
    scores = [0.95] * 10 + [0.2] * 90
    assert crowd_count(scores, cfg.count_threshold) == pytest.approx(1.0)
    # Exactly LTH does not count (strictly above).
    assert crowd_count([0.3] * 10, 0.3) == 0.0
    assert default_config().replace(cth=0.1).count_threshold == 0.1
    t = adaptive_thresholds(default_config().replace(cth=0.1), np.array(scores))
    assert t.hth == pytest.approx(0.82 - 0.1 * 2)


def test_fixed_hyperparameters_ignore_count():
    t = adaptive_thresholds(default_config().replace(adaptive=False), _dets(1000))
    assert tuple(t) == pytest.approx((0.82, 0.70, 0.50))


def test_clamping():
    cfg = default_config()
    t = thresholds_for_count(cfg, 100.0)
    assert t.hth == cfg.lth
    assert 0 < t.nth < 1
    assert 0 < t.mth1


def test_monotone_and_scaling_over_sweep():
    cfg = default_config()
    prev = None
    for n in range(1, 10_001):
        t = thresholds_for_count(cfg, math.log10(n))
        if prev is not None:
            assert t.hth <= prev.hth and t.mth1 <= prev.mth1 and t.nth >= prev.nth
        prev = t
    for n in (1, 3, 7, 10, 42):  # ranges where no clamp is active
        a = thresholds_for_count(cfg, math.log10(n))
        b = thresholds_for_count(cfg, math.log10(10 * n))
        assert a.hth - b.hth == pytest.approx(cfg.hth_m, abs=1e-12)
        assert b.nth - a.nth == pytest.approx(cfg.nth_m, abs=1e-12)
        assert a.mth1 - b.mth1 == pytest.approx(cfg.mth_m, abs=1e-12)


def test_config_text_round_trip(tmp_path):
    cfg = default_config("mot20").replace(cth=0.25)
    path = tmp_path / "cfg.txt"
    path.write_text(format_config(cfg))
    assert load_config(path, default_config("mot17")) == cfg


def test_config_file_parsing(tmp_path):
    items = parse_config_text("# comment\nHTH0 = 0.9\n\nCd3=0.2  # trailing\n")
    assert items == [("HTH0", "0.9"), ("Cd3", "0.2")]
    with pytest.raises(ValueError):
        parse_config_text("HTH0 0.9")
    with pytest.raises(KeyError):
        apply_overrides(default_config(), {"Bogus": "1"})
    path = tmp_path / "c.txt"
    path.write_text("HTH0 = 0.9\nCd3 = 0.2\nCTH = none\n")
    cfg = load_config(path)
    assert cfg.hth0 == 0.9 and cfg.cd == (0.7, 1.0, 0.2, 0.7) and cfg.cth is None
