import numpy as np
import pytest

from scenetrack.geometry import BoundingBox
from scenetrack.scene import (
    KeypointMatch, SceneProfile, classify_camera, classify_depth, depth_score, detection_height_samples,
    displacement, frame_pair_is_stationary, majority, sample_frame_indices, scene_profile,
)
from scenetrack.tracker import Detection

import oracles


def moved(*dists):
    return [KeypointMatch((10.0, 10.0), (10.0 + d, 10.0)) for d in dists]


def test_displacement_examples():
    assert displacement(KeypointMatch((0, 0), (0, 0))) == 0.0
    assert displacement(KeypointMatch((0, 0), (3, 4))) == 5.0
    rng = np.random.default_rng(0)
    for _ in range(500):
        p, c = rng.uniform(-500, 500, 2), rng.uniform(-500, 500, 2)
        assert displacement(KeypointMatch(tuple(p), tuple(c))) == pytest.approx(oracles.displacement(p, c), abs=1e-9)


def test_stationary_rule():
    assert frame_pair_is_stationary(moved(4.9, 30.0))
    assert not frame_pair_is_stationary(moved(5.0, 6.0))
    assert not frame_pair_is_stationary([])
    assert frame_pair_is_stationary(moved(5.0, 6.0), threshold=5.5)
    arr = np.array([[0, 0, 3, 4], [0, 0, 30, 0]], dtype=float)
    assert not frame_pair_is_stationary(arr)
    assert frame_pair_is_stationary(arr, threshold=5.01)
    assert not frame_pair_is_stationary(np.zeros((0, 4)))


def test_majority_vote_examples():
    s, m = moved(1.0), moved(50.0)
    assert classify_camera([s, s, s, m, m])
    assert not classify_camera([m] * 5)
    assert classify_camera([s, s, m])
    assert not classify_camera([s, s, m, m])
    with pytest.raises(ValueError):
        classify_camera([])
    with pytest.raises(ValueError):
        majority([])


def test_camera_vote_monotone():
    s, m = moved(1.0), moved(50.0)
    rng = np.random.default_rng(1)
    for _ in range(200):
        votes = list(rng.integers(0, 2, rng.integers(1, 6)).astype(bool))
        samples = [s if v else m for v in votes]
        if classify_camera(samples):
            for k, v in enumerate(votes):
                if not v:
                    flipped = samples[:k] + [s] + samples[k + 1:]
                    assert classify_camera(flipped)
            assert classify_camera(samples + [s])


def test_depth_score_examples():
    assert depth_score([100, 100, 100]) == 0.0
    assert depth_score([10, 100]) == 0.0
    assert depth_score([10, 100, 100, 100]) == pytest.approx(22.5 / 55, abs=1e-9)
    assert depth_score([10, 100, 100, 100]) == pytest.approx(0.409091, abs=1e-6)


@pytest.mark.parametrize("bad", [[], [5.0], [1.0, 0.0], [3.0, -1.0]])
def test_depth_score_rejects(bad):
    with pytest.raises(ValueError):
        depth_score(bad)


def test_depth_score_properties():
    rng = np.random.default_rng(2)
    for _ in range(10_000):
        h = rng.uniform(0.1, 500, rng.integers(2, 30))
        s = depth_score(h)
        assert 0.0 <= s < 1.0
        assert s == pytest.approx(oracles.depth_score(list(h)), abs=1e-12)
        k = float(rng.uniform(0.01, 100))
        assert abs(depth_score(h * k) - s) < 1e-12
    h = rng.uniform(1, 100, 12)
    assert depth_score(rng.permutation(h)) == pytest.approx(depth_score(h), abs=1e-12)


def test_depth_score_supremum():
    # One tiny box and many tall ones: (mean - mid)/mid -> 1 from below.
    scores = [depth_score([1e-6] + [100.0] * n) for n in (10, 100, 1000, 10_000)]
    assert all(s < 1.0 for s in scores)
    assert scores == sorted(scores)
    assert scores[-1] > 0.999


def test_depth_score_continuous_in_outlier():
    base = [50.0, 60.0, 70.0, 55.0]
    prev = None
    for extra in np.linspace(70.0, 80.0, 101):
        s = depth_score(base + [extra])
        if prev is not None:
            assert abs(s - prev) < 0.01
        prev = s


def test_classify_depth():
    deep, scores = classify_depth([[100, 100]] * 5, 0.5)
    assert not deep and scores == [0.0] * 5
    # Skips samples with fewer than two heights.
    deep, scores = classify_depth([[1e-3] + [100] * 40, [5], [], [1e-3] + [100] * 40], 0.5)
    assert deep and len(scores) == 2
    assert classify_depth([[1], []], 0.5) == (False, [])


def test_classify_depth_fig9_exemplars():
    # A mean of 0.81 is deep and a mean of 0.10 shallow at the 0.5 threshold.
    def with_score(target):
        # Heights [a] + 30 * [1]; the score falls from ~0.94 to 0 as a goes
        # from 0 to 1, so bisect on a.
        lo, hi = 0.0, 1.0
        for _ in range(200):
            a = (lo + hi) / 2
            lo, hi = (a, hi) if depth_score([a] + [1.0] * 30) > target else (lo, a)
        return [a] + [1.0] * 30
    deep = with_score(0.81)
    shallow = with_score(0.10)
    assert depth_score(deep) == pytest.approx(0.81, abs=1e-6)
    assert depth_score(shallow) == pytest.approx(0.10, abs=1e-6)
    assert classify_depth([deep] * 5, 0.5)[0]
    assert not classify_depth([shallow] * 5, 0.5)[0]


def test_sample_frame_indices():
    assert sample_frame_indices(101) == [0, 20, 40, 60, 80]
    assert sample_frame_indices(600) == [0, 119, 239, 359, 479]
    assert sample_frame_indices(3) == [0, 1]
    assert sample_frame_indices(1) == [0]
    assert sample_frame_indices(0) == []


def test_scene_profile_without_keypoints_is_moving():
    p = scene_profile(None, [[100, 100]])
    assert p == SceneProfile(False, False, (0.0,), ())
    p = scene_profile([[], [], [], [], []], [[100, 100]])
    assert not p.fixed_camera and p.stationary_votes == ()


def test_scene_profile_ignores_empty_samples():
    s, m = moved(1.0), moved(50.0)
    p = scene_profile([s, s, [], m, []], [])
    assert p.fixed_camera and p.stationary_votes == (True, True, False)
    assert not p.deep_scene


def test_detection_height_samples():
    dets = {1: [Detection(BoundingBox(0, 0, 10, 50), 0.9), Detection(BoundingBox(0, 0, 10, 30), 0.2)],
            21: [Detection(BoundingBox(0, 0, 10, 70), 0.9)]}
    samples = detection_height_samples(dets, 101, min_score=0.3)
    assert samples == [[50.0], [70.0], [], [], []]
