import numpy as np
import pytest

from scenetrack.bench.synth import Occlusion, SynthSpec, density_spec, generate, generate_sequence
from scenetrack.scene import N_SAMPLES, frame_pair_is_stationary


def test_deterministic_per_seed(tmp_path):
    from scenetrack.mot_io import save_sequence
    spec = SynthSpec(n_objects=5, n_frames=30, jitter=1.0, fp_rate=0.5, speed=(0, 2))
    for k, seed in enumerate((7, 7)):
        save_sequence(tmp_path / f"s{k}", generate_sequence(spec, seed))
    for rel in ("det/det.txt", "gt/gt.txt", "keypoints.txt", "seqinfo.ini"):
        assert (tmp_path / "s0" / rel).read_bytes() == (tmp_path / "s1" / rel).read_bytes()
    assert generate(spec, 1)[1] != generate(spec, 2)[1]


def test_oracle_detections_equal_ground_truth():
    gt, dets, kps = generate(SynthSpec(n_objects=6, n_frames=40, speed=(0, 3)), seed=0)
    for f in gt:
        assert sorted(d.box for d in dets[f]) == sorted(b for _, b in gt[f])
        assert all(d.score == 0.95 for d in dets[f])
    assert len(kps) == N_SAMPLES


def test_occlusion_drops_detections():
    spec = SynthSpec(n_objects=4, n_frames=80, occlusions=(Occlusion(50, 11, (3,)),))
    gt, dets, _ = generate(spec, seed=0)
    boxes3 = {f: b for f in gt for i, b in gt[f] if i == 3}
    for f in range(1, 81):
        present = boxes3[f] in [d.box for d in dets.get(f, [])]
        assert present == (not 50 <= f <= 60)


def test_occlusion_dip_lowers_score():
    spec = SynthSpec(n_objects=2, n_frames=20, occlusions=(Occlusion(5, 3, (1,), dip=0.5),))
    gt, dets, _ = generate(spec, seed=0)
    box1 = {f: b for f in gt for i, b in gt[f] if i == 1}
    for f in range(1, 21):
        score = next(d.score for d in dets[f] if d.box == box1[f])
        assert score == (0.5 if 5 <= f <= 7 else 0.95)


def test_objects_stay_in_frame_when_clamped():
    spec = SynthSpec(n_objects=10, n_frames=200, speed=(10, 20), width=640, height=480, layout="random")
    gt, _, _ = generate(spec, seed=3)
    for items in gt.values():
        assert len(items) == 10
        for _, b in items:
            assert b.x1 >= -1e-9 and b.y1 >= -1e-9 and b.x2 <= 640 + 1e-9 and b.y2 <= 480 + 1e-9


def test_retired_objects_leave():
    spec = SynthSpec(n_objects=10, n_frames=200, speed=(10, 20), width=640, height=480, on_exit="retire")
    gt, _, _ = generate(spec, seed=3)
    counts = [len(gt[f]) for f in sorted(gt)]
    assert counts[0] == 10 and counts[-1] < 10
    assert counts == sorted(counts, reverse=True)


def test_camera_pan_moves_keypoints_and_boxes():
    spec = SynthSpec(n_objects=3, n_frames=50, camera_pan=(8.0, 0.0), keypoint_noise=0.1)
    gt, _, kps = generate(spec, seed=0)
    assert not any(frame_pair_is_stationary(s) for s in kps)
    still = generate(SynthSpec(n_objects=3, n_frames=50), seed=0)[2]
    assert all(frame_pair_is_stationary(s) for s in still)
    dx = [b2.x1 - b1.x1 for (_, b1), (_, b2) in zip(gt[1], gt[2])]
    assert np.allclose(dx, np.array(dx)) and all(d != 0 for d in dx)


def test_explicit_initial_state():
    spec = SynthSpec(n_objects=1, n_frames=3, initial_boxes=[(0, 0, 10, 20)], velocities=[(5, 0)], width=100)
    gt, _, _ = generate(spec)
    assert [gt[f][0][1] for f in (1, 2, 3)] == [(0, 0, 10, 20), (5, 0, 15, 20), (10, 0, 20, 20)]


def test_short_videos_pad_keypoint_samples():
    _, _, kps = generate(SynthSpec(n_objects=1, n_frames=2), seed=0)
    assert len(kps) == N_SAMPLES and sum(1 for s in kps if s) == 1


@pytest.mark.parametrize("kwargs", [{"n_frames": -1}, {"jitter": -1.0}, {"on_exit": "wrap"}, {"layout": "ring"},
                                    {"occlusions": (Occlusion(1, -1, (1,)),)},
                                    {"occlusions": (Occlusion(1, 1, (1,), dip=1.5),)}])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SynthSpec(**kwargs)


def test_density_spec():
    spec = density_spec(32, 100)
    gt, dets, _ = generate(spec, seed=0)
    assert all(len(v) == 32 for v in gt.values())
    assert np.mean([len(dets.get(f, [])) for f in gt]) == pytest.approx(33, abs=1.0)
