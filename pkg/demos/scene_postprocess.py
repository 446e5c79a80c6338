"""Offline refinement driven by a scene profile.

Shows how camera motion and scene depth are estimated from five sampled
frames, how they pick the interpolation timeout, and what the two
post-processing modes do to a gapped result.
Run with ``python demos/scene_postprocess.py``.
"""
from scenetrack import default_config
from scenetrack.bench.metrics import evaluate
from scenetrack.bench.synth import Occlusion, SynthSpec, generate_sequence
from scenetrack.postprocess import compute_params, postprocess
from scenetrack.scene import depth_score, detection_height_samples, sample_frame_indices, scene_profile
from scenetrack.tracker import Tracker

cfg = default_config("mot17")

# Depth: |mean - midrange| / midrange of the box heights in a frame.
print("uniform heights   ", depth_score([120, 118, 121, 119]))
print("one near, many far", round(depth_score([400] + [40] * 9), 4))

# The same crowd filmed by a fixed camera and by a panning one.
occlusions = [Occlusion(50, 20, (1, 2, 3)), Occlusion(120, 12, (4, 5))]
for label, pan in (("fixed camera", (0.0, 0.0)), ("panning camera", (12.0, 0.0))):
    spec = SynthSpec(n_objects=10, n_frames=200, speed=(0.0, 1.0), jitter=1.0, occlusions=occlusions,
                     camera_pan=pan)
    bundle = generate_sequence(spec, seed=3)
    print(f"\n{label}: keypoints sampled at frames {sample_frame_indices(bundle.n_frames)}")

    heights = detection_height_samples(bundle.detections, bundle.n_frames, cfg.count_threshold)
    profile = scene_profile(bundle.keypoint_samples, heights)
    print("  stationary votes:", profile.stationary_votes, "-> fixed" if profile.fixed_camera else "-> moving")
    print("  depth scores:", [round(s, 3) for s in profile.depth_scores],
          "-> deep" if profile.deep_scene else "-> shallow")

    simple = compute_params(cfg, profile, bundle.meta.frame_rate, mode="simple")
    advanced = compute_params(cfg, profile, bundle.meta.frame_rate, mode="advanced")
    print(f"  simple   n_min={simple.n_min} n_dti={simple.n_dti}")
    print(f"  advanced n_min={advanced.n_min} n_dti={advanced.n_dti}")

    online = Tracker(cfg, bundle.meta).run(bundle.detections, bundle.n_frames)
    for mode, tracks in (("online", online),
                         ("simple", postprocess(online, cfg, profile, bundle.meta.frame_rate, mode="simple")),
                         ("advanced", postprocess(online, cfg, profile, bundle.meta.frame_rate))):
        r = evaluate(bundle.ground_truth, tracks)
        print(f"  {mode:8s} MOTA {r.mota:.4f} IDF1 {r.idf1:.4f} FN {r.false_negatives}")
