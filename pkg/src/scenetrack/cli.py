"""Command-line entry point: ``scenetrack <subcommand> ...``.

Exit codes: 0 on success, 1 on runtime failure (I/O, parse errors), 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import adaptation, mot_io
from .adaptation import TrackerConfig
from .bench import harness, metrics, synth
from .postprocess import compute_params, postprocess
from .scene import detection_height_samples, sample_frame_indices, scene_profile
from .tracker import Tracker

REFERENCE_HZ = 2241.8


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--profile", choices=sorted(adaptation.PROFILES), default="mot17",
                   help="built-in hyperparameter set")
    p.add_argument("--config", metavar="PATH", help="flat 'KEY = value' file overriding the profile")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one hyperparameter (repeatable; wins over --config)")
    p.add_argument("--print-config", action="store_true", help="print the effective configuration")


def _config(args) -> TrackerConfig:
    cfg = adaptation.default_config(args.profile)
    if args.config:
        cfg = adaptation.load_config(args.config, cfg)
    items = []
    for item in args.overrides:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        items.append((key, value))
    if items:
        cfg = adaptation.apply_overrides(cfg, items)
    if args.print_config:
        sys.stdout.write(adaptation.format_config(cfg))
    return cfg


def _track_one(det_path, seqinfo_path, out_path, cfg: TrackerConfig) -> int:
    meta = mot_io.read_seqinfo(seqinfo_path)
    dets = mot_io.read_detections(det_path)
    tracks = Tracker(cfg, meta).run(dets, meta.length)
    mot_io.write_results(out_path, tracks)
    return len(tracks)


def cmd_track(args) -> int:
    cfg = _config(args)
    if args.seqs:
        os.makedirs(args.out_dir, exist_ok=True)

        def job(seq):
            name = os.path.basename(os.path.normpath(seq))
            out = os.path.join(args.out_dir, f"{name}.txt")
            n = _track_one(os.path.join(seq, "det", "det.txt"), os.path.join(seq, "seqinfo.ini"), out, cfg)
            return name, n, out

        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            for name, n, out in pool.map(job, args.seqs):
                print(f"{name}: {n} tracks -> {out}")
        return 0
    n = _track_one(args.det, args.seqinfo, args.out, cfg)
    print(f"{n} tracks -> {args.out}")
    return 0


def cmd_postprocess(args) -> int:
    cfg = _config(args)
    meta = mot_io.read_seqinfo(args.seqinfo)
    tracks = mot_io.read_results(args.res)
    profile = None
    if args.mode == "advanced":
        kp = mot_io.read_keypoints(args.keypoints) if args.keypoints else None
        if args.det:
            dets = mot_io.read_detections(args.det)
            heights = detection_height_samples(dets, meta.length or max(dets, default=0), cfg.count_threshold)
        else:
            by_frame = metrics.frames_from_tracks(tracks)
            n = meta.length or max(by_frame, default=0)
            heights = [[b.height() for _, b in by_frame.get(i + 1, ()) if b.height() > 0]
                       for i in sample_frame_indices(n)]
        profile = scene_profile(kp, heights, depth_threshold=cfg.depth_threshold,
                                stationary_px=cfg.stationary_px)
        print(f"camera: {'fixed' if profile.fixed_camera else 'moving'}, "
              f"scene: {'deep' if profile.deep_scene else 'shallow'}")
    params = compute_params(cfg, profile, meta.frame_rate, args.mode)
    out = postprocess(tracks, cfg, profile, meta.frame_rate, args.mode)
    mot_io.write_results(args.out, out)
    print(f"n_min={params.n_min} n_dti={params.n_dti}: kept {len(out)} of {len(tracks)} tracks -> {args.out}")
    return 0


def cmd_scene(args) -> int:
    cfg = _config(args)
    meta = mot_io.read_seqinfo(args.seqinfo)
    dets = mot_io.read_detections(args.det)
    heights = detection_height_samples(dets, meta.length or max(dets, default=0), cfg.count_threshold)
    kp = mot_io.read_keypoints(args.keypoints) if args.keypoints else None
    profile = scene_profile(kp, heights, depth_threshold=cfg.depth_threshold, stationary_px=cfg.stationary_px)
    for k, s in enumerate(profile.depth_scores):
        print(f"sample {k}: depth score {s:.4f}")
    if profile.depth_scores:
        mean = sum(profile.depth_scores) / len(profile.depth_scores)
        print(f"mean depth score: {mean:.4f} (threshold {cfg.depth_threshold})")
    else:
        print("mean depth score: n/a (no sample with two or more detections)")
    print(f"scene: {'deep' if profile.deep_scene else 'shallow'}")
    if not profile.stationary_votes:
        print("camera: moving (no keypoint data)")
    else:
        votes = "".join("S" if v else "M" for v in profile.stationary_votes)
        print(f"camera: {'fixed' if profile.fixed_camera else 'moving'} (votes {votes})")
    return 0


def cmd_eval(args) -> int:
    gt = mot_io.read_ground_truth(args.gt)
    res = metrics.frames_from_tracks(mot_io.read_results(args.res))
    report = metrics.evaluate(gt, res, args.iou)
    rows = [harness.AblationRow(os.path.basename(args.res), report)]
    sys.stdout.write(harness.format_table(rows))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(harness.format_csv(rows))
    return 0


def _synth_spec(args) -> synth.SynthSpec:
    occlusions = []
    for text in args.occlusion:
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"--occlusion expects START:DURATION:ID[,ID...][:DIP], got {text!r}")
        ids = tuple(int(i) for i in parts[2].split(","))
        occlusions.append(synth.Occlusion(int(parts[0]), int(parts[1]), ids,
                                          float(parts[3]) if len(parts) == 4 else 0.0))
    pan = tuple(float(v) for v in args.pan.split(","))
    speed = tuple(float(v) for v in args.speed.split(","))
    return synth.SynthSpec(
        n_objects=args.objects, n_frames=args.frames, width=args.width, height=args.height,
        frame_rate=args.fps, speed=speed, jitter=args.jitter, occlusions=occlusions,
        fp_rate=args.fp_rate, camera_pan=pan,
    )


def _add_synth_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("synthetic sequence")
    g.add_argument("--objects", type=int, default=20)
    g.add_argument("--frames", type=int, default=300)
    g.add_argument("--fps", type=float, default=30.0)
    g.add_argument("--width", type=float, default=1920.0)
    g.add_argument("--height", type=float, default=1080.0)
    g.add_argument("--speed", default="0,1", metavar="LO,HI", help="speed range in px/frame")
    g.add_argument("--jitter", type=float, default=1.0, help="detection corner noise sigma in px")
    g.add_argument("--occlusion", action="append", default=[], metavar="START:DUR:IDS[:DIP]")
    g.add_argument("--fp-rate", type=float, default=0.0, help="false positives per frame")
    g.add_argument("--pan", default="0,0", metavar="VX,VY", help="camera pan in px/frame")
    g.add_argument("--seed", type=int, default=0)


def cmd_synth(args) -> int:
    bundle = synth.generate_sequence(_synth_spec(args), args.seed, name=os.path.basename(os.path.normpath(args.out)))
    mot_io.save_sequence(args.out, bundle)
    print(f"wrote {bundle.n_frames} frames, {args.objects} objects -> {args.out}")
    return 0


def _bundle(args):
    if args.seq:
        return mot_io.load_sequence(args.seq)
    return synth.generate_sequence(_synth_spec(args), args.seed)


def cmd_ablate(args) -> int:
    cfg = _config(args)
    bundle = _bundle(args)
    modes = args.modes or list(harness.TABLE_MODES) + list(harness.COST_GRID)
    rows = harness.ablate(bundle, modes, cfg, args.iou)
    sys.stdout.write(harness.format_table(rows))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(harness.format_csv(rows))
    return 0


def cmd_bench(args) -> int:
    cfg = _config(args)
    bundle = _bundle(args)
    fps = harness.throughput(bundle, args.reps, cfg)
    n_det = sum(len(v) for v in bundle.detections.values())
    density = n_det / bundle.n_frames if bundle.n_frames else 0.0
    shown = "n/a" if fps == float("inf") else f"{fps:.1f}"
    print(f"frames: {bundle.n_frames}, detections/frame: {density:.1f}")
    print(f"tracking speed: {shown} Hz (median of {args.reps}); reference {REFERENCE_HZ} Hz on a 2.2 GHz Xeon")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenetrack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("track", help="track detections into MOT-format results")
    p.add_argument("--det", metavar="PATH")
    p.add_argument("--seqinfo", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--seqs", nargs="+", metavar="DIR", help="MOT sequence directories (batch mode)")
    p.add_argument("--out-dir", metavar="DIR", help="output directory for batch mode")
    p.add_argument("--workers", type=int, default=4)
    _add_config_args(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("postprocess", help="remove short tracks and fill gaps")
    p.add_argument("--res", required=True, metavar="PATH")
    p.add_argument("--seqinfo", required=True, metavar="PATH")
    p.add_argument("--keypoints", metavar="PATH")
    p.add_argument("--det", metavar="PATH", help="detections for the depth estimate (default: results)")
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--mode", choices=("simple", "advanced"), default="advanced")
    _add_config_args(p)
    p.set_defaults(func=cmd_postprocess)

    p = sub.add_parser("scene", help="report depth scores and camera-motion verdict")
    p.add_argument("--det", required=True, metavar="PATH")
    p.add_argument("--keypoints", metavar="PATH")
    p.add_argument("--seqinfo", required=True, metavar="PATH")
    _add_config_args(p)
    p.set_defaults(func=cmd_scene)

    p = sub.add_parser("eval", help="MOTA / IDF1 of a results file")
    p.add_argument("--gt", required=True, metavar="PATH")
    p.add_argument("--res", required=True, metavar="PATH")
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ablate", help="run ablation modes on a sequence")
    p.add_argument("--seq", metavar="DIR", help="MOT sequence directory with gt (default: synthetic)")
    p.add_argument("--modes", nargs="+", metavar="MODE")
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--csv", metavar="PATH")
    _add_synth_args(p)
    _add_config_args(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("synth", help="write a synthetic MOT sequence directory")
    p.add_argument("--out", required=True, metavar="DIR")
    _add_synth_args(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="measure tracking throughput")
    p.add_argument("--seq", metavar="DIR")
    p.add_argument("--reps", type=int, default=5)
    _add_synth_args(p)
    p.set_defaults(objects=32, frames=600, fp_rate=1.0, speed="0.5,2")
    _add_config_args(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "track":
        if args.seqs:
            if not args.out_dir:
                parser.error("track --seqs requires --out-dir")
        else:
            missing = [f"--{n}" for n in ("det", "seqinfo", "out") if getattr(args, n) is None]
            if missing:
                parser.error(f"track requires {', '.join(missing)} (or --seqs with --out-dir)")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"scenetrack {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
