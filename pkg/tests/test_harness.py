import math

import pytest

from scenetrack.adaptation import SceneMetadata, default_config
from scenetrack.bench.harness import (
    COST_GRID, TABLE_MODES, ablate, format_csv, format_table, preload, run_mode, sequence_profile, throughput,
)
from scenetrack.bench.synth import Occlusion, SynthSpec, generate_sequence
from scenetrack.mot_io import SequenceBundle


@pytest.fixture(scope="module")
def gapped():
    # 12-frame occlusions: short enough for online re-identification and for
    # the 30-frame interpolation window, so offline modes can fill them.
    spec = SynthSpec(n_objects=6, n_frames=150, speed=(0.0, 0.4), jitter=0.5,
                     occlusions=(Occlusion(40, 12, (1, 2, 3)), Occlusion(90, 12, (4, 5, 6))))
    return generate_sequence(spec, seed=0, name="GAPPED")


def test_table_modes_named():
    assert TABLE_MODES == ("default", "same_timeout", "fixed_hyperparameter", "simple_offline", "advanced_offline")
    assert len(COST_GRID) == 5


def test_one_mode_one_row(gapped):
    rows = ablate(gapped, ["default"])
    assert len(rows) == 1 and rows[0].mode == "default"


def test_five_table_modes(gapped):
    rows = ablate(gapped)
    assert [r.mode for r in rows] == list(TABLE_MODES)
    table = format_table(rows)
    assert len(table.strip().splitlines()) == 6
    csv_text = format_csv(rows)
    assert csv_text.splitlines()[0] == "mode,MOTA,IDF1,IDSW,FP,FN,GT"


def test_simple_offline_fills_gaps(gapped):
    default, simple = ablate(gapped, ["default", "simple_offline"])
    assert simple.report.false_negatives < default.report.false_negatives
    assert default.report.id_switches == 0


def test_cost_grid_runs(gapped):
    rows = ablate(gapped, COST_GRID)
    assert [r.mode for r in rows] == list(COST_GRID)
    assert all(r.report.mota > 0.5 for r in rows)


def test_mode_configs():
    with pytest.raises(ValueError):
        run_mode(generate_sequence(SynthSpec(n_objects=1, n_frames=2)), "nonsense")
    with pytest.raises(ValueError):
        run_mode(generate_sequence(SynthSpec(n_objects=1, n_frames=2)), "cost:ciou+iou")


def test_ablate_needs_ground_truth():
    b = SequenceBundle("x", SceneMetadata(30, 100, 100, 1), {})
    with pytest.raises(ValueError):
        ablate(b)


def test_sequence_profile_detects_pan():
    still = generate_sequence(SynthSpec(n_objects=5, n_frames=60), seed=0)
    pan = generate_sequence(SynthSpec(n_objects=5, n_frames=60, camera_pan=(10, 0)), seed=0)
    assert sequence_profile(still, default_config()).fixed_camera
    assert not sequence_profile(pan, default_config()).fixed_camera


def test_throughput_empty_and_determinism():
    empty = SequenceBundle("e", SceneMetadata(30, 100, 100, 0), {})
    assert throughput(empty) == math.inf
    b = generate_sequence(SynthSpec(n_objects=5, n_frames=50, jitter=1.0), seed=0)
    assert len(preload(b)) == 50
    assert throughput(b, repetitions=2) > 0
    a1 = [(t.id, t.history) for t in run_mode(b, "default")]
    a2 = [(t.id, t.history) for t in run_mode(b, "default")]
    assert a1 == a2
