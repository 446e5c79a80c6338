"""Tracking-loop throughput at benchmark crowd density.

Detections are converted to arrays up front so only the tracker is timed.
The reference figure of 2241.8 Hz was measured on a 2.2 GHz Xeon; numbers
here depend on the machine.
Run with ``python demos/throughput.py``.
"""
from scenetrack.bench.harness import throughput
from scenetrack.bench.synth import density_spec, generate_sequence

REFERENCE_HZ = 2241.8

for objects in (8, 16, 32, 64):
    bundle = generate_sequence(density_spec(objects, 600), seed=1)
    hz = throughput(bundle, repetitions=5)
    print(f"{objects:3d} objects/frame: {hz:7.0f} frames/s ({hz / REFERENCE_HZ:.2f}x reference)")
