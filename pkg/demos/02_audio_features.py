"""Audio channel walkthrough: volume, pitch, pauses, and speech rate on
constructed signals where the right answers are known analytically."""

import numpy as np

from retrolens.audiodsp import (
    boxstats_per_minute,
    compute_audio_features,
    compute_pitch,
    compute_volume,
    detect_pauses,
)

SR = 16000
t = np.arange(SR * 3) / SR

# a full-scale sine has RMS 1/sqrt(2) -> -3.01 dBFS
sine = np.sin(2 * np.pi * 440 * t)
print("full-scale 440 Hz sine")
print("  volume (dBFS):", np.round(compute_volume(sine, SR), 2))
print("  pitch (Hz):   ", np.round(compute_pitch(sine, SR), 1))

# pauses are sub-floor runs of at least 300 ms, reported with ms bounds
tone = 0.7 * np.sin(2 * np.pi * 220 * t[:SR])
speech_like = np.concatenate([tone, np.zeros(SR // 2), tone])
print("\ntone / 500 ms silence / tone")
for p in detect_pauses(speech_like, SR):
    print(f"  pause {p.start_ms}..{p.end_ms} ms ({p.duration_ms} ms)")

# syllable nuclei: amplitude bursts over a voiced carrier
t5 = np.arange(SR * 5) / SR
syllables = (np.sin(np.pi * 4 * t5) ** 2) * np.sin(2 * np.pi * 200 * t5) * 0.5
feats = compute_audio_features(syllables, SR)
print("\n4 amplitude bursts per second -> speech rate", feats.speech_rate)

# per-minute five-number summaries drive the connected box charts
rng = np.random.default_rng(0)
wobble = 200 + 30 * np.sin(np.arange(120) / 8) + rng.normal(0, 5, 120)
for i, stats in enumerate(boxstats_per_minute(wobble)):
    print(f"minute {i}: min {stats['min']:.0f}  q1 {stats['q1']:.0f}  "
          f"median {stats['median']:.0f}  q3 {stats['q3']:.0f}  max {stats['max']:.0f}")
