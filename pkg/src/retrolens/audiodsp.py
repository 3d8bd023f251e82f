"""Per-second audio features from raw mono PCM: volume, pitch, pauses,
and speech rate.

Volume is dBFS of the per-second RMS (recordings are uncalibrated, so no
SPL). Pitch is a normalized-autocorrelation detector over 100 ms frames
with parabolic peak refinement. Pauses are sub-floor intensity runs over a
10 ms envelope. Speech rate counts syllable nuclei: intensity peaks at or
above the voiced-region median, separated by dips of at least 2 dB,
restricted to voiced non-pause regions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import AudioConfig
from .errors import EmptyAudio

DB_FLOOR = -80.0          # dBFS clamp for digital silence
VOICING_THRESHOLD = 0.45  # normalized autocorrelation peak
PITCH_HOP_MS = 100
ENVELOPE_HOP_MS = 10
SYLLABLE_DIP_DB = 2.0


@dataclass(frozen=True)
class Pause:
    start_ms: int
    end_ms: int

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


@dataclass(frozen=True)
class AudioFeatureSeries:
    """Per-second feature arrays; lengths equal ceil(duration seconds)."""

    volume_db: np.ndarray
    pitch_hz: np.ndarray        # 0 marks an unvoiced second
    speech_rate: np.ndarray     # syllable nuclei per second
    pauses: tuple[Pause, ...]

    @property
    def seconds(self) -> int:
        return len(self.volume_db)

    def pause_occupancy(self) -> np.ndarray:
        """Seconds of pause inside each second, in [0, 1]."""
        occ = np.zeros(self.seconds)
        for p in self.pauses:
            first = p.start_ms // 1000
            last = (p.end_ms - 1) // 1000
            for s in range(first, min(last, self.seconds - 1) + 1):
                lo = max(p.start_ms, s * 1000)
                hi = min(p.end_ms, (s + 1) * 1000)
                occ[s] += (hi - lo) / 1000.0
        return occ


def _require_audio(samples: np.ndarray, sample_rate: int) -> np.ndarray:
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise EmptyAudio("no samples")
    if sample_rate < 16000:
        raise ValueError(f"sample_rate must be >= 16000, got {sample_rate}")
    return samples


def _block_rms(samples: np.ndarray, block: int) -> np.ndarray:
    """RMS over consecutive blocks; the partial tail uses its true length."""
    n = len(samples)
    edges = np.arange(0, n, block)
    sums = np.add.reduceat(samples * samples, edges)
    counts = np.minimum(edges + block, n) - edges
    return np.sqrt(sums / counts)


def _to_db(rms: np.ndarray) -> np.ndarray:
    db = np.full(rms.shape, DB_FLOOR)
    nz = rms > 0
    db[nz] = 20.0 * np.log10(rms[nz])
    return np.maximum(db, DB_FLOOR)


def compute_volume(samples: np.ndarray, sample_rate: int) -> np.ndarray:
    """Per-second dBFS, clamped to -80."""
    samples = _require_audio(samples, sample_rate)
    return _to_db(_block_rms(samples, sample_rate))


def _frame_matrix(samples: np.ndarray, hop: int, win: int) -> np.ndarray:
    n_frames = -(-len(samples) // hop)
    padded = np.zeros(max((n_frames - 1) * hop + win, len(samples)))
    padded[:len(samples)] = samples
    view = np.lib.stride_tricks.sliding_window_view(padded, win)
    return view[::hop][:n_frames]


def _pitch_frames(samples: np.ndarray, sample_rate: int, cfg: AudioConfig) -> np.ndarray:
    """Per-100ms-frame pitch in Hz (0 = unvoiced)."""
    hop = int(sample_rate * PITCH_HOP_MS / 1000)
    win = int(3.0 * sample_rate / cfg.pitch_min_hz)
    lag_min = int(sample_rate // cfg.pitch_max_hz)
    lag_max = int(np.ceil(sample_rate / cfg.pitch_min_hz))
    frames = _frame_matrix(samples, hop, win)
    rms = np.sqrt(np.mean(frames * frames, axis=1))
    gate = _to_db(rms) > cfg.silence_floor_db

    nfft = 1 << int(np.ceil(np.log2(win + lag_max + 1)))
    pitches = np.zeros(len(frames))
    chunk = 2048
    for lo in range(0, len(frames), chunk):
        sub = frames[lo:lo + chunk]
        sub = sub - sub.mean(axis=1, keepdims=True)
        spec = np.fft.rfft(sub, n=nfft, axis=1)
        acf = np.fft.irfft(spec.real ** 2 + spec.imag ** 2, n=nfft, axis=1)[:, :lag_max + 2]
        r0 = acf[:, 0].copy()
        r0[r0 <= 0] = 1.0
        acf /= r0[:, None]

        seg = acf[:, lag_min:lag_max + 1]
        is_peak = (seg > acf[:, lag_min - 1:lag_max]) & (seg >= acf[:, lag_min + 1:lag_max + 2])
        scored = np.where(is_peak, seg, -np.inf)
        rows = np.arange(len(sub))
        best = np.argmax(scored, axis=1) + lag_min
        best_val = scored[rows, best - lag_min]
        voiced = gate[lo:lo + len(sub)] & np.isfinite(best_val) & (best_val >= VOICING_THRESHOLD)

        r_m1, r_0, r_p1 = acf[rows, best - 1], acf[rows, best], acf[rows, best + 1]
        denom = r_m1 - 2.0 * r_0 + r_p1
        delta = np.clip(np.divide(0.5 * (r_m1 - r_p1), denom, out=np.zeros(len(sub)), where=denom != 0), -0.5, 0.5)
        hz = np.clip(sample_rate / (best + delta), cfg.pitch_min_hz, cfg.pitch_max_hz)
        pitches[lo:lo + len(sub)][voiced] = hz[voiced]
    return pitches


def compute_pitch(samples: np.ndarray, sample_rate: int, cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Per-second pitch: median over the second's voiced frames, else 0."""
    samples = _require_audio(samples, sample_rate)
    frame_pitch = _pitch_frames(samples, sample_rate, cfg)
    return _pitch_seconds(frame_pitch, -(-len(samples) // sample_rate))


def _envelope_db(samples: np.ndarray, sample_rate: int) -> np.ndarray:
    return _to_db(_block_rms(samples, int(sample_rate * ENVELOPE_HOP_MS / 1000)))


def _pauses_from_envelope(env: np.ndarray, cfg: AudioConfig) -> tuple[Pause, ...]:
    quiet = np.append(env < cfg.silence_floor_db, False)
    flips = np.diff(np.concatenate([[0], quiet.astype(int)]))
    run_starts = np.nonzero(flips == 1)[0]
    run_ends = np.nonzero(flips == -1)[0]
    pauses = []
    for a, b in zip(run_starts, run_ends):
        start_ms, end_ms = int(a) * ENVELOPE_HOP_MS, int(b) * ENVELOPE_HOP_MS
        if end_ms - start_ms >= cfg.min_pause_ms:
            pauses.append(Pause(start_ms, end_ms))
    return tuple(pauses)


def detect_pauses(samples: np.ndarray, sample_rate: int, cfg: AudioConfig = AudioConfig()) -> tuple[Pause, ...]:
    """Maximal sub-floor runs of at least min_pause_ms, with ms bounds."""
    samples = _require_audio(samples, sample_rate)
    return _pauses_from_envelope(_envelope_db(samples, sample_rate), cfg)


def _nuclei_blocks(env: np.ndarray, frame_pitch: np.ndarray, pauses: tuple[Pause, ...], cfg: AudioConfig) -> list[int]:
    """Envelope-block indices of accepted syllable nuclei."""
    blocks_per_frame = PITCH_HOP_MS // ENVELOPE_HOP_MS
    frame_idx = np.minimum(np.arange(len(env)) // blocks_per_frame, len(frame_pitch) - 1)
    voiced = frame_pitch[frame_idx] > 0
    in_pause = np.zeros(len(env), dtype=bool)
    for p in pauses:
        in_pause[p.start_ms // ENVELOPE_HOP_MS:p.end_ms // ENVELOPE_HOP_MS] = True

    eligible = voiced & ~in_pause
    if not np.any(eligible):
        return []
    threshold = float(np.median(env[eligible]))

    mid = env[1:-1]
    peak = (mid > env[:-2]) & (mid >= env[2:]) & eligible[1:-1] & (mid >= threshold)
    candidates = np.nonzero(peak)[0] + 1

    accepted: list[int] = []
    for c in candidates:
        if not accepted:
            accepted.append(int(c))
            continue
        dip = env[c] - float(env[accepted[-1]:c + 1].min())
        if dip >= SYLLABLE_DIP_DB:
            accepted.append(int(c))
        elif env[c] > env[accepted[-1]]:
            accepted[-1] = int(c)
    return accepted


def _rate_from_nuclei(nuclei: list[int], n_seconds: int) -> np.ndarray:
    rate = np.zeros(n_seconds)
    for block in nuclei:
        rate[min(block * ENVELOPE_HOP_MS // 1000, n_seconds - 1)] += 1
    return rate


def compute_speech_rate(samples: np.ndarray, sample_rate: int, cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Syllable nuclei per second."""
    samples = _require_audio(samples, sample_rate)
    env = _envelope_db(samples, sample_rate)
    frame_pitch = _pitch_frames(samples, sample_rate, cfg)
    pauses = _pauses_from_envelope(env, cfg)
    nuclei = _nuclei_blocks(env, frame_pitch, pauses, cfg)
    return _rate_from_nuclei(nuclei, -(-len(samples) // sample_rate))


def _pitch_seconds(frame_pitch: np.ndarray, n_seconds: int) -> np.ndarray:
    frames_per_s = 1000 // PITCH_HOP_MS
    out = np.zeros(n_seconds)
    for s in range(n_seconds):
        block = frame_pitch[s * frames_per_s:(s + 1) * frames_per_s]
        voiced = block[block > 0]
        if voiced.size:
            out[s] = float(np.median(voiced))
    return out


def compute_audio_features(samples: np.ndarray, sample_rate: int, cfg: AudioConfig = AudioConfig()) -> AudioFeatureSeries:
    """Single-pass clip analysis; equivalent to calling each feature
    function separately."""
    samples = _require_audio(samples, sample_rate)
    n_seconds = -(-len(samples) // sample_rate)
    env = _envelope_db(samples, sample_rate)
    frame_pitch = _pitch_frames(samples, sample_rate, cfg)
    pauses = _pauses_from_envelope(env, cfg)
    nuclei = _nuclei_blocks(env, frame_pitch, pauses, cfg)
    return AudioFeatureSeries(
        volume_db=_to_db(_block_rms(samples, sample_rate)),
        pitch_hz=_pitch_seconds(frame_pitch, n_seconds),
        speech_rate=_rate_from_nuclei(nuclei, n_seconds),
        pauses=pauses,
    )


def boxstats_per_minute(values: np.ndarray, exclude_zeros: bool = False) -> list[dict]:
    """Five-number summary per 60-sample block; the last block may be short.

    With ``exclude_zeros`` (pitch series), unvoiced zeros are dropped before
    summarizing; an all-zero block yields an all-zero summary.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty series")
    out = []
    for lo in range(0, len(values), 60):
        block = values[lo:lo + 60]
        if exclude_zeros:
            block = block[block != 0]
        if block.size == 0:
            out.append({"min": 0.0, "q1": 0.0, "median": 0.0, "q3": 0.0, "max": 0.0})
            continue
        q1, med, q3 = np.percentile(block, [25, 50, 75])
        out.append({
            "min": float(block.min()), "q1": float(q1), "median": float(med),
            "q3": float(q3), "max": float(block.max()),
        })
    return out
