"""Runtime configuration.

Config files are flat TOML-style ``key = value`` lines with dotted keys,
e.g.::

    audio.pitch_min_hz = 75
    tsne.perplexity = 10
    model.lag_target = true

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import SchemaViolation


@dataclass(frozen=True)
class AudioConfig:
    pitch_min_hz: float = 75.0
    pitch_max_hz: float = 500.0
    silence_floor_db: float = -40.0
    min_pause_ms: int = 300


@dataclass(frozen=True)
class FrameConfig:
    closeup_area_frac: float = 0.08


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 10.0
    iters: int = 1000


@dataclass(frozen=True)
class ModelConfig:
    lag_target: bool = True


@dataclass(frozen=True)
class RadarConfig:
    # attractiveness numerator over viewer entries; default (likes + comments)
    attractiveness: str = "likes_plus_comments"


@dataclass(frozen=True)
class TextConfig:
    classifier_path: str = ""
    seed: int = 7


@dataclass(frozen=True)
class Config:
    audio: AudioConfig = field(default_factory=AudioConfig)
    frame: FrameConfig = field(default_factory=FrameConfig)
    tsne: TsneConfig = field(default_factory=TsneConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    radar: RadarConfig = field(default_factory=RadarConfig)
    text: TextConfig = field(default_factory=TextConfig)


def _parse_scalar(raw: str):
    raw = raw.strip()
    if raw in ("true", "false"):
        return raw == "true"
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def load_config(path: str | Path | None = None) -> Config:
    """Build a Config from a key=value file; ``None`` gives the defaults."""
    cfg = Config()
    if path is None:
        return cfg
    text = Path(path).read_text(encoding="utf-8")
    sections = {f.name: dict() for f in fields(Config)}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaViolation("config", f"expected key = value, got {line!r}", line=lineno)
        key, raw = line.split("=", 1)
        key = key.strip()
        if "." not in key:
            raise SchemaViolation("config", f"key {key!r} must be section.option", line=lineno)
        section, option = key.split(".", 1)
        if section not in sections:
            raise SchemaViolation("config", f"unknown section {section!r}", line=lineno)
        known = {f.name for f in fields(getattr(cfg, section))}
        if option not in known:
            raise SchemaViolation("config", f"unknown option {key!r}", line=lineno)
        sections[section][option] = _parse_scalar(raw)
    for name, overrides in sections.items():
        if overrides:
            cfg = replace(cfg, **{name: replace(getattr(cfg, name), **overrides)})
    return cfg
