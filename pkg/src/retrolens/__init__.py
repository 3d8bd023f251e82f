"""Retrospective analytics for livestream e-commerce sessions."""

__version__ = "0.1.0"

from . import audiodsp, corpus, framefeat, fusion, modeling, textpitch
from .config import Config, load_config
from .features import ClipFeatures, extract_clip_features

__all__ = [
    "Config", "ClipFeatures", "__version__",
    "audiodsp", "corpus", "extract_clip_features", "framefeat",
    "fusion", "load_config", "modeling", "textpitch",
]
