from .clips import find_clip, segment_clips
from .io import load_session, save_corpus, write_wav
from .synth import synth_corpus
from .types import (
    EXPRESSIONS,
    STAT_COLUMNS,
    Clip,
    CommentEvent,
    Face,
    FrameAnnotation,
    MerchandiseEntry,
    SessionCorpus,
    SessionManifest,
    StatsRow,
    StreamerInfo,
    TranscriptSentence,
)

__all__ = [
    "EXPRESSIONS", "STAT_COLUMNS",
    "Clip", "CommentEvent", "Face", "FrameAnnotation", "MerchandiseEntry",
    "SessionCorpus", "SessionManifest", "StatsRow", "StreamerInfo", "TranscriptSentence",
    "find_clip", "load_session", "save_corpus", "segment_clips", "synth_corpus", "write_wav",
]
