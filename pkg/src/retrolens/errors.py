"""Exception hierarchy shared by all modules.

Every error carries a machine-readable ``code`` so the HTTP layer can
surface it without string matching.
"""


class RetroLensError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)


# -- corpus ----------------------------------------------------------------

class MissingFile(RetroLensError):
    code = "missing_file"


class SchemaViolation(RetroLensError):
    """Names the offending field and, where known, the line number."""

    code = "schema_violation"

    def __init__(self, field: str, message: str = "", line: int | None = None):
        self.field = field
        self.line = line
        loc = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}{loc}: {message}" if message else f"{field}{loc}")


class UnsortedStream(RetroLensError):
    code = "unsorted_stream"


class RatioOutOfRange(RetroLensError):
    code = "ratio_out_of_range"


class IoError(RetroLensError):
    code = "io_error"


# -- audio -----------------------------------------------------------------

class EmptyAudio(RetroLensError):
    code = "empty_audio"


# -- text ------------------------------------------------------------------

class CategoryUnderfilled(RetroLensError):
    code = "category_underfilled"


class EmptySentence(RetroLensError):
    code = "empty_sentence"


# -- fusion ----------------------------------------------------------------

class ClipTooShort(RetroLensError):
    code = "clip_too_short"


class UnknownTarget(RetroLensError):
    code = "unknown_target"


class TooFewPoints(RetroLensError):
    code = "too_few_points"


class PerplexityTooLarge(RetroLensError):
    code = "perplexity_too_large"


# -- modeling ----------------------------------------------------------------

class TooFewRows(RetroLensError):
    code = "too_few_rows"


class UnfittedModel(RetroLensError):
    code = "unfitted_model"


class UnmappedFeature(RetroLensError):
    code = "unmapped_feature"


class NoShiftInClip(RetroLensError):
    code = "no_shift_in_clip"


# -- server ------------------------------------------------------------------

class UnknownClip(RetroLensError):
    code = "unknown_clip"


class UnknownSession(RetroLensError):
    code = "unknown_session"


class UnknownRun(RetroLensError):
    code = "unknown_run"


class UnknownRecord(RetroLensError):
    code = "unknown_record"


class CorpusLoadError(RetroLensError):
    code = "corpus_load_error"
