from .grid import GRANULARITIES, SegmentGrid, build_grid
from .keywords import segment_keywords
from .projection import PALETTE, ProjectionResult, comment_colors, palette_color, tsne
from .vectors import (
    CHANNEL_FEATURES,
    TARGET_OPTIONS,
    TARGET_TO_COLUMN,
    ModelMatrix,
    build_model_matrix,
    pause_ms_in_span,
    segment_blocks,
    segment_vectors,
)

__all__ = [
    "GRANULARITIES", "SegmentGrid", "build_grid",
    "segment_keywords",
    "PALETTE", "ProjectionResult", "comment_colors", "palette_color", "tsne",
    "CHANNEL_FEATURES", "TARGET_OPTIONS", "TARGET_TO_COLUMN", "ModelMatrix",
    "build_model_matrix", "pause_ms_in_span", "segment_blocks", "segment_vectors",
]
