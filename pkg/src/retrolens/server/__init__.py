from .app import create_app
from .bundle import build_report_bundle, bundle_schema, validate_bundle, write_report_bundle
from .cache import FeatureCache, session_content_hash
from .jobs import JobQueue
from .records import Record, RecordStore
from .state import AppState

__all__ = [
    "AppState", "FeatureCache", "JobQueue", "Record", "RecordStore",
    "build_report_bundle", "bundle_schema", "create_app",
    "session_content_hash", "validate_bundle", "write_report_bundle",
]
