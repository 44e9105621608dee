"""Live stream pipeline: admission, scoring, responding, reporting."""

from .filters import StreamFilterConfig, admit, rejection_reason
from .limiter import RateLimiter
from .responder import Responder
from .service import ElectionReport, PipelineService, RunSummary, build_report
from .store import PipelineStore, ResponseEvent, ScoreRecord

__all__ = [
    "ElectionReport",
    "PipelineService",
    "PipelineStore",
    "RateLimiter",
    "Responder",
    "ResponseEvent",
    "RunSummary",
    "ScoreRecord",
    "StreamFilterConfig",
    "admit",
    "build_report",
    "rejection_reason",
]
