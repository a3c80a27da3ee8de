import logging
import time
from contextlib import contextmanager
from typing import Any, Iterator

from app.logging_config import get_run_logger

_fallback_logger = logging.getLogger(__name__)


class StageRecord:
    """단계 실행 중 추가 필드를 모으는 컨테이너"""

    def __init__(self, stage: str, fields: dict[str, Any]):
        self.stage = stage
        self.fields = dict(fields)
        self.status = "ok"
        self.duration_ms = 0.0

    def set(self, **fields: Any) -> None:
        self.fields.update(fields)

    @property
    def duration_seconds(self) -> float:
        return self.duration_ms / 1000.0


@contextmanager
def log_stage(stage: str, **fields: Any) -> Iterator[StageRecord]:
    """
    파이프라인 단계 하나를 측정하고 run 로거에 이벤트 하나를 남긴다.

    예외는 그대로 전파하되 status=failed 와 에러 코드를 기록한다.
    """
    record = StageRecord(stage, fields)
    start_time = time.perf_counter()
    try:
        yield record
    except Exception as exc:
        record.status = "failed"
        record.set(error=getattr(exc, "code", type(exc).__name__))
        raise
    finally:
        record.duration_ms = round((time.perf_counter() - start_time) * 1000, 2)
        try:
            event_data = {"stage": stage, "status": record.status, "duration_ms": record.duration_ms}
            event_data.update(record.fields)
            get_run_logger().info("stage", extra={"event_data": event_data})
        except Exception:
            _fallback_logger.exception("Failed to write run event")
