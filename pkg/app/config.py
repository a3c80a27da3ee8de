import os

from dotenv import load_dotenv

load_dotenv()


def _get_bool(name: str, default: bool = False) -> bool:
    return os.getenv(name, str(default)).lower() == "true"


def _get_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


class Settings:
    """
    운영 설정 (환경변수 기반)

    결과 파일의 바이트에 영향을 주지 않는 항목만 둔다.
    생성기/알고리즘 파라미터는 app/schemas 의 기본값으로 관리한다.
    """

    PROJECT_NAME: str = os.getenv("PROJECT_NAME", "LFR Community Benchmark")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "info")

    LOG_DIR: str = os.getenv("LOG_DIR", "var/log")
    LOG_FILE_ENABLED: bool = _get_bool("LOG_FILE_ENABLED", False)
    LOG_RUN_EVENTS_ENABLED: bool = _get_bool("LOG_RUN_EVENTS_ENABLED", True)
    LOG_JSON_FORMAT: bool = _get_bool("LOG_JSON_FORMAT", False)
    LOG_ROTATION_MAX_BYTES: int = _get_int("LOG_ROTATION_MAX_BYTES", 10 * 1024 * 1024)
    LOG_ROTATION_BACKUP_COUNT: int = _get_int("LOG_ROTATION_BACKUP_COUNT", 10)

    # 벤치마크 셀 병렬 실행 (1 이면 순차 실행)
    BENCH_WORKERS: int = _get_int("BENCH_WORKERS", 1)

    # Walktrap 블록 계산 폭 (메모리 사용량 제어용, 결과에는 영향 없음)
    WALKTRAP_BLOCK_SIZE: int = _get_int("WALKTRAP_BLOCK_SIZE", 256)

    def __init__(self):
        if self.LOG_LEVEL.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError("LOG_LEVEL must be one of: debug, info, warning, error, critical")

        if self.BENCH_WORKERS < 1:
            raise ValueError("BENCH_WORKERS must be at least 1")

        if self.WALKTRAP_BLOCK_SIZE < 1:
            raise ValueError("WALKTRAP_BLOCK_SIZE must be at least 1")


settings = Settings()
