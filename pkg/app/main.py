import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from app.commands import analyze, bench, detect, generate
from app.config import settings
from app.errors import BenchmarkError
from app.logging_config import configure_logging

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_INTERNAL_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfrbench",
        description=f"{settings.PROJECT_NAME}: LFR 생성, 커뮤니티 검출, 분석, 벤치마크",
    )
    parser.add_argument(
        "--log-level",
        choices=["debug", "info", "warning", "error", "critical"],
        help="로그 레벨 (기본값: LOG_LEVEL)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate.register(subparsers)
    detect.register(subparsers)
    analyze.register(subparsers)
    bench.register(subparsers)
    return parser


def _emit_error(payload: dict) -> None:
    sys.stderr.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
    sys.stderr.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    CLI 진입점

    성공하면 0, 실패하면 한 줄짜리 에러 JSON 을 stderr 에 쓰고 0 이 아닌 값을 돌려준다.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except BenchmarkError as exc:
        logger.error(f"{args.command} failed: [{exc.code}] {exc.message}")
        _emit_error(exc.to_payload())
        return EXIT_FAILURE
    except Exception as exc:
        logger.exception(f"Unexpected error in {args.command}")
        _emit_error({"error": "internal_error", "message": str(exc), "detail": {"type": type(exc).__name__}})
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
