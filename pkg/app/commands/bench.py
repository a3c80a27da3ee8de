import argparse
import logging
from typing import Any

from app.commands.common import add_output_argument, prepare_output_dir, read_json, validate_model
from app.cruds import report_crud
from app.errors import ConfigError
from app.schemas.generator import GENERATOR_PRESETS, preset_payload
from app.schemas.report import BenchmarkRequest
from app.services.benchmark_service import benchmark_service

logger = logging.getLogger(__name__)

OUTPUT_FILES = {
    "report": "report.json",
    "cells": "cells.csv",
    "summary": "summary.csv",
    "curves": "curves.csv",
}
TIMINGS_FILE = "timings.csv"


def build_request(args: argparse.Namespace) -> BenchmarkRequest:
    """설정 파일 또는 프리셋 + 시드. --seed 는 모든 생성기 설정의 시드를 덮어쓴다"""
    if args.config is None and args.preset is None:
        raise ConfigError("Either --config or --preset is required", errors=[])
    if args.config is not None and args.preset is not None:
        raise ConfigError("--config and --preset are mutually exclusive", errors=[])

    payload: dict[str, Any]
    if args.preset is not None:
        if args.seed is None:
            raise ConfigError("--seed is required with --preset", errors=[])
        payload = {"configs": [preset_payload(args.preset)]}
    else:
        payload = read_json(args.config)

    if args.seed is not None:
        payload["configs"] = [{**config, "seed": args.seed} for config in payload.get("configs") or []]
    if args.instances is not None:
        payload["instances_per_config"] = args.instances
    if args.algorithms is not None:
        payload["algorithms"] = [name.strip() for name in args.algorithms.split(",") if name.strip()]
    return validate_model(BenchmarkRequest, payload)


def run_bench(args: argparse.Namespace) -> int:
    """
    생성 -> 검출 -> NMI -> 속성 곡선 벤치마크

    실패한 칸은 보고서에 status=failed 로 남고 명령은 성공으로 끝난다.
    """
    request = build_request(args)
    out = prepare_output_dir(args.out)

    report, timings = benchmark_service.run_benchmark(request, workers=args.workers)

    report_crud.write_report(out / OUTPUT_FILES["report"], report)
    report_crud.write_cells(out / OUTPUT_FILES["cells"], report)
    report_crud.write_summary(out / OUTPUT_FILES["summary"], report)
    report_crud.write_bench_curves(out / OUTPUT_FILES["curves"], report)
    report_crud.write_timings(out / TIMINGS_FILE, timings)

    for summary in report.summaries:
        nmi = "n/a" if summary.nmi_mean is None else f"{summary.nmi_mean:.4f}"
        logger.info(
            f"config {summary.config_index} {summary.algorithm}: NMI {nmi} "
            f"({summary.succeeded} ok, {summary.failed} failed)"
        )
    if report.failures:
        logger.warning(f"{len(report.failures)} benchmark cells failed")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="알고리즘 비교 벤치마크")
    parser.add_argument("--config", help="BenchmarkRequest JSON 파일")
    parser.add_argument("--preset", choices=sorted(GENERATOR_PRESETS), help="재현 실험 설정")
    parser.add_argument("--seed", type=int, help="기준 시드 (프리셋 사용 시 필수)")
    parser.add_argument("--instances", type=int, help="설정마다 만들 인스턴스 수")
    parser.add_argument("--algorithms", help="쉼표로 구분한 알고리즘 이름")
    parser.add_argument("--workers", type=int, help="병렬 프로세스 수 (기본값: BENCH_WORKERS)")
    add_output_argument(parser)
    parser.set_defaults(handler=run_bench)
