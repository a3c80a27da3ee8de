"""
벤치마크 실행: 설정 × 인스턴스 × 알고리즘

(설정, 인스턴스) 단위로 네트워크를 만들고 모든 알고리즘을 돌린다.
단위들은 서로 독립이므로 프로세스 풀에서 돌릴 수 있고,
보고서는 항상 단위 순서대로 합친다.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from app.config import settings
from app.errors import BenchmarkError
from app.run_logging import log_stage
from app.schemas.metrics import CommunityProfile
from app.schemas.report import (
    AlgorithmSummary,
    BenchmarkCell,
    BenchmarkReport,
    BenchmarkRequest,
    ConfigCurves,
    CurveSet,
    TimingRecord,
)
from app.services.detection_service import detection_service
from app.services.evaluation_service import nmi
from app.services.generator_service import generator_service
from app.services.metrics_service import profile_curves, profile_partition, size_distribution_curve

logger = logging.getLogger(__name__)


@dataclass
class UnitResult:
    """(설정, 인스턴스) 하나의 결과"""

    config_index: int
    instance: int
    cells: list[BenchmarkCell] = field(default_factory=list)
    timings: list[TimingRecord] = field(default_factory=list)
    reference_profiles: list[CommunityProfile] = field(default_factory=list)
    algorithm_profiles: dict[str, list[CommunityProfile]] = field(default_factory=dict)


def _failed_cell(config_index: int, instance: int, seed: int, algorithm: str, exc: BenchmarkError) -> BenchmarkCell:
    return BenchmarkCell(
        config_index=config_index,
        instance=instance,
        seed=seed,
        algorithm=algorithm,
        status="failed",
        error=exc.to_payload(),
    )


def run_unit(request: BenchmarkRequest, config_index: int, instance: int) -> UnitResult:
    """인스턴스 하나 생성 후 모든 알고리즘 실행. 칸별 실패는 기록만 하고 계속한다"""
    base = request.configs[config_index]
    seed = base.seed + instance
    cfg = base.model_copy(update={"seed": seed})
    result = UnitResult(config_index=config_index, instance=instance)

    start_time = time.perf_counter()
    try:
        network = generator_service.generate(cfg)
    except BenchmarkError as exc:
        logger.warning(f"Generation failed for config {config_index} instance {instance}: {exc.message}")
        result.cells = [_failed_cell(config_index, instance, seed, name, exc) for name in request.algorithms]
        return result
    result.timings.append(
        TimingRecord(
            config_index=config_index,
            instance=instance,
            stage="generate",
            seconds=round(time.perf_counter() - start_time, 6),
        )
    )

    result.reference_profiles, _ = profile_partition(network.graph, network.reference, request.metrics)
    for name in request.algorithms:
        with log_stage("bench.cell", config=config_index, instance=instance, algorithm=name) as stage:
            try:
                detected, seconds = detection_service.detect(name, network.graph, request.detection)
                score = nmi(network.reference, detected.partition)
                profiles, _ = profile_partition(network.graph, detected.partition, request.metrics)
            except BenchmarkError as exc:
                logger.warning(f"Cell failed (config {config_index}, instance {instance}, {name}): {exc.message}")
                result.cells.append(_failed_cell(config_index, instance, seed, name, exc))
                stage.set(outcome="failed", error=exc.code)
                continue
            stage.set(outcome="ok", nmi=round(score, 6))

        result.algorithm_profiles[name] = profiles
        result.timings.append(
            TimingRecord(config_index=config_index, instance=instance, stage=name, seconds=round(seconds, 6))
        )
        result.cells.append(
            BenchmarkCell(
                config_index=config_index,
                instance=instance,
                seed=seed,
                algorithm=name,
                status="ok",
                nmi=score,
                community_count=detected.community_count,
                singleton_count=detected.singleton_count,
            )
        )
    return result


def _run_unit_args(args: tuple[BenchmarkRequest, int, int]) -> UnitResult:
    return run_unit(*args)


def _curve_set(profiles: list[CommunityProfile], bins_per_decade: int) -> CurveSet:
    sizes = [profile.size for profile in profiles]
    return CurveSet(
        properties=profile_curves(profiles, bins_per_decade),
        size_distribution=size_distribution_curve(sizes, bins_per_decade),
        community_count=len(profiles),
        singleton_count=sum(1 for size in sizes if size == 1),
    )


def _mean(values: list[float]) -> float | None:
    return float(np.mean(values)) if values else None


def _std(values: list[float]) -> float | None:
    return float(np.std(values)) if values else None


def summarize(request: BenchmarkRequest, cells: list[BenchmarkCell]) -> list[AlgorithmSummary]:
    """설정별, 알고리즘별 평균 ± 표준편차 (칸 값에서 다시 계산 가능)"""
    summaries = []
    for config_index in range(len(request.configs)):
        for name in request.algorithms:
            group = [c for c in cells if c.config_index == config_index and c.algorithm == name]
            ok = [c for c in group if c.status == "ok"]
            nmis = [c.nmi for c in ok]
            summaries.append(
                AlgorithmSummary(
                    config_index=config_index,
                    algorithm=name,
                    succeeded=len(ok),
                    failed=len(group) - len(ok),
                    nmi_mean=_mean(nmis),
                    nmi_std=_std(nmis),
                    community_count_mean=_mean([c.community_count for c in ok]),
                    singleton_count_mean=_mean([c.singleton_count for c in ok]),
                )
            )
    return summaries


class BenchmarkService:
    def run_benchmark(
        self,
        request: BenchmarkRequest,
        workers: int | None = None,
    ) -> tuple[BenchmarkReport, list[TimingRecord]]:
        """(보고서, 실행 시간 기록)"""
        detection_service.validate_names(request.algorithms)
        workers = workers or settings.BENCH_WORKERS
        units = [
            (request, config_index, instance)
            for config_index in range(len(request.configs))
            for instance in range(request.instances_per_config)
        ]

        with log_stage("bench", units=len(units), workers=workers, algorithms=len(request.algorithms)) as stage:
            if workers > 1 and len(units) > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    results = list(pool.map(_run_unit_args, units))
            else:
                results = [_run_unit_args(unit) for unit in units]

            cells = [cell for result in results for cell in result.cells]
            timings = [timing for result in results for timing in result.timings]
            bins = request.metrics.bins_per_decade
            curves = []
            for config_index in range(len(request.configs)):
                mine = [r for r in results if r.config_index == config_index]
                reference = [p for r in mine for p in r.reference_profiles]
                per_algorithm = {
                    name: _curve_set([p for r in mine for p in r.algorithm_profiles.get(name, [])], bins)
                    for name in request.algorithms
                }
                curves.append(
                    ConfigCurves(
                        config_index=config_index,
                        reference=_curve_set(reference, bins),
                        algorithms=per_algorithm,
                    )
                )

            report = BenchmarkReport(
                request=request,
                cells=cells,
                summaries=summarize(request, cells),
                curves=curves,
            )
            stage.set(failed_cells=len(report.failures))
        return report, timings


benchmark_service = BenchmarkService()
