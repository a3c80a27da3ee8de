import argparse
import json
from typing import Any

from app.logging_config import configure_logging
from app.schemas.generator import GENERATOR_PRESETS, generator_preset
from app.schemas.report import BenchmarkRequest
from app.services.benchmark_service import benchmark_service
from app.services.metrics_service import curve_deviation


def _serialize_summary(summary: dict[str, Any]) -> str:
    return json.dumps(summary, ensure_ascii=False, indent=2, default=str)


def reproduce_table(preset: str, seed: int, instances: int, workers: int | None = None) -> dict[str, Any]:
    """프리셋 설정으로 다섯 알고리즘을 비교하고 NMI 표와 정성 비교 값을 모은다"""
    request = BenchmarkRequest(configs=[generator_preset(preset, seed)], instances_per_config=instances)
    report, timings = benchmark_service.run_benchmark(request, workers=workers)

    curves = report.curves[0]
    reference = curves.reference.size_distribution
    rows = []
    for summary in report.summaries:
        algorithm_curves = curves.algorithms.get(summary.algorithm)
        deviation = (
            curve_deviation(algorithm_curves.size_distribution, reference)
            if algorithm_curves is not None and algorithm_curves.size_distribution.bins
            else None
        )
        seconds = [t.seconds for t in timings if t.stage == summary.algorithm]
        rows.append(
            {
                "algorithm": summary.algorithm,
                "nmi_mean": summary.nmi_mean,
                "nmi_std": summary.nmi_std,
                "communities_mean": summary.community_count_mean,
                "singletons_mean": summary.singleton_count_mean,
                "size_curve_deviation": deviation,
                "seconds_mean": sum(seconds) / len(seconds) if seconds else None,
                "failed": summary.failed,
            }
        )

    ranked = sorted((r for r in rows if r["nmi_mean"] is not None), key=lambda r: r["nmi_mean"], reverse=True)
    return {
        "preset": preset,
        "seed": seed,
        "instances": instances,
        "reference_communities_mean": curves.reference.community_count / instances,
        "rows": rows,
        "ranking": [r["algorithm"] for r in ranked],
        "failures": [cell.error for cell in report.failures],
    }


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="알고리즘 비교 표 재현")
    parser.add_argument("--preset", choices=sorted(GENERATOR_PRESETS), default="desk")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--instances", type=int, default=5)
    parser.add_argument("--workers", type=int)
    args = parser.parse_args()

    configure_logging("warning")
    result = reproduce_table(args.preset, args.seed, args.instances, args.workers)
    print(_serialize_summary(result))
