import json
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence

import pandas as pd

from app.errors import FileFormatError
from app.models.detection import MergeDendrogram
from app.schemas.metrics import BinnedCurve, CommunityProfile, HistogramBin
from app.schemas.report import BenchmarkReport, TimingRecord

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
CURVE_COLUMNS = ["property", "bin_index", "bin_lower", "bin_upper", "mean", "std", "count"]


def _write_csv(path: Path, kind: str, frame: pd.DataFrame) -> None:
    """'# lfrbench-<kind> v1' 주석 줄 + 헤더 행 + 데이터"""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"# lfrbench-{kind} v1\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _write_json(path: Path, payload: Any) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def curve_rows(name: str, curve: BinnedCurve) -> list[dict[str, Any]]:
    return [
        {
            "property": name,
            "bin_index": b.index,
            "bin_lower": b.lower,
            "bin_upper": b.upper,
            "mean": b.mean,
            "std": b.std,
            "count": b.count,
        }
        for b in curve.bins
    ]


class ReportCRUD:
    """분석/검출/벤치마크 결과 CSV 와 JSON"""

    def read_csv(self, path: Path) -> pd.DataFrame:
        path = Path(path)
        if not path.is_file():
            raise FileFormatError(f"CSV file not found: {path}", path=str(path))
        return pd.read_csv(path, comment="#")

    def write_profiles(self, path: Path, profiles: Sequence[CommunityProfile]) -> None:
        rows = [
            {**profile.model_dump(), "undefined": profile.is_singleton}
            for profile in profiles
        ]
        columns = list(CommunityProfile.model_fields) + ["undefined"]
        _write_csv(path, "profiles", pd.DataFrame(rows, columns=columns))

    def write_curves(self, path: Path, curves: dict[str, BinnedCurve]) -> None:
        rows = [row for name, curve in curves.items() for row in curve_rows(name, curve)]
        _write_csv(path, "curves", pd.DataFrame(rows, columns=CURVE_COLUMNS))

    def write_histogram(self, path: Path, bins: Iterable[HistogramBin]) -> None:
        rows = [{"bin_lower": b.lower, "bin_upper": b.upper, "count": b.count} for b in bins]
        _write_csv(path, "histogram", pd.DataFrame(rows, columns=["bin_lower", "bin_upper", "count"]))

    def write_dendrogram(self, path: Path, dendrogram: MergeDendrogram) -> None:
        """병합 단계별 목적함수. step 0 은 병합 전 (싱글톤) 상태"""
        rows = [{"step": 0, "a": None, "b": None, "objective": dendrogram.initial_objective}]
        rows += [
            {"step": i + 1, "a": s.a, "b": s.b, "objective": s.objective}
            for i, s in enumerate(dendrogram.steps)
        ]
        frame = pd.DataFrame(rows, columns=["step", "a", "b", "objective"])
        frame["a"] = frame["a"].astype("Int64")
        frame["b"] = frame["b"].astype("Int64")
        _write_csv(path, "dendrogram", frame)

    def write_pass_log(self, path: Path, pass_log: Sequence[float]) -> None:
        frame = pd.DataFrame({"pass": range(1, len(pass_log) + 1), "modularity": list(pass_log)})
        _write_csv(path, "passes", frame)

    def write_timing(self, path: Path, seconds: float, **fields: Any) -> None:
        """결정적 산출물과 분리된 실행 시간 기록"""
        _write_json(path, {"seconds": round(seconds, 6), **fields})

    def write_report(self, path: Path, report: BenchmarkReport) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(report.model_dump_json(indent=2))
            handle.write("\n")

    def read_report(self, path: Path) -> BenchmarkReport:
        path = Path(path)
        if not path.is_file():
            raise FileFormatError(f"Report not found: {path}", path=str(path))
        with open(path, "r", encoding="utf-8") as handle:
            return BenchmarkReport.model_validate_json(handle.read())

    def write_cells(self, path: Path, report: BenchmarkReport) -> None:
        rows = [
            {
                "config_index": c.config_index,
                "instance": c.instance,
                "seed": c.seed,
                "algorithm": c.algorithm,
                "status": c.status,
                "nmi": c.nmi,
                "community_count": c.community_count,
                "singleton_count": c.singleton_count,
                "error": c.error["error"] if c.error else None,
            }
            for c in report.cells
        ]
        frame = pd.DataFrame(rows)
        for column in ("community_count", "singleton_count"):
            frame[column] = frame[column].astype("Int64")
        _write_csv(path, "cells", frame)

    def write_summary(self, path: Path, report: BenchmarkReport) -> None:
        """설정마다 알고리즘 순서대로 한 행"""
        frame = pd.DataFrame([s.model_dump() for s in report.summaries])
        _write_csv(path, "summary", frame)

    def write_bench_curves(self, path: Path, report: BenchmarkReport) -> None:
        rows = []
        for config_curves in report.curves:
            sets = {"reference": config_curves.reference, **config_curves.algorithms}
            for partition_name, curve_set in sets.items():
                named = {**curve_set.properties, "size_distribution": curve_set.size_distribution}
                for name, curve in named.items():
                    for row in curve_rows(name, curve):
                        rows.append({"config_index": config_curves.config_index, "partition": partition_name, **row})
        frame = pd.DataFrame(rows, columns=["config_index", "partition"] + CURVE_COLUMNS)
        _write_csv(path, "bench-curves", frame)

    def write_timings(self, path: Path, timings: Sequence[TimingRecord]) -> None:
        frame = pd.DataFrame([t.model_dump() for t in timings], columns=list(TimingRecord.model_fields))
        _write_csv(path, "timings", frame)


report_crud = ReportCRUD()
