from typing import Any


class BenchmarkError(Exception):
    """도구 전체 공통 예외 (code + detail 구조, CLI 에서 JSON 으로 직렬화)"""

    code = "benchmark_error"

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_payload(self) -> dict[str, Any]:
        return {"error": self.code, "message": self.message, "detail": self.detail}


class ConfigError(BenchmarkError):
    code = "config_error"


class GraphValidationError(BenchmarkError):
    code = "graph_validation_error"


class SamplingError(BenchmarkError):
    code = "sampling_error"


class InfeasibleAssignmentError(BenchmarkError):
    code = "infeasible_assignment"


class GenerationError(BenchmarkError):
    code = "generation_error"


class DetectionError(BenchmarkError):
    code = "detection_error"


class ConvergenceError(DetectionError):
    code = "convergence_error"


class MetricUndefinedError(BenchmarkError):
    code = "metric_undefined"


class PartitionMismatchError(BenchmarkError):
    code = "partition_mismatch"


class UnknownAlgorithmError(BenchmarkError):
    code = "unknown_algorithm"


class FileFormatError(BenchmarkError):
    code = "file_format_error"
