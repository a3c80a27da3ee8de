import pytest

from app.cruds import report_crud
from app.errors import UnknownAlgorithmError
from app.schemas.detection import DetectionParams
from app.schemas.report import ALL_ALGORITHMS, BenchmarkRequest
from app.services.benchmark_service import benchmark_service, run_unit


@pytest.fixture
def request_two_instances(small_config) -> BenchmarkRequest:
    return BenchmarkRequest(configs=[small_config], algorithms=["louvain", "fast-greedy"], instances_per_config=2)


class TestRunUnit:
    def test_cells_in_algorithm_order(self, request_two_instances):
        """셀은 알고리즘 순서, 시드는 설정 시드 + 인스턴스 번호"""
        unit = run_unit(request_two_instances, 0, 1)
        assert [cell.algorithm for cell in unit.cells] == ["louvain", "fast-greedy"]
        assert all(cell.seed == request_two_instances.configs[0].seed + 1 for cell in unit.cells)
        assert all(cell.status == "ok" and 0.0 <= cell.nmi <= 1.0 for cell in unit.cells)
        assert [t.stage for t in unit.timings] == ["generate", "louvain", "fast-greedy"]

    def test_failed_cell_is_recorded(self, small_config):
        """실패한 셀은 에러와 함께 기록되고 나머지는 계속 돈다"""
        request = BenchmarkRequest(
            configs=[small_config],
            algorithms=["markov-cluster", "louvain"],
            instances_per_config=1,
            detection=DetectionParams(mcl_max_iterations=1),
        )
        unit = run_unit(request, 0, 0)
        failed, ok = unit.cells
        assert failed.status == "failed"
        assert failed.error["error"] == "convergence_error"
        assert failed.nmi is None
        assert ok.status == "ok"


class TestRunBenchmark:
    def test_report_structure(self, request_two_instances):
        """보고서의 셀, 요약, 곡선, 시간 기록"""
        report, timings = benchmark_service.run_benchmark(request_two_instances, workers=1)
        assert len(report.cells) == 4
        assert [(s.config_index, s.algorithm) for s in report.summaries] == [(0, "louvain"), (0, "fast-greedy")]
        louvain = report.summaries[0]
        assert louvain.succeeded == 2 and louvain.failed == 0
        assert louvain.nmi_mean == pytest.approx(sum(report.cell_nmis(0, "louvain")) / 2)
        assert set(report.curves[0].algorithms) == {"louvain", "fast-greedy"}
        assert len(timings) == 2 * 3
        assert report.failures == []

    def test_workers_do_not_change_report(self, request_two_instances):
        """프로세스 수는 보고서 내용을 바꾸지 않는다"""
        serial, _ = benchmark_service.run_benchmark(request_two_instances, workers=1)
        parallel, _ = benchmark_service.run_benchmark(request_two_instances, workers=2)
        assert parallel.model_dump_json() == serial.model_dump_json()

    def test_report_json_round_trip(self, tmp_path, request_two_instances):
        """보고서 JSON 저장 후 다시 읽기"""
        report, _ = benchmark_service.run_benchmark(request_two_instances, workers=1)
        path = tmp_path / "report.json"
        report_crud.write_report(path, report)
        assert report_crud.read_report(path) == report

    def test_unknown_algorithm_rejected_before_running(self, small_config):
        """모르는 알고리즘은 실행 전에 거부"""
        request = BenchmarkRequest(configs=[small_config], algorithms=["girvan-newman"], instances_per_config=1)
        with pytest.raises(UnknownAlgorithmError) as exc_info:
            benchmark_service.run_benchmark(request, workers=1)
        assert exc_info.value.detail["valid"] == ALL_ALGORITHMS

    def test_request_rejects_repeated_algorithms(self, small_config):
        """같은 알고리즘을 두 번 요청할 수 없다"""
        with pytest.raises(ValueError):
            BenchmarkRequest(configs=[small_config], algorithms=["louvain", "louvain"])
