import argparse
import logging
from pathlib import Path

import numpy as np

from app.commands.common import add_output_argument, load_model, prepare_output_dir
from app.cruds import network_crud, partition_crud, report_crud
from app.run_logging import log_stage
from app.schemas.metrics import MetricOptions
from app.schemas.run import AnalysisManifest
from app.services.metrics_service import (
    embeddedness_histogram,
    profile_curves,
    profile_partition,
    size_distribution_curve,
)

logger = logging.getLogger(__name__)

OUTPUT_FILES = {
    "profiles": "profiles.csv",
    "curves": "curves.csv",
    "histogram": "embeddedness_histogram.csv",
    "manifest": "analysis.manifest.json",
}


def run_analyze(args: argparse.Namespace) -> int:
    """커뮤니티 프로파일, 로그 구간 곡선, embeddedness 히스토그램"""
    options = load_model(
        MetricOptions,
        args.config,
        {
            "bins_per_decade": args.bins_per_decade,
            "histogram_bins": args.histogram_bins,
            "distance_sampling_threshold": args.distance_sampling_threshold,
            "distance_sample_sources": args.distance_sample_sources,
            "seed": args.seed,
        },
    )
    network = network_crud.read_edges(Path(args.network))
    graph = network.graph
    partition = partition_crud.read_membership(Path(args.membership), graph.n, network.label_index())
    out = prepare_output_dir(args.out)

    with log_stage("cmd.analyze", n=graph.n, communities=partition.num_communities) as stage:
        profiles, embeddedness = profile_partition(graph, partition, options)
        curves = profile_curves(profiles, options.bins_per_decade)
        curves["size_distribution"] = size_distribution_curve(partition.sizes, options.bins_per_decade)
        histogram = embeddedness_histogram(embeddedness, options.histogram_bins)
        disconnected = sum(1 for profile in profiles if not profile.internally_connected)
        stage.set(disconnected=disconnected)

    report_crud.write_profiles(out / OUTPUT_FILES["profiles"], profiles)
    report_crud.write_curves(out / OUTPUT_FILES["curves"], curves)
    report_crud.write_histogram(out / OUTPUT_FILES["histogram"], histogram)
    manifest = AnalysisManifest(
        network=Path(args.network).name,
        membership=Path(args.membership).name,
        options=options,
        community_count=partition.num_communities,
        singleton_count=int(np.count_nonzero(partition.sizes == 1)),
        disconnected_communities=disconnected,
        isolated_nodes=int(np.count_nonzero(np.isnan(embeddedness))),
        files=dict(OUTPUT_FILES),
    )
    with open(out / OUTPUT_FILES["manifest"], "w", encoding="utf-8", newline="\n") as handle:
        handle.write(manifest.model_dump_json(indent=2))
        handle.write("\n")
    report_crud.write_timing(out / "analysis.timing.json", stage.duration_seconds, command="analyze")

    if disconnected:
        logger.warning(f"{disconnected} communities are not internally connected")
    logger.info(f"Analyzed {partition.num_communities} communities into {out}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("analyze", help="커뮤니티 메조스코픽 속성 분석")
    parser.add_argument("--network", required=True, help="간선 목록 파일")
    parser.add_argument("--membership", required=True, help="membership 파일")
    parser.add_argument("--config", help="MetricOptions JSON 파일")
    parser.add_argument("--bins-per-decade", dest="bins_per_decade", type=int)
    parser.add_argument("--histogram-bins", dest="histogram_bins", type=int)
    parser.add_argument(
        "--distance-sampling-threshold",
        dest="distance_sampling_threshold",
        type=int,
        help="이보다 큰 커뮤니티는 표본 BFS 로 평균 거리 근사",
    )
    parser.add_argument("--distance-sample-sources", dest="distance_sample_sources", type=int)
    parser.add_argument("--seed", type=int, help="표본 모드 시드")
    add_output_argument(parser)
    parser.set_defaults(handler=run_analyze)
