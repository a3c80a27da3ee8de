import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from app.errors import FileFormatError, GraphValidationError
from app.models.graph import Graph, build_graph
from app.schemas.run import GenerationManifest

logger = logging.getLogger(__name__)

EDGES_HEADER = "# lfrbench-edges v1"
MU_HEADER = "# lfrbench-mu v1"
NODES_PREFIX = "# nodes:"


@dataclass(frozen=True)
class LoadedNetwork:
    """읽어 들인 그래프. labels 는 원래 라벨 (노드 수 헤더가 없는 파일을 재번호한 경우에만)"""

    graph: Graph
    labels: Optional[list[str]] = None

    def label_index(self) -> Optional[dict[str, int]]:
        if self.labels is None:
            return None
        return {label: i for i, label in enumerate(self.labels)}


def _header_lines(path: Path) -> list[str]:
    lines = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            lines.append(line.rstrip("\n"))
    return lines


def _sorted_labels(values: np.ndarray) -> list[str]:
    """정수 라벨이면 숫자 순서, 아니면 사전 순서"""
    unique = sorted(set(values.tolist()))
    try:
        return [str(x) for x in sorted(unique, key=int)]
    except ValueError:
        return unique


class NetworkCRUD:
    """간선 목록, μ 표, 생성 manifest 파일 입출력"""

    def write_edges(self, path: Path, graph: Graph) -> None:
        """헤더 두 줄 뒤에 'u<TAB>v' (u < v, 정렬)"""
        body = "".join(f"{u}\t{v}\n" for u, v in graph.edges.tolist())
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(f"{EDGES_HEADER}\n{NODES_PREFIX} {graph.n}\n")
            handle.write(body)
        logger.info(f"Wrote {graph.m} edges to {path}")

    def read_edges(self, path: Path) -> LoadedNetwork:
        path = Path(path)
        if not path.is_file():
            raise FileFormatError(f"Edge list not found: {path}", path=str(path))

        n = None
        for line in _header_lines(path):
            if line.startswith(NODES_PREFIX):
                try:
                    n = int(line[len(NODES_PREFIX):].strip())
                except ValueError:
                    raise FileFormatError(f"Malformed node count header in {path}", path=str(path), line=line)

        try:
            frame = pd.read_csv(path, sep=r"\s+", comment="#", header=None, dtype=str, engine="python")
        except pd.errors.EmptyDataError:
            frame = pd.DataFrame(columns=[0, 1])
        if frame.shape[1] != 2:
            raise FileFormatError(f"Edge list rows must have exactly two columns: {path}", path=str(path))
        raw = frame.to_numpy(dtype=str)

        if n is not None:
            try:
                pairs = raw.astype(np.int64)
            except ValueError:
                raise FileFormatError(f"Edge list with a node header must use integer ids: {path}", path=str(path))
            try:
                return LoadedNetwork(graph=build_graph(n, pairs))
            except GraphValidationError as exc:
                exc.detail["path"] = str(path)
                raise

        labels = _sorted_labels(raw.reshape(-1)) if raw.size else []
        index = {label: i for i, label in enumerate(labels)}
        pairs = np.vectorize(index.__getitem__, otypes=[np.int64])(raw) if raw.size else np.zeros((0, 2), np.int64)
        logger.info(f"Remapped {len(labels)} node labels from {path}")
        return LoadedNetwork(graph=build_graph(len(labels), pairs), labels=labels)

    def write_mu_table(self, path: Path, mu_target: np.ndarray, mu_realized: np.ndarray) -> None:
        """'node<TAB>mu_target<TAB>mu_realized', 소수점 6 자리"""
        rows = "".join(
            f"{u}\t{target:.6f}\t{realized:.6f}\n"
            for u, (target, realized) in enumerate(zip(mu_target.tolist(), mu_realized.tolist()))
        )
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(f"{MU_HEADER}\n")
            handle.write(rows)

    def read_mu_table(self, path: Path) -> pd.DataFrame:
        frame = pd.read_csv(path, sep="\t", comment="#", header=None, names=["node", "mu_target", "mu_realized"])
        return frame

    def write_manifest(self, path: Path, manifest: GenerationManifest) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(manifest.model_dump_json(indent=2))
            handle.write("\n")

    def read_manifest(self, path: Path) -> GenerationManifest:
        with open(path, "r", encoding="utf-8") as handle:
            return GenerationManifest.model_validate_json(handle.read())


network_crud = NetworkCRUD()
