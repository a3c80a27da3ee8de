import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from app.errors import FileFormatError, PartitionMismatchError
from app.models.partition import Partition

logger = logging.getLogger(__name__)

MEMBERSHIP_HEADER = "# lfrbench-membership v1"


class PartitionCRUD:
    """membership 파일 ('node<TAB>community', 노드 id 순) 입출력"""

    def write_membership(self, path: Path, partition: Partition, labels: Optional[list[str]] = None) -> None:
        """labels 가 있으면 노드 열에 원래 라벨을 쓴다 (노드 id 순서는 그대로)"""
        nodes = labels if labels is not None else range(partition.n)
        body = "".join(f"{u}\t{c}\n" for u, c in zip(nodes, partition.membership.tolist()))
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(f"{MEMBERSHIP_HEADER}\n")
            handle.write(body)
        logger.info(f"Wrote membership of {partition.n} nodes ({partition.num_communities} communities) to {path}")

    def read_membership(
        self,
        path: Path,
        n: int,
        label_index: Optional[dict[str, int]] = None,
    ) -> Partition:
        """
        n 개 노드를 모두 한 번씩 덮는 membership 을 읽는다.

        label_index 가 있으면 노드 열을 원래 라벨로 보고 재번호한다.
        커뮤니티 라벨은 임의 값이어도 되며 노드 순서의 첫 등장 순으로 다시 매긴다.
        """
        path = Path(path)
        if not path.is_file():
            raise FileFormatError(f"Membership file not found: {path}", path=str(path))
        try:
            frame = pd.read_csv(path, sep=r"\s+", comment="#", header=None, dtype=str, engine="python")
        except pd.errors.EmptyDataError:
            frame = pd.DataFrame(columns=[0, 1])
        if frame.shape[1] != 2:
            raise FileFormatError(f"Membership rows must have exactly two columns: {path}", path=str(path))

        raw_nodes = frame[0].tolist()
        if label_index is not None:
            unknown = [label for label in raw_nodes if label not in label_index]
            if unknown:
                raise PartitionMismatchError(
                    f"Membership names node '{unknown[0]}' which is not in the network", node=unknown[0]
                )
            nodes = np.asarray([label_index[label] for label in raw_nodes], dtype=np.int64)
        else:
            try:
                nodes = np.asarray(raw_nodes, dtype=np.int64)
            except ValueError:
                raise FileFormatError(f"Membership node ids must be integers: {path}", path=str(path))

        if nodes.size and (nodes.min() < 0 or nodes.max() >= n):
            bad = int(nodes[(nodes < 0) | (nodes >= n)][0])
            raise PartitionMismatchError(f"Membership node {bad} is outside the network", node=bad, n=n)
        counts = np.bincount(nodes, minlength=n) if nodes.size else np.zeros(n, dtype=np.int64)
        duplicated = np.flatnonzero(counts > 1)
        if duplicated.size:
            raise PartitionMismatchError(
                f"Node {int(duplicated[0])} appears more than once", node=int(duplicated[0])
            )
        missing = np.flatnonzero(counts == 0)
        if missing.size:
            raise PartitionMismatchError(
                f"Membership does not cover node {int(missing[0])}", node=int(missing[0]), missing=int(missing.size)
            )

        labels = np.empty(n, dtype=object)
        labels[nodes] = frame[1].tolist()
        return Partition.from_labels(labels.astype(str))


partition_crud = PartitionCRUD()
