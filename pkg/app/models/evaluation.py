from dataclasses import dataclass

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class ConfusionMatrix:
    """N_ij = |A 의 커뮤니티 i ∩ B 의 커뮤니티 j| (희소 저장)"""

    counts: sparse.csr_matrix

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel().astype(np.int64)

    @property
    def column_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=0)).ravel().astype(np.int64)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def to_dense(self) -> np.ndarray:
        return self.counts.toarray().astype(np.int64)

    def nonzero_cells(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(행, 열, 값) 을 (행, 열) 오름차순으로"""
        coo = self.counts.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return coo.row[order], coo.col[order], coo.data[order].astype(np.int64)
