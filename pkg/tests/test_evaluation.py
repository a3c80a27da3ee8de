import math

import numpy as np
import pytest
from sklearn.metrics import normalized_mutual_info_score

from app.errors import PartitionMismatchError
from app.models.partition import Partition
from app.services.evaluation_service import confusion_matrix, nmi


def brute_force_nmi(a: Partition, b: Partition) -> float:
    n = a.n
    numerator = 0.0
    for i in range(a.num_communities):
        for j in range(b.num_communities):
            n_ij = int(np.count_nonzero((a.membership == i) & (b.membership == j)))
            if n_ij:
                numerator += n_ij * math.log(n_ij * n / (a.sizes[i] * b.sizes[j]))
    denominator = sum(x * math.log(x / n) for x in a.sizes) + sum(x * math.log(x / n) for x in b.sizes)
    if denominator == 0.0:
        return 1.0 if a.same_as(b) else 0.0
    return -2.0 * numerator / denominator


class TestConfusionMatrix:
    def test_counts(self):
        """혼동 행렬 값"""
        cm = confusion_matrix(Partition([0, 0, 1, 1, 1]), Partition([0, 1, 1, 1, 2]))
        assert cm.to_dense().tolist() == [[1, 1, 0], [0, 2, 1]]
        assert cm.total == 5
        assert cm.row_sums.tolist() == [2, 3]
        assert cm.column_sums.tolist() == [1, 3, 1]

    def test_mismatched_sizes(self):
        """노드 수가 다른 분할"""
        with pytest.raises(PartitionMismatchError):
            confusion_matrix(Partition([0, 0]), Partition([0, 0, 1]))


class TestNMI:
    def test_identical_up_to_renaming(self):
        """이름만 다른 같은 분할은 1"""
        assert nmi(Partition([0, 0, 1, 1, 2]), Partition([1, 1, 0, 0, 2]).canonical()) == 1.0
        assert nmi(Partition.singletons(4), Partition.singletons(4)) == 1.0
        assert nmi(Partition.single_block(4), Partition.single_block(4)) == 1.0

    def test_single_block_scores_zero(self):
        """한 덩어리 분할은 0"""
        assert nmi(Partition.single_block(6), Partition([0, 0, 0, 1, 1, 1])) == 0.0
        assert nmi(Partition.single_block(4), Partition.singletons(4)) == 0.0

    def test_against_brute_force(self):
        """정의대로 계산한 값과 비교"""
        rng = np.random.default_rng(1)
        for _ in range(500):
            n = int(rng.integers(2, 13))
            a = Partition.from_labels(rng.integers(0, int(rng.integers(1, n + 1)), size=n))
            b = Partition.from_labels(rng.integers(0, int(rng.integers(1, n + 1)), size=n))
            expected = min(1.0, max(0.0, brute_force_nmi(a, b)))
            assert nmi(a, b) == pytest.approx(expected, abs=1e-12)

    def test_symmetric(self):
        """인자 순서와 무관"""
        rng = np.random.default_rng(2)
        for _ in range(100):
            a = Partition.from_labels(rng.integers(0, 4, size=20))
            b = Partition.from_labels(rng.integers(0, 6, size=20))
            assert nmi(a, b) == nmi(b, a)

    def test_node_relabeling_invariant(self):
        """노드 번호를 같이 바꿔도 같은 값"""
        rng = np.random.default_rng(3)
        a = Partition.from_labels(rng.integers(0, 5, size=30))
        b = Partition.from_labels(rng.integers(0, 3, size=30))
        permutation = rng.permutation(30)
        assert nmi(a.relabel_nodes(permutation), b.relabel_nodes(permutation)) == nmi(a, b)

    def test_against_sklearn(self):
        """scikit-learn 과 비교"""
        rng = np.random.default_rng(4)
        for _ in range(50):
            a = Partition.from_labels(rng.integers(0, 5, size=40))
            b = Partition.from_labels(rng.integers(0, 7, size=40))
            if a.num_communities < 2 or b.num_communities < 2:
                continue
            expected = normalized_mutual_info_score(a.membership, b.membership, average_method="arithmetic")
            assert nmi(a, b) == pytest.approx(expected, abs=1e-10)

    def test_errors(self):
        """정의되지 않는 입력"""
        with pytest.raises(PartitionMismatchError):
            nmi(Partition([0, 1]), Partition([0, 1, 1]))
        with pytest.raises(PartitionMismatchError):
            nmi(Partition([0]), Partition([0]))
