import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plancherel.partitions import (
    HalfPointSet,
    Partition,
    descent_set,
    dimension,
    dimension_hook,
    enumerate_partitions,
    frobenius,
    frobenius_det,
    modified_frobenius,
    modified_frobenius_symdiff,
    partition_count,
    plancherel_weight,
    poissonized_weight,
)

partitions = st.lists(st.integers(1, 9), max_size=8).map(lambda xs: Partition(tuple(sorted(xs, reverse=True))))


def test_rejects_increasing_parts():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


@given(partitions)
def test_conjugate_is_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().n == lam.n


@given(partitions)
def test_frobenius_encodings_agree(lam):
    assert modified_frobenius(lam) == modified_frobenius_symdiff(lam)
    f = frobenius(lam)
    # n = sum of (p_i + q_i + 1)
    assert sum(p + q + 1 for p, q in zip(f.p, f.q)) == lam.n


@given(partitions)
def test_frobenius_det_matches_hook(lam):
    assert frobenius_det(lam) * math.factorial(lam.n) == dimension_hook(lam)
    assert dimension(lam) == dimension_hook(lam)


@given(partitions)
def test_modified_frobenius_balanced(lam):
    # as many positive as negative coordinates
    vals = modified_frobenius(lam).values
    assert sum(v > 0 for v in vals) == sum(v < 0 for v in vals)


def test_descent_set_examples():
    lam = Partition((3, 1))
    d = descent_set(lam, (-5, 5))
    assert d.points == (-5, -4, -3, -1, 2)
    assert -10 in d
    assert Partition(()).conjugate() == Partition()
    assert descent_set(Partition(), (-3, 3)).points == (-3, -2, -1)


def test_small_dimensions():
    assert dimension_hook(Partition((2, 1))) == 2
    assert dimension_hook(Partition((3, 2))) == 5
    assert dimension_hook(Partition((4, 2, 1))) == 35
    assert dimension_hook(Partition((3, 3, 3))) == 42


@pytest.mark.parametrize("n", range(0, 16))
def test_enumeration_counts_and_normalization(n):
    parts = list(enumerate_partitions(n))
    assert len(parts) == partition_count(n) == len(set(parts))
    assert sum(plancherel_weight(lam) for lam in parts) == 1
    assert sum(dimension_hook(lam) ** 2 for lam in parts) == math.factorial(n)


def test_partition_count_values():
    assert [partition_count(n) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert partition_count(40) == 37338


def test_poissonized_weight_sums_to_one():
    theta = 1.3
    total = sum(poissonized_weight(lam, theta) for n in range(30) for lam in enumerate_partitions(n))
    assert total == pytest.approx(1.0, abs=1e-12)
    assert poissonized_weight(Partition(), 0.0) == 1.0
    assert poissonized_weight(Partition((1,)), 0.0) == 0.0


def test_half_point_set_validation():
    hs = HalfPointSet.from_values([Fraction(1, 2), -1.5])
    assert hs.values == (Fraction(-3, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        HalfPointSet.from_values([1])
    with pytest.raises(ValueError):
        HalfPointSet((1, 1))
