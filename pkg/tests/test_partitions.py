import pytest
from hypothesis import given, strategies as st

from vertexid.oracle import partition_count
from vertexid.partitions import (
    Partition,
    PartitionError,
    common_subpartitions,
    empty,
    partitions_of,
    partitions_up_to,
    subpartitions,
)


def part(*xs):
    return Partition(xs)


small_partitions = st.integers(min_value=0, max_value=8).map(
    lambda n: partitions_of(n)
).flatmap(st.sampled_from)


def test_constructor_rejects_bad_sequences():
    with pytest.raises(PartitionError):
        Partition([1, 2])
    with pytest.raises(PartitionError):
        Partition([2, 0])


def test_transpose_examples():
    assert part(5, 3, 2, 2, 1).transpose() == part(5, 4, 2, 1, 1)
    assert empty().transpose() == empty()
    assert part(3).transpose() == part(1, 1, 1)


@given(small_partitions)
def test_transpose_involution(lam):
    assert lam.transpose().transpose() == lam


def test_arm_leg_hook_example():
    lam = part(5, 3, 2, 2, 1)
    assert lam.arm(2, 2) == 2
    assert lam.leg(2, 2) == 1
    assert lam.hook(2, 2) == 4


def test_single_box_and_row():
    assert part(1).arm(1, 1) == 0
    assert part(1).leg(1, 1) == 0
    assert part(1).hook(1, 1) == 1
    for n in range(1, 7):
        assert Partition([n]).hook(1, 1) == n


def test_invalid_box_raises():
    with pytest.raises(PartitionError):
        part(2, 1).hook(1, 3)
    with pytest.raises(PartitionError):
        part(2, 1).arm(3, 1)


@given(small_partitions)
def test_hook_is_arm_plus_leg_plus_one(lam):
    for (i, j) in lam.boxes():
        assert lam.hook(i, j) == lam.arm(i, j) + lam.leg(i, j) + 1


def test_kappa_values():
    assert empty().kappa() == 0
    assert part(1).kappa() == 0
    assert part(2).kappa() == 2


@given(small_partitions)
def test_kappa_antisymmetric(lam):
    assert lam.transpose().kappa() == -lam.kappa()


def test_norm_sq():
    assert empty().norm_sq() == 0
    assert part(2, 1).norm_sq() == 5
    assert part(5, 3, 2, 2, 1).norm_sq() == 43


def test_enumeration_counts_and_order():
    assert list(partitions_of(0)) == [empty()]
    assert len(partitions_of(4)) == 5
    assert len(partitions_of(10)) == 42
    # lexicographically decreasing, (n) first
    assert [p.parts for p in partitions_of(4)] == [
        (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)
    ]


@pytest.mark.parametrize("n", range(0, 21))
def test_enumeration_matches_pentagonal_recurrence(n):
    assert len(partitions_of(n)) == partition_count(n)


def test_hook_multiset():
    assert part(1).hooks() == [1]
    assert sorted(part(2, 1).hooks()) == [1, 1, 3]


@given(small_partitions)
def test_hooks_transpose_invariant(lam):
    assert sorted(lam.hooks()) == sorted(lam.transpose().hooks())
    assert len(lam.hooks()) == lam.size


def test_json_round_trip():
    lam = part(5, 3, 2, 2, 1)
    assert Partition.from_json(lam.to_json()) == lam
    assert lam.to_json() == [5, 3, 2, 2, 1]


def test_parse():
    assert Partition.parse("5,3,2,2,1") == part(5, 3, 2, 2, 1)
    assert Partition.parse("") == empty()
    with pytest.raises(PartitionError):
        Partition.parse("1,2")
    with pytest.raises(PartitionError):
        Partition.parse("a,b")


def test_subpartitions_of_column():
    got = {p.parts for p in subpartitions(part(2, 1))}
    assert got == {(), (1,), (2,), (1, 1), (2, 1)}


def test_common_subpartitions():
    got = {p.parts for p in common_subpartitions(part(2), part(1, 1))}
    assert got == {(), (1,)}


def test_partitions_up_to_sizes():
    pool = partitions_up_to(3)
    assert [p.size for p in pool] == [0, 1, 2, 2, 3, 3, 3]
