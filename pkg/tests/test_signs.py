import random
from itertools import permutations
from math import comb

import pytest

from delinf._graded.signs import (
    canonical_order,
    koszul_sign,
    partition_sign,
    set_partitions,
    unshuffles,
)
from delinf.errors import DegreeError


class TestKoszulSign:
    @pytest.mark.parametrize(
        ("degrees", "permutation", "expected"),
        [
            ([1, 1], [1, 0], -1),
            ([0, 1], [1, 0], 1),
            ([1, 0], [1, 0], 1),
            ([1, 1, 1], [2, 0, 1], 1),
            ([1, 1, 1], [2, 1, 0], -1),
            ([2, 3, 5], [0, 1, 2], 1),
        ],
    )
    def test_sign(self, degrees: list[int], permutation: list[int], expected: int):
        assert koszul_sign(degrees, permutation) == expected

    def test_rejects_non_permutation(self):
        with pytest.raises(DegreeError):
            koszul_sign([1, 1], [0, 0])

        with pytest.raises(DegreeError):
            koszul_sign([1, 1], [0])

    def test_multiplicative_over_s4(self):
        rng = random.Random(11)
        for _ in range(4):
            degrees = [rng.randint(-2, 3) for _ in range(4)]
            for sigma in permutations(range(4)):
                permuted = [degrees[p] for p in sigma]
                for tau in permutations(range(4)):
                    composite = [sigma[p] for p in tau]
                    assert koszul_sign(degrees, composite) == koszul_sign(
                        degrees, sigma
                    ) * koszul_sign(permuted, tau)


class TestUnshuffles:
    def test_counts(self):
        assert len(list(unshuffles(2, 1))) == 3
        assert len(list(unshuffles(2, 2))) == 6
        assert list(unshuffles(0, 2)) == [(0, 1)]

    @pytest.mark.parametrize(("i", "j"), [(i, j) for i in range(9) for j in range(9 - i)])
    def test_binomial_counts(self, i: int, j: int):
        assert len(list(unshuffles(i, j))) == comb(i + j, i)

    def test_blocks_are_increasing(self):
        for permutation in unshuffles(2, 3):
            head, tail = permutation[:2], permutation[2:]
            assert list(head) == sorted(head)
            assert list(tail) == sorted(tail)


class TestSetPartitions:
    @pytest.mark.parametrize(("n", "bell"), [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15)])
    def test_bell_numbers(self, n: int, bell: int):
        assert len(list(set_partitions(n))) == bell

    def test_blocks_ordered_by_least_element(self):
        for blocks in set_partitions(4):
            firsts = [block[0] for block in blocks]
            assert firsts == sorted(firsts)
            assert sorted(p for block in blocks for p in block) == [0, 1, 2, 3]

    def test_partition_sign(self):
        assert partition_sign([1, 1, 1], ((0, 2), (1,))) == -1
        assert partition_sign([1, 0, 1], ((0, 2), (1,))) == 1


class TestCanonicalOrder:
    def test_sorts_with_sign(self):
        def odd(_key: object) -> int:
            return 1

        assert canonical_order(["b", "a"], odd) == (-1, ("a", "b"))
        assert canonical_order(["a", "b"], odd) == (1, ("a", "b"))

    def test_repeated_odd_key_vanishes(self):
        assert canonical_order(["a", "a"], lambda _key: 1) == (0, ())

    def test_repeated_even_key_survives(self):
        assert canonical_order(["a", "a"], lambda _key: 0) == (1, ("a", "a"))
