"""
Koszul signs and the combinatorics of symmetric tensors.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterator, Sequence
from itertools import combinations

from delinf.errors import DegreeError


def koszul_sign(degrees: Sequence[int], permutation: Sequence[int]) -> int:
    """
    Sign acquired by reordering homogeneous elements of the given degrees.

    `permutation[k]` is the index of the element that ends up in position `k`,
    so that `v_0 ... v_{n-1} = sign * v_{p[0]} ... v_{p[n-1]}` in the free
    graded commutative algebra.
    """
    n = len(degrees)
    if len(permutation) != n or sorted(permutation) != list(range(n)):
        raise DegreeError(f"{tuple(permutation)} is not a permutation of {n} elements")
    sign = 1
    for a in range(n):
        pa = permutation[a]
        if not degrees[pa] % 2:
            continue
        for b in range(a + 1, n):
            pb = permutation[b]
            if pa > pb and degrees[pb] % 2:
                sign = -sign
    return sign


def unshuffles(i: int, j: int) -> Iterator[tuple[int, ...]]:
    """
    Permutations of `i + j` elements whose first `i` and last `j` entries are
    increasing.
    """
    n = i + j
    for head in combinations(range(n), i):
        chosen = set(head)
        yield head + tuple(p for p in range(n) if p not in chosen)


def set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """
    Unordered partitions of `range(n)` into nonempty blocks.

    Blocks are increasing and ordered by their least element.
    """
    if n == 0:
        yield ()
        return

    def grow(index: int, blocks: list[list[int]]) -> Iterator[tuple[tuple[int, ...], ...]]:
        if index == n:
            yield tuple(tuple(block) for block in blocks)
            return
        for block in blocks:
            block.append(index)
            yield from grow(index + 1, blocks)
            block.pop()
        blocks.append([index])
        yield from grow(index + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


def partition_sign(
    degrees: Sequence[int], blocks: Sequence[Sequence[int]]
) -> int:
    return koszul_sign(degrees, [p for block in blocks for p in block])


def canonical_order(
    keys: Sequence[Hashable], degree: Callable[[Hashable], int]
) -> tuple[int, tuple[Hashable, ...]]:
    """
    Sorts basis keys into their canonical symmetric order.

    Returns:
        The Koszul sign of the sorting permutation and the sorted keys, or
        `(0, ())` when an odd key repeats.
    """
    order = sorted(range(len(keys)), key=lambda p: keys[p])  # type: ignore[index]
    ordered = tuple(keys[p] for p in order)
    degrees = [degree(key) for key in keys]
    for a in range(1, len(ordered)):
        if ordered[a] == ordered[a - 1] and degree(ordered[a]) % 2:
            return 0, ()
    return koszul_sign(degrees, order), ordered


__all__ = [
    "canonical_order",
    "koszul_sign",
    "partition_sign",
    "set_partitions",
    "unshuffles",
]
