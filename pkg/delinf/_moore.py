"""
Homotopy groups of simplicial vector spaces through the normalized Moore complex.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

from delinf._graded.linalg import combine, kernel, rank
from delinf._graded.spaces import Element

Level = Callable[[int], Sequence[Element]]
Face = Callable[[int, int, Element], Element]


def normalized(level: Level, face: Face, m: int) -> list[Element]:
    """Basis of `N_m`, the intersection of the kernels of the faces `d_1 .. d_m`."""
    basis = list(level(m))
    if m == 0 or not basis:
        return basis
    columns = []
    for vector in basis:
        column = Element()
        for j in range(1, m + 1):
            for key, c in face(m, j, vector).items():
                column.add_term((j, key), c)
        columns.append(column)
    return [combine(relation, basis) for relation in kernel(columns)]


def moore_homology_dimension(level: Level, face: Face, i: int) -> int:
    """
    Dimension of `pi_i`, the homology of the normalized Moore complex with
    boundary `d_0`, at level `i`.
    """
    cycles_space = normalized(level, face, i)
    boundary_rank_out = rank([face(i, 0, v) for v in cycles_space]) if i else 0
    above = normalized(level, face, i + 1)
    boundary_rank_in = rank([face(i + 1, 0, v) for v in above])
    return len(cycles_space) - boundary_rank_out - boundary_rank_in
