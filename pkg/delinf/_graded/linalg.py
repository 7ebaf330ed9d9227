"""
Exact linear algebra over the rationals, on sparse vectors with arbitrary keys.

Vectors are mappings from sortable keys to `Fraction`s. Row reduction is
delegated to sympy's sparse domain matrices over `QQ`.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from fractions import Fraction
from typing import Optional

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

from delinf._graded.spaces import Element
from delinf.errors import NotInImageError

Vector = Mapping[Hashable, Fraction]


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _column_keys(vectors: Iterable[Vector]) -> list[Hashable]:
    keys: set[Hashable] = set()
    for vector in vectors:
        keys.update(vector)
    return sorted(keys)  # type: ignore[type-var]


def _reduce(
    rows: Sequence[Vector], keys: Sequence[Hashable]
) -> tuple[list[Element], list[Hashable]]:
    """Reduced row echelon form of `rows` with columns ordered by `keys`."""
    position = {key: j for j, key in enumerate(keys)}
    data = {
        i: {position[key]: _to_qq(value) for key, value in row.items() if value}
        for i, row in enumerate(rows)
        if row
    }
    if not data:
        return [], []
    reduced, pivots = SDM(data, (len(rows), len(keys)), QQ).rref()
    result = [
        Element((keys[j], _from_qq(value)) for j, value in reduced[i].items())
        for i in sorted(reduced)
    ]
    return result, [keys[j] for j in pivots]


def rank(vectors: Sequence[Vector]) -> int:
    return len(_reduce(vectors, _column_keys(vectors))[1])


def kernel(columns: Sequence[Vector]) -> list[Element]:
    """
    Basis of the linear relations among `columns`.

    Returns:
        Coefficient vectors keyed by column position `j`, each satisfying
        `sum_j c[j] * columns[j] == 0`.
    """
    rows = _transpose(columns)
    reduced, pivots = _reduce(rows, list(range(len(columns))))
    pivot_set = set(pivots)
    basis = []
    for free in range(len(columns)):
        if free in pivot_set:
            continue
        vector = Element.unit(free)
        for row, pivot in zip(reduced, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def solve(columns: Sequence[Vector], target: Vector) -> Optional[Element]:
    """
    One solution `c` of `sum_j c[j] * columns[j] == target`, or `None`.

    Free variables are set to zero.
    """
    augmented = list(columns) + [target]
    rows = _transpose(augmented)
    n = len(columns)
    reduced, pivots = _reduce(rows, list(range(n + 1)))
    if n in pivots:
        return None
    solution = Element()
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row.get(n, 0)
    return solution


def _transpose(columns: Sequence[Vector]) -> list[Element]:
    rows: dict[Hashable, Element] = {}
    for j, column in enumerate(columns):
        for key, value in column.items():
            if value:
                rows.setdefault(key, Element())[j] = value
    return [rows[key] for key in sorted(rows)]  # type: ignore[type-var]


def combine(coefficients: Mapping[int, Fraction], vectors: Sequence[Vector]) -> Element:
    result = Element()
    for j, coef in coefficients.items():
        result.iadd_coef(coef, vectors[j])
    return result


class Subspace:
    """
    The span of a list of vectors, kept as a reduced echelon basis.

    Reduced echelon form makes `normal_form` a canonical representative
    modulo the subspace and `coordinates` a read-off at pivot keys.
    """

    def __init__(self, vectors: Iterable[Vector]):
        vectors = [v for v in vectors if v]
        self.basis, self.pivots = _reduce(vectors, _column_keys(vectors))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def normal_form(self, vector: Vector) -> Element:
        result = Element(vector)
        for row, pivot in zip(self.basis, self.pivots):
            value = result.get(pivot)
            if value:
                result.iadd_coef(-value, row)
        return result

    def contains(self, vector: Vector) -> bool:
        return not self.normal_form(vector)

    def coordinates(self, vector: Vector) -> list[Fraction]:
        """
        Coordinates of `vector` in the reduced basis.

        Raises:
            NotInImageError: If `vector` is not in the subspace.
        """
        coordinates = [Fraction(vector.get(pivot, 0)) for pivot in self.pivots]
        rebuilt = Element()
        for coef, row in zip(coordinates, self.basis):
            rebuilt.iadd_coef(coef, row)
        if rebuilt != Element(vector):
            raise NotInImageError("vector does not lie in the subspace")
        return coordinates


def cohomology_dimension(
    incoming: Sequence[Vector], outgoing: Sequence[Vector], dimension: int
) -> int:
    """
    Dimension of `ker(outgoing) / im(incoming)` at a space of the given dimension.

    Args:
        incoming: Images of the basis of the previous space.
        outgoing: Images of the basis of this space.
        dimension: The dimension of this space.
    """
    return dimension - rank(outgoing) - rank(incoming)


__all__ = [
    "Subspace",
    "cohomology_dimension",
    "combine",
    "kernel",
    "rank",
    "solve",
]
