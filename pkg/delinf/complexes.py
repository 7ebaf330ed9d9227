"""
Finite ordered simplicial complexes and the order preserving maps between them.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from delinf.errors import SpaceMismatchError

Simplex = tuple[int, ...]
OrdinalMap = tuple[int, ...]


def faces_of(vertices: Sequence[int]) -> list[Simplex]:
    """All nonempty faces of a simplex, by dimension then lexicographically."""
    vertices = sorted(vertices)
    return [face for k in range(1, len(vertices) + 1) for face in combinations(vertices, k)]


def coface_map(n: int, j: int) -> OrdinalMap:
    """The injection `[n-1] -> [n]` skipping `j`."""
    if not 0 <= j <= n:
        raise ValueError(f"coface index {j} out of range for [{n}]")
    return tuple(i if i < j else i + 1 for i in range(n))


def codegeneracy_map(n: int, j: int) -> OrdinalMap:
    """The surjection `[n+1] -> [n]` hitting `j` twice."""
    if not 0 <= j <= n:
        raise ValueError(f"codegeneracy index {j} out of range for [{n}]")
    return tuple(i if i <= j else i - 1 for i in range(n + 2))


@dataclass(frozen=True)
class FinComplex:
    """
    A finite ordered simplicial complex on vertices `0 .. vertices - 1`.

    Simplices are increasing vertex tuples, kept closed under faces and
    ordered by dimension then lexicographically.
    """

    vertices: int
    simplices: tuple[Simplex, ...]
    _position: dict[Simplex, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        closed: set[Simplex] = set()
        for simplex in self.simplices:
            simplex = tuple(simplex)
            if list(simplex) != sorted(set(simplex)):
                raise ValueError(f"{simplex} is not an increasing vertex tuple")
            if simplex and not (0 <= simplex[0] and simplex[-1] < self.vertices):
                raise ValueError(f"{simplex} uses vertices outside 0..{self.vertices - 1}")
            closed.update(faces_of(simplex))
        ordered = tuple(sorted(closed, key=lambda s: (len(s), s)))
        object.__setattr__(self, "simplices", ordered)
        object.__setattr__(self, "_position", {s: p for p, s in enumerate(ordered)})

    @classmethod
    def simplex(cls, n: int) -> FinComplex:
        return cls(n + 1, (tuple(range(n + 1)),))

    @classmethod
    def boundary(cls, n: int) -> FinComplex:
        """The boundary of the standard `n`-simplex."""
        top = tuple(range(n + 1))
        return cls(n + 1, tuple(s for s in faces_of(top) if len(s) <= n))

    @classmethod
    def horn(cls, n: int, k: int) -> FinComplex:
        """The horn of the standard `n`-simplex: its boundary minus the face opposite `k`."""
        if not 0 <= k <= n:
            raise ValueError(f"horn vertex {k} out of range for the {n}-simplex")
        top = tuple(range(n + 1))
        opposite = tuple(v for v in top if v != k)
        return cls(n + 1, tuple(s for s in faces_of(top) if len(s) <= n and s != opposite))

    @classmethod
    def from_maximal(cls, vertices: int, maximal: Iterable[Sequence[int]]) -> FinComplex:
        return cls(vertices, tuple(tuple(sorted(s)) for s in maximal))

    @classmethod
    def nerve_of_product(cls, m: int, n: int) -> FinComplex:
        """
        The nerve of the poset `[m] x [n]`; vertex `(a, b)` is numbered
        `a * (n + 1) + b`.
        """
        paths: list[Simplex] = []
        for rises in combinations(range(m + n), m):
            a = b = 0
            path = [0]
            for step in range(m + n):
                if step in rises:
                    a += 1
                else:
                    b += 1
                path.append(a * (n + 1) + b)
            paths.append(tuple(path))
        return cls((m + 1) * (n + 1), tuple(paths))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def index(self, simplex: Simplex) -> int:
        try:
            return self._position[simplex]
        except KeyError:
            raise SpaceMismatchError(f"{simplex} is not a simplex of this complex") from None

    def contains(self, simplex: Simplex) -> bool:
        return simplex in self._position

    def of_dimension(self, k: int) -> list[Simplex]:
        return [s for s in self.simplices if len(s) == k + 1]

    @cached_property
    def maximal(self) -> tuple[Simplex, ...]:
        facets = {
            face for s in self.simplices if len(s) > 1 for face in combinations(s, len(s) - 1)
        }
        return tuple(s for s in self.simplices if s not in facets)


@dataclass(frozen=True)
class SimplicialMap:
    """
    An order preserving simplicial map, given on vertices.

    Raises:
        SpaceMismatchError: If a simplex is not sent monotonically onto a
            simplex of the target.
    """

    source: FinComplex
    target: FinComplex
    vertex_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))
        if len(self.vertex_map) != self.source.vertices:
            raise SpaceMismatchError("a simplicial map needs one image per source vertex")
        for simplex in self.source.maximal:
            images = [self.vertex_map[v] for v in simplex]
            if images != sorted(images):
                raise SpaceMismatchError(f"map is not order preserving on {simplex}")
            if not self.target.contains(tuple(sorted(set(images)))):
                raise SpaceMismatchError(f"image of {simplex} is not a simplex of the target")

    @classmethod
    def ordinal(cls, theta: OrdinalMap, target: int) -> SimplicialMap:
        """The map `Delta^m -> Delta^target` induced by an ordinal map `theta`."""
        return cls(FinComplex.simplex(len(theta) - 1), FinComplex.simplex(target), theta)

    @classmethod
    def inclusion(cls, sub: FinComplex, ambient: FinComplex) -> SimplicialMap:
        return cls(sub, ambient, tuple(range(sub.vertices)))

    def image(self, simplex: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in simplex}))

    def is_injective_on(self, simplex: Simplex) -> bool:
        return len({self.vertex_map[v] for v in simplex}) == len(simplex)


def product_map(
    m: int, n: int, theta_m: OrdinalMap, theta_n: OrdinalMap
) -> SimplicialMap:
    """
    The map `N([m'] x [n']) -> N([m] x [n])` induced by two ordinal maps
    `[m'] -> [m]` and `[n'] -> [n]`.
    """
    m_source, n_source = len(theta_m) - 1, len(theta_n) - 1
    vertex_map = tuple(
        theta_m[a] * (n + 1) + theta_n[b]
        for a in range(m_source + 1)
        for b in range(n_source + 1)
    )
    return SimplicialMap(
        FinComplex.nerve_of_product(m_source, n_source),
        FinComplex.nerve_of_product(m, n),
        vertex_map,
    )


__all__ = [
    "FinComplex",
    "OrdinalMap",
    "Simplex",
    "SimplicialMap",
    "codegeneracy_map",
    "coface_map",
    "faces_of",
    "product_map",
]
