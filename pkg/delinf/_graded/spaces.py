from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union

from delinf._graded.scalars import ScalarLike, as_scalar, format_scalar
from delinf.errors import DegreeError, SpaceMismatchError

Key = Hashable


class Element(dict):
    """
    A sparse vector: a mapping from basis keys to nonzero rational coefficients.

    Keys are basis positions for finite spaces and structured tuples for the
    infinite dimensional spaces of polynomial forms. Zero coefficients are
    never stored, so two elements are equal exactly when they are equal as
    dictionaries.
    """

    def __init__(
        self,
        data: Union[Mapping[Key, ScalarLike], Iterable[tuple[Key, ScalarLike]]] = (),
    ):
        super().__init__()
        items = data.items() if isinstance(data, Mapping) else data
        for key, value in items:
            self.add_term(key, as_scalar(value))

    @classmethod
    def unit(cls, key: Key) -> Element:
        result = cls()
        dict.__setitem__(result, key, Fraction(1))
        return result

    def add_term(self, key: Key, coef: Fraction) -> None:
        if not coef:
            return
        value = self.get(key, 0) + coef
        if value:
            dict.__setitem__(self, key, value)
        else:
            del self[key]

    def iadd_coef(self, coef: Fraction | int, other: Mapping[Key, Fraction]) -> Element:
        """In-place `self += coef * other`."""
        if not coef:
            return self
        for key, value in other.items():
            self.add_term(key, coef * value)
        return self

    def __setitem__(self, key: Key, value: ScalarLike) -> None:
        value = as_scalar(value)
        if value:
            dict.__setitem__(self, key, value)
        elif key in self:
            del self[key]

    def copy(self) -> Element:
        result = Element()
        dict.update(result, self)
        return result

    def scaled(self, coef: Fraction | int) -> Element:
        result = Element()
        if coef:
            for key, value in self.items():
                dict.__setitem__(result, key, coef * value)
        return result

    def __add__(self, other: Mapping[Key, Fraction]) -> Element:
        return self.copy().iadd_coef(1, other)

    def __sub__(self, other: Mapping[Key, Fraction]) -> Element:
        return self.copy().iadd_coef(-1, other)

    def __neg__(self) -> Element:
        return self.scaled(-1)

    def __mul__(self, coef: Fraction | int) -> Element:
        return self.scaled(coef)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = ", ".join(f"{key!r}: {format_scalar(value)}" for key, value in self.items())
        return f"Element({{{terms}}})"


@dataclass(frozen=True)
class BasisElement:
    """
    A homogeneous basis vector of a shifted graded space.

    Args:
        name: A unique label.
        degree: The shifted degree.
        weight: The filtration weight, at least 1.
    """

    name: str
    degree: int
    weight: int = 1

    def __post_init__(self):
        if not self.name:
            raise ValueError("basis elements need a name")
        if self.weight < 1:
            raise ValueError(f"weight of {self.name} must be at least 1")


@dataclass(frozen=True)
class GradedSpace:
    """
    A finite dimensional shifted graded vector space with a weight filtration.

    Keys of elements are positions in `basis`. Everything of total weight at
    least `nilpotency` vanishes, so `nilpotency` also bounds the arity of
    nonzero structure maps.
    """

    basis: tuple[BasisElement, ...]
    nilpotency: int
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if self.nilpotency < 1:
            raise ValueError("nilpotency must be at least 1")
        index: dict[str, int] = {}
        for position, element in enumerate(self.basis):
            if element.name in index:
                raise ValueError(f"duplicate basis name {element.name!r}")
            if element.weight >= self.nilpotency:
                raise ValueError(
                    f"weight {element.weight} of {element.name!r} must be less than "
                    f"the nilpotency {self.nilpotency}"
                )
            index[element.name] = position
        object.__setattr__(self, "_index", index)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def arity_bound(self) -> int:
        return max(1, self.nilpotency - 1)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(element.degree for element in self.basis)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        return tuple(element.weight for element in self.basis)

    def degree(self, key: int) -> int:
        return self.degrees[key]

    def weight(self, key: int) -> int:
        return self.weights[key]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SpaceMismatchError(f"{name!r} is not a basis element") from None

    def name(self, key: int) -> str:
        return self.basis[key].name

    def keys_of_degree(self, degree: int) -> list[int]:
        return [key for key, d in enumerate(self.degrees) if d == degree]

    def element(self, coefficients: Mapping[str, ScalarLike]) -> Element:
        """Builds an element from a mapping of basis names to coefficients."""
        return Element((self.index(name), value) for name, value in coefficients.items())

    def format(self, x: Mapping[int, Fraction]) -> dict[str, str]:
        return {self.name(key): format_scalar(value) for key, value in sorted(x.items())}

    def check(self, x: Mapping[Key, Fraction]) -> None:
        for key in x:
            if not isinstance(key, int) or not 0 <= key < self.dimension:
                raise SpaceMismatchError(f"{key!r} is not a basis position of this space")

    def degree_of(self, x: Mapping[int, Fraction]) -> int:
        """
        The degree of a nonzero homogeneous element.

        Raises:
            DegreeError: If `x` is zero or not homogeneous.
        """
        degrees = {self.degrees[key] for key in x}
        if len(degrees) != 1:
            raise DegreeError(f"element is not homogeneous: degrees {sorted(degrees)}")
        return degrees.pop()

    def weight_of(self, x: Mapping[int, Fraction]) -> int:
        """Least weight in the support of `x`; zero sits in every filtration level."""
        if not x:
            return self.nilpotency
        return min(self.weights[key] for key in x)

    def require_degree(self, x: Mapping[int, Fraction], degree: int) -> None:
        for key in x:
            if self.degrees[key] != degree:
                raise DegreeError(
                    f"{self.name(key)} has degree {self.degrees[key]}, expected {degree}"
                )

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.dimension))


__all__ = ["BasisElement", "Element", "GradedSpace", "Key"]
