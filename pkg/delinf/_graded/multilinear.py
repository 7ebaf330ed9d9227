from __future__ import annotations

from collections.abc import Callable, Hashable, Iterator, Mapping, Sequence
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Optional

from delinf._graded.signs import canonical_order
from delinf._graded.spaces import Element, GradedSpace
from delinf.errors import DegreeError

MultiIndex = tuple[int, ...]
KeyFunction = Callable[[tuple[Hashable, ...]], Element]


def multilinear_expand(on: KeyFunction, args: Sequence[Mapping[Hashable, Fraction]]) -> Element:
    """
    Evaluates a multilinear map, known on tuples of basis keys, on vectors.
    """
    result = Element()
    if any(not arg for arg in args):
        return result
    for combo in product(*(arg.items() for arg in args)):
        coef = Fraction(1)
        for _, value in combo:
            coef *= value
        value = on(tuple(key for key, _ in combo))
        if value:
            result.iadd_coef(coef, value)
    return result


def power_expand(
    on: KeyFunction,
    x: Mapping[Hashable, Fraction],
    arity: int,
    degree: Callable[[Hashable], int],
) -> Element:
    """
    Evaluates a graded symmetric multilinear map on `(x, ..., x)`.

    For even `x` only one ordering of each multiset of keys is evaluated and
    weighted by its multinomial coefficient.
    """
    if not x:
        return Element()
    if any(degree(key) % 2 for key in x):
        return multilinear_expand(on, [x] * arity)
    result = Element()
    keys = sorted(x)  # type: ignore[type-var]
    total = factorial(arity)
    for combo in combinations_with_replacement(keys, arity):
        coef = Fraction(total)
        run = 1
        for a in range(arity):
            coef *= x[combo[a]]
            if a and combo[a] == combo[a - 1]:
                run += 1
                coef /= run
            else:
                run = 1
        value = on(combo)
        if value:
            result.iadd_coef(coef, value)
    return result


def symmetric_tensor(
    factors: Sequence[Mapping[Hashable, Fraction]], degree: Callable[[Hashable], int]
) -> Element:
    """
    The product `x_1 ... x_k` in the symmetric power, as an element keyed by
    canonical tuples of basis keys.
    """
    result = Element()
    if any(not factor for factor in factors):
        return result
    for combo in product(*(factor.items() for factor in factors)):
        sign, canonical = canonical_order(tuple(key for key, _ in combo), degree)
        if not sign:
            continue
        coef = Fraction(sign)
        for _, value in combo:
            coef *= value
        result.add_term(canonical, coef)
    return result


def symmetric_apply(on: KeyFunction, tensor: Mapping[Hashable, Fraction]) -> Element:
    """Applies a map known on tuples of basis keys to an element of a symmetric power."""
    result = Element()
    for keys, coef in tensor.items():
        value = on(keys)  # type: ignore[arg-type]
        if value:
            result.iadd_coef(coef, value)
    return result


def symmetric_basis(space: GradedSpace, arity: int) -> Iterator[MultiIndex]:
    """Canonical multi-indices of the given arity: sorted, no repeated odd key."""
    degrees = space.degrees
    for index in combinations_with_replacement(range(space.dimension), arity):
        if any(index[a] == index[a - 1] and degrees[index[a]] % 2 for a in range(1, arity)):
            continue
        yield index


class MultilinearMap:
    """
    A graded symmetric multilinear map on a finite space.

    The map is determined by its values on canonical multi-indices. Values come
    either from an explicit table or from a `compute` callable that is
    memoized on first use.
    """

    def __init__(
        self,
        domain: GradedSpace,
        arity: int,
        degree: int,
        table: Optional[Mapping[MultiIndex, Mapping[Hashable, Fraction]]] = None,
        *,
        compute: Optional[Callable[[MultiIndex], Element]] = None,
    ):
        if arity < 1:
            raise ValueError("arity must be at least 1")
        self.domain = domain
        self.arity = arity
        self.degree = degree
        self.explicit = compute is None
        self._compute = compute
        self._values: dict[MultiIndex, Element] = {}
        for index, value in (table or {}).items():
            self.store(tuple(index), Element(value))

    def store(self, index: MultiIndex, value: Element) -> None:
        """Records the value on a multi-index in any order, canonicalizing its sign."""
        if len(index) != self.arity:
            raise DegreeError(f"{index} does not have arity {self.arity}")
        self.domain.check(dict.fromkeys(index, 1))
        sign, canonical = canonical_order(index, self.domain.degree)
        if not sign:
            if value:
                raise DegreeError(f"{index} repeats an odd element but has a nonzero value")
            return
        value = value.scaled(sign)
        if canonical in self._values and self._values[canonical] != value:
            raise DegreeError(f"conflicting values given for {canonical}")
        self._values[canonical] = value

    def entry(self, index: MultiIndex) -> Element:
        """Value on a canonical multi-index."""
        value = self._values.get(index)
        if value is None:
            value = self._compute(index) if self._compute is not None else Element()
            self._values[index] = value
        return value

    def on(self, keys: Sequence[int]) -> Element:
        if len(keys) != self.arity:
            raise DegreeError(f"expected {self.arity} arguments, got {len(keys)}")
        sign, canonical = canonical_order(keys, self.domain.degree)
        if not sign:
            return Element()
        value = self.entry(canonical)  # type: ignore[arg-type]
        return value if sign == 1 else -value

    def __call__(self, *args: Mapping[int, Fraction]) -> Element:
        if len(args) != self.arity:
            raise DegreeError(f"expected {self.arity} arguments, got {len(args)}")
        return multilinear_expand(self.on, args)  # type: ignore[arg-type]

    def power(self, x: Mapping[int, Fraction]) -> Element:
        """The value on `(x, ..., x)`."""
        return power_expand(self.on, x, self.arity, self.domain.degree)  # type: ignore[arg-type]

    def items(self) -> Iterator[tuple[MultiIndex, Element]]:
        """Nonzero values on all canonical multi-indices."""
        if self.explicit:
            yield from ((k, v) for k, v in sorted(self._values.items()) if v)
            return
        for index in symmetric_basis(self.domain, self.arity):
            value = self.entry(index)
            if value:
                yield index, value

    def is_zero(self) -> bool:
        return next(iter(self.items()), None) is None


class LinearMap:
    """
    A linear map given on basis keys, by table or by a memoized callable.
    """

    def __init__(
        self,
        table: Optional[Mapping[Hashable, Mapping[Hashable, Fraction]]] = None,
        *,
        compute: Optional[Callable[[Hashable], Element]] = None,
        degree: int = 0,
    ):
        self.degree = degree
        self._compute = compute
        self._values: dict[Hashable, Element] = {
            key: Element(value) for key, value in (table or {}).items()
        }

    def on(self, key: Hashable) -> Element:
        value = self._values.get(key)
        if value is None:
            value = self._compute(key) if self._compute is not None else Element()
            self._values[key] = value
        return value

    def __call__(self, x: Mapping[Hashable, Fraction]) -> Element:
        result = Element()
        for key, coef in x.items():
            value = self.on(key)
            if value:
                result.iadd_coef(coef, value)
        return result

    def compose(self, inner: LinearMap) -> LinearMap:
        """`self` after `inner`."""
        return LinearMap(compute=lambda key: self(inner.on(key)), degree=self.degree + inner.degree)

    @classmethod
    def identity(cls) -> LinearMap:
        return cls(compute=Element.unit)


__all__ = [
    "LinearMap",
    "MultiIndex",
    "MultilinearMap",
    "multilinear_expand",
    "power_expand",
    "symmetric_apply",
    "symmetric_basis",
    "symmetric_tensor",
]
