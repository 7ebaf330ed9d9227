from __future__ import annotations

import logging
from bisect import bisect_right
from collections.abc import Callable, Hashable, Iterator, Mapping, Sequence
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Any, Optional

from delinf._graded.linalg import Subspace, cohomology_dimension
from delinf._graded.multilinear import (
    LinearMap,
    MultiIndex,
    MultilinearMap,
    multilinear_expand,
    power_expand,
    symmetric_basis,
)
from delinf._graded.protocols import TaylorStructure
from delinf._graded.scalars import ScalarLike, as_scalar
from delinf._graded.signs import canonical_order, koszul_sign, set_partitions
from delinf._graded.spaces import BasisElement, Element, GradedSpace
from delinf.errors import (
    DegreeError,
    NotInImageError,
    NotMaurerCartanError,
    SpaceMismatchError,
    StructureError,
)
from delinf.reports import CheckReport

_logger = logging.getLogger("delinf")


class LInftyAlgebra:
    """
    A complete L-infinity algebra in the shifted presentation.

    The Taylor coefficients `q_i` are graded symmetric maps of degree 1 on the
    shifted space. The weight filtration of `space` forces `q_i` to vanish for
    arities at or above the nilpotency, so only arities up to `arity_bound`
    are ever stored or evaluated.
    """

    def __init__(
        self,
        space: GradedSpace,
        taylor: Optional[Mapping[int, MultilinearMap]] = None,
        *,
        name: str = "L",
    ):
        self.space = space
        self.name = name
        self.taylor: dict[int, MultilinearMap] = {}
        for arity, q in (taylor or {}).items():
            if q.arity != arity:
                raise DegreeError(f"map stored at arity {arity} has arity {q.arity}")
            if q.domain != space:
                raise SpaceMismatchError(f"q_{arity} is defined on another space")
            if q.degree != 1:
                raise DegreeError(f"q_{arity} must have degree 1, not {q.degree}")
            if arity > space.arity_bound and q.explicit and not q.is_zero():
                raise StructureError(
                    f"q_{arity} is nonzero but weights force it to vanish "
                    f"above arity {space.arity_bound}"
                )
            self.taylor[arity] = q
        # Derived structures keyed by construction, such as cochain transfers.
        self.cache: dict[Any, Any] = {}

    @classmethod
    def from_tables(
        cls,
        space: GradedSpace,
        tables: Mapping[int, Mapping[MultiIndex, Mapping[int, ScalarLike]]],
        *,
        name: str = "L",
    ) -> LInftyAlgebra:
        taylor = {
            arity: MultilinearMap(
                space,
                arity,
                1,
                {index: Element(value) for index, value in table.items()},
            )
            for arity, table in tables.items()
        }
        return cls(space, taylor, name=name)

    @property
    def nilpotency(self) -> int:
        return self.space.nilpotency

    @property
    def arity_bound(self) -> int:
        return self.space.arity_bound

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def degree(self, key: int) -> int:
        return self.space.degrees[key]

    def weight(self, key: int) -> int:
        return self.space.weights[key]

    def q(self, arity: int) -> MultilinearMap:
        q = self.taylor.get(arity)
        if q is None:
            q = MultilinearMap(self.space, arity, 1)
        return q

    def bracket(self, keys: Sequence[Hashable]) -> Element:
        q = self.taylor.get(len(keys))
        if q is None:
            return Element()
        return q.on(keys)  # type: ignore[arg-type]

    def apply(self, *args: Mapping[int, Fraction]) -> Element:
        """`q_n(args)` for `n = len(args)`."""
        if not args:
            raise DegreeError("q_0 is not part of a structure")
        return self.q(len(args))(*args)

    @property
    def is_abelian(self) -> bool:
        return all(q.is_zero() for arity, q in self.taylor.items() if arity >= 2)

    def differential_columns(self, degree: int) -> list[Element]:
        """Images under `q_1` of the basis keys of the given degree."""
        return [self.bracket((key,)) for key in self.space.keys_of_degree(degree)]

    def cohomology_dimension(self, degree: int) -> int:
        """Dimension of the `q_1`-cohomology in the given shifted degree."""
        return cohomology_dimension(
            self.differential_columns(degree - 1),
            self.differential_columns(degree),
            len(self.space.keys_of_degree(degree)),
        )

    def element(self, coefficients: Mapping[str, ScalarLike]) -> Element:
        return self.space.element(coefficients)

    def format(self, x: Mapping[int, Fraction]) -> dict[str, str]:
        return self.space.format(x)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, dimension={self.dimension})"


def zero_algebra(name: str = "0") -> LInftyAlgebra:
    return LInftyAlgebra(GradedSpace((), 1), name=name)


def coderivation_terms(
    bracket: Callable[[tuple[Hashable, ...]], Element],
    degree: Callable[[Hashable], int],
    keys: Sequence[Hashable],
) -> Iterator[tuple[int, int, Element, tuple[Hashable, ...]]]:
    """
    Terms of the coderivation on a monomial of basis keys.

    Yields:
        `(j, sign, q_j(keys_S), rest)` for every subset `S` of size `j`.
    """
    n = len(keys)
    degrees = [degree(key) for key in keys]
    for j in range(1, n + 1):
        for subset in combinations(range(n), j):
            chosen = set(subset)
            rest_positions = tuple(p for p in range(n) if p not in chosen)
            value = bracket(tuple(keys[p] for p in subset))
            if not value:
                continue
            sign = koszul_sign(degrees, subset + rest_positions)
            yield j, sign, value, tuple(keys[p] for p in rest_positions)


def partition_terms(
    keys: Sequence[Hashable],
    degree: Callable[[Hashable], int],
    inner: Callable[[tuple[Hashable, ...]], Element],
    *,
    min_blocks: int = 1,
) -> Iterator[tuple[int, list[Element]]]:
    """
    Terms of the coalgebra extension of a morphism on a monomial of basis keys.

    Yields:
        `(sign, [f(B_1), ..., f(B_k)])` for every unordered set partition into
        `k >= min_blocks` blocks, blocks ordered by least element.
    """
    degrees = [degree(key) for key in keys]
    for blocks in set_partitions(len(keys)):
        if len(blocks) < min_blocks:
            continue
        values = []
        for block in blocks:
            value = inner(tuple(keys[p] for p in block))
            if not value:
                break
            values.append(value)
        else:
            yield koszul_sign(degrees, [p for block in blocks for p in block]), values


def _weight_limited(space: GradedSpace, arity: int, limit: int) -> Iterator[MultiIndex]:
    weights = space.weights
    for index in symmetric_basis(space, arity):
        if sum(weights[key] for key in index) < limit:
            yield index


def _audit_entry(
    report: CheckReport,
    index: MultiIndex,
    value: Mapping[Hashable, Fraction],
    source: GradedSpace,
    target: TaylorStructure,
    degree: int,
) -> None:
    in_degree = sum(source.degrees[key] for key in index) + degree
    in_weight = sum(source.weights[key] for key in index)
    for key in value:
        if target.degree(key) != in_degree:
            report.fail("degree", index, {"output": repr(key)})
            return
        if target.weight(key) < in_weight:
            report.fail("weight filtration", index, {"output": repr(key)})
            return


def check_linfty(algebra: LInftyAlgebra) -> CheckReport:
    """
    Exhaustively checks `Q o Q = 0` on the symmetric coalgebra.

    Each arity `n` and each canonical multi-index of total weight below the
    nilpotency is checked; heavier inputs vanish by weight. Degrees and the
    weight filtration of every evaluated coefficient are audited as well.
    """
    report = CheckReport(kind="linfty")
    space = algebra.space
    for arity, q in algebra.taylor.items():
        if q.explicit:
            for index, value in q.items():
                _audit_entry(report, index, value, space, algebra, 1)
    for n in range(1, algebra.arity_bound + 1):
        for index in _weight_limited(space, n, algebra.nilpotency):
            report.count(f"arity {n}")
            residual = Element()
            q = algebra.taylor.get(n)
            if q is not None and not q.explicit:
                _audit_entry(report, index, q.entry(index), space, algebra, 1)
            for _, sign, value, rest in coderivation_terms(
                algebra.bracket, algebra.degree, index
            ):
                for key, coef in value.items():
                    residual.iadd_coef(sign * coef, algebra.bracket((key,) + rest))
            if residual:
                report.fail("Q^2=0", index, algebra.format(residual))
    _logger.debug("checked %s: %s", algebra.name, report.checked)
    return report


class LInftyMorphism:
    """
    A continuous L-infinity morphism, given by its Taylor coefficients `f_i`
    of degree 0 from `source` to `target`.

    The target only needs to satisfy `TaylorStructure`, so morphisms into the
    infinite dimensional form extensions are represented the same way.
    """

    def __init__(
        self,
        source: LInftyAlgebra,
        target: TaylorStructure,
        taylor: Mapping[int, MultilinearMap],
        *,
        strict: bool = False,
        name: str = "F",
    ):
        self.source = source
        self.target = target
        self.name = name
        self.taylor = dict(taylor)
        for arity, f in self.taylor.items():
            if f.domain != source.space:
                raise SpaceMismatchError(f"f_{arity} is defined on another space")
            if f.degree != 0:
                raise DegreeError(f"f_{arity} must have degree 0")
        self.strict = strict or all(arity == 1 for arity in self.taylor)

    @property
    def arity_bound(self) -> int:
        return max(1, self.target.nilpotency - 1)

    def f(self, arity: int) -> MultilinearMap:
        f = self.taylor.get(arity)
        if f is None:
            f = MultilinearMap(self.source.space, arity, 0)
        return f

    def component(self, keys: Sequence[Hashable]) -> Element:
        f = self.taylor.get(len(keys))
        if f is None:
            return Element()
        return f.on(keys)  # type: ignore[arg-type]

    def linear(self, x: Mapping[int, Fraction]) -> Element:
        return multilinear_expand(self.component, [x])

    def linear_map(self) -> LinearMap:
        return LinearMap(compute=lambda key: self.component((key,)))

    def pushforward(self, x: Mapping[int, Fraction]) -> Element:
        """
        The induced map on Maurer-Cartan elements, `sum_i f_i(x^i) / i!`.

        Raises:
            NotMaurerCartanError: If `x` is not Maurer-Cartan in the source.
        """
        if not is_mc(self.source, x):
            raise NotMaurerCartanError(f"element is not Maurer-Cartan in {self.source.name}")
        return self.push(x)

    def push(self, x: Mapping[int, Fraction]) -> Element:
        """`sum_i f_i(x^i) / i!` without checking the Maurer-Cartan equation."""
        _require_degree_zero(self.source, x)
        result = Element()
        for arity in range(1, self.arity_bound + 1):
            if self.strict and arity > 1:
                break
            value = power_expand(self.component, x, arity, self.source.degree)
            result.iadd_coef(Fraction(1, factorial(arity)), value)
        return result


def strict_morphism(
    source: LInftyAlgebra,
    target: TaylorStructure,
    table: Mapping[int, Mapping[Hashable, ScalarLike]],
    *,
    name: str = "F",
) -> LInftyMorphism:
    """A strict morphism with linear part given on source basis keys."""
    f1 = MultilinearMap(
        source.space,
        1,
        0,
        {(key,): Element(value) for key, value in table.items()},
    )
    return LInftyMorphism(source, target, {1: f1}, strict=True, name=name)


def linear_strict_morphism(
    source: LInftyAlgebra,
    target: TaylorStructure,
    compute: Callable[[int], Element],
    *,
    name: str = "F",
) -> LInftyMorphism:
    f1 = MultilinearMap(source.space, 1, 0, compute=lambda index: compute(index[0]))
    return LInftyMorphism(source, target, {1: f1}, strict=True, name=name)


def identity_morphism(algebra: LInftyAlgebra) -> LInftyMorphism:
    return linear_strict_morphism(algebra, algebra, Element.unit, name="id")


def check_morphism(morphism: LInftyMorphism) -> CheckReport:
    """
    Exhaustively checks `F o R = Q o F` on the symmetric coalgebra, corestricted
    to the target, for every canonical multi-index of the source.
    """
    report = CheckReport(kind="morphism")
    source, target = morphism.source, morphism.target
    limit = target.nilpotency
    for n in range(1, morphism.arity_bound + 1):
        for index in _weight_limited(source.space, n, limit):
            report.count(f"arity {n}")
            if morphism.taylor.get(n) is not None:
                _audit_entry(report, index, morphism.component(index), source.space, target, 0)
            residual = Element()
            for _, sign, value, rest in coderivation_terms(
                source.bracket, source.degree, index
            ):
                for key, coef in value.items():
                    residual.iadd_coef(sign * coef, morphism.component((key,) + rest))
            for sign, values in partition_terms(index, source.degree, morphism.component):
                residual.iadd_coef(-sign, multilinear_expand(target.bracket, values))
            if residual:
                report.fail(
                    "FR=QF", index, {repr(key): str(value) for key, value in residual.items()}
                )
    return report


def compose_morphisms(outer: LInftyMorphism, inner: LInftyMorphism) -> LInftyMorphism:
    """`outer` after `inner`."""
    if inner.target is not outer.source:
        raise SpaceMismatchError("morphisms are not composable")

    def compute(index: MultiIndex) -> Element:
        result = Element()
        for sign, values in partition_terms(index, inner.source.degree, inner.component):
            result.iadd_coef(sign, multilinear_expand(outer.component, values))
        return result

    taylor = {
        arity: MultilinearMap(inner.source.space, arity, 0, compute=compute)
        for arity in range(1, outer.arity_bound + 1)
    }
    return LInftyMorphism(
        inner.source,
        outer.target,
        taylor,
        strict=inner.strict and outer.strict,
        name=f"{outer.name}.{inner.name}",
    )


def apply_coderivation(
    algebra: LInftyAlgebra, monomials: Mapping[MultiIndex, Fraction]
) -> Element:
    """
    The coderivation `Q` on an element of the symmetric coalgebra, given as a
    combination of canonical multi-indices.
    """
    result = Element()
    for index, coef in monomials.items():
        for _, sign, value, rest in coderivation_terms(algebra.bracket, algebra.degree, index):
            for key, c in value.items():
                order_sign, canonical = canonical_order((key,) + rest, algebra.degree)
                if order_sign:
                    result.add_term(canonical, coef * sign * c * order_sign)
    return result


def apply_morphism(
    morphism: LInftyMorphism, monomials: Mapping[MultiIndex, Fraction]
) -> Element:
    """The coalgebra map `F` on a combination of canonical multi-indices."""
    result = Element()
    target = morphism.target
    for index, coef in monomials.items():
        for sign, values in partition_terms(index, morphism.source.degree, morphism.component):
            for keys, c in _tensor_terms(values):
                order_sign, canonical = canonical_order(keys, target.degree)
                if order_sign:
                    result.add_term(canonical, coef * sign * c * order_sign)
    return result


def _tensor_terms(values: Sequence[Element]) -> Iterator[tuple[tuple[Hashable, ...], Fraction]]:
    if not values:
        yield (), Fraction(1)
        return
    for head, c in values[0].items():
        for tail, d in _tensor_terms(values[1:]):
            yield (head,) + tail, c * d


def _require_degree_zero(structure: TaylorStructure, x: Mapping[Hashable, Fraction]) -> None:
    for key in x:
        if structure.degree(key) != 0:
            raise DegreeError(
                f"Maurer-Cartan elements live in degree 0, found degree {structure.degree(key)}"
            )


def curvature(structure: TaylorStructure, x: Mapping[Hashable, Fraction]) -> Element:
    """
    `R(x) = sum_{i >= 1} q_i(x^i) / i!` for `x` of degree 0.

    Raises:
        DegreeError: If `x` has a component outside degree 0.
    """
    _require_degree_zero(structure, x)
    result = Element()
    for arity in range(1, structure.arity_bound + 1):
        value = power_expand(structure.bracket, x, arity, structure.degree)
        result.iadd_coef(Fraction(1, factorial(arity)), value)
    return result


def is_mc(structure: TaylorStructure, x: Mapping[Hashable, Fraction]) -> bool:
    return not curvature(structure, x)


def dgla_import(
    basis: Sequence[BasisElement],
    nilpotency: int,
    differential: Optional[Mapping[str, Mapping[str, ScalarLike]]] = None,
    bracket: Optional[Mapping[tuple[str, str], Mapping[str, ScalarLike]]] = None,
    *,
    name: str = "L",
) -> LInftyAlgebra:
    """
    Imports a nilpotent differential graded Lie algebra.

    Args:
        basis: Basis elements with their unshifted degrees.
        nilpotency: Filtration length; brackets must raise weights additively.
        differential: `d(b)` for basis names `b`.
        bracket: `[a, b]` for pairs of basis names; the other order follows by
            graded antisymmetry.

    Raises:
        StructureError: If the result violates `d^2 = 0`, graded antisymmetry,
            the Leibniz rule or the Jacobi identity.
    """
    shifted = GradedSpace(
        tuple(BasisElement(b.name, b.degree - 1, b.weight) for b in basis), nilpotency
    )
    q1_table = {
        (shifted.index(source),): -shifted.element(image)
        for source, image in (differential or {}).items()
    }
    try:
        q1 = MultilinearMap(shifted, 1, 1, q1_table)
        q2 = MultilinearMap(shifted, 2, 1)
        for (a, b), image in (bracket or {}).items():
            first = shifted.index(a)
            sign = 1 if shifted.degree(first) % 2 else -1
            value = shifted.element(image).scaled(sign)
            q2.store((shifted.index(a), shifted.index(b)), value)
    except DegreeError as exc:
        raise StructureError(f"bracket of {name} is not graded antisymmetric: {exc}") from exc
    algebra = LInftyAlgebra(shifted, {1: q1, 2: q2}, name=name)
    check_linfty(algebra).raise_on_failure()
    return algebra


class ProductAlgebra(LInftyAlgebra):
    """
    The product of finitely many algebras, computed factorwise.

    Basis names are prefixed by factor labels and keys are laid out factor
    after factor.
    """

    def __init__(
        self,
        factors: Sequence[LInftyAlgebra],
        labels: Optional[Sequence[str]] = None,
        *,
        name: str = "product",
    ):
        self.factors = tuple(factors)
        self.labels = tuple(labels) if labels is not None else tuple(
            str(k) for k in range(len(self.factors))
        )
        if len(self.labels) != len(self.factors):
            raise ValueError("one label per factor is required")
        basis: list[BasisElement] = []
        self.offsets: list[int] = []
        for label, factor in zip(self.labels, self.factors):
            self.offsets.append(len(basis))
            basis.extend(
                BasisElement(f"{label}.{b.name}", b.degree, b.weight)
                for b in factor.space.basis
            )
        nilpotency = max((factor.nilpotency for factor in self.factors), default=1)
        space = GradedSpace(tuple(basis), nilpotency)
        taylor = {
            arity: MultilinearMap(space, arity, 1, compute=self._entry)
            for arity in range(1, space.arity_bound + 1)
        }
        super().__init__(space, taylor, name=name)

    def locate(self, key: int) -> tuple[int, int]:
        """Factor number and local key of a product key."""
        factor = bisect_right(self.offsets, key) - 1
        return factor, key - self.offsets[factor]

    def _entry(self, index: MultiIndex) -> Element:
        located = [self.locate(key) for key in index]
        factor = located[0][0]
        if any(k != factor for k, _ in located):
            return Element()
        value = self.factors[factor].bracket(tuple(local for _, local in located))
        return self.inject(factor, value)

    def inject(self, factor: int, x: Mapping[int, Fraction]) -> Element:
        offset = self.offsets[factor]
        return Element((offset + key, value) for key, value in x.items())

    def project(self, factor: int, x: Mapping[int, Fraction]) -> Element:
        offset = self.offsets[factor]
        size = self.factors[factor].dimension
        return Element(
            (key - offset, value) for key, value in x.items() if offset <= key < offset + size
        )

    def join(self, components: Sequence[Mapping[int, Fraction]]) -> Element:
        result = Element()
        for factor, x in enumerate(components):
            result.iadd_coef(1, self.inject(factor, x))
        return result

    def projection(self, factor: int) -> LInftyMorphism:
        return linear_strict_morphism(
            self,
            self.factors[factor],
            lambda key: self.project(factor, Element.unit(key)),
            name=f"pr{factor}",
        )

    def inclusion(self, factor: int) -> LInftyMorphism:
        return linear_strict_morphism(
            self.factors[factor],
            self,
            lambda key: self.inject(factor, Element.unit(key)),
            name=f"in{factor}",
        )


class SubAlgebra(LInftyAlgebra):
    """
    A subalgebra spanned by degree and weight homogeneous vectors.

    The basis is the reduced echelon basis of the span, so coordinates are
    read off at pivot keys.

    Raises:
        DegreeError: If a spanning vector is not homogeneous.
        StructureError: If the span is not closed under the Taylor coefficients,
            detected when a coefficient is evaluated.
    """

    def __init__(
        self,
        ambient: LInftyAlgebra,
        vectors: Sequence[Mapping[int, Fraction]],
        *,
        prefix: str = "v",
        name: str = "sub",
    ):
        self.ambient = ambient
        self.subspace = Subspace(vectors)
        basis = []
        for position, vector in enumerate(self.subspace.basis):
            degree = ambient.space.degree_of(vector)
            weights = {ambient.weight(key) for key in vector}
            if len(weights) != 1:
                raise DegreeError("subalgebra generators must be weight homogeneous")
            basis.append(BasisElement(f"{prefix}{position}", degree, weights.pop()))
        space = GradedSpace(tuple(basis), ambient.nilpotency)
        taylor = {
            arity: MultilinearMap(space, arity, 1, compute=self._entry)
            for arity in range(1, space.arity_bound + 1)
        }
        super().__init__(space, taylor, name=name)

    def _entry(self, index: MultiIndex) -> Element:
        value = self.ambient.apply(*(self.subspace.basis[key] for key in index))
        try:
            return self.coordinates(value)
        except NotInImageError as exc:
            raise StructureError(f"{self.name} is not closed under q_{len(index)}") from exc

    def embed(self, x: Mapping[int, Fraction]) -> Element:
        result = Element()
        for key, coef in x.items():
            result.iadd_coef(coef, self.subspace.basis[key])
        return result

    def coordinates(self, x: Mapping[int, Fraction]) -> Element:
        """
        Raises:
            NotInImageError: If `x` is not in the subalgebra.
        """
        return Element(enumerate(self.subspace.coordinates(x)))

    def inclusion(self) -> LInftyMorphism:
        return linear_strict_morphism(
            self, self.ambient, lambda key: self.subspace.basis[key].copy(), name="incl"
        )


def parse_element(algebra: LInftyAlgebra, text: str) -> Element:
    """
    Parses `name=p/q,name=p/q`; an empty string is zero.

    Raises:
        SpaceMismatchError: For unknown basis names.
        ValueError: For malformed coefficients.
    """
    coefficients: dict[str, Fraction] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, separator, value = part.partition("=")
        if not separator:
            raise ValueError(f"expected name=coefficient, got {part!r}")
        coefficients[name.strip()] = coefficients.get(name.strip(), Fraction(0)) + as_scalar(
            value.strip()
        )
    return algebra.element(coefficients)


__all__ = [
    "LInftyAlgebra",
    "LInftyMorphism",
    "ProductAlgebra",
    "SubAlgebra",
    "apply_coderivation",
    "apply_morphism",
    "check_linfty",
    "check_morphism",
    "coderivation_terms",
    "compose_morphisms",
    "curvature",
    "dgla_import",
    "identity_morphism",
    "is_mc",
    "linear_strict_morphism",
    "parse_element",
    "partition_terms",
    "strict_morphism",
    "zero_algebra",
]
