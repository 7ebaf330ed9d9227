"""
Semicosimplicial and cosimplicial diagrams of algebras, their totalizations
and homotopy limits, and checks that the Deligne groupoid commutes with them.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional

from delinf._graded.linalg import kernel, rank
from delinf._graded.spaces import Element, GradedSpace
from delinf._moore import moore_homology_dimension
from delinf.cochains import (
    CochainAlgebra,
    coefficient_pushforward,
    cochain_structure,
    complex_structure,
    pullback_cochain,
)
from delinf.complexes import (
    FinComplex,
    Simplex,
    SimplicialMap,
    codegeneracy_map,
    coface_map,
    product_map,
)
from delinf.config import DEFAULT_BUDGET, Budget
from delinf.deligne import DeligneSimplex, HomotopyGroupReport
from delinf.errors import (
    CutoffError,
    NotInImageError,
    NotMaurerCartanError,
    SpaceMismatchError,
    StructureError,
)
from delinf.linfty import (
    LInftyAlgebra,
    LInftyMorphism,
    ProductAlgebra,
    SubAlgebra,
    identity_morphism,
    is_mc,
    linear_strict_morphism,
    zero_algebra,
)
from delinf.reports import CheckReport

_logger = logging.getLogger("delinf")

Tagged = Callable[[int], Element]


def _tag(x: Mapping[int, Fraction], *tag: Any) -> Element:
    return Element(((*tag, key), c) for key, c in x.items())


def _linear(morphism: LInftyMorphism, x: Mapping[int, Fraction]) -> Element:
    return morphism.linear(x)


def _equalizer(space: GradedSpace, constraint: Tagged) -> list[Element]:
    """
    Basis of the common kernel of the constraints, one degree and weight block
    at a time so that every basis vector is homogeneous.
    """
    blocks: dict[tuple[int, int], list[int]] = {}
    for key in space:
        blocks.setdefault((space.degree(key), space.weight(key)), []).append(key)
    vectors = []
    for _, keys in sorted(blocks.items()):
        columns = [constraint(key) for key in keys]
        for relation in kernel(columns):
            vectors.append(Element((keys[j], c) for j, c in relation.items()))
    return vectors


@dataclass(frozen=True, eq=False)
class SemicosimplicialLInfty:
    """
    A semicosimplicial algebra `L_0, .., L_top`, zero above `top`, with strict
    cofaces `cofaces[(n, j)]: L_(n-1) -> L_n` for `0 <= j <= n`.

    Raises:
        SpaceMismatchError: If a coface is missing, not strict or between the
            wrong levels.
    """

    levels: tuple[LInftyAlgebra, ...]
    cofaces: Mapping[tuple[int, int], LInftyMorphism]
    name: str = "L"
    _zero: LInftyAlgebra = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "_zero", zero_algebra())
        if not self.levels:
            raise ValueError("a diagram needs at least one level")
        for n in range(1, self.top + 1):
            for j in range(n + 1):
                self._require_map(self.cofaces, (n, j), self.levels[n - 1], self.levels[n])

    @staticmethod
    def _require_map(
        maps: Mapping[tuple[int, int], LInftyMorphism],
        index: tuple[int, int],
        source: LInftyAlgebra,
        target: LInftyAlgebra,
    ) -> None:
        morphism = maps.get(index)
        if morphism is None:
            raise SpaceMismatchError(f"structure map {index} is missing")
        if not morphism.strict:
            raise SpaceMismatchError(f"structure map {index} is not strict")
        if morphism.source is not source or morphism.target is not target:
            raise SpaceMismatchError(f"structure map {index} connects the wrong levels")

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @property
    def is_cosimplicial(self) -> bool:
        return False

    def level(self, n: int) -> LInftyAlgebra:
        return self.levels[n] if n <= self.top else self._zero

    def coface(self, n: int, j: int) -> LInftyMorphism:
        """`d^j: L_(n-1) -> L_n`."""
        if n <= self.top:
            return self.cofaces[(n, j)]
        return linear_strict_morphism(self.level(n - 1), self._zero, lambda key: Element())

    @classmethod
    def constant(
        cls, algebra: LInftyAlgebra, top: int, *, name: str = "L"
    ) -> SemicosimplicialLInfty:
        """The constant diagram with identity cofaces, cut off above `top`."""
        identity = identity_morphism(algebra)
        cofaces = {(n, j): identity for n in range(1, top + 1) for j in range(n + 1)}
        return cls((algebra,) * (top + 1), cofaces, name=name)

    def _check_weights(self, report: CheckReport, label: str, morphism: LInftyMorphism) -> None:
        source, target = morphism.source, morphism.target
        for key in source.space:
            image = morphism.component((key,))
            report.count("weight")
            if any(target.weight(k) != source.weight(key) for k in image):
                report.fail("weight", (label, source.space.name(key)), target.format(image))

    def _compare(
        self,
        report: CheckReport,
        identity: str,
        where: Any,
        target: LInftyAlgebra,
        lhs: Element,
        rhs: Element,
    ) -> None:
        report.count(identity)
        if lhs != rhs:
            report.fail(identity, where, target.format(lhs - rhs))

    def check_identities(self) -> CheckReport:
        """Checks weight preservation and `d^j d^i = d^i d^(j-1)` for `i < j`."""
        report = CheckReport(kind="cosimplicial")
        for (n, j), morphism in sorted(self.cofaces.items()):
            self._check_weights(report, f"d{n},{j}", morphism)
        for n in range(2, self.top + 1):
            for j in range(1, n + 1):
                for i in range(j):
                    for key in self.levels[n - 2].space:
                        unit = Element.unit(key)
                        lhs = _linear(self.coface(n, j), _linear(self.coface(n - 1, i), unit))
                        rhs = _linear(self.coface(n, i), _linear(self.coface(n - 1, j - 1), unit))
                        where = (n, i, j, key)
                        identity = "d^j d^i = d^i d^(j-1)"
                        self._compare(report, identity, where, self.levels[n], lhs, rhs)
        _logger.debug("checked identities of %s: %s", self.name, report.checked)
        return report


@dataclass(frozen=True, eq=False)
class CosimplicialLInfty(SemicosimplicialLInfty):
    """
    A cosimplicial algebra truncated at `top`, with strict codegeneracies
    `codegeneracies[(n, j)]: L_(n+1) -> L_n` for `0 <= j <= n`. Levels above
    `top` are not known, so totalizations stop there.
    """

    codegeneracies: Mapping[tuple[int, int], LInftyMorphism] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        for n in range(self.top):
            for j in range(n + 1):
                self._require_map(self.codegeneracies, (n, j), self.levels[n + 1], self.levels[n])

    @property
    def is_cosimplicial(self) -> bool:
        return True

    @property
    def cutoff(self) -> int:
        return self.top

    def codegeneracy(self, n: int, j: int) -> LInftyMorphism:
        """`s^j: L_(n+1) -> L_n`."""
        if n + 1 > self.top:
            raise CutoffError(f"codegeneracies out of level {n + 1} lie beyond the cutoff")
        return self.codegeneracies[(n, j)]

    @classmethod
    def constant(cls, algebra: LInftyAlgebra, top: int, *, name: str = "L") -> CosimplicialLInfty:
        identity = identity_morphism(algebra)
        cofaces = {(n, j): identity for n in range(1, top + 1) for j in range(n + 1)}
        codegeneracies = {(n, j): identity for n in range(top) for j in range(n + 1)}
        return cls((algebra,) * (top + 1), cofaces, name=name, codegeneracies=codegeneracies)

    def check_identities(self) -> CheckReport:
        """Adds the codegeneracy identities to the coface checks."""
        report = super().check_identities()
        for (n, j), morphism in sorted(self.codegeneracies.items()):
            self._check_weights(report, f"s{n},{j}", morphism)
        s, d = self.codegeneracy, self.coface
        for n in range(self.top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    for key in self.levels[n + 2].space:
                        unit = Element.unit(key)
                        lhs = _linear(s(n, j), _linear(s(n + 1, i), unit))
                        rhs = _linear(s(n, i), _linear(s(n + 1, j + 1), unit))
                        where = (n, i, j, key)
                        identity = "s^j s^i = s^i s^(j+1)"
                        self._compare(report, identity, where, self.levels[n], lhs, rhs)
        for n in range(self.top):
            for j in range(n + 1):
                for i in range(n + 2):
                    for key in self.levels[n].space:
                        unit = Element.unit(key)
                        lhs = _linear(s(n, j), _linear(d(n + 1, i), unit))
                        if i < j:
                            rhs = _linear(d(n, i), _linear(s(n - 1, j - 1), unit))
                        elif i in (j, j + 1):
                            rhs = unit
                        else:
                            rhs = _linear(d(n, i - 1), _linear(s(n - 1, j), unit))
                        self._compare(report, "s^j d^i", (n, i, j, key), self.levels[n], lhs, rhs)
        return report


@dataclass(frozen=True, eq=False)
class Totalization:
    """
    `Tot_k` of a diagram as a subalgebra of `prod_(n <= k) C*(Delta^n; L_n)`.

    Attributes:
        diagram: The diagram totalized.
        k: The requested cutoff.
        product: The product of the cochain algebras of the levels used.
        algebra: The equalizer, with coordinates in its reduced basis.
    """

    diagram: SemicosimplicialLInfty
    k: int
    product: ProductAlgebra
    algebra: SubAlgebra

    @property
    def dimension(self) -> int:
        return self.algebra.dimension

    @property
    def depth(self) -> int:
        """Number of levels used, less one."""
        return len(self.product.factors) - 1

    def component(self, x: Mapping[int, Fraction], n: int) -> Element:
        """The level `n` cochain of an element of `Tot`."""
        return self.product.project(n, self.algebra.embed(x))

    def components(self, x: Mapping[int, Fraction]) -> list[Element]:
        return [self.component(x, n) for n in range(self.depth + 1)]

    def from_components(self, components: Sequence[Mapping[int, Fraction]]) -> Element:
        """
        Raises:
            NotInImageError: If the cochains are not compatible.
        """
        return self.algebra.coordinates(self.product.join(components))

    def projection(self, n: int) -> LInftyMorphism:
        """The strict projection `Tot_k -> C*(Delta^n; L_n)`."""
        return linear_strict_morphism(
            self.algebra,
            self.product.factors[n],
            lambda key: self.product.project(n, self.algebra.subspace.basis[key]),
            name=f"pr{n}",
        )

    def cohomology_dimensions(self, degrees: Iterable[int]) -> dict[int, int]:
        return {degree: self.algebra.cohomology_dimension(degree) for degree in degrees}


def _tot_constraint(
    diagram: SemicosimplicialLInfty, product: ProductAlgebra, top: int, budget: Budget
) -> Tagged:
    cosimplicial = diagram.is_cosimplicial
    pullbacks: dict[tuple[str, int, int], SimplicialMap] = {}
    pushforwards: dict[tuple[str, int, int], LInftyMorphism] = {}
    for n in range(1, top + 1):
        for j in range(n + 1):
            pullbacks[("d", n, j)] = SimplicialMap.ordinal(coface_map(n, j), n)
            pushforwards[("d", n, j)] = coefficient_pushforward(
                diagram.coface(n, j), FinComplex.simplex(n - 1), budget=budget
            )
    if cosimplicial:
        for n in range(top):
            for j in range(n + 1):
                pullbacks[("s", n, j)] = SimplicialMap.ordinal(codegeneracy_map(n, j), n)
                pushforwards[("s", n, j)] = coefficient_pushforward(
                    diagram.codegeneracy(n, j),  # type: ignore[attr-defined]
                    FinComplex.simplex(n + 1),
                    budget=budget,
                )

    def constraint(key: int) -> Element:
        n, local = product.locate(key)
        unit = Element.unit(local)
        source = cochain_structure(n, diagram.level(n), budget=budget)
        result = Element()
        # d^j_*(alpha_(n-1)) = delta_j^*(alpha_n)
        if n >= 1:
            below = cochain_structure(n - 1, diagram.level(n), budget=budget)
            for j in range(n + 1):
                pulled = pullback_cochain(pullbacks[("d", n, j)], source, below, unit)
                result.iadd_coef(-1, _tag(pulled, "d", n, j))
        if n + 1 <= top:
            for j in range(n + 2):
                pushed = pushforwards[("d", n + 1, j)].linear(unit)
                result.iadd_coef(1, _tag(pushed, "d", n + 1, j))
        # s^j_*(alpha_(n+1)) = sigma_j^*(alpha_n)
        if cosimplicial:
            if n + 1 <= top:
                above = cochain_structure(n + 1, diagram.level(n), budget=budget)
                for j in range(n + 1):
                    pulled = pullback_cochain(pullbacks[("s", n, j)], source, above, unit)
                    result.iadd_coef(-1, _tag(pulled, "s", n, j))
            if n >= 1:
                for j in range(n):
                    pushed = pushforwards[("s", n - 1, j)].linear(unit)
                    result.iadd_coef(1, _tag(pushed, "s", n - 1, j))
        return result

    return constraint


def tot_k(
    diagram: SemicosimplicialLInfty, k: int, *, budget: Budget = DEFAULT_BUDGET
) -> Totalization:
    """
    The partial totalization `Tot_k`: tuples `(alpha_0, .., alpha_k)` with
    `alpha_n` in `C*(Delta^n; L_n)` compatible with every coface, and every
    codegeneracy for a cosimplicial diagram.

    Raises:
        CutoffError: If a cosimplicial diagram is asked beyond its cutoff.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if diagram.is_cosimplicial and k > diagram.top:
        raise CutoffError(f"Tot_{k} needs levels beyond the cutoff {diagram.top}")
    top = min(k, diagram.top)
    factors = [cochain_structure(n, diagram.level(n), budget=budget) for n in range(top + 1)]
    product = ProductAlgebra(
        factors, [f"C{n}" for n in range(top + 1)], name=f"prod C*({diagram.name})"
    )
    vectors = _equalizer(product.space, _tot_constraint(diagram, product, top, budget))
    algebra = SubAlgebra(product, vectors, prefix="t", name=f"Tot{k}({diagram.name})")
    _logger.debug(
        "Tot_%d of %s: dimension %d inside %d",
        k,
        diagram.name,
        algebra.dimension,
        product.dimension,
    )
    return Totalization(diagram, k, product, algebra)


def tot(
    diagram: SemicosimplicialLInfty,
    *,
    cutoff: Optional[int] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> Totalization:
    """
    The totalization. A semicosimplicial diagram vanishes above its top level,
    so `Tot = Tot_top` exactly; a cosimplicial diagram is only totalized up to
    an explicit cutoff.

    Raises:
        CutoffError: For a cosimplicial diagram without a cutoff within range,
            or a semicosimplicial one cut below its top level.
    """
    if diagram.is_cosimplicial:
        if cutoff is None:
            raise CutoffError("totalizing a cosimplicial diagram needs an explicit cutoff")
        return tot_k(diagram, cutoff, budget=budget)
    if cutoff is not None and cutoff < diagram.top:
        raise CutoffError(f"Tot of {diagram.name} needs every level up to {diagram.top}")
    return tot_k(diagram, diagram.top, budget=budget)


@dataclass(frozen=True, eq=False)
class MatchingSpace:
    """
    The matching space `M_n`: tuples `(x_0, .., x_n)` in `L_n` with
    `s^i(x_j) = s^(j-1)(x_i)` for `i < j`.
    """

    diagram: CosimplicialLInfty
    n: int
    product: ProductAlgebra
    algebra: SubAlgebra

    def contains(self, xs: Sequence[Mapping[int, Fraction]]) -> bool:
        return self.algebra.subspace.contains(self.product.join(xs))

    def matching_map(self) -> LInftyMorphism:
        """The strict map `L_(n+1) -> M_n`, `y -> (s^0 y, .., s^n y)`."""
        diagram, n = self.diagram, self.n

        def image(key: int) -> Element:
            unit = Element.unit(key)
            joined = self.product.join(
                [diagram.codegeneracy(n, i).linear(unit) for i in range(n + 1)]
            )
            return self.algebra.coordinates(joined)

        return linear_strict_morphism(diagram.level(n + 1), self.algebra, image, name="match")


def _require_cosimplicial(diagram: SemicosimplicialLInfty) -> CosimplicialLInfty:
    if not isinstance(diagram, CosimplicialLInfty):
        raise SpaceMismatchError("matching spaces need codegeneracies")
    return diagram


def matching_space(diagram: CosimplicialLInfty, n: int) -> MatchingSpace:
    """
    Raises:
        CutoffError: If `L_(n+1)` lies beyond the cutoff.
    """
    diagram = _require_cosimplicial(diagram)
    if n < 0 or n + 1 > diagram.top:
        raise CutoffError(f"M_{n} needs level {n + 1}, beyond the cutoff {diagram.top}")
    level = diagram.level(n)
    product = ProductAlgebra([level] * (n + 1), [f"x{i}" for i in range(n + 1)], name=f"M{n}")

    def constraint(key: int) -> Element:
        j, local = product.locate(key)
        unit = Element.unit(local)
        result = Element()
        for i in range(j):
            result.iadd_coef(1, _tag(diagram.codegeneracy(n - 1, i).linear(unit), i, j))
        for later in range(j + 1, n + 1):
            s = diagram.codegeneracy(n - 1, later - 1)
            result.iadd_coef(-1, _tag(s.linear(unit), j, later))
        return result

    algebra = SubAlgebra(product, _equalizer(product.space, constraint), prefix="m", name=f"M{n}")
    _logger.debug("M_%d of %s: dimension %d", n, diagram.name, algebra.dimension)
    return MatchingSpace(diagram, n, product, algebra)


def matching_lift(
    diagram: CosimplicialLInfty,
    n: int,
    xs: Sequence[Mapping[int, Fraction]],
) -> Element:
    """
    A preimage in `L_(n+1)` of a point of the matching space:

        y_n = d^n(x_n),   y_r = d^r(x_r - s^r(y_(r+1))) + y_(r+1).

    Raises:
        NotInImageError: If the tuple is not in `M_n`.
        StructureError: If the recursion does not lift, which happens only
            when the cosimplicial identities fail.
    """
    space = matching_space(diagram, n)
    if len(xs) != n + 1:
        raise SpaceMismatchError(f"a point of M_{n} has {n + 1} entries")
    xs = [Element(x) for x in xs]
    if not space.contains(xs):
        raise NotInImageError(f"tuple is not in the matching space M_{n}")
    d, s = diagram.coface, diagram.codegeneracy
    y = d(n + 1, n).linear(xs[n])
    for r in range(n - 1, -1, -1):
        y = d(n + 1, r).linear(xs[r] - s(n, r).linear(y)) + y
    for i in range(n + 1):
        if s(n, i).linear(y) != xs[i]:
            raise StructureError(f"matching lift fails at s^{i}")
    return y


@dataclass
class CartesianReport:
    """
    Comparison of `Tot_k` with the fiber product of `Tot_(k-1)` and
    `C*(Delta^k; L_k)` over `N_(k-1)`; for a semicosimplicial diagram
    `N_(k-1)` is `C*(boundary Delta^k; L_k)`.
    """

    k: int
    cosimplicial: bool
    identities: CheckReport
    total_dimension: int = 0
    fiber_product_dimension: int = 0
    injective: bool = False
    image_in_fiber_product: bool = False
    lower_surjective: bool = False
    corner_surjective: bool = False

    @property
    def passed(self) -> bool:
        return (
            self.identities.passed
            and self.injective
            and self.image_in_fiber_product
            and self.total_dimension == self.fiber_product_dimension
            and self.lower_surjective
            and self.corner_surjective
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "cosimplicial": self.cosimplicial,
            "passed": self.passed,
            "identities": self.identities.to_dict(),
            "total_dimension": self.total_dimension,
            "fiber_product_dimension": self.fiber_product_dimension,
            "injective": self.injective,
            "image_in_fiber_product": self.image_in_fiber_product,
            "lower_surjective": self.lower_surjective,
            "corner_surjective": self.corner_surjective,
        }


def _boundary_corner(
    diagram: SemicosimplicialLInfty, k: int, budget: Budget
) -> tuple[Callable[[Element], Element], Tagged]:
    """
    The two maps into `N_(k-1)`, from `Tot_(k-1)` components and from
    `C*(Delta^k; L_k)` keys, tagged by the part of `N_(k-1)` they land in.
    """
    top_level = diagram.level(k)
    boundary = FinComplex.boundary(k)
    full = cochain_structure(k, top_level, budget=budget)
    on_boundary = complex_structure(boundary, top_level, budget=budget)
    below = cochain_structure(k - 1, top_level, budget=budget)
    inclusion = SimplicialMap.inclusion(boundary, FinComplex.simplex(k))
    pushed = [
        coefficient_pushforward(diagram.coface(k, j), FinComplex.simplex(k - 1), budget=budget)
        for j in range(k + 1)
    ]
    codegeneracies: list[LInftyMorphism] = []
    previous = diagram.level(k - 1)
    if diagram.is_cosimplicial:
        codegeneracies = [
            coefficient_pushforward(
                diagram.codegeneracy(k - 1, j),  # type: ignore[attr-defined]
                FinComplex.simplex(k),
                budget=budget,
            )
            for j in range(k)
        ]

    def from_lower(alpha: Element) -> Element:
        values: dict[Simplex, Element] = {}
        face_values = [p.linear(alpha) for p in pushed]
        for sigma in boundary.simplices:
            j = min(v for v in range(k + 1) if v not in sigma)
            relabeled = tuple(v if v < j else v - 1 for v in sigma)
            values[sigma] = below.value(face_values[j], relabeled)
        result = _tag(on_boundary.assemble(values), "n", -1)
        if diagram.is_cosimplicial:
            source = cochain_structure(k - 1, previous, budget=budget)
            target = cochain_structure(k, previous, budget=budget)
            for j in range(k):
                mapping = SimplicialMap.ordinal(codegeneracy_map(k - 1, j), k - 1)
                result.iadd_coef(1, _tag(pullback_cochain(mapping, source, target, alpha), "n", j))
        return result

    def from_corner(key: int) -> Element:
        unit = Element.unit(key)
        result = _tag(pullback_cochain(inclusion, full, on_boundary, unit), "n", -1)
        for j, s in enumerate(codegeneracies):
            result.iadd_coef(1, _tag(s.linear(unit), "n", j))
        return result

    return from_lower, from_corner


def _corner_dimension(diagram: CosimplicialLInfty, k: int, budget: Budget) -> int:
    """`dim N_(k-1)`, as the fiber product of `C*(boundary; L_k)` and `C*(Delta^k; M_(k-1))`."""
    boundary = FinComplex.boundary(k)
    on_boundary = complex_structure(boundary, diagram.level(k), budget=budget)
    previous = cochain_structure(k, diagram.level(k - 1), budget=budget)
    previous_boundary = complex_structure(boundary, diagram.level(k - 1), budget=budget)
    inclusion = SimplicialMap.inclusion(boundary, FinComplex.simplex(k))
    s_boundary = [
        coefficient_pushforward(diagram.codegeneracy(k - 1, j), boundary, budget=budget)
        for j in range(k)
    ]
    s_matching = []
    if k >= 2:
        s_matching = [
            coefficient_pushforward(
                diagram.codegeneracy(k - 2, i), FinComplex.simplex(k), budget=budget
            )
            for i in range(k - 1)
        ]
    columns = []
    for key in on_boundary.space:
        unit = Element.unit(key)
        column = Element()
        for j, s in enumerate(s_boundary):
            column.iadd_coef(-1, _tag(s.linear(unit), "R", j, -1))
        columns.append(column)
    for j in range(k):
        for key in previous.space:
            unit = Element.unit(key)
            restricted = pullback_cochain(inclusion, previous, previous_boundary, unit)
            column = _tag(restricted, "R", j, -1)
            for i in range(j):
                column.iadd_coef(1, _tag(s_matching[i].linear(unit), "M", i, j))
            for later in range(j + 1, k):
                column.iadd_coef(-1, _tag(s_matching[later - 1].linear(unit), "M", j, later))
            columns.append(column)
    return len(kernel(columns))


def cartesian_check(
    diagram: SemicosimplicialLInfty, k: int, *, budget: Budget = DEFAULT_BUDGET
) -> CartesianReport:
    """
    Verifies that `Tot_k -> Tot_(k-1)` is the pullback of
    `C*(Delta^k; L_k) -> N_(k-1)`, and that both vertical maps are onto.
    """
    if not 1 <= k <= diagram.top:
        raise CutoffError(f"cartesian squares exist for 1 <= k <= {diagram.top}")
    report = CartesianReport(k, diagram.is_cosimplicial, diagram.check_identities())
    if not report.identities.passed:
        return report
    upper = tot_k(diagram, k, budget=budget)
    lower = tot_k(diagram, k - 1, budget=budget)
    corner = cochain_structure(k, diagram.level(k), budget=budget)
    from_lower, from_corner = _boundary_corner(diagram, k, budget)
    report.total_dimension = upper.dimension

    columns = []
    for key in lower.algebra.space:
        columns.append(from_lower(lower.component(Element.unit(key), k - 1)))
    for key in corner.space:
        columns.append(-from_corner(key))
    report.fiber_product_dimension = len(kernel(columns))

    pairs, projections = [], []
    in_fiber_product = True
    for key in upper.algebra.space:
        components = upper.components(Element.unit(key))
        try:
            t = lower.from_components(components[:k])
        except NotInImageError:
            in_fiber_product = False
            continue
        projections.append(t)
        beta = components[k]
        pairs.append(_tag(t, "t", -1) + _tag(beta, "b", -1))
        image = Element()
        for lower_key, c in t.items():
            image.iadd_coef(c, from_lower(lower.component(Element.unit(lower_key), k - 1)))
        for corner_key, c in beta.items():
            image.iadd_coef(-c, from_corner(corner_key))
        if image:
            in_fiber_product = False
    report.injective = rank(pairs) == upper.dimension
    report.image_in_fiber_product = in_fiber_product
    report.lower_surjective = rank(projections) == lower.dimension

    corner_images = [from_corner(key) for key in corner.space]
    if diagram.is_cosimplicial:
        corner_dimension = _corner_dimension(diagram, k, budget)  # type: ignore[arg-type]
    else:
        corner_dimension = complex_structure(
            FinComplex.boundary(k), diagram.level(k), budget=budget
        ).dimension
    report.corner_surjective = rank(corner_images) == corner_dimension
    _logger.debug("cartesian square at k=%d for %s: %s", k, diagram.name, report.to_dict())
    return report


@dataclass(frozen=True, eq=False)
class Cover:
    """
    Combinatorics of a finite cover: the nerve, an algebra on every nonempty
    intersection, and restriction morphisms for codimension one inclusions.
    Missing restrictions between equal algebras default to the identity.
    """

    nerve: FinComplex
    local: Mapping[Simplex, LInftyAlgebra]
    restrictions: Mapping[tuple[Simplex, Simplex], LInftyMorphism] = field(default_factory=dict)

    @classmethod
    def constant(cls, nerve: FinComplex, algebra: LInftyAlgebra) -> Cover:
        return cls(nerve, {simplex: algebra for simplex in nerve.simplices})

    def algebra(self, simplex: Simplex) -> LInftyAlgebra:
        try:
            return self.local[simplex]
        except KeyError:
            raise SpaceMismatchError(f"no algebra on the intersection {simplex}") from None

    def restriction(self, smaller: Simplex, larger: Simplex) -> LInftyMorphism:
        given = self.restrictions.get((smaller, larger))
        if given is not None:
            return given
        if self.algebra(smaller) is self.algebra(larger):
            return identity_morphism(self.algebra(smaller))
        raise SpaceMismatchError(f"no restriction from {smaller} to {larger}")


def _label(simplex: Simplex) -> str:
    return "U" + "_".join(map(str, simplex))


def cech_builder(cover: Cover, *, name: str = "cech") -> SemicosimplicialLInfty:
    """
    The Cech diagram of a cover: `L_n` is the product over `n`-simplices of the
    nerve, and `(d^j x)_tau` restricts `x` from the face of `tau` missing its
    `j`-th vertex.
    """
    nerve = cover.nerve
    simplices = [nerve.of_dimension(n) for n in range(nerve.dimension + 1)]
    levels = tuple(
        ProductAlgebra(
            [cover.algebra(s) for s in level], [_label(s) for s in level], name=f"{name}{n}"
        )
        for n, level in enumerate(simplices)
    )
    cofaces: dict[tuple[int, int], LInftyMorphism] = {}
    for n in range(1, len(levels)):
        for j in range(n + 1):
            targets: dict[int, list[tuple[int, LInftyMorphism]]] = {}
            for t, tau in enumerate(simplices[n]):
                face = tau[:j] + tau[j + 1 :]
                s = simplices[n - 1].index(face)
                targets.setdefault(s, []).append((t, cover.restriction(face, tau)))
            cofaces[(n, j)] = _factorwise(levels[n - 1], levels[n], targets, name=f"d{n},{j}")
    diagram = SemicosimplicialLInfty(levels, cofaces, name=name)
    diagram.check_identities().raise_on_failure()
    return diagram


def _factorwise(
    source: ProductAlgebra,
    target: ProductAlgebra,
    targets: Mapping[int, Sequence[tuple[int, Optional[LInftyMorphism]]]],
    *,
    name: str,
) -> LInftyMorphism:
    """A strict map of products sending factor `s` into the listed factors of the target."""

    def image(key: int) -> Element:
        s, local = source.locate(key)
        result = Element()
        for t, morphism in targets.get(s, ()):
            value = morphism.component((local,)) if morphism is not None else Element.unit(local)
            result.iadd_coef(1, target.inject(t, value))
        return result

    return linear_strict_morphism(source, target, image, name=name)


@dataclass(frozen=True, eq=False)
class DiagramOverS:
    """
    A diagram of algebras over a finite category.

    Identity arrows are implicit and named `id:<object>`. `composition` gives
    the composite of every composable pair of non-identity arrows, keyed
    `(first, second)`.
    """

    objects: tuple[str, ...]
    arrows: Mapping[str, tuple[str, str]]
    composition: Mapping[tuple[str, str], str]
    algebras: Mapping[str, LInftyAlgebra]
    morphisms: Mapping[str, LInftyMorphism]
    name: str = "F"

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        for obj in self.objects:
            if obj not in self.algebras:
                raise SpaceMismatchError(f"no algebra at object {obj}")
        for arrow, (source, target) in self.arrows.items():
            morphism = self.morphisms.get(arrow)
            if morphism is None or not morphism.strict:
                raise SpaceMismatchError(f"arrow {arrow} needs a strict morphism")
            if (
                morphism.source is not self.algebras[source]
                or morphism.target is not self.algebras[target]
            ):
                raise SpaceMismatchError(f"morphism of {arrow} connects the wrong algebras")

    @classmethod
    def poset(
        cls,
        objects: Sequence[str],
        relations: Mapping[tuple[str, str], LInftyMorphism],
        algebras: Mapping[str, LInftyAlgebra],
        *,
        name: str = "F",
    ) -> DiagramOverS:
        """
        A diagram over a poset given by its strict relations `a < b`, which must
        be transitively closed.
        """
        arrows = {f"{a}->{b}": (a, b) for a, b in relations}
        composition = {}
        for a, b in relations:
            for b2, c in relations:
                if b2 == b:
                    if (a, c) not in relations:
                        raise SpaceMismatchError(f"relations are not transitive at {a} < {b} < {c}")
                    composition[(f"{a}->{b}", f"{b}->{c}")] = f"{a}->{c}"
        morphisms = {f"{a}->{b}": morphism for (a, b), morphism in relations.items()}
        return cls(tuple(objects), arrows, composition, algebras, morphisms, name=name)

    @staticmethod
    def identity(obj: str) -> str:
        return f"id:{obj}"

    def endpoints(self, arrow: str) -> tuple[str, str]:
        if arrow.startswith("id:"):
            obj = arrow[3:]
            return obj, obj
        return self.arrows[arrow]

    def is_identity(self, arrow: str) -> bool:
        return arrow.startswith("id:")

    def all_arrows(self) -> list[str]:
        return [self.identity(obj) for obj in self.objects] + list(self.arrows)

    def compose(self, first: str, second: str) -> str:
        """The arrow `second o first`."""
        if self.endpoints(first)[1] != self.endpoints(second)[0]:
            raise SpaceMismatchError(f"{first} and {second} are not composable")
        if self.is_identity(first):
            return second
        if self.is_identity(second):
            return first
        try:
            return self.composition[(first, second)]
        except KeyError:
            raise SpaceMismatchError(f"no composite given for {first} then {second}") from None

    def functor(self, arrow: str) -> Optional[LInftyMorphism]:
        """The morphism of an arrow; `None` stands for an identity."""
        if self.is_identity(arrow):
            return None
        return self.morphisms[arrow]

    def check_identities(self) -> CheckReport:
        """Checks `F(second o first) = F(second) F(first)` on every composable pair."""
        report = CheckReport(kind="functor")
        for (first, second), composite in sorted(self.composition.items()):
            source = self.algebras[self.endpoints(first)[0]]
            target = self.algebras[self.endpoints(second)[1]]
            for key in source.space:
                unit = Element.unit(key)
                lhs = self.morphisms[composite].linear(unit)
                rhs = self.morphisms[second].linear(self.morphisms[first].linear(unit))
                report.count("F(gf) = F(g)F(f)")
                if lhs != rhs:
                    report.fail("F(gf) = F(g)F(f)", (first, second, key), target.format(lhs - rhs))
        return report


String = tuple[str, tuple[str, ...]]


def composable_strings(diagram: DiagramOverS, n: int) -> list[String]:
    """Strings of `n` composable arrows, identities included, as `(start, arrows)`."""
    strings: list[String] = [(obj, ()) for obj in diagram.objects]
    for _ in range(n):
        longer = []
        for start, arrows in strings:
            end = diagram.endpoints(arrows[-1])[1] if arrows else start
            for arrow in diagram.all_arrows():
                if diagram.endpoints(arrow)[0] == end:
                    longer.append((start, (*arrows, arrow)))
        strings = longer
    return strings


def _end(diagram: DiagramOverS, string: String) -> str:
    start, arrows = string
    return diagram.endpoints(arrows[-1])[1] if arrows else start


def _string_label(string: String) -> str:
    start, arrows = string
    return "|".join(arrows) if arrows else start


def _string_face(diagram: DiagramOverS, string: String, j: int) -> tuple[String, Optional[str]]:
    """The face `d_j` of a string, and the arrow whose morphism is applied."""
    start, arrows = string
    n = len(arrows)
    if j == 0:
        return (diagram.endpoints(arrows[0])[1], arrows[1:]), None
    if j == n:
        return (start, arrows[:-1]), arrows[-1]
    composite = diagram.compose(arrows[j - 1], arrows[j])
    return (start, (*arrows[: j - 1], composite, *arrows[j + 1 :])), None


def cosimplicial_replacement(
    diagram: DiagramOverS, k_max: int
) -> CosimplicialLInfty:
    """
    The cosimplicial replacement truncated at `k_max`: level `n` is the product
    of `F(a_n)` over strings `a_0 -> .. -> a_n`. The coface `d^0` drops the
    first arrow, `d^j` composes arrows `j` and `j + 1`, `d^n` drops the last
    arrow and applies its morphism. Codegeneracies insert identities.
    """
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    strings = [composable_strings(diagram, n) for n in range(k_max + 1)]
    levels = tuple(
        ProductAlgebra(
            [diagram.algebras[_end(diagram, s)] for s in level],
            [_string_label(s) for s in level],
            name=f"Pi{n}({diagram.name})",
        )
        for n, level in enumerate(strings)
    )
    positions = [{s: p for p, s in enumerate(level)} for level in strings]
    cofaces: dict[tuple[int, int], LInftyMorphism] = {}
    for n in range(1, k_max + 1):
        for j in range(n + 1):
            targets: dict[int, list[tuple[int, Optional[LInftyMorphism]]]] = {}
            for t, string in enumerate(strings[n]):
                face, arrow = _string_face(diagram, string, j)
                morphism = diagram.functor(arrow) if arrow is not None else None
                targets.setdefault(positions[n - 1][face], []).append((t, morphism))
            cofaces[(n, j)] = _factorwise(levels[n - 1], levels[n], targets, name=f"d{n},{j}")
    codegeneracies: dict[tuple[int, int], LInftyMorphism] = {}
    for n in range(k_max):
        for j in range(n + 1):
            targets = {}
            for t, string in enumerate(strings[n + 1]):
                start, arrows = string
                if not diagram.is_identity(arrows[j]):
                    continue
                shorter = (start, arrows[:j] + arrows[j + 1 :])
                targets.setdefault(t, []).append((positions[n][shorter], None))
            codegeneracies[(n, j)] = _factorwise(
                levels[n + 1], levels[n], targets, name=f"s{n},{j}"
            )
    _logger.debug(
        "cosimplicial replacement of %s: level dimensions %s",
        diagram.name,
        [level.dimension for level in levels],
    )
    return CosimplicialLInfty(
        levels, cofaces, name=f"Pi({diagram.name})", codegeneracies=codegeneracies
    )


def holim_k(diagram: DiagramOverS, k: int, *, budget: Budget = DEFAULT_BUDGET) -> Totalization:
    """`Tot_k` of the cosimplicial replacement."""
    return tot_k(cosimplicial_replacement(diagram, k), k, budget=budget)


@dataclass(frozen=True)
class HolimReport:
    """
    Cohomology dimensions of `holim_k` and `holim_(k+1)`; only stabilized
    values are meaningful.
    """

    k: int
    at_k: Mapping[int, int]
    at_next: Mapping[int, int]

    @property
    def stabilized(self) -> bool:
        return dict(self.at_k) == dict(self.at_next)

    @property
    def dimensions(self) -> Optional[dict[int, int]]:
        return dict(self.at_k) if self.stabilized else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "status": "stable" if self.stabilized else "inconclusive",
            "at_k": {str(d): v for d, v in sorted(self.at_k.items())},
            "at_next": {str(d): v for d, v in sorted(self.at_next.items())},
        }


def holim_stabilization(
    diagram: DiagramOverS,
    k: int,
    degrees: Iterable[int],
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> HolimReport:
    degrees = list(degrees)
    replacement = cosimplicial_replacement(diagram, k + 1)
    at_k = tot_k(replacement, k, budget=budget).cohomology_dimensions(degrees)
    at_next = tot_k(replacement, k + 1, budget=budget).cohomology_dimensions(degrees)
    report = HolimReport(k, at_k, at_next)
    if not report.stabilized:
        _logger.warning("holim of %s has not stabilized at k=%d", diagram.name, k)
    return report


@dataclass(frozen=True, eq=False)
class VertexIsomorphism:
    """
    The bijection between Maurer-Cartan elements of `Tot(L)` and compatible
    families of simplices, one `n`-simplex of `Del(L_n)` per level.
    """

    totalization: Totalization
    budget: Budget = DEFAULT_BUDGET

    def forward(self, x: Mapping[int, Fraction]) -> tuple[DeligneSimplex, ...]:
        """
        Raises:
            NotMaurerCartanError: If `x` is not Maurer-Cartan in `Tot`.
        """
        total = self.totalization
        if not is_mc(total.algebra, x):
            raise NotMaurerCartanError("element is not Maurer-Cartan in the totalization")
        diagram = total.diagram
        return tuple(
            DeligneSimplex(diagram.level(n), n, alpha, self.budget)
            for n, alpha in enumerate(total.components(x))
        )

    def backward(self, family: Sequence[DeligneSimplex]) -> Element:
        """
        Raises:
            SpaceMismatchError: If the family is not compatible with the
                structure maps.
        """
        total = self.totalization
        diagram = total.diagram
        if len(family) != total.depth + 1:
            raise SpaceMismatchError(f"a family needs {total.depth + 1} simplices")
        for n, simplex in enumerate(family):
            if simplex.n != n or simplex.algebra is not diagram.level(n):
                raise SpaceMismatchError(f"entry {n} is not an {n}-simplex of level {n}")
        for n in range(1, len(family)):
            for j in range(n + 1):
                pushed = coefficient_pushforward(
                    diagram.coface(n, j), FinComplex.simplex(n - 1), budget=self.budget
                ).linear(family[n - 1].alpha)
                if pushed != family[n].face(j).alpha:
                    raise SpaceMismatchError(
                        f"family is not compatible with coface {j} at level {n}"
                    )
        if diagram.is_cosimplicial:
            for n in range(len(family) - 1):
                for j in range(n + 1):
                    pushed = coefficient_pushforward(
                        diagram.codegeneracy(n, j),  # type: ignore[attr-defined]
                        FinComplex.simplex(n + 1),
                        budget=self.budget,
                    ).linear(family[n + 1].alpha)
                    if pushed != family[n].degeneracy(j).alpha:
                        raise SpaceMismatchError(
                            f"family is not compatible with codegeneracy {j} at level {n}"
                        )
        return total.from_components([simplex.alpha for simplex in family])


def tot_vertex_iso(
    diagram: SemicosimplicialLInfty,
    *,
    cutoff: Optional[int] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> VertexIsomorphism:
    return VertexIsomorphism(tot(diagram, cutoff=cutoff, budget=budget), budget)


def mc_of_equalizer_matches(
    totalization: Totalization, samples: Iterable[Mapping[int, Fraction]]
) -> bool:
    """
    Whether, on every sample of the product, being a Maurer-Cartan element of
    the equalizer agrees with being compatible with Maurer-Cartan components.
    """
    product = totalization.product
    for sample in samples:
        sample = Element(sample)
        inside = totalization.algebra.subspace.contains(sample)
        components = [product.project(n, sample) for n in range(totalization.depth + 1)]
        levelwise = inside and all(
            is_mc(product.factors[n], alpha) for n, alpha in enumerate(components)
        )
        if inside:
            coordinates = totalization.algebra.coordinates(sample)
            if is_mc(totalization.algebra, coordinates) != levelwise:
                return False
    return True


@dataclass(frozen=True)
class DescentReport:
    """Homotopy groups of `Tot(Del(L))` against cohomology of `Tot(L)`."""

    groups: tuple[HomotopyGroupReport, ...]

    @property
    def passed(self) -> bool:
        return all(group.agree for group in self.groups)

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "groups": [group.to_dict() for group in self.groups]}


def _identity_map(m: int) -> tuple[int, ...]:
    return tuple(range(m + 1))


def abelian_descent_check(
    diagram: SemicosimplicialLInfty,
    max_degree: int,
    *,
    budget: Optional[Budget] = None,
) -> DescentReport:
    """
    Compares `pi_i` of the simplicial vector space `Tot(Del(L))`, computed from
    the Moore complex of its levels

        V_m = compatible degree 0 cocycles of C*(Delta^m x Delta^n; L_n),

    with the cohomology of `Tot(L)` in shifted degree `-i`, for
    `0 <= i <= max_degree`.

    Raises:
        StructureError: If a level is not abelian.
    """
    if diagram.is_cosimplicial:
        raise SpaceMismatchError("the descent check runs on semicosimplicial diagrams")
    for n, level in enumerate(diagram.levels):
        if not level.is_abelian:
            raise StructureError(f"level {n} of {diagram.name} is not abelian")
    top = diagram.top
    needed = max_degree + 1 + top
    if budget is None:
        budget = DEFAULT_BUDGET
    if budget.max_simplex_dimension < needed:
        budget = replace(budget, max_simplex_dimension=needed)

    def cochains(m: int, n: int, coefficients: int) -> CochainAlgebra:
        return complex_structure(
            FinComplex.nerve_of_product(m, n), diagram.level(coefficients), budget=budget
        )

    levels: dict[int, list[Element]] = {}

    def level(m: int) -> list[Element]:
        if m in levels:
            return levels[m]
        variables = [
            (n, key)
            for n in range(top + 1)
            for key in cochains(m, n, n).space.keys_of_degree(0)
        ]
        pullbacks = {
            (n, j): product_map(m, n, _identity_map(m), coface_map(n, j))
            for n in range(1, top + 1)
            for j in range(n + 1)
        }
        pushforwards = {
            (n, j): coefficient_pushforward(
                diagram.coface(n, j), FinComplex.nerve_of_product(m, n - 1), budget=budget
            )
            for n in range(1, top + 1)
            for j in range(n + 1)
        }
        columns = []
        for n, key in variables:
            unit = Element.unit(key)
            own = cochains(m, n, n)
            column = _tag(own.bracket((key,)), "z", n, -1)
            if n >= 1:
                for j in range(n + 1):
                    pulled = pullback_cochain(pullbacks[(n, j)], own, cochains(m, n - 1, n), unit)
                    column.iadd_coef(-1, _tag(pulled, "c", n, j))
            if n + 1 <= top:
                for j in range(n + 2):
                    column.iadd_coef(1, _tag(pushforwards[(n + 1, j)].linear(unit), "c", n + 1, j))
            columns.append(column)
        levels[m] = [
            Element((variables[p], c) for p, c in relation.items()) for relation in kernel(columns)
        ]
        _logger.debug("descent level %d of %s: dimension %d", m, diagram.name, len(levels[m]))
        return levels[m]

    def face(m: int, j: int, v: Element) -> Element:
        result = Element()
        for n in range(top + 1):
            component = Element((key, c) for (level_n, key), c in v.items() if level_n == n)
            if not component:
                continue
            mapping = product_map(m, n, coface_map(m, j), _identity_map(n))
            pulled = pullback_cochain(mapping, cochains(m, n, n), cochains(m - 1, n, n), component)
            result.iadd_coef(1, Element(((n, key), c) for key, c in pulled.items()))
        return result

    total = tot(diagram, budget=budget)
    groups = tuple(
        HomotopyGroupReport(
            i,
            total.algebra.cohomology_dimension(-i),
            moore_homology_dimension(level, face, i),
        )
        for i in range(max_degree + 1)
    )
    report = DescentReport(groups)
    _logger.debug("descent check for %s: %s", diagram.name, report.to_dict())
    return report


def cech_cohomology_dimensions(
    nerve: FinComplex, coefficient_dimension: int = 1
) -> dict[int, int]:
    """Dimensions of the Cech cohomology of a nerve with constant coefficients."""
    differentials: dict[int, list[Element]] = {}
    for p in range(nerve.dimension + 1):
        images = []
        for sigma in nerve.of_dimension(p):
            image = Element()
            for tau in nerve.of_dimension(p + 1):
                if set(sigma) <= set(tau):
                    j = next(q for q, v in enumerate(tau) if v not in sigma)
                    image.add_term(tau, Fraction(-1 if j % 2 else 1))
            images.append(image)
        differentials[p] = images
    dimensions = {}
    for p in range(nerve.dimension + 1):
        outgoing = rank(differentials[p])
        incoming = rank(differentials[p - 1]) if p else 0
        dimensions[p] = coefficient_dimension * (len(nerve.of_dimension(p)) - outgoing - incoming)
    return dimensions


__all__ = [
    "CartesianReport",
    "CosimplicialLInfty",
    "Cover",
    "DescentReport",
    "DiagramOverS",
    "HolimReport",
    "MatchingSpace",
    "SemicosimplicialLInfty",
    "Totalization",
    "VertexIsomorphism",
    "abelian_descent_check",
    "cartesian_check",
    "cech_builder",
    "cech_cohomology_dimensions",
    "composable_strings",
    "cosimplicial_replacement",
    "holim_k",
    "holim_stabilization",
    "matching_lift",
    "matching_space",
    "mc_of_equalizer_matches",
    "tot",
    "tot_k",
    "tot_vertex_iso",
]
