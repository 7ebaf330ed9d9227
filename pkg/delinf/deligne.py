from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from delinf._graded.linalg import kernel, rank, solve
from delinf._graded.multilinear import LinearMap
from delinf._graded.spaces import Element
from delinf._moore import moore_homology_dimension
from delinf.cochains import (
    CochainAlgebra,
    cochain_structure,
    coefficient_pushforward,
    complex_structure,
    pullback_cochain,
)
from delinf.complexes import (
    FinComplex,
    Simplex,
    SimplicialMap,
    codegeneracy_map,
    coface_map,
)
from delinf.config import DEFAULT_BUDGET, Budget
from delinf.errors import (
    DegreeError,
    HornFillingError,
    NotMaurerCartanError,
    SpaceMismatchError,
    StructureError,
)
from delinf.extensions import CentralExtension, is_lift_difference, mc_lift
from delinf.kuranishi import kuranishi_solve
from delinf.linfty import LInftyAlgebra, LInftyMorphism, is_mc
from delinf.transfer import Contraction, Transfer

_logger = logging.getLogger("delinf")


@dataclass(frozen=True, eq=False)
class DeligneSimplex:
    """
    An `n`-simplex of the Deligne-Getzler infinity groupoid of an algebra: a
    Maurer-Cartan element of `C*(Delta^n; L)`.

    Raises:
        NotMaurerCartanError: If `alpha` is not Maurer-Cartan.
    """

    algebra: LInftyAlgebra
    n: int
    alpha: Element
    budget: Budget = field(default=DEFAULT_BUDGET, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", Element(self.alpha))
        if not is_mc(self.cochains, self.alpha):
            raise NotMaurerCartanError(
                f"cochain is not a {self.n}-simplex of Del({self.algebra.name})"
            )

    @property
    def cochains(self) -> CochainAlgebra:
        return cochain_structure(self.n, self.algebra, budget=self.budget)

    def value(self, simplex: Simplex) -> Element:
        return self.cochains.value(self.alpha, tuple(simplex))

    def vertex(self, i: int) -> Element:
        return self.value((i,))

    def _pull(self, theta: tuple[int, ...]) -> DeligneSimplex:
        m = len(theta) - 1
        mapping = SimplicialMap.ordinal(theta, self.n)
        target = cochain_structure(m, self.algebra, budget=self.budget)
        pulled = pullback_cochain(mapping, self.cochains, target, self.alpha)
        return DeligneSimplex(self.algebra, m, pulled, self.budget)

    def face(self, j: int) -> DeligneSimplex:
        """The face opposite vertex `j`."""
        return self._pull(coface_map(self.n, j))

    def degeneracy(self, j: int) -> DeligneSimplex:
        return self._pull(codegeneracy_map(self.n, j))

    def restrict(self, sub: FinComplex) -> Element:
        """The cochain restricted to a subcomplex of the simplex."""
        target = complex_structure(sub, self.algebra, budget=self.budget)
        mapping = SimplicialMap.inclusion(sub, FinComplex.simplex(self.n))
        return pullback_cochain(mapping, self.cochains, target, self.alpha)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DeligneSimplex):
            return NotImplemented
        return self.algebra is other.algebra and self.n == other.n and self.alpha == other.alpha


@dataclass(frozen=True)
class StarData:
    """
    The part of a simplex seen from one vertex: the vertex value and the values
    on the positive dimensional simplices containing the vertex. Missing
    simplices carry zero.
    """

    n: int
    vertex: int
    x: Element
    values: Mapping[Simplex, Element] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.vertex <= self.n:
            raise ValueError(f"vertex {self.vertex} out of range for the {self.n}-simplex")
        for simplex in self.values:
            if self.vertex not in simplex or len(simplex) < 2 or simplex[-1] > self.n:
                raise SpaceMismatchError(f"{simplex} is not in the star of vertex {self.vertex}")


def _vertex_homotopy_key(cochains: CochainAlgebra, i: int, key: int) -> Element:
    simplex, b = cochains.basis.decode(key)
    if i not in simplex or len(simplex) < 2:
        return Element()
    j = simplex.index(i)
    rest = simplex[:j] + simplex[j + 1 :]
    return Element({cochains.basis.key(rest, b): -1 if j % 2 else 1})


def vertex_contraction(
    n: int, i: int, algebra: LInftyAlgebra, *, budget: Budget = DEFAULT_BUDGET
) -> Contraction:
    """
    The contraction of `C*(Delta^n; L)` onto `L` at vertex `i`: constant
    cochains, evaluation at `i`, and the cone homotopy

        h(e_rho x) = (-1)^j e_(rho minus i) x    if i sits at position j of rho.
    """
    cochains = cochain_structure(n, algebra, budget=budget)
    vertices = [(v,) for v in range(n + 1)]

    def inclusion(b) -> Element:
        return Element((cochains.basis.key(v, b), 1) for v in vertices)

    def projection(key) -> Element:
        simplex, b = cochains.basis.decode(key)
        return Element({b: 1}) if simplex == (i,) else Element()

    return Contraction(
        big=cochains,
        small=algebra.space,
        inclusion=LinearMap(compute=inclusion),
        projection=LinearMap(compute=projection),
        homotopy=LinearMap(compute=lambda key: _vertex_homotopy_key(cochains, i, key), degree=-1),
        strict_projection=True,
        big_keys=list(cochains.space),
    )


def vertex_transfer(
    n: int, i: int, algebra: LInftyAlgebra, *, budget: Budget = DEFAULT_BUDGET
) -> Transfer:
    key = ("vertex transfer", n, i)
    if key not in algebra.cache:
        contraction = vertex_contraction(n, i, algebra, budget=budget)
        algebra.cache[key] = Transfer(contraction, name=algebra.name)
    return algebra.cache[key]


def rho(simplex: DeligneSimplex, i: int) -> StarData:
    """The star data of a simplex at vertex `i`."""
    values = {
        sigma: simplex.value(sigma)
        for sigma in FinComplex.simplex(simplex.n).simplices
        if i in sigma and len(sigma) > 1
    }
    return StarData(simplex.n, i, simplex.vertex(i), {s: v for s, v in values.items() if v})


def simplex_from_star(
    algebra: LInftyAlgebra, star: StarData, *, budget: Budget = DEFAULT_BUDGET
) -> DeligneSimplex:
    """
    The unique simplex with the given star data, by the Kuranishi iteration for
    the contraction at the star's vertex.

    Raises:
        NotMaurerCartanError: If the vertex value is not Maurer-Cartan.
        DegreeError: If a star value has the wrong degree.
    """
    n, i = star.n, star.vertex
    for simplex, value in star.values.items():
        algebra.space.require_degree(value, 1 - len(simplex))
    algebra.space.require_degree(star.x, 0)
    if not is_mc(algebra, star.x):
        raise NotMaurerCartanError("the vertex value is not Maurer-Cartan")
    cochains = cochain_structure(n, algebra, budget=budget)
    transfer = vertex_transfer(n, i, algebra, budget=budget)
    v = cochains.assemble(star.values)
    kv = transfer.contraction.homotopy(v)
    alpha = kuranishi_solve(transfer, star.x, kv)
    return DeligneSimplex(algebra, n, alpha, budget)


def higher_bch(
    algebra: LInftyAlgebra, star: StarData, *, budget: Budget = DEFAULT_BUDGET
) -> DeligneSimplex:
    """The face opposite the star's vertex of the simplex it determines."""
    return simplex_from_star(algebra, star, budget=budget).face(star.vertex)


def _require_lie_degree(algebra: LInftyAlgebra, *elements: Mapping[int, Fraction]) -> None:
    for x in elements:
        for key in x:
            if algebra.degree(key) != -1:
                raise DegreeError("gauge and composition parameters live in shifted degree -1")


def bch(algebra: LInftyAlgebra, a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> Element:
    """
    The composition of two edges: the third edge of the 2-simplex with star
    `(0, a, b, 0)` at vertex 1. For a nilpotent Lie algebra in degree 0 this
    is `log(exp(a) exp(b))`.
    """
    _require_lie_degree(algebra, a, b)
    star = StarData(2, 1, Element(), {(0, 1): Element(a), (1, 2): Element(b)})
    return simplex_from_star(algebra, star).value((0, 2))


def gauge_witness(
    algebra: LInftyAlgebra, x: Mapping[int, Fraction], a: Mapping[int, Fraction]
) -> DeligneSimplex:
    """The 1-simplex starting at `x` with edge `a`."""
    _require_lie_degree(algebra, a)
    return simplex_from_star(algebra, StarData(1, 0, Element(x), {(0, 1): Element(a)}))


def gauge(algebra: LInftyAlgebra, x: Mapping[int, Fraction], a: Mapping[int, Fraction]) -> Element:
    """The gauge action of `a` on the Maurer-Cartan element `x`."""
    return gauge_witness(algebra, x, a).vertex(1)


@dataclass(frozen=True, eq=False)
class HornData:
    """A Maurer-Cartan cochain on the horn of the `n`-simplex at vertex `k`."""

    n: int
    k: int
    alpha: Element

    @property
    def complex(self) -> FinComplex:
        return FinComplex.horn(self.n, self.k)

    @classmethod
    def from_values(
        cls,
        algebra: LInftyAlgebra,
        n: int,
        k: int,
        values: Mapping[Simplex, Mapping[int, Fraction]],
    ) -> HornData:
        cochains = complex_structure(FinComplex.horn(n, k), algebra)
        return cls(n, k, cochains.assemble(values))


def horn_fill(
    algebra: LInftyAlgebra, horn: HornData, *, budget: Budget = DEFAULT_BUDGET
) -> DeligneSimplex:
    """
    A filler of a horn, taking zero on the top simplex.

    Raises:
        HornFillingError: If the horn data is not Maurer-Cartan or the filler
            does not restrict to it.
    """
    if horn.n < 1:
        raise HornFillingError("horns start in dimension 1")
    cochains = complex_structure(horn.complex, algebra, budget=budget)
    if not is_mc(cochains, horn.alpha):
        raise HornFillingError("horn data is not Maurer-Cartan")
    star = _star_of_horn(cochains, horn)
    filler = simplex_from_star(algebra, star, budget=budget)
    if filler.restrict(horn.complex) != horn.alpha:
        raise HornFillingError("filler does not restrict to the horn")
    return filler


def _star_of_horn(cochains: CochainAlgebra, horn: HornData, top: Element | None = None) -> StarData:
    values = {
        sigma: cochains.value(horn.alpha, sigma)
        for sigma in horn.complex.simplices
        if horn.k in sigma and len(sigma) > 1
    }
    if top:
        values[tuple(range(horn.n + 1))] = top
    return StarData(
        horn.n,
        horn.k,
        cochains.value(horn.alpha, (horn.k,)),
        {s: v for s, v in values.items() if v},
    )


def is_surjective_in_nonpositive_degrees(morphism: LInftyMorphism) -> bool:
    """Whether `f_1` is onto in every shifted degree at most -1."""
    target = morphism.target
    if not isinstance(target, LInftyAlgebra):
        raise SpaceMismatchError("surjectivity is checked against a finite algebra")
    source = morphism.source
    for degree in sorted(set(target.space.degrees)):
        if degree > -1:
            continue
        images = [morphism.component((key,)) for key in source.space.keys_of_degree(degree)]
        if rank(images) != len(target.space.keys_of_degree(degree)):
            return False
    return True


def lift_horn(
    morphism: LInftyMorphism,
    horn: HornData,
    target: DeligneSimplex,
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> DeligneSimplex:
    """
    Solves the lifting problem of a horn in the source against a simplex in
    the target of a strict morphism.

    Raises:
        HornFillingError: If the data is inconsistent or no lift exists.
    """
    if not morphism.strict:
        raise HornFillingError("horns are lifted against strict morphisms")
    source = morphism.source
    if target.algebra is not morphism.target or target.n != horn.n:
        raise HornFillingError("target simplex does not match the morphism and horn")
    horn_cochains = complex_structure(horn.complex, source, budget=budget)
    if not is_mc(horn_cochains, horn.alpha):
        raise HornFillingError("horn data is not Maurer-Cartan")
    pushed = coefficient_pushforward(morphism, horn.complex, budget=budget).linear(horn.alpha)
    if pushed != target.restrict(horn.complex):
        raise HornFillingError("horn does not map to the boundary of the target simplex")
    top_simplex = tuple(range(horn.n + 1))
    top_target = target.value(top_simplex)
    keys = source.space.keys_of_degree(-horn.n)
    solution = solve([morphism.component((key,)) for key in keys], top_target)
    if solution is None:
        raise HornFillingError("top value of the target has no preimage")
    top = Element((keys[j], c) for j, c in solution.items())
    lifted = simplex_from_star(source, _star_of_horn(horn_cochains, horn, top), budget=budget)
    full = coefficient_pushforward(morphism, FinComplex.simplex(horn.n), budget=budget)
    if full.linear(lifted.alpha) != target.alpha:
        raise HornFillingError("lift does not map onto the target simplex")
    return lifted


def simplex_extension(
    extension: CentralExtension, n: int, *, budget: Budget = DEFAULT_BUDGET
) -> CentralExtension:
    """The central extension `C*(Delta^n; K) -> C*(Delta^n; L) -> C*(Delta^n; M)`."""
    return CentralExtension(
        coefficient_pushforward(extension.projection, FinComplex.simplex(n), budget=budget)
    )


def lift_simplex(
    extension: CentralExtension, simplex: DeligneSimplex, *, budget: Budget = DEFAULT_BUDGET
) -> Optional[DeligneSimplex]:
    """A simplex of `Del(L)` over a simplex of `Del(M)`, or `None` when obstructed."""
    if simplex.algebra is not extension.base:
        raise SpaceMismatchError("simplex does not live over the base of the extension")
    lifted = mc_lift(simplex_extension(extension, simplex.n, budget=budget), simplex.alpha)
    if lifted is None:
        return None
    return DeligneSimplex(extension.total, simplex.n, lifted, budget)


def principal_action(
    extension: CentralExtension,
    simplex: DeligneSimplex,
    z: Mapping[int, Fraction],
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> DeligneSimplex:
    """
    Translates a simplex of `Del(L)` by a degree 0 cocycle of `C*(Delta^n; K)`.

    Raises:
        SpaceMismatchError: If `z` is not a kernel cocycle.
    """
    if simplex.algebra is not extension.total:
        raise SpaceMismatchError("simplex does not live in the total algebra")
    cochains = simplex_extension(extension, simplex.n, budget=budget)
    z = Element(z)
    cochains.total.space.require_degree(z, 0)
    if cochains.projection.linear(z) or cochains.total.apply(z):
        raise SpaceMismatchError("translation is not a cocycle of the kernel")
    return DeligneSimplex(extension.total, simplex.n, simplex.alpha + z, budget)


def simplex_lifts_differ_by_cocycle(
    extension: CentralExtension,
    first: DeligneSimplex,
    second: DeligneSimplex,
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> bool:
    """Whether two lifts of the same simplex differ by a kernel cocycle."""
    if first.n != second.n:
        return False
    return is_lift_difference(
        simplex_extension(extension, first.n, budget=budget), first.alpha, second.alpha
    )


@dataclass(frozen=True)
class HomotopyGroupReport:
    """
    Attributes:
        i: The homotopy degree.
        cohomology: Dimension of the cohomology in shifted degree `-i`.
        simplicial: Dimension of `pi_i` from the Moore complex of `MC(C*(Delta^.; L))`.
    """

    i: int
    cohomology: int
    simplicial: int

    @property
    def agree(self) -> bool:
        return self.cohomology == self.simplicial

    def to_dict(self) -> dict[str, int | bool]:
        return {
            "i": self.i,
            "cohomology": self.cohomology,
            "simplicial": self.simplicial,
            "agree": self.agree,
        }


def maurer_cartan_cocycles(cochains: CochainAlgebra) -> list[Element]:
    """Basis of the degree 0 cocycles of an abelian cochain algebra."""
    keys = cochains.space.keys_of_degree(0)
    columns = [cochains.bracket((key,)) for key in keys]
    return [Element((keys[j], c) for j, c in relation.items()) for relation in kernel(columns)]


def abelian_homotopy_groups(
    algebra: LInftyAlgebra, i: int, *, budget: Budget = DEFAULT_BUDGET
) -> HomotopyGroupReport:
    """
    Compares `pi_i` of the Deligne groupoid of an abelian algebra, computed
    simplicially, with the cohomology in shifted degree `-i`.

    Raises:
        StructureError: If the algebra is not abelian.
    """
    if not algebra.is_abelian:
        raise StructureError(f"{algebra.name} is not abelian")
    if i < 0:
        raise ValueError("homotopy degrees are non-negative")

    def level(m: int) -> list[Element]:
        return maurer_cartan_cocycles(cochain_structure(m, algebra, budget=budget))

    def face(m: int, j: int, v: Element) -> Element:
        mapping = SimplicialMap.ordinal(coface_map(m, j), m)
        return pullback_cochain(
            mapping,
            cochain_structure(m, algebra, budget=budget),
            cochain_structure(m - 1, algebra, budget=budget),
            v,
        )

    simplicial = moore_homology_dimension(level, face, i)
    report = HomotopyGroupReport(i, algebra.cohomology_dimension(-i), simplicial)
    _logger.debug("homotopy group %d of %s: %s", i, algebra.name, report)
    return report


__all__ = [
    "DeligneSimplex",
    "HomotopyGroupReport",
    "HornData",
    "StarData",
    "abelian_homotopy_groups",
    "bch",
    "gauge",
    "gauge_witness",
    "higher_bch",
    "horn_fill",
    "is_surjective_in_nonpositive_degrees",
    "lift_horn",
    "lift_simplex",
    "maurer_cartan_cocycles",
    "principal_action",
    "rho",
    "simplex_extension",
    "simplex_from_star",
    "simplex_lifts_differ_by_cocycle",
    "vertex_contraction",
    "vertex_transfer",
]
