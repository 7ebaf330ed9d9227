from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Optional

from delinf._graded.linalg import Subspace, combine, kernel, rank, solve
from delinf._graded.spaces import Element
from delinf.errors import (
    NotInImageError,
    NotMaurerCartanError,
    SpaceMismatchError,
    StructureError,
)
from delinf.linfty import LInftyAlgebra, LInftyMorphism, curvature, is_mc

_logger = logging.getLogger("delinf")


class CentralExtension:
    """
    A central extension `0 -> K -> L -> M -> 0` given by a strict surjection.

    `K` is the kernel of the projection. Centrality means every Taylor
    coefficient of arity at least 2 vanishes as soon as one argument lies in
    `K`, which is verified on construction.

    Raises:
        StructureError: If the projection is not strict, not surjective or the
            kernel is not central.
    """

    def __init__(self, projection: LInftyMorphism):
        if not projection.strict:
            raise StructureError("the projection of a central extension must be strict")
        if not isinstance(projection.target, LInftyAlgebra):
            raise SpaceMismatchError("the base of an extension must be a finite algebra")
        self.projection = projection
        self.total: LInftyAlgebra = projection.source
        self.base: LInftyAlgebra = projection.target
        images = [projection.component((key,)) for key in self.total.space]
        if rank(images) != self.base.dimension:
            raise StructureError("the projection of a central extension must be surjective")
        self._check_central()

    def kernel_basis(self, degree: int) -> list[Element]:
        """Basis of the kernel in the given shifted degree."""
        keys = self.total.space.keys_of_degree(degree)
        columns = [self.projection.component((key,)) for key in keys]
        return [
            Element((keys[j], c) for j, c in relation.items())
            for relation in kernel(columns)
        ]

    @cached_property
    def kernel(self) -> list[Element]:
        degrees = sorted(set(self.total.space.degrees))
        return [v for degree in degrees for v in self.kernel_basis(degree)]

    def _check_central(self) -> None:
        total = self.total
        keys = list(total.space)
        for k in self.kernel:
            for arity in range(2, total.arity_bound + 1):
                for others in combinations_with_replacement(keys, arity - 1):
                    args = [k] + [Element.unit(key) for key in others]
                    if total.apply(*args):
                        raise StructureError(
                            f"kernel element {total.format(k)} is not central in q_{arity}"
                        )

    @cached_property
    def boundaries(self) -> Subspace:
        """`q_1` of the degree 0 part of the kernel, inside degree 1."""
        return Subspace(self.total.apply(k) for k in self.kernel_basis(0))

    def lift(self, x: Mapping[int, Fraction]) -> Element:
        """
        A degree 0 preimage of `x` under the projection.

        Raises:
            NotInImageError: If `x` is not in the image of the degree 0 part.
        """
        keys = self.total.space.keys_of_degree(0)
        columns = [self.projection.component((key,)) for key in keys]
        solution = solve(columns, x)
        if solution is None:
            raise NotInImageError("element has no degree 0 preimage")
        return Element((keys[j], c) for j, c in solution.items())


@dataclass(frozen=True)
class ObstructionClass:
    """
    The class of `R(y)` in the second cohomology of the kernel.

    Attributes:
        representative: `R(y)` for the chosen lift `y`, a degree 1 cocycle of `K`.
        normal_form: The representative reduced modulo `q_1(K^0)`.
    """

    representative: Element
    normal_form: Element

    @property
    def is_zero(self) -> bool:
        return not self.normal_form


def obstruction_mc(extension: CentralExtension, x: Mapping[int, Fraction]) -> ObstructionClass:
    """
    The obstruction to lifting a Maurer-Cartan element of the base.

    The class does not depend on the lift: lifts differ by an element of
    `K^0`, and the curvature then changes by its `q_1`.

    Raises:
        NotMaurerCartanError: If `x` is not Maurer-Cartan in the base.
    """
    if not is_mc(extension.base, x):
        raise NotMaurerCartanError(f"element is not Maurer-Cartan in {extension.base.name}")
    y = extension.lift(x)
    representative = curvature(extension.total, y)
    normal_form = extension.boundaries.normal_form(representative)
    _logger.debug("obstruction of %s: %s", extension.base.format(x), normal_form)
    return ObstructionClass(representative, normal_form)


def mc_lift(extension: CentralExtension, x: Mapping[int, Fraction]) -> Optional[Element]:
    """
    A Maurer-Cartan lift of `x`, or `None` when the obstruction is nonzero.
    """
    obstruction = obstruction_mc(extension, x)
    if not obstruction.is_zero:
        return None
    y = extension.lift(x)
    kernel0 = extension.kernel_basis(0)
    images = [extension.total.apply(k) for k in kernel0]
    solution = solve(images, obstruction.representative)
    if solution is None:
        raise StructureError("obstruction vanished but no correction exists")
    return y - combine(solution, kernel0)


def is_lift_difference(
    extension: CentralExtension, y1: Mapping[int, Fraction], y2: Mapping[int, Fraction]
) -> bool:
    """
    Whether two Maurer-Cartan lifts of the same element differ by a degree 0
    cocycle of the kernel.
    """
    difference = Element(y1) - Element(y2)
    return not extension.projection.linear(difference) and not extension.total.apply(difference)


def pushforward_obstruction(
    obstruction: ObstructionClass,
    total_map: LInftyMorphism,
    target: CentralExtension,
) -> Element:
    """
    Image of an obstruction class under a strict morphism of extensions,
    in normal form for the target.
    """
    if not total_map.strict or total_map.target is not target.total:
        raise SpaceMismatchError("obstructions push forward along strict maps of extensions")
    return target.boundaries.normal_form(total_map.linear(obstruction.representative))


__all__ = [
    "CentralExtension",
    "ObstructionClass",
    "is_lift_difference",
    "mc_lift",
    "obstruction_mc",
    "pushforward_obstruction",
]
