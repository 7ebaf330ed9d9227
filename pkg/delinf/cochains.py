from __future__ import annotations

import logging
from collections.abc import Hashable, Mapping, Sequence
from fractions import Fraction
from typing import Optional

from delinf._graded.multilinear import LinearMap, MultiIndex, MultilinearMap
from delinf._graded.spaces import BasisElement, Element, GradedSpace
from delinf.complexes import FinComplex, Simplex, SimplicialMap
from delinf.config import DEFAULT_BUDGET, Budget
from delinf.errors import NotMaurerCartanError, SpaceMismatchError
from delinf.forms import (
    PolyForm,
    differentiate_monomial,
    dupont_monomial,
    face_integrals,
    multiply_monomials,
    whitney_form,
)
from delinf.linfty import (
    LInftyAlgebra,
    LInftyMorphism,
    is_mc,
    linear_strict_morphism,
)
from delinf.transfer import Contraction, Transfer

_logger = logging.getLogger("delinf")

FormKey = tuple[tuple[int, ...], tuple[int, ...], int]


class FormExtension:
    """
    Polynomial forms on the `n`-simplex with coefficients in an algebra.

    Keys are `(exponents, wedge, b)` for a form monomial and a coefficient
    basis key `b`. The Taylor coefficients are

        q_1(w x)           = -dw x + (-1)^|w| w q_1(x),
        q_k(w_1 x_1, ...)  = (-1)^(sum |w_a| + sum_{a<b} |x_a||w_b|) (w_1 ... w_k) q_k(x_1, ...).
    """

    def __init__(self, n: int, algebra: LInftyAlgebra):
        self.n = n
        self.algebra = algebra

    @property
    def nilpotency(self) -> int:
        return self.algebra.nilpotency

    @property
    def arity_bound(self) -> int:
        return self.algebra.arity_bound

    def degree(self, key: Hashable) -> int:
        _, wedge, b = key  # type: ignore[misc]
        return len(wedge) + self.algebra.degree(b)

    def weight(self, key: Hashable) -> int:
        return self.algebra.weight(key[2])  # type: ignore[index]

    def bracket(self, keys: Sequence[Hashable]) -> Element:
        if len(keys) == 1:
            return self._differential(keys[0])  # type: ignore[arg-type]
        inner = self.algebra.bracket(tuple(key[2] for key in keys))  # type: ignore[index]
        if not inner:
            return Element()
        sign = 1
        exponents, wedge, _ = keys[0]  # type: ignore[misc]
        monomial = (exponents, wedge)
        form_degree_sum = len(wedge)
        coefficient_degrees = [self.algebra.degree(keys[0][2])]  # type: ignore[index]
        for key in keys[1:]:
            e, w, b = key  # type: ignore[misc]
            if sum(coefficient_degrees) * len(w) % 2:
                sign = -sign
            step, monomial = multiply_monomials(monomial, (e, w))
            if not step:
                return Element()
            sign *= step
            form_degree_sum += len(w)
            coefficient_degrees.append(self.algebra.degree(b))
        if form_degree_sum % 2:
            sign = -sign
        return Element(
            ((monomial[0], monomial[1], b), sign * c) for b, c in inner.items()
        )

    def _differential(self, key: FormKey) -> Element:
        exponents, wedge, b = key
        result = Element()
        for sign, monomial in differentiate_monomial((exponents, wedge)):
            result.add_term(monomial + (b,), Fraction(-sign))
        inner = self.algebra.bracket((b,))
        parity = -1 if len(wedge) % 2 else 1
        for b2, c in inner.items():
            result.add_term((exponents, wedge, b2), parity * c)
        return result

    def tensor(self, form: PolyForm, x: Mapping[int, Fraction]) -> Element:
        """The element `form (x) x`."""
        result = Element()
        for (exponents, wedge), c in form.terms.items():
            for b, d in x.items():
                result.add_term((exponents, wedge, b), c * d)
        return result


class CochainBasis:
    """
    The basis of normalized cochains `C*(X; L)`: one key per simplex and
    coefficient basis element, ordered by simplex then coefficient.
    """

    def __init__(self, complex: FinComplex, algebra: LInftyAlgebra):
        self.complex = complex
        self.algebra = algebra
        dim = algebra.dimension
        basis = []
        for simplex in complex.simplices:
            label = "e" + "_".join(map(str, simplex))
            for element in algebra.space.basis:
                basis.append(
                    BasisElement(
                        f"{label}:{element.name}",
                        len(simplex) - 1 + element.degree,
                        element.weight,
                    )
                )
        self.space = GradedSpace(tuple(basis), algebra.nilpotency)
        self._dim = dim

    def key(self, simplex: Simplex, b: int) -> int:
        return self.complex.index(tuple(simplex)) * self._dim + b

    def decode(self, key: int) -> tuple[Simplex, int]:
        position, b = divmod(key, self._dim)
        return self.complex.simplices[position], b

    def value(self, alpha: Mapping[int, Fraction], simplex: Simplex) -> Element:
        """The coefficient element of a cochain on one simplex."""
        offset = self.complex.index(tuple(simplex)) * self._dim
        return Element(
            (key - offset, c) for key, c in alpha.items() if offset <= key < offset + self._dim
        )

    def assemble(self, values: Mapping[Simplex, Mapping[int, Fraction]]) -> Element:
        result = Element()
        for simplex, x in values.items():
            for b, c in x.items():
                result.add_term(self.key(simplex, b), c)
        return result


def _standard_basis(n: int, algebra: LInftyAlgebra) -> CochainBasis:
    key = ("basis", n)
    if key not in algebra.cache:
        algebra.cache[key] = CochainBasis(FinComplex.simplex(n), algebra)
    return algebra.cache[key]


def form_contraction(n: int, algebra: LInftyAlgebra) -> Contraction:
    """
    Dupont's contraction tensored with the identity of `algebra`: from
    `Omega(Delta^n) (x) L` onto `C*(Delta^n; L)`.
    """
    basis = _standard_basis(n, algebra)
    big = FormExtension(n, algebra)

    def inclusion(key: Hashable) -> Element:
        simplex, b = basis.decode(key)  # type: ignore[arg-type]
        return big.tensor(whitney_form(n, simplex), {b: Fraction(1)})

    def projection(key: Hashable) -> Element:
        exponents, wedge, b = key  # type: ignore[misc]
        return Element(
            (basis.key(face, b), value)
            for face, value in face_integrals(n, (exponents, wedge))
        )

    def homotopy(key: Hashable) -> Element:
        exponents, wedge, b = key  # type: ignore[misc]
        return Element(
            ((e, w, b), -c) for (e, w), c in dupont_monomial(n, (exponents, wedge)).terms.items()
        )

    return Contraction(
        big=big,
        small=basis.space,
        inclusion=LinearMap(compute=inclusion),
        projection=LinearMap(compute=projection),
        homotopy=LinearMap(compute=homotopy, degree=-1),
    )


def simplex_transfer(n: int, algebra: LInftyAlgebra) -> Transfer:
    """The Dupont transfer onto `C*(Delta^n; L)`, cached on the algebra."""
    key = ("transfer", n)
    if key not in algebra.cache:
        algebra.cache[key] = Transfer(
            form_contraction(n, algebra), name=f"C*(D{n};{algebra.name})"
        )
    return algebra.cache[key]


class CochainAlgebra(LInftyAlgebra):
    """
    The transferred structure on normalized cochains `C*(X; L)` of a finite
    complex.

    On a standard simplex this is the Dupont transfer. On a general complex
    the value of a coefficient at a simplex `tau` is computed on `tau` alone:
    it is the top component of the transfer onto `C*(Delta^k; L)` of the
    inputs restricted to `tau`, which is what makes restriction to a
    subcomplex strict.
    """

    def __init__(
        self,
        complex: FinComplex,
        algebra: LInftyAlgebra,
        *,
        budget: Budget = DEFAULT_BUDGET,
        name: Optional[str] = None,
    ):
        self.complex = complex
        self.coefficients = algebra
        self.basis = CochainBasis(complex, algebra)
        budget.guard(
            simplex_dimension=complex.dimension,
            coefficient_dimension=algebra.dimension,
            arity_bound=algebra.arity_bound,
            cochain_dimension=self.basis.space.dimension,
        )
        self._degree_set = sorted(set(algebra.space.degrees))
        space = self.basis.space
        taylor = {
            arity: MultilinearMap(space, arity, 1, compute=self._glued)
            for arity in range(1, space.arity_bound + 1)
        }
        super().__init__(space, taylor, name=name or f"C*({algebra.name})")

    def _glued(self, index: MultiIndex) -> Element:
        decoded = [self.basis.decode(key) for key in index]
        support = sorted({v for simplex, _ in decoded for v in simplex})
        in_degree = sum(self.degree(key) for key in index) + 1
        dims = {in_degree - d for d in self._degree_set}
        result = Element()
        for tau in self.complex.simplices:
            k = len(tau) - 1
            if k not in dims or not set(support) <= set(tau):
                continue
            local = _standard_basis(k, self.coefficients)
            relabel = {v: p for p, v in enumerate(tau)}
            local_index = tuple(
                local.key(tuple(relabel[v] for v in simplex), b) for simplex, b in decoded
            )
            value = simplex_transfer(k, self.coefficients).structure.bracket(local_index)
            top = local.value(value, tuple(range(k + 1)))
            for b, c in top.items():
                result.add_term(self.basis.key(tau, b), c)
        return result

    def value(self, alpha: Mapping[int, Fraction], simplex: Simplex) -> Element:
        return self.basis.value(alpha, simplex)

    def assemble(self, values: Mapping[Simplex, Mapping[int, Fraction]]) -> Element:
        return self.basis.assemble(values)


def cochain_structure(
    n: int, algebra: LInftyAlgebra, *, budget: Budget = DEFAULT_BUDGET
) -> CochainAlgebra:
    """`C*(Delta^n; L)`, cached on the algebra."""
    return complex_structure(FinComplex.simplex(n), algebra, budget=budget)


def complex_structure(
    complex: FinComplex, algebra: LInftyAlgebra, *, budget: Budget = DEFAULT_BUDGET
) -> CochainAlgebra:
    """`C*(X; L)` for a finite complex, cached on the algebra."""
    key = ("complex", complex)
    if key not in algebra.cache:
        algebra.cache[key] = CochainAlgebra(complex, algebra, budget=budget)
    return algebra.cache[key]


def pullback_cochain(
    mapping: SimplicialMap,
    source: CochainAlgebra,
    target: CochainAlgebra,
    alpha: Mapping[int, Fraction],
) -> Element:
    """
    Pulls a cochain on `mapping.target` back to `mapping.source`; `source`
    and `target` are the cochain algebras of the target and source complexes.
    """
    result = Element()
    for key, c in alpha.items():
        result.iadd_coef(c, _pullback_key(mapping, source, target, key))
    return result


def _pullback_key(
    mapping: SimplicialMap, source: CochainAlgebra, target: CochainAlgebra, key: int
) -> Element:
    simplex, b = source.basis.decode(key)
    result = Element()
    for tau in target.complex.simplices:
        if (
            len(tau) == len(simplex)
            and mapping.is_injective_on(tau)
            and mapping.image(tau) == simplex
        ):
            result.add_term(target.basis.key(tau, b), Fraction(1))
    return result


def simplicial_pullback(
    mapping: SimplicialMap, algebra: LInftyAlgebra, *, budget: Budget = DEFAULT_BUDGET
) -> LInftyMorphism:
    """
    The strict morphism `C*(Y; L) -> C*(X; L)` induced by a simplicial map
    `X -> Y`.
    """
    source = complex_structure(mapping.target, algebra, budget=budget)
    target = complex_structure(mapping.source, algebra, budget=budget)
    return linear_strict_morphism(
        source,
        target,
        lambda key: _pullback_key(mapping, source, target, key),
        name="pullback",
    )


def restriction(
    sub: FinComplex, ambient: FinComplex, algebra: LInftyAlgebra, *, budget: Budget = DEFAULT_BUDGET
) -> LInftyMorphism:
    return simplicial_pullback(SimplicialMap.inclusion(sub, ambient), algebra, budget=budget)


def coefficient_pushforward(
    morphism: LInftyMorphism,
    complex: FinComplex,
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> LInftyMorphism:
    """
    The strict morphism `C*(X; L) -> C*(X; M)` induced by a strict morphism
    `L -> M`.
    """
    if not morphism.strict:
        raise SpaceMismatchError("only strict coefficient morphisms push forward strictly")
    target_algebra = morphism.target
    if not isinstance(target_algebra, LInftyAlgebra):
        raise SpaceMismatchError("coefficient morphisms must land in a finite algebra")
    source = complex_structure(complex, morphism.source, budget=budget)
    target = complex_structure(complex, target_algebra, budget=budget)

    def image(key: int) -> Element:
        simplex, b = source.basis.decode(key)
        return Element(
            (target.basis.key(simplex, b2), c) for b2, c in morphism.component((b,)).items()
        )

    return linear_strict_morphism(source, target, image, name="pushforward")


def relabel_to_simplex(
    algebra: CochainAlgebra, alpha: Mapping[int, Fraction], tau: Simplex
) -> Element:
    """The restriction of a cochain to a simplex `tau`, as a cochain on `Delta^dim(tau)`."""
    k = len(tau) - 1
    local = cochain_structure(k, algebra.coefficients)
    result = Element()
    for sigma in local.complex.simplices:
        value = algebra.value(alpha, tuple(tau[p] for p in sigma))
        for b, c in value.items():
            result.add_term(local.basis.key(sigma, b), c)
    return result


def mc_to_simplicial_map(
    algebra: CochainAlgebra, alpha: Mapping[int, Fraction]
) -> dict[Simplex, Element]:
    """
    The family of simplices of `Del(L)` given by a Maurer-Cartan cochain on
    `X`: one Maurer-Cartan cochain on `Delta^k` per `k`-simplex.

    Raises:
        NotMaurerCartanError: If `alpha` is not Maurer-Cartan.
    """
    if not is_mc(algebra, alpha):
        raise NotMaurerCartanError("cochain is not Maurer-Cartan")
    return {tau: relabel_to_simplex(algebra, alpha, tau) for tau in algebra.complex.simplices}


def simplicial_map_to_mc(
    algebra: CochainAlgebra, family: Mapping[Simplex, Mapping[int, Fraction]]
) -> Element:
    """
    Glues a compatible family of simplices back into a Maurer-Cartan cochain.

    Raises:
        SpaceMismatchError: If the family misses a simplex or is incompatible
            with restriction to faces.
    """
    result = Element()
    for tau in algebra.complex.simplices:
        if tau not in family:
            raise SpaceMismatchError(f"family has no simplex for {tau}")
        k = len(tau) - 1
        local = cochain_structure(k, algebra.coefficients)
        top = local.value(family[tau], tuple(range(k + 1)))
        for b, c in top.items():
            result.add_term(algebra.basis.key(tau, b), c)
    for tau, value in family.items():
        if relabel_to_simplex(algebra, result, tau) != Element(value):
            raise SpaceMismatchError(f"family is not compatible with faces at {tau}")
    if not is_mc(algebra, result):
        raise NotMaurerCartanError("glued cochain is not Maurer-Cartan")
    return result


def getzler_form(n: int, algebra: LInftyAlgebra, alpha: Mapping[int, Fraction]) -> Element:
    """
    The form-level Maurer-Cartan element `F_*(alpha)` in `Omega(Delta^n) (x) L`
    of a Maurer-Cartan cochain; it lies in the kernel of the homotopy.
    """
    transfer = simplex_transfer(n, algebra)
    return transfer.inclusion.pushforward(alpha)


def simplex_from_form(n: int, algebra: LInftyAlgebra, form: Mapping[Hashable, Fraction]) -> Element:
    """
    The cochain of a Maurer-Cartan form killed by the homotopy, `g1(form)`.

    Raises:
        NotMaurerCartanError: If the form is not Maurer-Cartan.
        SpaceMismatchError: If the form is not killed by the homotopy.
    """
    transfer = simplex_transfer(n, algebra)
    if not is_mc(transfer.big, form):
        raise NotMaurerCartanError("form is not Maurer-Cartan")
    if transfer.contraction.homotopy(form):
        raise SpaceMismatchError("form is not in the kernel of the homotopy")
    return transfer.contraction.projection(form)


__all__ = [
    "CochainAlgebra",
    "CochainBasis",
    "FormExtension",
    "coefficient_pushforward",
    "cochain_structure",
    "complex_structure",
    "form_contraction",
    "getzler_form",
    "mc_to_simplicial_map",
    "pullback_cochain",
    "relabel_to_simplex",
    "restriction",
    "simplex_from_form",
    "simplex_transfer",
    "simplicial_map_to_mc",
    "simplicial_pullback",
]
