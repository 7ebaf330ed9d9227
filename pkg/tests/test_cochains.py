import random
from fractions import Fraction

import pytest

from delinf._graded import Element
from delinf.cochains import (
    CochainAlgebra,
    CochainBasis,
    FormExtension,
    coefficient_pushforward,
    cochain_structure,
    complex_structure,
    form_contraction,
    getzler_form,
    mc_to_simplicial_map,
    restriction,
    simplex_from_form,
    simplex_transfer,
    simplicial_map_to_mc,
    simplicial_pullback,
)
from delinf.complexes import FinComplex, SimplicialMap
from delinf.config import Budget
from delinf.errors import (
    BudgetExceededError,
    NotMaurerCartanError,
    SpaceMismatchError,
)
from delinf.forms import PolyForm, pullback
from delinf.linfty import LInftyAlgebra, check_linfty, check_morphism, is_mc, strict_morphism
from delinf.transfer import check_contraction


class TestCochainBasis:
    def test_layout(self, heis: LInftyAlgebra):
        basis = CochainBasis(FinComplex.simplex(1), heis)
        assert basis.space.dimension == 9
        assert basis.key((0, 1), 2) == 8
        assert basis.decode(8) == ((0, 1), 2)
        assert basis.space.name(8) == "e0_1:Z"
        # vertices keep the coefficient degree, edges raise it by one
        assert basis.space.degree(0) == -1
        assert basis.space.degree(6) == 0

    def test_value_and_assemble(self, heis: LInftyAlgebra):
        basis = CochainBasis(FinComplex.simplex(1), heis)
        values = {(0, 1): Element({0: 1}), (1,): Element({2: "1/2"})}
        alpha = basis.assemble(values)
        assert basis.value(alpha, (0, 1)) == Element({0: 1})
        assert basis.value(alpha, (1,)) == Element({2: "1/2"})
        assert basis.value(alpha, (0,)) == Element()


class TestFormExtension:
    def test_contraction_identities(self, heis: LInftyAlgebra):
        contraction = form_contraction(1, heis)
        keys = [
            (exponents, wedge, b)
            for exponents in [(0,), (1,), (2,)]
            for wedge in [(), (0,)]
            for b in range(heis.dimension)
        ]
        assert check_contraction(contraction, keys).passed

    def test_differential_sign(self, acyclic_pair: LInftyAlgebra):
        extension = FormExtension(1, acyclic_pair)
        t_u = ((1,), (), 0)
        # q1(t u) = -dt u + t q1(u) = -dt u - t v
        assert extension.bracket((t_u,)) == Element({((0,), (0,), 0): -1, ((1,), (), 1): -1})

    def test_bracket_of_forms(self, heis: LInftyAlgebra):
        extension = FormExtension(1, heis)
        t_x = extension.tensor(PolyForm.variable(1, 0), heis.element({"X": 1}))
        y = extension.tensor(PolyForm.constant(1), heis.element({"Y": 1}))
        (key_x,), (key_y,) = t_x, y
        assert extension.bracket((key_x, key_y)) == Element({((1,), (), 2): 1})


class TestCochainAlgebra:
    def test_heisenberg_on_interval(self, heis: LInftyAlgebra):
        cochains = cochain_structure(1, heis)
        assert check_linfty(cochains).passed

    def test_cohomology_of_simplex(self, abelian_line: LInftyAlgebra):
        cochains = cochain_structure(2, abelian_line)
        assert cochains.cohomology_dimension(-1) == 1
        assert cochains.cohomology_dimension(0) == 0
        assert cochains.cohomology_dimension(1) == 0

    def test_edges_are_maurer_cartan(self, heis: LInftyAlgebra):
        cochains = cochain_structure(1, heis)
        alpha = cochains.assemble({(0, 1): heis.element({"X": 1, "Z": 3})})
        assert is_mc(cochains, alpha)

    def test_cached(self, heis: LInftyAlgebra):
        assert cochain_structure(1, heis) is complex_structure(FinComplex.simplex(1), heis)

    def test_budget(self, heis: LInftyAlgebra):
        with pytest.raises(BudgetExceededError):
            CochainAlgebra(FinComplex.simplex(2), heis, budget=Budget(max_simplex_dimension=1))
        with pytest.raises(BudgetExceededError):
            CochainAlgebra(FinComplex.simplex(1), heis, budget=Budget(max_coefficient_dimension=2))
        with pytest.raises(BudgetExceededError):
            CochainAlgebra(FinComplex.simplex(1), heis, budget=Budget(max_cost=10))


class TestCochainMorphisms:
    def test_restriction_is_a_morphism(self, heis: LInftyAlgebra):
        morphism = restriction(FinComplex.simplex(0), FinComplex.simplex(1), heis)
        assert morphism.strict
        assert check_morphism(morphism).passed

    def test_coefficient_pushforward(self, heis: LInftyAlgebra):
        scale = strict_morphism(heis, heis, {0: {0: 2}, 1: {1: 3}, 2: {2: 6}})
        morphism = coefficient_pushforward(scale, FinComplex.simplex(1))
        assert check_morphism(morphism).passed


class TestMaurerCartanFamilies:
    def test_round_trip_on_horn(self, heis: LInftyAlgebra):
        horn = complex_structure(FinComplex.horn(2, 1), heis)
        alpha = horn.assemble(
            {(0, 1): heis.element({"X": 1}), (1, 2): heis.element({"Y": 1})}
        )
        family = mc_to_simplicial_map(horn, alpha)
        interval = cochain_structure(1, heis)
        assert family[(1, 2)] == interval.assemble({(0, 1): heis.element({"Y": 1})})
        assert family[(1,)] == Element()
        assert simplicial_map_to_mc(horn, family) == alpha

    def test_incomplete_family(self, heis: LInftyAlgebra):
        horn = complex_structure(FinComplex.horn(2, 1), heis)
        with pytest.raises(SpaceMismatchError):
            simplicial_map_to_mc(horn, {})

    def test_getzler_form(self, heis: LInftyAlgebra):
        interval = cochain_structure(1, heis)
        alpha = interval.assemble({(0, 1): heis.element({"X": 1})})
        form = getzler_form(1, heis, alpha)
        # the Whitney form of the edge is dt
        assert form == Element({((0,), (0,), 0): 1})
        assert simplex_from_form(1, heis, form) == alpha

    def test_form_outside_kernel(self, heis: LInftyAlgebra):
        form = Element({((1,), (0,), 0): Fraction(1)})
        with pytest.raises(SpaceMismatchError):
            simplex_from_form(1, heis, form)

    def test_form_not_maurer_cartan(self, dgla_pair: LInftyAlgebra):
        # t y + dt a has curvature dt u - dt y
        form = Element({((1,), (), 1): 1, ((0,), (0,), 2): 1})
        with pytest.raises(NotMaurerCartanError):
            simplex_from_form(1, dgla_pair, form)


def random_cochain(rng: random.Random, algebra: CochainAlgebra, degree: int = 0) -> Element:
    return Element(
        {
            key: Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            for key in algebra.space.keys_of_degree(degree)
        }
    )


def pullback_extension(
    source: FormExtension, target: FormExtension, x: Element, theta: tuple[int, ...]
) -> Element:
    """Pulls an element of `Omega(Delta^n) (x) L` back along an ordinal map."""
    result = Element()
    for (exponents, wedge, b), c in x.items():
        form = pullback(PolyForm(source.n, {(exponents, wedge): c}), theta)
        result.iadd_coef(1, target.tensor(form, Element({b: 1})))
    return result


class TestFunctoriality:
    def test_restriction_and_coefficient_pushforward(self, heis: LInftyAlgebra):
        simplex, horn = FinComplex.simplex(2), FinComplex.horn(2, 1)
        scale = strict_morphism(heis, heis, {0: {0: 2}, 1: {1: 3}, 2: {2: 6}})
        restrict = restriction(horn, simplex, heis)
        push_on_simplex = coefficient_pushforward(scale, simplex)
        push_on_horn = coefficient_pushforward(scale, horn)
        rng = random.Random(29)
        for _ in range(10):
            alpha = random_cochain(rng, cochain_structure(2, heis), rng.choice([-1, 0, 1]))
            assert push_on_horn.linear(restrict.linear(alpha)) == restrict.linear(
                push_on_simplex.linear(alpha)
            )

    def test_pullbacks_compose(self, heis: LInftyAlgebra):
        # [1] -> [2] -> [3] with a degeneracy on the way back
        inner, outer, degeneracy = (0, 2), (0, 1, 3), (0, 0, 1)
        composite = tuple(outer[v] for v in inner)
        pull_outer = simplicial_pullback(SimplicialMap.ordinal(outer, 3), heis)
        pull_inner = simplicial_pullback(SimplicialMap.ordinal(inner, 2), heis)
        pull_composite = simplicial_pullback(SimplicialMap.ordinal(composite, 3), heis)
        pull_degeneracy = simplicial_pullback(SimplicialMap.ordinal(degeneracy, 1), heis)
        rng = random.Random(31)
        for _ in range(5):
            alpha = random_cochain(rng, cochain_structure(3, heis), rng.choice([-1, 0, 1]))
            assert pull_inner.linear(pull_outer.linear(alpha)) == pull_composite.linear(alpha)
        for _ in range(5):
            beta = random_cochain(rng, cochain_structure(1, heis), rng.choice([-1, 0]))
            assert pull_inner.linear(pull_degeneracy.linear(beta)) == beta

    @pytest.mark.parametrize("theta", [(0, 1), (0, 2), (1, 2)])
    def test_dupont_inclusion_under_faces(self, heis: LInftyAlgebra, theta: tuple[int, int]):
        on_triangle, on_edge = simplex_transfer(2, heis), simplex_transfer(1, heis)
        assert isinstance(on_triangle.big, FormExtension)
        assert isinstance(on_edge.big, FormExtension)
        face = simplicial_pullback(SimplicialMap.ordinal(theta, 2), heis)
        rng = random.Random(sum(theta))
        for _ in range(5):
            alpha = random_cochain(rng, cochain_structure(2, heis))
            pulled = pullback_extension(
                on_triangle.big, on_edge.big, on_triangle.inclusion.push(alpha), theta
            )
            assert pulled == on_edge.inclusion.push(face.linear(alpha))
