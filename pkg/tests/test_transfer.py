import random
from fractions import Fraction

import pytest

from delinf._graded import (
    Element,
    GradedSpace,
    LinearMap,
    MultiIndex,
    multilinear_expand,
    symmetric_apply,
    symmetric_basis,
    symmetric_tensor,
)
from delinf.cochains import simplex_transfer
from delinf.deligne import StarData, simplex_from_star, vertex_transfer
from delinf.documents import load
from delinf.errors import (
    ConvergenceError,
    NotInImageError,
    NotMaurerCartanError,
    SpaceMismatchError,
)
from delinf.extensions import CentralExtension
from delinf.kuranishi import kuranishi_forward, kuranishi_solve
from delinf.linfty import (
    LInftyAlgebra,
    LInftyMorphism,
    check_linfty,
    check_morphism,
    compose_morphisms,
    curvature,
)
from delinf.transfer import Contraction, Transfer, check_contraction

# dgla_pair keys: x, y, a, u; the small side keeps x and y.
X, Y, A, U = 0, 1, 2, 3


def trivial_contraction(algebra: LInftyAlgebra) -> Contraction:
    return Contraction(
        big=algebra,
        small=algebra.space,
        inclusion=LinearMap.identity(),
        projection=LinearMap.identity(),
        homotopy=LinearMap(degree=-1),
        big_keys=list(algebra.space),
    )


def light_indices(space: GradedSpace, arity: int) -> list[MultiIndex]:
    return [
        index
        for index in symmetric_basis(space, arity)
        if sum(space.weights[key] for key in index) < space.nilpotency
    ]


def random_degree_zero(rng: random.Random, keys: list[int]) -> Element:
    return Element(
        {key: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for key in rng.sample(keys, 3)}
    )


def as_monomials(x: Element) -> Element:
    return Element({(key,): coef for key, coef in x.items()})


@pytest.fixture(scope="module")
def contraction() -> Contraction:
    document = load("dgla_pair_contraction")
    return document.build()  # type: ignore[union-attr]


@pytest.fixture(scope="module")
def transfer(contraction: Contraction) -> Transfer:
    return Transfer(contraction)


@pytest.fixture(scope="module")
def square() -> LInftyAlgebra:
    extension = load("extension_square").build()
    assert isinstance(extension, CentralExtension)
    return extension.total


class TestCheckContraction:
    def test_bundled_contraction(self, contraction: Contraction):
        report = check_contraction(contraction)
        assert report.passed
        assert "Kq1+q1K=f1g1-id" in report.checked

    def test_missing_homotopy(self, contraction: Contraction):
        broken = Contraction(
            big=contraction.big,
            small=contraction.small,
            inclusion=contraction.inclusion,
            projection=contraction.projection,
            homotopy=LinearMap(degree=-1),
            big_keys=contraction.big_keys,
        )
        report = check_contraction(broken)
        assert not report.passed
        assert report.first_failure is not None
        assert report.first_failure.identity == "Kq1+q1K=f1g1-id"

    def test_needs_large_keys(self, contraction: Contraction):
        with pytest.raises(ValueError):
            check_contraction(contraction, test_keys=[])


class TestTransfer:
    def test_trivial_contraction_keeps_structure(self, heis: LInftyAlgebra):
        transfer = Transfer(trivial_contraction(heis))
        structure = transfer.structure
        assert check_linfty(structure).passed
        assert structure.bracket((0, 1)) == heis.bracket((0, 1))

    def test_transferred_structure(self, transfer: Transfer):
        structure = transfer.structure
        assert check_linfty(structure).passed
        # the bracket [x, y] lands in the contracted part
        assert structure.is_abelian

    def test_inclusion_is_a_morphism(self, transfer: Transfer):
        assert transfer.f((X, Y)) == Element({A: 1})
        assert check_morphism(transfer.inclusion).passed

    def test_projection_is_a_morphism(self, transfer: Transfer):
        assert check_morphism(transfer.projection()).passed

    def test_nilpotency_mismatch(self, heis: LInftyAlgebra, abelian_line: LInftyAlgebra):
        contraction = trivial_contraction(heis)
        contraction.small = abelian_line.space
        with pytest.raises(SpaceMismatchError):
            Transfer(contraction)


class TestKuranishi:
    def test_solve_and_forward(self, transfer: Transfer):
        y = Element({1: 1})
        x = kuranishi_solve(transfer, y, preimage=Element({U: 1}))
        assert x == Element({Y: 1, U: 1})
        assert kuranishi_forward(transfer, x) == (y, Element({A: 1}))

    def test_solve_with_image_element(self, transfer: Transfer):
        x = kuranishi_solve(transfer, Element(), Element({A: 2}))
        assert x == Element({U: 2})

    def test_not_in_image(self, transfer: Transfer):
        with pytest.raises(NotInImageError):
            kuranishi_solve(transfer, Element({1: 1}), Element({X: 1}))

    def test_iteration_bound(self, transfer: Transfer):
        with pytest.raises(ConvergenceError):
            kuranishi_solve(transfer, Element({1: 1}), max_iterations=1)

    def test_hooks_see_each_change(self, transfer: Transfer):
        seen: list[int] = []
        kuranishi_solve(
            transfer,
            Element({1: 1}),
            preimage=Element({U: 1}),
            hooks=[lambda state: seen.append(state.iteration)],
        )
        assert seen == [1]

    def test_not_maurer_cartan(self, square: LInftyAlgebra):
        transfer = Transfer(trivial_contraction(square))
        e = square.element({"e": 1})
        with pytest.raises(NotMaurerCartanError):
            kuranishi_forward(transfer, e)
        with pytest.raises(NotMaurerCartanError):
            kuranishi_solve(transfer, e)
        assert kuranishi_solve(transfer, Element()) == Element()


class TestMorphismComponents:
    def test_extreme_components(self, heis: LInftyAlgebra):
        transfer = simplex_transfer(2, heis)
        inclusion = transfer.contraction.inclusion
        for w in transfer.small:
            assert transfer.morphism_component_keys((w,), 1) == as_monomials(inclusion.on(w))
        for index in light_indices(transfer.small, 2):
            expected = symmetric_tensor([inclusion.on(w) for w in index], transfer.big.degree)
            assert transfer.morphism_component_keys(index, 2) == expected
            assert transfer.morphism_component_keys(index, 1) == as_monomials(transfer.f(index))

    @pytest.mark.parametrize(
        ("fixture", "n", "arities"), [("heis", 2, (2,)), ("ut4", 1, (2, 3))]
    )
    def test_homotopy_of_brackets(
        self, request: pytest.FixtureRequest, fixture: str, n: int, arities: tuple[int, ...]
    ):
        transfer = simplex_transfer(n, request.getfixturevalue(fixture))
        for arity in arities:
            for index in light_indices(transfer.small, arity):
                total = Element()
                for k in range(2, arity + 1):
                    component = transfer.morphism_component_keys(index, k)
                    brackets = symmetric_apply(transfer.big.bracket, component)
                    total.iadd_coef(1, transfer.contraction.homotopy(brackets))
                assert total == transfer.f(index)

    def test_on_vectors(self, transfer: Transfer):
        x = Element({X: 2, Y: Fraction(1, 2)})
        y = Element({Y: 3})
        expected = multilinear_expand(
            lambda keys: transfer.morphism_component_keys(keys, 2), [x, y]
        )
        assert transfer.morphism_component([x, y], 2) == expected
        assert transfer.morphism_component([x, Element()], 2) == Element()

    @pytest.mark.parametrize("k", [0, 3])
    def test_number_of_blocks(self, transfer: Transfer, k: int):
        with pytest.raises(ValueError):
            transfer.morphism_component_keys((X, Y), k)


class TestSymmetrizedHomotopy:
    def test_single_argument_is_the_homotopy(self, contraction: Contraction, transfer: Transfer):
        for key in contraction.big.space:
            assert transfer.k_sigma_keys((key,)) == as_monomials(contraction.homotopy.on(key))

    def test_pairs(self, transfer: Transfer):
        assert transfer.k_sigma_keys((U, Y)) == Element({(Y, A): 1})
        assert transfer.k_sigma_keys((U, X)) == Element({(X, A): -1})
        assert transfer.k_sigma_keys((U, U)) == Element({(A, U): 1})
        assert transfer.k_sigma_keys((X, Y)) == Element()

    def test_vanishes_on_the_image_of_the_inclusion(
        self, contraction: Contraction, transfer: Transfer
    ):
        images = [contraction.inclusion.on(w) for w in contraction.small]
        for left in images:
            for right in images:
                assert transfer.k_sigma([left, right]) == Element()


class TestBianchi:
    @staticmethod
    def assert_bianchi(morphism: LInftyMorphism, x: Element):
        r = curvature(morphism.source, x)
        expected = Element()
        factorial = 1
        for i in range(morphism.arity_bound):
            if i:
                factorial *= i
            value = multilinear_expand(morphism.component, [r] + [x] * i)
            expected.iadd_coef(Fraction(1, factorial), value)
        assert curvature(morphism.target, morphism.push(x)) == expected

    def test_dupont_inclusion(self, heis: LInftyAlgebra):
        transfer = simplex_transfer(2, heis)
        keys = transfer.small.keys_of_degree(0)
        rng = random.Random(17)
        for _ in range(10):
            self.assert_bianchi(transfer.inclusion, random_degree_zero(rng, keys))

    def test_projection(self, transfer: Transfer):
        rng = random.Random(19)
        for _ in range(10):
            x = Element({Y: rng.randint(-3, 3), U: Fraction(rng.randint(-3, 3), 2)})
            self.assert_bianchi(transfer.projection(), x)


class TestComposition:
    def test_pushforward_of_a_composite(self, transfer: Transfer):
        inclusion, projection = transfer.inclusion, transfer.projection()
        composite = compose_morphisms(projection, inclusion)
        assert check_morphism(composite).passed
        for c in (1, -2, Fraction(1, 3)):
            y = Element({Y: c})
            assert composite.pushforward(y) == projection.pushforward(inclusion.pushforward(y))

    def test_push_on_the_large_side(self, transfer: Transfer):
        projection = transfer.projection()
        composite = compose_morphisms(transfer.inclusion, projection)
        rng = random.Random(23)
        for _ in range(10):
            x = Element({Y: rng.randint(-3, 3), U: Fraction(rng.randint(-3, 3), 3)})
            assert composite.push(x) == transfer.inclusion.push(projection.push(x))

    def test_not_composable(self, transfer: Transfer):
        with pytest.raises(SpaceMismatchError):
            compose_morphisms(transfer.inclusion, transfer.inclusion)


class TestKuranishiOnSimplices:
    @pytest.mark.parametrize("i", range(3))
    def test_round_trip(self, heis: LInftyAlgebra, i: int):
        transfer = vertex_transfer(2, i, heis)
        rng = random.Random(i)
        for _ in range(50):
            vertex = rng.randrange(3)
            values = {
                (min(vertex, m), max(vertex, m)): heis.element(
                    {name: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for name in "XYZ"}
                )
                for m in range(3)
                if m != vertex
            }
            alpha = simplex_from_star(heis, StarData(2, vertex, Element(), values)).alpha
            y, kv = kuranishi_forward(transfer, alpha)
            assert kuranishi_solve(transfer, y, kv) == alpha
