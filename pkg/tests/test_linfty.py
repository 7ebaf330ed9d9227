import pytest

from delinf._graded import BasisElement, Element, GradedSpace
from delinf.errors import (
    DegreeError,
    NotMaurerCartanError,
    SpaceMismatchError,
    StructureError,
)
from delinf.linfty import (
    LInftyAlgebra,
    ProductAlgebra,
    SubAlgebra,
    check_linfty,
    check_morphism,
    compose_morphisms,
    curvature,
    dgla_import,
    identity_morphism,
    is_mc,
    parse_element,
    strict_morphism,
    zero_algebra,
)


@pytest.fixture(scope="module")
def odd_pair() -> LInftyAlgebra:
    """Two odd generators whose bracket is central: [p, q] = r."""
    return dgla_import(
        (BasisElement("p", 1), BasisElement("q", 1), BasisElement("r", 2, weight=2)),
        3,
        bracket={("p", "q"): {"r": 1}},
        name="odd_pair",
    )


class TestLInftyAlgebra:
    def test_heisenberg_is_valid(self, heis: LInftyAlgebra):
        report = check_linfty(heis)
        assert report.passed
        assert set(report.checked) == {"arity 1", "arity 2"}
        assert not heis.is_abelian

    def test_bracket_signs(self, heis: LInftyAlgebra):
        x, y, z = heis.element({"X": 1}), heis.element({"Y": 1}), heis.element({"Z": 1})
        assert heis.apply(x, y) == z
        assert heis.apply(y, x) == -z
        assert heis.apply(x, x) == Element()
        assert heis.apply(x, z) == Element()

    def test_apply_without_arguments(self, heis: LInftyAlgebra):
        with pytest.raises(DegreeError):
            heis.apply()

    def test_cohomology(self, abelian_line: LInftyAlgebra, acyclic_pair: LInftyAlgebra):
        assert abelian_line.cohomology_dimension(-1) == 1
        assert abelian_line.cohomology_dimension(0) == 0
        assert acyclic_pair.cohomology_dimension(-1) == 0
        assert acyclic_pair.cohomology_dimension(0) == 0

    def test_nonzero_coefficient_above_arity_bound(self):
        space = GradedSpace((BasisElement("a", -1), BasisElement("b", 0)), 2)
        with pytest.raises(StructureError):
            LInftyAlgebra.from_tables(space, {2: {(0, 1): {1: 1}}})

    def test_wrong_degree_is_reported(self):
        space = GradedSpace((BasisElement("a", 0), BasisElement("b", 0)), 2)
        algebra = LInftyAlgebra.from_tables(space, {1: {(0,): {1: 1}}})
        report = check_linfty(algebra)
        assert not report.passed
        assert report.first_failure is not None

    def test_zero_algebra(self):
        algebra = zero_algebra()
        assert algebra.dimension == 0
        assert check_linfty(algebra).passed


class TestDglaImport:
    def test_differential_sign(self, acyclic_pair: LInftyAlgebra):
        u, v = acyclic_pair.element({"u": 1}), acyclic_pair.element({"v": 1})
        assert acyclic_pair.apply(u) == -v

    def test_differential_must_square_to_zero(self):
        basis = (BasisElement("a", 0), BasisElement("b", 1), BasisElement("c", 2))
        with pytest.raises(StructureError) as info:
            dgla_import(basis, 2, differential={"a": {"b": 1}, "b": {"c": 1}})
        assert info.value.report is not None
        assert info.value.to_dict()["report"]["passed"] is False

    def test_bracket_must_be_antisymmetric(self):
        basis = (BasisElement("a", 0), BasisElement("b", 0), BasisElement("c", 0, weight=2))
        with pytest.raises(StructureError):
            dgla_import(basis, 3, bracket={("a", "b"): {"c": 1}, ("b", "a"): {"c": 1}})


class TestMaurerCartan:
    def test_curvature(self, odd_pair: LInftyAlgebra):
        p, q = odd_pair.element({"p": 1}), odd_pair.element({"q": 1})
        assert is_mc(odd_pair, p)
        assert is_mc(odd_pair, q)
        assert curvature(odd_pair, p + q) == odd_pair.element({"r": -1})
        assert not is_mc(odd_pair, p + q)

    def test_curvature_needs_degree_zero(self, heis: LInftyAlgebra):
        with pytest.raises(DegreeError):
            curvature(heis, heis.element({"X": 1}))

    def test_zero_is_maurer_cartan(self, heis: LInftyAlgebra):
        assert is_mc(heis, Element())

    def test_dgla_pair(self, dgla_pair: LInftyAlgebra):
        assert is_mc(dgla_pair, dgla_pair.element({"y": 1, "u": 3}))


class TestMorphisms:
    def test_identity(self, heis: LInftyAlgebra):
        assert check_morphism(identity_morphism(heis)).passed

    def test_scaling_automorphism(self, heis: LInftyAlgebra):
        good = strict_morphism(heis, heis, {0: {0: 2}, 1: {1: 3}, 2: {2: 6}})
        bad = strict_morphism(heis, heis, {0: {0: 2}, 1: {1: 1}, 2: {2: 1}})
        assert check_morphism(good).passed
        report = check_morphism(bad)
        assert not report.passed
        assert report.first_failure is not None
        assert report.first_failure.identity == "FR=QF"

    def test_compose(self, heis: LInftyAlgebra):
        scale = strict_morphism(heis, heis, {0: {0: 2}, 1: {1: 3}, 2: {2: 6}})
        twice = compose_morphisms(scale, scale)
        assert twice.strict
        assert check_morphism(twice).passed
        assert twice.linear(heis.element({"Z": 1})) == heis.element({"Z": 36})

    def test_compose_mismatch(self, heis: LInftyAlgebra, abelian_line: LInftyAlgebra):
        with pytest.raises(SpaceMismatchError):
            compose_morphisms(identity_morphism(heis), identity_morphism(abelian_line))

    def test_pushforward(self, odd_pair: LInftyAlgebra):
        identity = identity_morphism(odd_pair)
        p = odd_pair.element({"p": 1})
        assert identity.pushforward(p) == p
        with pytest.raises(NotMaurerCartanError):
            identity.pushforward(p + odd_pair.element({"q": 1}))


class TestProductAlgebra:
    @pytest.fixture
    def product(self, heis: LInftyAlgebra, abelian_line: LInftyAlgebra) -> ProductAlgebra:
        return ProductAlgebra([heis, abelian_line], ["h", "l"])

    def test_layout(self, product: ProductAlgebra):
        assert product.dimension == 4
        assert product.space.name(3) == "l.x"
        assert product.locate(3) == (1, 0)
        assert product.locate(2) == (0, 2)

    def test_structure(self, product: ProductAlgebra):
        assert check_linfty(product).passed
        x, y = product.element({"h.X": 1}), product.element({"h.Y": 1})
        assert product.apply(x, y) == product.element({"h.Z": 1})
        assert product.apply(x, product.element({"l.x": 1})) == Element()

    def test_projection_and_inclusion(self, product: ProductAlgebra, heis: LInftyAlgebra):
        assert check_morphism(product.projection(0)).passed
        assert check_morphism(product.inclusion(1)).passed
        x = product.join([heis.element({"X": 1}), Element({0: 2})])
        assert product.project(1, x) == Element({0: 2})

    def test_label_count(self, heis: LInftyAlgebra):
        with pytest.raises(ValueError):
            ProductAlgebra([heis], ["a", "b"])


class TestSubAlgebra:
    def test_abelian_subalgebra(self, heis: LInftyAlgebra):
        sub = SubAlgebra(heis, [heis.element({"X": 1}), heis.element({"Z": 2})])
        assert sub.dimension == 2
        assert sub.space.weights == (1, 2)
        assert sub.is_abelian
        assert check_morphism(sub.inclusion()).passed
        assert sub.embed(sub.coordinates(heis.element({"Z": 1}))) == heis.element({"Z": 1})

    def test_not_closed(self, heis: LInftyAlgebra):
        sub = SubAlgebra(heis, [heis.element({"X": 1}), heis.element({"Y": 1})])
        with pytest.raises(StructureError):
            sub.apply(Element({0: 1}), Element({1: 1}))


class TestParseElement:
    def test_parse(self, heis: LInftyAlgebra):
        assert parse_element(heis, "X=1, Y=-1/2,X=1") == heis.element({"X": 2, "Y": "-1/2"})
        assert parse_element(heis, "") == Element()

    def test_errors(self, heis: LInftyAlgebra):
        with pytest.raises(ValueError):
            parse_element(heis, "X")
        with pytest.raises(SpaceMismatchError):
            parse_element(heis, "W=1")
        with pytest.raises(ValueError):
            parse_element(heis, "X=0.5")
