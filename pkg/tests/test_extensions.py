import pytest

from delinf._graded import BasisElement, Element
from delinf.documents import load
from delinf.errors import NotInImageError, StructureError
from delinf.extensions import (
    CentralExtension,
    is_lift_difference,
    mc_lift,
    obstruction_mc,
    pushforward_obstruction,
)
from delinf.linfty import LInftyAlgebra, dgla_import, identity_morphism, strict_morphism


@pytest.fixture(scope="module")
def square_extension() -> CentralExtension:
    """`[e, e] = f` over the abelian line spanned by `e`."""
    extension = load("extension_square").build()
    assert isinstance(extension, CentralExtension)
    return extension


class TestCentralExtension:
    def test_kernel(self, square_extension: CentralExtension):
        total = square_extension.total
        assert square_extension.kernel == [total.element({"f": 1})]
        assert square_extension.kernel_basis(0) == []
        assert square_extension.boundaries.dimension == 0

    def test_lift(self, square_extension: CentralExtension):
        base, total = square_extension.base, square_extension.total
        assert square_extension.lift(base.element({"e": 3})) == total.element({"e": 3})

    def test_heisenberg_over_plane(self, heis: LInftyAlgebra):
        plane = dgla_import((BasisElement("X", 0), BasisElement("Y", 0)), 3)
        extension = CentralExtension(strict_morphism(heis, plane, {0: {0: 1}, 1: {1: 1}}))
        assert extension.kernel == [heis.element({"Z": 1})]
        with pytest.raises(NotInImageError):
            extension.lift(plane.element({"X": 1}))

    def test_kernel_not_central(self, heis: LInftyAlgebra):
        line = dgla_import((BasisElement("X", 0),), 3)
        with pytest.raises(StructureError, match="not central"):
            CentralExtension(strict_morphism(heis, line, {0: {0: 1}}))

    def test_not_surjective(self, heis: LInftyAlgebra):
        plane = dgla_import((BasisElement("X", 0), BasisElement("Y", 0)), 3)
        with pytest.raises(StructureError, match="surjective"):
            CentralExtension(strict_morphism(heis, plane, {0: {0: 1}}))


class TestObstruction:
    def test_obstructed(self, square_extension: CentralExtension):
        e = square_extension.base.element({"e": 1})
        obstruction = obstruction_mc(square_extension, e)
        assert not obstruction.is_zero
        assert obstruction.normal_form == square_extension.total.element({"f": "-1/2"})
        assert mc_lift(square_extension, e) is None

    def test_unobstructed(self, square_extension: CentralExtension):
        assert obstruction_mc(square_extension, Element()).is_zero
        assert mc_lift(square_extension, Element()) == Element()

    def test_pushforward(self, square_extension: CentralExtension):
        e = square_extension.base.element({"e": 2})
        obstruction = obstruction_mc(square_extension, e)
        image = pushforward_obstruction(
            obstruction, identity_morphism(square_extension.total), square_extension
        )
        assert image == square_extension.total.element({"f": -2})


class TestLiftDifferences:
    def test_kernel_cocycles(self, acyclic_pair: LInftyAlgebra):
        # the kernel is spanned by the closed element v
        base = dgla_import((BasisElement("u", 0),), 2)
        extension = CentralExtension(strict_morphism(acyclic_pair, base, {0: {0: 1}}))
        u, v = acyclic_pair.element({"u": 1}), acyclic_pair.element({"v": 1})
        assert is_lift_difference(extension, v, Element())
        assert not is_lift_difference(extension, u, Element())
