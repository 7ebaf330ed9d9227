import pytest

from delinf.complexes import (
    FinComplex,
    SimplicialMap,
    codegeneracy_map,
    coface_map,
    faces_of,
    product_map,
)
from delinf.errors import SpaceMismatchError


class TestOrdinalMaps:
    def test_faces(self):
        assert faces_of([2, 0, 1]) == [
            (0,),
            (1,),
            (2,),
            (0, 1),
            (0, 2),
            (1, 2),
            (0, 1, 2),
        ]

    def test_coface(self):
        assert coface_map(2, 0) == (1, 2)
        assert coface_map(2, 1) == (0, 2)
        assert coface_map(2, 2) == (0, 1)

    def test_codegeneracy(self):
        assert codegeneracy_map(1, 0) == (0, 0, 1)
        assert codegeneracy_map(1, 1) == (0, 1, 1)

    @pytest.mark.parametrize("j", [-1, 3])
    def test_out_of_range(self, j: int):
        with pytest.raises(ValueError):
            coface_map(2, j)
        with pytest.raises(ValueError):
            codegeneracy_map(2, j)


class TestFinComplex:
    def test_simplex(self):
        complex = FinComplex.simplex(2)
        assert len(complex.simplices) == 7
        assert complex.dimension == 2
        assert complex.maximal == ((0, 1, 2),)

    def test_boundary_and_horn(self):
        assert len(FinComplex.boundary(2).simplices) == 6
        horn = FinComplex.horn(2, 1)
        assert horn.maximal == ((0, 1), (1, 2))
        assert not horn.contains((0, 2))
        with pytest.raises(ValueError):
            FinComplex.horn(2, 3)

    def test_closed_under_faces(self):
        complex = FinComplex.from_maximal(4, [(2, 0, 1), (1, 3)])
        assert complex.contains((0, 2))
        assert complex.of_dimension(1) == [(0, 1), (0, 2), (1, 2), (1, 3)]
        assert complex.index((0,)) == 0

    def test_unknown_simplex(self):
        with pytest.raises(SpaceMismatchError):
            FinComplex.simplex(1).index((0, 2))

    def test_invalid_simplices(self):
        with pytest.raises(ValueError):
            FinComplex(2, ((1, 0),))
        with pytest.raises(ValueError):
            FinComplex(2, ((0, 2),))

    def test_nerve_of_product(self):
        square = FinComplex.nerve_of_product(1, 1)
        assert square.maximal == ((0, 1, 3), (0, 2, 3))
        assert len(square.simplices) == 11


class TestSimplicialMap:
    def test_ordinal(self):
        degeneracy = SimplicialMap.ordinal((0, 0, 1), 1)
        assert degeneracy.image((0, 1)) == (0,)
        assert not degeneracy.is_injective_on((0, 1))
        assert degeneracy.is_injective_on((1, 2))

    def test_not_order_preserving(self):
        with pytest.raises(SpaceMismatchError):
            SimplicialMap.ordinal((1, 0), 1)

    def test_image_outside_target(self):
        with pytest.raises(SpaceMismatchError):
            SimplicialMap(FinComplex.simplex(1), FinComplex.horn(2, 1), (0, 2))

    def test_product_map(self):
        mapping = product_map(1, 1, (1,), (0, 1))
        assert mapping.vertex_map == (2, 3)
        assert mapping.target == FinComplex.nerve_of_product(1, 1)
