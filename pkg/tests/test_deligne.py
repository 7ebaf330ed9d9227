from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterable
from fractions import Fraction

import pytest
from sympy import Matrix, Rational, eye

from delinf._graded import BasisElement, Element
from delinf.cochains import cochain_structure
from delinf.complexes import FinComplex
from delinf.deligne import (
    DeligneSimplex,
    HornData,
    StarData,
    abelian_homotopy_groups,
    bch,
    gauge,
    gauge_witness,
    higher_bch,
    horn_fill,
    is_surjective_in_nonpositive_degrees,
    lift_horn,
    lift_simplex,
    principal_action,
    rho,
    simplex_from_star,
    simplex_lifts_differ_by_cocycle,
)
from delinf.documents import load
from delinf.errors import (
    DegreeError,
    HornFillingError,
    NotMaurerCartanError,
    SpaceMismatchError,
    StructureError,
)
from delinf.extensions import CentralExtension
from delinf.linfty import (
    LInftyAlgebra,
    dgla_import,
    identity_morphism,
    strict_morphism,
)
from delinf.transfer import Transfer

UT4_NAMES = ("E12", "E13", "E14", "E23", "E24", "E34")
UT4_ENTRIES = {name: (int(name[1]) - 1, int(name[2]) - 1) for name in UT4_NAMES}
HEIS_ENTRIES = {"X": (0, 1), "Y": (1, 2), "Z": (0, 2)}


def to_matrix(algebra: LInftyAlgebra, x: Element, entries: dict[str, tuple[int, int]]) -> Matrix:
    size = max(j for _, j in entries.values()) + 1
    matrix = Matrix.zeros(size, size)
    for name, value in algebra.format(x).items():
        matrix[entries[name]] = Rational(value)
    return matrix


def from_matrix(
    algebra: LInftyAlgebra, matrix: Matrix, entries: dict[str, tuple[int, int]]
) -> Element:
    coefficients = {}
    for name, position in entries.items():
        entry = matrix[position]
        coefficients[name] = Fraction(int(entry.p), int(entry.q))
    return algebra.element(coefficients)


def matrix_exp(a: Matrix) -> Matrix:
    result, term = eye(a.rows), eye(a.rows)
    for k in range(1, a.rows):
        term = term * a / k
        result += term
    return result


def matrix_log(m: Matrix) -> Matrix:
    n = m - eye(m.rows)
    result, power = Matrix.zeros(m.rows, m.rows), eye(m.rows)
    for k in range(1, m.rows):
        power = power * n
        result += power * Rational((-1) ** (k + 1), k)
    return result


def random_lie_element(
    rng: random.Random, algebra: LInftyAlgebra, names: Iterable[str]
) -> Element:
    return algebra.element(
        {name: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for name in names}
    )


def random_abelian_complex(
    rng: random.Random, name: str
) -> tuple[LInftyAlgebra, Counter[int]]:
    """
    An abelian algebra whose differential is a scrambled sum of acyclic pairs
    and isolated classes, with the number of classes in each degree.
    """
    degrees: list[int] = []
    pairs: list[tuple[int, int]] = []
    classes: Counter[int] = Counter()
    for _ in range(rng.randint(0, 2)):
        degree = rng.randint(-2, 1)
        pairs.append((len(degrees), len(degrees) + 1))
        degrees += [degree, degree + 1]
    for _ in range(rng.randint(1, 6 - len(degrees))):
        degree = rng.randint(-2, 2)
        classes[degree] += 1
        degrees.append(degree)

    size = len(degrees)
    standard = Matrix.zeros(size, size)
    for source, target in pairs:
        standard[target, source] = 1
    change = eye(size)
    for i in range(size):
        for j in range(i + 1, size):
            if degrees[i] == degrees[j]:
                change[i, j] = rng.randint(-2, 2)
    scrambled = change.inv() * standard * change

    names = [f"e{i}" for i in range(size)]
    differential = {
        names[j]: {
            names[i]: Fraction(int(scrambled[i, j].p), int(scrambled[i, j].q))
            for i in range(size)
            if scrambled[i, j] != 0
        }
        for j in range(size)
        if any(scrambled[i, j] != 0 for i in range(size))
    }
    basis = tuple(BasisElement(n, d) for n, d in zip(names, degrees))
    return dgla_import(basis, 2, differential, name=name), classes


@pytest.fixture(scope="module")
def square() -> LInftyAlgebra:
    extension = load("extension_square").build()
    assert isinstance(extension, CentralExtension)
    return extension.total


@pytest.fixture(scope="module")
def plane_extension(heis: LInftyAlgebra) -> CentralExtension:
    plane = dgla_import((BasisElement("X", 0), BasisElement("Y", 0)), 3, name="plane")
    return CentralExtension(strict_morphism(heis, plane, {0: {0: 1}, 1: {1: 1}}))


@pytest.fixture(scope="module")
def composite(heis: LInftyAlgebra) -> DeligneSimplex:
    """The 2-simplex composing the edges X and Y."""
    star = StarData(
        2, 1, Element(), {(0, 1): heis.element({"X": 1}), (1, 2): heis.element({"Y": 1})}
    )
    return simplex_from_star(heis, star)


class TestDeligneSimplex:
    def test_not_maurer_cartan(self, square: LInftyAlgebra):
        with pytest.raises(NotMaurerCartanError):
            DeligneSimplex(square, 0, square.element({"e": 1}))

    def test_faces(self, heis: LInftyAlgebra, composite: DeligneSimplex):
        assert composite.face(0).value((0, 1)) == heis.element({"Y": 1})
        assert composite.face(2).value((0, 1)) == heis.element({"X": 1})
        assert composite.face(1).value((0, 1)) == heis.element({"X": 1, "Y": 1, "Z": "1/2"})

    def test_degeneracies(self, heis: LInftyAlgebra):
        edge = gauge_witness(heis, Element(), heis.element({"X": 1}))
        for j in range(2):
            degenerate = edge.degeneracy(j)
            assert degenerate.n == 2
            assert degenerate.face(j) == edge
            assert degenerate.face(j + 1) == edge

    def test_star_round_trip(self, heis: LInftyAlgebra, composite: DeligneSimplex):
        for vertex in range(3):
            assert simplex_from_star(heis, rho(composite, vertex)) == composite


class TestStarData:
    def test_vertex_out_of_range(self):
        with pytest.raises(ValueError):
            StarData(2, 3, Element())

    def test_simplex_outside_star(self):
        with pytest.raises(SpaceMismatchError):
            StarData(2, 1, Element(), {(0, 2): Element()})

    def test_value_degree(self, heis: LInftyAlgebra):
        star = StarData(2, 1, Element(), {(0, 1, 2): heis.element({"X": 1})})
        with pytest.raises(DegreeError):
            simplex_from_star(heis, star)

    def test_vertex_must_be_maurer_cartan(self, square: LInftyAlgebra):
        with pytest.raises(NotMaurerCartanError):
            simplex_from_star(square, StarData(1, 0, square.element({"e": 1})))

    def test_higher_bch(self, heis: LInftyAlgebra, composite: DeligneSimplex):
        assert higher_bch(heis, rho(composite, 1)) == composite.face(1)


class TestComposition:
    def test_heisenberg(self, heis: LInftyAlgebra):
        x, y = heis.element({"X": 1}), heis.element({"Y": 1})
        assert bch(heis, x, y) == heis.element({"X": 1, "Y": 1, "Z": "1/2"})
        assert bch(heis, y, x) == heis.element({"X": 1, "Y": 1, "Z": "-1/2"})

    def test_units(self, heis: LInftyAlgebra):
        x = heis.element({"X": 2, "Z": 1})
        assert bch(heis, x, Element()) == x
        assert bch(heis, Element(), x) == x
        assert bch(heis, x, -x) == Element()

    def test_degree(self, dgla_pair: LInftyAlgebra):
        with pytest.raises(DegreeError):
            bch(dgla_pair, dgla_pair.element({"y": 1}), Element())

    @pytest.mark.parametrize(
        ("fixture", "entries"), [("heis", HEIS_ENTRIES), ("ut4", UT4_ENTRIES)]
    )
    def test_matches_matrix_logarithm(
        self, request: pytest.FixtureRequest, fixture: str, entries: dict[str, tuple[int, int]]
    ):
        algebra: LInftyAlgebra = request.getfixturevalue(fixture)
        rng = random.Random(7)
        for _ in range(20):
            a = random_lie_element(rng, algebra, entries)
            b = random_lie_element(rng, algebra, entries)
            product = matrix_exp(to_matrix(algebra, a, entries)) * matrix_exp(
                to_matrix(algebra, b, entries)
            )
            assert bch(algebra, a, b) == from_matrix(algebra, matrix_log(product), entries)

    def test_associative(self, ut4: LInftyAlgebra):
        rng = random.Random(13)
        for _ in range(10):
            a, b, c = (random_lie_element(rng, ut4, UT4_NAMES) for _ in range(3))
            assert bch(ut4, bch(ut4, a, b), c) == bch(ut4, a, bch(ut4, b, c))


class TestGauge:
    def test_acyclic(self, acyclic_pair: LInftyAlgebra):
        u, v = acyclic_pair.element({"u": 1}), acyclic_pair.element({"v": 1})
        assert gauge(acyclic_pair, Element(), u) == v
        assert gauge(acyclic_pair, v, -u) == Element()

    def test_dgla_pair(self, dgla_pair: LInftyAlgebra):
        y = dgla_pair.element({"y": 1})
        x, a = dgla_pair.element({"x": 1}), dgla_pair.element({"a": 1})
        assert gauge(dgla_pair, y, x) == dgla_pair.element({"y": 1, "u": -1})
        assert gauge(dgla_pair, y, a) == dgla_pair.element({"y": 1, "u": 1})

    def test_inverse(self, dgla_pair: LInftyAlgebra):
        y = dgla_pair.element({"y": 2, "u": 1})
        xi = dgla_pair.element({"x": 1, "a": "1/3"})
        assert gauge(dgla_pair, gauge(dgla_pair, y, xi), -xi) == y

    def test_witness(self, dgla_pair: LInftyAlgebra):
        y = dgla_pair.element({"y": 1})
        witness = gauge_witness(dgla_pair, y, dgla_pair.element({"x": 1}))
        assert witness.vertex(0) == y
        assert witness.value((0, 1)) == dgla_pair.element({"x": 1})

    def test_not_maurer_cartan(self, square: LInftyAlgebra):
        with pytest.raises(NotMaurerCartanError):
            gauge(square, square.element({"e": 1}), Element())


class TestHorns:
    def test_inner_horn(self, heis: LInftyAlgebra):
        horn = HornData.from_values(
            heis, 2, 1, {(0, 1): heis.element({"X": 1}), (1, 2): heis.element({"Y": 1})}
        )
        filler = horn_fill(heis, horn)
        assert filler.value((0, 2)) == heis.element({"X": 1, "Y": 1, "Z": "1/2"})

    def test_outer_horn(self, heis: LInftyAlgebra):
        horn = HornData.from_values(
            heis, 2, 0, {(0, 1): heis.element({"X": 1}), (0, 2): heis.element({"X": 1, "Y": 1})}
        )
        filler = horn_fill(heis, horn)
        assert filler.value((1, 2)) == heis.element({"Y": 1, "Z": "-1/2"})
        assert filler.restrict(horn.complex) == horn.alpha

    @pytest.mark.parametrize("k", range(4))
    def test_three_dimensional(self, heis: LInftyAlgebra, k: int):
        rng = random.Random(k)
        for _ in range(3):
            vertex = rng.randrange(4)
            values = {
                (min(vertex, m), max(vertex, m)): random_lie_element(rng, heis, HEIS_ENTRIES)
                for m in range(4)
                if m != vertex
            }
            simplex = simplex_from_star(heis, StarData(3, vertex, Element(), values))
            horn = HornData(3, k, simplex.restrict(FinComplex.horn(3, k)))
            filler = horn_fill(heis, horn)
            assert filler == simplex
            assert filler.restrict(horn.complex) == horn.alpha
            for i in range(4):
                assert simplex_from_star(heis, rho(filler, i)) == filler

    def test_degenerate_dimension(self, heis: LInftyAlgebra):
        with pytest.raises(HornFillingError):
            horn_fill(heis, HornData(0, 0, Element()))

    def test_not_maurer_cartan(self, square: LInftyAlgebra):
        horn = HornData.from_values(square, 1, 0, {(0,): square.element({"e": 1})})
        with pytest.raises(HornFillingError):
            horn_fill(square, horn)


class TestLifting:
    def test_identity_lift(self, heis: LInftyAlgebra, composite: DeligneSimplex):
        horn = HornData.from_values(
            heis, 2, 1, {(0, 1): heis.element({"X": 1}), (1, 2): heis.element({"Y": 1})}
        )
        assert lift_horn(identity_morphism(heis), horn, composite) == composite

    def test_obstructed_lift(self, abelian_line: LInftyAlgebra):
        zero = strict_morphism(abelian_line, abelian_line, {})
        assert not is_surjective_in_nonpositive_degrees(zero)
        horn = HornData.from_values(abelian_line, 1, 0, {})
        target = gauge_witness(abelian_line, Element(), abelian_line.element({"x": 1}))
        with pytest.raises(HornFillingError, match="no preimage"):
            lift_horn(zero, horn, target)

    def test_surjective(self, heis: LInftyAlgebra):
        assert is_surjective_in_nonpositive_degrees(identity_morphism(heis))

    def test_needs_strict_morphism(self, heis: LInftyAlgebra, composite: DeligneSimplex):
        transfer = Transfer(load("dgla_pair_contraction").build())  # type: ignore[arg-type]
        horn = HornData.from_values(heis, 2, 1, {})
        with pytest.raises(HornFillingError):
            lift_horn(transfer.inclusion, horn, composite)


class TestCentralExtensions:
    def test_lift_and_translate(self, heis: LInftyAlgebra, plane_extension: CentralExtension):
        plane = plane_extension.base
        edge = gauge_witness(plane, Element(), plane.element({"X": 1}))
        lifted = lift_simplex(plane_extension, edge)
        assert lifted is not None
        assert lifted.algebra is heis

        z = cochain_structure(1, heis).assemble({(0, 1): heis.element({"Z": 1})})
        translated = principal_action(plane_extension, lifted, z)
        assert translated != lifted
        assert simplex_lifts_differ_by_cocycle(plane_extension, lifted, translated)

    def test_translation_must_be_a_kernel_cocycle(
        self, heis: LInftyAlgebra, plane_extension: CentralExtension
    ):
        plane = plane_extension.base
        lifted = lift_simplex(plane_extension, gauge_witness(plane, Element(), Element()))
        assert lifted is not None
        x = cochain_structure(1, heis).assemble({(0, 1): heis.element({"X": 1})})
        with pytest.raises(SpaceMismatchError):
            principal_action(plane_extension, lifted, x)

    def test_simplex_over_another_algebra(
        self, heis: LInftyAlgebra, plane_extension: CentralExtension
    ):
        with pytest.raises(SpaceMismatchError):
            lift_simplex(plane_extension, gauge_witness(heis, Element(), Element()))


class TestAbelianHomotopyGroups:
    @pytest.mark.parametrize(("i", "expected"), [(0, 0), (1, 1), (2, 0)])
    def test_line(self, abelian_line: LInftyAlgebra, i: int, expected: int):
        report = abelian_homotopy_groups(abelian_line, i)
        assert report.cohomology == expected
        assert report.agree
        assert report.to_dict() == {
            "i": i,
            "cohomology": expected,
            "simplicial": expected,
            "agree": True,
        }

    @pytest.mark.parametrize("i", [0, 1])
    def test_acyclic(self, acyclic_pair: LInftyAlgebra, i: int):
        report = abelian_homotopy_groups(acyclic_pair, i)
        assert (report.cohomology, report.simplicial) == (0, 0)

    def test_not_abelian(self, heis: LInftyAlgebra):
        with pytest.raises(StructureError):
            abelian_homotopy_groups(heis, 0)

    def test_negative_degree(self, abelian_line: LInftyAlgebra):
        with pytest.raises(ValueError):
            abelian_homotopy_groups(abelian_line, -1)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_complexes(self, seed: int):
        algebra, classes = random_abelian_complex(random.Random(seed), f"complex{seed}")
        for i in range(3):
            report = abelian_homotopy_groups(algebra, i)
            assert report.agree
            assert report.cohomology == classes[1 - i]
