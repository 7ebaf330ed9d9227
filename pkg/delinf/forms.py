"""
Polynomial differential forms on standard simplices.

A form on the `n`-simplex is written in the coordinates `t_1, ..., t_n`; the
remaining barycentric coordinate `t_0 = 1 - t_1 - ... - t_n` is eliminated,
so every form has a unique representation. Terms are keyed by monomials
`(exponents, wedge)` where `wedge` is an increasing tuple of variable
positions.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterator, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial
from typing import Union

from delinf._graded.multilinear import LinearMap
from delinf._graded.spaces import BasisElement, Element, GradedSpace
from delinf.complexes import OrdinalMap, Simplex, faces_of
from delinf.errors import DegreeError, SpaceMismatchError
from delinf.transfer import Contraction

Monomial = tuple[tuple[int, ...], tuple[int, ...]]


def _wedge_sign(left: Sequence[int], right: Sequence[int]) -> int:
    inversions = sum(1 for a in left for b in right if a > b)
    return -1 if inversions % 2 else 1


def multiply_monomials(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Product of two monomials as a sign and a monomial; sign 0 when it vanishes."""
    if set(a[1]) & set(b[1]):
        return 0, a
    exponents = tuple(x + y for x, y in zip(a[0], b[0]))
    return _wedge_sign(a[1], b[1]), (exponents, tuple(sorted(a[1] + b[1])))


def differentiate_monomial(monomial: Monomial) -> Iterator[tuple[int, Monomial]]:
    exponents, wedge = monomial
    for v, e in enumerate(exponents):
        if not e or v in wedge:
            continue
        lowered = exponents[:v] + (e - 1,) + exponents[v + 1 :]
        before = sum(1 for w in wedge if w < v)
        sign = -e if before % 2 else e
        yield sign, (lowered, tuple(sorted(wedge + (v,))))


class PolyForm:
    """
    A polynomial differential form in `nvars` variables with rational
    coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Union[Mapping[Monomial, Fraction], None] = None):
        self.nvars = nvars
        self.terms = Element(terms or {})
        for exponents, wedge in self.terms:
            if len(exponents) != nvars or any(w >= nvars for w in wedge):
                raise SpaceMismatchError(f"monomial does not live in {nvars} variables")

    @classmethod
    def _raw(cls, nvars: int, terms: Element) -> PolyForm:
        form = cls.__new__(cls)
        form.nvars = nvars
        form.terms = terms
        return form

    @classmethod
    def constant(cls, nvars: int, value: Union[Fraction, int] = 1) -> PolyForm:
        return cls._raw(nvars, Element({((0,) * nvars, ()): value}))

    @classmethod
    def variable(cls, nvars: int, v: int) -> PolyForm:
        exponents = tuple(1 if u == v else 0 for u in range(nvars))
        return cls._raw(nvars, Element({(exponents, ()): 1}))

    @classmethod
    def coordinate(cls, n: int, i: int) -> PolyForm:
        """The barycentric coordinate `t_i` on the `n`-simplex."""
        if not 0 <= i <= n:
            raise ValueError(f"coordinate {i} out of range for the {n}-simplex")
        if i:
            return cls.variable(n, i - 1)
        form = cls.constant(n)
        for v in range(n):
            form = form - cls.variable(n, v)
        return form

    @property
    def degrees(self) -> set[int]:
        return {len(wedge) for _, wedge in self.terms}

    @property
    def degree(self) -> int:
        degrees = self.degrees
        if len(degrees) != 1:
            raise DegreeError(f"form is not homogeneous: degrees {sorted(degrees)}")
        return degrees.pop()

    def component(self, degree: int) -> PolyForm:
        return PolyForm._raw(
            self.nvars,
            Element((m, c) for m, c in self.terms.items() if len(m[1]) == degree),
        )

    def _check(self, other: PolyForm) -> None:
        if self.nvars != other.nvars:
            raise SpaceMismatchError("forms live on simplices of different dimensions")

    def __add__(self, other: PolyForm) -> PolyForm:
        self._check(other)
        return PolyForm._raw(self.nvars, self.terms + other.terms)

    def __sub__(self, other: PolyForm) -> PolyForm:
        self._check(other)
        return PolyForm._raw(self.nvars, self.terms - other.terms)

    def __neg__(self) -> PolyForm:
        return PolyForm._raw(self.nvars, -self.terms)

    def scaled(self, coef: Union[Fraction, int]) -> PolyForm:
        return PolyForm._raw(self.nvars, self.terms.scaled(coef))

    def wedge(self, other: PolyForm) -> PolyForm:
        self._check(other)
        result = Element()
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                sign, monomial = multiply_monomials(a, b)
                if sign:
                    result.add_term(monomial, sign * x * y)
        return PolyForm._raw(self.nvars, result)

    def __mul__(self, other: Union[PolyForm, Fraction, int]) -> PolyForm:
        if isinstance(other, PolyForm):
            return self.wedge(other)
        return self.scaled(other)

    def __rmul__(self, other: Union[Fraction, int]) -> PolyForm:
        return self.scaled(other)

    def d(self) -> PolyForm:
        result = Element()
        for monomial, coef in self.terms.items():
            for sign, image in differentiate_monomial(monomial):
                result.add_term(image, sign * coef)
        return PolyForm._raw(self.nvars, result)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"PolyForm({self.nvars}, {dict(self.terms)!r})"


def coordinate_differential(n: int, i: int) -> PolyForm:
    return PolyForm.coordinate(n, i).d()


def substitute(form: PolyForm, images: Sequence[PolyForm], nvars: int) -> PolyForm:
    """
    Pulls a form back along the polynomial map sending the `v`-th variable to
    the 0-form `images[v]` in `nvars` variables.
    """
    if len(images) != form.nvars:
        raise SpaceMismatchError("one image per variable is required")
    differentials = [image.d() for image in images]
    powers: dict[tuple[int, int], PolyForm] = {}

    def power(v: int, e: int) -> PolyForm:
        if e == 0:
            return PolyForm.constant(nvars)
        if (v, e) not in powers:
            powers[(v, e)] = power(v, e - 1).wedge(images[v])
        return powers[(v, e)]

    result = PolyForm._raw(nvars, Element())
    for (exponents, wedge), coef in form.terms.items():
        term = PolyForm.constant(nvars, coef)
        for v, e in enumerate(exponents):
            if e:
                term = term.wedge(power(v, e))
        for w in wedge:
            term = term.wedge(differentials[w])
            if not term:
                break
        result = result + term
    return result


def pullback(form: PolyForm, theta: OrdinalMap) -> PolyForm:
    """
    Pullback along the simplicial map `Delta^m -> Delta^n` of an ordinal map
    `theta: [m] -> [n]`, where `n = form.nvars`.
    """
    m = len(theta) - 1
    images = []
    for i in range(1, form.nvars + 1):
        image = PolyForm._raw(m, Element())
        for j, target in enumerate(theta):
            if target == i:
                image = image + PolyForm.coordinate(m, j)
        images.append(image)
    return substitute(form, images, m)


@lru_cache(maxsize=None)
def face_integrals(n: int, monomial: Monomial) -> tuple[tuple[Simplex, Fraction], ...]:
    k = len(monomial[1])
    form = PolyForm._raw(n, Element({monomial: 1}))
    result = []
    for face in faces_of(range(n + 1)):
        if len(face) != k + 1:
            continue
        value = _integrate_top(pullback(form, face))
        if value:
            result.append((face, value))
    return tuple(result)


def _integrate_top(form: PolyForm) -> Fraction:
    k = form.nvars
    top = tuple(range(k))
    total = Fraction(0)
    for (exponents, wedge), coef in form.terms.items():
        if wedge != top:
            continue
        numerator = 1
        for e in exponents:
            numerator *= factorial(e)
        total += coef * Fraction(numerator, factorial(k + sum(exponents)))
    return total


def integrate(form: PolyForm, face: Simplex) -> Fraction:
    """The integral of a form on the `n`-simplex over one of its faces."""
    k = len(face) - 1
    total = Fraction(0)
    for monomial, coef in form.terms.items():
        if len(monomial[1]) != k:
            continue
        for simplex, value in face_integrals(form.nvars, monomial):
            if simplex == face:
                total += coef * value
    return total


def integration_map(form: PolyForm) -> Element:
    """All face integrals of a form, keyed by face."""
    result = Element()
    for monomial, coef in form.terms.items():
        for face, value in face_integrals(form.nvars, monomial):
            result.add_term(face, coef * value)
    return result


@lru_cache(maxsize=None)
def whitney_form(n: int, face: Simplex) -> PolyForm:
    """
    The elementary Whitney form of a face of the `n`-simplex,
    `k! sum_j (-1)^j t_{i_j} dt_{i_0} ... (omit j) ... dt_{i_k}`.
    """
    face = tuple(face)
    k = len(face) - 1
    if list(face) != sorted(set(face)) or not face or face[-1] > n or face[0] < 0:
        raise SpaceMismatchError(f"{face} is not a face of the {n}-simplex")
    result = PolyForm._raw(n, Element())
    for j, i in enumerate(face):
        term = PolyForm.coordinate(n, i)
        for other in face[:j] + face[j + 1 :]:
            term = term.wedge(coordinate_differential(n, other))
        result = result - term if j % 2 else result + term
    return result.scaled(factorial(k))


def whitney_extension(n: int, cochain: Mapping[Simplex, Fraction]) -> PolyForm:
    result = PolyForm._raw(n, Element())
    for face, coef in cochain.items():
        result = result + whitney_form(n, face).scaled(coef)
    return result


@lru_cache(maxsize=None)
def _vertex_homotopy_monomial(n: int, i: int, monomial: Monomial) -> PolyForm:
    # Variable 0 of the (n + 1)-variable space is the homotopy parameter u.
    u = PolyForm.variable(n + 1, 0)
    images = []
    for j in range(1, n + 1):
        image = u.wedge(PolyForm.variable(n + 1, j))
        if j == i:
            image = image + PolyForm.constant(n + 1) - u
        images.append(image)
    pulled = substitute(PolyForm._raw(n, Element({monomial: 1})), images, n + 1)
    result = Element()
    for (exponents, wedge), coef in pulled.terms.items():
        if not wedge or wedge[0] != 0:
            continue
        lowered = (exponents[1:], tuple(w - 1 for w in wedge[1:]))
        result.add_term(lowered, coef / (exponents[0] + 1))
    return PolyForm._raw(n, result)


def vertex_homotopy(form: PolyForm, i: int) -> PolyForm:
    """
    The homotopy `h_i` contracting the simplex onto vertex `i`, so that
    `h_i d + d h_i = id - (evaluation at vertex i)`.
    """
    n = form.nvars
    if not 0 <= i <= n:
        raise ValueError(f"vertex {i} out of range for the {n}-simplex")
    result = PolyForm._raw(n, Element())
    for monomial, coef in form.terms.items():
        result = result + _vertex_homotopy_monomial(n, i, monomial).scaled(coef)
    return result


@lru_cache(maxsize=None)
def dupont_monomial(n: int, monomial: Monomial) -> PolyForm:
    result = PolyForm._raw(n, Element())
    start = PolyForm._raw(n, Element({monomial: 1}))

    def extend(chain: tuple[int, ...], current: PolyForm) -> None:
        nonlocal result
        k = len(chain) - 1
        term = whitney_form(n, chain).wedge(current)
        result = result + term if k % 2 else result - term
        if len(chain) == n:
            return
        for i in range(chain[-1] + 1, n + 1):
            following = vertex_homotopy(current, i)
            if following:
                extend(chain + (i,), following)

    for i in range(n + 1):
        first = vertex_homotopy(start, i)
        if first:
            extend((i,), first)
    return result


def dupont_homotopy(form: PolyForm) -> PolyForm:
    """
    The Dupont homotopy

        s = - sum_{k=0}^{n-1} (-1)^k sum_{|I| = k+1} w_I h_{i_k} ... h_{i_0},

    satisfying `s d + d s = E I - id`, `s E = 0`, `I s = 0` and `s^2 = 0`.
    """
    result = PolyForm._raw(form.nvars, Element())
    for monomial, coef in form.terms.items():
        result = result + dupont_monomial(form.nvars, monomial).scaled(coef)
    return result


def monomials(n: int, max_polynomial_degree: int) -> list[Monomial]:
    """Every monomial of polynomial degree at most the bound, all form degrees."""
    result = []
    for exponents in product(range(max_polynomial_degree + 1), repeat=n):
        if sum(exponents) > max_polynomial_degree:
            continue
        for k in range(n + 1):
            for wedge in combinations(range(n), k):
                result.append((exponents, wedge))
    return sorted(result)


class PlainForms:
    """
    Polynomial forms on the `n`-simplex with the de Rham differential as the
    only Taylor coefficient.
    """

    nilpotency = 2
    arity_bound = 1

    def __init__(self, n: int):
        self.n = n

    def degree(self, key: Hashable) -> int:
        return len(key[1])  # type: ignore[index]

    def weight(self, key: Hashable) -> int:
        return 1

    def bracket(self, keys: Sequence[Hashable]) -> Element:
        if len(keys) != 1:
            return Element()
        return PolyForm._raw(self.n, Element({keys[0]: 1})).d().terms


def simplex_space(n: int) -> GradedSpace:
    """Normalized cochains on the `n`-simplex, one generator per face."""
    return GradedSpace(
        tuple(
            BasisElement("e" + "_".join(map(str, face)), len(face) - 1)
            for face in faces_of(range(n + 1))
        ),
        2,
    )


def dupont_contraction(n: int, *, max_polynomial_degree: int = 2) -> Contraction:
    """
    Dupont's contraction of polynomial forms on the `n`-simplex onto
    normalized cochains, with `q1 = d` on forms and `K = s`.

    The homotopy is defined on every monomial; `max_polynomial_degree` only
    bounds the monomials that `check_contraction` runs on by default.
    """
    faces = faces_of(range(n + 1))
    position = {face: p for p, face in enumerate(faces)}

    def inclusion(key: Hashable) -> Element:
        return whitney_form(n, faces[key]).terms.copy()  # type: ignore[index]

    def projection(key: Hashable) -> Element:
        return Element(
            (position[face], value)
            for face, value in face_integrals(n, key)  # type: ignore[arg-type]
        )

    def homotopy(key: Hashable) -> Element:
        return dupont_monomial(n, key).terms  # type: ignore[arg-type]

    return Contraction(
        big=PlainForms(n),
        small=simplex_space(n),
        inclusion=LinearMap(compute=inclusion),
        projection=LinearMap(compute=projection),
        homotopy=LinearMap(compute=homotopy, degree=-1),
        big_keys=monomials(n, max_polynomial_degree),
    )


__all__ = [
    "Monomial",
    "PlainForms",
    "PolyForm",
    "coordinate_differential",
    "differentiate_monomial",
    "dupont_contraction",
    "dupont_homotopy",
    "dupont_monomial",
    "face_integrals",
    "integrate",
    "integration_map",
    "monomials",
    "multiply_monomials",
    "pullback",
    "simplex_space",
    "substitute",
    "vertex_homotopy",
    "whitney_extension",
    "whitney_form",
]
