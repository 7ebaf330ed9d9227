from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import factorial
from typing import Optional

from delinf._graded.multilinear import (
    LinearMap,
    MultiIndex,
    MultilinearMap,
    multilinear_expand,
    power_expand,
    symmetric_tensor,
)
from delinf._graded.protocols import TaylorStructure
from delinf._graded.signs import canonical_order, koszul_sign
from delinf._graded.spaces import Element, GradedSpace
from delinf.errors import SpaceMismatchError, StructureError
from delinf.linfty import LInftyAlgebra, LInftyMorphism, partition_terms
from delinf.reports import CheckReport

_logger = logging.getLogger("delinf")


@dataclass
class Contraction:
    """
    Contraction data from a large complex onto a small one.

    The homotopy satisfies `K q1 + q1 K = f1 g1 - id` together with the side
    conditions `g1 f1 = id`, `K f1 = 0`, `g1 K = 0` and `K^2 = 0`.

    Args:
        big: The large side, with its Taylor coefficients.
        small: The small graded space.
        inclusion: `f1`, from small keys to large elements.
        projection: `g1`, from large keys to small elements.
        homotopy: `K`, of degree -1 on the large side.
        small_differential: The differential of the small side if prescribed;
            otherwise it is induced as `g1 q1 f1`.
        strict_projection: Whether the projection is itself strict, so that
            `G = g1`. This holds when the large structure has brackets that
            `g1` already intertwines, as for the evaluation at a vertex.
        big_keys: A finite set of large keys on which checks run.
    """

    big: TaylorStructure
    small: GradedSpace
    inclusion: LinearMap
    projection: LinearMap
    homotopy: LinearMap
    small_differential: Optional[LinearMap] = None
    strict_projection: bool = False
    big_keys: Optional[Sequence[Hashable]] = None

    def big_differential(self, x: Mapping[Hashable, Fraction]) -> Element:
        return multilinear_expand(self.big.bracket, [x])

    def induced_differential(self, key: int) -> Element:
        return self.projection(self.big_differential(self.inclusion.on(key)))


def check_contraction(
    contraction: Contraction, test_keys: Optional[Iterable[Hashable]] = None
) -> CheckReport:
    """
    Checks the contraction identities on every small key and on the given large
    keys, `contraction.big_keys` by default.
    """
    keys = list(test_keys if test_keys is not None else (contraction.big_keys or ()))
    if not keys:
        raise ValueError("a finite set of large keys is required to check a contraction")
    report = CheckReport(kind="contraction")
    c = contraction
    q1 = c.big_differential
    r1 = c.small_differential or LinearMap(compute=c.induced_differential)
    for w in c.small:
        fw = c.inclusion.on(w)
        cases = {
            "g1f1=id": c.projection(fw) - Element.unit(w),
            "Kf1=0": c.homotopy(fw),
            "f1 chain map": q1(fw) - c.inclusion(r1.on(w)),
        }
        for identity, residual in cases.items():
            report.count(identity)
            if residual:
                report.fail(identity, w, {repr(k): str(v) for k, v in residual.items()})
    for v in keys:
        unit = Element.unit(v)
        kv = c.homotopy.on(v)
        homotopy_residual = c.homotopy(q1(unit)) + q1(kv) - c.inclusion(c.projection.on(v))
        homotopy_residual.iadd_coef(1, unit)
        cases = {
            "Kq1+q1K=f1g1-id": homotopy_residual,
            "K^2=0": c.homotopy(kv),
            "g1K=0": c.projection(kv),
            "g1 chain map": r1(c.projection.on(v)) - c.projection(q1(unit)),
        }
        for identity, residual in cases.items():
            report.count(identity)
            if residual:
                report.fail(identity, v, {repr(k): str(x) for k, x in residual.items()})
    return report


class Transfer:
    """
    Homotopy transfer of the large structure along a contraction.

    The transferred coefficients are

        r_1 = g1 q1 f1,   r_i = g1 sum_{k >= 2} q_k F^k_i,
        f_1 = f1,         f_i = K sum_{k >= 2} q_k F^k_i,

    where `F^k_i` sums over set partitions of the inputs into `k` blocks.
    The recursion terminates because every term of total weight at least the
    nilpotency vanishes.
    """

    def __init__(self, contraction: Contraction, *, name: Optional[str] = None):
        self.contraction = contraction
        self.big = contraction.big
        self.small = contraction.small
        self.name = name or "transferred"
        if self.big.nilpotency != self.small.nilpotency:
            raise SpaceMismatchError("both sides of a contraction share the nilpotency")
        self._f: dict[MultiIndex, Element] = {}
        self._g: dict[tuple[Hashable, ...], Element] = {}
        self._f1g1 = LinearMap(
            compute=lambda key: contraction.inclusion(contraction.projection.on(key))
        )
        given = contraction.small_differential
        if given is not None:
            for w in self.small:
                if given.on(w) != contraction.induced_differential(w):
                    raise StructureError(
                        f"prescribed small differential differs from g1 q1 f1 on {w}"
                    )

    def _too_heavy(self, index: Sequence[int]) -> bool:
        weights = self.small.weights
        return sum(weights[key] for key in index) >= self.small.nilpotency

    def _brackets_of_blocks(self, index: MultiIndex) -> Element:
        """`sum_{k >= 2} q_k F^k(index)` on the large side."""
        result = Element()
        for sign, values in partition_terms(index, self.small.degree, self.f, min_blocks=2):
            value = multilinear_expand(self.big.bracket, values)
            if value:
                result.iadd_coef(sign, value)
        return result

    def f(self, index: Sequence[int]) -> Element:
        """`f_i` on a tuple of small keys."""
        index = tuple(index)
        value = self._f.get(index)
        if value is not None:
            return value
        if len(index) == 1:
            value = self.contraction.inclusion.on(index[0])
        elif self._too_heavy(index):
            value = Element()
        else:
            sign, canonical = canonical_order(index, self.small.degree)
            if not sign:
                value = Element()
            elif canonical != index:
                value = self.f(canonical).scaled(sign)  # type: ignore[arg-type]
            else:
                value = self.contraction.homotopy(self._brackets_of_blocks(index))
        self._f[index] = value
        return value

    def r(self, index: MultiIndex) -> Element:
        """`r_i` on a canonical multi-index of small keys."""
        if len(index) == 1:
            return self.contraction.induced_differential(index[0])
        if self._too_heavy(index):
            return Element()
        return self.contraction.projection(self._brackets_of_blocks(index))

    @cached_property
    def structure(self) -> LInftyAlgebra:
        """The transferred structure on the small space."""
        taylor = {
            arity: MultilinearMap(self.small, arity, 1, compute=self.r)
            for arity in range(1, self.small.arity_bound + 1)
        }
        return LInftyAlgebra(self.small, taylor, name=self.name)

    @cached_property
    def inclusion(self) -> LInftyMorphism:
        """The transferred inclusion `F`, from the small structure to the large one."""
        taylor = {
            arity: MultilinearMap(self.small, arity, 0, compute=self.f)
            for arity in range(1, self.small.arity_bound + 1)
        }
        return LInftyMorphism(self.structure, self.big, taylor, name="F")

    def morphism_component_keys(self, index: Sequence[int], k: int) -> Element:
        """
        `F^k_i` on a tuple of `i` small keys: the sum over set partitions into
        `k` blocks of `f(B_1) ... f(B_k)`, keyed by canonical tuples of large keys.
        """
        index = tuple(index)
        if not 1 <= k <= len(index):
            raise ValueError(f"no component F^{k} on {len(index)} arguments")
        result = Element()
        for sign, values in partition_terms(index, self.small.degree, self.f, min_blocks=k):
            if len(values) == k:
                result.iadd_coef(sign, symmetric_tensor(values, self.big.degree))
        return result

    def morphism_component(self, args: Sequence[Mapping[int, Fraction]], k: int) -> Element:
        """`F^k_i` on small vectors."""
        return multilinear_expand(lambda keys: self.morphism_component_keys(keys, k), args)

    def k_sigma_keys(self, keys: Sequence[Hashable]) -> Element:
        """
        The symmetrized homotopy `K^Sigma_i` on a monomial of large keys, keyed
        by canonical tuples of large keys.
        """
        degrees = [self.big.degree(key) for key in keys]
        result = Element()
        for coef, tensor, _ in self._k_sigma(keys, degrees):
            result.iadd_coef(coef, symmetric_tensor(tensor, self.big.degree))
        return result

    def k_sigma(self, args: Sequence[Mapping[Hashable, Fraction]]) -> Element:
        """`K^Sigma_i` on large vectors, `i = len(args)`."""
        return multilinear_expand(self.k_sigma_keys, args)

    def _k_sigma(
        self, keys: Sequence[Hashable], degrees: Sequence[int]
    ) -> Iterator[tuple[Fraction, list[Element], list[int]]]:
        """
        Terms of the symmetrized homotopy on a monomial of large keys, each a
        coefficient with a pure tensor and its degrees.
        """
        i = len(keys)
        scale = Fraction(1, factorial(i))
        homotopy = self.contraction.homotopy
        for sigma in permutations(range(i)):
            order_sign = koszul_sign(degrees, sigma)
            passed = 0
            for j in range(i):
                kv = homotopy.on(keys[sigma[j]])
                if kv:
                    head = [self._f1g1.on(keys[sigma[p]]) for p in range(j)]
                    if all(head):
                        tail = [Element.unit(keys[sigma[p]]) for p in range(j + 1, i)]
                        tensor = [*head, kv, *tail]
                        tensor_degrees = [degrees[p] for p in sigma]
                        tensor_degrees[j] -= 1
                        sign = -order_sign if passed % 2 else order_sign
                        yield sign * scale, tensor, tensor_degrees
                passed += degrees[sigma[j]]

    def g_keys(self, keys: Sequence[Hashable]) -> Element:
        """
        `g_i` on a tuple of large keys, by the recursion

            g_i = sum_{k=1}^{i-1} g_k Q^k_i K_i,

        with `K_i` the symmetrized homotopy and `Q^k_i` the component of the
        large coderivation from arity `i` to arity `k`.
        """
        if len(keys) == 1:
            return self.contraction.projection.on(keys[0])
        if self.contraction.strict_projection:
            return Element()
        sign, canonical = canonical_order(keys, self.big.degree)
        if not sign:
            return Element()
        value = self._g.get(canonical)
        if value is None:
            value = self._g_canonical(canonical)
            self._g[canonical] = value
        return value if sign == 1 else -value

    def _g_canonical(self, keys: tuple[Hashable, ...]) -> Element:
        big = self.big
        if sum(big.weight(key) for key in keys) >= big.nilpotency:
            return Element()
        i = len(keys)
        degrees = [big.degree(key) for key in keys]
        result = Element()
        for coef, tensor, tensor_degrees in self._k_sigma(keys, degrees):
            for k in range(1, i):
                size = i - k + 1
                for subset in combinations(range(i), size):
                    chosen = set(subset)
                    rest = tuple(p for p in range(i) if p not in chosen)
                    inner = multilinear_expand(big.bracket, [tensor[p] for p in subset])
                    if not inner:
                        continue
                    sign = koszul_sign(tensor_degrees, subset + rest)
                    value = self.g([inner] + [tensor[p] for p in rest])
                    if value:
                        result.iadd_coef(coef * sign, value)
        return result

    def g(self, args: Sequence[Mapping[Hashable, Fraction]]) -> Element:
        """`g_i` on large vectors."""
        return multilinear_expand(self.g_keys, args)

    def push_projection(self, x: Mapping[Hashable, Fraction]) -> Element:
        """`G_*(x) = sum_i g_i(x^i) / i!` for a degree 0 large element."""
        if self.contraction.strict_projection:
            return self.contraction.projection(x)
        result = Element()
        for arity in range(1, self.small.arity_bound + 1):
            value = power_expand(self.g_keys, x, arity, self.big.degree)
            result.iadd_coef(Fraction(1, factorial(arity)), value)
        return result

    def projection(self) -> LInftyMorphism:
        """
        The transferred projection `G` as a morphism, for a finite large side.
        """
        if not isinstance(self.big, LInftyAlgebra):
            raise SpaceMismatchError("the projection is a finite morphism only for finite algebras")
        big = self.big
        taylor = {
            arity: MultilinearMap(big.space, arity, 0, compute=self.g_keys)
            for arity in range(1, big.arity_bound + 1)
        }
        return LInftyMorphism(
            big, self.structure, taylor, strict=self.contraction.strict_projection, name="G"
        )


def transfer_structure(contraction: Contraction) -> Transfer:
    return Transfer(contraction)


__all__ = ["Contraction", "Transfer", "check_contraction", "transfer_structure"]
