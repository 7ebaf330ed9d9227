from __future__ import annotations

import logging
from collections.abc import Hashable, Mapping, Sequence
from fractions import Fraction
from math import factorial
from typing import Optional

from delinf._graded.multilinear import multilinear_expand, power_expand
from delinf._graded.spaces import Element
from delinf._iteration import IterationHook, iterating
from delinf.errors import ConvergenceError, NotInImageError, NotMaurerCartanError
from delinf.linfty import is_mc
from delinf.stop_conditions import IterationsExhausted, StopCondition
from delinf.transfer import Transfer

_logger = logging.getLogger("delinf")


def kuranishi_forward(
    transfer: Transfer, x: Mapping[Hashable, Fraction]
) -> tuple[Element, Element]:
    """
    The Kuranishi map on a Maurer-Cartan element of the large side:
    `x -> (G_*(x), K(x))`.

    Raises:
        NotMaurerCartanError: If `x` is not Maurer-Cartan.
    """
    if not is_mc(transfer.big, x):
        raise NotMaurerCartanError("element is not Maurer-Cartan on the large side")
    return transfer.push_projection(x), transfer.contraction.homotopy(x)


def _check_in_image(transfer: Transfer, kv: Mapping[Hashable, Fraction]) -> None:
    # kv lies in the image of K exactly when K q1 kv = -kv.
    c = transfer.contraction
    residual = c.homotopy(c.big_differential(kv))
    residual.iadd_coef(1, kv)
    if residual:
        raise NotInImageError("the prescribed element is not in the image of the homotopy")


def kuranishi_solve(
    transfer: Transfer,
    y: Mapping[int, Fraction],
    kv: Optional[Mapping[Hashable, Fraction]] = None,
    *,
    preimage: Optional[Mapping[Hashable, Fraction]] = None,
    until: Optional[StopCondition] = None,
    max_iterations: Optional[int] = None,
    hooks: Sequence[IterationHook] = (),
) -> Element:
    """
    The inverse of the Kuranishi map: the unique Maurer-Cartan `x` with
    `G_*(x) = y` and `K(x) = kv`.

    `x` is the fixed point of

        x -> f1(y) - q1(kv) + sum_{i >= 2} (K q_i(x^i) - f1 g_i(x^i)) / i!,

    which stabilizes after at most the nilpotency many steps because each step
    fixes one more weight level.

    Args:
        transfer: The transfer along the contraction.
        y: A Maurer-Cartan element of the transferred structure.
        kv: An element of the image of `K`.
        preimage: Any `v` with `K(v) = kv`, used when `kv` is not given.
        until: An extra stop condition; stabilization always stops.
        max_iterations: Iteration bound, the nilpotency plus one by default.
        hooks: Callables run after every iteration that changes the value.

    Raises:
        NotMaurerCartanError: If `y` is not Maurer-Cartan.
        NotInImageError: If `kv` is not in the image of `K`.
        ConvergenceError: If the iteration does not stabilize within the bound.
    """
    c = transfer.contraction
    if kv is None:
        kv = c.homotopy(preimage or {})
    else:
        _check_in_image(transfer, kv)
    if not is_mc(transfer.structure, y):
        raise NotMaurerCartanError("element is not Maurer-Cartan in the transferred structure")
    big = transfer.big
    base = c.inclusion(y)
    base.iadd_coef(-1, multilinear_expand(big.bracket, [kv]))
    bound = max_iterations or big.nilpotency + 1
    stop = IterationsExhausted(bound) if until is None else until | IterationsExhausted(bound)

    def step(x: Element) -> Element:
        result = base.copy()
        for arity in range(2, big.arity_bound + 1):
            power = power_expand(big.bracket, x, arity, big.degree)
            scale = Fraction(1, factorial(arity))
            if power:
                result.iadd_coef(scale, c.homotopy(power))
            if not c.strict_projection:
                projected = power_expand(transfer.g_keys, x, arity, big.degree)
                if projected:
                    result.iadd_coef(-scale, c.inclusion(projected))
        return result

    iterations = iterating(Element(), until=stop, on_change=hooks)
    for iteration in iterations:
        with iteration:
            iteration.result = step(iteration.previous)
    if not iterations.stabilized:
        raise ConvergenceError(f"Kuranishi iteration did not stabilize in {bound} steps")
    x = iterations.value
    _logger.debug(
        "Kuranishi iteration stabilized after %d steps", iterations.last_iteration.iteration
    )
    return x


__all__ = ["kuranishi_forward", "kuranishi_solve"]
