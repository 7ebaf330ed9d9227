from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb

from delinf.errors import BudgetExceededError

_logger = logging.getLogger("delinf")


@dataclass(frozen=True)
class Budget:
    """
    Size limits for cochain algebra computations.

    Args:
        max_simplex_dimension: The largest simplex dimension a cochain algebra may use.
        max_coefficient_dimension: The largest coefficient algebra dimension.
        max_cost: The largest number of multi-indices, summed over arities, that a
            structure may need before it is refused.
    """

    max_simplex_dimension: int = 3
    max_coefficient_dimension: int = 8
    max_cost: int = 2_000_000

    def __post_init__(self):
        if self.max_simplex_dimension < 0:
            raise ValueError("max_simplex_dimension must be non-negative")
        if self.max_coefficient_dimension <= 0:
            raise ValueError("max_coefficient_dimension must be greater than 0")
        if self.max_cost <= 0:
            raise ValueError("max_cost must be greater than 0")

    def estimate(self, dimension: int, arity_bound: int) -> int:
        """
        Number of symmetric multi-indices a structure on a space of the given
        dimension has up to the arity bound.
        """
        return sum(comb(dimension + i - 1, i) for i in range(1, arity_bound + 1))

    def guard(
        self,
        *,
        simplex_dimension: int,
        coefficient_dimension: int,
        arity_bound: int,
        cochain_dimension: int,
    ) -> int:
        """
        Checks a requested cochain computation against the budget.

        Returns:
            The cost estimate.

        Raises:
            BudgetExceededError: If any limit is exceeded.
        """
        cost = self.estimate(cochain_dimension, arity_bound)
        _logger.debug(
            "cochain budget: simplex dimension %d, coefficient dimension %d, "
            "arity bound %d, estimated %d multi-indices",
            simplex_dimension,
            coefficient_dimension,
            arity_bound,
            cost,
        )
        if simplex_dimension > self.max_simplex_dimension:
            raise BudgetExceededError(
                f"simplex dimension {simplex_dimension} exceeds the budget of "
                f"{self.max_simplex_dimension}"
            )
        if coefficient_dimension > self.max_coefficient_dimension:
            raise BudgetExceededError(
                f"coefficient dimension {coefficient_dimension} exceeds the budget of "
                f"{self.max_coefficient_dimension}"
            )
        if cost > self.max_cost:
            raise BudgetExceededError(
                f"estimated {cost} multi-indices exceeds the budget of {self.max_cost}"
            )
        return cost


DEFAULT_BUDGET = Budget()

__all__ = ["DEFAULT_BUDGET", "Budget"]
