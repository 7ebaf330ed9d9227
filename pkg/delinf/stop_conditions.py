from __future__ import annotations

import abc
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from delinf._iteration.dataclasses import IterationState  # pragma: no cover


class StopCondition(abc.ABC):
    """
    Decides when a fixed-point iteration has run long enough.
    """

    @abc.abstractmethod
    def is_met(self, state: IterationState | None) -> bool:
        """
        Checks if iterating should stop.

        Args:
            state: The state of the last iteration, or None before the first.

        Returns:
            True if the stopping condition is met, False otherwise.
        """
        ...  # pragma: no cover

    def __and__(self, other: StopCondition) -> StopCondition:
        return IntersectionStopCondition(self, other)

    def __or__(self, other: StopCondition) -> StopCondition:
        return UnionStopCondition(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StopCondition):
            return False
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __invert__(self) -> StopCondition:
        return InvertedStopCondition(self)


class Stabilized(StopCondition):
    """
    Stops once an iteration reproduces its input exactly.
    """

    def is_met(self, state: IterationState | None) -> bool:
        if state is None or state.exception is not None or state.result is ...:
            return False
        return state.result == state.previous


class IterationsExhausted(StopCondition):
    """
    Stops after a fixed number of iterations.

    Attributes:
        max_iterations: The number of iterations after which to stop.
    """

    def __init__(self, max_iterations: int):
        if max_iterations <= 0:
            raise ValueError("max_iterations must be greater than 0")
        self.max_iterations = max_iterations

    def is_met(self, state: IterationState | None) -> bool:
        if state is None:
            return False
        return state.iteration >= self.max_iterations


class IntersectionStopCondition(StopCondition):
    """
    Stops if all of the given conditions are met.
    """

    def __init__(self, *conditions: StopCondition):
        self.conditions: tuple[StopCondition, ...] = conditions

    def is_met(self, state: IterationState | None) -> bool:
        return all(condition.is_met(state) for condition in self.conditions)


class UnionStopCondition(StopCondition):
    """
    Stops if any of the given conditions is met.
    """

    def __init__(self, *conditions: StopCondition):
        self.conditions: tuple[StopCondition, ...] = conditions

    def is_met(self, state: IterationState | None) -> bool:
        return any(condition.is_met(state) for condition in self.conditions)


class InvertedStopCondition(StopCondition):
    """
    Stops when the wrapped condition is not met.
    """

    def __init__(self, condition: StopCondition):
        self.condition = condition

    def is_met(self, state: IterationState | None) -> bool:
        if state is None:
            return False
        return not self.condition.is_met(state)

    def __invert__(self) -> StopCondition:
        return self.condition


__all__ = [
    "IntersectionStopCondition",
    "InvertedStopCondition",
    "IterationsExhausted",
    "Stabilized",
    "StopCondition",
    "UnionStopCondition",
]
