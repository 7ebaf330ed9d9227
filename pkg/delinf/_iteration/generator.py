from __future__ import annotations

import logging
from collections.abc import Sequence
from types import TracebackType
from typing import TYPE_CHECKING, Any

from delinf.stop_conditions import Stabilized, StopCondition

from .dataclasses import IterationState, Phase

if TYPE_CHECKING:
    from .protocols import HookType, IterationHook  # pragma: no cover

_logger = logging.getLogger("delinf")


class IterationGenerator:
    """
    A generator that yields iteration contexts until a stopping condition is met.

    Each context starts from the result of the previous one. Setting
    `context.result` inside the `with` block records the new value, and the
    iteration is marked stabilized when the result equals its starting value.
    Exceptions raised inside an iteration propagate unchanged.
    """

    def __init__(
        self,
        start: Any,
        *,
        until: StopCondition | None = None,
        before_iteration: Sequence[IterationHook] = (),
        on_change: Sequence[IterationHook] = (),
        on_stabilized: Sequence[IterationHook] = (),
        on_failure: Sequence[IterationHook] = (),
    ):
        """
        Initialize the IterationGenerator.

        Args:
            start: The value the first iteration starts from.
            until: The stop condition. Stabilization always stops iterating.
            before_iteration: Callables called before each iteration.
            on_change: Callables called when an iteration changes its value.
            on_stabilized: Callables called when an iteration reproduces its value.
            on_failure: Callables called when an iteration raises.
        """
        if until is None:
            self.stop_condition: StopCondition = Stabilized()
        else:
            self.stop_condition = until | Stabilized()
        self.start = start
        self._iterations: list[IterationContext] = []
        self.before_iteration = before_iteration
        self.on_change = on_change
        self.on_stabilized = on_stabilized
        self.on_failure = on_failure

    @property
    def last_iteration(self) -> IterationContext | None:
        if not self._iterations:
            return None
        return self._iterations[-1]

    @property
    def stabilized(self) -> bool:
        last = self.last_iteration
        return last is not None and last.phase is Phase.STABILIZED

    @property
    def value(self) -> Any:
        """The latest value: the last result, or the start value."""
        last = self.last_iteration
        if last is None or last.result is ...:
            return self.start
        return last.result

    def get_next_iteration(self) -> IterationContext:
        last = self.last_iteration
        next_iteration = IterationContext(
            iteration=1 if last is None else last.iteration + 1,
            previous=self.value,
            before_iteration=self.before_iteration,
            on_change=self.on_change,
            on_stabilized=self.on_stabilized,
            on_failure=self.on_failure,
        )
        self._iterations.append(next_iteration)
        return next_iteration

    def __iter__(self) -> IterationGenerator:
        return self

    def __next__(self) -> IterationContext:
        last = self.last_iteration
        if self.stop_condition.is_met(last.to_iteration_state() if last else None):
            raise StopIteration
        return self.get_next_iteration()


class IterationContext:
    """
    A context manager that represents one iteration.
    """

    def __init__(
        self,
        iteration: int,
        previous: Any,
        before_iteration: Sequence[IterationHook] = (),
        on_change: Sequence[IterationHook] = (),
        on_stabilized: Sequence[IterationHook] = (),
        on_failure: Sequence[IterationHook] = (),
    ):
        self.iteration = iteration
        self.previous = previous
        self.exception: BaseException | None = None
        self.result: Any = ...
        self.phase: Phase = Phase.PENDING
        self.before_iteration = before_iteration
        self.on_change = on_change
        self.on_stabilized = on_stabilized
        self.on_failure = on_failure

    def _call_hooks(self, hooks_type: HookType) -> None:
        hooks: Sequence[IterationHook] = getattr(self, hooks_type, ())
        for hook in hooks:
            try:
                hook(state=self.to_iteration_state())
            except Exception as e:
                _logger.error(f"Error calling {hooks_type} hook {hook.__name__}", exc_info=e)

    def __enter__(self) -> IterationContext:
        self._call_hooks("before_iteration")
        self.phase = Phase.RUNNING
        return self

    def __exit__(
        self,
        _exc_type: type[BaseException] | None,
        _exc_value: BaseException | None,
        _traceback: TracebackType | None,
    ) -> bool | None:
        if _exc_value:
            self.exception = _exc_value
            self.phase = Phase.FAILED
            self._call_hooks("on_failure")
            return None
        if self.result is ...:
            raise RuntimeError(f"iteration {self.iteration} finished without a result")
        if self.result == self.previous:
            self.phase = Phase.STABILIZED
            self._call_hooks("on_stabilized")
        else:
            self.phase = Phase.CHANGED
            self._call_hooks("on_change")
        return None

    def to_iteration_state(self) -> IterationState:
        return IterationState(
            iteration=self.iteration,
            previous=self.previous,
            result=self.result,
            exception=self.exception,
            phase=self.phase,
        )


iterating = IterationGenerator
