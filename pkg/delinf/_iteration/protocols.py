from __future__ import annotations

from typing import TYPE_CHECKING, Literal

from typing_extensions import Protocol

if TYPE_CHECKING:
    from .dataclasses import IterationState  # pragma: no cover

HookType = Literal["before_iteration", "on_change", "on_stabilized", "on_failure"]


class IterationHook(Protocol):
    """
    Protocol for callables that are called at various points of an iteration.

    Args:
        state: The IterationState.
    """

    def __call__(self, state: IterationState) -> None: ...

    __name__: str
