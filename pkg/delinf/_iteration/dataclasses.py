from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class Phase(Enum):
    """Phase of a single iteration."""

    PENDING = "pending"
    RUNNING = "running"
    CHANGED = "changed"
    STABILIZED = "stabilized"
    FAILED = "failed"


@dataclass
class IterationState:
    """
    A snapshot of one iteration.

    Args:
        iteration: The iteration number, starting at 1.
        previous: The value the iteration started from.
        result: The value it produced. Ellipsis is used as a sentinel to
            indicate that a result has not been set yet.
        exception: The exception raised by the iteration, if any.
        phase: The current phase of the iteration.
    """

    iteration: int
    previous: Any = None
    result: Any = ...
    exception: BaseException | None = None
    phase: Phase = Phase.PENDING
