from .dataclasses import IterationState, Phase
from .generator import IterationContext, IterationGenerator, iterating
from .protocols import IterationHook

__all__ = [
    "IterationContext",
    "IterationGenerator",
    "IterationHook",
    "IterationState",
    "Phase",
    "iterating",
]
