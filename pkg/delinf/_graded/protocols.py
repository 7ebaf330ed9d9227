from __future__ import annotations

from collections.abc import Hashable, Sequence
from typing import TYPE_CHECKING

from typing_extensions import Protocol, runtime_checkable

if TYPE_CHECKING:
    from delinf._graded.spaces import Element  # pragma: no cover


@runtime_checkable
class TaylorStructure(Protocol):
    """
    A weight-filtered shifted graded space with a codifferential, presented by
    the action of its Taylor coefficients on basis keys.

    Finite algebras and the infinite dimensional polynomial-form extensions
    both satisfy this protocol, which is all the transfer engine needs.
    """

    @property
    def nilpotency(self) -> int: ...

    @property
    def arity_bound(self) -> int: ...

    def degree(self, key: Hashable) -> int: ...

    def weight(self, key: Hashable) -> int: ...

    def bracket(self, keys: Sequence[Hashable]) -> Element:
        """The Taylor coefficient of arity `len(keys)` evaluated on basis keys."""
        ...


__all__ = ["TaylorStructure"]
