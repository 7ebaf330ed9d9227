from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from delinf.errors import StructureError


@dataclass
class Failure:
    """
    A single failed identity.

    Attributes:
        identity: Which identity failed.
        where: The arity, multi-index, key or level the failure was found at.
        residual: The nonzero defect, with scalars formatted as strings.
    """

    identity: str
    where: Any
    residual: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        where = list(self.where) if isinstance(self.where, tuple) else self.where
        return {"identity": self.identity, "where": where, "residual": self.residual}


@dataclass
class CheckReport:
    """
    Outcome of an exhaustive identity check.

    Attributes:
        kind: What was checked.
        checked: Number of cases checked per identity.
        failures: Every failing case, in the order found.
    """

    kind: str
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> Failure | None:
        return self.failures[0] if self.failures else None

    def count(self, identity: str, n: int = 1) -> None:
        self.checked[identity] = self.checked.get(identity, 0) + n

    def fail(self, identity: str, where: Any, residual: dict[str, str] | None = None) -> None:
        self.failures.append(Failure(identity, where, residual or {}))

    def merge(self, other: CheckReport, prefix: str = "") -> None:
        for identity, n in other.checked.items():
            self.count(prefix + identity, n)
        for failure in other.failures:
            self.failures.append(
                Failure(prefix + failure.identity, failure.where, failure.residual)
            )

    def raise_on_failure(self) -> None:
        if self.failures:
            failure = self.failures[0]
            raise StructureError(
                f"{self.kind}: {failure.identity} fails at {failure.where}", report=self
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "checked": dict(sorted(self.checked.items())),
            "first_failure": self.failures[0].to_dict() if self.failures else None,
            "failures": len(self.failures),
        }


__all__ = ["CheckReport", "Failure"]
