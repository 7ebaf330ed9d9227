"""
Example documents shipped inside the package.
"""

from __future__ import annotations

from importlib import resources

from delinf.errors import DocumentError

BUNDLED = (
    "abelian_line",
    "acyclic_pair",
    "cech2",
    "cech3",
    "dgla_pair",
    "dgla_pair_contraction",
    "extension_square",
    "heis",
    "pullback_poset",
    "ut4",
)


def bundled_names() -> tuple[str, ...]:
    return BUNDLED


def is_bundled(name: str) -> bool:
    return name in BUNDLED


def read_bundled(name: str) -> bytes:
    """
    The raw bytes of a bundled document.

    Raises:
        DocumentError: If no document of that name is bundled.
    """
    if name not in BUNDLED:
        raise DocumentError(
            f"no bundled document named {name!r}; choose one of {', '.join(BUNDLED)}"
        )
    return (resources.files("delinf") / "data" / f"{name}.json").read_bytes()


def read_schema(name: str) -> bytes:
    """The JSON schema, draft 2020-12, of a document kind such as `algebra`."""
    return (resources.files("delinf") / "data" / "schemas" / f"{name}.schema.json").read_bytes()


__all__ = ["BUNDLED", "bundled_names", "is_bundled", "read_bundled", "read_schema"]
