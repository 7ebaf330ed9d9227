from .multilinear import (
    LinearMap,
    MultiIndex,
    MultilinearMap,
    multilinear_expand,
    power_expand,
    symmetric_apply,
    symmetric_basis,
    symmetric_tensor,
)
from .protocols import TaylorStructure
from .scalars import as_scalar, format_scalar, parse_scalar
from .signs import canonical_order, koszul_sign, partition_sign, set_partitions, unshuffles
from .spaces import BasisElement, Element, GradedSpace

__all__ = [
    "BasisElement",
    "Element",
    "GradedSpace",
    "LinearMap",
    "MultiIndex",
    "MultilinearMap",
    "TaylorStructure",
    "as_scalar",
    "canonical_order",
    "format_scalar",
    "koszul_sign",
    "multilinear_expand",
    "parse_scalar",
    "partition_sign",
    "power_expand",
    "set_partitions",
    "symmetric_apply",
    "symmetric_basis",
    "symmetric_tensor",
    "unshuffles",
]
