"""
JSON documents describing algebras, morphisms, contractions, central extensions
and diagrams.

Every document is an object with a `schema` field naming its versioned schema.
The shape of a document is checked against the matching JSON schema under
`data/schemas`; the checks made here are the semantic ones.
Scalars are exact rationals written as strings `"p/q"` (integers are also
accepted on input); floats are rejected. Parsing normalizes a document, so
`parse_document(data).to_dict()` is its canonical form, and canonical forms are
fixed points of a parse.

Algebras inside other documents are given inline or by the name of a bundled
document.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Union

from jsonschema import Draft202012Validator, validators
from jsonschema.exceptions import ValidationError
from jsonschema.protocols import Validator

from delinf._graded.multilinear import LinearMap, MultilinearMap
from delinf._graded.scalars import as_scalar, format_scalar
from delinf._graded.signs import canonical_order
from delinf._graded.spaces import BasisElement, Element, GradedSpace
from delinf.catalog import is_bundled, read_bundled, read_schema
from delinf.complexes import FinComplex, Simplex
from delinf.descent import (
    Cover,
    CosimplicialLInfty,
    DiagramOverS,
    SemicosimplicialLInfty,
    cech_builder,
)
from delinf.errors import DegreeError, DocumentError, SpaceMismatchError
from delinf.extensions import CentralExtension
from delinf.linfty import LInftyAlgebra, LInftyMorphism, dgla_import, strict_morphism
from delinf.transfer import Contraction

_logger = logging.getLogger("delinf")

ALGEBRA_SCHEMA = "delinf.algebra@1"
MORPHISM_SCHEMA = "delinf.morphism@1"
CONTRACTION_SCHEMA = "delinf.contraction@1"
EXTENSION_SCHEMA = "delinf.extension@1"
DIAGRAM_SCHEMA = "delinf.diagram@1"
REPORT_SCHEMA = "delinf.report@1"

_SCHEMA_FILES = {
    ALGEBRA_SCHEMA: "algebra",
    MORPHISM_SCHEMA: "morphism",
    CONTRACTION_SCHEMA: "contraction",
    EXTENSION_SCHEMA: "extension",
    DIAGRAM_SCHEMA: "diagram",
}

DIAGRAM_KINDS = ("cosimplicial", "cover", "over_category", "semicosimplicial")

Vector = dict[str, Fraction]
Matrix = dict[str, Vector]


def canonical_json(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fail(where: str, message: str) -> DocumentError:
    return DocumentError(f"{where}: {message}")


# integral floats such as 2.0 are not integers in a document
_DocumentValidator = validators.extend(
    Draft202012Validator,
    type_checker=Draft202012Validator.TYPE_CHECKER.redefine(
        "integer", lambda _, instance: isinstance(instance, int) and not isinstance(instance, bool)
    ),
)


@lru_cache(maxsize=None)
def _validator(schema: str) -> Validator:
    return _DocumentValidator(json.loads(read_schema(_SCHEMA_FILES[schema])))


def _shape_error(error: ValidationError, where: str) -> DocumentError:
    for part in error.absolute_path:
        where += f"[{part}]" if isinstance(part, int) else f".{part}"
    if isinstance(error.instance, float):
        return _fail(where, f"{error.instance!r} is a float; write rationals as \"p/q\" strings")
    return _fail(where, error.message)


def _require_schema(data: Any, schema: str, kind: str) -> None:
    """
    Checks the schema field and the shape of a document against its bundled
    JSON schema.
    """
    if not isinstance(data, dict):
        raise DocumentError("a document must be a JSON object")
    found = data.get("schema")
    if found != schema:
        raise DocumentError(f"expected schema {schema!r}, found {found!r}")
    error = next(_validator(schema).iter_errors(data), None)
    if error is not None:
        name = data.get("name")
        raise _shape_error(error, f"{kind} {name!r}" if isinstance(name, str) else kind)


def _scalar(value: Any, where: str) -> Fraction:
    try:
        return as_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise _fail(where, str(exc)) from None


def _vector(data: Mapping[str, Any], names: Sequence[str], where: str) -> Vector:
    known = set(names)
    result: Vector = {}
    for name, value in data.items():
        if name not in known:
            raise _fail(where, f"{name!r} is not a basis element")
        coef = _scalar(value, f"{where}.{name}")
        if coef:
            result[name] = coef
    return result


def _matrix(data: Any, sources: Sequence[str], targets: Sequence[str], where: str) -> Matrix:
    """A linear map as rows `source name -> vector over the targets`; zero rows dropped."""
    if data == "identity":
        if list(sources) != list(targets):
            raise _fail(where, "an identity matrix needs the same basis on both sides")
        return {name: {name: Fraction(1)} for name in sources}
    known = set(sources)
    result: Matrix = {}
    for name, row in data.items():
        if name not in known:
            raise _fail(where, f"{name!r} is not a source basis element")
        vector = _vector(row, targets, f"{where}.{name}")
        if vector:
            result[name] = vector
    return result


def _format_vector(vector: Mapping[str, Fraction], order: Sequence[str]) -> dict[str, str]:
    return {name: format_scalar(vector[name]) for name in order if name in vector}


def _format_matrix(
    matrix: Mapping[str, Mapping[str, Fraction]], sources: Sequence[str], targets: Sequence[str]
) -> dict[str, dict[str, str]]:
    return {name: _format_vector(matrix[name], targets) for name in sources if name in matrix}


def _basis(data: Sequence[Mapping[str, Any]], where: str) -> tuple[BasisElement, ...]:
    basis = []
    for position, entry in enumerate(data):
        try:
            basis.append(BasisElement(entry["name"], entry["degree"], entry.get("weight", 1)))
        except ValueError as exc:
            raise _fail(f"{where}[{position}]", str(exc)) from None
    return tuple(basis)


def _format_basis(basis: Sequence[BasisElement]) -> list[dict[str, Any]]:
    return [{"name": b.name, "degree": b.degree, "weight": b.weight} for b in basis]


def _table(
    space: GradedSpace, matrix: Mapping[str, Mapping[str, Fraction]], target: GradedSpace
) -> dict[int, Element]:
    return {space.index(name): target.element(row) for name, row in matrix.items()}


@dataclass(frozen=True)
class Operation:
    """The value of a Taylor coefficient, or of a dgla operation, on named arguments."""

    args: tuple[str, ...]
    value: Mapping[str, Fraction]


@dataclass(frozen=True)
class AlgebraDocument:
    """
    A finite dimensional complete algebra.

    With `dgla` set, basis degrees are the unshifted degrees of a differential
    graded Lie algebra, unary operations give the differential and binary ones
    the bracket. Otherwise degrees are shifted and an operation of arity `k`
    gives `q_k` on the named basis elements.
    """

    name: str
    nilpotency: int
    basis: tuple[BasisElement, ...]
    operations: tuple[Operation, ...] = ()
    dgla: bool = False

    @property
    def names(self) -> list[str]:
        return [b.name for b in self.basis]

    @classmethod
    def from_dict(cls, data: Any) -> AlgebraDocument:
        _require_schema(data, ALGEBRA_SCHEMA, "algebra")
        name = data.get("name", "L")
        where = f"algebra {name!r}"
        nilpotency = data["nilpotency"]
        basis = _basis(data["basis"], f"{where}.basis")
        dgla = data.get("dgla", False)
        shift = 1 if dgla else 0
        try:
            shifted = GradedSpace(
                tuple(BasisElement(b.name, b.degree - shift, b.weight) for b in basis), nilpotency
            )
        except ValueError as exc:
            raise _fail(where, str(exc)) from None
        names = [b.name for b in basis]
        operations: dict[tuple[int, ...], Vector] = {}
        for position, entry in enumerate(data.get("operations", [])):
            here = f"{where}.operations[{position}]"
            args = entry["args"]
            if dgla and len(args) > 2:
                raise _fail(here, "a dgla has only unary and binary operations")
            try:
                keys = tuple(shifted.index(a) for a in args)
            except SpaceMismatchError as exc:
                raise _fail(here, str(exc)) from None
            value = _vector(entry["value"], names, f"{here}.value")
            if dgla and len(keys) == 2:
                a, b = keys
                # [b, a] = -(-1)^(|a||b|) [a, b] in unshifted degrees
                sign = -1 if basis[a].degree * basis[b].degree % 2 == 0 else 1
                if a == b and sign == -1:
                    if value:
                        raise _fail(here, "the bracket of an even element with itself is zero")
                    continue
                if a > b:
                    keys = (b, a)
                    value = {n: sign * c for n, c in value.items()}
            elif not dgla:
                sign, canonical = canonical_order(keys, shifted.degree)
                if not sign:
                    if value:
                        raise _fail(here, "an odd argument repeats but the value is nonzero")
                    continue
                keys = canonical  # type: ignore[assignment]
                value = {n: sign * c for n, c in value.items()}
            if keys in operations and operations[keys] != value:
                raise _fail(here, f"conflicting values for {list(args)}")
            operations[keys] = value
        ordered = tuple(
            Operation(tuple(names[k] for k in keys), value)
            for keys, value in sorted(operations.items(), key=lambda kv: (len(kv[0]), kv[0]))
            if value
        )
        return cls(name, nilpotency, basis, ordered, dgla)

    @classmethod
    def from_algebra(cls, algebra: LInftyAlgebra) -> AlgebraDocument:
        """Serializes any finite algebra by its Taylor coefficients."""
        space = algebra.space
        operations = [
            Operation(
                tuple(space.name(k) for k in index),
                {space.name(k): c for k, c in sorted(value.items())},
            )
            for arity in range(1, algebra.arity_bound + 1)
            for index, value in algebra.q(arity).items()
        ]
        return cls(algebra.name, algebra.nilpotency, space.basis, tuple(operations))

    def to_dict(self) -> dict[str, Any]:
        names = self.names
        return {
            "schema": ALGEBRA_SCHEMA,
            "name": self.name,
            "nilpotency": self.nilpotency,
            "dgla": self.dgla,
            "basis": _format_basis(self.basis),
            "operations": [
                {"args": list(op.args), "value": _format_vector(op.value, names)}
                for op in self.operations
            ],
        }

    def build(self) -> LInftyAlgebra:
        """
        Raises:
            StructureError: If a dgla fails its identities, or a Taylor
                coefficient is nonzero above the arity bound.
            DocumentError: If an operation has the wrong degree.
        """
        if self.dgla:
            differential = {op.args[0]: op.value for op in self.operations if len(op.args) == 1}
            bracket = {
                (op.args[0], op.args[1]): op.value for op in self.operations if len(op.args) == 2
            }
            return dgla_import(
                self.basis, self.nilpotency, differential, bracket, name=self.name
            )
        space = GradedSpace(self.basis, self.nilpotency)
        tables: dict[int, dict[tuple[int, ...], Element]] = {}
        for op in self.operations:
            keys = tuple(space.index(a) for a in op.args)
            value = space.element(op.value)
            expected = sum(space.degree(k) for k in keys) + 1
            try:
                space.require_degree(value, expected)
            except DegreeError as exc:
                raise _fail(f"algebra {self.name!r}", f"q{list(op.args)}: {exc}") from None
            tables.setdefault(len(keys), {})[keys] = value
        return LInftyAlgebra.from_tables(space, tables, name=self.name)


AlgebraRef = Union[str, AlgebraDocument]
"""A bundled document name or an inline algebra."""


@lru_cache(maxsize=None)
def bundled_algebra_document(name: str) -> AlgebraDocument:
    return AlgebraDocument.from_dict(loads(read_bundled(name)))


def _algebra_ref(data: Any, where: str) -> AlgebraRef:
    if isinstance(data, str):
        if not is_bundled(data):
            raise _fail(where, f"{data!r} is not a bundled algebra")
        return data
    if isinstance(data, dict):
        return AlgebraDocument.from_dict(data)
    raise _fail(where, "an algebra is a bundled name or an inline algebra document")


def _format_ref(ref: AlgebraRef) -> Any:
    return ref if isinstance(ref, str) else ref.to_dict()


def _ref_document(ref: AlgebraRef) -> AlgebraDocument:
    return bundled_algebra_document(ref) if isinstance(ref, str) else ref


def _ref_names(ref: AlgebraRef) -> list[str]:
    return _ref_document(ref).names


@dataclass(frozen=True)
class MorphismDocument:
    """
    An L-infinity morphism given by its Taylor coefficients `f_k` on named
    source arguments.
    """

    name: str
    source: AlgebraRef
    target: AlgebraRef
    components: tuple[Operation, ...]

    @classmethod
    def from_dict(cls, data: Any) -> MorphismDocument:
        _require_schema(data, MORPHISM_SCHEMA, "morphism")
        name = data.get("name", "F")
        where = f"morphism {name!r}"
        source = _algebra_ref(data["source"], f"{where}.source")
        target = _algebra_ref(data["target"], f"{where}.target")
        sources, targets = _ref_names(source), _ref_names(target)
        components = []
        for position, entry in enumerate(data["components"]):
            here = f"{where}.components[{position}]"
            args = entry["args"]
            if any(a not in sources for a in args):
                raise _fail(here, "args must be source basis names")
            value = _vector(entry["value"], targets, f"{here}.value")
            if value:
                components.append(Operation(tuple(args), value))
        components.sort(key=lambda op: (len(op.args), [sources.index(a) for a in op.args]))
        return cls(name, source, target, tuple(components))

    def to_dict(self) -> dict[str, Any]:
        targets = _ref_names(self.target)
        return {
            "schema": MORPHISM_SCHEMA,
            "name": self.name,
            "source": _format_ref(self.source),
            "target": _format_ref(self.target),
            "components": [
                {"args": list(op.args), "value": _format_vector(op.value, targets)}
                for op in self.components
            ],
        }

    def build(self) -> LInftyMorphism:
        source = _ref_document(self.source).build()
        target = _ref_document(self.target).build()
        taylor: dict[int, MultilinearMap] = {}
        try:
            for op in self.components:
                arity = len(op.args)
                f = taylor.setdefault(arity, MultilinearMap(source.space, arity, 0))
                f.store(
                    tuple(source.space.index(a) for a in op.args),
                    target.space.element(op.value),
                )
        except DegreeError as exc:
            raise _fail(f"morphism {self.name!r}", str(exc)) from None
        return LInftyMorphism(source, target, taylor, name=self.name)


@dataclass(frozen=True)
class ContractionDocument:
    """
    Contraction data from a finite algebra onto a smaller graded space, which
    inherits the nilpotency of the large side.
    """

    big: AlgebraRef
    small: tuple[BasisElement, ...]
    inclusion: Matrix
    projection: Matrix
    homotopy: Matrix

    @classmethod
    def from_dict(cls, data: Any) -> ContractionDocument:
        _require_schema(data, CONTRACTION_SCHEMA, "contraction")
        where = "contraction"
        big = _algebra_ref(data["big"], f"{where}.big")
        small = _basis(data["small"], f"{where}.small")
        big_names, small_names = _ref_names(big), [b.name for b in small]
        return cls(
            big,
            small,
            _matrix(data["inclusion"], small_names, big_names, "inclusion"),
            _matrix(data["projection"], big_names, small_names, "projection"),
            _matrix(data["homotopy"], big_names, big_names, "homotopy"),
        )

    def to_dict(self) -> dict[str, Any]:
        big_names, small_names = _ref_names(self.big), [b.name for b in self.small]
        return {
            "schema": CONTRACTION_SCHEMA,
            "big": _format_ref(self.big),
            "small": _format_basis(self.small),
            "inclusion": _format_matrix(self.inclusion, small_names, big_names),
            "projection": _format_matrix(self.projection, big_names, small_names),
            "homotopy": _format_matrix(self.homotopy, big_names, big_names),
        }

    def build(self) -> Contraction:
        big = _ref_document(self.big).build()
        try:
            small = GradedSpace(self.small, big.nilpotency)
        except ValueError as exc:
            raise _fail("contraction.small", str(exc)) from None
        return Contraction(
            big=big,
            small=small,
            inclusion=LinearMap(_table(small, self.inclusion, big.space)),
            projection=LinearMap(_table(big.space, self.projection, small)),
            homotopy=LinearMap(_table(big.space, self.homotopy, big.space), degree=-1),
            big_keys=list(big.space),
        )


@dataclass(frozen=True)
class ExtensionDocument:
    """A central extension given by a strict projection from `total` onto `base`."""

    total: AlgebraRef
    base: AlgebraRef
    projection: Matrix

    @classmethod
    def from_dict(cls, data: Any) -> ExtensionDocument:
        _require_schema(data, EXTENSION_SCHEMA, "extension")
        where = "extension"
        total = _algebra_ref(data["total"], f"{where}.total")
        base = _algebra_ref(data["base"], f"{where}.base")
        projection = _matrix(
            data["projection"],
            _ref_names(total),
            _ref_names(base),
            f"{where}.projection",
        )
        return cls(total, base, projection)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": EXTENSION_SCHEMA,
            "total": _format_ref(self.total),
            "base": _format_ref(self.base),
            "projection": _format_matrix(
                self.projection, _ref_names(self.total), _ref_names(self.base)
            ),
        }

    def build(self) -> CentralExtension:
        """
        Raises:
            StructureError: If the projection is not surjective or the kernel
                is not central.
        """
        total = _ref_document(self.total).build()
        base = _ref_document(self.base).build()
        table = {
            total.space.index(name): {base.space.index(n): c for n, c in row.items()}
            for name, row in self.projection.items()
        }
        return CentralExtension(strict_morphism(total, base, table, name="p"))


@dataclass(frozen=True)
class MapEntry:
    """A strict structure map between two labelled algebras of a diagram."""

    source: str
    target: str
    matrix: Matrix
    index: tuple[Any, ...] = ()


@dataclass(frozen=True)
class DiagramDocument:
    """
    A diagram of algebras.

    `kind` is one of `cover` (a finite cover with its nerve), `semicosimplicial`,
    `cosimplicial` (truncated) or `over_category` (a finite poset).
    """

    name: str
    kind: str
    algebras: Mapping[str, AlgebraRef]
    vertices: int = 0
    maximal: tuple[Simplex, ...] = ()
    local: Mapping[Simplex, str] = field(default_factory=dict)
    levels: tuple[str, ...] = ()
    objects: tuple[str, ...] = ()
    maps: tuple[MapEntry, ...] = ()
    default: str = ""

    @classmethod
    def from_dict(cls, data: Any) -> DiagramDocument:
        _require_schema(data, DIAGRAM_SCHEMA, "diagram")
        name = data.get("name", "F")
        where = f"diagram {name!r}"
        kind = data["kind"]
        algebras = {
            label: _algebra_ref(ref, f"{where}.algebras.{label}")
            for label, ref in sorted(data["algebras"].items())
        }
        parser = _DiagramParser(where, algebras)
        if kind == "cover":
            return parser.cover(data, name)
        if kind == "over_category":
            return parser.over_category(data, name)
        return parser.levelled(data, name, kind)

    def to_dict(self) -> dict[str, Any]:
        names = {label: _ref_names(ref) for label, ref in self.algebras.items()}

        def matrix(m: MapEntry) -> Any:
            return _format_matrix(m.matrix, names[m.source], names[m.target])

        data: dict[str, Any] = {
            "schema": DIAGRAM_SCHEMA,
            "name": self.name,
            "kind": self.kind,
            "algebras": {label: _format_ref(ref) for label, ref in self.algebras.items()},
        }
        if self.kind == "cover":
            data.update(
                vertices=self.vertices,
                maximal=[list(s) for s in self.maximal],
                algebra=self.default,
                local=[{"simplex": list(s), "algebra": a} for s, a in self.local.items()],
                restrictions=[
                    {"from": list(m.index[0]), "to": list(m.index[1]), "matrix": matrix(m)}
                    for m in self.maps
                ],
            )
        elif self.kind == "over_category":
            data.update(
                objects=list(self.objects),
                assign={o: self.local[(p,)] for p, o in enumerate(self.objects)},
                relations=[
                    {"source": m.index[0], "target": m.index[1], "matrix": matrix(m)}
                    for m in self.maps
                ],
            )
        else:
            data["levels"] = list(self.levels)
            for group in _GROUPS[self.kind]:
                data[group] = [
                    {"level": m.index[1], "index": m.index[2], "matrix": matrix(m)}
                    for m in self.maps
                    if m.index[0] == group
                ]
        return data

    def build(self) -> Union[SemicosimplicialLInfty, DiagramOverS]:
        """
        Builds the diagram; labels that occur several times share one algebra.

        Raises:
            StructureError: If the simplicial or functoriality identities fail.
            SpaceMismatchError: If a structure map is missing.
        """
        built = {label: _ref_document(ref).build() for label, ref in self.algebras.items()}

        def morphism(m: MapEntry, name: str) -> LInftyMorphism:
            source, target = built[m.source], built[m.target]
            table = {
                source.space.index(a): {target.space.index(b): c for b, c in row.items()}
                for a, row in m.matrix.items()
            }
            return strict_morphism(source, target, table, name=name)

        _logger.debug("building %s diagram %s", self.kind, self.name)
        if self.kind == "cover":
            nerve = FinComplex.from_maximal(self.vertices, self.maximal)
            local = {s: built[self.local.get(s, self.default)] for s in nerve.simplices}
            restrictions = {
                (m.index[0], m.index[1]): morphism(m, f"{m.index[0]}->{m.index[1]}")
                for m in self.maps
            }
            return cech_builder(Cover(nerve, local, restrictions), name=self.name)
        if self.kind == "over_category":
            algebras = {o: built[self.local[(p,)]] for p, o in enumerate(self.objects)}
            relations = {
                (m.index[0], m.index[1]): morphism(m, f"{m.index[0]}->{m.index[1]}")
                for m in self.maps
            }
            diagram = DiagramOverS.poset(self.objects, relations, algebras, name=self.name)
            diagram.check_identities().raise_on_failure()
            return diagram
        levels = tuple(built[label] for label in self.levels)
        maps: dict[str, dict[tuple[int, int], LInftyMorphism]] = {
            "cofaces": {},
            "codegeneracies": {},
        }
        for m in self.maps:
            group, n, j = m.index
            letter = "d" if group == "cofaces" else "s"
            maps[group][(n, j)] = morphism(m, f"{letter}{n},{j}")
        if self.kind == "cosimplicial":
            diagram: SemicosimplicialLInfty = CosimplicialLInfty(
                levels, maps["cofaces"], self.name, codegeneracies=maps["codegeneracies"]
            )
        else:
            diagram = SemicosimplicialLInfty(levels, maps["cofaces"], self.name)
        diagram.check_identities().raise_on_failure()
        return diagram


class _DiagramParser:
    def __init__(self, where: str, algebras: Mapping[str, AlgebraRef]):
        self.where = where
        self.algebras = algebras
        self.names = {label: _ref_names(ref) for label, ref in algebras.items()}

    def label(self, value: Any, here: str) -> str:
        if not isinstance(value, str) or value not in self.algebras:
            raise _fail(here, f"{value!r} is not one of the diagram's algebras")
        return value

    def entry(
        self, raw: dict[str, Any], source: str, target: str, here: str, index: tuple[Any, ...]
    ) -> MapEntry:
        matrix = _matrix(raw["matrix"], self.names[source], self.names[target], here)
        return MapEntry(source, target, matrix, index)

    def entries(self, data: dict[str, Any], group: str) -> list[tuple[str, dict[str, Any]]]:
        return [(f"{self.where}.{group}[{p}]", raw) for p, raw in enumerate(data.get(group, []))]

    def cover(self, data: dict[str, Any], name: str) -> DiagramDocument:
        where = self.where
        vertices = data["vertices"]
        try:
            nerve = FinComplex.from_maximal(vertices, data["maximal"])
        except (TypeError, ValueError) as exc:
            raise _fail(where, f"invalid nerve: {exc}") from None
        default = self.label(data["algebra"], f"{where}.algebra")
        local: dict[Simplex, str] = {}
        for here, raw in self.entries(data, "local"):
            simplex = tuple(raw["simplex"])
            if not nerve.contains(simplex):
                raise _fail(here, f"{list(simplex)} is not a simplex of the nerve")
            local[simplex] = self.label(raw.get("algebra"), here)
        maps = []
        for here, raw in self.entries(data, "restrictions"):
            smaller = tuple(raw["from"])
            larger = tuple(raw["to"])
            if not (nerve.contains(smaller) and nerve.contains(larger)) or not (
                len(larger) == len(smaller) + 1 and set(smaller) < set(larger)
            ):
                raise _fail(here, "restrictions go from a simplex to a coface of it")
            source, target = local.get(smaller, default), local.get(larger, default)
            maps.append(self.entry(raw, source, target, here, (smaller, larger)))
        maps.sort(key=lambda m: (len(m.index[0]), m.index))
        return DiagramDocument(
            name,
            "cover",
            self.algebras,
            vertices=vertices,
            maximal=nerve.maximal,
            local=dict(sorted(local.items(), key=lambda kv: (len(kv[0]), kv[0]))),
            maps=tuple(maps),
            default=default,
        )

    def over_category(self, data: dict[str, Any], name: str) -> DiagramDocument:
        where = self.where
        objects = tuple(data["objects"])
        assign = data["assign"]
        if set(assign) != set(objects):
            raise _fail(where, "assign must give an algebra for every object")
        labels = {o: self.label(assign[o], f"{where}.assign.{o}") for o in objects}
        maps = []
        for here, raw in self.entries(data, "relations"):
            a, b = raw["source"], raw["target"]
            if a not in labels or b not in labels or a == b:
                raise _fail(here, "relations connect two distinct objects")
            maps.append(self.entry(raw, labels[a], labels[b], here, (a, b)))
        maps.sort(key=lambda m: (objects.index(m.index[0]), objects.index(m.index[1])))
        local = {(p,): labels[o] for p, o in enumerate(objects)}
        return DiagramDocument(
            name, "over_category", self.algebras, objects=objects, local=local, maps=tuple(maps)
        )

    def levelled(self, data: dict[str, Any], name: str, kind: str) -> DiagramDocument:
        where = self.where
        levels = tuple(self.label(v, f"{where}.levels") for v in data["levels"])
        top = len(levels) - 1
        maps = []
        for group in _GROUPS[kind]:
            for here, raw in self.entries(data, group):
                n, j = raw["level"], raw["index"]
                if not 0 <= j <= n:
                    raise _fail(here, "index must lie between 0 and the level")
                if group == "cofaces":
                    if not 1 <= n <= top:
                        raise _fail(here, f"cofaces land in levels 1 .. {top}")
                    source, target = levels[n - 1], levels[n]
                else:
                    if not 0 <= n < top:
                        raise _fail(here, f"codegeneracies land in levels 0 .. {top - 1}")
                    source, target = levels[n + 1], levels[n]
                maps.append(self.entry(raw, source, target, here, (group, n, j)))
        maps.sort(key=lambda m: m.index)
        return DiagramDocument(name, kind, self.algebras, levels=levels, maps=tuple(maps))


_GROUPS = {
    "semicosimplicial": ("cofaces",),
    "cosimplicial": ("cofaces", "codegeneracies"),
}


Document = Union[
    AlgebraDocument, MorphismDocument, ContractionDocument, ExtensionDocument, DiagramDocument
]

_PARSERS: dict[str, Callable[[Any], Document]] = {
    ALGEBRA_SCHEMA: AlgebraDocument.from_dict,
    MORPHISM_SCHEMA: MorphismDocument.from_dict,
    CONTRACTION_SCHEMA: ContractionDocument.from_dict,
    EXTENSION_SCHEMA: ExtensionDocument.from_dict,
    DIAGRAM_SCHEMA: DiagramDocument.from_dict,
}


def loads(raw: Union[bytes, str]) -> Any:
    """
    Raises:
        DocumentError: If `raw` is not valid JSON.
    """
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None


def parse_document(data: Any) -> Document:
    """
    Parses a decoded document according to its `schema` field.

    Raises:
        DocumentError: If the schema is unknown or the document is invalid.
    """
    if not isinstance(data, dict):
        raise DocumentError("a document must be a JSON object")
    parser = _PARSERS.get(data.get("schema"))  # type: ignore[arg-type]
    if parser is None:
        raise DocumentError(
            f"unknown schema {data.get('schema')!r}; expected one of {', '.join(sorted(_PARSERS))}"
        )
    return parser(data)


def canonicalize(raw: Union[bytes, str]) -> str:
    """The canonical JSON text of a document."""
    return canonical_json(parse_document(loads(raw)).to_dict())


def read_source(source: Union[str, Path]) -> bytes:
    """
    The bytes of a document given as a file path or a bundled name.

    Raises:
        DocumentError: If neither exists.
    """
    path = Path(source)
    if path.is_file():
        return path.read_bytes()
    if isinstance(source, str) and is_bundled(source):
        return read_bundled(source)
    raise DocumentError(f"{source} is neither a file nor a bundled document")


def load(source: Union[str, Path]) -> Document:
    return parse_document(loads(read_source(source)))


def load_algebra(source: Union[str, Path]) -> LInftyAlgebra:
    """An algebra from a file or a bundled name."""
    document = load(source)
    if not isinstance(document, AlgebraDocument):
        raise DocumentError(f"{source} is not an algebra document")
    return document.build()


def bundled_algebra(name: str) -> LInftyAlgebra:
    return bundled_algebra_document(name).build()


__all__ = [
    "ALGEBRA_SCHEMA",
    "CONTRACTION_SCHEMA",
    "DIAGRAM_KINDS",
    "DIAGRAM_SCHEMA",
    "EXTENSION_SCHEMA",
    "MORPHISM_SCHEMA",
    "REPORT_SCHEMA",
    "AlgebraDocument",
    "AlgebraRef",
    "ContractionDocument",
    "DiagramDocument",
    "Document",
    "ExtensionDocument",
    "MapEntry",
    "MorphismDocument",
    "Operation",
    "bundled_algebra",
    "bundled_algebra_document",
    "canonical_json",
    "canonicalize",
    "load",
    "load_algebra",
    "loads",
    "parse_document",
    "read_source",
]
