"""
Command line front end.

Every command prints one report, canonical JSON by default, to stdout. Logs go
to stderr. Exit codes: 0 when the command passes, 1 for usage and document
errors, 2 for mathematical failures.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import random
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NoReturn, Optional, cast

from delinf import conventions
from delinf._graded.spaces import Element
from delinf.catalog import bundled_names
from delinf.cochains import cochain_structure
from delinf.complexes import Simplex, faces_of
from delinf.config import Budget
from delinf.deligne import (
    DeligneSimplex,
    HornData,
    StarData,
    abelian_homotopy_groups,
    bch,
    gauge_witness,
    higher_bch,
    horn_fill,
    simplex_from_star,
)
from delinf.descent import DiagramOverS, SemicosimplicialLInfty, holim_stabilization, tot
from delinf.documents import (
    REPORT_SCHEMA,
    AlgebraDocument,
    ContractionDocument,
    DiagramDocument,
    Document,
    ExtensionDocument,
    MorphismDocument,
    canonical_json,
    loads,
    parse_document,
    read_source,
)
from delinf.errors import DelinfError, DocumentError, StructureError
from delinf.extensions import mc_lift, obstruction_mc
from delinf.forms import dupont_contraction
from delinf.kuranishi import kuranishi_forward, kuranishi_solve
from delinf.linfty import LInftyAlgebra, check_linfty, check_morphism, parse_element
from delinf.reports import CheckReport
from delinf.transfer import Transfer, check_contraction

_logger = logging.getLogger("delinf")

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with the parse error exit code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


@dataclass
class Outcome:
    result: dict[str, Any]
    passed: bool = True


@dataclass
class Session:
    """Inputs read by one command, with the hashes echoed in its report."""

    args: argparse.Namespace
    budget: Budget
    inputs: dict[str, str] = field(default_factory=dict)

    def document(self, option: str, expected: type) -> Any:
        source = getattr(self.args, option)
        raw = read_source(source)
        self.inputs[option] = hashlib.sha256(raw).hexdigest()
        document: Document = parse_document(loads(raw))
        if not isinstance(document, expected):
            flag = "--" + option.replace("_", "-")
            raise DocumentError(f"{flag} {source} is not a {expected.__name__}")
        return document

    def algebra(self, option: str = "algebra") -> LInftyAlgebra:
        return self.document(option, AlgebraDocument).build()

    def element(self, algebra: LInftyAlgebra, text: Optional[str]) -> Element:
        try:
            return parse_element(algebra, text or "")
        except ValueError as exc:
            raise DocumentError(f"cannot parse element {text!r}: {exc}") from None

    def values(self, algebra: LInftyAlgebra, specs: Sequence[str]) -> dict[Simplex, Element]:
        """Parses `--value 0-1:X=1,Y=1/2` entries into values on simplices."""
        values: dict[Simplex, Element] = {}
        for spec in specs:
            simplex_text, separator, element_text = spec.partition(":")
            if not separator:
                raise DocumentError(f"expected SIMPLEX:ELEMENT, got {spec!r}")
            try:
                simplex = tuple(int(v) for v in simplex_text.split("-"))
            except ValueError:
                raise DocumentError(f"{simplex_text!r} is not a vertex list like 0-1") from None
            if simplex in values:
                raise DocumentError(f"simplex {simplex_text} is given twice")
            values[simplex] = self.element(algebra, element_text)
        return values


def _simplex_label(simplex: Simplex) -> str:
    return "-".join(map(str, simplex))


def _simplex_values(
    algebra: LInftyAlgebra, simplex: DeligneSimplex
) -> dict[str, dict[str, str]]:
    faces = faces_of(range(simplex.n + 1))
    return {_simplex_label(s): algebra.format(simplex.value(s)) for s in faces}


def _report_outcome(report: CheckReport) -> Outcome:
    return Outcome({"report": report.to_dict()}, report.passed)


def _check(session: Session) -> Outcome:
    what = session.args.what
    expected = {
        "structure": AlgebraDocument,
        "morphism": MorphismDocument,
        "contraction": ContractionDocument,
        "diagram": DiagramDocument,
    }[what]
    document = session.document("document", expected)
    try:
        if what == "structure":
            report = check_linfty(document.build())
        elif what == "morphism":
            report = check_morphism(document.build())
        elif what == "contraction":
            report = check_contraction(document.build())
        else:
            report = document.build().check_identities()
    except StructureError as exc:
        if exc.report is None:
            raise
        report = exc.report
    return _report_outcome(report)


def _random_element(rng: random.Random, algebra: LInftyAlgebra, degree: int) -> Element:
    return Element(
        (key, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        for key in algebra.space.keys_of_degree(degree)
    )


def _bch(session: Session) -> Outcome:
    args = session.args
    algebra = session.algebra()
    if not args.samples:
        a, b = session.element(algebra, args.a), session.element(algebra, args.b)
        result = bch(algebra, a, b)
        return Outcome(
            {"a": algebra.format(a), "b": algebra.format(b), "bch": algebra.format(result)}
        )
    rng = random.Random(args.seed)
    samples = []
    units = associative = 0
    for _ in range(args.samples):
        a, b, c = (_random_element(rng, algebra, -1) for _ in range(3))
        ab = bch(algebra, a, b)
        unital = bch(algebra, a, Element()) == a and bch(algebra, Element(), b) == b
        assoc = bch(algebra, ab, c) == bch(algebra, a, bch(algebra, b, c))
        units += unital
        associative += assoc
        samples.append(
            {
                "a": algebra.format(a),
                "b": algebra.format(b),
                "c": algebra.format(c),
                "bch": algebra.format(ab),
                "unital": unital,
                "associative": assoc,
            }
        )
    result = {
        "samples": samples,
        "unital": units,
        "associative": associative,
        "count": args.samples,
    }
    return Outcome(result, units == args.samples)


def _gauge(session: Session) -> Outcome:
    args = session.args
    algebra = session.algebra()
    x, a = session.element(algebra, args.x), session.element(algebra, args.a)
    witness = gauge_witness(algebra, x, a)
    return Outcome(
        {
            "x": algebra.format(x),
            "a": algebra.format(a),
            "gauge": algebra.format(witness.vertex(1)),
            "witness": _simplex_values(algebra, witness),
        }
    )


def _fill_horn(session: Session) -> Outcome:
    args = session.args
    algebra = session.algebra()
    values = session.values(algebra, args.value)
    horn = HornData.from_values(algebra, args.n, args.k, values)
    filler = horn_fill(algebra, horn, budget=session.budget)
    return Outcome({"n": args.n, "k": args.k, "filler": _simplex_values(algebra, filler)})


def _simplex_from_star(session: Session) -> Outcome:
    args = session.args
    algebra = session.algebra()
    star = StarData(
        args.n,
        args.vertex,
        session.element(algebra, args.x),
        session.values(algebra, args.value),
    )
    simplex = simplex_from_star(algebra, star, budget=session.budget)
    face = higher_bch(algebra, star, budget=session.budget)
    return Outcome(
        {
            "simplex": _simplex_values(algebra, simplex),
            "opposite_face": _simplex_values(algebra, face),
        }
    )


def _mc_solve(session: Session) -> Outcome:
    args = session.args
    contraction = session.document("contraction", ContractionDocument).build()
    transfer = Transfer(contraction)
    small, big = transfer.structure, cast(LInftyAlgebra, contraction.big)
    y = session.element(small, args.y)
    preimage = session.element(big, args.preimage)
    x = kuranishi_solve(transfer, y, preimage=preimage)
    forward_y, forward_kv = kuranishi_forward(transfer, x)
    round_trip = forward_y == y and forward_kv == contraction.homotopy(preimage)
    return Outcome(
        {
            "y": small.format(y),
            "kv": big.format(contraction.homotopy(preimage)),
            "x": big.format(x),
            "round_trip": round_trip,
        },
        round_trip,
    )


def _transfer(session: Session) -> Outcome:
    args = session.args
    if args.contraction:
        transfer = Transfer(session.document("contraction", ContractionDocument).build())
        structure = transfer.structure
        report = check_linfty(structure)
        report.merge(check_morphism(transfer.inclusion), prefix="F: ")
    else:
        if not args.algebra:
            raise DocumentError("transfer needs --contraction or --algebra with --simplex")
        structure = cochain_structure(args.simplex, session.algebra(), budget=session.budget)
        report = check_linfty(structure)
    return Outcome(
        {
            "structure": AlgebraDocument.from_algebra(structure).to_dict(),
            "report": report.to_dict(),
        },
        report.passed,
    )


def _degrees(text: str) -> list[int]:
    low, separator, high = text.partition(":")
    try:
        if not separator:
            return [int(low)]
        return list(range(int(low), int(high) + 1))
    except ValueError:
        raise DocumentError(f"{text!r} is not a degree range like -2:1") from None


def _diagram(session: Session, expected: type) -> Any:
    diagram = session.document("diagram", DiagramDocument).build()
    if not isinstance(diagram, expected):
        raise DocumentError(f"--diagram must describe a {expected.__name__}")
    return diagram


def _tot(session: Session) -> Outcome:
    args = session.args
    diagram = _diagram(session, SemicosimplicialLInfty)
    totalization = tot(diagram, cutoff=args.cutoff, budget=session.budget)
    dimensions = totalization.cohomology_dimensions(_degrees(args.degrees))
    return Outcome(
        {
            "depth": totalization.depth,
            "dimension": totalization.dimension,
            "cohomology": {str(d): n for d, n in sorted(dimensions.items())},
        }
    )


def _holim_k(session: Session) -> Outcome:
    args = session.args
    diagram = _diagram(session, DiagramOverS)
    report = holim_stabilization(diagram, args.k, _degrees(args.degrees), budget=session.budget)
    return Outcome(report.to_dict())


def _obstruction(session: Session) -> Outcome:
    args = session.args
    extension = session.document("extension", ExtensionDocument).build()
    base, total = extension.base, extension.total
    x = session.element(base, args.x)
    obstruction = obstruction_mc(extension, x)
    lift = mc_lift(extension, x)
    return Outcome(
        {
            "x": base.format(x),
            "representative": total.format(obstruction.representative),
            "normal_form": total.format(obstruction.normal_form),
            "is_zero": obstruction.is_zero,
            "lift": None if lift is None else total.format(lift),
        }
    )


def _abelian_homotopy(session: Session) -> Outcome:
    args = session.args
    report = abelian_homotopy_groups(session.algebra(), args.i, budget=session.budget)
    return Outcome(report.to_dict(), report.agree)


def _dupont_verify(session: Session) -> Outcome:
    args = session.args
    contraction = dupont_contraction(args.n, max_polynomial_degree=args.max_polynomial_degree)
    return _report_outcome(check_contraction(contraction))


Handler = Callable[[Session], Outcome]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("json", "text"), default="json", help="Report format (default: json)"
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="Seed for sampled properties (default: 0)"
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="Log level for stderr (default: WARNING)",
    )
    parser.add_argument("--max-simplex-dimension", type=int, default=Budget.max_simplex_dimension)
    parser.add_argument(
        "--max-coefficient-dimension", type=int, default=Budget.max_coefficient_dimension
    )
    parser.add_argument("--max-cost", type=int, default=Budget.max_cost)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="delinf",
        description="Exact computations with complete L-infinity algebras. "
        f"Bundled documents: {', '.join(bundled_names())}.",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, handler: Handler, summary: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary, description=summary)
        _add_common(sub)
        sub.set_defaults(handler=handler)
        return sub

    check = command("check", _check, "Check the identities of a document.")
    check.add_argument("what", choices=("structure", "morphism", "contraction", "diagram"))
    check.add_argument("document", help="Document file or bundled name")

    sub = command("bch", _bch, "Baker-Campbell-Hausdorff product of two degree -1 elements.")
    sub.add_argument("--algebra", required=True)
    sub.add_argument("--a", default="", help="Element as name=p/q,...")
    sub.add_argument("--b", default="")
    sub.add_argument("--samples", type=int, default=0, help="Check unit and associativity laws")

    sub = command("gauge", _gauge, "Gauge action of a degree -1 element on a Maurer-Cartan one.")
    sub.add_argument("--algebra", required=True)
    sub.add_argument("--x", default="")
    sub.add_argument("--a", default="")

    sub = command("fill-horn", _fill_horn, "Fill a horn of the Deligne groupoid.")
    sub.add_argument("--algebra", required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--value", action="append", default=[], help="SIMPLEX:ELEMENT, e.g. 0-1:X=1")

    sub = command("simplex-from-star", _simplex_from_star, "Build a simplex from star data.")
    sub.add_argument("--algebra", required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--vertex", type=int, default=0)
    sub.add_argument("--x", default="", help="Maurer-Cartan value at the vertex")
    sub.add_argument("--value", action="append", default=[], help="SIMPLEX:ELEMENT")

    sub = command("mc-solve", _mc_solve, "Invert the Kuranishi map of a contraction.")
    sub.add_argument("--contraction", required=True)
    sub.add_argument("--y", default="", help="Maurer-Cartan element of the small side")
    sub.add_argument("--preimage", default="", help="Any v with K(v) the prescribed value")

    sub = command("transfer", _transfer, "Transfer a structure along a contraction.")
    sub.add_argument("--contraction")
    sub.add_argument("--algebra", help="With --simplex, transfer to cochains on a simplex")
    sub.add_argument("--simplex", type=int, default=1)

    sub = command("tot", _tot, "Totalization of a semicosimplicial or cosimplicial diagram.")
    sub.add_argument("--diagram", required=True)
    sub.add_argument("--cutoff", type=int)
    sub.add_argument("--degrees", default="-2:1", help="Degree range LOW:HIGH")

    sub = command("holim-k", _holim_k, "Truncated homotopy limit of a diagram over a poset.")
    sub.add_argument("--diagram", required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--degrees", default="-2:1", help="Degree range LOW:HIGH")

    sub = command("obstruction", _obstruction, "Obstruction to lifting through an extension.")
    sub.add_argument("--extension", required=True)
    sub.add_argument("--x", default="")

    sub = command("abelian-homotopy", _abelian_homotopy, "Homotopy groups of an abelian algebra.")
    sub.add_argument("--algebra", required=True)
    sub.add_argument("--i", type=int, required=True)

    sub = command("dupont-verify", _dupont_verify, "Verify the Dupont contraction identities.")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--max-polynomial-degree", type=int, default=2)
    return parser


def _flatten(value: Any, prefix: str = "") -> list[str]:
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            lines.extend(_flatten(value[key], f"{prefix}.{key}" if prefix else str(key)))
        return lines or [f"{prefix}: {{}}"]
    if isinstance(value, list):
        lines = []
        for position, item in enumerate(value):
            lines.extend(_flatten(item, f"{prefix}[{position}]"))
        return lines or [f"{prefix}: []"]
    return [f"{prefix}: {value}"]


def render(report: dict[str, Any], output_format: str) -> str:
    if output_format == "text":
        return "\n".join(_flatten(report)) + "\n"
    return canonical_json(report)


def run(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    """Runs a parsed command and returns its report and exit code."""
    header: dict[str, Any] = {
        "command": args.command,
        "conventions": conventions.as_dict(),
        "inputs": {},
        "seed": args.seed,
    }
    report: dict[str, Any] = {"schema": REPORT_SCHEMA, "header": header}
    try:
        budget = Budget(args.max_simplex_dimension, args.max_coefficient_dimension, args.max_cost)
    except ValueError as exc:
        report.update(status="error", error=DocumentError(str(exc)).to_dict())
        return report, EXIT_PARSE
    session = Session(args, budget)
    try:
        outcome = args.handler(session)
    except DelinfError as exc:
        _logger.error("%s failed: %s", args.command, exc)
        report.update(status="error", error=exc.to_dict())
        code = EXIT_PARSE if isinstance(exc, DocumentError) else EXIT_FAILURE
    except ValueError as exc:
        # out of range command line arguments
        _logger.error("%s failed: %s", args.command, exc)
        report.update(status="error", error=DocumentError(str(exc)).to_dict())
        code = EXIT_PARSE
    else:
        report.update(status="pass" if outcome.passed else "fail", result=outcome.result)
        code = EXIT_OK if outcome.passed else EXIT_FAILURE
    header["inputs"] = dict(sorted(session.inputs.items()))
    return report, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    report, code = run(args)
    sys.stdout.write(render(report, args.format))
    return code


__all__ = ["EXIT_FAILURE", "EXIT_OK", "EXIT_PARSE", "build_parser", "main", "render", "run"]
