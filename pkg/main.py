#!/usr/bin/env python3

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import jsonschema
from dotenv import load_dotenv

from algebra import AlgebraPresentation, Polynomial, format_polynomial
from errors import (
    AlgebraMismatchError,
    ConfigurationError,
    ExpressionError,
    InconsistentPresentationError,
    InternalAssertionError,
    OrderError,
    PresentationError,
    TransferError,
    UnverifiedBasisError,
)
from exprparse import parse_expression, read_presentation
from freemod import VectorPoly, format_vector, module_buchberger
from graded import (
    associated_graded,
    graded_presentation,
    gr_ideal_generators,
    naive_transfer_gap_demo,
    principal_symbol,
    transfer_from_graded,
    transfer_to_graded,
)
from groebner import (
    GroebnerBasis,
    PolynomialView,
    buchberger,
    format_trace,
    ideal_membership,
    reduce,
)
from orders import ModuleOrder, MonomialOrder, induce_graded_order

load_dotenv()

# Configure logging
log_level = os.getenv("LOG_LEVEL", "INFO").upper()
logging.basicConfig(
    level=getattr(logging, log_level, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger("pbw-groebner")

ROOT = Path(__file__).resolve().parent
CORPUS_DIR = ROOT / "corpus"
SCHEMA_PATH = ROOT / "schemas" / "command_result.schema.json"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_INTERNAL = 4

USAGE_ERRORS = (
    ConfigurationError,
    PresentationError,
    AlgebraMismatchError,
    OrderError,
    TransferError,
    UnverifiedBasisError,
)


def resolve_algebra_path(name: str) -> Path:
    """A path, or the name of a bundled corpus presentation with or without .alg."""
    for candidate in (Path(name), CORPUS_DIR / name, CORPUS_DIR / f"{name}.alg"):
        if candidate.is_file():
            return candidate
    raise ConfigurationError(f"Presentation file not found: {name}")


class Session:
    def __init__(self, args: argparse.Namespace):
        # Flags first, then the environment
        self.algebra_name = args.algebra or os.getenv("PBW_ALGEBRA", "")
        self.order_text = args.order or os.getenv("PBW_ORDER", "deglex")
        self.module_order_text = args.module_order or os.getenv("PBW_MODULE_ORDER", "")
        workers = args.workers if args.workers is not None else os.getenv("PBW_WORKERS", "1")

        self._validate_inputs()

        try:
            self.workers = int(workers)
        except ValueError:
            raise ConfigurationError(f"Worker count must be an integer, got {workers!r}") from None
        if self.workers < 1:
            raise ConfigurationError(f"Worker count must be at least 1, got {self.workers}")

        self.algebra_path = resolve_algebra_path(self.algebra_name)
        self.algebra: AlgebraPresentation = read_presentation(self.algebra_path)
        self.order = MonomialOrder.parse(self.order_text, self.algebra.var_names)
        logger.debug(
            f"Session on {self.algebra_path.name} over {self.algebra.field} "
            f"with order {self.order.name(self.algebra.var_names)}"
        )

    def _validate_inputs(self):
        """Validate that all required inputs are provided."""
        if not self.algebra_name:
            raise ConfigurationError(
                "No presentation given; pass --algebra or set PBW_ALGEBRA"
            )

    def module_order(self, rank: int) -> ModuleOrder:
        text = self.module_order_text or f"top:{self.order_text}"
        return ModuleOrder.parse(text, self.algebra.var_names, rank)

    def parse(self, text: str, algebra: Optional[AlgebraPresentation] = None):
        return parse_expression(text, algebra or self.algebra)

    def polynomial(self, text: str, algebra: Optional[AlgebraPresentation] = None) -> Polynomial:
        value = self.parse(text, algebra)
        if isinstance(value, VectorPoly):
            raise ExpressionError(f"Expected a polynomial, got the vector {text!r}")
        return value

    def polynomials(self, texts: Sequence[str], algebra=None) -> List[Polynomial]:
        return [self.polynomial(text, algebra) for text in texts]

    def vectors(self, texts: Sequence[str]) -> List[VectorPoly]:
        vectors = []
        for text in texts:
            value = self.parse(text)
            if not isinstance(value, VectorPoly):
                raise ExpressionError(f"Expected a vector literal [f1, ..., fm], got {text!r}")
            vectors.append(value)
        return vectors

    def format(self, value) -> str:
        if isinstance(value, VectorPoly):
            return format_vector(value, self.module_order(value.rank))
        return format_polynomial(value, self.order)

    def describe(self) -> Dict[str, str]:
        return {
            "algebra": self.algebra_path.name,
            "field": str(self.algebra.field),
            "order": self.order.name(self.algebra.var_names),
        }


@dataclass
class CommandResult:
    text: str
    payload: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    error: Optional[str] = None

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.payload, indent=2)
        return self.text


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="presentation file or corpus name (env PBW_ALGEBRA)")
    common.add_argument("--order", help="deglex or degrevlex, optionally :x>y>... (env PBW_ORDER)")
    common.add_argument("--module-order", help="top:<order> or pot:<order> (env PBW_MODULE_ORDER)")
    common.add_argument("--workers", help="threads for S-polynomial reduction (env PBW_WORKERS)")
    common.add_argument("--json", action="store_true", help="print a JSON document")

    parser = _ArgumentParser(
        prog="pbw-groebner",
        description="Gröbner bases for left ideals and modules over skew PBW extensions",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("check", parents=[common], help="overlap consistency report")
    sub = commands.add_parser("normalize", parents=[common], help="PBW normal form")
    sub.add_argument("expr")
    sub = commands.add_parser("mul", parents=[common], help="product of two elements")
    sub.add_argument("left")
    sub.add_argument("right")
    sub = commands.add_parser("gb", parents=[common], help="reduced Gröbner basis")
    sub.add_argument("generators", nargs="+")
    sub = commands.add_parser("reduce", parents=[common], help="left division with cofactors")
    sub.add_argument("expr")
    sub.add_argument("--by", nargs="+", required=True)
    sub = commands.add_parser("member", parents=[common], help="left ideal membership")
    sub.add_argument("expr")
    sub.add_argument("--in", dest="ideal", nargs="+", required=True)
    sub = commands.add_parser("symbol", parents=[common], help="principal symbol")
    sub.add_argument("expr")
    commands.add_parser("gr-algebra", parents=[common], help="associated graded presentation")
    sub = commands.add_parser("gr-ideal", parents=[common], help="generators of Gr(I)")
    sub.add_argument("generators", nargs="+")
    sub = commands.add_parser("transfer", parents=[common], help="move a basis across Gr")
    sub.add_argument("--direction", choices=["to-graded", "from-graded"], required=True)
    sub.add_argument("generators", nargs="*")
    sub.add_argument("--lifts", nargs="+")
    sub.add_argument("--graded", nargs="+")
    sub = commands.add_parser("gap-demo", parents=[common], help="Gr(<F>) versus <symbols of F>")
    sub.add_argument("generators", nargs="+")
    sub = commands.add_parser("module-gb", parents=[common], help="submodule Gröbner basis")
    sub.add_argument("generators", nargs="+")
    return parser


def _basis_strings(basis: GroebnerBasis) -> List[str]:
    return [basis.view.format(g) for g in basis.generators]


def _basis_text(basis: GroebnerBasis) -> str:
    return "{" + ", ".join(_basis_strings(basis)) + "}"


def cmd_check(session: Session, args) -> CommandResult:
    failures = session.algebra.overlap_failures()
    n = session.algebra.n
    checked = n * (n - 1) * (n - 2) // 6
    payload = {
        "consistent": not failures,
        "overlaps_checked": checked,
        "failures": [
            {
                "triple": list(f.names),
                "first": format_polynomial(f.first, session.order),
                "second": format_polynomial(f.second, session.order),
                "difference": format_polynomial(f.difference, session.order),
            }
            for f in failures
        ],
    }
    if not failures:
        return CommandResult(f"consistent: {checked} overlaps checked", payload)
    lines = [f"inconsistent: {len(failures)} of {checked} overlaps fail"]
    lines.extend(f.describe() for f in failures)
    return CommandResult(
        "\n".join(lines),
        payload,
        EXIT_INCONSISTENT,
        f"{len(failures)} overlap failure(s)",
    )


def cmd_normalize(session: Session, args) -> CommandResult:
    value = session.parse(args.expr)
    text = session.format(value)
    return CommandResult(text, {"value": text})


def cmd_mul(session: Session, args) -> CommandResult:
    left = session.polynomial(args.left)
    right = session.parse(args.right)
    text = session.format(left * right)
    return CommandResult(text, {"value": text})


def cmd_gb(session: Session, args) -> CommandResult:
    generators = session.polynomials(args.generators)
    basis = buchberger(generators, session.order, workers=session.workers, algebra=session.algebra)
    return CommandResult(
        _basis_text(basis),
        {"basis": _basis_strings(basis), "verified": basis.verified, "reduced": basis.reduced},
    )


def cmd_reduce(session: Session, args) -> CommandResult:
    f = session.polynomial(args.expr)
    divisors = session.polynomials(args.by)
    trace = reduce(f, divisors, session.order)
    payload = {
        "remainder": session.format(trace.remainder),
        "cofactors": [session.format(q) for q in trace.cofactors],
        "steps": trace.steps,
    }
    return CommandResult(format_trace(trace, divisors, PolynomialView(session.order)), payload)


def cmd_member(session: Session, args) -> CommandResult:
    f = session.polynomial(args.expr)
    generators = session.polynomials(args.ideal)
    basis = buchberger(generators, session.order, workers=session.workers, algebra=session.algebra)
    member, trace = ideal_membership(f, basis)
    text = "\n".join(
        [
            f"member: {'true' if member else 'false'}",
            f"basis: {_basis_text(basis)}",
            format_trace(trace, basis.generators, basis.view),
        ]
    )
    payload = {
        "member": member,
        "basis": _basis_strings(basis),
        "remainder": session.format(trace.remainder),
        "cofactors": [session.format(q) for q in trace.cofactors],
    }
    return CommandResult(text, payload)


def cmd_symbol(session: Session, args) -> CommandResult:
    f = session.polynomial(args.expr)
    symbol = principal_symbol(f)
    text = format_polynomial(symbol, induce_graded_order(session.order))
    degree = f.degree()
    payload = {"symbol": text, "degree": None if f.is_zero() else degree}
    return CommandResult(text, payload)


def cmd_gr_algebra(session: Session, args) -> CommandResult:
    graded = associated_graded(session.algebra).presentation
    text = graded.to_text()
    payload = {
        "presentation": text,
        "quasi_commutative": graded.is_quasi_commutative(),
        "consistent": graded.is_consistent(),
    }
    return CommandResult(text.rstrip("\n"), payload)


def cmd_gr_ideal(session: Session, args) -> CommandResult:
    generators = session.polynomials(args.generators)
    basis = buchberger(generators, session.order, workers=session.workers, algebra=session.algebra)
    graded_order = induce_graded_order(session.order)
    symbols = [format_polynomial(g, graded_order) for g in gr_ideal_generators(basis)]
    text = "{" + ", ".join(symbols) + "}"
    return CommandResult(text, {"basis": _basis_strings(basis), "graded_generators": symbols})


def cmd_transfer(session: Session, args) -> CommandResult:
    if args.direction == "to-graded":
        if not args.generators:
            raise ConfigurationError("transfer --direction to-graded needs generators")
        generators = session.polynomials(args.generators)
        basis = buchberger(
            generators, session.order, workers=session.workers, algebra=session.algebra
        )
        result = transfer_to_graded(basis)
    else:
        if not args.lifts:
            raise ConfigurationError("transfer --direction from-graded needs --lifts")
        lifts = session.polynomials(args.lifts)
        graded_order = induce_graded_order(session.order)
        if args.graded:
            symbols = session.polynomials(args.graded, graded_presentation(session.algebra))
        else:
            symbols = [principal_symbol(f) for f in lifts]
        graded = GroebnerBasis.checked(
            symbols, graded_order, graded_presentation(session.algebra)
        )
        result = transfer_from_graded(graded, lifts, session.order)
    strings = _basis_strings(result)
    payload = {"direction": args.direction, "basis": strings, "verified": result.verified}
    return CommandResult("{" + ", ".join(strings) + "}", payload)


def cmd_gap_demo(session: Session, args) -> CommandResult:
    generators = session.polynomials(args.generators)
    report = naive_transfer_gap_demo(generators, session.order, workers=session.workers)
    return CommandResult(report.format(), report.to_dict())


def cmd_module_gb(session: Session, args) -> CommandResult:
    vectors = session.vectors(args.generators)
    order = session.module_order(vectors[0].rank)
    basis = module_buchberger(vectors, order, workers=session.workers, algebra=session.algebra)
    strings = _basis_strings(basis)
    payload = {
        "basis": strings,
        "module_order": order.name(session.algebra.var_names),
        "verified": basis.verified,
        "reduced": basis.reduced,
    }
    return CommandResult("{" + ", ".join(strings) + "}", payload)


COMMANDS = {
    "check": cmd_check,
    "normalize": cmd_normalize,
    "mul": cmd_mul,
    "gb": cmd_gb,
    "reduce": cmd_reduce,
    "member": cmd_member,
    "symbol": cmd_symbol,
    "gr-algebra": cmd_gr_algebra,
    "gr-ideal": cmd_gr_ideal,
    "transfer": cmd_transfer,
    "gap-demo": cmd_gap_demo,
    "module-gb": cmd_module_gb,
}


def _exit_code(error: Exception) -> int:
    if isinstance(error, ExpressionError):
        return EXIT_PARSE
    if isinstance(error, InconsistentPresentationError):
        return EXIT_INCONSISTENT
    if isinstance(error, InternalAssertionError):
        return EXIT_INTERNAL
    if isinstance(error, USAGE_ERRORS):
        return EXIT_USAGE
    return EXIT_INTERNAL


def _load_schema() -> Dict[str, Any]:
    with open(SCHEMA_PATH, "r", encoding="utf-8") as handle:
        return json.load(handle)


def run_command(argv: Sequence[str]) -> CommandResult:
    """Parse argv, run one command and package its output and exit status."""
    command = argv[0] if argv else None
    session = None
    try:
        args = build_parser().parse_args(list(argv))
        command = args.command
        session = Session(args)
        result = COMMANDS[args.command](session, args)
    except SystemExit as error:
        # --help
        return CommandResult("", {}, int(error.code or 0))
    except Exception as error:
        code = _exit_code(error)
        if code == EXIT_INTERNAL and not isinstance(error, InternalAssertionError):
            logger.exception(f"Unexpected failure in {command}")
        message = f"{type(error).__name__}: {error}"
        payload = {"error": {"type": type(error).__name__, "message": str(error)}}
        result = CommandResult("", payload, code, message)

    document = {
        "command": command or "",
        "status": "ok" if result.exit_code == EXIT_OK else "error",
        "exit_code": result.exit_code,
    }
    if session is not None:
        document.update(session.describe())
    document["result"] = result.payload
    try:
        jsonschema.validate(instance=document, schema=_load_schema())
    except jsonschema.ValidationError as error:
        logger.error(f"Result document does not match its schema: {error.message}")
        return CommandResult("", {}, EXIT_INTERNAL, "internal error: malformed result document")
    result.payload = document
    return result


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    result = run_command(argv)
    as_json = "--json" in argv
    output = result.render(as_json)
    if output:
        print(output)
    if result.error:
        logger.error(result.error)
        print(f"error: {result.error}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
