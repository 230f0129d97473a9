"""Reader for polynomial expressions, vector literals and presentation files.

Expressions use numbers (integers or a/b), variable names, + - * ^ and
parentheses; a product keeps the order of its factors, so "y*x" in a Weyl
algebra evaluates to x*y + 1. A vector literal is [f1, f2, ..., fm].

Presentation files are line based:

    # comment
    field QQ            (or: field GF 7, field GF(7))
    vars x y
    rel y*x = x*y + 1   (x_j * x_i = c x_i x_j + d, with j declared after i)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import pyparsing as pp

from algebra import AlgebraPresentation, Polynomial, add_exponents, make_presentation, unit_exponent
from errors import ExpressionError, PresentationError, ScalarDivisionError
from field import FieldSpec
from freemod import VectorPoly

logger = logging.getLogger("pbw-groebner.exprparse")

pp.ParserElement.enable_packrat()


@dataclass(frozen=True)
class Number:
    # literal text, "3" or "a/b"; converted during evaluation
    text: str
    loc: int


@dataclass(frozen=True)
class Name:
    name: str
    loc: int


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int
    loc: int


@dataclass(frozen=True)
class Negate:
    operand: object


@dataclass(frozen=True)
class Product:
    factors: Tuple


@dataclass(frozen=True)
class Sum:
    # (sign, term) pairs, sign is +1 or -1
    terms: Tuple


@dataclass(frozen=True)
class Vector:
    entries: Tuple


@dataclass(frozen=True)
class ExponentToken:
    value: int
    loc: int


def _build_grammar() -> pp.ParserElement:
    expr = pp.Forward()
    number = pp.Regex(r"\d+(?:/\d+)?").set_parse_action(
        lambda s, loc, t: Number(t[0], loc)
    )
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_").set_parse_action(
        lambda s, loc, t: Name(t[0], loc)
    )
    atom = number | identifier | (pp.Suppress("(") + expr + pp.Suppress(")"))
    exponent = pp.Regex(r"[+-]?\d+").set_parse_action(
        lambda s, loc, t: ExponentToken(int(t[0]), loc)
    )
    power = (atom + pp.Optional(pp.Suppress("^") + exponent)).set_parse_action(_make_power)

    factor = pp.Forward()
    negated = (pp.Suppress("-") + factor).set_parse_action(lambda t: Negate(t[0]))
    factor <<= negated | (pp.Suppress("+") + factor) | power

    term = (factor + pp.ZeroOrMore(pp.Suppress("*") + factor)).set_parse_action(
        lambda t: t[0] if len(t) == 1 else Product(tuple(t))
    )
    expr <<= (term + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(_make_sum)
    entries = expr + pp.ZeroOrMore(pp.Suppress(",") + expr)
    vector = (pp.Suppress("[") + entries + pp.Suppress("]")).set_parse_action(
        lambda t: Vector(tuple(t))
    )
    return vector | expr


def _make_power(t):
    if len(t) == 1:
        return t[0]
    return Power(t[0], t[1].value, t[1].loc)


def _make_sum(t):
    if len(t) == 1:
        return t[0]
    terms = [(1, t[0])]
    for position in range(1, len(t), 2):
        terms.append((1 if t[position] == "+" else -1, t[position + 1]))
    return Sum(tuple(terms))


GRAMMAR = _build_grammar()


class _Evaluator:
    def __init__(self, algebra: AlgebraPresentation, text: str, line: int, column: int):
        self.algebra = algebra
        self.text = text
        self.line = line
        self.column = column

    def error(self, message: str, loc: int) -> ExpressionError:
        line = pp.lineno(loc, self.text)
        col = pp.col(loc, self.text)
        if line == 1:
            col += self.column - 1
        return ExpressionError(message, self.line + line - 1, col)

    def evaluate(self, node) -> Polynomial:
        if isinstance(node, Number):
            try:
                value = Fraction(node.text)
            except ZeroDivisionError:
                raise self.error(f"{node.text} has a zero denominator", node.loc) from None
            try:
                return self.algebra.constant(value)
            except ScalarDivisionError:
                raise self.error(f"{value} is not defined in {self.algebra.field}", node.loc) from None
        if isinstance(node, Name):
            if node.name not in self.algebra.var_names:
                raise self.error(f"Unknown identifier {node.name!r}", node.loc)
            return self.algebra.variable(node.name)
        if isinstance(node, Power):
            if node.exponent < 0:
                raise self.error(f"Negative exponent {node.exponent}", node.loc)
            return self.evaluate(node.base) ** node.exponent
        if isinstance(node, Negate):
            return -self.evaluate(node.operand)
        if isinstance(node, Product):
            result = self.evaluate(node.factors[0])
            for factor in node.factors[1:]:
                result = result * self.evaluate(factor)
            return result
        if isinstance(node, Sum):
            result = self.algebra.zero()
            for sign, term in node.terms:
                value = self.evaluate(term)
                result = result + value if sign > 0 else result - value
            return result
        raise TypeError(f"Unexpected expression node {node!r}")


def _parse_tree(text: str, line: int, column: int):
    try:
        return GRAMMAR.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as error:
        col = error.col + (column - 1 if error.lineno == 1 else 0)
        raise ExpressionError(
            f"Cannot parse {text.strip()!r}: {error.msg}", line + error.lineno - 1, col
        ) from None


def parse_expression(
    text: str, algebra: AlgebraPresentation, line: int = 1, column: int = 1
) -> Union[Polynomial, VectorPoly]:
    """Evaluate text to a Polynomial, or a VectorPoly for a [..] literal.

    line and column give the position of text inside a larger document and
    offset the positions reported in ExpressionError.
    """
    tree = _parse_tree(text, line, column)
    evaluator = _Evaluator(algebra, text, line, column)
    if isinstance(tree, Vector):
        return VectorPoly.from_components([evaluator.evaluate(entry) for entry in tree.entries])
    return evaluator.evaluate(tree)


def parse_polynomial(text: str, algebra: AlgebraPresentation) -> Polynomial:
    value = parse_expression(text, algebra)
    if isinstance(value, VectorPoly):
        raise ExpressionError(f"Expected a polynomial, got the vector {text.strip()!r}")
    return value


def parse_vector(text: str, algebra: AlgebraPresentation) -> VectorPoly:
    value = parse_expression(text, algebra)
    if not isinstance(value, VectorPoly):
        raise ExpressionError(f"Expected a vector literal [f1, ..., fm], got {text.strip()!r}")
    return value


IDENTIFIER = pp.Word(pp.alphas + "_", pp.alphanums + "_")
FIELD_LINE = pp.Keyword("field") + pp.Regex(r".+")("field")
VARS_LINE = pp.Keyword("vars") + pp.Group(pp.ZeroOrMore(IDENTIFIER))("names")
REL_LINE = (
    pp.Keyword("rel")
    + IDENTIFIER("left")
    + pp.Suppress("*")
    + IDENTIFIER("right")
    + pp.Suppress("=")
    + pp.Regex(r".+")("rhs")
)
DIRECTIVE = FIELD_LINE | VARS_LINE | REL_LINE


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def parse_presentation(text: str) -> AlgebraPresentation:
    """Build a presentation from presentation-file text."""
    field = None
    names: Optional[List[str]] = None
    relations: List[Tuple[int, str, str, str, int]] = []
    lines = text.splitlines()
    for number, raw in enumerate(lines, start=1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        try:
            parsed = DIRECTIVE.parse_string(content, parse_all=True)
        except pp.ParseBaseException as error:
            raise ExpressionError(
                f"Malformed line {content.strip()!r}", number, error.col
            ) from None
        keyword = parsed[0]
        if keyword == "field":
            if field is not None:
                raise PresentationError(f"Line {number}: field declared twice")
            try:
                field = FieldSpec.parse(parsed["field"])
            except ValueError as error:
                raise PresentationError(f"Line {number}: {error}") from None
        elif keyword == "vars":
            if names is not None:
                raise PresentationError(f"Line {number}: vars declared twice")
            names = list(parsed.get("names", []))
        else:
            rhs = parsed["rhs"]
            column = len(content) - len(rhs) + 1
            relations.append((number, parsed["left"], parsed["right"], rhs, column))
    if field is None:
        field = FieldSpec.rationals()
    if names is None:
        raise PresentationError("Presentation has no vars line; write \"vars\" alone for the base field")

    # relation right-hand sides are read in the commutative polynomial ring
    provisional = make_presentation(field, names)
    converted = []
    for number, left, right, rhs, column in relations:
        for name in (left, right):
            if name not in names:
                at = lines[number - 1].find(name) + 1
                raise ExpressionError(f"Unknown identifier {name!r}", number, at)
        j, i = names.index(left), names.index(right)
        if not j > i:
            raise PresentationError(
                f"Line {number}: rel {left}*{right} must rewrite x_j*x_i with x_j declared after x_i"
            )
        value = parse_expression(rhs, provisional, line=number, column=column)
        if isinstance(value, VectorPoly):
            raise ExpressionError("A relation cannot have a vector right-hand side", number, column)
        top = add_exponents(unit_exponent(len(names), i), unit_exponent(len(names), j))
        c = value.coefficient(top)
        remainder = {alpha: coefficient for alpha, coefficient in value.terms() if alpha != top}
        for alpha in remainder:
            if sum(alpha) > 1:
                raise PresentationError(
                    f"Line {number}: rel {left}*{right} has a remainder term of degree {sum(alpha)}; "
                    f"only c*{right}*{left} plus terms of degree at most 1 are allowed"
                )
        converted.append((left, right, c, remainder))
    algebra = make_presentation(field, names, converted)
    logger.debug(f"Read presentation over {field} with variables {names}")
    return algebra


def read_presentation(path) -> AlgebraPresentation:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_presentation(handle.read())
