from pathlib import Path

import pytest

from algebra import make_presentation
from errors import ExpressionError, PresentationError
from exprparse import (
    parse_expression,
    parse_polynomial,
    parse_presentation,
    parse_vector,
    read_presentation,
)
from field import FieldSpec
from freemod import VectorPoly

QQ = FieldSpec.rationals()
GF7 = FieldSpec.prime(7)
CORPUS = Path(__file__).resolve().parents[2] / "corpus"


def make_weyl(field=QQ):
    return make_presentation(field, ["x", "y"], [("y", "x", 1, 1)])


def test_products_keep_factor_order():
    weyl = make_weyl()
    x, y = weyl.variable("x"), weyl.variable("y")
    assert parse_polynomial("y*x", weyl) == x * y + 1
    assert parse_polynomial("x*y", weyl) == x * y
    assert parse_polynomial("(x + y)^2", weyl) == x * x + (x * y).scale(2) + y * y + 1


def test_precedence_and_signs():
    weyl = make_weyl()
    x, y = weyl.variable("x"), weyl.variable("y")
    assert parse_polynomial("-x^2", weyl) == -(x * x)
    assert parse_polynomial("2*x - 3 + -y", weyl) == x.scale(2) - 3 - y
    assert parse_polynomial("1/2*x", weyl) == x.scale("1/2")
    assert parse_polynomial("x^0", weyl) == 1
    assert parse_polynomial("+x", weyl) == x


def test_numbers_are_read_in_the_field():
    weyl = make_weyl(GF7)
    assert parse_polynomial("8*x", weyl) == weyl.variable("x")
    assert parse_polynomial("1/2", weyl) == 4
    with pytest.raises(ExpressionError):
        parse_polynomial("1/7", weyl)


def test_vector_literals():
    weyl = make_weyl()
    x, y = weyl.variable("x"), weyl.variable("y")
    value = parse_expression("[x, y*x]", weyl)
    assert isinstance(value, VectorPoly)
    assert value == VectorPoly.from_components([x, x * y + 1])
    assert parse_vector("[0]", weyl).is_zero()
    with pytest.raises(ExpressionError):
        parse_polynomial("[x]", weyl)
    with pytest.raises(ExpressionError):
        parse_vector("x", weyl)


def test_error_positions():
    weyl = make_weyl()
    with pytest.raises(ExpressionError) as error:
        parse_polynomial("x + z", weyl)
    assert (error.value.line, error.value.column) == (1, 5)
    with pytest.raises(ExpressionError) as error:
        parse_polynomial("x^-1", weyl)
    assert error.value.column == 3
    with pytest.raises(ExpressionError):
        parse_polynomial("x +", weyl)
    with pytest.raises(ExpressionError):
        parse_polynomial("x ** y", weyl)


def test_parse_presentation():
    text = "# Weyl algebra\nfield QQ\nvars x y\nrel y*x = x*y + 1  # canonical\n"
    assert parse_presentation(text) == make_weyl()


def test_presentation_defaults_to_rationals():
    algebra = parse_presentation("vars x y\nrel y*x = 2*x*y\n")
    assert algebra.field == QQ
    assert algebra.c(0, 1) == QQ(2)
    assert algebra.d(0, 1).is_zero()


def test_presentation_with_linear_remainders():
    algebra = parse_presentation(
        "vars e f h\nrel f*e = e*f - h\nrel h*e = e*h + 2*e\nrel h*f = f*h - 2*f\n"
    )
    expected = make_presentation(
        QQ,
        ["e", "f", "h"],
        [("f", "e", 1, {"h": -1}), ("h", "e", 1, {"e": 2}), ("h", "f", 1, {"f": -2})],
    )
    assert algebra == expected
    assert algebra.is_consistent()


def test_presentation_prime_field():
    algebra = parse_presentation("field GF 7\nvars x y\nrel y*x = 3*x*y\n")
    assert algebra.field == GF7
    assert algebra.c(0, 1) == GF7(3)
    assert parse_presentation(algebra.to_text()) == algebra


def test_presentation_errors():
    with pytest.raises(PresentationError):
        parse_presentation("vars x y\nrel x*y = y*x\n")
    with pytest.raises(PresentationError):
        parse_presentation("vars x y\nrel y*x = x*y + x^2\n")
    with pytest.raises(PresentationError):
        parse_presentation("vars x y\nrel y*x = 1\n")
    with pytest.raises(PresentationError):
        parse_presentation("field QQ\n")
    with pytest.raises(PresentationError):
        parse_presentation("field RR\nvars x\n")
    with pytest.raises(ExpressionError):
        parse_presentation("vars x y\nrelation y*x = x*y\n")


def test_relation_error_position():
    with pytest.raises(ExpressionError) as error:
        parse_presentation("field QQ\nvars x y\nrel y*x = x*y + w\n")
    assert (error.value.line, error.value.column) == (3, 17)
    with pytest.raises(ExpressionError) as error:
        parse_presentation("vars x y\nrel z*x = x*z\n")
    assert (error.value.line, error.value.column) == (2, 5)


@pytest.mark.parametrize(
    "name", ["weyl1", "weyl2", "qplane_q2", "qplane_gf7", "usl2", "heisenberg"]
)
def test_corpus_presentations_are_consistent(name):
    algebra = read_presentation(CORPUS / f"{name}.alg")
    assert algebra.is_consistent()


def test_corpus_inconsistent_demo():
    algebra = read_presentation(CORPUS / "inconsistent_demo.alg")
    assert not algebra.is_consistent()


def test_zero_denominator_is_reported_at_the_literal():
    weyl = make_weyl()
    with pytest.raises(ExpressionError) as error:
        parse_polynomial("1/0*x", weyl)
    assert (error.value.line, error.value.column) == (1, 1)
    with pytest.raises(ExpressionError) as error:
        parse_polynomial("x + 3/0", weyl)
    assert error.value.column == 5
    with pytest.raises(ExpressionError) as error:
        parse_presentation("vars x y\nrel y*x = x*y + 1/0\n")
    assert (error.value.line, error.value.column) == (2, 17)


def test_presentation_without_variables_is_the_base_field():
    algebra = parse_presentation("field GF 5\nvars\n")
    assert algebra.n == 0
    assert algebra.is_consistent()
    assert parse_polynomial("2*3 - 1/2", algebra) == algebra.constant(3)
    with pytest.raises(ExpressionError):
        parse_polynomial("x", algebra)
    with pytest.raises(PresentationError):
        parse_presentation("vars\nvars x\n")
