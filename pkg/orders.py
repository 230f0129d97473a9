"""Degree-compatible monomial orders, module orders and leading-data extraction."""

import dataclasses
import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

from algebra import Exponent, Polynomial
from errors import OrderError, ZeroPolynomialError
from field import Scalar


class Comparison(Enum):
    LT = -1
    EQ = 0
    GT = 1


class OrderKind(Enum):
    DEGLEX = "deglex"
    DEGREVLEX = "degrevlex"


class ModuleScheme(Enum):
    TOP = "top"
    POT = "pot"


def _check_permutation(priority: Sequence[int], size: int, what: str):
    if sorted(priority) != list(range(size)):
        raise OrderError(f"{what} priority {list(priority)} is not a permutation of 0..{size - 1}")


@dataclass(frozen=True)
class MonomialOrder:
    """DegLex or DegRevLex with an explicit variable priority (greatest first)."""

    kind: OrderKind
    variable_priority: Tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.kind, OrderKind):
            raise OrderError(f"Only degree-compatible orders are supported, got {self.kind!r}")
        _check_permutation(self.variable_priority, len(self.variable_priority), "Variable")

    @classmethod
    def deglex(cls, n: int) -> "MonomialOrder":
        return cls(OrderKind.DEGLEX, tuple(range(n)))

    @classmethod
    def degrevlex(cls, n: int) -> "MonomialOrder":
        return cls(OrderKind.DEGREVLEX, tuple(range(n)))

    @classmethod
    def parse(cls, text: str, var_names: Sequence[str]) -> "MonomialOrder":
        """Read "deglex", "degrevlex" or either with a ":x2>x1" priority suffix.

        Variables missing from the suffix follow in their declared order.
        """
        name, _, suffix = text.strip().partition(":")
        try:
            kind = OrderKind(name.strip().lower())
        except ValueError:
            raise OrderError(
                f"Unknown or non-degree-compatible order {name!r}; use deglex or degrevlex"
            ) from None
        names = list(var_names)
        listed = []
        if suffix.strip():
            for token in re.split(r"\s*>\s*", suffix.strip()):
                if token not in names:
                    raise OrderError(f"Unknown variable {token!r} in order priority")
                if names.index(token) in listed:
                    raise OrderError(f"Variable {token!r} listed twice in order priority")
                listed.append(names.index(token))
        priority = listed + [i for i in range(len(names)) if i not in listed]
        return cls(kind, tuple(priority))

    @property
    def n(self) -> int:
        return len(self.variable_priority)

    def key(self, alpha: Exponent):
        """Sort key: larger key means larger monomial."""
        if len(alpha) != self.n:
            raise OrderError(f"Exponent {alpha} has length {len(alpha)}, order expects {self.n}")
        ranked = [alpha[i] for i in self.variable_priority]
        if self.kind is OrderKind.DEGLEX:
            return (sum(alpha), tuple(ranked))
        return (sum(alpha), tuple(-a for a in reversed(ranked)))

    def name(self, var_names: Sequence[str] = ()) -> str:
        if list(self.variable_priority) == list(range(self.n)) or not var_names:
            return self.kind.value
        chain = ">".join(var_names[i] for i in self.variable_priority)
        return f"{self.kind.value}:{chain}"


@dataclass(frozen=True)
class ModuleOrder:
    """TOP or POT order on module monomials x^alpha e_i, always degree first."""

    base: MonomialOrder
    scheme: ModuleScheme
    component_priority: Tuple[int, ...]

    def __post_init__(self):
        _check_permutation(self.component_priority, len(self.component_priority), "Component")

    @classmethod
    def top(cls, base: MonomialOrder, rank: int) -> "ModuleOrder":
        return cls(base, ModuleScheme.TOP, tuple(range(rank)))

    @classmethod
    def pot(cls, base: MonomialOrder, rank: int) -> "ModuleOrder":
        return cls(base, ModuleScheme.POT, tuple(range(rank)))

    @classmethod
    def parse(cls, text: str, var_names: Sequence[str], rank: int) -> "ModuleOrder":
        """Read "top:<base>" or "pot:<base>"."""
        scheme, _, base = text.strip().partition(":")
        try:
            scheme = ModuleScheme(scheme.strip().lower())
        except ValueError:
            raise OrderError(f"Unknown module order {text!r}; use top:<base> or pot:<base>") from None
        return cls(MonomialOrder.parse(base or "deglex", var_names), scheme, tuple(range(rank)))

    @property
    def rank(self) -> int:
        return len(self.component_priority)

    def key(self, monomial: Tuple[int, Exponent]):
        component, alpha = monomial
        if not 0 <= component < self.rank:
            raise OrderError(f"Component {component} out of range for rank {self.rank}")
        weight = self.rank - self.component_priority.index(component)
        base = self.base.key(alpha)
        if self.scheme is ModuleScheme.TOP:
            return (base, weight)
        return (base[0], weight, base)

    def name(self, var_names: Sequence[str] = ()) -> str:
        return f"{self.scheme.value}:{self.base.name(var_names)}"


def _compare_keys(a, b) -> Comparison:
    if a < b:
        return Comparison.LT
    if a > b:
        return Comparison.GT
    return Comparison.EQ


def compare(order: MonomialOrder, alpha: Exponent, beta: Exponent) -> Comparison:
    if len(alpha) != len(beta):
        raise OrderError(f"Cannot compare exponents of lengths {len(alpha)} and {len(beta)}")
    return _compare_keys(order.key(tuple(alpha)), order.key(tuple(beta)))


def module_compare(order: ModuleOrder, x, y) -> Comparison:
    return _compare_keys(order.key(x), order.key(y))


def sort_key(order: MonomialOrder):
    """Key function for sorted(); ascending under order."""
    return lambda alpha: order.key(tuple(alpha))


def module_key(order: ModuleOrder):
    return lambda monomial: order.key((monomial[0], tuple(monomial[1])))


def leading_term(f: Polynomial, order: MonomialOrder) -> Tuple[Scalar, Exponent]:
    """(lc(f), exp(lm(f))) under order."""
    if f.is_zero():
        raise ZeroPolynomialError("The zero polynomial has no leading term")
    alpha = max(f._terms, key=order.key)
    return f._terms[alpha], alpha


def leading_monomial(f: Polynomial, order: MonomialOrder) -> Exponent:
    return leading_term(f, order)[1]


def module_leading_term(f, order: ModuleOrder) -> Tuple[Scalar, Tuple[int, Exponent]]:
    """(lc(f), (component, exponent)) of a vector polynomial under order."""
    if f.is_zero():
        raise ZeroPolynomialError("The zero vector has no leading term")
    monomial = max(f._terms, key=order.key)
    return f._terms[monomial], monomial


def induce_graded_order(order: MonomialOrder) -> MonomialOrder:
    """The order on Mon(Gr(A)) comparing symbols exactly as their exponents compare."""
    return dataclasses.replace(order)


def order_from_graded(order: MonomialOrder) -> MonomialOrder:
    """Converse of induce_graded_order: the order on Mon(A) read off Mon(Gr(A))."""
    return dataclasses.replace(order)


def induce_graded_module_order(order: ModuleOrder) -> ModuleOrder:
    return dataclasses.replace(order, base=induce_graded_order(order.base))


def module_order_from_graded(order: ModuleOrder) -> ModuleOrder:
    return dataclasses.replace(order, base=order_from_graded(order.base))
