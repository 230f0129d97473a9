"""Left reduction, S-polynomials, Buchberger completion and membership for left ideals.

The algorithms are written once against a small term view (leading data,
divisibility, left shift by x^gamma) so the free-module code in freemod reuses
them with module monomials x^alpha e_i.
"""

import heapq
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

from algebra import (
    AlgebraPresentation,
    Exponent,
    Polynomial,
    format_polynomial,
    monomial_product_data,
)
from errors import UnverifiedBasisError
from orders import MonomialOrder, leading_term

logger = logging.getLogger("pbw-groebner.groebner")


class ReductionMode(Enum):
    TOP = "top"
    FULL = "full"


def divides(alpha: Exponent, beta: Exponent) -> Optional[Exponent]:
    """gamma = beta - alpha when x^alpha divides x^beta, otherwise None."""
    if len(alpha) != len(beta):
        return None
    gamma = tuple(b - a for a, b in zip(alpha, beta))
    if any(g < 0 for g in gamma):
        return None
    return gamma


class PolynomialView:
    """Term operations for elements of A."""

    def __init__(self, order: MonomialOrder):
        self.order = order

    def lead(self, f: Polynomial):
        return leading_term(f, self.order)

    def leading_part(self, f: Polynomial) -> Polynomial:
        c, alpha = self.lead(f)
        return f.algebra.monomial(alpha, c)

    @staticmethod
    def exponent(monomial) -> Exponent:
        return monomial

    @staticmethod
    def quotient(divisor, target) -> Optional[Exponent]:
        return divides(divisor, target)

    @staticmethod
    def lcm(first, second) -> Optional[Exponent]:
        return tuple(max(a, b) for a, b in zip(first, second))

    @staticmethod
    def coprime(first, second) -> bool:
        return not any(a and b for a, b in zip(first, second))

    @staticmethod
    def shift(gamma: Exponent, g: Polynomial) -> Polynomial:
        return g.algebra.monomial(gamma) * g

    @staticmethod
    def act(q: Polynomial, g: Polynomial) -> Polynomial:
        return q * g

    @staticmethod
    def zero_like(f: Polynomial) -> Polynomial:
        return f.algebra.zero()

    def format(self, f) -> str:
        return format_polynomial(f, self.order)

    def format_cofactor(self, q: Polynomial) -> str:
        return format_polynomial(q, self.order)


@dataclass(frozen=True)
class ReductionTrace:
    """f = sum(cofactors[i] * divisors[i]) + remainder."""

    remainder: Any
    cofactors: Tuple[Polynomial, ...]
    steps: int = 0

    def verify(self, f, divisors: Sequence, view=None) -> bool:
        act = (view or PolynomialView).act
        total = self.remainder
        for q, g in zip(self.cofactors, divisors):
            if q:
                total = total + act(q, g)
        return total == f


def _reduce(view, f, divisors: Sequence, mode: ReductionMode) -> ReductionTrace:
    algebra = f.algebra
    cofactors = [algebra.zero() for _ in divisors]
    # zero divisors divide nothing; their cofactors stay 0
    leads = [view.lead(g) if g else None for g in divisors]
    remainder = view.zero_like(f)
    p = f
    steps = 0
    while p:
        lc, lm = view.lead(p)
        for index, lead in enumerate(leads):
            if lead is None:
                continue
            lc_g, lm_g = lead
            gamma = view.quotient(lm_g, lm)
            if gamma is not None:
                break
        else:
            if mode is ReductionMode.TOP:
                remainder = remainder + p
                break
            term = view.leading_part(p)
            remainder = remainder + term
            p = p - term
            continue
        # x^gamma g has leading coefficient c_{gamma, exp(lm g)} lc(g)
        c = monomial_product_data(algebra, gamma, view.exponent(lm_g)).c_ab
        coefficient = lc / (lc_g * c)
        cofactors[index] = cofactors[index] + algebra.monomial(gamma, coefficient)
        p = p - view.shift(gamma, divisors[index]).scale(coefficient)
        steps += 1
    return ReductionTrace(remainder, tuple(cofactors), steps)


def _s_element(view, f, g):
    lc_f, m_f = view.lead(f)
    lc_g, m_g = view.lead(g)
    gamma = view.lcm(m_f, m_g)
    if gamma is None:
        return None
    algebra = f.algebra
    beta_f, beta_g = view.exponent(m_f), view.exponent(m_g)
    top = view.exponent(gamma)
    shift_f = tuple(t - b for t, b in zip(top, beta_f))
    shift_g = tuple(t - b for t, b in zip(top, beta_g))
    c_f = monomial_product_data(algebra, shift_f, beta_f).c_ab
    c_g = monomial_product_data(algebra, shift_g, beta_g).c_ab
    left = view.shift(shift_f, f).scale((lc_f * c_f).inverse())
    right = view.shift(shift_g, g).scale((lc_g * c_g).inverse())
    return left - right


def _complete(view, generators: Sequence, workers: int = 1, skip_coprime: bool = False) -> List:
    basis = [g for g in generators if g]
    leads = [view.lead(g)[1] for g in basis]
    queue: List[Tuple[int, int, int]] = []
    skipped = 0

    def push_pairs(j: int):
        nonlocal skipped
        for i in range(j):
            gamma = view.lcm(leads[i], leads[j])
            if gamma is None:
                continue
            if skip_coprime and view.coprime(leads[i], leads[j]):
                skipped += 1
                continue
            heapq.heappush(queue, (sum(view.exponent(gamma)), j, i))

    def reduce_pair(entry, snapshot) -> Any:
        _, j, i = entry
        s = _s_element(view, snapshot[i], snapshot[j])
        return _reduce(view, s, snapshot, ReductionMode.FULL).remainder

    for j in range(len(basis)):
        push_pairs(j)

    processed = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while queue:
            degree = queue[0][0]
            batch = []
            while queue and queue[0][0] == degree:
                batch.append(heapq.heappop(queue))
            snapshot = list(basis)
            if pool is not None and len(batch) > 1:
                remainders = list(pool.map(lambda entry: reduce_pair(entry, snapshot), batch))
            else:
                remainders = [reduce_pair(entry, snapshot) for entry in batch]
            processed += len(batch)
            for entry, r in zip(batch, remainders):
                if r and len(basis) > len(snapshot):
                    r = _reduce(view, r, basis, ReductionMode.FULL).remainder
                if not r:
                    continue
                logger.debug(f"Pair {entry[1:]} at degree {degree} adds {view.format(r)}")
                basis.append(r)
                leads.append(view.lead(r)[1])
                push_pairs(len(basis) - 1)
    finally:
        if pool is not None:
            pool.shutdown()
    logger.info(
        f"Buchberger completed: {len(basis)} generators, {processed} pairs reduced, "
        f"{skipped} coprime pairs skipped"
    )
    return basis


def _autoreduce(view, generators: Sequence) -> List:
    items = [g for g in generators if g]
    leads = [view.lead(g)[1] for g in items]
    minimal = []
    for index, g in enumerate(items):
        dominated = any(
            view.quotient(other, leads[index]) is not None and (other != leads[index] or j < index)
            for j, other in enumerate(leads)
            if j != index
        )
        if not dominated:
            minimal.append(g.scale(view.lead(g)[0].inverse()))
    for index in range(len(minimal)):
        others = minimal[:index] + minimal[index + 1 :]
        minimal[index] = _reduce(view, minimal[index], others, ReductionMode.FULL).remainder
    return sorted(minimal, key=lambda g: view.order.key(view.lead(g)[1]))


def _is_groebner(view, generators: Sequence) -> bool:
    basis = list(generators)
    for j in range(len(basis)):
        for i in range(j):
            s = _s_element(view, basis[i], basis[j])
            if s is None:
                continue
            if _reduce(view, s, basis, ReductionMode.FULL).remainder:
                logger.debug(f"S-element of generators {i} and {j} does not reduce to 0")
                return False
    return True


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder
    algebra: AlgebraPresentation
    verified: bool = False
    reduced: bool = False
    view: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.view is None:
            object.__setattr__(self, "view", PolynomialView(self.order))

    @classmethod
    def checked(cls, generators: Sequence[Polynomial], order: MonomialOrder, algebra=None):
        """Package generators, marking the result verified iff is_groebner holds."""
        generators = tuple(g for g in generators if g)
        if algebra is None:
            if not generators:
                raise ValueError("An empty basis needs an explicit algebra")
            algebra = generators[0].algebra
        basis = cls(generators, order, algebra)
        return replace(basis, verified=_is_groebner(basis.view, generators))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def leading_monomials(self) -> List[Exponent]:
        return [self.view.lead(g)[1] for g in self.generators]

    def reduce(self, f, mode: ReductionMode = ReductionMode.FULL) -> ReductionTrace:
        return _reduce(self.view, f, self.generators, mode)

    def contains(self, f) -> bool:
        return ideal_membership(f, self)[0]

    def format(self) -> str:
        return "{" + ", ".join(self.view.format(g) for g in self.generators) + "}"


def reduce(
    f: Polynomial,
    divisors: Sequence[Polynomial],
    order: MonomialOrder,
    mode: ReductionMode = ReductionMode.FULL,
) -> ReductionTrace:
    """Left division of f by divisors (earliest divisor wins)."""
    return _reduce(PolynomialView(order), f, list(divisors), mode)


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.reduce(f).remainder


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """Left S-polynomial whose two candidates at the lcm exponent cancel exactly."""
    return _s_element(PolynomialView(order), f, g)


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder,
    workers: int = 1,
    reduced: bool = True,
    algebra: Optional[AlgebraPresentation] = None,
) -> GroebnerBasis:
    """Verified Gröbner basis of the left ideal generated by generators."""
    nonzero = [g for g in generators if g]
    if algebra is None:
        if not generators:
            raise ValueError("buchberger needs at least one generator or an explicit algebra")
        algebra = generators[0].algebra
    if not nonzero:
        return GroebnerBasis((), order, algebra, verified=True, reduced=True)
    algebra.require_consistent()
    view = PolynomialView(order)
    basis = _complete(view, nonzero, workers, skip_coprime=algebra.is_commutative())
    result = GroebnerBasis(tuple(basis), order, algebra, verified=True)
    return autoreduce(result) if reduced else result


def autoreduce(basis: GroebnerBasis) -> GroebnerBasis:
    """Monic, minimal, tail-reduced basis (unique for a fixed order)."""
    if not basis.verified:
        raise UnverifiedBasisError("autoreduce needs a verified Gröbner basis")
    generators = _autoreduce(basis.view, basis.generators)
    return replace(basis, generators=tuple(generators), reduced=True)


def is_groebner(generators: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """True iff every S-polynomial of a pair Full-reduces to 0 over generators."""
    return _is_groebner(PolynomialView(order), [g for g in generators if g])


def ideal_membership(f: Polynomial, basis: GroebnerBasis) -> Tuple[bool, ReductionTrace]:
    if not basis.verified:
        raise UnverifiedBasisError("Membership needs a verified Gröbner basis")
    trace = basis.reduce(f)
    return trace.remainder.is_zero(), trace


def format_trace(trace: ReductionTrace, divisors: Sequence, view) -> str:
    """Annotated cofactor list: one line per divisor used, then the remainder."""
    lines = []
    for index, (q, g) in enumerate(zip(trace.cofactors, divisors)):
        if q:
            lines.append(f"  g{index + 1} = {view.format(g)}  cofactor {view.format_cofactor(q)}")
    lines.append(f"  remainder {view.format(trace.remainder)}")
    return "\n".join(lines)
