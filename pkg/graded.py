"""Degree filtration, principal symbols, the associated graded algebra and the
transfer of Gröbner bases between A and Gr(A).

Gr(A) is modelled as another presentation with the same constants and zero
linear remainders; the symbol of x^alpha in Gr(A) is the monomial with the
same exponent, so eta truncates to the top-degree part and changes algebra.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import (
    NEG_INFINITY,
    AlgebraPresentation,
    Exponent,
    Polynomial,
    exponents_of_degree,
    format_polynomial,
    poly_mul,
)
from errors import InternalAssertionError, TransferError, UnverifiedBasisError
from groebner import (
    GroebnerBasis,
    buchberger,
    ideal_membership,
    is_groebner,
)
from orders import MonomialOrder, induce_graded_order, leading_term, order_from_graded

logger = logging.getLogger("pbw-groebner.graded")

# A Polynomial over Gr(A) whose terms all share one degree.
HomogeneousPolynomial = Polynomial


@dataclass(frozen=True)
class GradedAlgebra:
    presentation: AlgebraPresentation
    source: AlgebraPresentation

    @property
    def n(self) -> int:
        return self.presentation.n


def degree(f: Polynomial):
    return f.degree()


def in_filtration(f: Polynomial, p: int) -> bool:
    """f lies in F_p(A), the span of the monomials of degree at most p."""
    return f.degree() <= p


def is_homogeneous(f: Polynomial) -> bool:
    return len({sum(alpha) for alpha in f._terms}) <= 1


GRADED_CACHE_SIZE = 32


@lru_cache(maxsize=GRADED_CACHE_SIZE)
def _graded_form(algebra: AlgebraPresentation) -> AlgebraPresentation:
    # quasi-commutative, so consistent whatever A is
    constants = {pair: algebra.c(*pair) for pair in algebra.pairs()}
    return AlgebraPresentation(algebra.field, algebra.var_names, constants, {})


def associated_graded(algebra: AlgebraPresentation) -> GradedAlgebra:
    """Gr(A): same field, variables and constants c, every remainder d set to 0."""
    algebra.require_consistent()
    return GradedAlgebra(_graded_form(algebra), algebra)


def graded_presentation(algebra: AlgebraPresentation) -> AlgebraPresentation:
    """The presentation symbols live in; needs no consistency check."""
    if algebra.is_quasi_commutative():
        return algebra
    return _graded_form(algebra)


def principal_symbol(f: Polynomial) -> HomogeneousPolynomial:
    """eta(f): the terms of maximal degree, read in Gr(A). eta(0) = 0."""
    target = graded_presentation(f.algebra)
    top = f.degree()
    if top == NEG_INFINITY:
        return target.zero()
    return Polynomial(target, {alpha: c for alpha, c in f._terms.items() if sum(alpha) == top})


def graded_component_basis(algebra: AlgebraPresentation, p: int) -> List[HomogeneousPolynomial]:
    """eta(x^alpha) for |alpha| = p: a basis of the degree-p component of Gr(A)."""
    if p < 0:
        return []
    target = graded_presentation(algebra)
    return [principal_symbol(algebra.monomial(alpha)) for alpha in exponents_of_degree(target.n, p)]


def symbol_of_product_check(algebra: AlgebraPresentation, alpha: Exponent, beta: Exponent) -> bool:
    """eta(x^alpha x^beta) == eta(x^alpha) eta(x^beta)."""
    left = principal_symbol(algebra.monomial(alpha) * algebra.monomial(beta))
    right = poly_mul(principal_symbol(algebra.monomial(alpha)), principal_symbol(algebra.monomial(beta)))
    return left == right


def symbol_lm_check(f: Polynomial, order: MonomialOrder) -> bool:
    """eta(lm(f)) == lm(eta(f)) under the induced order on Gr(A)."""
    _, lm = leading_term(f, order)
    _, graded_lm = leading_term(principal_symbol(f), induce_graded_order(order))
    return lm == graded_lm


def gr_ideal_generators(basis: GroebnerBasis) -> List[HomogeneousPolynomial]:
    """Symbols of a verified basis of I; they generate Gr(I) and form a basis of it."""
    if not basis.verified:
        raise UnverifiedBasisError("Gr(I) generators need a verified Gröbner basis of I")
    return [principal_symbol(g) for g in basis.generators]


def transfer_to_graded(basis: GroebnerBasis) -> GroebnerBasis:
    symbols = gr_ideal_generators(basis)
    graded_order = induce_graded_order(basis.order)
    presentation = graded_presentation(basis.algebra)
    if not is_groebner(symbols, graded_order):
        raise InternalAssertionError(
            "Symbols of a Gröbner basis failed to form a Gröbner basis of Gr(I)"
        )
    logger.info(f"Transferred {len(symbols)} generators to the associated graded algebra")
    return GroebnerBasis(
        tuple(symbols), graded_order, presentation, verified=True, reduced=basis.reduced
    )


def transfer_from_graded(
    graded: GroebnerBasis,
    lifts: Sequence[Polynomial],
    order: Optional[MonomialOrder] = None,
) -> GroebnerBasis:
    """Package lifts of a homogeneous basis of Gr(I) as a Gröbner basis of I.

    Each lift must lie in I; that cannot be checked here and is the caller's
    obligation. What is checked: the graded basis is verified and homogeneous,
    eta(lift_j) equals its j-th element, and the lifts pass is_groebner.
    """
    if not graded.verified:
        raise UnverifiedBasisError("The graded-side basis is not verified")
    lifts = list(lifts)
    if len(lifts) != len(graded.generators):
        raise TransferError(
            f"{len(lifts)} lifts given for {len(graded.generators)} graded generators"
        )
    if order is None:
        order = order_from_graded(graded.order)
    elif induce_graded_order(order) != graded.order:
        raise TransferError("The order does not induce the order of the graded basis")
    for index, (gbar, lift) in enumerate(zip(graded.generators, lifts)):
        if not is_homogeneous(gbar):
            raise TransferError(f"Graded generator {index + 1} ({gbar}) is not homogeneous")
        if principal_symbol(lift) != gbar:
            raise TransferError(
                f"Lift {index + 1} ({lift}) has symbol {principal_symbol(lift)}, expected {gbar}"
            )
    if not lifts:
        raise TransferError("No lifts given; the algebra of the lifted basis is unknown")
    if not is_groebner(lifts, order):
        raise TransferError("The lifts do not form a Gröbner basis; some lift lies outside the ideal")
    return GroebnerBasis(tuple(lifts), order, lifts[0].algebra, verified=True)


@dataclass(frozen=True)
class GapCertificate:
    """A symbol in Gr(<F>) together with its nonzero remainder modulo <eta(F)>."""

    element: HomogeneousPolynomial
    naive_remainder: Polynomial


@dataclass(frozen=True)
class GapReport:
    basis: GroebnerBasis
    graded_basis: GroebnerBasis
    naive_generators: Tuple[HomogeneousPolynomial, ...]
    naive_basis: GroebnerBasis
    certificates: Tuple[GapCertificate, ...]

    @property
    def gap_elements(self) -> List[HomogeneousPolynomial]:
        return [c.element for c in self.certificates]

    @property
    def has_gap(self) -> bool:
        return bool(self.certificates)

    def to_dict(self) -> Dict:
        order = self.graded_basis.order

        def show(f):
            return format_polynomial(f, order)

        return {
            "basis": [format_polynomial(g, self.basis.order) for g in self.basis],
            "graded_basis": [show(g) for g in self.graded_basis],
            "naive_generators": [show(g) for g in self.naive_generators],
            "naive_basis": [show(g) for g in self.naive_basis],
            "gap_elements": [show(g) for g in self.gap_elements],
            "certificates": [
                {
                    "element": show(c.element),
                    "in_graded_ideal": True,
                    "in_naive_ideal": False,
                    "naive_remainder": show(c.naive_remainder),
                }
                for c in self.certificates
            ],
        }

    def format(self) -> str:
        data = self.to_dict()
        lines = [
            "basis of I: {" + ", ".join(data["basis"]) + "}",
            "basis of Gr(I): {" + ", ".join(data["graded_basis"]) + "}",
            "symbols of the generators: {" + ", ".join(data["naive_generators"]) + "}",
            "basis of the ideal they generate: {" + ", ".join(data["naive_basis"]) + "}",
        ]
        if not self.certificates:
            lines.append("no gap: Gr(I) equals the ideal generated by the symbols")
        for certificate in data["certificates"]:
            lines.append(
                f"gap: {certificate['element']} is in Gr(I) but not in the ideal generated "
                f"by the symbols (remainder {certificate['naive_remainder']})"
            )
        return "\n".join(lines)


def naive_transfer_gap_demo(
    generators: Sequence[Polynomial], order: MonomialOrder, workers: int = 1
) -> GapReport:
    """Compare Gr(<F>) with the ideal generated by the symbols of F."""
    basis = buchberger(generators, order, workers=workers)
    graded_basis = transfer_to_graded(basis)
    naive_generators = tuple(principal_symbol(f) for f in generators if f)
    naive_basis = buchberger(
        naive_generators,
        graded_basis.order,
        workers=workers,
        algebra=graded_basis.algebra,
    )
    certificates = []
    for g in graded_basis.generators:
        member, trace = ideal_membership(g, naive_basis)
        if not member:
            certificates.append(GapCertificate(g, trace.remainder))
    if certificates:
        logger.info(f"Naive symbol transfer misses {len(certificates)} element(s) of Gr(I)")
    return GapReport(basis, graded_basis, naive_generators, naive_basis, tuple(certificates))
