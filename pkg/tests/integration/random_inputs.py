"""Seeded random inputs shared by the randomized acceptance suites."""

import random
from pathlib import Path

from algebra import exponents_of_degree
from exprparse import read_presentation
from freemod import VectorPoly

CORPUS = Path(__file__).resolve().parents[2] / "corpus"


def load(name):
    return read_presentation(CORPUS / f"{name}.alg")


def monomials_up_to(n, degree):
    return [alpha for p in range(degree + 1) for alpha in exponents_of_degree(n, p)]


def random_coefficient(rng, algebra):
    while True:
        value = algebra.field(rng.randint(-3, 3))
        if value:
            return value


def random_polynomial(rng, algebra, degree=3, max_terms=3):
    """A nonzero polynomial with at most max_terms terms of degree at most degree."""
    monomials = monomials_up_to(algebra.n, degree)
    monomials.remove((0,) * algebra.n)
    chosen = rng.sample(monomials, rng.randint(1, min(max_terms, len(monomials))))
    if rng.random() < 0.5:
        chosen.append((0,) * algebra.n)
    return algebra.polynomial({alpha: random_coefficient(rng, algebra) for alpha in chosen})


def random_generators(rng, algebra, degree=3, max_terms=3):
    return [random_polynomial(rng, algebra, degree, max_terms) for _ in range(rng.randint(2, 3))]


def random_lower_multiplier(rng, algebra, bound):
    """A random monomial times a scalar with degree strictly below bound, or None."""
    if bound <= 0:
        return None
    alpha = rng.choice(monomials_up_to(algebra.n, bound - 1))
    return algebra.monomial(alpha, random_coefficient(rng, algebra))


PERTURB_TERMS = 3


def extend_with_multiple(rng, generators):
    """Append x^gamma * g for a random generator g and gamma != 0.

    The span is unchanged and the new element has a strictly larger degree than g,
    so perturb always finds something below it.
    """
    g = rng.choice(list(generators))
    shifts = [alpha for alpha in monomials_up_to(g.algebra.n, 2) if sum(alpha)]
    return list(generators) + [g.algebra.monomial(rng.choice(shifts)) * g]


def perturb(rng, generators):
    """Add to each element a random sum of terms c*x^gamma*h of strictly lower degree.

    Every h is taken from generators, so the result spans the same left ideal or
    submodule and keeps every principal symbol. Returns the perturbed list and the
    number of elements that changed.
    """
    perturbed = []
    changed = 0
    for g in generators:
        lower = [h for h in generators if h.degree() < g.degree()]
        lift = g
        budget = rng.randint(1, PERTURB_TERMS) if lower else 0
        while lower and (budget > 0 or lift == g):
            h = rng.choice(lower)
            r = random_lower_multiplier(rng, g.algebra, g.degree() - h.degree())
            lift = lift + r * h
            budget -= 1
        changed += lift != g
        perturbed.append(lift)
    return perturbed, changed


def random_vector(rng, algebra, rank, degree=2, max_terms=2):
    components = []
    for _ in range(rank):
        if rng.random() < 0.3:
            components.append(algebra.zero())
        else:
            components.append(random_polynomial(rng, algebra, degree, max_terms))
    if all(c.is_zero() for c in components):
        components[rng.randrange(rank)] = random_polynomial(rng, algebra, degree, max_terms)
    return VectorPoly.from_components(components)
