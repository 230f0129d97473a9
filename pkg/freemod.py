"""Free left modules A^m: vector polynomials, submodule Gröbner bases, the degree
filtration on A^m and the transfer of module bases to Gr(A)^m."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import (
    NEG_INFINITY,
    AlgebraPresentation,
    Exponent,
    Polynomial,
    _accumulate,
    format_polynomial,
    poly_mul,
)
from errors import (
    AlgebraMismatchError,
    InternalAssertionError,
    TransferError,
    UnverifiedBasisError,
)
from field import Scalar, ScalarLike
from graded import graded_presentation, principal_symbol
from groebner import (
    GroebnerBasis,
    ReductionMode,
    ReductionTrace,
    _complete,
    _is_groebner,
    _reduce,
    _s_element,
    autoreduce,
    divides,
    ideal_membership,
)
from orders import (
    ModuleOrder,
    induce_graded_module_order,
    module_leading_term,
    module_order_from_graded,
)

logger = logging.getLogger("pbw-groebner.freemod")

ModuleMonomial = Tuple[int, Exponent]


class VectorPoly:
    """Element of A^m: a finite map (component, exponent) -> nonzero scalar."""

    __slots__ = ("algebra", "rank", "_terms")

    def __init__(
        self,
        algebra: AlgebraPresentation,
        rank: int,
        terms: Optional[Dict[ModuleMonomial, Scalar]] = None,
    ):
        if rank < 1:
            raise ValueError(f"A free module needs rank >= 1, got {rank}")
        self.algebra = algebra
        self.rank = rank
        self._terms: Dict[ModuleMonomial, Scalar] = {}
        for (component, alpha), c in (terms or {}).items():
            if not 0 <= component < rank:
                raise AlgebraMismatchError(f"Component {component} out of range for rank {rank}")
            if c:
                self._terms[(component, tuple(alpha))] = c

    @classmethod
    def zero(cls, algebra: AlgebraPresentation, rank: int) -> "VectorPoly":
        return cls(algebra, rank)

    @classmethod
    def from_components(cls, components: Sequence[Polynomial]) -> "VectorPoly":
        if not components:
            raise ValueError("A vector needs at least one component")
        algebra = components[0].algebra
        terms = {}
        for index, f in enumerate(components):
            if f.algebra != algebra:
                raise AlgebraMismatchError("Vector components belong to different algebras")
            for alpha, c in f._terms.items():
                terms[(index, alpha)] = c
        return cls(algebra, len(components), terms)

    def component(self, index: int) -> Polynomial:
        if not 0 <= index < self.rank:
            raise AlgebraMismatchError(f"Component {index} out of range for rank {self.rank}")
        return Polynomial(
            self.algebra, {alpha: c for (i, alpha), c in self._terms.items() if i == index}
        )

    def components(self) -> List[Polynomial]:
        return [self.component(i) for i in range(self.rank)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self):
        if not self._terms:
            return NEG_INFINITY
        return max(sum(alpha) for _, alpha in self._terms)

    def _peer(self, other) -> "VectorPoly":
        if not isinstance(other, VectorPoly):
            raise TypeError(f"Cannot combine VectorPoly with {type(other).__name__}")
        if other.rank != self.rank:
            raise AlgebraMismatchError(f"Vectors of rank {self.rank} and {other.rank}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatchError("Vectors belong to modules over different algebras")
        return other

    def __add__(self, other) -> "VectorPoly":
        other = self._peer(other)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            _accumulate(terms, key, c)
        return VectorPoly(self.algebra, self.rank, terms)

    def __neg__(self) -> "VectorPoly":
        return VectorPoly(self.algebra, self.rank, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "VectorPoly":
        return self + (-self._peer(other))

    def scale(self, c: ScalarLike) -> "VectorPoly":
        c = self.algebra.field(c)
        return VectorPoly(self.algebra, self.rank, {k: c * a for k, a in self._terms.items()})

    def __rmul__(self, other) -> "VectorPoly":
        if isinstance(other, Polynomial):
            return act(other, self)
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, VectorPoly):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.algebra == other.algebra
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self._terms.items())))

    def __str__(self):
        return format_vector(self)

    def __repr__(self):
        return f"VectorPoly({self})"


def format_vector(f: VectorPoly, order: Optional[ModuleOrder] = None) -> str:
    base = order.base if order is not None else None
    return "[" + ", ".join(format_polynomial(c, base) for c in f.components()) + "]"


def embed(f: Polynomial, index: int, rank: int) -> VectorPoly:
    """f e_index in A^rank."""
    if not 0 <= index < rank:
        raise AlgebraMismatchError(f"Component {index} out of range for rank {rank}")
    return VectorPoly(f.algebra, rank, {(index, alpha): c for alpha, c in f._terms.items()})


def act(a: Polynomial, f: VectorPoly) -> VectorPoly:
    """Left action a * f, componentwise poly_mul."""
    if a.algebra != f.algebra:
        raise AlgebraMismatchError("Scalar ring element and vector belong to different algebras")
    return VectorPoly.from_components([poly_mul(a, c) for c in f.components()])


def vec_add(f: VectorPoly, g: VectorPoly) -> VectorPoly:
    return f + g


def vec_scale(c: ScalarLike, f: VectorPoly) -> VectorPoly:
    return f.scale(c)


def module_degree(f: VectorPoly):
    return f.degree()


def module_in_filtration(f: VectorPoly, p: int) -> bool:
    """f lies in F_p(A^m)."""
    return f.degree() <= p


def module_symbol(f: VectorPoly) -> VectorPoly:
    """Top-degree terms of f across all components, read in Gr(A)^m."""
    target = graded_presentation(f.algebra)
    top = f.degree()
    terms = {
        (i, alpha): c for (i, alpha), c in f._terms.items() if sum(alpha) == top
    }
    return VectorPoly(target, f.rank, terms)


def is_homogeneous_vector(f: VectorPoly) -> bool:
    return len({sum(alpha) for _, alpha in f._terms}) <= 1


def graded_action_check(r: Polynomial, f: VectorPoly) -> bool:
    """eta(r) eta(f) == eta(r f) when deg(r f) = deg r + deg f, and 0 otherwise."""
    if r.is_zero() or f.is_zero():
        raise ValueError("graded_action_check needs nonzero inputs")
    left = act(principal_symbol(r), module_symbol(f))
    product = act(r, f)
    if product.degree() == r.degree() + f.degree():
        right = module_symbol(product)
    else:
        right = VectorPoly.zero(left.algebra, f.rank)
    return left == right


class VectorView:
    """Term operations for elements of A^m; monomials are (component, exponent)."""

    def __init__(self, order: ModuleOrder):
        self.order = order

    def lead(self, f: VectorPoly):
        return module_leading_term(f, self.order)

    def leading_part(self, f: VectorPoly) -> VectorPoly:
        c, monomial = self.lead(f)
        return VectorPoly(f.algebra, f.rank, {monomial: c})

    @staticmethod
    def exponent(monomial: ModuleMonomial) -> Exponent:
        return monomial[1]

    @staticmethod
    def quotient(divisor: ModuleMonomial, target: ModuleMonomial) -> Optional[Exponent]:
        if divisor[0] != target[0]:
            return None
        return divides(divisor[1], target[1])

    @staticmethod
    def lcm(first: ModuleMonomial, second: ModuleMonomial) -> Optional[ModuleMonomial]:
        if first[0] != second[0]:
            return None
        return first[0], tuple(max(a, b) for a, b in zip(first[1], second[1]))

    @staticmethod
    def coprime(first, second) -> bool:
        return False

    @staticmethod
    def shift(gamma: Exponent, g: VectorPoly) -> VectorPoly:
        return act(g.algebra.monomial(gamma), g)

    @staticmethod
    def act(q: Polynomial, g: VectorPoly) -> VectorPoly:
        return act(q, g)

    @staticmethod
    def zero_like(f: VectorPoly) -> VectorPoly:
        return VectorPoly.zero(f.algebra, f.rank)

    def format(self, f: VectorPoly) -> str:
        return format_vector(f, self.order)

    def format_cofactor(self, q: Polynomial) -> str:
        return format_polynomial(q, self.order.base)


@dataclass(frozen=True)
class ModuleGroebnerBasis(GroebnerBasis):
    """Gröbner basis of a left submodule of A^m under a ModuleOrder."""

    def __post_init__(self):
        if self.view is None:
            object.__setattr__(self, "view", VectorView(self.order))

    @property
    def rank(self) -> int:
        return self.order.rank


def _check_vectors(vectors: Sequence[VectorPoly], order: ModuleOrder):
    for f in vectors:
        if f.rank != order.rank:
            raise AlgebraMismatchError(
                f"Vector of rank {f.rank} used with a module order of rank {order.rank}"
            )


def module_reduce(
    f: VectorPoly,
    divisors: Sequence[VectorPoly],
    order: ModuleOrder,
    mode: ReductionMode = ReductionMode.FULL,
) -> ReductionTrace:
    """Left division in A^m; a divisor applies only within its leading component."""
    _check_vectors([f, *divisors], order)
    return _reduce(VectorView(order), f, list(divisors), mode)


def module_s_vector(f: VectorPoly, g: VectorPoly, order: ModuleOrder) -> Optional[VectorPoly]:
    """S-vector of f and g, or None when their leading components differ."""
    _check_vectors([f, g], order)
    return _s_element(VectorView(order), f, g)


def module_buchberger(
    generators: Sequence[VectorPoly],
    order: ModuleOrder,
    workers: int = 1,
    reduced: bool = True,
    algebra: Optional[AlgebraPresentation] = None,
) -> ModuleGroebnerBasis:
    """Verified Gröbner basis of the left submodule generated by generators."""
    _check_vectors(generators, order)
    nonzero = [g for g in generators if g]
    if algebra is None:
        if not generators:
            raise ValueError("module_buchberger needs at least one generator or an explicit algebra")
        algebra = generators[0].algebra
    if not nonzero:
        return ModuleGroebnerBasis((), order, algebra, verified=True, reduced=True)
    algebra.require_consistent()
    basis = _complete(VectorView(order), nonzero, workers)
    result = ModuleGroebnerBasis(tuple(basis), order, algebra, verified=True)
    return autoreduce(result) if reduced else result


def module_autoreduce(basis: ModuleGroebnerBasis) -> ModuleGroebnerBasis:
    return autoreduce(basis)


def is_module_groebner(generators: Sequence[VectorPoly], order: ModuleOrder) -> bool:
    _check_vectors(generators, order)
    return _is_groebner(VectorView(order), [g for g in generators if g])


def module_membership(
    f: VectorPoly, basis: ModuleGroebnerBasis
) -> Tuple[bool, ReductionTrace]:
    _check_vectors([f], basis.order)
    return ideal_membership(f, basis)


def module_transfer_to_graded(basis: ModuleGroebnerBasis) -> ModuleGroebnerBasis:
    """Symbols of a verified module basis, a Gröbner basis of Gr(M) in Gr(A)^m."""
    if not basis.verified:
        raise UnverifiedBasisError("Module transfer needs a verified Gröbner basis")
    symbols = [module_symbol(g) for g in basis.generators]
    graded_order = induce_graded_module_order(basis.order)
    if not _is_groebner(VectorView(graded_order), symbols):
        raise InternalAssertionError(
            "Symbols of a module Gröbner basis failed to form a Gröbner basis of Gr(M)"
        )
    presentation = graded_presentation(basis.algebra)
    logger.info(f"Transferred {len(symbols)} module generators to Gr(A)^{basis.rank}")
    return ModuleGroebnerBasis(
        tuple(symbols), graded_order, presentation, verified=True, reduced=basis.reduced
    )


def module_transfer_from_graded(
    graded: ModuleGroebnerBasis,
    lifts: Sequence[VectorPoly],
    order: Optional[ModuleOrder] = None,
) -> ModuleGroebnerBasis:
    """Package lifts of a homogeneous basis of Gr(M); each lift must lie in M."""
    if not graded.verified:
        raise UnverifiedBasisError("The graded-side module basis is not verified")
    lifts = list(lifts)
    if not lifts or len(lifts) != len(graded.generators):
        raise TransferError(
            f"{len(lifts)} lifts given for {len(graded.generators)} graded generators"
        )
    if order is None:
        order = module_order_from_graded(graded.order)
    elif induce_graded_module_order(order) != graded.order:
        raise TransferError("The module order does not induce the order of the graded basis")
    _check_vectors(lifts, order)
    for index, (gbar, lift) in enumerate(zip(graded.generators, lifts)):
        if not is_homogeneous_vector(gbar):
            raise TransferError(f"Graded generator {index + 1} ({gbar}) is not homogeneous")
        if module_symbol(lift) != gbar:
            raise TransferError(
                f"Lift {index + 1} ({lift}) has symbol {module_symbol(lift)}, expected {gbar}"
            )
    if not _is_groebner(VectorView(order), lifts):
        raise TransferError("The lifts do not form a Gröbner basis; some lift lies outside M")
    return ModuleGroebnerBasis(tuple(lifts), order, lifts[0].algebra, verified=True)
