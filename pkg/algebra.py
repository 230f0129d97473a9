"""Bijective skew PBW extensions over a field: presentations, PBW-basis polynomials
and the rewriting that keeps products in normal form."""

import logging
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from errors import (
    AlgebraMismatchError,
    InconsistentPresentationError,
    InternalAssertionError,
    PresentationError,
)
from field import FieldSpec, Scalar, ScalarLike

logger = logging.getLogger("pbw-groebner.algebra")

Exponent = Tuple[int, ...]
Word = Tuple[int, ...]
Terms = Dict[Exponent, Scalar]
Strategy = Union[None, str, random.Random]

NEG_INFINITY = float("-inf")


def canonical_key(alpha: Exponent):
    """Sort key of the storage order (degrevlex, x1 > x2 > ... > xn)."""
    return (sum(alpha), tuple(-a for a in reversed(alpha)))


def word_exponent(word: Sequence[int], n: int) -> Exponent:
    counts = [0] * n
    for letter in word:
        counts[letter] += 1
    return tuple(counts)


def exponent_word(alpha: Exponent) -> Word:
    return tuple(i for i, a in enumerate(alpha) for _ in range(a))


def unit_exponent(n: int, i: int) -> Exponent:
    return tuple(1 if k == i else 0 for k in range(n))


def add_exponents(alpha: Exponent, beta: Exponent) -> Exponent:
    return tuple(a + b for a, b in zip(alpha, beta))


def exponents_of_degree(n: int, p: int) -> List[Exponent]:
    """All alpha in N^n with |alpha| = p, in canonical order (greatest first)."""
    found = {word_exponent(word, n) for word in combinations_with_replacement(range(n), p)}
    return sorted(found, key=canonical_key, reverse=True)


def _accumulate(target: Dict, key, coefficient: Scalar):
    total = target.get(key)
    total = coefficient if total is None else total + coefficient
    if total:
        target[key] = total
    else:
        target.pop(key, None)


@dataclass(frozen=True)
class LinearRemainder:
    """The element d = a_1 x_1 + ... + a_n x_n + a_0 of a relation x_j x_i = c x_i x_j + d."""

    coeffs: Tuple[Tuple[int, Scalar], ...]
    constant: Scalar

    @classmethod
    def build(
        cls,
        field: FieldSpec,
        coeffs: Optional[Mapping[int, ScalarLike]] = None,
        constant: ScalarLike = 0,
    ) -> "LinearRemainder":
        cleaned = {}
        for index, value in (coeffs or {}).items():
            scalar = field(value)
            if scalar:
                cleaned[index] = scalar
        return cls(tuple(sorted(cleaned.items())), field(constant))

    def is_zero(self) -> bool:
        return not self.coeffs and not self.constant

    def degree(self):
        if self.coeffs:
            return 1
        return 0 if self.constant else NEG_INFINITY


@dataclass(frozen=True)
class ProductData:
    """x^alpha x^beta = c_ab x^(alpha+beta) + tail."""

    c_ab: Scalar
    tail: "Polynomial"


@dataclass(frozen=True)
class OverlapFailure:
    """A cubic overlap x_k x_j x_i whose two resolutions disagree."""

    triple: Tuple[int, int, int]
    names: Tuple[str, str, str]
    first: "Polynomial"
    second: "Polynomial"

    @property
    def difference(self) -> "Polynomial":
        return self.first - self.second

    def describe(self) -> str:
        i, j, k = self.names
        return (
            f"overlap {k}*{j}*{i}: ({k}*{j})*{i} -> {self.first}; "
            f"{k}*({j}*{i}) -> {self.second}; difference {self.difference}"
        )


class AlgebraPresentation:
    """Finite data of a bijective skew PBW extension of a field.

    For each pair i < j the relation x_j x_i = c[i][j] x_i x_j + d[i][j] holds,
    with c[i][j] nonzero and d[i][j] of degree at most one. Instances are
    immutable; product tables are memoized on first use.
    """

    # entries per memo table before it is cleared
    cache_limit = 200_000

    def __init__(
        self,
        field: FieldSpec,
        var_names: Sequence[str],
        constants: Mapping[Tuple[int, int], Scalar],
        remainders: Mapping[Tuple[int, int], LinearRemainder],
    ):
        self.field = field
        self.var_names = tuple(var_names)
        self.n = len(self.var_names)
        zero_remainder = LinearRemainder.build(field)
        self._c = {}
        self._d = {}
        for pair in combinations(range(self.n), 2):
            self._c[pair] = constants.get(pair, field.one)
            self._d[pair] = remainders.get(pair, zero_remainder)
        self._index = {name: i for i, name in enumerate(self.var_names)}
        self._zero_exponent = (0,) * self.n
        self._left_cache: Dict[Tuple[int, Exponent], Terms] = {}
        self._product_cache: Dict[Tuple[Exponent, Exponent], Terms] = {}
        self._failures: Optional[List[OverlapFailure]] = None
        self._lock = threading.RLock()

    def _key(self):
        return (
            self.field,
            self.var_names,
            tuple(self._c.items()),
            tuple(self._d.items()),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"AlgebraPresentation({self.field}, {list(self.var_names)})"

    # ----- relation data -----

    def c(self, i: int, j: int) -> Scalar:
        """The constant c_{i,j} (i < j)."""
        return self._c[(i, j)]

    def d(self, i: int, j: int) -> LinearRemainder:
        """The linear remainder d_{i,j} (i < j)."""
        return self._d[(i, j)]

    def pairs(self) -> List[Tuple[int, int]]:
        return list(self._c)

    def index_of(self, name: Union[str, int]) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.n:
                raise PresentationError(f"Variable index {name} out of range")
            return name
        try:
            return self._index[name]
        except KeyError:
            raise PresentationError(f"Unknown variable name: {name}") from None

    def is_quasi_commutative(self) -> bool:
        return all(d.is_zero() for d in self._d.values())

    def is_commutative(self) -> bool:
        return self.is_quasi_commutative() and all(c.is_one() for c in self._c.values())

    def is_bijective(self) -> bool:
        return all(c for c in self._c.values())

    # ----- element constructors -----

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, value: ScalarLike) -> "Polynomial":
        return Polynomial(self, {self._zero_exponent: self.field(value)})

    def variable(self, name: Union[str, int]) -> "Polynomial":
        return self.monomial(unit_exponent(self.n, self.index_of(name)))

    def monomial(self, alpha: Sequence[int], coefficient: ScalarLike = 1) -> "Polynomial":
        return Polynomial(self, {self._exponent(alpha): self.field(coefficient)})

    def polynomial(self, terms: Mapping[Sequence[int], ScalarLike]) -> "Polynomial":
        """Build a polynomial from an exponent -> coefficient mapping."""
        collected: Terms = {}
        for alpha, value in terms.items():
            _accumulate(collected, self._exponent(alpha), self.field(value))
        return Polynomial(self, collected)

    def _exponent(self, alpha: Sequence[int]) -> Exponent:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.n or any(a < 0 for a in alpha):
            raise PresentationError(
                f"Exponent {alpha} is not in N^{self.n} for this presentation"
            )
        return alpha

    # ----- rewriting -----

    def _remember(self, cache: Dict, key, result: Terms):
        with self._lock:
            if len(cache) >= self.cache_limit:
                logger.debug(f"Clearing a memo table of {len(cache)} entries for {self!r}")
                cache.clear()
            cache[key] = result

    def cache_size(self) -> int:
        """Number of memoized normal forms currently held."""
        with self._lock:
            return len(self._left_cache) + len(self._product_cache)


    def _left_variable(self, k: int, beta: Exponent) -> Terms:
        """Normal form of x_k * x^beta."""
        key = (k, beta)
        cached = self._left_cache.get(key)
        if cached is not None:
            return cached
        i = next((t for t, b in enumerate(beta) if b), None)
        if i is None or i >= k:
            result = {tuple(b + (t == k) for t, b in enumerate(beta)): self.field.one}
        else:
            # x_k x_i x^rest = c_ik x_i (x_k x^rest) + d_ik x^rest
            rest = tuple(b - (t == i) for t, b in enumerate(beta))
            result = {}
            c = self._c[(i, k)]
            for delta, coef in self._left_variable(k, rest).items():
                for eps, coef2 in self._left_variable(i, delta).items():
                    _accumulate(result, eps, c * coef * coef2)
            d = self._d[(i, k)]
            for t, coef in d.coeffs:
                for eps, coef2 in self._left_variable(t, rest).items():
                    _accumulate(result, eps, coef * coef2)
            if d.constant:
                _accumulate(result, rest, d.constant)
        self._remember(self._left_cache, key, result)
        return result

    def _product(self, alpha: Exponent, beta: Exponent) -> Terms:
        """Normal form of x^alpha * x^beta."""
        key = (alpha, beta)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        last = max((t for t, a in enumerate(alpha) if a), default=None)
        first = next((t for t, b in enumerate(beta) if b), None)
        if last is None or first is None or last <= first:
            result = {add_exponents(alpha, beta): self.field.one}
        else:
            head = tuple(a - (t == last) for t, a in enumerate(alpha))
            result = {}
            for delta, coef in self._left_variable(last, beta).items():
                for eps, coef2 in self._product(head, delta).items():
                    _accumulate(result, eps, coef * coef2)
        self._remember(self._product_cache, key, result)
        return result

    def _rewrite_word(self, word: Word, choose: Callable[[List[int]], int]) -> Terms:
        """Rewrite a word by adjacent descending pairs, picking positions with choose."""
        pending: Dict[Word, Scalar] = {tuple(word): self.field.one}
        result: Terms = {}
        while pending:
            current, coef = pending.popitem()
            descents = [p for p in range(len(current) - 1) if current[p] > current[p + 1]]
            if not descents:
                _accumulate(result, word_exponent(current, self.n), coef)
                continue
            p = choose(descents)
            j, i = current[p], current[p + 1]
            head, tail = current[:p], current[p + 2 :]
            _accumulate(pending, head + (i, j) + tail, coef * self._c[(i, j)])
            d = self._d[(i, j)]
            for t, a in d.coeffs:
                _accumulate(pending, head + (t,) + tail, coef * a)
            if d.constant:
                _accumulate(pending, head + tail, coef * d.constant)
        return result

    def _normal_form(self, word: Sequence[int]) -> Terms:
        current: Terms = {self._zero_exponent: self.field.one}
        for letter in word:
            step = unit_exponent(self.n, letter)
            following: Terms = {}
            for alpha, coef in current.items():
                for eps, coef2 in self._product(alpha, step).items():
                    _accumulate(following, eps, coef * coef2)
            current = following
        return current

    # ----- consistency -----

    def overlap_failures(self) -> List[OverlapFailure]:
        """Cubic overlaps x_k x_j x_i (i < j < k) whose two resolutions differ."""
        if self._failures is not None:
            return list(self._failures)
        failures = []
        for i, j, k in combinations(range(self.n), 3):
            # (x_k x_j) x_i versus x_k (x_j x_i)
            first = self._resolve(self._c[(j, k)], (j, k, i), self._d[(j, k)], (), (i,))
            second = self._resolve(self._c[(i, j)], (k, i, j), self._d[(i, j)], (k,), ())
            if first != second:
                names = (self.var_names[i], self.var_names[j], self.var_names[k])
                failure = OverlapFailure((i, j, k), names, first, second)
                logger.debug(failure.describe())
                failures.append(failure)
        with self._lock:
            self._failures = failures
        return list(failures)

    def _resolve(
        self, c: Scalar, word: Word, d: LinearRemainder, prefix: Word, suffix: Word
    ) -> "Polynomial":
        """Normal form of c * word + prefix * d * suffix."""
        result = Polynomial(self, self._normal_form(word)).scale(c)
        for t, a in d.coeffs:
            result = result + Polynomial(self, self._normal_form(prefix + (t,) + suffix)).scale(a)
        if d.constant:
            result = result + Polynomial(self, self._normal_form(prefix + suffix)).scale(d.constant)
        return result

    def is_consistent(self) -> bool:
        return not self.overlap_failures()

    def require_consistent(self):
        failures = self.overlap_failures()
        if failures:
            raise InconsistentPresentationError(failures)

    # ----- text form -----

    def to_text(self) -> str:
        """Presentation-file text for this algebra."""
        if self.field.is_prime_field:
            field_line = f"field GF {self.field.characteristic}"
        else:
            field_line = "field QQ"
        lines = [field_line, "vars " + " ".join(self.var_names)]
        for (i, j), c in self._c.items():
            d = self._d[(i, j)]
            if c.is_one() and d.is_zero():
                continue
            rhs = self.polynomial(_relation_terms(self.n, i, j, c, d))
            lines.append(f"rel {self.var_names[j]}*{self.var_names[i]} = {rhs}")
        return "\n".join(lines) + "\n"


def _relation_terms(n: int, i: int, j: int, c: Scalar, d: LinearRemainder) -> Terms:
    terms: Terms = {add_exponents(unit_exponent(n, i), unit_exponent(n, j)): c}
    for t, a in d.coeffs:
        terms[unit_exponent(n, t)] = a
    if d.constant:
        terms[(0,) * n] = d.constant
    return terms


class Polynomial:
    """Element of A in the PBW basis: a finite map exponent -> nonzero scalar."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: AlgebraPresentation, terms: Mapping[Exponent, Scalar]):
        self.algebra = algebra
        self._terms: Terms = {alpha: c for alpha, c in terms.items() if c}

    # ----- inspection -----

    def terms(self) -> List[Tuple[Exponent, Scalar]]:
        """Terms in the canonical (degrevlex) order, greatest first."""
        return sorted(self._terms.items(), key=lambda t: canonical_key(t[0]), reverse=True)

    def exponents(self) -> List[Exponent]:
        return [alpha for alpha, _ in self.terms()]

    def coefficient(self, alpha: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(alpha), self.algebra.field.zero)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self):
        """Total degree; NEG_INFINITY for the zero polynomial."""
        if not self._terms:
            return NEG_INFINITY
        return max(sum(alpha) for alpha in self._terms)

    def is_constant(self) -> bool:
        return all(not any(alpha) for alpha in self._terms)

    # ----- arithmetic -----

    def _peer(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise AlgebraMismatchError("Polynomials belong to different algebras")
            return other
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            return self.algebra.constant(other)
        raise TypeError(f"Cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._peer(other)
        terms = dict(self._terms)
        for alpha, c in other._terms.items():
            _accumulate(terms, alpha, c)
        return Polynomial(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.algebra, {alpha: -c for alpha, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._peer(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._peer(other) - self

    def scale(self, c: ScalarLike) -> "Polynomial":
        c = self.algebra.field(c)
        if not c:
            return self.algebra.zero()
        return Polynomial(self.algebra, {alpha: c * a for alpha, a in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "Polynomial":
        # scalars are central
        return self.scale(other)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("Negative powers are not defined")
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            other = self.algebra.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.algebra == other.algebra and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def format_monomial(alpha: Exponent, names: Sequence[str]) -> str:
    parts = [name if a == 1 else f"{name}^{a}" for name, a in zip(names, alpha) if a]
    return "*".join(parts)


def format_polynomial(f: Polynomial, order=None) -> str:
    """Canonical text: terms descending under order (storage order if None)."""
    if f.is_zero():
        return "0"
    if order is None:
        ordered = f.terms()
    else:
        ordered = sorted(f._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
    names = f.algebra.var_names
    signed = not f.algebra.field.is_prime_field
    pieces = []
    for position, (alpha, c) in enumerate(ordered):
        negative = signed and c.value < 0
        magnitude = str(-c.value if negative else c.value)
        monomial = format_monomial(alpha, names)
        if not monomial:
            body = magnitude
        elif magnitude == "1":
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def make_presentation(
    field: FieldSpec,
    var_names: Sequence[str],
    relations: Iterable[Tuple] = (),
) -> AlgebraPresentation:
    """Build a presentation from relations (j, i, c, d) meaning x_j x_i = c x_i x_j + d.

    j and i are names or indices with index(j) > index(i). d may be a
    LinearRemainder, a scalar (constant remainder), or a mapping whose keys are
    variable names/indices (linear coefficients), None (constant) or exponent
    tuples of degree at most one. Unmentioned pairs commute.
    """
    names = tuple(var_names)
    if any(not isinstance(name, str) or not name for name in names):
        raise PresentationError("Variable names must be nonempty strings")
    if len(set(names)) != len(names):
        raise PresentationError(f"Variable names are not distinct: {list(names)}")
    index = {name: i for i, name in enumerate(names)}

    def resolve(name) -> int:
        if isinstance(name, int) and not isinstance(name, bool):
            if not 0 <= name < len(names):
                raise PresentationError(f"Variable index {name} out of range")
            return name
        if name not in index:
            raise PresentationError(f"Unknown variable name: {name}")
        return index[name]

    constants: Dict[Tuple[int, int], Scalar] = {}
    remainders: Dict[Tuple[int, int], LinearRemainder] = {}
    for relation in relations:
        j_name, i_name, c_value, d_value = relation
        j, i = resolve(j_name), resolve(i_name)
        if not j > i:
            raise PresentationError(
                f"Relation {names[j]}*{names[i]} must rewrite a descending pair (j after i)"
            )
        if (i, j) in constants:
            raise PresentationError(f"Duplicate relation for pair {names[j]}*{names[i]}")
        c = field(c_value)
        if not c:
            raise PresentationError(
                f"Relation {names[j]}*{names[i]} has c = 0; c_ij must be invertible"
            )
        constants[(i, j)] = c
        remainders[(i, j)] = _as_remainder(field, len(names), d_value, resolve, names[j], names[i])

    algebra = AlgebraPresentation(field, names, constants, remainders)
    failures = algebra.overlap_failures()
    if failures:
        logger.warning(
            f"Presentation over {field} with variables {list(names)} fails "
            f"{len(failures)} overlap check(s); Gröbner computations will be refused"
        )
    return algebra


def _as_remainder(field, n, value, resolve, j_name, i_name) -> LinearRemainder:
    if value is None:
        return LinearRemainder.build(field)
    if isinstance(value, LinearRemainder):
        return value
    if not isinstance(value, Mapping):
        return LinearRemainder.build(field, constant=value)
    coeffs: Dict[int, Scalar] = {}
    constant = field.zero
    for key, raw in value.items():
        scalar = field(raw)
        if not scalar:
            continue
        if key is None:
            constant = constant + scalar
        elif isinstance(key, tuple):
            if len(key) != n or sum(key) > 1 or any(a < 0 for a in key):
                raise PresentationError(
                    f"Relation {j_name}*{i_name}: remainder term {key} is not linear"
                )
            if sum(key) == 0:
                constant = constant + scalar
            else:
                t = key.index(1)
                coeffs[t] = coeffs.get(t, field.zero) + scalar
        else:
            t = resolve(key)
            coeffs[t] = coeffs.get(t, field.zero) + scalar
    return LinearRemainder.build(field, coeffs, constant)


def is_quasi_commutative(algebra: AlgebraPresentation) -> bool:
    return algebra.is_quasi_commutative()


def normalize_word(
    algebra: AlgebraPresentation, word: Sequence[int], strategy: Strategy = None
) -> Polynomial:
    """Basis expansion of the product of the listed variables.

    strategy None uses the memoized product tables; "leftmost", "rightmost" or a
    random.Random instance rewrite adjacent descending pairs literally, picking
    the leftmost, rightmost or a random descent at every step.
    """
    letters = tuple(algebra.index_of(letter) for letter in word)
    if strategy is None:
        return Polynomial(algebra, algebra._normal_form(letters))
    if strategy == "leftmost":
        choose = min
    elif strategy == "rightmost":
        choose = max
    elif isinstance(strategy, random.Random):
        choose = strategy.choice
    else:
        raise ValueError(f"Unknown rewriting strategy: {strategy!r}")
    return Polynomial(algebra, algebra._rewrite_word(letters, choose))


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_scale(c: ScalarLike, f: Polynomial) -> Polynomial:
    return f.scale(c)


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    """Ring product f*g expanded in the PBW basis."""
    algebra = f.algebra
    f._peer(g)
    result: Terms = {}
    for alpha, a in f._terms.items():
        for beta, b in g._terms.items():
            ab = a * b
            for eps, c in algebra._product(alpha, beta).items():
                _accumulate(result, eps, ab * c)
    return Polynomial(algebra, result)


def monomial_product_data(
    algebra: AlgebraPresentation, alpha: Sequence[int], beta: Sequence[int]
) -> ProductData:
    """The pair (c_ab, p_ab) with x^alpha x^beta = c_ab x^(alpha+beta) + p_ab."""
    alpha, beta = algebra._exponent(alpha), algebra._exponent(beta)
    terms = dict(algebra._product(alpha, beta))
    top = add_exponents(alpha, beta)
    c_ab = terms.pop(top, algebra.field.zero)
    if not c_ab:
        # the top coefficient is a product of nonzero c_ij
        raise InternalAssertionError(f"c_ab vanished for {alpha} * {beta}")
    return ProductData(c_ab, Polynomial(algebra, terms))


def consistency_check(algebra: AlgebraPresentation) -> List[OverlapFailure]:
    return algebra.overlap_failures()
