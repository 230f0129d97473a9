import pytest

from algebra import make_presentation
from errors import InconsistentPresentationError, UnverifiedBasisError
from field import FieldSpec
from groebner import (
    GroebnerBasis,
    PolynomialView,
    ReductionMode,
    autoreduce,
    buchberger,
    format_trace,
    ideal_membership,
    is_groebner,
    normal_form,
    reduce,
    s_polynomial,
)
from orders import MonomialOrder

QQ = FieldSpec.rationals()
DEGLEX2 = MonomialOrder.deglex(2)
DEGLEX4 = MonomialOrder.deglex(4)


def make_commutative():
    return make_presentation(QQ, ["x", "y"])


def make_weyl():
    return make_presentation(QQ, ["x", "y"], [("y", "x", 1, 1)])


def make_weyl2():
    return make_presentation(
        QQ, ["x1", "x2", "y1", "y2"], [("y1", "x1", 1, 1), ("y2", "x2", 1, 1)]
    )


def make_qplane():
    return make_presentation(QQ, ["x", "y"], [("y", "x", 2, None)])


def weyl2_generators(algebra):
    x1, x2, y1 = (algebra.variable(name) for name in ("x1", "x2", "y1"))
    return x1 * y1, x2 * y1 * y1 - y1


def test_weyl_counterexample_basis_is_y1():
    algebra = make_weyl2()
    basis = buchberger(weyl2_generators(algebra), DEGLEX4)
    assert basis.generators == (algebra.variable("y1"),)
    assert basis.verified and basis.reduced
    assert basis.format() == "{y1}"


def test_weyl_counterexample_certificate():
    algebra = make_weyl2()
    f1, f2 = weyl2_generators(algebra)
    assert f2 * f1 - (f1 + 2) * f2 == algebra.variable("y1")


def test_membership_of_y1_comes_with_cofactors():
    algebra = make_weyl2()
    basis = buchberger(weyl2_generators(algebra), DEGLEX4)
    y1 = algebra.variable("y1")
    member, trace = ideal_membership(y1 * y1 + algebra.variable("x2") * y1, basis)
    assert member
    assert trace.verify(y1 * y1 + algebra.variable("x2") * y1, basis.generators)


def test_commutative_reduced_basis():
    algebra = make_commutative()
    x, y = algebra.variable("x"), algebra.variable("y")
    basis = buchberger([x * x - y, x * y - 1], DEGLEX2)
    assert basis.generators == (y * y - x, x * y - 1, x * x - y)
    assert basis.format() == "{y^2 - x, x*y - 1, x^2 - y}"


def test_reduction_respects_left_multiplication():
    algebra = make_weyl()
    x, y = algebra.variable("x"), algebra.variable("y")
    trace = reduce(x * y + 1, [y], DEGLEX2)
    assert trace.remainder == 1
    assert trace.cofactors == (x,)
    trace = reduce(x * y + 1, [x], DEGLEX2)
    assert trace.remainder.is_zero()
    assert trace.cofactors == (y,)


def test_top_reduction_stops_at_irreducible_leading_term():
    algebra = make_commutative()
    x, y = algebra.variable("x"), algebra.variable("y")
    trace = reduce(y * y + x, [x], DEGLEX2, ReductionMode.TOP)
    assert trace.remainder == y * y + x
    trace = reduce(y * y + x, [x], DEGLEX2, ReductionMode.FULL)
    assert trace.remainder == y * y


def test_reducing_a_divisor_by_itself_gives_zero():
    algebra = make_qplane()
    g = algebra.variable("y") * algebra.variable("x") + algebra.variable("y")
    assert reduce(g, [g], DEGLEX2).remainder.is_zero()


def test_quantum_plane_s_polynomial_is_not_trivial_for_coprime_leads():
    algebra = make_qplane()
    x, y = algebra.variable("x"), algebra.variable("y")
    s = s_polynomial(x + 1, y + 1, DEGLEX2)
    assert s == y.scale("1/2") - x
    assert reduce(s, [x + 1, y + 1], DEGLEX2).remainder == QQ("1/2")
    assert not is_groebner([x + 1, y + 1], DEGLEX2)
    assert buchberger([x + 1, y + 1], DEGLEX2).generators == (algebra.one(),)


def test_coprime_leads_commute_in_the_commutative_case():
    algebra = make_commutative()
    x, y = algebra.variable("x"), algebra.variable("y")
    assert is_groebner([x + 1, y + 1], DEGLEX2)


def test_weyl_variables_generate_the_unit_ideal():
    algebra = make_weyl()
    basis = buchberger([algebra.variable("x"), algebra.variable("y")], DEGLEX2)
    assert basis.generators == (algebra.one(),)


def test_singleton_is_a_basis_and_is_made_monic():
    algebra = make_weyl()
    x, y = algebra.variable("x"), algebra.variable("y")
    basis = buchberger([(x * y + x).scale(3)], DEGLEX2)
    assert basis.generators == (x * y + x,)


def test_worker_count_does_not_change_the_result():
    algebra = make_weyl2()
    x1, x2, y1, y2 = (algebra.variable(n) for n in ("x1", "x2", "y1", "y2"))
    generators = [x1 * y2 + y1, x2 * y1 * y1 - x1, y2 * y2 + x2]
    serial = buchberger(generators, DEGLEX4, workers=1)
    parallel = buchberger(generators, DEGLEX4, workers=4)
    assert serial.generators == parallel.generators


def test_unverified_bases_are_refused():
    algebra = make_commutative()
    x, y = algebra.variable("x"), algebra.variable("y")
    unverified = GroebnerBasis((x * x - y, x * y - 1), DEGLEX2, algebra)
    with pytest.raises(UnverifiedBasisError):
        autoreduce(unverified)
    with pytest.raises(UnverifiedBasisError):
        ideal_membership(x, unverified)
    assert not GroebnerBasis.checked([x * x - y, x * y - 1], DEGLEX2).verified
    assert GroebnerBasis.checked([x * x - y], DEGLEX2).verified


def test_zero_generators_give_the_zero_ideal():
    algebra = make_weyl()
    basis = buchberger([algebra.zero()], DEGLEX2)
    assert len(basis) == 0 and basis.verified
    assert basis.contains(algebra.zero())
    assert not basis.contains(algebra.one())
    assert normal_form(algebra.variable("x"), basis) == algebra.variable("x")


def test_inconsistent_presentation_is_refused():
    algebra = make_presentation(
        QQ, ["x", "y", "z"], [("y", "x", 1, 1), ("z", "x", 1, None), ("z", "y", 1, {"y": 1})]
    )
    with pytest.raises(InconsistentPresentationError):
        buchberger([algebra.variable("x")], MonomialOrder.deglex(3))


def test_format_trace_lists_used_divisors():
    algebra = make_weyl()
    x, y = algebra.variable("x"), algebra.variable("y")
    basis = buchberger([y], DEGLEX2)
    trace = basis.reduce(x * y + 1)
    assert format_trace(trace, basis.generators, basis.view) == (
        "  g1 = y  cofactor x\n  remainder 1"
    )


def test_zero_divisors_are_skipped_and_keep_their_place():
    algebra = make_weyl()
    x, y = algebra.variable("x"), algebra.variable("y")
    divisors = [algebra.zero(), y, algebra.zero()]
    trace = reduce(x * y + x, divisors, DEGLEX2)
    assert trace.remainder == x
    assert trace.cofactors == (algebra.zero(), x, algebra.zero())
    assert trace.verify(x * y + x, divisors)
    assert format_trace(trace, divisors, PolynomialView(DEGLEX2)) == "  g2 = y  cofactor x\n  remainder x"
    only_zero = reduce(x, [algebra.zero()], DEGLEX2)
    assert only_zero.remainder == x and only_zero.cofactors == (algebra.zero(),)


def make_usl2():
    return make_presentation(
        QQ,
        ["e", "f", "h"],
        [("f", "e", 1, {"h": -1}), ("h", "e", 1, {"e": 2}), ("h", "f", 1, {"f": -2})],
    )


def usl2_generators(algebra):
    e, f, h = (algebra.variable(name) for name in "efh")
    return [e * f + h, h * h - f, e * e]


def test_worker_threads_share_one_presentation():
    shared = make_usl2()
    shared.cache_limit = 256
    order = MonomialOrder.deglex(3)
    parallel = buchberger(usl2_generators(shared), order, workers=4)
    serial = buchberger(usl2_generators(make_usl2()), order, workers=1)
    assert parallel.generators == serial.generators
    assert parallel.verified and is_groebner(parallel.generators, order)
    assert shared.cache_size() <= 2 * shared.cache_limit
