import pytest

from algebra import NEG_INFINITY, make_presentation
from errors import AlgebraMismatchError, TransferError, UnverifiedBasisError
from field import FieldSpec
from freemod import (
    ModuleGroebnerBasis,
    VectorPoly,
    VectorView,
    act,
    embed,
    format_vector,
    graded_action_check,
    is_homogeneous_vector,
    is_module_groebner,
    module_buchberger,
    module_degree,
    module_in_filtration,
    module_membership,
    module_reduce,
    module_s_vector,
    module_symbol,
    module_transfer_from_graded,
    module_transfer_to_graded,
)
from graded import associated_graded
from orders import MonomialOrder, ModuleOrder, induce_graded_module_order, module_leading_term

QQ = FieldSpec.rationals()
DEGLEX = MonomialOrder.deglex(2)


def make_weyl():
    return make_presentation(QQ, ["x", "y"], [("y", "x", 1, 1)])


def make_vector(*components):
    return VectorPoly.from_components(list(components))


def weyl_vars():
    weyl = make_weyl()
    return weyl, weyl.variable("x"), weyl.variable("y")


def test_vector_construction_and_components():
    weyl, x, y = weyl_vars()
    f = make_vector(x * y + 1, weyl.zero())
    assert f.rank == 2
    assert f.component(0) == x * y + 1
    assert f.component(1).is_zero()
    assert f == embed(x * y + 1, 0, 2)
    assert str(f) == "[x*y + 1, 0]"
    with pytest.raises(AlgebraMismatchError):
        f.component(2)
    with pytest.raises(AlgebraMismatchError):
        embed(x, 2, 2)


def test_vector_arithmetic():
    weyl, x, y = weyl_vars()
    f = make_vector(x, y)
    g = make_vector(y, weyl.one())
    assert f + g == make_vector(x + y, y + 1)
    assert f - f == VectorPoly.zero(weyl, 2)
    assert (-f).component(1) == -y
    assert f.scale(3) == 3 * f
    with pytest.raises(AlgebraMismatchError):
        f + make_vector(x)


def test_left_action_uses_the_algebra_product():
    weyl, x, y = weyl_vars()
    f = make_vector(x, weyl.zero())
    assert act(y, f) == make_vector(x * y + 1, weyl.zero())
    assert y * f == act(y, f)
    other = make_presentation(QQ, ["x", "y"])
    with pytest.raises(AlgebraMismatchError):
        act(other.variable("x"), f)


def test_module_degree_and_filtration():
    weyl, x, y = weyl_vars()
    f = make_vector(x * y + 1, y)
    assert module_degree(f) == 2
    assert module_degree(VectorPoly.zero(weyl, 2)) == NEG_INFINITY
    assert module_in_filtration(f, 2)
    assert not module_in_filtration(f, 1)


def test_top_and_pot_leading_terms():
    weyl, x, y = weyl_vars()
    f = make_vector(y, x)
    assert module_leading_term(f, ModuleOrder.top(DEGLEX, 2))[1] == (1, (1, 0))
    assert module_leading_term(f, ModuleOrder.pot(DEGLEX, 2))[1] == (0, (0, 1))
    g = make_vector(x, y * y)
    assert module_leading_term(g, ModuleOrder.pot(DEGLEX, 2))[1] == (1, (0, 2))


def test_module_symbol():
    weyl, x, y = weyl_vars()
    gr = associated_graded(weyl).presentation
    symbol = module_symbol(make_vector(x * y + 1, y))
    assert symbol == embed(gr.monomial((1, 1)), 0, 2)
    assert is_homogeneous_vector(symbol)
    assert not is_homogeneous_vector(make_vector(x * y + 1, y))


def test_graded_action_check():
    weyl, x, y = weyl_vars()
    assert graded_action_check(y, make_vector(x, weyl.zero()))
    assert graded_action_check(x * y + 1, make_vector(y, x))
    with pytest.raises(ValueError):
        graded_action_check(weyl.zero(), make_vector(x, y))


def test_reduction_stays_within_components():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.top(DEGLEX, 2)
    f = make_vector(x, x)
    trace = module_reduce(f, [make_vector(x, weyl.zero())], order)
    assert trace.remainder == make_vector(weyl.zero(), x)
    assert trace.cofactors == (weyl.one(),)


def test_s_vector_of_different_components_is_none():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.top(DEGLEX, 2)
    assert module_s_vector(make_vector(y, weyl.zero()), make_vector(weyl.zero(), x), order) is None
    s = module_s_vector(make_vector(x, weyl.one()), make_vector(y, weyl.zero()), order)
    assert s == make_vector(weyl.one(), y)


def test_module_basis_of_independent_components():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.top(DEGLEX, 2)
    basis = module_buchberger([make_vector(y, weyl.zero()), make_vector(weyl.zero(), x)], order)
    assert basis.verified and basis.reduced
    assert basis.generators == (make_vector(y, weyl.zero()), make_vector(weyl.zero(), x))
    assert basis.rank == 2


def test_module_basis_adds_s_vector():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.top(DEGLEX, 2)
    f1, f2 = make_vector(x, weyl.one()), make_vector(y, weyl.zero())
    basis = module_buchberger([f1, f2], order)
    assert basis.generators == (make_vector(weyl.one(), y), f2, f1)
    assert is_module_groebner(basis.generators, order)
    assert not is_module_groebner([f1, f2], order)
    member, trace = module_membership(y * f1 + f2.scale(2), basis)
    assert member
    assert trace.verify(y * f1 + f2.scale(2), basis.generators, basis.view)


def test_rank_one_module_matches_the_ideal():
    weyl, x, y = weyl_vars()
    basis = module_buchberger([make_vector(x), make_vector(y)], ModuleOrder.top(DEGLEX, 1))
    assert basis.generators == (make_vector(weyl.one()),)


def test_rank_mismatch_is_rejected():
    weyl, x, y = weyl_vars()
    with pytest.raises(AlgebraMismatchError):
        module_reduce(make_vector(x, y), [], ModuleOrder.top(DEGLEX, 3))


def test_module_transfer_round_trip():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.top(DEGLEX, 2)
    basis = module_buchberger([make_vector(x, weyl.one()), make_vector(y, weyl.zero())], order)
    graded = module_transfer_to_graded(basis)
    gr = associated_graded(weyl).presentation
    assert graded.order == induce_graded_module_order(order)
    assert graded.generators == (
        embed(gr.monomial((0, 1)), 1, 2),
        embed(gr.monomial((0, 1)), 0, 2),
        embed(gr.monomial((1, 0)), 0, 2),
    )
    lifted = module_transfer_from_graded(graded, basis.generators, order)
    assert lifted.verified
    with pytest.raises(TransferError):
        module_transfer_from_graded(graded, basis.generators[:1], order)


def test_module_transfer_needs_verified_bases():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.top(DEGLEX, 2)
    unverified = ModuleGroebnerBasis((make_vector(x, y),), order, weyl)
    with pytest.raises(UnverifiedBasisError):
        module_transfer_to_graded(unverified)
    with pytest.raises(UnverifiedBasisError):
        module_membership(make_vector(x, y), unverified)


def test_format_vector_uses_the_base_order():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.parse("top:deglex:y>x", weyl.var_names, 2)
    assert format_vector(make_vector(x + y, weyl.zero()), order) == "[y + x, 0]"


def test_zero_vector_divisors_are_skipped():
    weyl, x, y = weyl_vars()
    order = ModuleOrder.pot(DEGLEX, 2)
    zero = make_vector(weyl.zero(), weyl.zero())
    divisors = [zero, make_vector(weyl.zero(), y)]
    f = make_vector(x, x * y)
    trace = module_reduce(f, divisors, order)
    assert trace.cofactors == (weyl.zero(), x)
    assert trace.remainder == make_vector(x, weyl.zero())
    assert trace.verify(f, divisors, VectorView(order))
