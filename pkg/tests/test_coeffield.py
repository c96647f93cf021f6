import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from qvir.coeffield import (
    FunctionFieldDomain,
    LaurentZDomain,
    ParamPoint,
    RationalDomain,
    SymbolTable,
    element_equal,
    element_eval,
    element_text,
    make_element,
    rat,
)
from qvir.errors import (
    DomainError,
    EvaluationPoleError,
    MismatchedTablesError,
    ParseError,
    UsageError,
)

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=40)


@pytest.fixture(scope="module")
def table():
    return SymbolTable(("u", "s", "Q"))


def test_make_element_rational():
    assert make_element("1/2") == mpq(1, 2)


def test_make_element_ratio_of_squares_is_q_over_t(table):
    e = make_element("u^2/s^2", table)
    u, s = table.gen("u"), table.gen("s")
    v = u / s
    assert element_equal(e, v * v)


def test_make_element_cancels_polynomial_factor(table):
    e = make_element("(u^4-1)/(u^2-1)", table)
    assert element_equal(e, make_element("u^2+1", table))


def test_make_element_rejects_garbage(table):
    with pytest.raises(ParseError):
        make_element("u +* 2", table)
    with pytest.raises(ParseError):
        make_element("w + 1", table)


def test_make_element_zero_denominator(table):
    with pytest.raises(DomainError):
        make_element("1/(u - u)", table)


def test_element_equal_trivia(table):
    zero_a = make_element("0", table)
    zero_b = make_element("(u - u)/(u^2 - 1)", table)
    assert element_equal(zero_a, zero_b)
    assert element_equal(make_element("(u^2-1)/(u-1)", table), make_element("u+1", table))
    assert not element_equal(table.gen("u"), table.gen("s"))


def test_element_equal_mismatched_tables(table):
    other = SymbolTable(("u", "s"))
    with pytest.raises(MismatchedTablesError):
        element_equal(table.gen("u"), other.gen("u"))


def test_element_eval_direct(table):
    e = make_element("u^2/s^2", table)
    assert element_eval(e, {"u": rat(1, 2), "s": rat(1, 3), "Q": 1}) == mpq(9, 4)


def test_element_eval_pochhammer_value(table):
    # (tQ)_1 = 1 - tQ with t = s^2
    e = make_element("1 - s^2*Q", table)
    assert element_eval(e, {"u": 1, "s": rat(1, 3), "Q": 2}) == mpq(7, 9)


def test_element_eval_pole(table):
    e = make_element("1/(u - 1/2)", table)
    with pytest.raises(EvaluationPoleError):
        element_eval(e, {"u": rat(1, 2), "s": 1, "Q": 1})


def test_reserved_symbols_rejected():
    for bad in ("q", "t", "v"):
        with pytest.raises(UsageError):
            SymbolTable(("u", bad))


def test_serialize_reparse_round_trip(table):
    e = make_element("(3*u^2 - 2*s + 1)/(7*Q - u*s)", table)
    text = element_text(e)
    again = make_element(text, table)
    assert element_equal(e, again)


def test_canonical_text_integer_coefficients(table):
    e = make_element("(u/2 + 1/3)/(s/5)", table)
    text = element_text(e)
    assert "/2" not in text.replace("/(", "|(")  # no fractional coefficients survive
    assert element_equal(make_element(text, table), e)


@given(a=rationals, b=rationals, c=rationals)
def test_field_axioms_rationals(a, b, c):
    a, b, c = mpq(a), mpq(b), mpq(c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * (1 / a) == 1


@given(ea=st.integers(0, 3), eb=st.integers(0, 3), ca=rationals, cb=rationals)
def test_field_axioms_function_field(table, ea, eb, ca, cb):
    u, s = table.gen("u"), table.gen("s")
    dom = FunctionFieldDomain(table)
    a = dom.lift(mpq(ca)) * u**ea + s
    b = dom.lift(mpq(cb)) * s**eb + u
    c = u * s
    assert element_equal((a + b) + c, a + (b + c))
    assert element_equal(a * (b + c), a * b + a * c)
    if not dom.is_zero(a):
        assert element_equal(a * dom.invert(a), dom.one)


@given(ca=rationals, cb=rationals)
def test_eval_is_ring_homomorphism(table, ca, cb):
    u, s, Q = table.gen("u"), table.gen("s"), table.gen("Q")
    dom = FunctionFieldDomain(table)
    a = dom.lift(mpq(ca)) * u * u + Q
    b = s + dom.lift(mpq(cb))
    point = {"u": rat(2, 7), "s": rat(3, 5), "Q": rat(5, 11)}
    assert element_eval(a * b, point) == element_eval(a, point) * element_eval(b, point)
    assert element_eval(a + b, point) == element_eval(a, point) + element_eval(b, point)


class TestParamPoint:
    def test_rejects_roots_of_unity(self):
        with pytest.raises(UsageError):
            ParamPoint.numeric(u=1, s="1/2")
        with pytest.raises(UsageError):
            ParamPoint.numeric(u="-1", s="1/2")
        with pytest.raises(UsageError):
            ParamPoint.numeric(q=0, t=2)

    def test_derived_quantities(self, numeric_point):
        p = numeric_point
        assert p.q == mpq(4, 25) and p.t == mpq(9, 49)
        assert p.v == mpq(14, 15)
        h = p.higgsed()
        assert h.w == p.t
        assert h.phi(2) == p.v

    def test_higgsing_requires_unset_phis(self, numeric_point):
        h = numeric_point.higgsed()
        with pytest.raises(UsageError):
            h.higgsed()

    def test_qt_direct_point_has_no_halfpowers(self):
        p = ParamPoint.numeric(q="1/3", t=2, Q=2)
        assert p.q == mpq(1, 3)
        with pytest.raises(UsageError):
            _ = p.v

    def test_mass_and_coulomb_slots(self, numeric_point):
        p = numeric_point
        assert p.coulomb_n(2) == p.Q
        assert p.mass_fplus(1) == p.T(1) * p.Q
        assert p.mass_fplus(2) == 1 / p.T(2)
        h = p.higgsed()
        assert h.coulomb_m(2) == h.phi(1) * h.phi(2) * h.Q
        assert h.mass_fminus(2) == h.T(4) * h.phi(1) * h.phi(2) * h.Q


class TestZLaurent:
    def test_arithmetic_and_cap(self):
        base = RationalDomain()
        zdom = LaurentZDomain(base, cap=3)
        z = zdom.z(1)
        e = (zdom.one + z) ** 5
        assert e.coeff(3) == 10 and e.coeff(0) == 1
        assert all(k <= 3 for k in e.c)

    def test_exact_mode_negative_powers(self):
        base = RationalDomain()
        zdom = LaurentZDomain(base)
        zinv = zdom.invert(zdom.z(1))
        assert (zinv * zdom.z(1)) == zdom.one
        with pytest.raises(Exception):
            zdom.invert(zdom.one + zdom.z(1))

    def test_capped_mode_rejects_negative(self):
        base = RationalDomain()
        zdom = LaurentZDomain(base, cap=2)
        with pytest.raises(UsageError):
            zdom.invert(zdom.z(1))  # would create z^-1
