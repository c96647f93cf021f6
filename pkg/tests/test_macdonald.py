import pytest

from qvir.coeffield import FunctionFieldDomain, RationalDomain, SymbolTable, rat
from qvir.macdonald import (
    macdonald_onerow,
    reciprocal_binomial,
    u_series,
    v_series,
    verify_formula_gamma,
    verify_genfunc,
    verify_halves,
    verify_macdonald_recurrence,
    verify_macdonald_solution,
    verify_qsaalschutz,
    verify_qseries_identity,
)
from qvir.qkit import qpoch
from qvir.series import (
    DegreeWindow,
    series_equal,
    series_monomial,
    series_mul,
    series_one,
    series_sub,
)

DOM = RationalDomain()
QV, TV, QQV = rat(4, 25), rat(9, 49), rat(5, 3)


@pytest.fixture(scope="module")
def us():
    dom = FunctionFieldDomain(SymbolTable(("u", "s")))
    return dom, dom.gen("u") ** 2, dom.gen("s") ** 2


@pytest.fixture(scope="module")
def usq():
    dom = FunctionFieldDomain(SymbolTable(("u", "s", "Q")))
    return dom, dom.gen("u") ** 2, dom.gen("s") ** 2, dom.gen("Q")


class TestOneRow:
    def test_r0_and_r1(self, us):
        dom, q, t = us
        p0 = macdonald_onerow(0, dom, q, t)
        assert p0.coeffs == {(0, 0, 0): dom.one}
        p1 = macdonald_onerow(1, dom, q, t)
        assert p1.coeffs == {(1, 0, 0): dom.one}

    def test_r2_printed_coefficients(self, us):
        dom, q, t = us
        p2 = macdonald_onerow(2, dom, q, t)
        assert dom.is_zero(p2.coeffs[(2, 0, 0)] - dom.one)
        target = (dom.one + q) * (dom.one - t) * dom.invert(dom.one - q * t)
        assert dom.is_zero(p2.coeffs[(1, 1, 0)] - target)

    def test_r3_printed_coefficients(self, us):
        dom, q, t = us
        p3 = macdonald_onerow(3, dom, q, t)
        one = dom.one
        t21 = (one + q + q * q) * (one - t) * dom.invert(one - q * q * t)
        t111 = ((one + q) * (one + q + q * q) * (one - t) ** 2
                * dom.invert((one - q * t) * (one - q * q * t)))
        assert dom.is_zero(p3.coeffs[(2, 1, 0)] - t21)
        assert dom.is_zero(p3.coeffs[(1, 1, 1)] - t111)

    def test_symmetry_of_orbit_expansion(self, us):
        dom, q, t = us
        p2 = macdonald_onerow(2, dom, q, t)
        orbit = dict(p2.orbit_items())
        assert orbit[(1, 1, 0)] == orbit[(0, 1, 1)] == orbit[(1, 0, 1)]


class TestDoubleSums:
    def test_u_window_enlargement_is_consistent(self):
        from qvir.series import series_restrict

        small = DegreeWindow(2, -2, 1)
        large = DegreeWindow(4, -4, 3)
        a = u_series(small, DOM, QV, TV, QQV)
        b = series_restrict(u_series(large, DOM, QV, TV, QQV), small)
        assert series_equal(a, b, small).equal

    def test_u_constant_and_pure_x_column(self):
        U = u_series(DegreeWindow(3, -3, 3), DOM, QV, TV, QQV)
        assert U.coeff(0, 0) == 1
        assert all(U.known(0, dx) == 0 for dx in range(1, 4))

    def test_u_first_mixed_coefficient(self):
        U = u_series(DegreeWindow(2, -2, 2), DOM, QV, TV, QQV)
        expected = (1 - QV * QQV / TV) * (1 - QV / TV) / ((1 - QV * QQV) * (1 - QV))
        assert U.coeff(1, -1) == expected

    def test_v_constant_and_pure_x_column(self):
        V = v_series(DegreeWindow(3, -3, 3), DOM, QV, TV, QQV)
        assert V.coeff(0, 0) == 1
        assert all(V.known(0, dx) == 0 for dx in range(1, 4))

    def test_v_first_mixed_coefficient_by_substitution(self):
        # direct (n, m) = (0, 1) substitution into the double sum
        V = v_series(DegreeWindow(1, -1, 1), DOM, QV, TV, QQV)
        q, t, Q = QV, TV, QQV
        expected = (-q * Q * qpoch(t, 1, q) * qpoch(q / t, 1, q)
                    / (qpoch(q * Q, 1, q) * qpoch(t * t, 1, q))
                    * qpoch(t * t, 1, q) / qpoch(q, 1, q))
        assert V.coeff(1, -1) == expected


def test_reciprocal_binomial_lambda_minus_tx():
    # 1/(L - tx) = -(1/(tx)) sum_k (L/(tx))^k
    win = DegreeWindow(2, -4, 2)
    wide = DegreeWindow(2, -4, 2 + 3)
    r = reciprocal_binomial(win, DOM, rat(1), (1, 0), -TV, (0, 1))
    direct = series_mul(r, series_sub(series_monomial(DOM, rat(1), 1, 0, wide),
                                      series_monomial(DOM, TV, 0, 1, wide)))
    assert series_equal(direct, series_one(DOM, direct.window), direct.window).equal


class TestRecurrence:
    def test_residual_zero_numeric(self):
        rep = verify_macdonald_recurrence(DegreeWindow(3, -3, 2), DOM, QV, TV, QQV)
        assert rep.equal

    def test_residual_zero_symbolic(self, usq):
        dom, q, t, Q = usq
        rep = verify_macdonald_recurrence(DegreeWindow(3, -3, 2), dom, q, t, Q)
        assert rep.equal

    def test_mutated_eigenvalue_fails(self):
        rep = verify_macdonald_recurrence(DegreeWindow(2, -2, 1), DOM, QV, TV, QQV,
                                          mutate="recurrence-const")
        assert not rep.equal


class TestSolution:
    @pytest.mark.parametrize("r", range(5))
    def test_rows_pass(self, us, r):
        dom, q, t = us
        assert verify_macdonald_solution(r, DegreeWindow(4, -4, 1), dom, q, t).equal

    def test_mutated_polynomial_fails(self, us):
        dom, q, t = us
        assert not verify_macdonald_solution(2, DegreeWindow(3, -3, 1), dom, q, t,
                                             mutate="p2").equal


class TestHalves:
    def test_both_residuals_vanish_numeric(self):
        r1, r2 = verify_halves(DegreeWindow(3, -3, 3), DOM, QV, TV, QQV)
        assert r1.equal and r2.equal

    def test_constant_terms_agree(self):
        r1, r2 = verify_halves(DegreeWindow(0, 0, 0), DOM, QV, TV, QQV)
        assert r1.equal and r2.equal


def test_genfunc_orders(us):
    dom, q, t = us
    rep = verify_genfunc(3, DegreeWindow(2, -2, 2), dom, q, t)
    assert rep.equal


def test_qseries_identity_with_printed_row(us):
    dom, q, t = us
    out = verify_qseries_identity(DegreeWindow(3, -3, 1), dom, q, t)
    assert out["report"].equal
    assert out["first_order_ok"]


@pytest.fixture(scope="module")
def abc():
    dom = FunctionFieldDomain(SymbolTable(("u", "a", "b", "c")))
    return dom, dom.gen("u") ** 2, dom.gen("a"), dom.gen("b"), dom.gen("c")


class TestQSaalschutz:
    @pytest.mark.parametrize("n", range(6))
    def test_orders(self, abc, n):
        dom, q, a, b, c = abc
        assert verify_qsaalschutz(n, dom, q, a, b, c)

    def test_mutation_fails(self, abc):
        dom, q, a, b, c = abc
        assert not verify_qsaalschutz(1, dom, q, a, b, c, mutate="rhs")

    def test_balancing_condition(self, us):
        # qt * a * b = c * d with the substitution used in the reduction
        dom = FunctionFieldDomain(SymbolTable(("u", "s", "x_", "z_", "L_")))
        q = dom.gen("u") ** 2
        t = dom.gen("s") ** 2
        x, z, L = dom.gen("x_"), dom.gen("z_"), dom.gen("L_")
        inv = dom.invert
        a, b = t * inv(x), q * inv(t * z)
        c, d = q * t * inv(z * L), q * L * inv(x)
        assert dom.is_zero(q * t * a * b - c * d)


def test_formula_gamma_all_exponents(us):
    dom, q, t = us
    res = verify_formula_gamma(range(-2, 3), DegreeWindow(2, -2, 2), dom, q, t)
    assert all(res.values())


def test_formula_gamma_mutation_fails(us):
    dom, q, t = us
    res = verify_formula_gamma([0, 1], DegreeWindow(2, -2, 2), dom, q, t,
                               mutate="exponent")
    assert not all(res.values())
