import pytest

from qvir.coeffield import RationalDomain, rat
from qvir.errors import DegenerateParameterError, WindowUnderflowError
from qvir.nekrasov import higgs_psi, special_point_symbolic
from qvir.operators import (
    GammaStep,
    MulStep,
    RescaleStep,
    SeriesOperator,
    basic_shift_relations_check,
    commutator_check,
    gamma_apply,
    nonstat_rhs,
    prefactor_A,
    solve_toda,
    toda_H_apply,
    toda_hamiltonian_apply,
    toda_limit_matches_solver,
    toda_residual,
    verify_theorem20,
    wrep_convergence,
    wrep_partial,
    wrep_region_ok,
    xhat_apply,
)
from qvir.qkit import MonomialArg, phi_expand
from qvir.series import (
    DegreeWindow,
    series_equal,
    series_is_zero_on,
    series_monomial,
    series_mul,
    series_one,
    series_rescale,
)

DOM = RationalDomain()
QV, TV, QQV = rat(4, 25), rat(9, 49), rat(5, 3)
W = DegreeWindow(2, -3, 3)


def mono(dL, dx, window=W):
    return series_monomial(DOM, rat(1), dL, dx, window)


class TestGamma:
    def test_action_on_monomials(self):
        assert gamma_apply(mono(0, 0), QV).coeff(0, 0) == 1
        assert gamma_apply(mono(0, 1), QV).coeff(0, 1) == QV
        assert gamma_apply(mono(0, -1), QV).coeff(0, -1) == 1
        assert gamma_apply(mono(0, -3), QV).coeff(0, -3) == QV**3

    def test_round_trip(self):
        f = series_mul(mono(1, -1), mono(0, 2))
        back = gamma_apply(gamma_apply(f, QV, 1), QV, -1)
        assert series_equal(back, f, f.window).equal

    def test_lambda_inert(self):
        f = mono(2, 0)
        assert gamma_apply(f, QV).coeff(2, 0) == 1


def test_basic_shift_relations():
    assert basic_shift_relations_check(W, DOM, QV)
    assert not basic_shift_relations_check(W, DOM, QV, mutate="gamma-xhat")


def test_xhat_is_x_after_shift():
    f = mono(0, 1)
    out = xhat_apply(f, QV)
    assert out.coeff(0, 2) == QV  # x * (qx) = q x^2


class TestPrefactors:
    def test_constant_terms(self, numeric_point):
        for which in (1, 2, 3):
            a = prefactor_A(which, W, numeric_point)
            assert a.coeff(0, 0) == 1

    def test_inverse_flag_gives_reciprocal(self, numeric_point):
        pad = DegreeWindow(2, -3, 7)
        a = prefactor_A(2, pad, numeric_point)
        ainv = prefactor_A(2, pad, numeric_point, inverse=True)
        prod = series_mul(a, ainv)
        assert series_equal(prod, series_one(DOM, prod.window), prod.window).equal

    def test_special_point_reduction_a1(self, usq_domain):
        # at the distinguished point A1 collapses to 1/(phi(qx/t) phi(tL/x))
        point = special_point_symbolic(usq_domain)
        dom = usq_domain
        q, t = point.q, point.t
        win = DegreeWindow(2, -2, 3)
        a1 = prefactor_A(1, win, point)
        pad = DegreeWindow(2, -2, 3 + 2 * 2)
        expected = series_mul(
            phi_expand(MonomialArg(q * dom.invert(t), 0, 1), pad, dom, q, inverse=True),
            phi_expand(MonomialArg(t, 1, -1), pad, dom, q, inverse=True),
        )
        assert series_equal(a1, expected, DegreeWindow(2, -2, 3)).equal

    def test_special_point_reduction_a2(self, usq_domain):
        point = special_point_symbolic(usq_domain)
        dom = usq_domain
        q, t, Q = point.q, point.t, point.Q
        inv = dom.invert
        win = DegreeWindow(2, -2, 2)
        a2 = prefactor_A(2, win, point)
        pad = DegreeWindow(2, -2, 2 + 3 * 2)
        expected = series_one(dom, pad)
        for coeff, degs, inverse in [
            (t, (1, 0), False), (q * inv(t * t), (1, 0), False),
            (-inv(t), (0, 1), True), (-inv(Q), (0, 1), True),
            (-q * Q, (1, -1), True), (-q, (1, -1), True),
        ]:
            expected = series_mul(expected, phi_expand(
                MonomialArg(coeff, *degs), pad, dom, q, inverse=inverse))
        assert series_equal(a2, expected, win).equal


class TestTheorem20:
    def test_numeric_residual_zero(self, numeric_point):
        assert verify_theorem20(DegreeWindow(2, -2, 3), numeric_point).equal

    def test_mutations_fail(self, numeric_point):
        win = DegreeWindow(2, -2, 2)
        assert not verify_theorem20(win, numeric_point, mutate="a2").equal
        assert not verify_theorem20(win, numeric_point, mutate="shift").equal

    def test_nonstat_rhs_pipeline_matches_shifted_psi(self, numeric_point):
        # the literal spec pipeline, small window
        win = DegreeWindow(1, -2, 2)
        pipe_pad = DegreeWindow(1, -2, 2 + 3)
        psi = higgs_psi(pipe_pad, numeric_point)
        rhs = nonstat_rhs(psi, win, numeric_point)
        lhs = series_rescale(higgs_psi(win, numeric_point), numeric_point.t, DOM.one)
        assert series_equal(lhs, rhs, win).equal

    def test_nonstat_rhs_reports_needed_padding(self, numeric_point):
        win = DegreeWindow(1, -2, 2)
        psi = higgs_psi(win, numeric_point)
        with pytest.raises(WindowUnderflowError):
            nonstat_rhs(psi, win, numeric_point)

    def test_constant_term_trivial_window(self, numeric_point):
        win = DegreeWindow(0, 0, 0)
        assert verify_theorem20(win, numeric_point).equal


class TestTodaOperators:
    def test_H_on_one(self):
        one = series_one(DOM, DegreeWindow(2, -2, 6))
        h1 = toda_H_apply(one, DOM, QV, TV, QQV)
        assert h1.coeff(0, 0) == 1
        assert h1.coeff(0, 1) == -QV / (QQV * (1 - QV))

    def test_hamiltonian_on_one_and_x(self):
        f = series_one(DOM, W)
        out = toda_hamiltonian_apply(f, DOM, QV, TV, QQV)
        assert out.coeff(0, 0) == 1 + TV * QQV
        assert out.coeff(0, 1) == TV
        assert out.coeff(1, -1) == 1
        x = mono(0, 1)
        out2 = toda_hamiltonian_apply(x, DOM, QV, TV, QQV)
        assert out2.coeff(0, 1) == QV + TV * QQV / QV
        assert out2.coeff(0, 2) == TV
        assert out2.coeff(1, 0) == 1

    def test_hamiltonian_linearity(self):
        f, g = mono(0, 1), mono(1, -1)
        both = toda_hamiltonian_apply(f + g, DOM, QV, TV, QQV)
        sep = toda_hamiltonian_apply(f, DOM, QV, TV, QQV) + \
            toda_hamiltonian_apply(g, DOM, QV, TV, QQV)
        assert series_equal(both, sep, sep.window).equal

    def test_commutator_numeric(self):
        res = commutator_check(DOM, QV, TV, QQV, lam_range=1, x_range=2)
        assert all(r["passed"] for r in res)

    def test_commutator_mutation_fails(self):
        res = commutator_check(DOM, QV, TV, QQV, lam_range=1, x_range=1, mutate="tQ")
        assert not all(r["passed"] for r in res)


class TestSolveToda:
    def test_normalization_and_first_coefficient(self):
        psi = solve_toda(DegreeWindow(2, -2, 3), DOM, QV, TV, QQV)
        assert psi.coeff(0, 0) == 1
        expected = -QV / (QQV * (1 - QV) * (1 - QV / (TV * QQV)))
        assert psi.coeff(0, 1) == expected

    def test_solution_satisfies_equation(self):
        win = DegreeWindow(3, -3, 3)
        pad = DegreeWindow(3, -3, 3 + 3)
        psi = solve_toda(pad, DOM, QV, TV, QQV)
        res = toda_residual(psi, win, DOM, QV, TV, QQV)
        assert series_is_zero_on(res, win).equal

    def test_resonance_detected(self):
        # t = q and Q = q/t^2 make the pivot at (1, 1) vanish:
        # t^1 = q^{1*2} (tqQ)^-1  <=>  t^2 q Q = q^2
        q = rat(1, 2)
        t = q
        Q = q / (t * t)
        with pytest.raises(DegenerateParameterError):
            solve_toda(DegreeWindow(2, -2, 2), DOM, q, t, Q)

    def test_matches_toda_limit_of_higgsed_sum(self):
        rep = toda_limit_matches_solver(DegreeWindow(2, -2, 2), "2/5", "3/7", "5/3")
        assert rep.equal

    def test_window_enlargement_is_consistent(self):
        from qvir.series import series_restrict

        small = DegreeWindow(2, -2, 2)
        large = DegreeWindow(4, -4, 5)
        a = solve_toda(small, DOM, QV, TV, QQV)
        b = series_restrict(solve_toda(large, DOM, QV, TV, QQV), small)
        assert series_equal(a, b, small).equal


class TestWrep:
    def test_region_check(self):
        assert wrep_region_ok(rat(1, 3), rat(2), rat(2))
        assert not wrep_region_ok(rat(1, 3), rat(1, 2), rat(2))

    def test_m0_partial(self):
        win = DegreeWindow(1, -1, 1)
        f = wrep_partial(0, win, DOM, rat(1, 3), rat(2), rat(2))
        assert f.coeff(0, 0) == 1
        # gamma kernel gamma . 1: the x coefficient is gamma-weighted -x/Q/(1-q)
        q, Q = rat(1, 3), rat(2)
        assert f.coeff(0, 1) == q * (-1 / Q) / (1 - q)

    def test_convergence_table(self):
        rep = wrep_convergence(8, DegreeWindow(1, -1, 1), rat(1, 3), rat(2), rat(2))
        assert rep["region_ok"]
        assert all(rep["monotone"].values())
        assert all(rep["shrank_10x"].values())
        errs = rep["errors"][(0, 1)]
        assert errs[0] != 0 and errs[-1] * 10 <= errs[0]

    def test_constant_coefficient_stays_exact(self):
        rep = wrep_convergence(3, DegreeWindow(0, 0, 0), rat(1, 3), rat(2), rat(2))
        assert all(e == 0 for e in rep["errors"][(0, 0)])


class TestPipelineWindows:
    def test_required_window_composition(self, numeric_point):
        dom = numeric_point.domain
        pipe = SeriesOperator([
            MulStep(lambda w: series_one(dom, w), depth=1, label="k"),
            GammaStep(numeric_point.q),
            RescaleStep(dom.one, dom.one),
        ])
        out = DegreeWindow(2, -2, 3)
        need = pipe.required_window(out)
        assert need.xmax == 3 + 2 and need.lmax == 2

    def test_apply_runs_right_to_left(self, numeric_point):
        dom = numeric_point.domain
        pipe = SeriesOperator([
            GammaStep(numeric_point.q),
            RescaleStep(dom.one, numeric_point.q),
        ])
        f = series_monomial(dom, dom.one, 0, 1, DegreeWindow(0, 0, 1))
        out = pipe.apply(f)
        assert out.coeff(0, 1) == numeric_point.q * numeric_point.q
