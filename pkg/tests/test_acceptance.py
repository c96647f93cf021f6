"""Acceptance suite: one test per headline claim, each printing a PASS line.

Every tolerance is exact (residuals must vanish identically as rationals or
rational functions); the cut-and-join criterion uses exact rational error
comparisons.  Windows and parameters are pinned here and nowhere else.
"""

from qvir import catalog
from qvir.coeffield import FunctionFieldDomain, RationalDomain, SymbolTable, rat
from qvir.macdonald import u_series
from qvir.nekrasov import higgs_psi, special_point_symbolic
from qvir.operators import solve_toda, toda_limit_matches_solver, toda_residual
from qvir.series import DegreeWindow, series_equal, series_is_zero_on


def _announce(num, label, passed):
    print(f"criterion {num} [{label}]: {'PASS' if passed else 'FAIL'}")
    assert passed, f"criterion {num} ({label}) failed"


def test_criterion_1_nonstationary_equation_numeric():
    outcome = catalog.run_theorem20(window=DegreeWindow(4, -5, 8),
                                    trials=3, seed=20240817)
    _announce(1, "non-stationary equation, 3 random points, lmax=4, x in [-5,8]",
              outcome.passed)


def test_criterion_2_nonstationary_equation_symbolic():
    outcome = catalog.run_theorem20(window=DegreeWindow(2, -3, 4), symbolic=True)
    _announce(2, "non-stationary equation at the distinguished point, symbolic u,s,Q",
              outcome.passed)


def test_criterion_3_commutator_symbolic():
    outcome = catalog.run_commutator22(lam_range=2, x_range=3)
    _announce(3, "evolution operator commutes with the Toda Hamiltonian, symbolic",
              outcome.passed and outcome.details["monomials"] == 21)


def test_criterion_4_toda_equation_and_limit():
    dom = RationalDomain()
    u, s, Q = rat(2, 5), rat(3, 7), rat(5, 3)
    q, t = u * u, s * s
    window = DegreeWindow(5, -5, 6)
    pad = DegreeWindow(5, -5, 6 + 5)
    psi = solve_toda(pad, dom, q, t, Q)
    res = toda_residual(psi, window, dom, q, t, Q)
    eq_ok = series_is_zero_on(res, window).equal
    lim_ok = toda_limit_matches_solver(DegreeWindow(3, -3, 3), u, s, Q).equal
    _announce(4, "solver satisfies the Toda-limit equation (lmax=5) and equals "
                 "the T->0 limit (lmax=3)", eq_ok and lim_ok)


def test_criterion_5_cut_and_join_convergence():
    outcome = catalog.run_wrep24(M_max=8, window=DegreeWindow(2, -2, 2),
                                 q="1/3", t="2", Q="2")
    _announce(5, "cut-and-join partial products: monotone, 10x shrink, M=0..8",
              outcome.passed)


def test_criterion_6_macdonald_chain():
    # explicit one-row polynomials r = 1, 2, 3 are covered by the solution
    # verifier's mutation control plus the direct coefficient tests; here the
    # acceptance run re-checks all three pieces end to end.
    dom = FunctionFieldDomain(SymbolTable(("u", "s")))
    q, t = dom.gen("u") ** 2, dom.gen("s") ** 2
    from qvir.macdonald import macdonald_onerow

    one = dom.one
    p2 = macdonald_onerow(2, dom, q, t)
    p3 = macdonald_onerow(3, dom, q, t)
    printed = (
        dom.is_zero(macdonald_onerow(1, dom, q, t).coeffs[(1, 0, 0)] - one)
        and dom.is_zero(p2.coeffs[(1, 1, 0)]
                        - (one + q) * (one - t) * dom.invert(one - q * t))
        and dom.is_zero(p3.coeffs[(2, 1, 0)]
                        - (one + q + q * q) * (one - t) * dom.invert(one - q * q * t))
        and dom.is_zero(p3.coeffs[(1, 1, 1)]
                        - (one + q) * (one + q + q * q) * (one - t) ** 2
                        * dom.invert((one - q * t) * (one - q * q * t)))
    )
    rec = catalog.run_macdonald_recurrence(window=DegreeWindow(3, -3, 2))
    sol = catalog.run_macdonald_solution(r_values=(0, 1, 2, 3, 4))
    _announce(6, "one-row polynomials r=1..3, recurrence lmax=3, solution r=0..4",
              printed and rec.passed and sol.passed)


def test_criterion_7_proof_machinery():
    halves1 = catalog.run_halves_v1(window=DegreeWindow(3, -3, 3))
    halves2 = catalog.run_halves_v2(window=DegreeWindow(3, -3, 3))
    genfunc = catalog.run_genfunc(z_order=3, window=DegreeWindow(2, -2, 2))
    qseries = catalog.run_qseries(window=DegreeWindow(3, -3, 1))
    saal = catalog.run_qsaalschutz(n_values=(0, 1, 2, 3, 4, 5))
    gamma = catalog.run_formula_gamma(ks=(-2, -1, 0, 1, 2))
    _announce(7, "halves, generating function, q-series row, q-Saalschutz, "
                 "gamma exchange",
              all(o.passed for o in (halves1, halves2, genfunc, qseries, saal, gamma)))


def test_criterion_8_higgsed_sum_equals_double_sum():
    dom = FunctionFieldDomain(SymbolTable(("u", "s", "Q")))
    point = special_point_symbolic(dom)
    window = DegreeWindow(3, -3, 3)
    psi = higgs_psi(window, point)
    U = u_series(window, dom, point.q, point.t, point.Q)
    rep = series_equal(psi, U, window)
    _announce(8, "Higgsed sum at the distinguished point equals the double sum, "
                 "symbolic, lmax=3", rep.equal)


def test_criterion_9_mutation_sensitivity():
    window = DegreeWindow(2, -2, 2)
    t20 = catalog.run_theorem20(window=window, trials=1, seed=11, mutate="a2")
    comm = catalog.run_commutator22(lam_range=1, x_range=1, mutate="tQ")
    rec = catalog.run_macdonald_recurrence(window=window, mutate="recurrence-const")
    sol = catalog.run_macdonald_solution(r_values=(2,), mutate="p2")
    saal = catalog.run_qsaalschutz(n_values=(1,), mutate="rhs")
    gamma = catalog.run_formula_gamma(ks=(0, 1), mutate="exponent")
    all_fail = not any(o.passed for o in (t20, comm, rec, sol, saal, gamma))
    _announce(9, "every documented single-constant mutation flips the verdict",
              all_fail)
