#!/usr/bin/env python3
"""Run every acceptance criterion and print one pass/fail line per criterion.

Equivalent to ``pytest tests/test_acceptance.py -s`` but as a standalone
report with wall times; exits nonzero if anything fails.
"""

import sys
import time

from qvir import catalog
from qvir.coeffield import FunctionFieldDomain, RationalDomain, SymbolTable, rat
from qvir.macdonald import macdonald_onerow, u_series
from qvir.nekrasov import higgs_psi, special_point_symbolic
from qvir.operators import solve_toda, toda_limit_matches_solver, toda_residual
from qvir.series import DegreeWindow, series_equal, series_is_zero_on


def timed(fn):
    t0 = time.monotonic()
    result = fn()
    return result, time.monotonic() - t0


def main() -> int:
    checks = []

    checks.append(("1 non-stationary equation, 3 seeded numeric points, "
                   "lmax=4, x in [-5, 8]",
                   lambda: catalog.run_theorem20(window=DegreeWindow(4, -5, 8),
                                                 trials=3, seed=20240817).passed))
    checks.append(("2 non-stationary equation, distinguished point, "
                   "symbolic u,s,Q, lmax=2, x in [-3, 4]",
                   lambda: catalog.run_theorem20(window=DegreeWindow(2, -3, 4),
                                                 symbolic=True).passed))
    checks.append(("3 commutator of evolution and Toda operators, symbolic, "
                   "dL<=2, |dx|<=3",
                   lambda: catalog.run_commutator22(lam_range=2, x_range=3).passed))

    def criterion4():
        dom = RationalDomain()
        u, s, Q = rat(2, 5), rat(3, 7), rat(5, 3)
        q, t = u * u, s * s
        window = DegreeWindow(5, -5, 6)
        psi = solve_toda(DegreeWindow(5, -5, 11), dom, q, t, Q)
        eq_ok = series_is_zero_on(toda_residual(psi, window, dom, q, t, Q), window).equal
        lim_ok = toda_limit_matches_solver(DegreeWindow(3, -3, 3), u, s, Q).equal
        return eq_ok and lim_ok

    checks.append(("4 Toda solver: equation residual (lmax=5) and T->0 limit (lmax=3)",
                   criterion4))
    checks.append(("5 cut-and-join convergence at q=1/3, t=2, Q=2 up to M=8",
                   lambda: catalog.run_wrep24(M_max=8,
                                              window=DegreeWindow(2, -2, 2)).passed))

    def criterion6():
        dom = FunctionFieldDomain(SymbolTable(("u", "s")))
        q, t = dom.gen("u") ** 2, dom.gen("s") ** 2
        one = dom.one
        p2 = macdonald_onerow(2, dom, q, t)
        printed = dom.is_zero(
            p2.coeffs[(1, 1, 0)] - (one + q) * (one - t) * dom.invert(one - q * t))
        return (printed
                and catalog.run_macdonald_recurrence(window=DegreeWindow(3, -3, 2)).passed
                and catalog.run_macdonald_solution(r_values=(0, 1, 2, 3, 4)).passed)

    checks.append(("6 Macdonald chain: printed polynomials, recurrence, solution rows",
                   criterion6))

    def criterion7():
        return all(o.passed for o in (
            catalog.run_halves_v1(window=DegreeWindow(3, -3, 3)),
            catalog.run_halves_v2(window=DegreeWindow(3, -3, 3)),
            catalog.run_genfunc(z_order=3, window=DegreeWindow(2, -2, 2)),
            catalog.run_qseries(window=DegreeWindow(3, -3, 1)),
            catalog.run_qsaalschutz(n_values=(0, 1, 2, 3, 4, 5)),
            catalog.run_formula_gamma(ks=(-2, -1, 0, 1, 2)),
        ))

    checks.append(("7 proof machinery: halves, generating function, q-series, "
                   "q-Saalschutz, gamma exchange", criterion7))

    def criterion8():
        dom = FunctionFieldDomain(SymbolTable(("u", "s", "Q")))
        point = special_point_symbolic(dom)
        window = DegreeWindow(3, -3, 3)
        return series_equal(higgs_psi(window, point),
                            u_series(window, dom, point.q, point.t, point.Q),
                            window).equal

    checks.append(("8 Higgsed sum equals the closed double sum, symbolic, lmax=3",
                   criterion8))

    def criterion9():
        w = DegreeWindow(2, -2, 2)
        return not any(o.passed for o in (
            catalog.run_theorem20(window=w, trials=1, seed=11, mutate="a2"),
            catalog.run_commutator22(lam_range=1, x_range=1, mutate="tQ"),
            catalog.run_macdonald_recurrence(window=w, mutate="recurrence-const"),
            catalog.run_macdonald_solution(r_values=(2,), mutate="p2"),
            catalog.run_qsaalschutz(n_values=(1,), mutate="rhs"),
            catalog.run_formula_gamma(ks=(0, 1), mutate="exponent"),
        ))

    checks.append(("9 mutation sensitivity: documented mutations all flip the verdict",
                   criterion9))

    failures = 0
    for label, fn in checks:
        passed, dt = timed(fn)
        status = "PASS" if passed else "FAIL"
        print(f"criterion {label}: {status}  ({dt:.1f}s)")
        failures += 0 if passed else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
