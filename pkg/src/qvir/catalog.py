"""Identity catalog: every in-scope series identity under a stable name, with
default windows, backends and parameter policies, plus the documented mutation
hooks used to prove the verification windows are not vacuous.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from gmpy2 import mpq

from . import macdonald, nekrasov, operators
from .coeffield import (
    FunctionFieldDomain,
    ParamPoint,
    RationalDomain,
    SymbolTable,
    rat,
)
from .errors import DegenerateParameterError, UsageError
from .series import DegreeWindow, series_equal

#: documented single-constant mutations, one per guarded criterion family
MUTATIONS = {
    "theorem20": {
        "a2": "multiply the first Lambda-type dilogarithm argument of A2 by q",
        "shift": "use x/(tq) instead of x/(tqQ) for the argument shift",
    },
    "commutator22": {
        "tQ": "replace the constant tQ by t^2 Q in the Toda Hamiltonian",
    },
    "macdonald_recurrence": {
        "recurrence-const": "replace the eigenvalue 1 + t + t/Q by 1 + t + tQ",
    },
    "macdonald_solution": {
        "p2": "shift one interior coefficient of the one-row polynomial by 1",
    },
    "qsaalschutz": {
        "rhs": "replace (c/a)_n by (c*a)_n on the closed side",
    },
    "formula_gamma": {
        "exponent": "use q^k instead of q^{1+k} in the exchanged argument",
    },
    "basic_shift": {
        "gamma-xhat": "assert gamma and x-hat commute without the q-shift",
    },
}


def draw_param_point(rng: random.Random) -> ParamPoint:
    """Random small-height rational point away from root-of-unity hazards.

    Heights stay at or below 64; u and s avoid 0, +-1 and equal magnitudes
    (so v is not a root of unity); actual degenerate denominators are left to
    runtime checks plus re-randomization.
    """
    def small(lo=2, hi=12):
        num = rng.randint(lo, hi)
        den = rng.randint(lo, hi)
        return mpq(num, den)

    while True:
        u, s = small(), small()
        if abs(u) in (0, 1) or abs(s) in (0, 1) or abs(u) == abs(s):
            continue
        break
    kw = {}
    for name in ("Q", "T1", "T2", "T3", "T4"):
        val = mpq(rng.randint(2, 64), rng.randint(2, 64))
        if rng.random() < 0.25:
            val = -val
        kw[name] = val
    return ParamPoint.numeric(u=u, s=s, **kw)


@dataclass
class VerifyOutcome:
    identity: str
    passed: bool
    window: DegreeWindow | None
    backend: str
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        out = {
            "identity": self.identity,
            "verdict": "pass" if self.passed else "fail",
            "backend": self.backend,
        }
        if self.window is not None:
            out["window"] = self.window.as_dict()
            # comparisons only ever happen on certified coefficients
            out["certified_window"] = self.window.as_dict()
        out.update(self.details)
        if self.warnings:
            out["warnings"] = self.warnings
        return out


@dataclass(frozen=True)
class IdentityCatalogEntry:
    name: str
    description: str
    default_window: DegreeWindow | None
    default_backend: str
    parameters: str
    runner: Callable[..., VerifyOutcome]
    mutations: dict = field(default_factory=dict)


def _symbolic_usq() -> tuple[FunctionFieldDomain, Any, Any, Any]:
    dom = FunctionFieldDomain(SymbolTable(("u", "s", "Q")))
    u, s = dom.gen("u"), dom.gen("s")
    return dom, u * u, s * s, dom.gen("Q")


def _symbolic_us() -> tuple[FunctionFieldDomain, Any, Any]:
    dom = FunctionFieldDomain(SymbolTable(("u", "s")))
    u, s = dom.gen("u"), dom.gen("s")
    return dom, u * u, s * s


def _with_retries(trials: int, seed: int, budget: int, body) -> list:
    """Run ``body(point)`` on fresh random points, redrawing on degeneracy."""
    rng = random.Random(seed)
    outcomes = []
    for _ in range(trials):
        last_error = None
        for _ in range(budget):
            point = draw_param_point(rng)
            try:
                outcomes.append(body(point))
                break
            except DegenerateParameterError as exc:
                last_error = exc
        else:
            raise DegenerateParameterError(
                f"no usable parameter point after {budget} draws: {last_error}"
            )
    return outcomes


def run_theorem20(window: DegreeWindow | None = None, symbolic: bool = False,
                  trials: int = 3, seed: int = 20240817,
                  mutate: str | None = None, retry_budget: int = 8) -> VerifyOutcome:
    t0 = time.monotonic()
    if symbolic:
        window = window or DegreeWindow(2, -3, 4)
        dom, _, _, _ = _symbolic_usq()
        point = nekrasov.special_point_symbolic(dom)
        rep = operators.verify_theorem20(window, point, mutate=mutate)
        details = {"point": "distinguished all-degenerate point, symbolic u, s, Q"}
        if not rep.equal:
            details["first_mismatch"] = list(rep.first_mismatch)
        return VerifyOutcome("theorem20", rep.equal, window, "symbolic", details,
                             wall_time=time.monotonic() - t0)
    window = window or DegreeWindow(4, -5, 8)

    def body(point: ParamPoint):
        rep = operators.verify_theorem20(window, point, mutate=mutate)
        return rep, point

    results = _with_retries(trials, seed, retry_budget, body)
    passed = all(rep.equal for rep, _ in results)
    details = {
        "trials": trials,
        "seed": seed,
        "points": [{k: str(v) for k, v in pt.substitutions().items()}
                   for _, pt in results],
    }
    for rep, _ in results:
        if not rep.equal:
            details["first_mismatch"] = list(rep.first_mismatch)
            break
    return VerifyOutcome("theorem20", passed, window, "numeric", details,
                         wall_time=time.monotonic() - t0)


def run_toda21(window: DegreeWindow | None = None, limit_lmax: int = 3,
               seed: int = 20240817, mutate: str | None = None) -> VerifyOutcome:
    """Solver satisfies the Toda-limit equation; the T -> 0 limit matches it."""
    t0 = time.monotonic()
    window = window or DegreeWindow(5, -5, 6)
    dom = RationalDomain()
    rng = random.Random(seed)
    while True:
        u, s = mpq(rng.randint(2, 9), rng.randint(2, 9)), mpq(rng.randint(2, 9), rng.randint(2, 9))
        Q = mpq(rng.randint(2, 12), rng.randint(2, 12))
        if abs(u) in (0, 1) or abs(s) in (0, 1) or abs(u) == abs(s):
            continue
        q, t = u * u, s * s
        try:
            pad = DegreeWindow(window.lmax, window.xmin, window.xmax + window.lmax)
            psi = operators.solve_toda(pad, dom, q, t, Q)
            break
        except DegenerateParameterError:
            continue
    res = operators.toda_residual(psi, window, dom, q, t, Q)
    from .series import series_is_zero_on

    eq_rep = series_is_zero_on(res, window)
    lim_win = DegreeWindow(limit_lmax, -limit_lmax, limit_lmax)
    lim_rep = operators.toda_limit_matches_solver(lim_win, u, s, Q)
    passed = eq_rep.equal and lim_rep.equal
    details = {
        "point": {"u": str(u), "s": str(s), "Q": str(Q)},
        "equation_window": window.as_dict(),
        "limit_window": lim_win.as_dict(),
        "equation_pass": eq_rep.equal,
        "limit_matches_solver": lim_rep.equal,
    }
    return VerifyOutcome("toda21", passed, window, "numeric", details,
                         wall_time=time.monotonic() - t0)


def run_commutator22(lam_range: int = 2, x_range: int = 3,
                     mutate: str | None = None) -> VerifyOutcome:
    t0 = time.monotonic()
    dom, q, t, Q = _symbolic_usq()
    results = operators.commutator_check(dom, q, t, Q, lam_range=lam_range,
                                         x_range=x_range, mutate=mutate)
    passed = all(r["passed"] for r in results)
    details = {
        "monomials": len(results),
        "failures": [r for r in results if not r["passed"]][:3],
    }
    return VerifyOutcome("commutator22", passed, None, "symbolic", details,
                         wall_time=time.monotonic() - t0)


def run_wrep24(M_max: int = 8, window: DegreeWindow | None = None,
               q="1/3", t="2", Q="2", mutate: str | None = None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(2, -2, 2)
    q, t, Q = rat(q), rat(t), rat(Q)
    report = operators.wrep_convergence(M_max, window, q, t, Q)
    warnings = []
    if not report["region_ok"]:
        warnings.append("parameters violate the convergence region t, qtQ, 1/(qQ) > 1")
    monotone = all(report["monotone"].values())
    shrank = all(report["shrank_10x"].values())
    passed = monotone and shrank and report["region_ok"]
    details = {
        "iterations": M_max,
        "params": {"q": str(q), "t": str(t), "Q": str(Q)},
        "monotone": monotone,
        "shrank_10x": shrank,
        "errors": {
            f"{k[0]},{k[1]}": [str(e) for e in es]
            for k, es in sorted(report["errors"].items())
        },
    }
    return VerifyOutcome("wrep24", passed, window, "numeric", details, warnings,
                         wall_time=time.monotonic() - t0)


def run_macdonald_recurrence(window: DegreeWindow | None = None,
                             mutate: str | None = None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(3, -3, 2)
    dom, q, t, Q = _symbolic_usq()
    rep = macdonald.verify_macdonald_recurrence(window, dom, q, t, Q, mutate=mutate)
    details = {} if rep.equal else {"first_mismatch": list(rep.first_mismatch)}
    return VerifyOutcome("macdonald_recurrence", rep.equal, window, "symbolic",
                         details, wall_time=time.monotonic() - t0)


def run_macdonald_solution(r_values=(0, 1, 2, 3, 4), window: DegreeWindow | None = None,
                           mutate: str | None = None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(4, -4, 1)
    dom, q, t = _symbolic_us()
    outcomes = {r: macdonald.verify_macdonald_solution(r, window, dom, q, t,
                                                       mutate=mutate).equal
                for r in r_values}
    return VerifyOutcome("macdonald_solution", all(outcomes.values()), window,
                         "symbolic", {"rows": {str(r): ok for r, ok in outcomes.items()}},
                         wall_time=time.monotonic() - t0)


def _run_half(index: int, window: DegreeWindow | None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(3, -3, 3)
    dom, q, t, Q = _symbolic_usq()
    reports = macdonald.verify_halves(window, dom, q, t, Q)
    rep = reports[index]
    details = {} if rep.equal else {"first_mismatch": list(rep.first_mismatch)}
    return VerifyOutcome(f"halves_v{index + 1}", rep.equal, window, "symbolic",
                         details, wall_time=time.monotonic() - t0)


def run_halves_v1(window: DegreeWindow | None = None, mutate=None) -> VerifyOutcome:
    return _run_half(0, window)


def run_halves_v2(window: DegreeWindow | None = None, mutate=None) -> VerifyOutcome:
    return _run_half(1, window)


def run_genfunc(z_order: int = 3, window: DegreeWindow | None = None,
                mutate=None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(2, -2, 2)
    dom, q, t = _symbolic_us()
    rep = macdonald.verify_genfunc(z_order, window, dom, q, t)
    details = {"z_order": z_order}
    if not rep.equal:
        details["first_mismatch"] = list(rep.first_mismatch)
    return VerifyOutcome("genfunc", rep.equal, window, "symbolic", details,
                         wall_time=time.monotonic() - t0)


def run_qseries(window: DegreeWindow | None = None, mutate=None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(3, -3, 1)
    dom, q, t = _symbolic_us()
    out = macdonald.verify_qseries_identity(window, dom, q, t)
    passed = out["report"].equal and out["first_order_ok"]
    details = {"printed_first_order_row": out["first_order_ok"]}
    if not out["report"].equal:
        details["first_mismatch"] = list(out["report"].first_mismatch)
    return VerifyOutcome("qseries", passed, window, "symbolic", details,
                         wall_time=time.monotonic() - t0)


def run_qsaalschutz(n_values=(0, 1, 2, 3, 4, 5), mutate: str | None = None,
                    window=None) -> VerifyOutcome:
    t0 = time.monotonic()
    dom = FunctionFieldDomain(SymbolTable(("u", "a", "b", "c")))
    q = dom.gen("u") ** 2
    a, b, c = dom.gen("a"), dom.gen("b"), dom.gen("c")
    outcomes = {n: macdonald.verify_qsaalschutz(n, dom, q, a, b, c, mutate=mutate)
                for n in n_values}
    return VerifyOutcome("qsaalschutz", all(outcomes.values()), None, "symbolic",
                         {"orders": {str(n): ok for n, ok in outcomes.items()}},
                         wall_time=time.monotonic() - t0)


def run_formula_gamma(ks=(-2, -1, 0, 1, 2), window: DegreeWindow | None = None,
                      mutate: str | None = None) -> VerifyOutcome:
    t0 = time.monotonic()
    window = window or DegreeWindow(2, -2, 2)
    dom, q, t = _symbolic_us()
    res = macdonald.verify_formula_gamma(ks, window, dom, q, t, mutate=mutate)
    return VerifyOutcome("formula_gamma", all(res.values()), window, "symbolic",
                         {"exponents": {str(k): ok for k, ok in res.items()}},
                         wall_time=time.monotonic() - t0)


def run_qbinomial(order: int = 3, mutate=None, window=None) -> VerifyOutcome:
    t0 = time.monotonic()
    from .qkit import MonomialArg, qbinomial_check
    from .series import series_is_zero_on

    dom = FunctionFieldDomain(SymbolTable(("u", "s", "y")))
    q = dom.gen("u") ** 2
    y = dom.gen("y")
    window = window or DegreeWindow(0, 0, order)
    res = qbinomial_check(MonomialArg(dom.gen("s"), 0, 1), y, window, dom, q)
    rep = series_is_zero_on(res, res.window)
    return VerifyOutcome("qbinomial", rep.equal, window, "symbolic", {},
                         wall_time=time.monotonic() - t0)


def run_phi_functional(window: DegreeWindow | None = None, mutate=None) -> VerifyOutcome:
    """phi(q*arg) = (1 - arg)^-1 phi(arg) on the window, symbolic argument."""
    t0 = time.monotonic()
    from .qkit import MonomialArg, phi_expand
    from .series import (series_equal, series_inverse, series_monomial, series_mul,
                         series_one, series_sub)

    dom, q, _ = _symbolic_us()
    window = window or DegreeWindow(2, -2, 4)
    c = dom.gen("s")
    lhs = phi_expand(MonomialArg(q * c, 0, 1), window, dom, q)
    lin = series_sub(series_one(dom, window), series_monomial(dom, c, 0, 1, window))
    rhs = series_mul(series_inverse(lin), phi_expand(MonomialArg(c, 0, 1), window, dom, q))
    rep = series_equal(lhs, rhs, rhs.window)
    return VerifyOutcome("phi_functional", rep.equal, window, "symbolic", {},
                         wall_time=time.monotonic() - t0)


def run_basic_shift(window: DegreeWindow | None = None,
                    mutate: str | None = None) -> VerifyOutcome:
    t0 = time.monotonic()
    dom, q, _ = _symbolic_us()
    window = window or DegreeWindow(2, -3, 3)
    ok = operators.basic_shift_relations_check(window, dom, q, mutate=mutate)
    return VerifyOutcome("basic_shift", ok, window, "symbolic", {},
                         wall_time=time.monotonic() - t0)


CATALOG: dict[str, IdentityCatalogEntry] = {}


def _register(name, description, window, backend, parameters, runner, mutations=None):
    CATALOG[name] = IdentityCatalogEntry(
        name, description, window, backend, parameters, runner, mutations or {})


_register("theorem20", "non-stationary difference equation for the Higgsed sum",
          DegreeWindow(4, -5, 8), "numeric", "random u,s,Q,T1..T4 (or --symbolic)",
          run_theorem20, MUTATIONS["theorem20"])
_register("toda21", "Toda-limit equation: solver residual and the T->0 limit",
          DegreeWindow(5, -5, 6), "numeric", "random u,s,Q", run_toda21)
_register("commutator22", "evolution operator commutes with the Toda Hamiltonian",
          None, "symbolic", "u,s,Q free", run_commutator22, MUTATIONS["commutator22"])
_register("wrep24", "cut-and-join partial products converge to the solver",
          DegreeWindow(2, -2, 2), "numeric", "q=1/3, t=2, Q=2", run_wrep24)
_register("macdonald_recurrence", "three-term difference recurrence for the double sum",
          DegreeWindow(3, -3, 2), "symbolic", "u,s,Q free", run_macdonald_recurrence,
          MUTATIONS["macdonald_recurrence"])
_register("macdonald_solution", "double sum at Q = q^-r/t equals the one-row polynomial",
          DegreeWindow(4, -4, 1), "symbolic", "u,s free; r = 0..4",
          run_macdonald_solution, MUTATIONS["macdonald_solution"])
_register("halves_v1", "first square-root half-equation", DegreeWindow(3, -3, 3),
          "symbolic", "u,s,Q free", run_halves_v1)
_register("halves_v2", "second square-root half-equation", DegreeWindow(3, -3, 3),
          "symbolic", "u,s,Q free", run_halves_v2)
_register("genfunc", "generating function over the polynomial points",
          DegreeWindow(2, -2, 2), "symbolic", "u,s free; z to order 3", run_genfunc)
_register("qseries", "terminating Pochhammer-ratio identity with adjoined z",
          DegreeWindow(3, -3, 1), "symbolic", "u,s free; exact z-Laurent", run_qseries)
_register("qsaalschutz", "balanced terminating sum in closed form", None, "symbolic",
          "u,a,b,c free; n = 0..5", run_qsaalschutz, MUTATIONS["qsaalschutz"])
_register("formula_gamma", "diagonal-operator exchange with two dilogarithms",
          DegreeWindow(2, -2, 2), "symbolic", "u,s free; k = -2..2",
          run_formula_gamma, MUTATIONS["formula_gamma"])
_register("qbinomial", "q-binomial theorem with a free ratio", DegreeWindow(0, 0, 3),
          "symbolic", "u,s,y free", run_qbinomial)
_register("phi_functional", "dilogarithm shift equation phi(q y) = phi(y)/(1-y)",
          DegreeWindow(2, -2, 4), "symbolic", "u,s free", run_phi_functional)


def run_identity(name: str, **kwargs) -> VerifyOutcome:
    entry = CATALOG.get(name)
    if entry is None:
        raise UsageError(
            f"unknown identity {name!r}; available: {', '.join(sorted(CATALOG))}"
        )
    mutate = kwargs.get("mutate")
    if mutate is not None and mutate not in entry.mutations:
        raise UsageError(
            f"identity {name!r} has no mutation {mutate!r}; "
            f"available: {', '.join(sorted(entry.mutations)) or 'none'}"
        )
    return entry.runner(**kwargs)
