"""Difference-operator calculus on truncated series.

The main diagonal operator acts on monomials as

    gamma x^n = q^{n(n+1)/2} x^n,   n in Z,

with Lambda inert.  Theorem-20-type equations sandwich two gamma's between
multiplication operators built from quantum-dilogarithm factors, composed with
the argument shift x -> x/(tqQ).

Window bookkeeping: gamma, q-shifts and rescalings are window-free; every
multiplication by a depth-d factor costs d*lmax + shift of x-headroom.  The
pipeline object composes these requirements so that verifiers can compute the
exact padding an input series needs before anything expensive is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .coeffield import ParamPoint, elem_pow
from .errors import DegenerateParameterError, UsageError, WindowUnderflowError
from .nekrasov import higgs_psi, toda_limit
from .qkit import MonomialArg, bigphi_expand, phi_expand
from .series import (
    BiSeries,
    CompareReport,
    DegreeWindow,
    series_add,
    series_equal,
    series_is_zero_on,
    series_monomial,
    series_mul,
    series_one,
    series_rescale,
    series_restrict,
    series_scale,
    series_shift,
    series_sub,
)


def gamma_apply(f: BiSeries, q, power: int = 1) -> BiSeries:
    """Diagonal action q^{power * dx(dx+1)/2} on every coefficient; window kept."""
    if power not in (1, -1):
        raise UsageError("gamma power must be +1 or -1")
    dom = f.domain
    q = dom.lift(q)
    cache: dict[int, Any] = {}
    out = {}
    for (dL, dx), c in f.terms.items():
        wgt = cache.get(dx)
        if wgt is None:
            n = dx * (dx + 1) // 2
            wgt = cache[dx] = elem_pow(dom, q, power * n)
        out[(dL, dx)] = c * wgt
    return BiSeries(dom, f.window, out, f.depth, f.shift)


def pshift_apply(f: BiSeries, q, k: int = 1) -> BiSeries:
    """Substitution x -> q^k x as a diagonal weight q^{k dx}; window kept."""
    dom = f.domain
    q = dom.lift(q)
    out = {}
    cache: dict[int, Any] = {}
    for (dL, dx), c in f.terms.items():
        wgt = cache.get(dx)
        if wgt is None:
            wgt = cache[dx] = elem_pow(dom, q, k * dx)
        out[(dL, dx)] = c * wgt
    return BiSeries(dom, f.window, out, f.depth, f.shift)


def xhat_apply(f: BiSeries, q) -> BiSeries:
    """x-hat: multiply by x after the unit q-shift, (xhat f)(x) = x f(qx)."""
    return series_shift(pshift_apply(f, q, 1), f.domain.one, 0, 1)


def basic_shift_relations_check(window: DegreeWindow, domain, q,
                                mutate: str | None = None) -> bool:
    """p-hat/gamma and gamma/x-hat exchange relations on all window monomials."""
    for dx in range(window.xmin, window.xmax):
        mono = series_monomial(domain, domain.one, 0, dx, window)
        a = pshift_apply(gamma_apply(mono, q), q)
        b = gamma_apply(pshift_apply(mono, q), q)
        if not series_equal(a, b, a.window).equal:
            return False
        lhs = gamma_apply(xhat_apply(mono, q), q)
        if mutate == "gamma-xhat":
            rhs = xhat_apply(gamma_apply(mono, q), q)
        else:
            rhs = pshift_apply(xhat_apply(gamma_apply(mono, q), q), q)
        win = DegreeWindow(window.lmax, min(window.xmin + 1, 0), window.xmax - 1) \
            if window.xmax >= 1 else lhs.window
        if not series_equal(lhs, rhs, win).equal:
            return False
    return True


# ---------------------------------------------------------------------------
# composable operator pipelines


@dataclass(frozen=True)
class GammaStep:
    q: Any
    power: int = 1

    def required_window(self, out: DegreeWindow) -> DegreeWindow:
        return out

    def apply(self, f: BiSeries) -> BiSeries:
        return gamma_apply(f, self.q, self.power)

    def describe(self) -> str:
        return "gamma" if self.power == 1 else "gamma^-1"


@dataclass(frozen=True)
class PShiftStep:
    q: Any
    k: int

    def required_window(self, out: DegreeWindow) -> DegreeWindow:
        return out

    def apply(self, f: BiSeries) -> BiSeries:
        return pshift_apply(f, self.q, self.k)

    def describe(self) -> str:
        return f"pshift({self.k})"


@dataclass(frozen=True)
class RescaleStep:
    cL: Any
    cx: Any

    def required_window(self, out: DegreeWindow) -> DegreeWindow:
        return out

    def apply(self, f: BiSeries) -> BiSeries:
        return series_rescale(f, self.cL, self.cx)

    def describe(self) -> str:
        return "rescale"


@dataclass(frozen=True)
class MulStep:
    """Multiplication by a factor built on demand on a big-enough window."""

    build: Callable[[DegreeWindow], BiSeries]
    depth: int
    shift: int = 0
    label: str = "factor"

    def required_window(self, out: DegreeWindow) -> DegreeWindow:
        pad = self.depth * out.lmax + self.shift
        return DegreeWindow(out.lmax, min(out.xmin, -(out.lmax + pad)), out.xmax + pad)

    def apply(self, f: BiSeries) -> BiSeries:
        w = f.window
        factor_window = DegreeWindow(
            w.lmax, w.xmin, w.xmax + f.depth * w.lmax + f.shift
        )
        return series_mul(self.build(factor_window), f)

    def describe(self) -> str:
        return f"mul[{self.label}, depth={self.depth}]"


@dataclass(frozen=True)
class MonomialStep:
    coeff: Any
    dL: int
    dx: int

    def required_window(self, out: DegreeWindow) -> DegreeWindow:
        lmax = out.lmax - self.dL
        if lmax < 0 or out.xmax - self.dx < 0:
            raise WindowUnderflowError("monomial step exhausts the target window")
        return DegreeWindow(lmax, min(out.xmin - self.dx, 0), out.xmax - self.dx)

    def apply(self, f: BiSeries) -> BiSeries:
        return series_shift(f, self.coeff, self.dL, self.dx)

    def describe(self) -> str:
        return f"mono(L^{self.dL} x^{self.dx})"


class SeriesOperator:
    """Pipeline of primitive actions, leftmost step outermost.

    ``required_window`` folds each step's window transformation so callers know
    how much padding the input series needs for a target output window.
    """

    def __init__(self, steps: Sequence[Any]):
        self.steps = tuple(steps)

    def required_window(self, out: DegreeWindow) -> DegreeWindow:
        w = out
        for step in self.steps:
            w = step.required_window(w)
        return w

    def apply(self, f: BiSeries) -> BiSeries:
        for step in reversed(self.steps):
            f = step.apply(f)
        return f

    def describe(self) -> str:
        return " . ".join(s.describe() for s in self.steps)


# ---------------------------------------------------------------------------
# the three prefactors of the non-stationary equation


def _phi_factor(domain, q, coeff, degs, inverse):
    def build(window: DegreeWindow) -> BiSeries:
        return phi_expand(MonomialArg(coeff, *degs), window, domain, q, inverse=inverse)
    return build


def _bigphi_factor(domain, q, t, coeff, degs, inverse):
    def build(window: DegreeWindow) -> BiSeries:
        return bigphi_expand(MonomialArg(coeff, *degs), window, domain, q, t,
                             inverse=inverse)
    return build


def _prefactor_recipe(which: int, point: ParamPoint, mutate: str | None):
    """Factor list (kind, coeff, (dL, dx), inverse) for A_1, A_2, A_3."""
    dom = point.domain
    q, t, Q, v = point.q, point.t, point.Q, point.v
    inv = dom.invert
    T = point.T
    if which == 1:
        t2v = t * t * v
        return [
            ("phi", T(1) * t * v, (0, 1), True),
            ("Phi", T(3) * t2v, (1, -1), False),
            ("Phi", T(3) * q * v, (1, -1), True),
            ("Phi", T(4) * t2v, (1, -1), False),
            ("Phi", T(4) * t * t * inv(v), (1, -1), True),
        ]
    if which == 2:
        first = q * T(2) * T(3)
        if mutate == "a2":
            first = first * q
        return [
            ("phi", first, (1, 0), False),
            ("phi", t * T(1) * T(4), (1, 0), False),
            ("phi", -(T(1) * T(2)), (0, 1), True),
            ("phi", -inv(Q), (0, 1), True),
            ("phi", -(T(3) * T(4) * Q * q * t), (1, -1), True),
            ("phi", -q, (1, -1), True),
        ]
    if which == 3:
        q2 = q * q
        return [
            ("phi", T(2) * inv(Q) * inv(q) * v, (0, 1), True),
            ("Phi", T(3) * Q * q2 * v, (1, -1), False),
            ("Phi", T(3) * Q * q2 * inv(v), (1, -1), True),
            ("Phi", T(4) * Q * t * t * t * v, (1, -1), False),
            ("Phi", T(4) * Q * q2 * inv(v), (1, -1), True),
        ]
    raise UsageError("prefactor index must be 1, 2 or 3")


def prefactor_A(which: int, window: DegreeWindow, point: ParamPoint,
                inverse: bool = False, mutate: str | None = None) -> BiSeries:
    """One of the three multiplication prefactors, exactly truncated.

    With ``inverse=True`` every dilogarithm factor flips, giving the exact
    reciprocal series without a series inversion.
    """
    dom = point.domain
    recipe = _prefactor_recipe(which, point, mutate)
    q, t = point.q, point.t
    depth_total = sum(1 for (_, _, degs, _) in recipe if degs[1] < 0)
    pad = DegreeWindow(window.lmax, window.xmin,
                       window.xmax + depth_total * window.lmax)
    out = series_one(dom, pad)
    for kind, coeff, degs, inv_flag in recipe:
        flag = inv_flag ^ inverse
        arg = MonomialArg(coeff, *degs)
        if kind == "phi":
            factor = phi_expand(arg, pad, dom, q, inverse=flag)
        else:
            factor = bigphi_expand(arg, pad, dom, q, t, inverse=flag)
        out = series_mul(out, factor)
    if out.window.xmax < window.xmax or out.window.lmax < window.lmax:
        raise WindowUnderflowError("prefactor window fell short of the request")
    return series_restrict(out, DegreeWindow(window.lmax, out.window.xmin, window.xmax))


def nonstat_pipeline(window: DegreeWindow, point: ParamPoint,
                     mutate: str | None = None) -> SeriesOperator:
    """A1 . gamma . A2 . gamma . A3 . rescale(x -> x/(tqQ)) as one pipeline."""
    dom = point.domain
    q, t, Q = point.q, point.t, point.Q
    shift_const = t * q if mutate == "shift" else t * q * Q
    steps = [
        MulStep(lambda w: prefactor_A(1, w, point), 1, 0, "A1"),
        GammaStep(q, 1),
        MulStep(lambda w: prefactor_A(2, w, point, mutate=mutate), 1, 0, "A2"),
        GammaStep(q, 1),
        MulStep(lambda w: prefactor_A(3, w, point), 1, 0, "A3"),
        RescaleStep(dom.one, dom.invert(shift_const)),
    ]
    return SeriesOperator(steps)


def nonstat_rhs(psi: BiSeries, window: DegreeWindow, point: ParamPoint,
                mutate: str | None = None) -> BiSeries:
    """Right-hand side of the non-stationary equation applied to psi.

    ``psi`` must be certified on the pipeline's required window; the error
    message reports the exact padding otherwise.
    """
    pipe = nonstat_pipeline(window, point, mutate=mutate)
    need = pipe.required_window(window)
    if psi.window.xmax < need.xmax or psi.window.lmax < need.lmax:
        raise WindowUnderflowError(
            f"input needs window lmax={need.lmax}, xmax={need.xmax}; "
            f"got lmax={psi.window.lmax}, xmax={psi.window.xmax}"
        )
    return pipe.apply(psi)


def theorem20_residual(window: DegreeWindow, point: ParamPoint,
                       mutate: str | None = None) -> tuple[BiSeries, DegreeWindow]:
    """Residual of the non-stationary equation at one parameter point.

    Computed in the rearranged form

        gamma^-1 A1^-1 Psi(t Lambda, x)  -  A2 gamma A3 Psi(Lambda, x/(tqQ))

    which needs one wavefunction evaluation on xmax + 2*lmax instead of the
    naive xmax + 3*lmax; the two forms vanish together since A1 is a unit.
    """
    dom = point.domain
    q, t, Q = point.q, point.t, point.Q
    L = window.lmax
    pad = DegreeWindow(L, min(window.xmin, -L), window.xmax + 2 * L)
    psi = higgs_psi(pad, point)
    shift_const = t * q if mutate == "shift" else t * q * Q
    left = series_mul(prefactor_A(1, pad, point, inverse=True),
                      series_rescale(psi, t, dom.one))
    left = gamma_apply(left, q, -1)
    right = series_mul(prefactor_A(3, pad, point),
                       series_rescale(psi, dom.one, dom.invert(shift_const)))
    right = gamma_apply(right, q, 1)
    right = series_mul(prefactor_A(2, pad, point, mutate=mutate), right)
    residual = series_sub(left, right)
    cert = residual.window
    if cert.lmax < window.lmax or cert.xmax < window.xmax:
        raise WindowUnderflowError(
            f"certified {cert} does not cover requested {window}"
        )
    return residual, cert


def verify_theorem20(window: DegreeWindow, point: ParamPoint,
                     mutate: str | None = None) -> CompareReport:
    residual, cert = theorem20_residual(window, point, mutate=mutate)
    return series_is_zero_on(residual, window)


# ---------------------------------------------------------------------------
# Toda-limit operators


def toda_kernel(window: DegreeWindow, domain, q, Q) -> BiSeries:
    """prod_n (1 + q^n x/Q)^-1 (1 + q^{n+1} Lambda/x)^-1 as a truncated series."""
    a = phi_expand(MonomialArg(-domain.invert(Q), 0, 1), window, domain, q, inverse=True)
    b = phi_expand(MonomialArg(-domain.lift(q), 1, -1), window, domain, q, inverse=True)
    return series_mul(a, b)


def toda_H_apply(f: BiSeries, domain, q, t, Q, window: DegreeWindow | None = None,
                 mutate: str | None = None) -> BiSeries:
    """Evolution operator: gamma . kernel . gamma . (x -> x/(tqQ)) applied to f."""
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    shift_const = t * q * Q
    g = series_rescale(f, domain.one, domain.invert(shift_const))
    g = gamma_apply(g, q, 1)
    kw = DegreeWindow(g.window.lmax, g.window.xmin,
                      g.window.xmax + g.depth * g.window.lmax + g.shift)
    g = series_mul(toda_kernel(kw, domain, q, Q), g)
    g = gamma_apply(g, q, 1)
    if window is not None and (g.window.xmax < window.xmax
                               or g.window.lmax < window.lmax):
        raise WindowUnderflowError(
            f"certified {g.window} does not cover requested {window}"
        )
    return g


def toda_hamiltonian_apply(f: BiSeries, domain, q, t, Q,
                           mutate: str | None = None) -> BiSeries:
    """Relativistic 2-body affine Toda Hamiltonian:
    f(L, qx) + tQ f(L, x/q) + tx f(L, x) + (L/x) f(L, x)."""
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    tQ = t * t * Q if mutate == "tQ" else t * Q
    term1 = pshift_apply(f, q, 1)
    term2 = series_scale(pshift_apply(f, q, -1), tQ)
    term3 = series_shift(f, t, 0, 1)
    term4 = series_shift(f, domain.one, 1, -1)
    out = series_add(series_add(term1, term2), series_add(term3, term4))
    return out


def commutator_check(domain, q, t, Q, lam_range: int = 2, x_range: int = 3,
                     mutate: str | None = None) -> list[dict]:
    """[H, H_Toda] on every basis monomial; each certified window must vanish.

    Returns one record per monomial with the certified window and verdict; the
    certified window is required to reach past the monomial itself so a pass
    can never be vacuous.
    """
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    results = []
    for a in range(lam_range + 1):
        for b in range(-x_range, x_range + 1):
            lmax_w = a + 2
            base = DegreeWindow(lmax_w, min(b - 4, 0), max(b + lmax_w + 4, lmax_w + 2))
            mono = series_monomial(domain, domain.one, a, b, base)
            comp1 = toda_H_apply(toda_hamiltonian_apply(mono, domain, q, t, Q,
                                                        mutate=mutate),
                                 domain, q, t, Q)
            comp2 = toda_hamiltonian_apply(toda_H_apply(mono, domain, q, t, Q),
                                           domain, q, t, Q, mutate=mutate)
            residual = series_sub(comp1, comp2)
            w = residual.window
            if w.lmax < a + 1 or w.xmax < b + 1:
                raise WindowUnderflowError(
                    f"certified window {w} is vacuous for monomial ({a}, {b})"
                )
            report = series_is_zero_on(residual, w)
            results.append({
                "monomial": (a, b),
                "window": w.as_dict(),
                "passed": report.equal,
                "first_mismatch": report.first_mismatch,
            })
    return results


def solve_toda(window: DegreeWindow, domain, q, t, Q) -> BiSeries:
    """Unique normalized series solving the Toda-limit evolution equation.

    Solves coefficients level by level; the pivot at (a, b) is
    t^a - q^{b(b+1)} (tqQ)^{-b}, required nonzero away from the origin.
    """
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    one = domain.one
    lmax = window.lmax
    hi = lambda a: window.xmax + (lmax - a)
    kw = DegreeWindow(lmax, min(window.xmin, -lmax), hi(0) + lmax)
    K = toda_kernel(kw, domain, q, Q)
    tqQ = t * q * Q
    tqQ_inv = domain.invert(tqQ)
    tpow = {0: one}
    for a in range(1, lmax + 1):
        tpow[a] = tpow[a - 1] * t

    def rhs_weight(b: int, bsrc: int):
        # gamma at x^b, source gamma and argument shift at x^bsrc
        n1 = b * (b + 1) // 2
        n2 = bsrc * (bsrc + 1) // 2
        return elem_pow(domain, q, n1 + n2) * elem_pow(domain, tqQ_inv, bsrc)

    coeffs: dict[tuple[int, int], Any] = {}
    kitems = [(k, v) for k, v in K.terms.items() if k != (0, 0)]
    for a in range(lmax + 1):
        for b in range(-a, hi(a) + 1):
            pivot = tpow[a] - elem_pow(domain, q, b * (b + 1)) * elem_pow(domain, tqQ_inv, b)
            if (a, b) == (0, 0):
                coeffs[(0, 0)] = one
                continue
            if domain.is_zero(pivot):
                raise DegenerateParameterError(
                    f"resonance t^{a} = q^{b*(b+1)} (tqQ)^-{b}: re-randomize the point"
                )
            acc = domain.zero
            for (da, db), kv in kitems:
                sa, sb = a - da, b - db
                if sa < 0 or sb < -sa or sb > hi(sa):
                    continue
                src = coeffs.get((sa, sb))
                if src is None:
                    continue
                acc = acc + kv * rhs_weight(b, sb) * src
            if not domain.is_zero(acc):
                coeffs[(a, b)] = acc * domain.invert(pivot)
    out = {k: v for k, v in coeffs.items() if k[1] <= window.xmax}
    return BiSeries(domain, window, out, depth=1, shift=0)


def toda_residual(psi: BiSeries, window: DegreeWindow, domain, q, t, Q) -> BiSeries:
    """Psi(t Lambda, x) - H Psi on the requested window."""
    lhs = series_rescale(psi, domain.lift(t), domain.one)
    rhs = toda_H_apply(psi, domain, q, t, Q, window=window)
    return series_sub(series_restrict(lhs, rhs.window), rhs)


# ---------------------------------------------------------------------------
# cut-and-join representation


def wrep_region_ok(q, t, Q) -> bool:
    """Convergence region of the infinite operator product: t, qtQ, 1/(qQ) > 1."""
    return t > 1 and q * t * Q > 1 and 1 / (q * Q) > 1


def wrep_partial(M: int, window: DegreeWindow, domain, q, t, Q) -> BiSeries:
    """Partial product with factors m = 0..M applied right to left to 1.

    The m-th kernel is 1/(phi(-q^-m t^-m x / Q^{m+1}) phi(-q^{m+1} t^-1 L Q^m / x)).
    """
    if M < 0:
        raise UsageError("the iteration count must be >= 0")
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    inv = domain.invert
    start = DegreeWindow(window.lmax, min(window.xmin, -window.lmax),
                         window.xmax + (M + 1) * window.lmax)
    f = series_one(domain, start)
    for m in range(M, -1, -1):
        cx = -elem_pow(domain, q, -m) * elem_pow(domain, t, -m) * elem_pow(domain, inv(Q), m + 1)
        cl = -elem_pow(domain, q, m + 1) * inv(t) * elem_pow(domain, Q, m)
        f = gamma_apply(f, q, 1)
        kw = DegreeWindow(f.window.lmax, f.window.xmin,
                          f.window.xmax + f.depth * f.window.lmax + f.shift)
        kernel = series_mul(
            phi_expand(MonomialArg(cx, 0, 1), kw, domain, q, inverse=True),
            phi_expand(MonomialArg(cl, 1, -1), kw, domain, q, inverse=True),
        )
        f = series_mul(kernel, f)
        f = gamma_apply(f, q, 1)
    if f.window.xmax < window.xmax:
        raise WindowUnderflowError("padding bookkeeping failed in the partial product")
    return series_restrict(f, DegreeWindow(window.lmax, f.window.xmin, window.xmax))


def wrep_convergence(M_max: int, window: DegreeWindow, q, t, Q) -> dict:
    """Exact per-coefficient distances of the partial products to the solver.

    Returns the target, the per-M error tables and monotonicity flags; callers
    decide on regions and thresholds.
    """
    from .coeffield import RationalDomain

    domain = RationalDomain()
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    target = solve_toda(window, domain, q, t, Q)
    keys = [(a, b) for a in range(window.lmax + 1)
            for b in range(window.xmin, window.xmax + 1)]
    errors: dict[tuple[int, int], list] = {k: [] for k in keys}
    for M in range(M_max + 1):
        part = wrep_partial(M, window, domain, q, t, Q)
        for k in keys:
            errors[k].append(abs(part.known(*k) - target.known(*k)))
    report = {
        "region_ok": wrep_region_ok(q, t, Q),
        "errors": errors,
        "monotone": {},
        "shrank_10x": {},
    }
    for k, es in errors.items():
        strict = all(e2 < e1 or (e1 == 0 and e2 == 0)
                     for e1, e2 in zip(es, es[1:]))
        report["monotone"][k] = strict
        report["shrank_10x"][k] = (es[0] == 0 and es[-1] == 0) or \
            (es[0] != 0 and es[-1] * 10 <= es[0])
    return report


def toda_limit_matches_solver(window: DegreeWindow, u, s, Q,
                              ratios=(1, 1, 1, 1)) -> CompareReport:
    """Cross-check: the T -> 0 limit of the Higgsed sum equals the solver output."""
    from .coeffield import RationalDomain, rat

    limit = toda_limit(window, u, s, Q, ratios)
    dom = RationalDomain()
    qv, tv = rat(u) ** 2, rat(s) ** 2
    solved = solve_toda(window, dom, qv, tv, rat(Q))
    return series_equal(limit, solved, window)
