"""q-special functions: Pochhammer symbols, the quantum dilogarithm phi,
the double product Phi, the q-binomial theorem, and the two-operator pairing
kernels.

Conventions (fixed by the infinite products, which are the definitions):

    (z)_n   = prod_{i=0}^{n-1} (1 - q^i z)
    phi(y)  = prod_{i>=0} (1 - q^i y)
            = sum_n q^{n(n-1)/2} (-y)^n / (q)_n
    phi(y)^{-1} = sum_n y^n / (q)_n
    Phi(y)  = prod_{i,j>=0} (1 - q^i t^j y) = exp(-sum_k y^k /((1-q^k)(1-t^k) k))

so phi(q y) = phi(y)/(1 - y) holds term by term.
"""

from __future__ import annotations

from typing import Callable

from gmpy2 import mpq

from .coeffield import elem_pow
from .errors import DegenerateParameterError, EvaluationPoleError, NonExpandableError, UsageError
from .series import (
    BiSeries,
    DegreeWindow,
    MonomialArg,
    series_add,
    series_mul,
    series_one,
    series_scale,
    series_sub,
)


def qpoch(z, n: int, q):
    """Finite q-Pochhammer (z)_n; negative lengths are not used anywhere in scope."""
    if n < 0:
        raise UsageError("negative Pochhammer length")
    one = _one_like(q)
    acc = one
    qi = one
    for _ in range(n):
        acc = acc * (one - qi * z)
        qi = qi * q
    return acc


def _one_like(q):
    if isinstance(q, (int, mpq)):
        return mpq(1)
    if hasattr(q, "dom"):
        return q.dom.one
    return q.field.one


def _term_count(arg: MonomialArg, window: DegreeWindow) -> int:
    """Largest power of the argument monomial that can land inside the window."""
    if arg.dL > 0:
        n = window.lmax // arg.dL
    else:
        n = window.xmax // arg.dx
    return max(n, 0)


def phi_expand(arg: MonomialArg, window: DegreeWindow, domain, q,
               inverse: bool = False) -> BiSeries:
    """Truncated quantum dilogarithm phi(c L^a x^b) or its reciprocal.

    Uses the closed coefficient formulas above; every coefficient inside the
    window is exact because the n-th term sits at degree n*(a, b).
    """
    if not isinstance(arg, MonomialArg):
        raise NonExpandableError("phi argument must be a (coeff, dL, dx) monomial")
    q = domain.lift(q)
    c = domain.lift(arg.coeff)
    depth, shift = arg.support()
    nmax = _term_count(arg, window)
    terms = {}
    acc = domain.one          # c^n
    poch = domain.one         # (q)_n = prod_{j=1..n} (1 - q^j)
    qpow = domain.one         # q^n
    qtri = domain.one         # q^{n(n-1)/2}
    for n in range(nmax + 1):
        if n:
            acc = acc * c
            qtri = qtri * qpow
            qpow = qpow * q
            poch = poch * (domain.one - qpow)
            if domain.is_zero(poch):
                raise DegenerateParameterError("(q)_n vanishes: q is a root of unity here")
        key = (n * arg.dL, n * arg.dx)
        # never filter below the window's xmin: the support floor extends it
        if key[0] > window.lmax or key[1] > window.xmax:
            continue
        if inverse:
            coeff = acc * domain.invert(poch)
        else:
            sign = domain.one if n % 2 == 0 else -domain.one
            coeff = sign * qtri * acc * domain.invert(poch)
        terms[key] = coeff
    return BiSeries(domain, window, terms, depth, shift)


def series_exp(p: BiSeries) -> BiSeries:
    """exp of a series with zero constant term, truncated on p's window."""
    dom = p.domain
    if (0, 0) in p.terms:
        raise UsageError("series_exp needs a vanishing constant term")
    out = series_one(dom, p.window)
    term = series_one(dom, p.window)
    j = 0
    while True:
        j += 1
        term = series_scale(series_mul(term, p), dom.invert(dom.lift(j)))
        if term.is_zero():
            break
        out = series_add(out, term)
    return out


def exp_power_sum(coef: Callable[[int], object], arg: MonomialArg,
                  window: DegreeWindow, domain) -> BiSeries:
    """exp( sum_{k>=1} coef(k) * arg^k / k ) truncated on the window.

    The whole series lives on the ray n*(dL, dx), so the exponential is taken
    univariately there via the derivative recurrence n E_n = sum k p_k E_{n-k}.
    """
    c = domain.lift(arg.coeff)
    nmax = _term_count(arg, window)
    p = [domain.zero]
    ck = domain.one
    for k in range(1, nmax + 1):
        ck = ck * c
        p.append(coef(k) * ck * domain.invert(domain.lift(k)))
    e = [domain.one]
    for n in range(1, nmax + 1):
        acc = domain.zero
        for k in range(1, n + 1):
            acc = acc + domain.lift(k) * p[k] * e[n - k]
        e.append(acc * domain.invert(domain.lift(n)))
    terms = {}
    for n in range(nmax + 1):
        key = (n * arg.dL, n * arg.dx)
        if key[0] > window.lmax or key[1] > window.xmax:
            continue
        terms[key] = e[n]
    return BiSeries(domain, window, terms, *arg.support())


def bigphi_expand(arg: MonomialArg, window: DegreeWindow, domain, q, t,
                  inverse: bool = False) -> BiSeries:
    """Double infinite q-Pochhammer product Phi (or its reciprocal), truncated."""
    q = domain.lift(q)
    t = domain.lift(t)
    sign = domain.one if inverse else -domain.one
    qk = [domain.one]
    tk = [domain.one]

    def coef(k: int):
        while len(qk) <= k:
            qk.append(qk[-1] * q)
            tk.append(tk[-1] * t)
        den = (domain.one - qk[k]) * (domain.one - tk[k])
        if domain.is_zero(den):
            raise DegenerateParameterError(
                "(1-q^k)(1-t^k) vanishes: parameters sit on a root of unity"
            )
        return sign * domain.invert(den)

    return exp_power_sum(coef, arg, window, domain)


def phi_product_oracle(arg: MonomialArg, window: DegreeWindow, domain, q,
                       factors: int | None = None) -> BiSeries:
    """Finite product prod_{i<K} (1 - q^i arg): the independent route to phi.

    With K exceeding the window order the truncated product agrees with
    phi_expand coefficient for coefficient; used as a test oracle.
    """
    q = domain.lift(q)
    c = domain.lift(arg.coeff)
    if factors is None:
        factors = _term_count(arg, window) + 1
    out = series_one(domain, window)
    qi = domain.one
    for _ in range(factors):
        mono = BiSeries(domain, window, {(arg.dL, arg.dx): -qi * c}, *arg.support())
        out = series_mul(out, series_add(series_one(domain, window), mono))
        qi = qi * q
    return out


def qbinomial_check(x_arg: MonomialArg, y, window: DegreeWindow, domain, q) -> BiSeries:
    """Residual of the q-binomial theorem phi(x)/phi(x/y) = sum (y)_n/(q)_n (x/y)^n."""
    q = domain.lift(q)
    y = domain.lift(y)
    scaled = MonomialArg(domain.lift(x_arg.coeff) * domain.invert(y), x_arg.dL, x_arg.dx)
    lhs = series_mul(
        phi_expand(x_arg, window, domain, q),
        phi_expand(scaled, window, domain, q, inverse=True),
    )
    nmax = _term_count(x_arg, window)
    terms = {}
    num = domain.one           # (y)_n = prod_{i=0..n-1} (1 - q^i y)
    den = domain.one           # (q)_n
    arg_pow = domain.one       # (x/y)^n
    qn = domain.one            # q^{n-1} inside the update, q^n after
    for n in range(nmax + 1):
        if n:
            num = num * (domain.one - qn * y)
            qn = qn * q
            den = den * (domain.one - qn)
            arg_pow = arg_pow * scaled.coeff
        key = (n * x_arg.dL, n * x_arg.dx)
        if key[0] > window.lmax or key[1] > window.xmax:
            continue
        terms[key] = num * domain.invert(den) * arg_pow
    rhs = BiSeries(domain, window, terms, *x_arg.support())
    return series_sub(lhs, rhs)


PAIR_KINDS = ("SS", "SV", "VV")


def pair_kernel(kind: str, ratio_arg: MonomialArg, window: DegreeWindow, domain,
                q, t=None, qalpha=None, qgamma=None) -> BiSeries:
    """Two-operator pairing kernels as series in the coordinate ratio.

    The power-law prefactors (w^{2 beta}, z^{alpha}, y^{gamma alpha/2 beta}) are
    *not* part of the series and are excluded here.  Degenerate-Verma powers
    enter only through q^alpha, q^gamma supplied as field elements.
    """
    q = domain.lift(q)
    if kind not in PAIR_KINDS:
        raise UsageError(f"kernel kind must be one of {PAIR_KINDS}")
    if kind == "SS":
        if t is None:
            raise UsageError("SS kernel needs t")
        t = domain.lift(t)
        qt = q * domain.invert(t)

        def coef(k: int):
            qk, tk, qtk = elem_pow(domain, q, k), elem_pow(domain, t, k), elem_pow(domain, qt, k)
            den = domain.one - qk
            if domain.is_zero(den):
                raise EvaluationPoleError("1 - q^k vanishes in the SS kernel")
            return -(domain.one + qtk) * (domain.one - tk) * domain.invert(den)

    elif kind == "SV":
        if qalpha is None:
            raise UsageError("SV kernel needs q^alpha")
        qa = domain.lift(qalpha)

        def coef(k: int):
            qk = elem_pow(domain, q, k)
            den = domain.one - qk
            if domain.is_zero(den):
                raise EvaluationPoleError("1 - q^k vanishes in the SV kernel")
            return -(domain.one - elem_pow(domain, qa, k)) * domain.invert(den)

    else:
        if qalpha is None or qgamma is None or t is None:
            raise UsageError("VV kernel needs q^alpha, q^gamma and t")
        qa, qg, t = domain.lift(qalpha), domain.lift(qgamma), domain.lift(t)

        def coef(k: int):
            qk = elem_pow(domain, q, k)
            tk = elem_pow(domain, t, k)
            qmk = domain.invert(qk)
            den = (domain.one - qmk) * (domain.one - tk) * (domain.one + qk * domain.invert(tk))
            if domain.is_zero(den):
                raise EvaluationPoleError("VV kernel denominator vanishes at this point")
            num = (domain.one - elem_pow(domain, qa, k)) \
                * (domain.one - domain.invert(elem_pow(domain, qg, k)))
            return -num * domain.invert(den)

    return exp_power_sum(coef, ratio_arg, window, domain)
