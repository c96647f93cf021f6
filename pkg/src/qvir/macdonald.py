"""One-row Macdonald polynomials and the identity chain behind the
special-point proof: the three-term difference recurrence, the symmetric-
polynomial solution, the two half-equations, the generating-function identity,
the terminating q-series identity and q-Saalschutz.

All verifiers work over exact coefficient fields; the generating-function
checks adjoin the bookkeeping variable z to the coefficients as a (possibly
truncated) Laurent polynomial rather than as a third series variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Any, Sequence

from .coeffield import LaurentZDomain, elem_pow
from .errors import UsageError
from .operators import gamma_apply
from .qkit import MonomialArg, phi_expand, qpoch
from .series import (
    BiSeries,
    CompareReport,
    DegreeWindow,
    series_add,
    series_equal,
    series_is_zero_on,
    series_map,
    series_monomial,
    series_mul,
    series_mul_factor,
    series_one,
    series_rescale,
    series_restrict,
    series_scale,
    series_shift,
    series_sub,
)


# ---------------------------------------------------------------------------
# one-row Macdonald polynomials in three variables


@dataclass(frozen=True)
class SymmetricPolynomial3:
    """Homogeneous symmetric polynomial of degree r in three variables.

    Coefficients are stored on sorted exponent triples; the full monomial orbit
    is reconstructed on evaluation.
    """

    degree: int
    coeffs: dict

    def orbit_items(self):
        for rep, c in sorted(self.coeffs.items(), reverse=True):
            for mono in set(permutations(rep)):
                yield mono, c

    def evaluate_on_monomials(self, monos: Sequence[tuple], window: DegreeWindow,
                              domain) -> BiSeries:
        """Substitute (coeff, dL, dx) monomials for the three variables."""
        if len(monos) != 3:
            raise UsageError("exactly three substitution monomials are required")
        out = None
        for expo, c in self.orbit_items():
            coeff = domain.lift(c)
            dL = dx = 0
            for (mc, ml, mx), e in zip(monos, expo):
                coeff = coeff * elem_pow(domain, domain.lift(mc), e)
                dL += ml * e
                dx += mx * e
            if dL > window.lmax or dx > window.xmax:
                continue
            term = series_monomial(domain, coeff, dL, dx, window)
            out = term if out is None else series_add(out, term)
        return out if out is not None else BiSeries(domain, window, {})


def macdonald_onerow(r: int, domain, q, t, mutate: str | None = None) -> SymmetricPolynomial3:
    """One-row polynomial from the generating product of t-to-q dilogarithm
    ratios, normalized so the leading pure power has coefficient one."""
    if r < 0:
        raise UsageError("row length must be >= 0")
    q, t = domain.lift(q), domain.lift(t)
    ratio = [qpoch(t, n, q) * domain.invert(qpoch(q, n, q)) for n in range(r + 1)]
    coeffs: dict[tuple, Any] = {}
    for n1 in range(r + 1):
        for n2 in range(r + 1 - n1):
            n3 = r - n1 - n2
            key = tuple(sorted((n1, n2, n3), reverse=True))
            if key in coeffs:
                continue
            coeffs[key] = ratio[n1] * ratio[n2] * ratio[n3]
    norm = qpoch(q, r, q) * domain.invert(qpoch(t, r, q))
    coeffs = {k: norm * c for k, c in coeffs.items()}
    if mutate == "p2" and r >= 2:
        key = tuple(sorted((1, 1, 0) if r == 2 else (r - 1, 1, 0), reverse=True))
        if key in coeffs:
            coeffs[key] = coeffs[key] + domain.one
    return SymmetricPolynomial3(r, coeffs)


# ---------------------------------------------------------------------------
# the closed-form double sums


def u_series(window: DegreeWindow, domain, q, t, Q) -> BiSeries:
    """Higgsed wavefunction at the distinguished point as an explicit double sum.

    Terms sit at (m, n - m) with n <= m; the factor (q^-m)_n kills everything
    above the diagonal, so no positive x-degrees occur.
    """
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    inv = domain.invert
    terms: dict[tuple[int, int], Any] = {}
    for m in range(window.lmax + 1):
        for n in range(0, m + 1):
            if n - m > window.xmax:
                continue
            num = (qpoch(t * Q, n, q) * qpoch(q * Q * inv(t), m, q)
                   * qpoch(elem_pow(domain, q, -m), n, q)
                   * qpoch(elem_pow(domain, q, 1 - n) * inv(t), m, q))
            den = (qpoch(q * Q, m, q) * qpoch(q * Q * inv(t), n, q)
                   * qpoch(q, n, q) * qpoch(q, m, q))
            if domain.is_zero(den):
                raise UsageError("degenerate parameters in the double sum")
            coeff = (elem_pow(domain, q, n * m + n) * elem_pow(domain, t, -n)
                     * num * inv(den))
            if not domain.is_zero(coeff):
                terms[(m, n - m)] = coeff
    return BiSeries(domain, window, terms, depth=1, shift=0)


def v_series(window: DegreeWindow, domain, q, t, Q) -> BiSeries:
    """The square-root series: the common value of the two half-equations."""
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    inv = domain.invert
    t2 = t * t
    terms: dict[tuple[int, int], Any] = {}
    for m in range(window.lmax + 1):
        for n in range(0, m + 1):
            if n - m > window.xmax:
                continue
            num = (qpoch(t * Q, n, q) * qpoch(t, m, q)
                   * qpoch(elem_pow(domain, q, -m), n, q)
                   * qpoch(elem_pow(domain, q, 1 - n) * inv(t), m, q)
                   * qpoch(q * inv(t2), n, q) * qpoch(t2, m, q))
            den = (qpoch(q * Q, m, q) * qpoch(t, n, q)
                   * qpoch(elem_pow(domain, q, 1 - m) * inv(t), n, q)
                   * qpoch(t2 * elem_pow(domain, q, -n), m, q)
                   * qpoch(q, n, q) * qpoch(q, m, q))
            if domain.is_zero(den):
                raise UsageError("degenerate parameters in the double sum")
            sign = domain.one if (m - n) % 2 == 0 else -domain.one
            coeff = (elem_pow(domain, q, m) * sign * elem_pow(domain, Q, m - n)
                     * num * inv(den))
            if not domain.is_zero(coeff):
                terms[(m, n - m)] = coeff
    return BiSeries(domain, window, terms, depth=1, shift=0)


# ---------------------------------------------------------------------------
# linear-factor expansion helpers


def reciprocal_binomial(window: DegreeWindow, domain, cA, mA: tuple[int, int],
                        cB, mB: tuple[int, int]) -> BiSeries:
    """Exact window expansion of 1/(cA L^a x^b + cB L^c x^d).

    The pivot is the term with the lexicographically smaller (dL, dx); the
    other term over the pivot must be small in the series grading.
    """
    cA, cB = domain.lift(cA), domain.lift(cB)
    if (mB, 1) < (mA, 0):
        cA, cB, mA, mB = cB, cA, mB, mA
    dl, dx = mB[0] - mA[0], mB[1] - mA[1]
    if not (dl > 0 or (dl == 0 and dx > 0)):
        raise UsageError("binomial has no expandable corner in this grading")
    if mA[0] != 0:
        raise UsageError("pivot with positive Lambda degree is not supported")
    ratio = -cB * domain.invert(cA)
    pivot_inv = domain.invert(cA)
    out: dict[tuple[int, int], Any] = {}
    acc = pivot_inv
    k = 0
    while True:
        key = (k * dl, -mA[1] + k * dx)
        if key[0] > window.lmax or (dl == 0 and key[1] > window.xmax):
            break
        if key[1] <= window.xmax:
            out[key] = acc
        acc = acc * ratio
        k += 1
    depth = 0 if dx >= 0 else (-dx + dl - 1) // dl
    shift = max(0, mA[1])
    return BiSeries(domain, window, out, depth, shift)


def _linear(window, domain, terms):
    return BiSeries(domain, window, dict(terms),
                    depth=1 if any(k[1] < 0 for k in terms) else 0,
                    shift=max([0] + [-k[1] - k[0] for k in terms]))


def _ratio_product(window: DegreeWindow, domain, numerators, denominators,
                   extra_scalar) -> BiSeries:
    """prod(numerators) / prod(denominators) of binomials, exactly truncated.

    Each factor is given as ((cA, (la, xa)), (cB, (lb, xb))).
    """
    pad = DegreeWindow(
        window.lmax, min(window.xmin, -window.lmax - 2),
        window.xmax + (len(numerators) + len(denominators) + 1) * (window.lmax + 1) + 2,
    )
    out = series_scale(series_one(domain, pad), extra_scalar)
    for (ca, ma), (cb, mb) in numerators:
        out = series_mul(out, _linear(pad, domain, {ma: domain.lift(ca),
                                                    mb: domain.lift(cb)}))
    for (ca, ma), (cb, mb) in denominators:
        out = series_mul(out, reciprocal_binomial(pad, domain, ca, ma, cb, mb))
    if out.window.xmax < window.xmax or out.window.lmax < window.lmax:
        raise UsageError("internal padding fell short in a ratio expansion")
    return series_restrict(out, DegreeWindow(window.lmax, out.window.xmin, window.xmax))


def verify_macdonald_recurrence(window: DegreeWindow, domain, q, t, Q,
                                mutate: str | None = None) -> CompareReport:
    """Three-term difference recurrence for the double sum.

    c1 U(qL, qx) + c2 U(L, x/q) + c3 U(L/q, x) = (1 + t + t/Q) U(L, x) with the
    displayed rational prefactors, checked as exact series on the window.
    """
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    inv = domain.invert
    one = domain.one
    L = window.lmax
    upad = DegreeWindow(L, min(window.xmin, -L - 2), window.xmax + 2 * (L + 1) + 2)
    U = u_series(upad, domain, q, t, Q)

    c1 = _ratio_product(
        upad, domain,
        numerators=[((one, (0, 0)), (-t, (0, 1))), ((one, (0, 0)), (-one, (1, 0)))],
        denominators=[((one, (0, 0)), (-one, (0, 1))), ((t, (0, 0)), (-one, (1, 0)))],
        extra_scalar=t,
    )
    # The middle coefficient is (qL - t^2 x)(x - t) / (t (L - tx)(x - 1)),
    # which is the Macdonald-operator coefficient conjugated by the
    # dilogarithm prefactor; the printed denominator carries one extra (1 - x).
    c2 = _ratio_product(
        upad, domain,
        numerators=[((q, (1, 0)), (-t * t, (0, 1))), ((one, (0, 1)), (-t, (0, 0)))],
        denominators=[((one, (1, 0)), (-t, (0, 1))), ((one, (0, 1)), (-one, (0, 0)))],
        extra_scalar=inv(t),
    )
    c3 = _ratio_product(
        upad, domain,
        numerators=[((one, (1, 0)), (-q, (0, 1))), ((one, (1, 0)), (-t * t, (0, 0)))],
        denominators=[((one, (1, 0)), (-t, (0, 1))), ((one, (1, 0)), (-t, (0, 0)))],
        extra_scalar=t * inv(q * Q),
    )
    rhs_scalar = one + t + t * inv(Q) if mutate != "recurrence-const" \
        else one + t + t * Q
    lhs = series_add(
        series_add(series_mul(c1, series_rescale(U, q, q)),
                   series_mul(c2, series_rescale(U, one, inv(q)))),
        series_mul(c3, series_rescale(U, inv(q), one)),
    )
    residual = series_sub(lhs, series_scale(series_restrict(U, lhs.window), rhs_scalar))
    if residual.window.lmax < window.lmax or residual.window.xmax < window.xmax:
        raise UsageError("padding fell short in the recurrence check")
    return series_is_zero_on(residual, window)


def verify_macdonald_solution(r: int, window: DegreeWindow, domain, q, t,
                              mutate: str | None = None) -> CompareReport:
    """At Q = q^-r / t the double sum is a dilogarithm ratio times the one-row
    polynomial evaluated at (1, L/t, L/(tx))."""
    q, t = domain.lift(q), domain.lift(t)
    inv = domain.invert
    Qr = elem_pow(domain, q, -r) * inv(t)
    lhs = u_series(window, domain, q, t, Qr)
    pad = DegreeWindow(window.lmax, min(window.xmin, -window.lmax),
                       window.xmax + 2 * window.lmax)
    ratio = series_mul(
        phi_expand(MonomialArg(q * inv(t * t), 1, -1), pad, domain, q),
        phi_expand(MonomialArg(domain.one, 1, -1), pad, domain, q, inverse=True),
    )
    poly = macdonald_onerow(r, domain, q, t, mutate=mutate)
    pval = poly.evaluate_on_monomials(
        [(domain.one, 0, 0), (inv(t), 1, 0), (inv(t), 1, -1)], pad, domain)
    rhs = series_mul(ratio, pval)
    w = DegreeWindow(min(window.lmax, rhs.window.lmax), window.xmin,
                     min(window.xmax, rhs.window.xmax))
    return series_equal(lhs, rhs, w)


# ---------------------------------------------------------------------------
# the two half-equations


def _phi_group(window, domain, q, factors) -> BiSeries:
    """Product of dilogarithm factors with adaptive factor windows, so the
    requested window survives no matter how the factors' depths stack."""
    out = series_one(domain, window)
    for coeff, degs, inverse in factors:
        out = series_mul_factor(
            out,
            lambda w, c=coeff, d=degs, i=inverse: phi_expand(
                MonomialArg(c, *d), w, domain, q, inverse=i),
        )
    return out


def verify_halves(window: DegreeWindow, domain, q, t, Q) -> tuple[CompareReport, CompareReport]:
    """Both decompositions of the square-root series against the double sums."""
    q, t, Q = domain.lift(q), domain.lift(t), domain.lift(Q)
    inv = domain.invert
    one = domain.one
    L = window.lmax
    pad = DegreeWindow(L, min(window.xmin, -L), window.xmax + 4 * L)
    U = u_series(pad, domain, q, t, Q)
    V = v_series(window, domain, q, t, Q)

    inner1 = _phi_group(pad, domain, q, [
        (q * inv(t), (0, 1), False),
        (t, (1, -1), False),
    ])
    s1 = gamma_apply(series_mul(inner1, series_rescale(U, t, one)), q, -1)
    outer1 = _phi_group(pad, domain, q, [
        (-inv(t), (0, 1), False),
        (-q, (1, -1), False),
        (q * inv(t * t), (1, 0), True),
    ])
    lhs1 = series_mul(outer1, s1)
    res1 = series_sub(V, lhs1)

    inner2 = _phi_group(pad, domain, q, [
        (inv(q * Q), (0, 1), True),
        (q * q * Q * inv(t), (1, -1), True),
    ])
    s2 = gamma_apply(series_mul(inner2, series_rescale(U, one, inv(t * q * Q))), q, 1)
    outer2 = _phi_group(pad, domain, q, [
        (t, (1, 0), False),
        (-inv(Q), (0, 1), True),
        (-q * Q, (1, -1), True),
    ])
    lhs2 = series_mul(outer2, s2)
    res2 = series_sub(V, lhs2)

    for res in (res1, res2):
        if res.window.lmax < window.lmax or res.window.xmax < window.xmax:
            raise UsageError("padding fell short in the half-equation check")
    return (series_is_zero_on(res1, window), series_is_zero_on(res2, window))


# ---------------------------------------------------------------------------
# generating-function identity


def _zphi(zdom: LaurentZDomain, q, zdeg: int, c, inverse: bool):
    """phi(c z^zdeg) as a pure coefficient-ring element, truncated at the cap."""
    base = zdom.base
    cap = zdom.cap
    if cap is None:
        raise UsageError("pure-z dilogarithms need a truncated z-domain")
    nmax = cap // zdeg if zdeg > 0 else 0
    out = zdom.zero
    acc = base.one
    poch = base.one
    qpow = base.one
    qtri = base.one
    from .coeffield import ZLaurent

    for n in range(nmax + 1):
        if n:
            acc = acc * c
            qtri = qtri * qpow
            qpow = qpow * q
            poch = poch * (base.one - qpow)
        if inverse:
            val = acc * base.invert(poch)
        else:
            sign = base.one if n % 2 == 0 else -base.one
            val = sign * qtri * acc * base.invert(poch)
        out = out + ZLaurent(zdom, {n * zdeg: val})
    return out


def verify_genfunc(z_order: int, window: DegreeWindow, base_domain, q, t) -> CompareReport:
    """Generating function over the solution points Q = q^-r / t.

    LHS: sum_r z^r (t)_r/(q)_r [phi(q x/t) phi(t L/x) U(tL, x)] at Q = q^-r/t.
    RHS: phi(q x/t) phi(q L/(tx)) phi(tz)phi(tLz)phi(tLz/x)/(phi(z)phi(Lz)phi(Lz/x)).
    """
    q, t = base_domain.lift(q), base_domain.lift(t)
    inv = base_domain.invert
    zdom = LaurentZDomain(base_domain, cap=z_order)
    L = window.lmax
    pad = DegreeWindow(L, min(window.xmin, -L), window.xmax + 3 * L)

    lhs = None
    for r in range(z_order + 1):
        Qr = elem_pow(base_domain, q, -r) * inv(t)
        Ur = u_series(pad, base_domain, q, t, Qr)
        piece = series_mul(
            _phi_group(pad, base_domain, q, [(q * inv(t), (0, 1), False),
                                             (t, (1, -1), False)]),
            series_rescale(Ur, t, base_domain.one),
        )
        weight = qpoch(t, r, q) * inv(qpoch(q, r, q))
        zpiece = series_map(piece, lambda c, r=r, w=weight: zdom.z(r) * zdom.lift(w * c),
                            domain=zdom)
        lhs = zpiece if lhs is None else series_add(lhs, zpiece)

    zq = zdom.lift(q)
    scalar = _zphi(zdom, q, 1, t, False) * _zphi(zdom, q, 1, base_domain.one, True)
    rhs = series_map(
        _phi_group(pad, base_domain, q, [(q * inv(t), (0, 1), False),
                                         (q * inv(t), (1, -1), False)]),
        zdom.lift, domain=zdom)
    rhs = series_scale(rhs, scalar)
    zt = zdom.lift(t) * zdom.z(1)
    zone = zdom.z(1)
    for coeff, degs, inverse in [(zt, (1, 0), False), (zone, (1, 0), True),
                                 (zt, (1, -1), False), (zone, (1, -1), True)]:
        rhs = series_mul_factor(
            rhs,
            lambda w, c=coeff, d=degs, i=inverse: phi_expand(
                MonomialArg(c, *d), w, zdom, zq, inverse=i),
        )
    residual = series_sub(lhs, rhs)
    return series_is_zero_on(residual, window)


# ---------------------------------------------------------------------------
# the terminating q-series identity and q-Saalschutz


def verify_qseries_identity(window: DegreeWindow, base_domain, q, t) -> dict:
    """The Pochhammer-ratio identity equivalent to the first half-equation.

    Works over an exact z-Laurent coefficient ring; the k-th summand carries
    (zL)^k from the inverted Pochhammer, which truncates the sum at the
    Lambda order.  Returns the comparison report and the printed first-order
    row, which is checked against (1-t)(t-x)(tz-q)/(x t^2 (1-q)).
    """
    q, t = base_domain.lift(q), base_domain.lift(t)
    binv = base_domain.invert
    zdom = LaurentZDomain(base_domain, cap=None)
    inv = zdom.invert
    one = zdom.one
    L = window.lmax
    pad = DegreeWindow(L, min(window.xmin, -2 * L - 2), window.xmax + 4 * L + 4)
    zq, zt = zdom.lift(q), zdom.lift(t)
    z1 = zdom.z(1)

    lhs = None
    for k in range(L + 1):
        scalar = zdom.lift(elem_pow(base_domain, q, k) * qpoch(t, k, q))
        # (q t^-1 z^-1)_k as an exact Laurent scalar
        poch_b = one
        for i in range(k):
            poch_b = poch_b * (one - zdom.lift(elem_pow(base_domain, q, 1 + i) * binv(t)) * inv(z1))
        scalar = scalar * poch_b * inv(zdom.lift(qpoch(q, k, q)))
        # (t/x)_k as an exact finite series
        tx = series_one(zdom, pad)
        for i in range(k):
            tx = series_mul(tx, series_sub(
                series_one(zdom, pad),
                series_monomial(zdom, zdom.lift(elem_pow(base_domain, q, i) * t), 0, -1, pad)))
        # 1/(q t / (z L))_k: each factor is -(zL/(q^i t)) * geometric(zL/(q^i t))
        low = series_one(zdom, pad)
        for i in range(1, k + 1):
            ci = zdom.lift(binv(elem_pow(base_domain, q, i) * t)) * z1
            geo_terms = {}
            acc = -ci
            for j in range(1, L + 1):
                geo_terms[(j, 0)] = acc
                acc = acc * ci
            low = series_mul(low, BiSeries(zdom, pad, geo_terms, 0, 0))
        # 1/(q L/x)_k
        high = series_one(zdom, pad)
        for i in range(k):
            high = series_mul(high, _geometric(pad, zdom,
                                               zdom.lift(elem_pow(base_domain, q, 1 + i)),
                                               1, -1))
        term = series_scale(series_mul(series_mul(tx, low), high), scalar)
        lhs = term if lhs is None else series_add(lhs, term)

    rhs = series_one(zdom, pad)
    for coeff, degs, inverse in [
        (zdom.lift(q * binv(t)), (1, -1), False),
        (zdom.lift(binv(t)) * z1, (1, 0), False),
        (zdom.lift(t) * z1, (1, -1), False),
        (zdom.lift(q * binv(t)), (1, 0), False),
        (zdom.lift(q), (1, -1), True),
        (z1, (1, 0), True),
        (z1, (1, -1), True),
        (zdom.lift(q * binv(t * t)), (1, 0), True),
    ]:
        rhs = series_mul_factor(
            rhs,
            lambda w, c=coeff, d=degs, i=inverse: phi_expand(
                MonomialArg(c, *d), w, zdom, zq, inverse=i),
        )
    residual = series_sub(lhs, rhs)
    report = series_is_zero_on(residual, window)

    # the printed first-order coefficient: (1-t)(t-x)(tz-q)/(x t^2 (1-q))
    const = (zdom.lift((base_domain.one - t) * binv(t * t * (base_domain.one - q)))
             * (zdom.lift(t) * z1 - zdom.lift(q)))
    expected = {(1, -1): const * zdom.lift(t), (1, 0): -const}
    row_ok = all(zdom.is_zero(lhs.known(1, dx) - expected.get((1, dx), zdom.zero))
                 for dx in (-1, 0)) and all(
        zdom.is_zero(lhs.known(1, dx)) for dx in range(1, window.xmax + 1))
    return {"report": report, "first_order_ok": row_ok}


def _geometric(window, domain, c, dL, dx):
    """1/(1 - c L^dL x^dx) on the window."""
    terms = {}
    acc = domain.one
    k = 0
    while k * dL <= window.lmax and (dL > 0 or k * dx <= window.xmax):
        if k * dx <= window.xmax:
            terms[(k * dL, k * dx)] = acc
        acc = acc * c
        k += 1
    depth = 0 if dx >= 0 else (-dx + dL - 1) // dL
    return BiSeries(domain, window, terms, depth, 0)


def verify_qsaalschutz(n: int, domain, q, a, b, c, mutate: str | None = None) -> bool:
    """Terminating balanced sum: with d = q^{1-n} a b / c,

        sum_{k<=n} q^k (q^-n)_k (a)_k (b)_k / ((c)_k (d)_k (q)_k)
            = (c/a)_n (c/b)_n / ((c)_n (c/(ab))_n).
    """
    if n < 0:
        raise UsageError("the truncation order must be >= 0")
    q, a, b, c = (domain.lift(x) for x in (q, a, b, c))
    inv = domain.invert
    d = elem_pow(domain, q, 1 - n) * a * b * inv(c)
    lhs = domain.zero
    for k in range(n + 1):
        num = (qpoch(elem_pow(domain, q, -n), k, q) * qpoch(a, k, q) * qpoch(b, k, q))
        den = qpoch(c, k, q) * qpoch(d, k, q) * qpoch(q, k, q)
        lhs = lhs + elem_pow(domain, q, k) * num * inv(den)
    first = c * a if mutate == "rhs" else c * inv(a)
    rhs = (qpoch(first, n, q) * qpoch(c * inv(b), n, q)
           * inv(qpoch(c, n, q) * qpoch(c * inv(a * b), n, q)))
    return domain.is_zero(lhs - rhs)


def verify_formula_gamma(ks: Sequence[int], window: DegreeWindow, domain, q, t,
                         mutate: str | None = None) -> dict[int, bool]:
    """Exchange of the diagonal operator with the two dilogarithm inverses:

        gamma phi(-x/t)^-1 phi(-qL/x)^-1 x^k
            = phi(qL/t)^-1 phi(q^{1+k} x/t) phi(q^{1-k} L/x) gamma x^k.
    """
    q, t = domain.lift(q), domain.lift(t)
    inv = domain.invert
    L = window.lmax
    results = {}
    for k in ks:
        pad = DegreeWindow(L, min(window.xmin + min(k, 0) - 1, -L),
                           window.xmax + max(k, 0) + 2 * L)
        S = _phi_group(pad, domain, q, [(-inv(t), (0, 1), True), (-q, (1, -1), True)])
        lhs = gamma_apply(series_shift(S, domain.one, 0, k), q, 1)
        shift_exp = k if mutate == "exponent" else 1 + k
        R = _phi_group(pad, domain, q, [
            (q * inv(t), (1, 0), True),
            (elem_pow(domain, q, shift_exp) * inv(t), (0, 1), False),
            (elem_pow(domain, q, 1 - k), (1, -1), False),
        ])
        gk = elem_pow(domain, q, k * (k + 1) // 2)
        rhs = series_shift(R, gk, 0, k)
        w = DegreeWindow(min(lhs.window.lmax, rhs.window.lmax),
                         max(min(window.xmin + k, 0), max(lhs.window.xmin, rhs.window.xmin)),
                         min(window.xmax + min(k, 0), lhs.window.xmax, rhs.window.xmax))
        results[k] = series_equal(lhs, rhs, w).equal
    return results
