"""Partition combinatorics and the four-partition instanton sum.

The sum runs over quadruples (nu1, nu2, mu1, mu2) of partitions with weights

    p1^{|nu1|+|nu2|} p2^{|mu1|+|mu2|}

where p1 carries one power of x and p2 one power of Lambda/x, so a quadruple
lands at Lambda-degree |mu| and x-degree |nu| - |mu|.  Each summand is a ratio
of box products N_{lam,eta}(z) (twelve numerator factors against eight gauge
denominator factors, indices a, b in {1, 2}).

The evaluation loop caches per-partition and per-pair factor values and skips
quadruples whose numerator vanishes exactly.  Under the Higgsing specialization
the (nu2, mu2) coupling is evaluated at z = 1 and kills every nu2 that does not
sit inside mu2, which is what collapses the sum at the distinguished parameter
point; the code discovers this by exact zero tests rather than assuming it.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Sequence

from gmpy2 import mpq

from .coeffield import (
    FunctionFieldDomain,
    ParamPoint,
    RationalDomain,
    SymbolTable,
    element_equal,
    rat,
)
from .errors import DegenerateParameterError, LimitFailureError, NoSolutionError, UsageError
from .series import BiSeries, DegreeWindow

Partition = tuple[int, ...]


def check_partition(parts: Sequence[int]) -> Partition:
    lam = tuple(int(p) for p in parts)
    if any(p < 1 for p in lam) or any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise UsageError(f"{parts} is not a weakly decreasing sequence of positive integers")
    return lam


@lru_cache(maxsize=None)
def _partitions(n: int, maxpart: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n, descending lexicographic order, each exactly once."""
    if n < 0:
        raise UsageError("cannot partition a negative integer")
    return list(_partitions(n, n if n else 1))


def partitions_upto(n: int) -> list[Partition]:
    """Partitions of 0..n ordered by size then descending lex."""
    out: list[Partition] = []
    for k in range(n + 1):
        out.extend(partitions_of(k))
    return out


def transpose(lam: Partition) -> Partition:
    if not lam:
        return ()
    cols = [0] * lam[0]
    for part in lam:
        for j in range(part):
            cols[j] += 1
    return tuple(cols)


def weight(lam: Partition) -> int:
    return sum(lam)


def nekrasov_factor(lam: Partition, eta: Partition, z, q, t):
    """Box product N_{lam,eta}(z); polynomial of degree |lam| + |eta| in z."""
    dom = _ArithContext(None, q, t)
    return dom.nek(tuple(lam), tuple(eta), z)


class _ArithContext:
    """Cached q^a t^b powers and box products for one parameter point."""

    def __init__(self, domain, q, t):
        self.domain = domain
        self.q = q
        self.t = t
        one = domain.one if domain is not None else _unit_like(q)
        self.one = one
        self._pow: dict[tuple[int, int], Any] = {(0, 0): one}
        self._qp: dict[int, Any] = {0: one, 1: q}
        self._tp: dict[int, Any] = {0: one, 1: t}

    def _power(self, table: dict, base, n: int):
        try:
            return table[n]
        except KeyError:
            pass
        if n > 0:
            val = self._power(table, base, n - 1) * base
        else:
            val = self._power(table, base, n + 1) / base
        table[n] = val
        return val

    def pw(self, a: int, b: int):
        key = (a, b)
        try:
            return self._pow[key]
        except KeyError:
            val = self._power(self._qp, self.q, a) * self._power(self._tp, self.t, b)
            self._pow[key] = val
            return val

    def nek(self, lam: Partition, eta: Partition, z):
        """N_{lam,eta}(z) = prod_{(i,j) in lam} (1 - z q^{lam_i - j} t^{eta'_j - i + 1})
        * prod_{(i,j) in eta} (1 - z q^{-eta_i + j - 1} t^{-lam'_j + i})."""
        one = self.one
        acc = one
        etaT = transpose(eta)
        lamT = transpose(lam)
        ncols_eta = len(etaT)
        ncols_lam = len(lamT)
        for i, li in enumerate(lam, start=1):
            for j in range(1, li + 1):
                arm = li - j
                leg = (etaT[j - 1] if j <= ncols_eta else 0) - i + 1
                acc = acc * (one - z * self.pw(arm, leg))
        for i, ei in enumerate(eta, start=1):
            for j in range(1, ei + 1):
                arm = -ei + j - 1
                leg = -(lamT[j - 1] if j <= ncols_lam else 0) + i
                acc = acc * (one - z * self.pw(arm, leg))
        return acc


def _unit_like(q):
    if isinstance(q, (int, mpq)):
        return mpq(1)
    if hasattr(q, "dom"):
        return q.dom.one
    return q.field.one


@dataclass(frozen=True)
class InstantonWeights:
    """The scalar data of one instanton sum, all in one coefficient domain."""

    domain: Any
    q: Any
    t: Any
    v: Any
    w: Any
    p1: Any          # multiplies x
    p2: Any          # multiplies Lambda/x
    n: tuple
    m: tuple
    fplus: tuple
    fminus: tuple

    @staticmethod
    def from_point(point: ParamPoint) -> "InstantonWeights":
        return InstantonWeights(
            domain=point.domain,
            q=point.q,
            t=point.t,
            v=point.v,
            w=point.w,
            p1=point.p1_coef,
            p2=point.p2_coef,
            n=(point.coulomb_n(1), point.coulomb_n(2)),
            m=(point.coulomb_m(1), point.coulomb_m(2)),
            fplus=(point.mass_fplus(1), point.mass_fplus(2)),
            fminus=(point.mass_fminus(1), point.mass_fminus(2)),
        )


def _thread_count() -> int:
    try:
        n = int(os.environ.get("QVIR_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def instanton_sum(window: DegreeWindow, weights: InstantonWeights) -> BiSeries:
    """Exact truncated instanton sum on the window (depth-1 support)."""
    dom = weights.domain
    ctx = _ArithContext(dom, weights.q, weights.t)
    one = dom.one
    inv = dom.invert
    lmax, xmax = window.lmax, window.xmax

    n1, n2 = weights.n
    m1, m2 = weights.m
    fp1, fp2 = weights.fplus
    fm1, fm2 = weights.fminus
    v, w = weights.v, weights.w

    z_nu_cross = (n1 * inv(n2), n2 * inv(n1))
    z_mu_cross = (m1 * inv(m2), m2 * inv(m1))
    z_a1 = (v * fp1 * inv(n1), v * fp2 * inv(n1))
    z_a2 = (v * fp1 * inv(n2), v * fp2 * inv(n2))
    # coupling arguments w n_a / m_b in slot order (1,1), (1,2), (2,1), (2,2)
    z_c = (w * n1 * inv(m1), w * n1 * inv(m2), w * n2 * inv(m1), w * n2 * inv(m2))
    z_mu_mass = {
        (1, 1): v * m1 * inv(fm1), (2, 1): v * m1 * inv(fm2),
        (1, 2): v * m2 * inv(fm1), (2, 2): v * m2 * inv(fm2),
    }

    max_nu = xmax + lmax
    nus = [partitions_of(k) for k in range(max_nu + 1)]
    mus = partitions_upto(lmax)

    p1_pow = {0: one}
    for k in range(1, max_nu + 1):
        p1_pow[k] = p1_pow[k - 1] * weights.p1
    p2_pow = {0: one}
    for k in range(1, lmax + 1):
        p2_pow[k] = p2_pow[k - 1] * weights.p2

    a1_cache: dict[Partition, Any] = {}
    a2_cache: dict[Partition, Any] = {}
    diag_cache: dict[Partition, Any] = {}
    pair_cache: dict[tuple[Partition, Partition], Any] = {}
    c_cache: dict[tuple[int, Partition, Partition], Any] = {}

    def diag(nu: Partition):
        val = diag_cache.get(nu)
        if val is None:
            val = ctx.nek(nu, nu, one)
            if dom.is_zero(val):
                raise DegenerateParameterError(
                    f"gauge factor N_{{nu,nu}}(1) vanishes for nu={nu}"
                )
            diag_cache[nu] = val
        return val

    def numerator_a(nu: Partition, slot: int):
        cache, zz = (a1_cache, z_a1) if slot == 1 else (a2_cache, z_a2)
        val = cache.get(nu)
        if val is None:
            val = ctx.nek((), nu, zz[0]) * ctx.nek((), nu, zz[1])
            cache[nu] = val
        return val

    def nu_pair(nu1: Partition, nu2: Partition):
        key = (nu1, nu2)
        val = pair_cache.get(key, _MISSING)
        if val is not _MISSING:
            return val
        num = numerator_a(nu1, 1) * numerator_a(nu2, 2)
        if dom.is_zero(num):
            pair_cache[key] = None
            return None
        den = diag(nu1) * diag(nu2)
        if nu1 or nu2:
            cross = ctx.nek(nu1, nu2, z_nu_cross[0]) * ctx.nek(nu2, nu1, z_nu_cross[1])
            if dom.is_zero(cross):
                raise DegenerateParameterError(
                    f"gauge factor N_{{nu_a,nu_b}}(Q-ratio) vanishes for {nu1}, {nu2}"
                )
            den = den * cross
        val = p1_pow[weight(nu1) + weight(nu2)] * num * inv(den)
        pair_cache[key] = val
        return val

    def coupling(which: int, nu: Partition, mu: Partition):
        # which in 1..4 encodes the (a, b) slot pair of N_{nu_a, mu_b}(w n_a / m_b)
        key = (which, nu, mu)
        val = c_cache.get(key)
        if val is None:
            val = ctx.nek(nu, mu, z_c[which - 1])
            c_cache[key] = val
        return val

    def mu_block(mu1: Partition, mu2: Partition):
        num = (ctx.nek(mu1, (), z_mu_mass[(1, 1)]) * ctx.nek(mu1, (), z_mu_mass[(2, 1)])
               * ctx.nek(mu2, (), z_mu_mass[(1, 2)]) * ctx.nek(mu2, (), z_mu_mass[(2, 2)]))
        if dom.is_zero(num):
            return None
        den = diag(mu1) * diag(mu2)
        if mu1 or mu2:
            cross = ctx.nek(mu1, mu2, z_mu_cross[0]) * ctx.nek(mu2, mu1, z_mu_cross[1])
            if dom.is_zero(cross):
                raise DegenerateParameterError(
                    f"gauge factor N_{{mu_a,mu_b}} vanishes for {mu1}, {mu2}"
                )
            den = den * cross
        return p2_pow[weight(mu1) + weight(mu2)] * num * inv(den)

    # nu2 candidates surviving their coupling to mu2 at z_c[2,2]; under Higgsing
    # that argument is exactly 1 and the survivor set collapses to sub-diagrams.
    surv_cache: dict[tuple[Partition, int], list[Partition]] = {}

    def survivors(mu2: Partition, budget: int) -> list[Partition]:
        key = (mu2, budget)
        got = surv_cache.get(key)
        if got is None:
            got = []
            for k in range(budget + 1):
                for nu2 in nus[k]:
                    if not dom.is_zero(coupling(4, nu2, mu2)):
                        got.append(nu2)
            surv_cache[key] = got
        return got

    mu_pairs = [(mu1, mu2) for mu1 in mus for mu2 in mus
                if weight(mu1) + weight(mu2) <= lmax]
    mu_pairs.sort(key=lambda p: (weight(p[0]) + weight(p[1]), p))

    def tuples_for(chunk: Iterable[tuple[Partition, Partition]]):
        acc: dict[tuple[int, int], Any] = {}
        for mu1, mu2 in chunk:
            dmu = weight(mu1) + weight(mu2)
            mval = mu_block(mu1, mu2)
            if mval is None:
                continue
            budget = xmax + dmu
            for nu2 in survivors(mu2, budget):
                c2 = coupling(3, nu2, mu1) * coupling(4, nu2, mu2)
                if dom.is_zero(c2):
                    continue
                c2m = c2 * mval
                room = budget - weight(nu2)
                base = weight(nu2) - dmu
                for k in range(room + 1):
                    dx = base + k
                    if dx > xmax:
                        break
                    for nu1 in nus[k]:
                        pval = nu_pair(nu1, nu2)
                        if pval is None:
                            continue
                        c1 = coupling(1, nu1, mu1) * coupling(2, nu1, mu2)
                        if dom.is_zero(c1):
                            continue
                        term = pval * c1 * c2m
                        key = (dmu, dx)
                        acc[key] = acc[key] + term if key in acc else term
        return acc

    nthreads = _thread_count()
    if nthreads > 1 and len(mu_pairs) > 1:
        # exact field addition is associative, so a chunked reduction is safe
        for mu1, mu2 in mu_pairs:
            mu_block(mu1, mu2)
            survivors(mu2, xmax + weight(mu1) + weight(mu2))
        chunks = [mu_pairs[i::nthreads] for i in range(nthreads)]
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            partials = list(pool.map(tuples_for, chunks))
        total: dict[tuple[int, int], Any] = {}
        for part in partials:
            for key, val in part.items():
                total[key] = total[key] + val if key in total else val
    else:
        total = tuples_for(mu_pairs)

    return BiSeries(dom, window, total, depth=1, shift=0)


_MISSING = object()


def z_expand(window: DegreeWindow, point: ParamPoint) -> BiSeries:
    """The full instanton series with generic phi1, phi2."""
    return instanton_sum(window, InstantonWeights.from_point(point))


def higgs_psi(window: DegreeWindow, point: ParamPoint) -> BiSeries:
    """Surface-defect wavefunction: the sum at phi1 = t/v, phi2 = v (so w = t)."""
    return instanton_sum(window, InstantonWeights.from_point(point.higgsed()))


# ---------------------------------------------------------------------------
# parameter map and distinguished point


@dataclass(frozen=True)
class ParamMapInput:
    """Degenerate-side data: q^{alpha_1..4} as field elements, integer contours."""

    qalpha: tuple
    contours: tuple[int, int, int]


def param_map_forward(inp: ParamMapInput, point: ParamPoint) -> ParamPoint:
    """Solve the parameter map for (Q, T1..T4, phi1, phi2) on the given point.

    The map:  q^a1 = v^-2 T1 T2 Q,  q^a2 = v^-2 T4/T3,  q^a3 = v^-2 phi2/phi1,
    q^a4 = v^-2 T1/T2,  t^N1 = v/T1,  t^N2 = v phi1,  t^N3 = v T3.
    """
    dom = point.domain
    v, t = point.v, point.t
    qa1, qa2, qa3, qa4 = (dom.lift(x) for x in inp.qalpha)
    N1, N2, N3 = inp.contours
    inv = dom.invert
    tN = lambda n: elem_int_pow(dom, t, n)
    T1 = v * inv(tN(N1))
    phi1 = tN(N2) * inv(v)
    T3 = tN(N3) * inv(v)
    v2 = v * v
    T2 = T1 * inv(v2 * qa4)
    T4 = v2 * qa2 * T3
    phi2 = v2 * qa3 * phi1
    Q = v2 * qa1 * inv(T1 * T2)
    return point.with_params(Q=Q, T1=T1, T2=T2, T3=T3, T4=T4, phi1=phi1, phi2=phi2)


def param_map_inverse(point: ParamPoint, search_bound: int = 24) -> ParamMapInput:
    """Recover (q^alpha_i, N_i) from a fully assigned point; N_i must be integers."""
    dom = point.domain
    inv = dom.invert
    v, t = point.v, point.t
    v2inv = inv(v * v)
    qalpha = (
        v2inv * point.T(1) * point.T(2) * point.Q,
        v2inv * inv(point.T(3)) * point.T(4),
        v2inv * point.phi(2) * inv(point.phi(1)),
        v2inv * point.T(1) * inv(point.T(2)),
    )
    targets = (v * inv(point.T(1)), v * point.phi(1), v * point.T(3))
    contours = []
    for val in targets:
        found = None
        for n in range(-search_bound, search_bound + 1):
            if element_equal(elem_int_pow(dom, t, n), val):
                found = n
                break
        if found is None:
            raise NoSolutionError(
                "no integer contour multiplicity reproduces this parameter point"
            )
        contours.append(found)
    return ParamMapInput(qalpha, tuple(contours))


def elem_int_pow(dom, x, n: int):
    return dom.pow(x, n)


def special_point_numeric(u, s, Q) -> ParamPoint:
    """The distinguished all-degenerate point: (T1..T4, phi1, phi2) =
    (v/t, 1/v, 1/v, v/t, t/v, v), with phi1/phi2 left for Higgsing."""
    base = ParamPoint.numeric(u=u, s=s, Q=Q)
    v, t = base.v, base.t
    return base.with_params(T1=v / t, T2=1 / v, T3=1 / v, T4=v / t)


def special_point_symbolic(domain: FunctionFieldDomain, Q=None) -> ParamPoint:
    """Distinguished point over a table containing u, s (and Q unless given)."""
    u, s = domain.gen("u"), domain.gen("s")
    v = u * domain.invert(s)
    t = s * s
    Q = domain.gen("Q") if Q is None else domain.lift(Q)
    return ParamPoint.symbolic(
        domain, u=u, s=s, Q=Q,
        T1=v * domain.invert(t), T2=domain.invert(v),
        T3=domain.invert(v), T4=v * domain.invert(t),
    )


# ---------------------------------------------------------------------------
# Toda limit


def eps_limit(series: BiSeries, table: SymbolTable) -> BiSeries:
    """Evaluate every coefficient of an eps-symbolic series at eps = 0.

    Raises :class:`LimitFailureError` on any coefficient with a pole there;
    poles are reported, never silently dropped.
    """
    gen = table.field.ring.gens[0]
    from sympy.polys.domains import QQ

    def at_zero(poly):
        if any(poly.degrees()):
            return mpq(QQ.convert(poly.evaluate([(gen, QQ(0))])))
        coeffs = list(poly.coeffs())
        return mpq(QQ.convert(coeffs[0])) if coeffs else mpq(0)

    out = {}
    for key, val in series.terms.items():
        den = at_zero(val.denom)
        if den == 0:
            raise LimitFailureError(f"coefficient at {key} has a pole at the limit point")
        out[key] = at_zero(val.numer) / den
    return BiSeries(RationalDomain(), series.window, out, series.depth, series.shift)


def toda_limit(window: DegreeWindow, u, s, Q, ratios=(1, 1, 1, 1)) -> BiSeries:
    """Limit T_i -> 0 of the Higgsed sum with T_i = eps * c_i, ratios fixed.

    Every coefficient is computed as a rational function of eps; absence of a
    pole at eps = 0 is checked, not assumed, and the value at 0 is returned.
    """
    cs = [rat(c) for c in ratios]
    if any(c == 0 for c in cs):
        raise UsageError("ratio constants must be nonzero")
    table = SymbolTable(("eps",))
    dom = FunctionFieldDomain(table)
    eps = dom.gen("eps")
    point = ParamPoint.symbolic(
        dom, u=dom.lift(rat(u)), s=dom.lift(rat(s)), Q=dom.lift(rat(Q)),
        T1=eps * dom.lift(cs[0]), T2=eps * dom.lift(cs[1]),
        T3=eps * dom.lift(cs[2]), T4=eps * dom.lift(cs[3]),
    )
    psi = higgs_psi(window, point)
    return eps_limit(psi, table)
