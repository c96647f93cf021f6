"""Truncated bivariate Laurent series in (Lambda, x) with certified windows.

A :class:`BiSeries` stores exact coefficients on a finite degree window and a
*support promise*: the untruncated series is guaranteed to vanish whenever

    dx < -(depth * dL + shift).

With ``depth = 1, shift = 0`` this is the instanton-sum shape where negative
x-degrees are bounded by the Lambda-degree.  The promise is what makes window
propagation through products decidable: a product coefficient is certified
only where every contribution from the true (infinite) supports lies inside
the stored windows of both factors.

Window algebra used throughout (worst case over the result's Lambda levels):

* ``mul``: lmax = min of the two; the certified xmax of the product drops by
  ``depth_g * lmax + shift_g`` against factor ``g``'s support;
  depth combines by max, shift by sum.
* ``inverse``: xmax drops by ``depth * lmax`` (the recursion walks uphill in x).
* diagonal operators (gamma-weights, q-shifts, rescalings) are window-free.

Every series is kept *support complete*: its window always covers the whole
support triangle from below (xmin <= -(depth*lmax + shift)), so coefficients
below the stored window are certified zeros and only the upper edges matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .coeffield import elem_pow, same_domain
from .errors import (
    MismatchedTablesError,
    NonExpandableError,
    NonInvertibleError,
    OutOfWindowError,
    UsageError,
    WindowUnderflowError,
)


@dataclass(frozen=True)
class DegreeWindow:
    """Tracked degree region: 0 <= dL <= lmax, xmin <= dx <= xmax."""

    lmax: int
    xmin: int
    xmax: int

    def __post_init__(self):
        if self.lmax < 0:
            raise UsageError(f"lmax must be >= 0, got {self.lmax}")
        if not (self.xmin <= 0 <= self.xmax):
            raise UsageError(f"window needs xmin <= 0 <= xmax, got [{self.xmin}, {self.xmax}]")

    def contains(self, other: "DegreeWindow") -> bool:
        return (other.lmax <= self.lmax and other.xmin >= self.xmin
                and other.xmax <= self.xmax)

    def as_dict(self) -> dict:
        return {"lmax": self.lmax, "xmin": self.xmin, "xmax": self.xmax}


@dataclass(frozen=True)
class MonomialArg:
    """Argument of a dilogarithm-type factor: coeff * Lambda^dL * x^dx.

    Must be small in the series grading (dL > 0, or dL = 0 and dx > 0) so that
    expansions terminate inside any window.
    """

    coeff: Any
    dL: int
    dx: int

    def __post_init__(self):
        if not (self.dL > 0 or (self.dL == 0 and self.dx > 0)):
            raise NonExpandableError(
                f"monomial argument Lambda^{self.dL} x^{self.dx} is not small in the grading"
            )

    def support(self) -> tuple[int, int]:
        """Minimal (depth, shift) promise for a series in powers of this monomial."""
        if self.dx >= 0:
            return 0, 0
        return (-self.dx + self.dL - 1) // self.dL, 0


class BiSeries:
    """Exact truncated series; immutable by convention."""

    __slots__ = ("domain", "window", "terms", "depth", "shift")

    def __init__(self, domain, window: DegreeWindow, terms: Mapping[tuple[int, int], Any],
                 depth: int = 0, shift: int = 0):
        if depth < 0 or shift < 0:
            raise UsageError("support parameters must be non-negative")
        floor = -(depth * window.lmax + shift)
        if window.xmin > floor:
            window = DegreeWindow(window.lmax, floor, window.xmax)
        clean: dict[tuple[int, int], Any] = {}
        for (dL, dx), c in terms.items():
            if domain.is_zero(c):
                continue
            if not (0 <= dL <= window.lmax and window.xmin <= dx <= window.xmax):
                raise UsageError(f"term at ({dL}, {dx}) lies outside window {window}")
            if dx < -(depth * dL + shift):
                raise UsageError(
                    f"term at ({dL}, {dx}) violates the declared support promise"
                )
            clean[(dL, dx)] = c
        self.domain = domain
        self.window = window
        self.terms = clean
        self.depth = depth
        self.shift = shift

    # -- inspection -----------------------------------------------------------
    def coeff(self, dL: int, dx: int):
        """Coefficient with out-of-window reads rejected, never silently zero."""
        w = self.window
        if not (0 <= dL <= w.lmax and w.xmin <= dx <= w.xmax):
            raise OutOfWindowError(
                f"({dL}, {dx}) is outside the certified window "
                f"lmax={w.lmax}, x in [{w.xmin}, {w.xmax}]"
            )
        return self.terms.get((dL, dx), self.domain.zero)

    def valid_at(self, dL: int, dx: int) -> bool:
        """True where the coefficient is certified (window or below support)."""
        w = self.window
        if dL < 0 or dL > w.lmax:
            return False
        if dx < -(self.depth * dL + self.shift):
            return True
        return w.xmin <= dx <= w.xmax

    def known(self, dL: int, dx: int):
        """Certified coefficient including the known zeros below the support floor."""
        if dx < -(self.depth * dL + self.shift):
            return self.domain.zero
        return self.coeff(dL, dx)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_items(self):
        return sorted(self.terms.items())

    def to_records(self) -> list[dict]:
        """Serialization: ordered {dL, dx, coeff} records sorted by (dL, dx)."""
        return [
            {"dL": k[0], "dx": k[1], "coeff": self.domain.text(c)}
            for k, c in self.sorted_items()
        ]

    def __repr__(self):
        w = self.window
        return (f"BiSeries(lmax={w.lmax}, x=[{w.xmin},{w.xmax}], "
                f"{len(self.terms)} terms, depth={self.depth}, shift={self.shift})")

    # -- convenience operators --------------------------------------------------
    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __mul__(self, other):
        return series_mul(self, other)

    def __neg__(self):
        return series_neg(self)


# -- constructors --------------------------------------------------------------

def series_one(domain, window: DegreeWindow) -> BiSeries:
    return BiSeries(domain, window, {(0, 0): domain.one})


def series_zero(domain, window: DegreeWindow) -> BiSeries:
    return BiSeries(domain, window, {})


def series_monomial(domain, coeff, dL: int, dx: int, window: DegreeWindow) -> BiSeries:
    if dx >= 0:
        depth, shift = 0, 0
    elif dL > 0:
        depth, shift = (-dx + dL - 1) // dL, 0
    else:
        depth, shift = 0, -dx
    return BiSeries(domain, window, {(dL, dx): coeff}, depth, shift)


def series_from_terms(domain, window: DegreeWindow, terms: Mapping[tuple[int, int], Any],
                      depth: int | None = None, shift: int | None = None) -> BiSeries:
    """Build from explicit terms.

    Without explicit support parameters the minimal promise covering the given
    terms is inferred; that is only sound when the terms are the whole series
    (a Laurent polynomial), not a truncation.
    """
    if depth is None or shift is None:
        depthized = 1 if any(dx < 0 for (_, dx) in terms) else 0
        shiftized = 0
        for (dL, dx) in terms:
            shiftized = max(shiftized, -(dx + depthized * dL))
        depth = depthized if depth is None else depth
        shift = shiftized if shift is None else shift
    return BiSeries(domain, window, terms, depth, shift)


# -- arithmetic -----------------------------------------------------------------

def _common_domain(a: BiSeries, b: BiSeries):
    if not same_domain(a.domain, b.domain):
        raise MismatchedTablesError("series have different coefficient domains")
    return a.domain


def series_add(a: BiSeries, b: BiSeries) -> BiSeries:
    dom = _common_domain(a, b)
    lmax = min(a.window.lmax, b.window.lmax)
    xmax = min(a.window.xmax, b.window.xmax)
    if xmax < 0:
        raise WindowUnderflowError("sum window is empty")
    depth = max(a.depth, b.depth)
    shift = max(a.shift, b.shift)
    window = DegreeWindow(lmax, -(depth * lmax + shift), xmax)
    out: dict[tuple[int, int], Any] = {}
    for (dL, dx), c in a.terms.items():
        if dL <= lmax and window.xmin <= dx <= xmax:
            out[(dL, dx)] = c
    for (dL, dx), c in b.terms.items():
        if dL <= lmax and window.xmin <= dx <= xmax:
            out[(dL, dx)] = out[(dL, dx)] + c if (dL, dx) in out else c
    return BiSeries(dom, window, out, depth, shift)


def series_neg(a: BiSeries) -> BiSeries:
    return BiSeries(a.domain, a.window, {k: -c for k, c in a.terms.items()},
                    a.depth, a.shift)


def series_sub(a: BiSeries, b: BiSeries) -> BiSeries:
    return series_add(a, series_neg(b))


def series_scale(a: BiSeries, c) -> BiSeries:
    c = a.domain.lift(c)
    return BiSeries(a.domain, a.window, {k: c * v for k, v in a.terms.items()},
                    a.depth, a.shift)


def mul_window(a: BiSeries, b: BiSeries) -> tuple[DegreeWindow, int, int]:
    """Certified window and support parameters of a product; underflow raises."""
    lmax = min(a.window.lmax, b.window.lmax)
    xmax = min(
        a.window.xmax - (b.depth * lmax + b.shift),
        b.window.xmax - (a.depth * lmax + a.shift),
    )
    depth = max(a.depth, b.depth)
    shift = a.shift + b.shift
    if xmax < 0:
        raise WindowUnderflowError(
            f"product cannot certify the constant column: xmax would be {xmax}; "
            f"pad the wider factor by {-xmax} x-degrees"
        )
    return DegreeWindow(lmax, -(depth * lmax + shift), xmax), depth, shift


def series_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    dom = _common_domain(a, b)
    window, depth, shift = mul_window(a, b)
    lmax, xmax, xmin = window.lmax, window.xmax, window.xmin
    if len(a.terms) > len(b.terms):
        a, b = b, a
    out: dict[tuple[int, int], Any] = {}
    bitems = list(b.terms.items())
    for (la, xa), ca in a.terms.items():
        if la > lmax:
            continue
        for (lb, xb), cb in bitems:
            dL = la + lb
            if dL > lmax:
                continue
            dx = xa + xb
            if dx > xmax or dx < xmin:
                continue
            key = (dL, dx)
            p = ca * cb
            out[key] = out[key] + p if key in out else p
    return BiSeries(dom, window, out, depth, shift)


def series_inverse(a: BiSeries) -> BiSeries:
    """Multiplicative inverse; needs shift = 0 and an invertible constant term."""
    dom = a.domain
    if a.shift != 0:
        raise NonInvertibleError(
            "series with x-shifted support have no Laurent-series inverse here"
        )
    c0 = a.terms.get((0, 0), dom.zero)
    if dom.is_zero(c0):
        raise NonInvertibleError("constant term is zero")
    inv0 = dom.invert(c0)
    lmax = a.window.lmax
    xmax_out = a.window.xmax - a.depth * lmax
    if xmax_out < 0:
        raise WindowUnderflowError(
            f"inverse needs xmax >= depth*lmax = {a.depth * lmax}, have {a.window.xmax}"
        )
    # Staircase recursion: level dL is computable up to xmax - depth*dL, which
    # is exactly what deeper levels consume.
    lo = lambda dL: -(a.depth * dL)
    hi = lambda dL: a.window.xmax - a.depth * dL
    g: dict[tuple[int, int], Any] = {}
    aterms = [(k, c) for k, c in a.terms.items() if k != (0, 0)]
    for dL in range(lmax + 1):
        for dx in range(lo(dL), hi(dL) + 1):
            acc = dom.one if (dL, dx) == (0, 0) else dom.zero
            for (ja, ka), c in aterms:
                jg, kg = dL - ja, dx - ka
                if jg < 0 or kg < lo(jg) or kg > hi(jg):
                    continue
                val = g.get((jg, kg))
                if val is not None:
                    acc = acc - c * val
            if not dom.is_zero(acc):
                g[(dL, dx)] = inv0 * acc
    window = DegreeWindow(lmax, -(a.depth * lmax), xmax_out)
    out = {k: c for k, c in g.items() if k[1] <= xmax_out}
    return BiSeries(dom, window, out, a.depth, 0)


def series_rescale(a: BiSeries, cL, cx) -> BiSeries:
    """Substitute Lambda -> cL*Lambda, x -> cx*x; the window is unchanged."""
    dom = a.domain
    cL, cx = dom.lift(cL), dom.lift(cx)
    if dom.is_zero(cL) or dom.is_zero(cx):
        raise UsageError("rescaling constants must be nonzero")
    powL: dict[int, Any] = {}
    powx: dict[int, Any] = {}
    out = {}
    for (dL, dx), c in a.terms.items():
        pL = powL.get(dL)
        if pL is None:
            pL = powL[dL] = elem_pow(dom, cL, dL)
        px = powx.get(dx)
        if px is None:
            px = powx[dx] = elem_pow(dom, cx, dx)
        out[(dL, dx)] = c * pL * px
    return BiSeries(dom, a.window, out, a.depth, a.shift)


def series_shift(a: BiSeries, coeff, dL: int, dx: int) -> BiSeries:
    """Multiply by the monomial coeff * Lambda^dL * x^dx (exact, window moves)."""
    dom = a.domain
    if dL < 0:
        raise UsageError("negative Lambda shifts are not defined on these series")
    lmax = a.window.lmax + dL
    depth = a.depth
    # old support dx >= -(D*l + E) becomes dx' >= -(D*l' + (E - D*dL - dx_mono))
    shift = max(0, a.shift - depth * dL - dx)
    new_xmax = a.window.xmax + dx
    if new_xmax < 0:
        raise WindowUnderflowError("monomial shift pushes the whole window below x^0")
    window = DegreeWindow(lmax, min(a.window.xmin + dx, 0), new_xmax)
    coeff = dom.lift(coeff)
    out = {(l + dL, x + dx): coeff * c for (l, x), c in a.terms.items()}
    return BiSeries(dom, window, out, depth, shift)


def series_restrict(a: BiSeries, window: DegreeWindow) -> BiSeries:
    """Restriction to a sub-window; every requested key must be certified.

    Terms between the support floor and the requested xmin are kept: the
    constructor re-extends the window down to the floor, and discarding them
    would turn certified values into false zeros.
    """
    if window.lmax > a.window.lmax or window.xmax > a.window.xmax:
        raise UsageError(
            f"requested window {window} is not contained in certified {a.window}"
        )
    out = {k: c for k, c in a.terms.items()
           if k[0] <= window.lmax and k[1] <= window.xmax}
    return BiSeries(a.domain, window, out, a.depth, a.shift)


@dataclass(frozen=True)
class CompareReport:
    """Outcome of a windowed coefficient-by-coefficient comparison."""

    equal: bool
    window: DegreeWindow
    first_mismatch: tuple[int, int] | None = None
    lhs_text: str | None = None
    rhs_text: str | None = None

    def as_dict(self) -> dict:
        d = {"equal": self.equal, "window": self.window.as_dict()}
        if not self.equal:
            d["first_mismatch"] = list(self.first_mismatch)
            d["lhs"] = self.lhs_text
            d["rhs"] = self.rhs_text
        return d


def series_equal(a: BiSeries, b: BiSeries, window: DegreeWindow) -> CompareReport:
    """Equality on a window, with the smallest lexicographic mismatch reported."""
    dom = _common_domain(a, b)
    for s, name in ((a, "left"), (b, "right")):
        if window.lmax > s.window.lmax or window.xmax > s.window.xmax:
            raise UsageError(
                f"comparison window {window} exceeds the certified window of the "
                f"{name} operand {s.window}"
            )
    for dL in range(window.lmax + 1):
        for dx in range(window.xmin, window.xmax + 1):
            ca = a.known(dL, dx)
            cb = b.known(dL, dx)
            if not dom.is_zero(ca - cb):
                return CompareReport(False, window, (dL, dx), dom.text(ca), dom.text(cb))
    return CompareReport(True, window)


def series_is_zero_on(a: BiSeries, window: DegreeWindow) -> CompareReport:
    return series_equal(a, series_zero(a.domain, a.window), window)


def series_mul_factor(f: BiSeries, build: Callable[[DegreeWindow], BiSeries]) -> BiSeries:
    """Multiply f by a factor built on a window sized so f's window survives.

    The factor is constructed on xmax + depth_f*lmax + shift_f, which is what
    the product rule charges against the factor's side.
    """
    w = f.window
    fw = DegreeWindow(w.lmax, w.xmin, w.xmax + f.depth * w.lmax + f.shift)
    return series_mul(build(fw), f)


def series_pow(a: BiSeries, n: int) -> BiSeries:
    if n < 0:
        raise UsageError("negative series powers: invert first")
    out = series_one(a.domain, a.window)
    for _ in range(n):
        out = series_mul(out, a)
    return out


def series_map(a: BiSeries, fn: Callable[[Any], Any], domain=None) -> BiSeries:
    """Apply fn to every coefficient (e.g. lift into an extension domain)."""
    dom = domain or a.domain
    return BiSeries(dom, a.window, {k: fn(c) for k, c in a.terms.items()},
                    a.depth, a.shift)


# spec-facing aliases
series_extract = BiSeries.coeff
