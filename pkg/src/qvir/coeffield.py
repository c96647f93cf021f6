"""Exact coefficient arithmetic shared by every series computation.

Two concrete coefficient backends are provided:

* rational numbers (``gmpy2.mpq``), used by the fast numeric verification paths;
* rational functions over a fixed :class:`SymbolTable`, realized as sparse
  numerator/denominator pairs (sympy's low-level ``FracElement``), used by the
  symbolic verification paths.

The generators ``q``, ``t``, ``v`` are deliberately *not* symbols.  Every
formula in scope uses half-integer powers of ``q`` and ``t`` only through
``v = q^(1/2) t^(-1/2)``, so the field is generated by ``u``, ``s`` with

    q = u**2,   t = s**2,   v = u/s

and all expressions become honest rational functions of the generators.

A third, special-purpose backend (:class:`LaurentZDomain`) adjoins one extra
formal variable ``z`` as a truncated Laurent polynomial living inside the
coefficient, which is how the generating-function identities embed their
``z``-expansions without a trivariate series engine.
"""

from __future__ import annotations

import fractions
import numbers
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Union

import gmpy2
import sympy
from gmpy2 import mpq, mpz
from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import lex

from .errors import (
    DomainError,
    EvaluationPoleError,
    MismatchedTablesError,
    NonInvertibleError,
    ParseError,
    UsageError,
)

RationalValue = mpq

#: Names that may never be declared as symbols; they are derived quantities.
RESERVED_NAMES = ("q", "t", "v", "w")


def rat(a, b=None) -> mpq:
    """Exact rational from ints, strings like ``"2/5"``, Fractions, or mpq."""
    if b is not None:
        if b == 0:
            raise DomainError("zero denominator")
        return mpq(a, b)
    if isinstance(a, float):
        raise UsageError("floating point input is not allowed in exact arithmetic")
    try:
        return mpq(a)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot read {a!r} as an exact rational") from exc


class SymbolTable:
    """Immutable ordered list of polynomial generators.

    The table owns the sparse rational-function field its elements live in.
    """

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise UsageError("a symbol table needs at least one symbol")
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate symbol names in {names}")
        for n in names:
            if not n.isidentifier():
                raise UsageError(f"symbol name {n!r} is not an identifier")
            if n in RESERVED_NAMES:
                raise UsageError(
                    f"{n!r} is reserved: use generators u, s (q = u^2, t = s^2, v = u/s)"
                )
        self.names = names
        self.field: FracField = FracField(names, QQ, lex)
        self._gens = dict(zip(names, self.field.gens))

    def gen(self, name: str):
        try:
            return self._gens[name]
        except KeyError:
            raise UsageError(f"{name!r} is not a symbol of this table {self.names}")

    def __contains__(self, name: str) -> bool:
        return name in self._gens

    def __repr__(self) -> str:
        return f"SymbolTable{self.names}"


#: A coefficient: exact rational, rational function, or z-Laurent wrapper.
FieldElement = Union[mpq, Any]


def _is_rationalish(x) -> bool:
    return isinstance(x, (int, mpq, mpz, fractions.Fraction, numbers.Integral))


def _field_of(x):
    return getattr(x, "field", None)


def make_element(text: str, table: SymbolTable | None = None) -> FieldElement:
    """Parse canonical expression text into an exact element.

    Without a table the text must evaluate to a rational number; with a table
    it may use the table's symbols, ``+ - * / ^`` and integer literals.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression text")
    src = text.replace("^", "**")
    names = table.names if table is not None else ()
    local = {n: sympy.Symbol(n) for n in names}
    try:
        expr = sympy.sympify(src, locals=local, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"cannot parse {text!r}") from exc
    if expr.has(sympy.zoo) or expr.has(sympy.nan) or expr.has(sympy.oo):
        raise DomainError(f"{text!r} divides by zero")
    extra = expr.free_symbols - set(local.values())
    if extra:
        raise ParseError(f"unknown symbols {sorted(map(str, extra))} in {text!r}")
    if table is None or not expr.free_symbols:
        if not isinstance(expr, sympy.Rational):
            raise ParseError(f"{text!r} is not a rational constant")
        val = mpq(int(expr.p), int(expr.q))
        return val if table is None else table.field.ground_new(QQ.convert(val))
    try:
        return table.field.from_expr(expr)
    except ZeroDivisionError as exc:
        raise DomainError(f"{text!r} divides by the zero polynomial") from exc
    except (ValueError, sympy.polys.polyerrors.GeneratorsError) as exc:
        raise ParseError(f"{text!r} is not a rational function expression") from exc


def element_equal(a: FieldElement, b: FieldElement) -> bool:
    """Exact equality via cross multiplication; no GCD normalization needed."""
    fa, fb = _field_of(a), _field_of(b)
    if fa is not None and fb is not None:
        if fa is not fb:
            raise MismatchedTablesError("elements live over different symbol tables")
        return a.numer * b.denom == b.numer * a.denom
    if fa is None and fb is None:
        if isinstance(a, ZLaurent) or isinstance(b, ZLaurent):
            return a == b
        return mpq(a) == mpq(b)
    frac, other = (a, b) if fa is not None else (b, a)
    if not _is_rationalish(other):
        raise MismatchedTablesError("cannot compare a rational function with this value")
    lifted = frac.field.ground_new(QQ.convert(mpq(other)))
    return frac.numer * lifted.denom == lifted.numer * frac.denom


def element_eval(a: FieldElement, point) -> mpq:
    """Substitute rational values for every symbol of ``a``; exact result.

    ``point`` is a ``ParamPoint`` or a plain mapping ``name -> rational``.
    Raises :class:`EvaluationPoleError` when the denominator vanishes.
    """
    if _is_rationalish(a):
        return mpq(a)
    fld = _field_of(a)
    if fld is None:
        raise UsageError(f"cannot evaluate object of type {type(a).__name__}")
    if isinstance(point, ParamPoint):
        assignments = point.substitutions()
    else:
        assignments = dict(point)
    ring = fld.ring
    names = [str(s) for s in fld.symbols]
    try:
        vals = [(g, QQ.convert(mpq(assignments[name]))) for g, name in zip(ring.gens, names)]
    except KeyError as exc:
        raise UsageError(f"point does not assign a value to symbol {exc.args[0]!r}")
    num = _ground_to_mpq(a.numer, vals)
    den = _ground_to_mpq(a.denom, vals)
    if den == 0:
        raise EvaluationPoleError("denominator vanishes at the evaluation point")
    return num / den


def _ground_to_mpq(poly, vals) -> mpq:
    if not any(poly.degrees()):
        coeffs = list(poly.coeffs())
        return mpq(QQ.convert(coeffs[0])) if coeffs else mpq(0)
    return mpq(QQ.convert(poly.evaluate(vals)))


def element_text(a: FieldElement) -> str:
    """Canonical text: integer coefficients, ``^`` powers, monomials in
    descending lexicographic order of the exponent vector."""
    if _is_rationalish(a):
        return str(mpq(a))
    if isinstance(a, ZLaurent):
        return a.text()
    fld = _field_of(a)
    if fld is None:
        raise UsageError(f"cannot serialize object of type {type(a).__name__}")
    num, den = a.numer, a.denom
    scale = mpz(1)
    for c in list(num.coeffs()) + list(den.coeffs()):
        scale = gmpy2.lcm(scale, mpq(c).denominator)
    nterms = {m: mpq(c) * scale for m, c in num.terms()}
    dterms = {m: mpq(c) * scale for m, c in den.terms()}
    content = mpz(0)
    for c in list(nterms.values()) + list(dterms.values()):
        content = gmpy2.gcd(content, mpz(c))
    if content > 1:
        nterms = {m: c / content for m, c in nterms.items()}
        dterms = {m: c / content for m, c in dterms.items()}
    if dterms:
        lead = max(dterms)
        if dterms[lead] < 0:
            nterms = {m: -c for m, c in nterms.items()}
            dterms = {m: -c for m, c in dterms.items()}
    names = [str(s) for s in fld.symbols]
    ntext = _poly_text(nterms, names)
    if dterms == {tuple([0] * len(names)): mpq(1)}:
        return ntext
    return f"({ntext})/({_poly_text(dterms, names)})"


def _poly_text(terms: dict, names: list[str]) -> str:
    if not terms:
        return "0"
    parts = []
    for mono in sorted(terms, reverse=True):
        c = terms[mono]
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e != 0:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        mag = abs(c)
        if not body:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        parts.append(("- " if c < 0 else "+ ") + piece)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


# ---------------------------------------------------------------------------
# coefficient domains


class RationalDomain:
    """Plain exact rationals; the fast backend for numeric verification."""

    table = None

    def __init__(self):
        self.one = mpq(1)
        self.zero = mpq(0)

    def lift(self, x) -> mpq:
        if isinstance(x, float):
            raise UsageError("floating point has no place in this engine")
        return mpq(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def invert(self, x) -> mpq:
        if x == 0:
            raise NonInvertibleError("division by exact zero")
        return 1 / mpq(x)

    def pow(self, x, n: int):
        if n >= 0:
            return mpq(x) ** n
        return self.invert(x) ** (-n)

    def text(self, x) -> str:
        return element_text(mpq(x))

    def __repr__(self):
        return "RationalDomain()"


class FunctionFieldDomain:
    """Rational functions over a :class:`SymbolTable` (sparse, auto-cancelled)."""

    def __init__(self, table: SymbolTable):
        self.table = table
        self.one = table.field.one
        self.zero = table.field.zero

    def gen(self, name: str):
        return self.table.gen(name)

    def lift(self, x):
        if _field_of(x) is not None:
            if x.field is not self.table.field:
                raise MismatchedTablesError("element belongs to a different table")
            return x
        if isinstance(x, float):
            raise UsageError("floating point has no place in this engine")
        return self.table.field.ground_new(QQ.convert(mpq(x)))

    def is_zero(self, x) -> bool:
        return not x

    def invert(self, x):
        if not x:
            raise NonInvertibleError("division by the zero rational function")
        return x**-1

    def pow(self, x, n: int):
        if n >= 0:
            return x**n
        return self.invert(x) ** (-n)

    def text(self, x) -> str:
        return element_text(self.lift(x))

    def __repr__(self):
        return f"FunctionFieldDomain{self.table.names}"


class ZLaurent:
    """Laurent polynomial in one adjoined variable with coefficients in a base domain.

    Degrees above the domain cap (when set) are discarded; the cap mode is only
    sound when no negative degrees ever occur, which the domain enforces.
    """

    __slots__ = ("dom", "c")

    def __init__(self, dom: "LaurentZDomain", c: dict):
        self.dom = dom
        base = dom.base
        cc = {}
        for k, v in c.items():
            if base.is_zero(v):
                continue
            if dom.cap is not None:
                if k < 0:
                    raise UsageError(
                        "negative z-degree in capped mode would silently lose terms"
                    )
                if k > dom.cap:
                    continue
            cc[k] = v
        self.c = cc

    # -- ring operations -----------------------------------------------------
    def _coerce(self, other) -> "ZLaurent":
        if isinstance(other, ZLaurent):
            if other.dom is not self.dom:
                raise MismatchedTablesError("z-Laurent elements over different domains")
            return other
        return ZLaurent(self.dom, {0: self.dom.base.lift(other)})

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out[k] + v if k in out else v
        return ZLaurent(self.dom, out)

    __radd__ = __add__

    def __neg__(self):
        return ZLaurent(self.dom, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        cap = self.dom.cap
        out: dict = {}
        for k1, v1 in self.c.items():
            for k2, v2 in o.c.items():
                k = k1 + k2
                if cap is not None and k > cap:
                    continue
                p = v1 * v2
                out[k] = out[k] + p if k in out else p
        return ZLaurent(self.dom, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.dom.invert(self) ** (-n)
        out = self.dom.one
        p = self
        while n:
            if n & 1:
                out = out * p
            n >>= 1
            if n:
                p = p * p
        return out

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * self.dom.invert(o)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (MismatchedTablesError, UsageError, TypeError, ValueError):
            return NotImplemented
        keys = set(self.c) | set(o.c)
        base = self.dom.base
        return all(
            base.is_zero(self.c.get(k, base.zero) - o.c.get(k, base.zero)) for k in keys
        )

    def __bool__(self):
        return bool(self.c)

    def __hash__(self):
        return hash((self.dom.var, tuple(sorted((k, str(v)) for k, v in self.c.items()))))

    def coeff(self, k: int):
        return self.c.get(k, self.dom.base.zero)

    def text(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for k in sorted(self.c):
            body = self.dom.base.text(self.c[k])
            if k == 0:
                parts.append(f"({body})")
            else:
                parts.append(f"({body})*{self.dom.var}^{k}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ZLaurent[{self.text()}]"


class LaurentZDomain:
    """Coefficient domain ``base[z, z^-1]``, optionally truncated above ``cap``."""

    def __init__(self, base, var: str = "z", cap: int | None = None):
        self.base = base
        self.var = var
        self.cap = cap
        self.table = getattr(base, "table", None)
        self.one = ZLaurent(self, {0: base.one})
        self.zero = ZLaurent(self, {})

    def z(self, k: int = 1) -> ZLaurent:
        return ZLaurent(self, {k: self.base.one})

    def gen(self, name: str) -> ZLaurent:
        if not hasattr(self.base, "gen"):
            raise UsageError("base domain has no symbols")
        return self.lift(self.base.gen(name))

    def lift(self, x) -> ZLaurent:
        if isinstance(x, ZLaurent):
            if x.dom is not self:
                raise MismatchedTablesError("element belongs to a different z-domain")
            return x
        return ZLaurent(self, {0: self.base.lift(x)})

    def is_zero(self, x) -> bool:
        return not self.lift(x).c

    def invert(self, x) -> ZLaurent:
        x = self.lift(x)
        if len(x.c) != 1:
            raise NonInvertibleError(
                "only z-monomials are invertible in the exact Laurent backend"
            )
        ((k, v),) = x.c.items()
        return ZLaurent(self, {-k: self.base.invert(v)})

    def pow(self, x, n: int):
        return self.lift(x) ** n

    def text(self, x) -> str:
        return self.lift(x).text()

    def __repr__(self):
        return f"LaurentZDomain({self.base!r}, var={self.var!r}, cap={self.cap})"


def elem_pow(domain, x, n: int):
    """Integer power in the given domain, negative exponents via inversion."""
    return domain.pow(x, n)


def same_domain(d1, d2) -> bool:
    """Structural domain identity: separate instances of the same field agree."""
    if d1 is d2:
        return True
    if isinstance(d1, RationalDomain) and isinstance(d2, RationalDomain):
        return True
    if isinstance(d1, FunctionFieldDomain) and isinstance(d2, FunctionFieldDomain):
        return d1.table.field is d2.table.field
    if isinstance(d1, LaurentZDomain) and isinstance(d2, LaurentZDomain):
        return d1.var == d2.var and d1.cap == d2.cap and same_domain(d1.base, d2.base)
    return False


# ---------------------------------------------------------------------------
# parameter points


_PARAM_NAMES = ("u", "s", "q", "t", "Q", "T1", "T2", "T3", "T4", "phi1", "phi2")


@dataclass(frozen=True)
class ParamPoint:
    """Assignment of the block parameters, numeric or symbolic.

    Stored names are among ``u, s, q, t, Q, T1..T4, phi1, phi2``; ``q, t`` are
    always present (derived as ``u^2, s^2`` when the point is built from the
    half-power generators).  Points built directly from ``q, t`` cannot supply
    ``v`` and are only usable by the v-free Toda / Macdonald subsystem.
    """

    backend: str
    domain: Any
    vals: Mapping[str, Any] = field(repr=False)

    # -- constructors --------------------------------------------------------
    @staticmethod
    def numeric(*, u=None, s=None, q=None, t=None, Q=None, T1=None, T2=None,
                T3=None, T4=None, phi1=None, phi2=None) -> "ParamPoint":
        vals: dict[str, Any] = {}
        if (u is None) != (s is None):
            raise UsageError("u and s must be supplied together")
        if u is not None:
            if q is not None or t is not None:
                raise UsageError("give either (u, s) or (q, t), not both")
            u, s = rat(u), rat(s)
            for name, val in (("u", u), ("s", s)):
                if val in (0, 1, -1):
                    raise UsageError(f"{name} = {val} hits a root-of-unity hazard")
            vals.update(u=u, s=s, q=u * u, t=s * s)
        elif q is not None or t is not None:
            if q is None or t is None:
                raise UsageError("q and t must be supplied together")
            q, t = rat(q), rat(t)
            for name, val in (("q", q), ("t", t)):
                if val in (0, 1, -1):
                    raise UsageError(f"{name} = {val} hits a root-of-unity hazard")
            vals.update(q=q, t=t)
        else:
            raise UsageError("a numeric point needs (u, s) or (q, t)")
        for name, val in (("Q", Q), ("T1", T1), ("T2", T2), ("T3", T3),
                          ("T4", T4), ("phi1", phi1), ("phi2", phi2)):
            if val is not None:
                val = rat(val)
                if val == 0:
                    raise UsageError(f"{name} must be nonzero")
                vals[name] = val
        return ParamPoint("numeric", RationalDomain(), vals)

    @staticmethod
    def symbolic(domain, **assignments) -> "ParamPoint":
        """Symbolic point over a :class:`FunctionFieldDomain` (or z-extension).

        Each keyword maps a parameter name to a field element; names matching a
        table symbol may be given as the string ``"free"`` to use the generator.
        ``q`` and ``t`` are filled in from ``u, s`` when those are assigned.
        """
        vals: dict[str, Any] = {}
        for name, val in assignments.items():
            if name not in _PARAM_NAMES:
                raise UsageError(f"unknown parameter {name!r}")
            if isinstance(val, str) and val == "free":
                if not hasattr(domain, "gen"):
                    raise UsageError("free symbols need a function-field domain")
                val = domain.gen(name)
            vals[name] = domain.lift(val)
        if "u" in vals and "s" in vals:
            vals.setdefault("q", vals["u"] * vals["u"])
            vals.setdefault("t", vals["s"] * vals["s"])
        if "q" not in vals or "t" not in vals:
            raise UsageError("a symbolic point needs q, t (via u, s or directly)")
        return ParamPoint("symbolic", domain, vals)

    # -- accessors ------------------------------------------------------------
    def _get(self, name: str):
        try:
            return self.vals[name]
        except KeyError:
            raise UsageError(f"parameter {name!r} is not set on this point")

    def has(self, name: str) -> bool:
        return name in self.vals

    @property
    def q(self):
        return self._get("q")

    @property
    def t(self):
        return self._get("t")

    @property
    def v(self):
        if "u" not in self.vals or "s" not in self.vals:
            raise UsageError(
                "v = u/s needs the half-power generators; this point was built from (q, t)"
            )
        u, s = self.vals["u"], self.vals["s"]
        return u / s if self.backend == "numeric" else u * self.domain.invert(s)

    @property
    def Q(self):
        return self._get("Q")

    def T(self, i: int):
        return self._get(f"T{i}")

    def phi(self, i: int):
        return self._get(f"phi{i}")

    @property
    def w(self):
        return self.v * self.phi(1)

    @property
    def p1_coef(self):
        """Scalar multiplying the x-slot of the first instanton weight."""
        vinv2 = self._inv(self.v) ** 2
        return vinv2 * self.T(2) * self.phi(2)

    @property
    def p2_coef(self):
        """Scalar multiplying the (Lambda/x)-slot of the second instanton weight."""
        vinv2 = self._inv(self.v) ** 2
        return vinv2 * self.T(4) * self._inv(self.phi(1))

    def coulomb_n(self, a: int):
        if a == 1:
            return self.domain.one
        if a == 2:
            return self.Q
        raise UsageError("Coulomb index must be 1 or 2")

    def coulomb_m(self, a: int):
        if a == 1:
            return self.domain.one
        if a == 2:
            return self.phi(1) * self.phi(2) * self.Q
        raise UsageError("Coulomb index must be 1 or 2")

    def mass_fplus(self, a: int):
        if a == 1:
            return self.T(1) * self.Q
        if a == 2:
            return self._inv(self.T(2))
        raise UsageError("mass index must be 1 or 2")

    def mass_fminus(self, a: int):
        if a == 1:
            return self._inv(self.T(3))
        if a == 2:
            return self.T(4) * self.phi(1) * self.phi(2) * self.Q
        raise UsageError("mass index must be 1 or 2")

    def _inv(self, x):
        return self.domain.invert(x)

    def higgsed(self) -> "ParamPoint":
        """Fix phi1 = t/v, phi2 = v; the bifundamental mass becomes w = t."""
        if "phi1" in self.vals or "phi2" in self.vals:
            raise UsageError("point already assigns phi1/phi2; Higgsing needs them unset")
        v = self.v
        vals = dict(self.vals)
        vals["phi1"] = self.t * self._inv(v)
        vals["phi2"] = v
        return ParamPoint(self.backend, self.domain, vals)

    def with_params(self, **kw) -> "ParamPoint":
        vals = dict(self.vals)
        for name, val in kw.items():
            if name not in _PARAM_NAMES:
                raise UsageError(f"unknown parameter {name!r}")
            vals[name] = val if self.backend == "symbolic" else rat(val)
        return ParamPoint(self.backend, self.domain, vals)

    def substitutions(self) -> dict[str, mpq]:
        if self.backend != "numeric":
            raise UsageError("only numeric points provide substitution values")
        return dict(self.vals)
