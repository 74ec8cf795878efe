"""
Exact polynomials over Q and over small number fields Q[a]/(m(a)).

Coefficients are stored low degree first.  A polynomial lives over Q when
its ``field`` is None (coefficients are ``Fraction``) and over an
``AlgebraicContext`` otherwise.  Rational factorization and text parsing are
delegated to sympy; everything else (composition, division, gcd, resultants,
squarefree decomposition) is done here so that it also works over a context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import sympy

from .errors import ContextDegreeExceeded, DegreeOverflow, HypothesisViolated, NotBranchPoint
from .perm_core import CycleType

DEFAULT_DEGREE_CAP = 256
X_SYMBOL = sympy.Symbol("X")
A_SYMBOL = sympy.Symbol("a")


# ---------------------------------------------------------------------------
# number fields of degree <= 4

def _qpoly_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _qpoly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / Fraction(b[-1])
    while len(a) >= len(b) and a:
        coef = a[-1] * inv
        k = len(a) - len(b)
        q[k] = coef
        for i, bc in enumerate(b):
            a[k + i] -= coef * bc
        _qpoly_trim(a)
    return _qpoly_trim(q), a


def _qpoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qpoly_trim(out)


class AlgebraicContext:
    """Q[a]/(m(a)) for an irreducible rational m of degree 1..4."""

    def __init__(self, minpoly: Sequence, name: str = "a"):
        coeffs = [Fraction(x) for x in minpoly]
        _qpoly_trim(coeffs)
        d = len(coeffs) - 1
        if d < 1:
            raise HypothesisViolated("minimal polynomial must have positive degree")
        if d > 4:
            raise ContextDegreeExceeded(f"context degree {d} above 4")
        lc = coeffs[-1]
        self.m = tuple(c / lc for c in coeffs)
        self.degree = d
        self.name = name
        sp = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in self.m])), A_SYMBOL)
        if not sp.is_irreducible:
            raise HypothesisViolated(f"{sp.as_expr()} is reducible over Q")

    @classmethod
    def parse(cls, text: str, name: str = "a") -> "AlgebraicContext":
        expr = sympy.sympify(text, locals={"X": A_SYMBOL, name: A_SYMBOL})
        sp = sympy.Poly(expr, A_SYMBOL)
        return cls([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                    for c in reversed(sp.all_coeffs())], name)

    def __eq__(self, other):
        return isinstance(other, AlgebraicContext) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return f"AlgebraicContext({self.minpoly_str()})"

    def minpoly_str(self) -> str:
        return str(Poly(list(self.m)))

    def reduce(self, c: Sequence) -> tuple:
        c = [Fraction(x) for x in c]
        _qpoly_trim(c)
        if len(c) > self.degree:
            _, c = _qpoly_divmod(c, list(self.m))
        return tuple(c) + (Fraction(0),) * (self.degree - len(c))

    def elem(self, c) -> "AlgElem":
        if isinstance(c, AlgElem):
            return c
        if isinstance(c, (int, Fraction)):
            c = [c]
        return AlgElem(self, self.reduce(c))

    @property
    def gen(self) -> "AlgElem":
        return self.elem([0, 1])

    def zero(self) -> "AlgElem":
        return self.elem([0])

    def one(self) -> "AlgElem":
        return self.elem([1])


class AlgElem:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: AlgebraicContext, c: tuple):
        self.ctx = ctx
        self.c = c

    def _lift(self, other) -> "AlgElem":
        if isinstance(other, AlgElem):
            if other.ctx != self.ctx:
                raise HypothesisViolated("elements of different contexts")
            return other
        return self.ctx.elem(other)

    def __add__(self, other):
        o = self._lift(other)
        return AlgElem(self.ctx, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.ctx, tuple(-x for x in self.c))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.ctx, tuple(x * other for x in self.c))
        o = self._lift(other)
        return AlgElem(self.ctx, self.ctx.reduce(_qpoly_mul(list(self.c), list(o.c))))

    __rmul__ = __mul__

    def inverse(self) -> "AlgElem":
        a = _qpoly_trim(list(self.c))
        if not a:
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid in Q[t]
        r0, r1 = list(self.ctx.m), a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _qpoly_divmod(r0, r1)
            r0, r1 = r1, r
            qs = _qpoly_mul(q, s1)
            s0, s1 = s1, _qpoly_trim([x - y for x, y in _zip_longest(s0, qs)])
        inv_c = 1 / r0[0]
        return self.ctx.elem([x * inv_c for x in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.ctx, tuple(x / other for x in self.c))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.ctx.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.c == self.ctx.reduce([other])
        return isinstance(other, AlgElem) and other.ctx == self.ctx and other.c == self.c

    def __hash__(self):
        return hash((self.ctx, self.c))

    def __bool__(self):
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __repr__(self):
        terms = []
        for k, x in enumerate(self.c):
            if x:
                mono = "" if k == 0 else (self.ctx.name if k == 1 else f"{self.ctx.name}^{k}")
                if not mono:
                    terms.append(str(x))
                else:
                    terms.append(mono if x == 1 else f"{x}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _zip_longest(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


# ---------------------------------------------------------------------------
# dense polynomials

def _zero(fld):
    return Fraction(0) if fld is None else fld.zero()


def _one(fld):
    return Fraction(1) if fld is None else fld.one()


def _coerce(x, fld):
    if fld is None:
        if isinstance(x, AlgElem):
            raise HypothesisViolated("number-field coefficient in a rational polynomial")
        return Fraction(x)
    return fld.elem(x)


class Poly:
    """Polynomial in X over Q (``field`` None) or a number field."""

    __slots__ = ("c", "field")

    def __init__(self, coeffs: Iterable = (), field: AlgebraicContext | None = None):
        if field is None:
            for x in coeffs if isinstance(coeffs, (list, tuple)) else ():
                if isinstance(x, AlgElem):
                    field = x.ctx
                    break
        c = [_coerce(x, field) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)
        self.field = field

    # construction
    @classmethod
    def X(cls, field=None) -> "Poly":
        return cls([0, 1], field)

    @classmethod
    def const(cls, a, field=None) -> "Poly":
        return cls([a], field)

    @classmethod
    def monomial(cls, k: int, a=1, field=None) -> "Poly":
        return cls([0] * k + [a], field)

    @classmethod
    def parse(cls, text: str, context: AlgebraicContext | None = None) -> "Poly":
        """Human syntax in X, e.g. "X^3*(X-1)"; the context generator is written ``a``."""
        name = context.name if context else "a"
        expr = sympy.sympify(text.replace("^", "**"), locals={"X": X_SYMBOL, name: A_SYMBOL})
        return cls.from_sympy(expr, context)

    @classmethod
    def from_sympy(cls, expr, context: AlgebraicContext | None = None) -> "Poly":
        sp = sympy.Poly(sympy.expand(expr), X_SYMBOL)
        out = []
        for coef in reversed(sp.all_coeffs()):
            coef = sympy.expand(coef)
            if context is None:
                if coef.free_symbols:
                    raise HypothesisViolated("symbolic coefficient needs a context")
                num, den = sympy.fraction(sympy.nsimplify(coef))
                out.append(Fraction(int(num), int(den)))
            else:
                cp = sympy.Poly(coef, A_SYMBOL)
                cs = [sympy.Rational(x) for x in reversed(cp.all_coeffs())]
                out.append(context.elem([Fraction(int(x.p), int(x.q)) for x in cs]))
        return cls(out, context)

    def to_sympy(self):
        x = X_SYMBOL
        terms = []
        for k, a in enumerate(self.c):
            if isinstance(a, AlgElem):
                coef = sum(sympy.Rational(v.numerator, v.denominator) * A_SYMBOL ** j for j, v in enumerate(a.c))
            else:
                coef = sympy.Rational(a.numerator, a.denominator)
            terms.append(coef * x ** k)
        return sympy.Add(*terms)

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1]

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, k: int):
        return self.c[k] if k < len(self.c) else _zero(self.field)

    def _wrap(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field is not None and self.field is not None and other.field != self.field:
                raise HypothesisViolated("polynomials over different fields")
            return other
        return Poly([other], self.field)

    def _join_field(self, other: "Poly"):
        return self.field or other.field

    # arithmetic
    def __add__(self, other):
        o = self._wrap(other)
        fld = self._join_field(o)
        n = max(len(self.c), len(o.c))
        z = _zero(fld)
        return Poly([(self.c[i] if i < len(self.c) else z) + (o.c[i] if i < len(o.c) else z)
                     for i in range(n)], fld)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c], self.field)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        fld = self._join_field(o)
        if not self.c or not o.c:
            return Poly([], fld)
        z = _zero(fld)
        out = [z] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] = out[i + j] + a * b
        return Poly(out, fld)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out, base = Poly([1], self.field), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other], self.field)
        if len(self.c) != len(other.c):
            return False
        return all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(str(a) for a in self.c))

    def __call__(self, x):
        """Horner evaluation; a Poly argument gives composition."""
        if isinstance(x, Poly):
            return compose(self, x)
        acc = _zero(self.field) if not isinstance(x, AlgElem) else x.ctx.zero()
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def derivative(self) -> "Poly":
        return Poly([a * k for k, a in enumerate(self.c)][1:], self.field)

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = 1 / self.lc
        return Poly([a * inv for a in self.c], self.field)

    def __divmod__(self, other: "Poly"):
        o = self._wrap(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        fld = self._join_field(o)
        a = list(self.c)
        z = _zero(fld)
        q = [z] * max(0, len(a) - len(o.c) + 1)
        inv = 1 / o.lc
        while len(a) >= len(o.c) and a:
            coef = a[-1] * inv
            k = len(a) - len(o.c)
            q[k] = coef
            for i, b in enumerate(o.c):
                a[k + i] = a[k + i] - coef * b
            while a and not a[-1]:
                a.pop()
        return Poly(q, fld), Poly(a, fld)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            if isinstance(a, AlgElem) and a.is_rational():
                a = a.c[0]
            if isinstance(a, AlgElem):
                coef = f"({a!r})"
            else:
                coef = str(a) if a.denominator == 1 else f"({a})"
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def coefficients(self) -> list:
        return list(self.c)

    def to_json(self) -> dict:
        return {"coefficients": [str(a) for a in self.c],
                "context": None if self.field is None else self.field.minpoly_str()}


RationalPoly = Poly


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the coefficient field."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def compose(g: Poly, h: Poly, cap: int = DEFAULT_DEGREE_CAP) -> Poly:
    """g(h(X))."""
    if max(g.degree, 0) * max(h.degree, 0) > cap:
        raise DegreeOverflow(f"composition degree above {cap}")
    fld = g.field or h.field
    out = Poly([], fld)
    for a in reversed(g.c):
        out = out * h + Poly([a], fld)
    return out


def chebyshev(n: int) -> Poly:
    """T_n with T_n(X + 1/X) = X^n + X^-n, via T_{k+1} = X T_k - T_{k-1}."""
    if n < 1:
        raise HypothesisViolated("Chebyshev index must be positive")
    X = Poly.X()
    prev, cur = Poly([2]), X
    for _ in range(n - 1):
        prev, cur = cur, X * cur - prev
    return cur


def chebyshev_identity(n: int) -> bool:
    """X^n T_n(X + 1/X) == X^(2n) + 1, expanded exactly in integers."""
    T = [int(a) for a in chebyshev(n).c]
    lhs = [0] * (2 * n + 1)
    binom = [1]  # coefficients of (X^2 + 1)^k, in powers of X^2
    for k, a in enumerate(T):
        if k:
            binom = [x + y for x, y in zip(binom + [0], [0] + binom)]
        if a:
            for j, b in enumerate(binom):
                lhs[n - k + 2 * j] += a * b
    return lhs == [1] + [0] * (2 * n - 1) + [1]


def ritt_identity(g: Poly, h: Poly, v: Poly, u: Poly) -> bool:
    """g(h) == v(u) exactly."""
    return compose(g, h) == compose(v, u)


def _power_series_root(f: Poly, m: int, terms: int) -> list:
    """First ``terms`` coefficients of the m-th root of a series with constant term 1."""
    fld = f.field
    one = _one(fld)
    z = _zero(fld)
    r = [one] + [z] * (terms - 1)
    fc = [f.coeff(k) for k in range(terms)]
    # r^m = f, solved coefficient by coefficient
    for k in range(1, terms):
        # coefficient of t^k in r^m with r_k unknown: m*r_k + (known)
        partial = r[:k] + [z] * (terms - k)
        pw = [one] + [z] * (terms - 1)
        for _ in range(m):
            nxt = [z] * terms
            for i, a in enumerate(pw):
                if a:
                    for j in range(terms - i):
                        if partial[j]:
                            nxt[i + j] = nxt[i + j] + a * partial[j]
            pw = nxt
        r[k] = (fc[k] - pw[k]) / m
    return r


def decompose_degree_check(f: Poly, degrees: tuple[int, int]) -> tuple[bool, tuple[Poly, Poly] | None]:
    """Whether f = g(h) with deg g = m, deg h = n; returns the pair when it exists.

    h is normalized monic with h(0) = 0 and read off from the m-th root of
    the reversed monic f; g then follows from the h-adic expansion.
    """
    m, n = degrees
    if m * n != f.degree or m < 1 or n < 1:
        return False, None
    fm = f.monic()
    # reversed polynomial t^N f(1/t) has constant term 1
    rev = Poly(list(reversed(fm.c)), f.field)
    root = _power_series_root(rev, m, n + 1)
    h = Poly(list(reversed(root)), f.field)
    h = h - h.coeff(0)
    gcoef = []
    rem = fm
    for _ in range(m + 1):
        rem, r = divmod(rem, h)
        if r.degree > 0:
            return False, None
        gcoef.append(r.coeff(0))
    if not rem.is_zero():
        return False, None
    g = Poly(gcoef, f.field) * f.lc
    if compose(g, h) != f:
        return False, None
    return True, (g, h)


def resultant(a: Poly, b: Poly):
    """Res(a, b) over the coefficient field by the Euclidean remainder sequence."""
    fld = a.field or b.field
    if a.is_zero() or b.is_zero():
        return _zero(fld)
    res = _one(fld)
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return _zero(fld)
        sign = -1 if (a.degree * b.degree) % 2 else 1
        res = res * (b.lc ** (a.degree - r.degree)) * sign
        a, b = b, r
    return res * b.lc ** a.degree


def squarefree_decomposition(f: Poly) -> list[tuple[int, Poly]]:
    """Yun's algorithm: f = lc * prod a_i^i with a_i squarefree and coprime."""
    out = []
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f // a0
    c = fp // a0
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((i, a))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def multiplicity_profile(f: Poly) -> CycleType:
    parts = []
    for mult, a in squarefree_decomposition(f):
        parts.extend([mult] * a.degree)
    return CycleType(tuple(parts))


def _interpolate(xs: Sequence, ys: Sequence, fld) -> Poly:
    out = Poly([], fld)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = Poly([yi], fld)
        denom = _one(fld)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Poly([-xj, 1], fld)
                denom = denom * (xi - xj)
        out = out + term * Poly([1 / denom], fld)
    return out


def critical_value_polynomial(f: Poly) -> Poly:
    """R(y) = Res_X(f(X) - y, f'(X)), whose roots are the finite branch points."""
    n = f.degree
    fp = f.derivative()
    fld = f.field
    xs = [Fraction(k) for k in range(n)]
    ys = [resultant(f - Poly([x], fld), fp) for x in xs]
    return _interpolate([_coerce(x, fld) for x in xs], ys, fld)


# ---------------------------------------------------------------------------
# roots in a context and branch data

def rational_roots(f: Poly) -> list[Fraction]:
    sp = sympy.Poly(f.to_sympy(), X_SYMBOL)
    out = []
    for fac, _ in sympy.factor_list(sp)[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            out.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(out))


def roots_in_context(f: Poly) -> list:
    """Roots of f lying in its coefficient field (degree <= 2 contexts)."""
    if f.field is None:
        return rational_roots(f)
    K = f.field
    out = []
    if K.degree > 2:
        raise ContextDegreeExceeded("roots are only located in quadratic contexts")
    # norm polynomial N(y) = Res_a(m(a), f(y; a)) over Q
    m_expr = sum(sympy.Rational(c.numerator, c.denominator) * A_SYMBOL ** k for k, c in enumerate(K.m))
    N = sympy.resultant(m_expr, f.to_sympy(), A_SYMBOL)
    for fac, _ in sympy.factor_list(sympy.Poly(N, X_SYMBOL))[1]:
        r = Poly.from_sympy(fac.as_expr())
        if r.degree == 1:
            cand = [-r.c[0] / r.c[1]]
        elif r.degree == 2:
            rm = r.monic()
            disc = rm.c[1] ** 2 - 4 * rm.c[0]
            D = K.m[1] ** 2 - 4 * K.m[0]
            ratio = disc / D
            num, den = ratio.numerator, ratio.denominator
            sn, sd = math.isqrt(num) if num >= 0 else -1, math.isqrt(den)
            if num < 0 or sn * sn != num or sd * sd != den:
                continue
            sqrtD = 2 * K.gen + K.m[1]
            s = sqrtD * Fraction(sn, sd)
            cand = [(-rm.c[1] + s) / 2, (-rm.c[1] - s) / 2]
        else:
            continue
        for x in cand:
            xe = K.elem(x) if not isinstance(x, AlgElem) else x
            if not f(xe):
                out.append(xe)
    uniq = []
    for x in out:
        if all(x != y for y in uniq):
            uniq.append(x)
    return uniq


@dataclass
class RootSet:
    """Roots of an irreducible (or unsplit) factor, counted with its degree."""

    poly: Poly

    @property
    def count(self) -> int:
        return self.poly.degree

    def __repr__(self):
        return f"roots({self.poly})"


@dataclass
class BranchDatum:
    branch_point: object  # Fraction, AlgElem, "inf", or None when unresolved
    ram_type: CycleType | None
    special_points: list = field(default_factory=list)
    context: AlgebraicContext | None = None
    conjugates: int = 1
    defining_poly: Poly | None = None

    def to_json(self) -> dict:
        bp = self.branch_point
        return {"branch_point": bp if isinstance(bp, str) or bp is None else str(bp),
                "ram_type": None if self.ram_type is None else self.ram_type.notation(),
                "context": None if self.context is None else self.context.minpoly_str(),
                "conjugates": self.conjugates,
                "special_points": [str(s) if not isinstance(s, RootSet) else f"roots of {s.poly}"
                                   for s in self.special_points]}


def _special_from(fc: Poly) -> list:
    simple = [a for mult, a in squarefree_decomposition(fc) if mult == 1]
    out = []
    for a in simple:
        try:
            rts = roots_in_context(a)
        except ContextDegreeExceeded:
            rts = []
        out.extend(rts)
        rest = a.degree - len(rts)
        if rest:
            cof = a
            for r in rts:
                cof = cof // Poly([-r, 1], a.field)
            out.append(RootSet(cof))
    return out


def special_points(f: Poly, c) -> list:
    """Unramified preimages of the branch value c (simple roots of f - c)."""
    fld = f.field or (c.ctx if isinstance(c, AlgElem) else None)
    fc = f - Poly([c], fld)
    if multiplicity_profile(fc) == CycleType((1,) * f.degree):
        raise NotBranchPoint(f"{c} is not a branch point")
    return _special_from(fc)


def _check_rh(f: Poly, data: list[BranchDatum]) -> None:
    total = 0
    for d in data:
        if d.ram_type is None:
            return
        if d.ram_type.degree != f.degree:
            raise AssertionError("ramification type does not sum to the degree")
        total += d.conjugates * d.ram_type.index
    if total != 2 * (f.degree - 1):
        raise AssertionError("Riemann-Hurwitz fails for a polynomial")


def branch_data(f: Poly) -> list[BranchDatum]:
    """Finite branch points with their types and special points, then infinity."""
    if f.degree < 2:
        raise HypothesisViolated("need degree at least 2")
    R = critical_value_polynomial(f)
    data = []
    if f.field is None:
        sp = sympy.Poly(R.to_sympy(), X_SYMBOL)
        factors = sorted((Poly.from_sympy(fac.as_expr()) for fac, _ in sympy.factor_list(sp)[1]),
                         key=lambda p: (p.degree, str(p)))
        for fac in factors:
            if fac.degree == 1:
                c = -fac.c[0] / fac.c[1]
                fc = f - Poly([c])
                data.append(BranchDatum(c, multiplicity_profile(fc), _special_from(fc)))
            else:
                K = AlgebraicContext(list(fac.monic().c), name="b")
                c = K.gen
                fc = Poly([a for a in f.c], K) - Poly([c], K)
                data.append(BranchDatum(c, multiplicity_profile(fc), _special_from(fc), K,
                                        conjugates=K.degree, defining_poly=fac))
    else:
        K = f.field
        Rsq = Poly([1], K)
        for _, a in squarefree_decomposition(R):
            Rsq = Rsq * a
        rts = roots_in_context(Rsq)
        rest = Rsq
        for c in rts:
            rest = rest // Poly([-c, 1], K)
            fc = f - Poly([c], K)
            data.append(BranchDatum(c, multiplicity_profile(fc), _special_from(fc), K))
        if rest.degree > 0:
            data.append(BranchDatum(None, None, [], K, conjugates=rest.degree, defining_poly=rest))
    data.append(BranchDatum("inf", CycleType((f.degree,))))
    _check_rh(f, data)
    return data


def ramification_type(f: Poly) -> list[CycleType]:
    """Types over all branch points, conjugates repeated, sorted by index then parts."""
    out = []
    for d in branch_data(f):
        if d.ram_type is None:
            raise ContextDegreeExceeded("branch points outside the coefficient field")
        out.extend([d.ram_type] * d.conjugates)
    return sorted(out, key=lambda t: (t.index, t.parts))


def is_special_over(g: Poly, u, c) -> bool:
    """u is an unramified preimage of c under g."""
    return g(u) == c and bool(g.derivative()(u))


def branch_value_of_type(f: Poly, t: str | CycleType) -> list:
    t = t if isinstance(t, CycleType) else CycleType.parse(t)
    return [d.branch_point for d in branch_data(f) if d.ram_type == t and d.branch_point != "inf"]


# ---------------------------------------------------------------------------
# configuration checks for the explicit examples

@dataclass
class ConfigurationInstance:
    case_id: str
    g: Poly
    h: Poly
    description: str


def _ctx(text: str, name: str = "a") -> AlgebraicContext:
    return AlgebraicContext.parse(text, name)


def configuration_instances() -> dict[str, ConfigurationInstance]:
    K1 = _ctx("a^2 + a/2 + 3/16")
    K2 = _ctx("a^2 + 5*a + 40")
    K3 = _ctx("a^2 - 3")
    K4 = _ctx("a^2 - 10*a/27 + 1/27")
    return {
        "s4-agl-c3": ConfigurationInstance(
            "s4-agl-c3", Poly.parse("X^3*(X-1)"), Poly.parse("X^3+1"),
            "branch point 1 of X^3+1 is a special point of X^3(X-1) over its [3.1] value"),
        "s4-agl-c2": ConfigurationInstance(
            "s4-agl-c2", Poly.parse("X^3*(X-1)"), Poly.parse("X^2+a", K1),
            "b, a root of X^2+X/2+3/16, is a special point over the [2.1^2] value"),
        "a5-c3": ConfigurationInstance(
            "a5-c3", Poly.parse("X^3*(X^2+5*X+40)"), Poly.parse("X^3+a", K2),
            "alpha, a root of X^2+5X+40, is a special point over the [3.1^2] value"),
        "xp-s4-special": ConfigurationInstance(
            "xp-s4-special", Poly.parse("X^3"), Poly.parse("X^3*(X-4)+27"),
            "the [2.1^2] branch point of the special S4 polynomial is 0"),
        "x2-s4-generic": ConfigurationInstance(
            "x2-s4-generic", Poly.parse("X^2"), Poly.parse("X^2*(X^2+(a+3)*X+9*a/8+27/8)", K3),
            "generic S4 polynomial with branch points u=0 and v^2=w^2"),
        "s4-s4-special": ConfigurationInstance(
            "s4-s4-special", Poly.parse("X*(X+4)^3"), Poly.parse("a*X*(X+4)^3", K4),
            "[3.1] and [2.1^2] branch points of h are special points over those of g"),
    }


def _single_branch_point(h: Poly, t: str):
    pts = branch_value_of_type(h, t)
    if len(pts) != 1:
        raise HypothesisViolated(f"expected one branch point of type {t}")
    return pts[0]


def _same_ram_type(f: Poly, types: Sequence[str]) -> bool:
    return [t.notation() for t in ramification_type(f)] == \
        [t.notation() for t in sorted((CycleType.parse(s) for s in types), key=lambda t: (t.index, t.parts))]


def _check_s4_agl_c3(g, h):
    beta = _single_branch_point(h, "[3]")
    c = _single_branch_point(g, "[3.1]")
    return _same_ram_type(g, ["[3.1]", "[2.1^2]", "[4]"]) and is_special_over(g, beta, c)


def _check_s4_agl_c2(g, h):
    beta = _single_branch_point(h, "[2]")
    c = _single_branch_point(g, "[2.1^2]")
    return _same_ram_type(g, ["[3.1]", "[2.1^2]", "[4]"]) and is_special_over(g, beta, c)


def _check_a5_c3(g, h):
    beta = _single_branch_point(h, "[3]")
    c = _single_branch_point(g, "[3.1^2]")
    return _same_ram_type(g, ["[3.1^2]", "[2^2.1]", "[5]"]) and is_special_over(g, beta, c)


def _check_xp_s4_special(g, h):
    beta = _single_branch_point(h, "[2.1^2]")
    ramified = _single_branch_point(g, f"[{g.degree}]")
    return _same_ram_type(h, ["[3.1]", "[2.1^2]", "[4]"]) and beta == ramified


def _check_x2_s4_generic(g, h):
    """u = 0 is a branch point, and the other two are roots of y^2 - s with s in the field."""
    K = h.field
    R = critical_value_polynomial(h)
    Rsq = Poly([1], K)
    for _, a in squarefree_decomposition(R):
        Rsq = Rsq * a
    if Rsq.degree != 3 or Rsq.coeff(0):
        return False
    rest = (Rsq // Poly([0, 1], K)).monic()
    if rest.degree != 2 or rest.coeff(1):
        return False  # v + w = 0 is v^2 = w^2 for distinct v, w
    prof0 = multiplicity_profile(h)
    return prof0 == CycleType((2, 1, 1)) and multiplicity_profile(R) == CycleType((1, 1, 1)) \
        and resultant(rest, h.derivative()) is not None


def _check_s4_s4_special(g, h):
    c31 = _single_branch_point(g, "[3.1]")
    c211 = _single_branch_point(g, "[2.1^2]")
    b31 = _single_branch_point(h, "[3.1]")
    b211 = _single_branch_point(h, "[2.1^2]")
    return (_same_ram_type(g, ["[3.1]", "[2.1^2]", "[4]"])
            and _same_ram_type(h, ["[3.1]", "[2.1^2]", "[4]"])
            and is_special_over(g, b31, c31) and is_special_over(g, b211, c211))


CONFIGURATION_CHECKS: dict[str, Callable[[Poly, Poly], bool]] = {
    "s4-agl-c3": _check_s4_agl_c3,
    "s4-agl-c2": _check_s4_agl_c2,
    "a5-c3": _check_a5_c3,
    "xp-s4-special": _check_xp_s4_special,
    "x2-s4-generic": _check_x2_s4_generic,
    "s4-s4-special": _check_s4_s4_special,
}


def configuration_check(case_id: str, g: Poly | None = None, h: Poly | None = None) -> bool:
    """Verify the branch-point configuration of a named case; defaults to the stated instance."""
    if case_id not in CONFIGURATION_CHECKS:
        raise HypothesisViolated(f"unknown configuration case {case_id!r}")
    inst = configuration_instances()[case_id]
    return CONFIGURATION_CHECKS[case_id](g if g is not None else inst.g, h if h is not None else inst.h)
