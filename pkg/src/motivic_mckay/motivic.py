"""Elements of Z[L^(+-1/D)][(L-1)/(L^i-1)] kept as formal sums of basic terms.

A basic term is ``c * L^a * prod_nu (L-1)/(L^nu-1)``. Sums are never pre-cleared;
equality, the norm and exact quotients go through the cleared rational function
in ``M = L^(1/D)`` on demand.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Poly = dict  # exponent (int) -> Fraction, sparse


@dataclass(frozen=True, order=True)
class MotivicTerm:
    coeff: Fraction
    exponent: Fraction
    factors: tuple[int, ...] = ()

    @property
    def key(self) -> tuple[Fraction, tuple[int, ...]]:
        return (self.exponent, self.factors)


def _norm_factors(factors: Iterable[int]) -> tuple[int, ...]:
    out = []
    for nu in factors:
        nu = int(nu)
        if nu < 1:
            raise ValueError(f"factor index must be >= 1, got {nu}")
        if nu > 1:
            out.append(nu)
    return tuple(sorted(out))


def _sort_key(t: MotivicTerm):
    return (-t.exponent, t.factors)


class MotivicExpr:
    """Immutable formal sum of basic terms with a common exponent grain."""

    __slots__ = ("terms", "grain")

    def __init__(self, terms: Iterable[MotivicTerm] = (), grain: int = 1):
        merged: dict = {}
        g = int(grain)
        if g < 1:
            raise ValueError("grain must be positive")
        for t in terms:
            coeff = Fraction(t.coeff)
            if not coeff:
                continue
            exponent = Fraction(t.exponent)
            factors = _norm_factors(t.factors)
            g = math.lcm(g, exponent.denominator)
            k = (exponent, factors)
            merged[k] = merged.get(k, Fraction(0)) + coeff
        self.terms = tuple(
            sorted(
                (MotivicTerm(c, e, f) for (e, f), c in merged.items() if c),
                key=_sort_key,
            )
        )
        self.grain = g

    # -- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, c) -> "MotivicExpr":
        return cls([MotivicTerm(Fraction(c), Fraction(0))])

    @classmethod
    def lpow(cls, a, coeff=1) -> "MotivicExpr":
        """coeff * L^a."""
        return cls([MotivicTerm(Fraction(coeff), Fraction(a))])

    @classmethod
    def factor(cls, nu: int) -> "MotivicExpr":
        """(L-1)/(L^nu-1)."""
        return cls([MotivicTerm(Fraction(1), Fraction(0), (nu,))])

    @classmethod
    def from_coeffs(cls, coeffs: Mapping) -> "MotivicExpr":
        """Laurent polynomial in L given as {exponent: coeff}."""
        return cls([MotivicTerm(Fraction(c), Fraction(a)) for a, c in coeffs.items()])

    # -- ring operations ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "MotivicExpr":
        if isinstance(other, MotivicExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return MotivicExpr.const(other)
        raise TypeError(f"cannot combine MotivicExpr with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return MotivicExpr(self.terms + other.terms, math.lcm(self.grain, other.grain))

    __radd__ = __add__

    def __neg__(self):
        return MotivicExpr((MotivicTerm(-t.coeff, t.exponent, t.factors) for t in self.terms), self.grain)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        prod = [
            MotivicTerm(a.coeff * b.coeff, a.exponent + b.exponent, a.factors + b.factors)
            for a in self.terms
            for b in other.terms
        ]
        return MotivicExpr(prod, math.lcm(self.grain, other.grain))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not in the ring")
        result = MotivicExpr.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return expr_eq(self, other)

    __hash__ = None

    def is_zero(self) -> bool:
        return _cleared(self.terms, self.grain)[1] == {}

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"MotivicExpr({render(self)!r})"

    def __str__(self):
        return render(self)

    def __len__(self):
        return len(self.terms)


def expr_arith(x: MotivicExpr, y: MotivicExpr, op: str) -> MotivicExpr:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


# -- cleared rational-function form --------------------------------------------

def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _binom_poly(D: int) -> Poly:
    return {D: Fraction(1), 0: Fraction(-1)}


def _cleared(terms, grain: int):
    """Return (shift, numerator, denominator-multiset) with value M^shift * N(M) / prod(M^(grain*nu)-1)."""
    if not terms:
        return 0, {}, Counter()
    den = Counter()
    for t in terms:
        for nu, k in Counter(t.factors).items():
            den[nu] = max(den[nu], k)
    shift = min(int(t.exponent * grain) for t in terms)
    num: Poly = {}
    for t in terms:
        part: Poly = {int(t.exponent * grain) - shift: Fraction(t.coeff)}
        for _ in t.factors:
            part = _pmul(part, _binom_poly(grain))
        extra = den - Counter(t.factors)
        for nu, k in extra.items():
            for _ in range(k):
                part = _pmul(part, _binom_poly(grain * nu))
        for e, c in part.items():
            num[e] = num.get(e, 0) + c
    num = {k: v for k, v in num.items() if v}
    return shift, num, den


def expr_eq(x: MotivicExpr, y: MotivicExpr) -> bool:
    """Equality as rational functions of L (after clearing all denominators)."""
    d = (x - y)
    return _cleared(d.terms, d.grain)[1] == {}


def virtual_degree(x: MotivicExpr) -> Fraction | None:
    """Degree in L of the rational function (None for 0)."""
    shift, num, den = _cleared(x.terms, x.grain)
    if not num:
        return None
    D = x.grain
    deg = shift + max(num) - sum(D * nu * k for nu, k in den.items())
    return Fraction(deg, D)


def norm(x: MotivicExpr) -> float:
    """Filtration norm 2^(virtual degree); ||L^-n|| = 2^-n and ||0|| = 0."""
    v = virtual_degree(x)
    if v is None:
        return 0.0
    if v.denominator == 1:
        return math.ldexp(1.0, int(v))
    return 2.0 ** float(v)


def laurent_form(x: MotivicExpr) -> dict[Fraction, Fraction] | None:
    """{exponent: coeff} if x is a Laurent polynomial in L^(1/D), else None."""
    shift, num, den = _cleared(x.terms, x.grain)
    if not num:
        return {}
    divisor: Poly = {0: Fraction(1)}
    for nu, k in den.items():
        for _ in range(k):
            divisor = _pmul(divisor, _binom_poly(x.grain * nu))
    quot = _exact_divide(num, divisor)
    if quot is None:
        return None
    return {Fraction(e + shift, x.grain): c for e, c in sorted(quot.items()) if c}


def _exact_divide(num: Poly, den: Poly) -> Poly | None:
    dd = max(den)
    lead = den[dd]
    rem = dict(num)
    quot: Poly = {}
    while rem:
        top = max(rem)
        if top < dd:
            return None
        c = rem[top] / lead
        quot[top - dd] = c
        for e, v in den.items():
            k = top - dd + e
            nv = rem.get(k, 0) - c * v
            if nv:
                rem[k] = nv
            else:
                rem.pop(k, None)
    return quot


def simplify(x: MotivicExpr) -> MotivicExpr:
    """Rewrite x as a plain Laurent polynomial in L when its denominators cancel."""
    lf = laurent_form(x)
    if lf is None:
        return x
    return MotivicExpr.from_coeffs(lf)


# -- realizations ----------------------------------------------------------------

def euler_realize(x: MotivicExpr) -> Fraction:
    """Limit L -> 1: each (L-1)/(L^nu-1) tends to 1/nu, every power of L to 1."""
    total = Fraction(0)
    for t in x.terms:
        v = Fraction(t.coeff)
        for nu in t.factors:
            v /= nu
        total += v
    return total


def _exact_power(q: int, a: Fraction) -> Fraction:
    if a.denominator == 1:
        return Fraction(q) ** int(a)
    r = a.denominator
    root = round(q ** (1.0 / r))
    for cand in (root - 1, root, root + 1):
        if cand > 0 and cand ** r == q:
            return Fraction(cand) ** a.numerator
    raise ValueError(f"non-integral exponent {a}: {q} is not a perfect {r}-th power")


def point_count_realize(x: MotivicExpr, q: int) -> Fraction:
    """Evaluate at L = q."""
    if q < 2:
        raise ValueError("q must be at least 2")
    total = Fraction(0)
    for t in x.terms:
        v = Fraction(t.coeff) * _exact_power(q, t.exponent)
        for nu in t.factors:
            v *= Fraction(q - 1, q ** nu - 1)
        total += v
    return total


def evaluate_cleared(x: MotivicExpr, q: int) -> Fraction:
    """Evaluate the cleared form M^shift * N(M) / prod(M^(D nu) - 1) at L = q, M = q^(1/D)."""
    shift, num, den = _cleared(x.terms, x.grain)
    M = _exact_power(q, Fraction(1, x.grain))
    n = sum((c * M ** e for e, c in num.items()), Fraction(0))
    d = Fraction(1)
    for nu, k in den.items():
        d *= (M ** (x.grain * nu) - 1) ** k
    return M ** shift * n / d


class HodgeExpr:
    """Hodge realization: the same expression with L read as the symbol uv."""

    __slots__ = ("expr",)

    def __init__(self, expr: MotivicExpr):
        self.expr = expr

    def as_polynomial(self) -> dict[tuple[int, int], Fraction] | None:
        """{(i, j): coeff} of u^i v^j when all denominators cancel and powers are integral."""
        lf = laurent_form(self.expr)
        if lf is None or any(a.denominator != 1 for a in lf):
            return None
        return {(int(a), int(a)): c for a, c in lf.items()}

    def evaluate(self, u, v) -> Fraction:
        poly = self.as_polynomial()
        if poly is None:
            raise ValueError("Hodge expression is not a polynomial in u, v")
        return sum((c * Fraction(u) ** i * Fraction(v) ** j for (i, j), c in poly.items()), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, HodgeExpr):
            return expr_eq(self.expr, other.expr)
        return NotImplemented

    __hash__ = None

    def __str__(self):
        poly = self.as_polynomial()
        if poly is not None:
            return _render_terms(
                [MotivicTerm(c, Fraction(i)) for (i, _), c in poly.items()], symbol="uv"
            )
        return _render_terms(self.expr.terms, symbol="uv")

    def __repr__(self):
        return f"HodgeExpr({str(self)!r})"


def hodge_realize(x: MotivicExpr) -> HodgeExpr:
    return HodgeExpr(x)


# -- text and JSON ----------------------------------------------------------------

def _render_power(a: Fraction, symbol: str) -> str:
    if symbol == "L":
        return f"L^({a})"
    if a == 1:
        return "uv"
    return f"(uv)^{a}" if a.denominator == 1 and a > 0 else f"(uv)^({a})"


def _render_factor(nu: int, symbol: str) -> str:
    if symbol == "L":
        return f"(L-1)/(L^{nu}-1)"
    return f"(uv-1)/((uv)^{nu}-1)"


def _render_terms(terms, symbol: str = "L") -> str:
    terms = sorted(terms, key=_sort_key)
    if not terms:
        return "0"
    pieces = []
    for t in terms:
        parts = []
        if t.exponent:
            parts.append(_render_power(t.exponent, symbol))
        parts.extend(_render_factor(nu, symbol) for nu in t.factors)
        c = t.coeff
        if not parts:
            s = str(c)
        elif c == 1:
            s = "*".join(parts)
        elif c == -1:
            s = "-" + "*".join(parts)
        else:
            s = f"{c}*" + "*".join(parts)
        pieces.append(s)
    out = pieces[0]
    for s in pieces[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


def render(x: MotivicExpr) -> str:
    """Canonical text: terms ``c*L^(p/q)*(L-1)/(L^v-1)``, descending exponent."""
    return _render_terms(x.terms)


_ATOM = re.compile(
    r"\(L-1\)/\(L\^(?P<nu>\d+)-1\)"
    r"|L\^\((?P<pexp>-?\d+(?:/\d+)?)\)"
    r"|L\^(?P<iexp>\d+)"
    r"|(?P<bare>L)"
    r"|(?P<num>\d+(?:/\d+)?)"
)


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("*", "^")):
            out.append(cur)
            cur = ch
            continue
        cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse(text: str) -> MotivicExpr:
    """Inverse of render(); also accepts bare ``L``, ``L^3`` and omitted unit coefficients."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return MotivicExpr()
    terms = []
    for chunk in _split_terms(text):
        sign = 1
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sign = -sign
            chunk = chunk[1:]
        coeff, exponent, factors = Fraction(sign), Fraction(0), []
        pos = 0
        while pos < len(chunk):
            m = _ATOM.match(chunk, pos)
            if not m:
                raise ValueError(f"cannot parse motivic term {chunk!r} at offset {pos}")
            if m.group("nu"):
                factors.append(int(m.group("nu")))
            elif m.group("pexp") is not None:
                exponent += Fraction(m.group("pexp"))
            elif m.group("iexp") is not None:
                exponent += int(m.group("iexp"))
            elif m.group("bare"):
                exponent += 1
            else:
                coeff *= Fraction(m.group("num"))
            pos = m.end()
            if pos < len(chunk):
                if chunk[pos] != "*":
                    raise ValueError(f"expected '*' in {chunk!r} at offset {pos}")
                pos += 1
        terms.append(MotivicTerm(coeff, exponent, tuple(factors)))
    return MotivicExpr(terms)


def to_json(x: MotivicExpr) -> dict:
    return {
        "grain": x.grain,
        "terms": [
            {
                "coeff": str(t.coeff),
                "exponent": {"num": t.exponent.numerator, "den": t.exponent.denominator},
                "factors": list(t.factors),
            }
            for t in x.terms
        ],
    }


def from_json(data) -> MotivicExpr:
    if isinstance(data, str):
        return parse(data)
    if isinstance(data, (int,)):
        return MotivicExpr.const(data)
    terms = []
    for t in data.get("terms", []):
        exp = t.get("exponent", 0)
        if isinstance(exp, dict):
            exp = Fraction(int(exp["num"]), int(exp.get("den", 1)))
        terms.append(MotivicTerm(Fraction(str(t["coeff"])), Fraction(exp), tuple(t.get("factors", ()))))
    return MotivicExpr(terms, int(data.get("grain", 1)))


L = MotivicExpr.lpow(1)
ONE = MotivicExpr.const(1)
ZERO = MotivicExpr()
