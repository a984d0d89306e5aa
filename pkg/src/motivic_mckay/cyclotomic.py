"""Exact arithmetic in cyclotomic fields Q(xi_d).

An element is a vector of rationals in the power basis 1, xi, ..., xi^(phi(d)-1),
kept reduced modulo the d-th cyclotomic polynomial. Elements of different
conductors are combined after embedding both into the lcm conductor.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

MAX_CACHED_CONDUCTOR = 360


class CyclotomicError(ArithmeticError):
    pass


class NotInSubfieldError(CyclotomicError, ValueError):
    pass


def _poly_divmod_monic(num: list[int], den: Sequence[int]) -> list[int]:
    # exact quotient of integer polynomials, den monic; coefficient lists low->high
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    assert not any(num), "inexact division"
    return quot


def _cyclotomic_poly_uncached(d: int) -> tuple[int, ...]:
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num = _poly_divmod_monic(num, cyclotomic_poly(e))
    return tuple(num)


@lru_cache(maxsize=MAX_CACHED_CONDUCTOR)
def _cyclotomic_poly_cached(d: int) -> tuple[int, ...]:
    return _cyclotomic_poly_uncached(d)


def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError(f"conductor must be positive, got {d}")
    if d <= MAX_CACHED_CONDUCTOR:
        return _cyclotomic_poly_cached(d)
    return _cyclotomic_poly_uncached(d)


@lru_cache(maxsize=None)
def euler_phi(d: int) -> int:
    return len(cyclotomic_poly(d)) - 1


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def _normalized_traces(d: int) -> tuple[Fraction, ...]:
    # Tr(xi^i)/phi(d) = mu(d/g)/phi(d/g), g = gcd(i, d): independent of the ambient conductor
    out = []
    for i in range(euler_phi(d)):
        m = d // math.gcd(i, d)
        out.append(Fraction(_mobius(m), euler_phi(m)))
    return tuple(out)


def _reduce(coeffs: Sequence, d: int) -> tuple[Fraction, ...]:
    phi_poly = cyclotomic_poly(d)
    deg = len(phi_poly) - 1
    work = [Fraction(c) for c in coeffs]
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            base = i - deg
            for j in range(deg):
                if phi_poly[j]:
                    work[base + j] -= c * phi_poly[j]
            work[i] = Fraction(0)
    work = work[:deg]
    work.extend([Fraction(0)] * (deg - len(work)))
    return tuple(work)


_ZERO = Fraction(0)


def _integral(coeffs) -> tuple[list[int], int]:
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = math.lcm(den, c.denominator)
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


class CycNum:
    """An element of Q(xi_d), immutable."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable = (), *, reduced: bool = False):
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        self.conductor = conductor
        coeffs = tuple(coeffs)
        if reduced:
            if len(coeffs) != euler_phi(conductor):
                raise ValueError("reduced coefficient vector has wrong length")
            self.coeffs = coeffs
        else:
            self.coeffs = _reduce(coeffs, conductor)
        self._hash = None

    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycNum":
        return cls(conductor, [Fraction(value)])

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycNum":
        return cls(conductor, [])

    @classmethod
    def one(cls, conductor: int = 1) -> "CycNum":
        return cls(conductor, [1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def key(self) -> tuple:
        """Hashable key for elements that share a conductor."""
        return (self.conductor, self.coeffs)

    def embed(self, conductor: int) -> "CycNum":
        """Image in Q(xi_D) under xi_d -> xi_D^(D/d); D must be a multiple of d."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot embed conductor {self.conductor} into {conductor}")
        step = conductor // self.conductor
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return CycNum(conductor, poly)

    def restrict(self, conductor: int) -> "CycNum":
        """Preimage under embed(); raises NotInSubfieldError if there is none."""
        if conductor == self.conductor:
            return self
        if self.conductor % conductor:
            raise ValueError(f"{conductor} does not divide {self.conductor}")
        k = euler_phi(conductor)
        basis = [CycNum(conductor, [0] * i + [1]).embed(self.conductor).coeffs for i in range(k)]
        rows = [[basis[j][i] for j in range(k)] for i in range(len(self.coeffs))]
        sol = _solve_overdetermined(rows, list(self.coeffs))
        if sol is None:
            raise NotInSubfieldError(f"element does not lie in Q(xi_{conductor})")
        return CycNum(conductor, sol, reduced=True)

    def _unify(self, other) -> tuple["CycNum", "CycNum"]:
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        m = math.lcm(self.conductor, other.conductor)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return CycNum(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)], reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, [-x for x in self.coeffs], reduced=True)

    def __sub__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return CycNum(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)], reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        if b.is_rational():
            c = b.coeffs[0]
            return CycNum(a.conductor, [x * c for x in a.coeffs], reduced=True)
        if a.is_rational():
            c = a.coeffs[0]
            return CycNum(a.conductor, [x * c for x in b.coeffs], reduced=True)
        # integer convolution and reduction over a common denominator
        na, da = _integral(a.coeffs)
        nb, db = _integral(b.coeffs)
        prod = [0] * (len(na) + len(nb) - 1)
        for i, x in enumerate(na):
            if x:
                for j, y in enumerate(nb):
                    if y:
                        prod[i + j] += x * y
        phi_poly = cyclotomic_poly(a.conductor)
        deg = len(phi_poly) - 1
        for i in range(len(prod) - 1, deg - 1, -1):
            c = prod[i]
            if c:
                base = i - deg
                for j in range(deg):
                    if phi_poly[j]:
                        prod[base + j] -= c * phi_poly[j]
        den = da * db
        return CycNum(a.conductor, [Fraction(c, den) if c else _ZERO for c in prod[:deg]], reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return CycNum(self.conductor, [1 / self.coeffs[0]])
        k = len(self.coeffs)
        # columns: coordinates of self * xi^j
        cols = []
        cur = self
        xi = primitive_root(self.conductor)
        for _ in range(k):
            cols.append(cur.coeffs)
            cur = cur * xi
        rows = [[cols[j][i] for j in range(k)] for i in range(k)]
        rhs = [Fraction(1)] + [Fraction(0)] * (k - 1)
        sol = _solve_overdetermined(rows, rhs)
        return CycNum(self.conductor, sol, reduced=True)

    def __truediv__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> "CycNum":
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNum.one(self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            tr = _normalized_traces(self.conductor)
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(sum((c * t for c, t in zip(self.coeffs, tr)), Fraction(0)))
        return self._hash

    def __repr__(self):
        return f"CycNum({self.conductor}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("xi" if i == 1 else f"xi^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data, conductor: int | None = None) -> "CycNum":
        """Accept {"conductor", "coeffs"} or a bare coefficient list with an explicit conductor.

        Coefficient lists may be unreduced polynomials of degree < d.
        """
        if isinstance(data, dict):
            conductor = int(data["conductor"])
            data = data["coeffs"]
        if conductor is None:
            raise ValueError("conductor required for a bare coefficient list")
        if isinstance(data, (int, str)):
            data = [data]
        coeffs = [Fraction(c) for c in data]
        if len(coeffs) > max(conductor, euler_phi(conductor)):
            raise ValueError(f"too many coefficients for conductor {conductor}")
        return cls(conductor, coeffs)


def _solve_overdetermined(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Unique solution of a consistent full-column-rank rational system, or None."""
    m = len(rows)
    k = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for col in range(k):
        sel = next((r for r in range(piv_row, m) if aug[r][col]), None)
        if sel is None:
            continue
        aug[piv_row], aug[sel] = aug[sel], aug[piv_row]
        inv = 1 / aug[piv_row][col]
        aug[piv_row] = [x * inv for x in aug[piv_row]]
        for r in range(m):
            if r != piv_row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv_row])]
        pivots.append(col)
        piv_row += 1
    if any(aug[r][k] for r in range(piv_row, m)):
        return None
    if len(pivots) < k:
        raise CyclotomicError("singular system")
    sol = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        sol[col] = aug[r][k]
    return sol


@lru_cache(maxsize=None)
def root_of_unity(d: int, e: int = 1) -> CycNum:
    """xi_d^e where xi_d is the power-basis generator of Q(xi_d)."""
    e %= d
    return CycNum(d, [0] * e + [1])


def primitive_root(d: int) -> CycNum:
    """The fixed primitive d-th root of unity (the class of x modulo Phi_d)."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    return root_of_unity(d, 1)


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# -- linear algebra -----------------------------------------------------------

Matrix = Sequence[Sequence[CycNum]]


def common_conductor(m: Matrix) -> int:
    c = 1
    for row in m:
        for x in row:
            c = math.lcm(c, x.conductor)
    return c


def rank(m: Matrix) -> int:
    """Rank by fraction-free elimination (no field inverses needed)."""
    if not m:
        return 0
    cond = common_conductor(m)
    rows = [[x.embed(cond) for x in row] for row in m]
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        sel = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [p[col] * x - f * y for x, y in zip(rows[i], p)]
        r += 1
        if r == len(rows):
            break
    return r


def kernel_dimension(m: Matrix) -> int:
    """dim ker(m) for a square (or n-column) matrix over a cyclotomic field."""
    if not m:
        return 0
    return len(m[0]) - rank(m)


def identity_matrix(n: int, conductor: int = 1) -> tuple[tuple[CycNum, ...], ...]:
    one, zero = CycNum.one(conductor), CycNum.zero(conductor)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> tuple[tuple[CycNum, ...], ...]:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            row.append(acc if acc is not None else CycNum.zero(a[i][0].conductor))
        out.append(tuple(row))
    return tuple(out)


def determinant(m: Matrix) -> CycNum:
    n = len(m)
    cond = common_conductor(m)
    rows = [[x.embed(cond) for x in row] for row in m]
    det = CycNum.one(cond)
    for col in range(n):
        sel = next((i for i in range(col, n) if rows[i][col]), None)
        if sel is None:
            return CycNum.zero(cond)
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = p.inverse()
        for i in range(col + 1, n):
            f = rows[i][col]
            if f:
                f = f * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return det
