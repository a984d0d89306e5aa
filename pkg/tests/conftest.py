import itertools
import random
from fractions import Fraction

import pytest

from motivic_mckay.motivic import MotivicExpr, MotivicTerm


def series_mul(a, b, n, q):
    out = [0] * (n + 1)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            out[i + j] += a[i] * b[j]
    return [c % q for c in out]


def brute_force_jets(f, nvars, q, level, origin_only=True):
    """Every jet (tuple of coefficient lists) with f(jet) = 0 mod t^(level+1), by itertools.

    ``f(series, n, q)`` returns the truncated series of the equation.
    """
    first = 1 if origin_only else 0
    slots = nvars * (level + 1 - first)
    out = []
    for flat in itertools.product(range(q), repeat=slots):
        series = []
        for v in range(nvars):
            coeffs = list(flat[v * (level + 1 - first):(v + 1) * (level + 1 - first)])
            series.append([0] * first + coeffs)
        if not any(f(series, level, q)):
            out.append(tuple(tuple(s) for s in series))
    return out


def a1_equation(series, n, q):
    x, y, z = series
    xy = series_mul(x, y, n, q)
    zz = series_mul(z, z, n, q)
    return [(a - b) % q for a, b in zip(xy, zz)]


def random_expr(rng: random.Random, max_terms=3, grains=(1, 2), nus=(2, 3)) -> MotivicExpr:
    grain = rng.choice(grains)
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        coeff = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2)))
        exponent = Fraction(rng.randint(-3 * grain, 3 * grain), grain)
        factors = tuple(rng.choice(nus) for _ in range(rng.randint(0, 1)))
        terms.append(MotivicTerm(coeff, exponent, factors))
    return MotivicExpr(terms, grain)


@pytest.fixture
def rng():
    return random.Random(20261017)


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def lifted_cyclic_jet(rng: random.Random, d: int, e: int, extra: int = 3):
    """An arc on uv = w^d built from x = t^(e/d) phi1, y = t^((d-e)/d) phi2.

    Returns ((u, v, w), level) with u = t^e phi1^d, v = t^(d-e) phi2^d,
    w = t phi1 phi2 and a level deep enough to see ord_t(u).
    """
    def rand_phi(val):
        body = [rng.randint(-3, 3) for _ in range(rng.randint(0, 3))]
        return [0] * val + [rng.choice((-2, -1, 1, 2, 3))] + body

    phi1 = rand_phi(rng.randint(0, 2))
    phi2 = rand_phi(rng.randint(1 if e == d else 0, 2))
    u, v = [1], [1]
    for _ in range(d):
        u = poly_mul(u, phi1)
        v = poly_mul(v, phi2)
    u = [0] * e + u
    v = [0] * (d - e) + v
    w = [0] + poly_mul(phi1, phi2)
    ord_u = next(i for i, c in enumerate(u) if c)
    return (u, v, w), ord_u + rng.randint(0, extra)
