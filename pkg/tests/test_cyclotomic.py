import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motivic_mckay.cyclotomic import (
    CycNum,
    NotInSubfieldError,
    cyc_arith,
    cyclotomic_poly,
    euler_phi,
    kernel_dimension,
    primitive_root,
    rank,
    root_of_unity,
)

CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 12, 20]


@st.composite
def cycnums(draw, conductor=None):
    d = conductor or draw(st.sampled_from(CONDUCTORS))
    coeffs = draw(
        st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=euler_phi(d), max_size=euler_phi(d))
    )
    return CycNum(d, coeffs)


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert euler_phi(120) == 32


@pytest.mark.parametrize("d, expected", [(1, 1), (2, -1)])
def test_primitive_root_small(d, expected):
    assert primitive_root(d) == expected


def test_primitive_root_four_squares_to_minus_one():
    xi = primitive_root(4)
    assert (xi * xi + 1).is_zero()


@pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 8, 9, 12, 15, 20, 24])
def test_root_orders(d):
    xi = primitive_root(d)
    assert xi ** d == 1
    assert all(xi ** e != 1 for e in range(1, d))
    assert sum((xi ** e for e in range(d)), CycNum.zero(d)).is_zero()


def test_arith_examples():
    x = primitive_root(3)
    assert cyc_arith(x, x * x, "add") == -1
    assert cyc_arith(primitive_root(4), primitive_root(4), "mul") == -1
    a = CycNum(5, [1, 2, 3, 4])
    assert cyc_arith(a, CycNum.one(5), "mul") == a
    with pytest.raises(ZeroDivisionError):
        cyc_arith(a, CycNum.zero(5), "div")


def test_mixed_conductors_unify_to_lcm():
    s = primitive_root(4) + primitive_root(3)
    assert s.conductor == 12
    # i = xi_12^3, omega = xi_12^4
    assert s == root_of_unity(12, 3) + root_of_unity(12, 4)


def test_unreduced_parse():
    # x^2 + x + 1 reduces to 0 mod Phi_3
    assert CycNum.from_json(["1", "1", "1"], 3).is_zero()
    assert CycNum.from_json({"conductor": 4, "coeffs": ["0", "0", "1"]}) == -1
    x = CycNum(8, [Fraction(1, 2), 0, 3])
    assert CycNum.from_json(x.to_json()) == x


def test_restrict_rejects_outside_subfield():
    with pytest.raises(NotInSubfieldError):
        primitive_root(12).restrict(4)
    assert root_of_unity(12, 3).restrict(4) == primitive_root(4)


@settings(max_examples=60, deadline=None)
@given(cycnums(12), cycnums(12), cycnums(12))
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@settings(max_examples=60, deadline=None)
@given(cycnums(), st.sampled_from([2, 3, 5]))
def test_embedding_round_trip(a, k):
    big = a.embed(a.conductor * k)
    assert big == a
    assert hash(big) == hash(a)
    assert big.restrict(a.conductor) == a


def test_kernel_dimension_examples():
    z, one = CycNum.zero(3), CycNum.one(3)
    xi = primitive_root(3)
    assert kernel_dimension([[z, z], [z, z]]) == 2
    assert kernel_dimension([[one, z, z], [z, one, z], [z, z, one]]) == 0
    assert kernel_dimension([[xi - xi, z], [z, xi * xi - xi]]) == 1


def _rational_block(m):
    # regular representation: an n x n matrix over K becomes an n*phi x n*phi rational matrix
    d = max(x.conductor for row in m for x in row)
    k = euler_phi(d)
    xi = primitive_root(d)
    out = []
    for row in m:
        block_rows = [[] for _ in range(k)]
        for x in row:
            cols = [(x * xi ** j).coeffs for j in range(k)]
            for i in range(k):
                block_rows[i].extend(cols[j][i] for j in range(k))
        out.extend(block_rows)
    return out


def _rational_rank(rows):
    rows = [list(r) for r in rows]
    r = 0
    for col in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@pytest.mark.parametrize("seed", range(12))
def test_rank_nullity_against_regular_representation(seed):
    rng = random.Random(seed)
    d = rng.choice([3, 4, 5, 8])
    n = rng.randint(1, 4)
    rows = [[CycNum(d, [rng.randint(-2, 2) for _ in range(euler_phi(d))]) for _ in range(n)] for _ in range(n)]
    if n > 1 and rng.random() < 0.6:
        # force a dependency
        c = CycNum(d, [rng.randint(-2, 2) for _ in range(euler_phi(d))])
        rows[-1] = [c * x for x in rows[0]]
    r = rank(rows)
    assert r + kernel_dimension(rows) == n
    assert _rational_rank(_rational_block(rows)) == r * euler_phi(d)


def test_bad_conductor():
    with pytest.raises(ValueError):
        primitive_root(0)
    with pytest.raises(ValueError):
        CycNum(4, [1]).embed(6)
