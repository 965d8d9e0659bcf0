import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import GRID
from mdsquares.errors import (
    DimensionMismatch,
    EvenCharacteristic,
    NotIrreducible,
    NotPrime,
    OrderDoesNotDivide,
    ZeroArgument,
    ZeroInverse,
)
from mdsquares.field_core import (
    add,
    are_conjugate,
    arith,
    array_from_codes,
    codes_of,
    conjugates,
    degree_many,
    degree_over_prime,
    discrete_log,
    fe_inv,
    fe_pow,
    find_irreducible,
    frobenius,
    is_irreducible,
    make_field,
    mul,
    mul_many,
    mult_char,
    parse_poly,
    format_poly,
    quadratic_char,
    quadratic_char_many,
)
from naive import NaiveField


def rand_elem(ctx, rng):
    return ctx.element([rng.randrange(ctx.p) for _ in range(ctx.r)])


# -- irreducible polynomials --------------------------------------------------

@pytest.mark.parametrize(
    "p, r, expected",
    [
        (3, 1, (0, 1)),
        (3, 2, (1, 0, 1)),
        (5, 2, (2, 0, 1)),
        # from an exhaustive factor-product scan in tests/naive-style brute force
        (7, 2, (1, 0, 1)),
        (5, 3, (1, 1, 0, 1)),
        (3, 4, (2, 1, 0, 0, 1)),
    ],
)
def test_find_irreducible(p, r, expected):
    assert find_irreducible(p, r) == expected


def test_find_irreducible_rejects_composite():
    with pytest.raises(NotPrime):
        find_irreducible(9, 2)


@pytest.mark.parametrize("p", [3, 5])
def test_irreducibility_matches_root_scan_for_quadratics_and_cubics(p):
    import itertools

    for r in (2, 3):
        for coeffs in itertools.product(range(p), repeat=r):
            f = list(coeffs) + [1]
            has_root = any(sum(c * x**i for i, c in enumerate(f)) % p == 0 for x in range(p))
            assert is_irreducible(f, p) == (not has_root)


# -- construction --------------------------------------------------------------

def test_make_field_f9():
    ctx = make_field(3, 2)
    assert ctx.modulus == (1, 0, 1)
    assert ctx.q == 9


def test_make_field_errors():
    with pytest.raises(EvenCharacteristic):
        make_field(2, 3)
    with pytest.raises(NotPrime):
        make_field(9, 2)
    with pytest.raises(NotIrreducible):
        make_field(5, 2, "1,0,1")  # x^2 + 1 = (x - 2)(x + 2) mod 5
    with pytest.raises(NotIrreducible):
        make_field(3, 2, "1,0,2")  # not monic
    with pytest.raises(ValueError):
        make_field(7, 1, generator=[2])  # 2 has order 3 mod 7


def test_poly_text_roundtrip():
    assert parse_poly("1,0,1") == (1, 0, 1)
    assert format_poly((1, 0, 1)) == "1,0,1"
    assert make_field(3, 2, "1,0,1").modulus == (1, 0, 1)


# -- arithmetic ------------------------------------------------------------------

def test_arith_examples():
    ctx = make_field(3, 2)
    t = ctx.t
    assert mul(ctx, t, t) == ctx.scalar(2)
    x = ctx.element([2, 1])
    assert add(ctx, x, ctx.zero) == x
    assert mul(ctx, x, fe_inv(ctx, x)) == ctx.one
    with pytest.raises(ValueError):
        arith(ctx, "div", x, x)
    with pytest.raises(DimensionMismatch):
        add(ctx, x, make_field(3, 3).one)


def test_pow_and_inverse():
    ctx = make_field(5, 1)
    assert fe_inv(ctx, ctx.scalar(2)) == ctx.scalar(3)
    with pytest.raises(ZeroInverse):
        fe_inv(ctx, ctx.zero)
    F = make_field(7, 2)
    rng = random.Random(1)
    for _ in range(50):
        x = rand_elem(F, rng)
        assert fe_pow(F, x, 0) == F.one
        if not x.is_zero():
            assert fe_pow(F, x, F.q - 1) == F.one


@pytest.mark.parametrize("p, r, modulus", [(5, 2, (2, 0, 1)), (3, 3, None), (7, 2, (3, 1, 1))])
def test_mul_against_naive(p, r, modulus):
    ctx = make_field(p, r, modulus)
    N = NaiveField(p, ctx.modulus)
    for x in N.elements[:: max(1, len(N.elements) // 40)]:
        for y in N.elements[:: max(1, len(N.elements) // 40)]:
            assert mul(ctx, ctx.element(x), ctx.element(y)).coeffs == N.mul(x, y)


@pytest.mark.parametrize("p, r", [(5, 2), (3, 3), (7, 3), (13, 2)])
def test_vector_mul_matches_scalar(p, r):
    ctx = make_field(p, r)
    rng = np.random.default_rng(0)
    codes_a = rng.integers(0, ctx.q, 200)
    codes_b = rng.integers(0, ctx.q, 200)
    prod = mul_many(ctx, array_from_codes(ctx, codes_a), array_from_codes(ctx, codes_b))
    for a, b, c in zip(codes_a, codes_b, codes_of(ctx, prod)):
        assert ctx.to_int(mul(ctx, ctx.from_int(int(a)), ctx.from_int(int(b)))) == c


# -- Frobenius, degrees, conjugacy ---------------------------------------------

def test_frobenius_examples():
    ctx = make_field(5, 2)
    rng = random.Random(2)
    for _ in range(30):
        x = rand_elem(ctx, rng)
        assert frobenius(ctx, x, 0) == x
        assert frobenius(ctx, x, ctx.r) == x
    for c in range(5):
        assert frobenius(ctx, ctx.scalar(c), 1) == ctx.scalar(c)


def test_degree_examples():
    ctx = make_field(3, 2)
    assert degree_over_prime(ctx, ctx.zero) == 1
    for x in ctx.elements():
        assert degree_over_prime(ctx, x) == (2 if x.coeffs[1] else 1)


def test_degree_embedded_subfield_f81():
    ctx = make_field(3, 4)
    N = NaiveField(3, ctx.modulus)
    sub = [x for x in N.elements if N.degree(x) == 2]
    assert len(sub) == 9 - 3
    for x in sub:
        assert degree_over_prime(ctx, ctx.element(x)) == 2


def test_degree_vector_matches_scalar():
    ctx = make_field(3, 4)
    X = array_from_codes(ctx, np.arange(ctx.q))
    deg = degree_many(ctx, X)
    assert [int(d) for d in deg] == [degree_over_prime(ctx, x) for x in ctx.elements()]
    assert np.bincount(deg).tolist() == [0, 3, 6, 0, 72]


def test_conjugacy_examples():
    ctx = make_field(5, 2)
    t = ctx.t
    assert are_conjugate(ctx, t, t)
    assert are_conjugate(ctx, t, fe_pow(ctx, t, 5))
    assert not are_conjugate(ctx, ctx.scalar(1), ctx.scalar(2))


# -- characters ------------------------------------------------------------------

def test_quadratic_char_examples():
    ctx = make_field(5, 1)
    assert quadratic_char(ctx, ctx.zero) == 0
    assert quadratic_char(ctx, ctx.one) == 1
    assert quadratic_char(ctx, ctx.scalar(2)) == -1


def test_discrete_log_examples():
    ctx = make_field(7, 1, generator=[3])
    assert discrete_log(ctx, ctx.one) == 0
    assert discrete_log(ctx, ctx.scalar(3)) == 1
    assert discrete_log(ctx, ctx.scalar(6)) == 3
    assert mult_char(ctx, 3, ctx.scalar(2)).index == 2
    assert mult_char(ctx, 3, ctx.one).index == 0
    with pytest.raises(ZeroArgument):
        discrete_log(ctx, ctx.zero)
    with pytest.raises(OrderDoesNotDivide):
        mult_char(ctx, 4, ctx.one)


@pytest.mark.parametrize("table_cap", [1 << 24, 10])
def test_dlog_inverts_pow(table_cap):
    ctx = make_field(5, 3, table_cap=table_cap)  # table_cap=10 forces baby-step/giant-step
    g = ctx.primitive
    for k in list(range(0, ctx.q - 1, 7)) + [ctx.q - 2]:
        assert discrete_log(ctx, fe_pow(ctx, g, k)) == k


def test_generator_is_primitive_and_cached():
    ctx = make_field(11, 2)
    g = ctx.primitive
    assert ctx.primitive is g
    assert len({ctx.to_int(fe_pow(ctx, g, k)) for k in range(ctx.q - 1)}) == ctx.q - 1


def test_mult_char_order_two_agrees_with_quadratic():
    ctx = make_field(13, 2)
    rng = random.Random(3)
    for _ in range(1000):
        x = rand_elem(ctx, rng)
        assert mult_char(ctx, 2, x).as_int() == quadratic_char(ctx, x)


# -- algebraic invariants over the grid ------------------------------------------

@pytest.mark.parametrize("p, r", GRID)
def test_character_table_census_and_orthogonality(field_cache, p, r):
    ctx = field_cache(p, r)
    chi = ctx.chi_table
    assert int(chi.sum()) == 0
    assert int((chi == 1).sum()) == (ctx.q - 1) // 2
    assert np.array_equal(chi == 1, ctx.square_flags)


@pytest.mark.parametrize("p, r", GRID)
def test_scalar_euler_matches_vector_path(field_cache, p, r):
    ctx = field_cache(p, r)
    rng = random.Random(p * 10 + r)
    xs = [rand_elem(ctx, rng) for _ in range(100)]
    vec = quadratic_char_many(ctx, np.array([x.coeffs for x in xs]))
    assert [quadratic_char(ctx, x) for x in xs] == vec.tolist()


@given(st.sampled_from(GRID), st.randoms(use_true_random=False))
def test_multiplicativity_and_frobenius_homomorphism(pr, rng):
    p, r = pr
    ctx = make_field(p, r)
    for _ in range(20):
        x, y = rand_elem(ctx, rng), rand_elem(ctx, rng)
        assert quadratic_char(ctx, mul(ctx, x, y)) == quadratic_char(ctx, x) * quadratic_char(ctx, y)
        assert frobenius(ctx, add(ctx, x, y), 1) == add(ctx, frobenius(ctx, x, 1), frobenius(ctx, y, 1))
        assert frobenius(ctx, mul(ctx, x, y), 1) == mul(ctx, frobenius(ctx, x, 1), frobenius(ctx, y, 1))


@pytest.mark.parametrize("p, r", GRID)
def test_multiplicativity_thousand_pairs(field_cache, p, r):
    ctx = field_cache(p, r)
    rng = np.random.default_rng(p + r)
    a = array_from_codes(ctx, rng.integers(1, ctx.q, 1000))
    b = array_from_codes(ctx, rng.integers(1, ctx.q, 1000))
    lhs = quadratic_char_many(ctx, mul_many(ctx, a, b))
    rhs = quadratic_char_many(ctx, a) * quadratic_char_many(ctx, b)
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("p, r", [(3, 2), (5, 2), (3, 3), (3, 4), (5, 4), (3, 6)])
def test_conjugacy_class_size_equals_degree(p, r):
    ctx = make_field(p, r)
    step = max(1, ctx.q // 300)
    for n in range(0, ctx.q, step):
        x = ctx.from_int(n)
        assert len(set(conjugates(ctx, x))) == degree_over_prime(ctx, x)
