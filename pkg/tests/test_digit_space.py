import math
import random

import pytest
from hypothesis import given, strategies as st

from mdsquares.digit_space import (
    decode,
    encode,
    enumerate_w,
    make_basis,
    make_digit_spec,
    parse_digit_set,
    polynomial_basis,
    split_digit_specs,
    stratify,
)
from mdsquares.errors import CapExceeded, ConfigError, NotIndependent
from mdsquares.field_core import make_field, mul
from naive import NaiveField, naive_w


def test_polynomial_basis():
    assert [a.coeffs for a in polynomial_basis(make_field(5, 1)).elements] == [(1,)]
    ctx = make_field(3, 2)
    assert [a.coeffs for a in polynomial_basis(ctx).elements] == [(1, 0), (0, 1)]


def test_make_basis_validation():
    ctx = make_field(3, 2)
    make_basis(ctx, [ctx.one, ctx.t])
    with pytest.raises(NotIndependent):
        make_basis(ctx, [ctx.one, ctx.scalar(2)])
    with pytest.raises(NotIndependent):
        make_basis(ctx, [ctx.t, mul(ctx, ctx.scalar(2), ctx.t)])


def test_encode_decode_examples():
    ctx = make_field(3, 2)
    B = polynomial_basis(ctx)
    assert encode(ctx, B, (0, 0)) == ctx.zero
    assert encode(ctx, B, (2, 1)) == ctx.element([2, 1])
    for k, a in enumerate(B.elements):
        assert decode(ctx, B, a) == tuple(int(i == k) for i in range(2))


@given(st.sampled_from([(5, 2), (3, 3), (7, 2), (3, 4)]), st.integers(0, 2**32))
def test_roundtrip_in_random_basis(pr, seed):
    rng = random.Random(seed)
    ctx = make_field(*pr)
    while True:
        elems = [ctx.element([rng.randrange(ctx.p) for _ in range(ctx.r)]) for _ in range(ctx.r)]
        try:
            B = make_basis(ctx, elems)
            break
        except NotIndependent:
            continue
    for _ in range(100):
        digits = tuple(rng.randrange(ctx.p) for _ in range(ctx.r))
        assert decode(ctx, B, encode(ctx, B, digits)) == digits


def test_digit_grammar():
    assert parse_digit_set("full", 5) == (0, 1, 2, 3, 4)
    assert parse_digit_set("range:1..3", 5) == (1, 2, 3)
    assert parse_digit_set("list:3,1,3", 5) == (1, 3)
    assert parse_digit_set("random:3:9", 7) == parse_digit_set("random:3:9", 7)
    assert len(parse_digit_set("random:3:9", 7)) == 3
    for bad in ("list:7", "range:3..1", "bogus", "random:9:1", "list:"):
        with pytest.raises(ConfigError):
            parse_digit_set(bad, 7)
    assert split_digit_specs("full,list:1,2,range:0..3") == ["full", "list:1,2", "range:0..3"]


def test_enumerate_examples():
    ctx = make_field(5, 2)
    B = polynomial_basis(ctx)
    spec = make_digit_spec(B, ["full", "full"])
    assert len(set(enumerate_w(spec))) == 25
    spec = make_digit_spec(B, [[0], [0]])
    assert list(enumerate_w(spec)) == [ctx.zero]
    spec = make_digit_spec(B, [[1, 2], [0, 3]])
    assert [x.coeffs for x in enumerate_w(spec)] == [(1, 0), (1, 3), (2, 0), (2, 3)]
    with pytest.raises(CapExceeded):
        list(enumerate_w(make_digit_spec(B, ["full", "full"]), cap=10))


def test_enumeration_matches_naive_in_lexicographic_order():
    ctx = make_field(7, 3)
    N = NaiveField(7, ctx.modulus)
    basis = [(1, 2, 0), (0, 1, 5), (3, 0, 1)]
    B = make_basis(ctx, [ctx.element(a) for a in basis])
    sets = [[0, 2, 6], [1, 4], [0, 1, 2, 3, 5]]
    spec = make_digit_spec(B, sets)
    assert [x.coeffs for x in enumerate_w(spec)] == naive_w(N, basis, sets)


def test_enumeration_blocks_split_large_sets():
    import mdsquares.digit_space as ds

    ctx = make_field(11, 3)
    spec = make_digit_spec(polynomial_basis(ctx), ["full"] * 3)
    blocks = list(ds.iter_w_blocks(spec, block=50))
    assert sum(len(b) for b in blocks) == ctx.q
    codes = [int(c) for b in blocks for c in b @ ctx.powers]
    assert sorted(codes) == list(range(ctx.q))


@pytest.mark.parametrize("p, r", [(3, 2), (5, 2), (7, 3), (13, 2), (3, 4)])
def test_injectivity_random_specs(p, r):
    ctx = make_field(p, r)
    rng = random.Random(p * r)
    for _ in range(50):
        while True:
            try:
                B = make_basis(ctx, [ctx.element([rng.randrange(p) for _ in range(r)]) for _ in range(r)])
                break
            except NotIndependent:
                pass
        sets = [rng.sample(range(p), rng.randint(1, p)) for _ in range(r)]
        spec = make_digit_spec(B, sets)
        assert len(set(enumerate_w(spec))) == spec.w_size == math.prod(len(s) for s in sets)


def test_permuted_basis_gives_same_set():
    ctx = make_field(5, 3)
    B = polynomial_basis(ctx)
    sets = [[0, 1], [2, 3, 4], [1]]
    perm = [2, 0, 1]
    spec = make_digit_spec(B, sets)
    spec2 = make_digit_spec(make_basis(ctx, [B.elements[i] for i in perm]), [sets[i] for i in perm])
    assert set(enumerate_w(spec)) == set(enumerate_w(spec2))


def test_strata_examples():
    ctx = make_field(7, 2)
    B = polynomial_basis(ctx)
    rep = stratify(make_digit_spec(B, ["full", [0, 1, 2]]), pivot=1)
    assert rep.sizes == {1: 1, 2: 2}
    rep = stratify(make_digit_spec(B, ["full", [1, 2]]), pivot=1)
    assert rep.sizes == {1: 0, 2: 2}


@pytest.mark.parametrize("p, r", [(3, 4), (5, 4), (3, 6), (7, 3)])
def test_strata_identities(p, r):
    ctx = make_field(p, r)
    rng = random.Random(11)
    for _ in range(10):
        sets = [rng.sample(range(p), rng.randint(1, p)) for _ in range(r)]
        spec = make_digit_spec(polynomial_basis(ctx), sets)
        for pivot in range(1, r + 1):
            rep = stratify(spec, pivot, member_cap=10**6)
            tail = math.prod(len(s) for j, s in enumerate(sets) if j != pivot - 1)
            assert rep.total == tail
            zero_tail = all(0 in s for j, s in enumerate(sets) if j != pivot - 1)
            assert rep.sizes[1] == (1 if zero_tail else 0)
            assert sum(len(m) for m in rep.members.values()) == tail


def test_strata_against_naive_degrees():
    ctx = make_field(3, 4)
    N = NaiveField(3, ctx.modulus)
    B = polynomial_basis(ctx)
    sets = [[1, 2], [0, 1], [0, 2], [0, 1, 2]]
    rep = stratify(make_digit_spec(B, sets), pivot=1, member_cap=100)
    # pivot basis element is 1, so b_j = a_j
    for d, members in rep.members.items():
        for tup in members:
            x = (0,) + tup
            assert N.degree(x) == d


def test_auto_pivot_picks_largest():
    ctx = make_field(5, 3)
    spec = make_digit_spec(polynomial_basis(ctx), [[1], [0, 1, 2], [3, 4]])
    assert stratify(spec).pivot == 2
