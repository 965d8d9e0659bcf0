"""Bases over F_p, digit sets, the sets W(D_1, ..., D_r) and their strata L_d."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, ConfigError, DimensionMismatch, NotIndependent
from .field_core import (
    ENUM_CAP,
    FieldCtx,
    FieldElement,
    as_array,
    degree_many,
    divisors,
    fe_inv,
    mul,
)
from .rng import SplitMix64

BLOCK = 1 << 18


def _inverse_mod_p(M: list[list[int]], p: int) -> list[list[int]] | None:
    """Gauss-Jordan inverse of a square matrix over Z_p; None when singular."""
    n = len(M)
    A = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] % p), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, p)
        A[col] = [v * inv % p for v in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[col])]
    return [row[n:] for row in A]


@dataclass(frozen=True, eq=False)
class Basis:
    ctx: FieldCtx
    elements: tuple[FieldElement, ...]

    @cached_property
    def matrix(self) -> np.ndarray:
        """Row j is the coefficient vector of a_j."""
        return np.array([a.coeffs for a in self.elements], dtype=np.int64).reshape(self.ctx.r, self.ctx.r)

    @cached_property
    def inverse(self) -> list[list[int]]:
        inv = _inverse_mod_p([list(a.coeffs) for a in self.elements], self.ctx.p)
        assert inv is not None
        return inv


def make_basis(ctx: FieldCtx, elements: Sequence[FieldElement]) -> Basis:
    elements = tuple(elements)
    if len(elements) != ctx.r:
        raise DimensionMismatch(f"a basis of F_{ctx.q} needs {ctx.r} elements, got {len(elements)}")
    for a in elements:
        if len(a.coeffs) != ctx.r:
            raise DimensionMismatch(f"element {a} has the wrong length")
    if _inverse_mod_p([list(a.coeffs) for a in elements], ctx.p) is None:
        raise NotIndependent("basis elements are linearly dependent over F_p")
    return Basis(ctx, elements)


def polynomial_basis(ctx: FieldCtx) -> Basis:
    """{1, t, ..., t^(r-1)} for t the class of x."""
    return Basis(ctx, tuple(ctx.element([0] * i + [1]) for i in range(ctx.r)))


def encode(ctx: FieldCtx, basis: Basis, digits: Sequence[int]) -> FieldElement:
    if len(digits) != ctx.r:
        raise DimensionMismatch(f"expected {ctx.r} digits")
    p = ctx.p
    out = [0] * ctx.r
    for c, a in zip(digits, basis.elements):
        for i, ai in enumerate(a.coeffs):
            out[i] += c * ai
    return FieldElement(tuple(v % p for v in out))


def decode(ctx: FieldCtx, basis: Basis, x: FieldElement) -> tuple[int, ...]:
    """Coordinates of x in the basis: solves digits @ B = x over Z_p."""
    p, inv = ctx.p, basis.inverse
    return tuple(sum(x.coeffs[i] * inv[i][j] for i in range(ctx.r)) % p for j in range(ctx.r))


# ---------------------------------------------------------------------------
# digit sets


def parse_digit_set(text: str, p: int) -> tuple[int, ...]:
    """Grammar: ``full``, ``range:a..b`` (inclusive), ``list:3,5,7``, ``random:k:seed``."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    try:
        if kind == "full" and not arg:
            digits = range(p)
        elif kind == "range":
            a, b = arg.split("..")
            digits = range(int(a), int(b) + 1)
        elif kind == "list":
            digits = [int(t) for t in arg.split(",") if t.strip()]
        elif kind == "random":
            k, seed = (int(t) for t in arg.split(":"))
            if not 0 < k <= p:
                raise ConfigError(f"random subset size {k} not in [1, {p}]")
            digits = SplitMix64(seed).subset(p, k)
        else:
            raise ConfigError(f"unknown digit-set spec {text!r}")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"malformed digit-set spec {text!r}") from exc
    out = tuple(sorted(set(digits)))
    if not out:
        raise ConfigError(f"digit-set spec {text!r} is empty")
    if out[0] < 0 or out[-1] >= p:
        raise ConfigError(f"digit-set spec {text!r} has digits outside [0, {p})")
    return out


def split_digit_specs(text: str) -> list[str]:
    """Split ``full,list:1,2,range:0..3`` into per-position specs.

    Bare integers after a ``list:`` token belong to that list.
    """
    out: list[str] = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if out and out[-1].startswith("list:") and tok.lstrip("-").isdigit():
            out[-1] += "," + tok
        else:
            out.append(tok)
    return out


@dataclass(frozen=True, eq=False)
class DigitSpec:
    basis: Basis
    digit_sets: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=())

    @property
    def ctx(self) -> FieldCtx:
        return self.basis.ctx

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.digit_sets)

    @property
    def w_size(self) -> int:
        return math.prod(self.sizes)

    @property
    def zero_in_w(self) -> bool:
        return all(0 in d for d in self.digit_sets)


def make_digit_spec(basis: Basis, digit_sets: Sequence[Sequence[int] | str], labels=None) -> DigitSpec:
    ctx = basis.ctx
    if len(digit_sets) != ctx.r:
        raise DimensionMismatch(f"need {ctx.r} digit sets, got {len(digit_sets)}")
    clean, names = [], []
    for d in digit_sets:
        if isinstance(d, str):
            names.append(d)
            d = parse_digit_set(d, ctx.p)
        else:
            d = tuple(sorted(set(int(c) for c in d)))
            names.append("list:" + ",".join(map(str, d)))
        if not d:
            raise ConfigError("digit sets must be nonempty")
        if d[0] < 0 or d[-1] >= ctx.p:
            raise ConfigError(f"digits must lie in [0, {ctx.p})")
        clean.append(d)
    return DigitSpec(basis, tuple(clean), tuple(labels or names))


def auto_pivot(spec: DigitSpec) -> int:
    """1-based index of the largest digit set (first one on ties)."""
    sizes = spec.sizes
    return 1 + sizes.index(max(sizes))


def resolve_pivot(spec: DigitSpec, pivot: int | str | None) -> int:
    if pivot is None or pivot == "auto":
        return auto_pivot(spec)
    pivot = int(pivot)
    if not 1 <= pivot <= spec.ctx.r:
        raise ConfigError(f"pivot {pivot} not in [1, {spec.ctx.r}]")
    return pivot


# ---------------------------------------------------------------------------
# enumeration


def _combine(ctx: FieldCtx, digit_sets, vectors: np.ndarray) -> np.ndarray:
    """All sum_j c_j v_j (rows of ``vectors``), c_j ranging over digit_sets[j], lexicographic."""
    out = np.zeros((1, ctx.r), dtype=np.int64)
    for d, v in zip(digit_sets, vectors):
        contrib = np.outer(np.array(d, dtype=np.int64), v)
        out = ((out[:, None, :] + contrib[None, :, :]) % ctx.p).reshape(-1, ctx.r)
    return out


def iter_w_blocks(spec: DigitSpec, cap: int = ENUM_CAP, block: int = BLOCK) -> Iterator[np.ndarray]:
    """Coefficient arrays covering W in lexicographic digit order."""
    ctx = spec.ctx
    if spec.w_size > cap:
        raise CapExceeded(f"|W| = {spec.w_size} exceeds the cap {cap}")
    if ctx.q > ENUM_CAP:
        raise CapExceeded(f"q = {ctx.q} exceeds the enumeration cap {ENUM_CAP}")
    sizes, vecs = spec.sizes, spec.basis.matrix
    # shortest prefix whose complement fits in a block
    split = 0
    while split < ctx.r and math.prod(sizes[split:]) > block:
        split += 1
    tail = _combine(ctx, spec.digit_sets[split:], vecs[split:])
    for prefix in itertools.product(*spec.digit_sets[:split]):
        head = np.zeros(ctx.r, dtype=np.int64)
        for c, v in zip(prefix, vecs[:split]):
            head = head + c * v
        yield (tail + head) % ctx.p


def enumerate_w(spec: DigitSpec, cap: int = ENUM_CAP) -> Iterator[FieldElement]:
    """Each element of W once, in lexicographic digit order."""
    for blk in iter_w_blocks(spec, cap):
        for row in blk.tolist():
            yield FieldElement(tuple(row))


# ---------------------------------------------------------------------------
# strata


@dataclass
class StrataReport:
    pivot: int
    sizes: dict[int, int]
    members: dict[int, list[tuple[int, ...]]] | None = None

    @property
    def total(self) -> int:
        return sum(self.sizes.values())


def normalized_tail(spec: DigitSpec, pivot: int) -> tuple[list[int], list[FieldElement]]:
    """Positions j != pivot (0-based) and b_j = a_j / a_pivot."""
    ctx, a = spec.ctx, spec.basis.elements
    inv = fe_inv(ctx, a[pivot - 1])
    idx = [j for j in range(ctx.r) if j != pivot - 1]
    return idx, [mul(ctx, a[j], inv) for j in idx]


def tail_elements(spec: DigitSpec, pivot: int, cap: int = ENUM_CAP) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Coefficient rows of sum_{j != pivot} c_j b_j over the tail product, with the digit tuples."""
    ctx = spec.ctx
    idx, b = normalized_tail(spec, pivot)
    tail_sets = [spec.digit_sets[j] for j in idx]
    n = math.prod(len(d) for d in tail_sets)
    if n > cap:
        raise CapExceeded(f"tail product size {n} exceeds the cap {cap}")
    if not idx:
        return np.zeros((1, ctx.r), dtype=np.int64), [()]
    rows = _combine(ctx, tail_sets, as_array(ctx, b))
    return rows, list(itertools.product(*tail_sets))


def stratify(spec: DigitSpec, pivot: int | str | None = "auto", cap: int = ENUM_CAP, member_cap: int = 0) -> StrataReport:
    """|L_d| for each d | r; members listed when the tail has at most ``member_cap`` tuples."""
    ctx = spec.ctx
    pivot = resolve_pivot(spec, pivot)
    rows, tuples = tail_elements(spec, pivot, cap)
    deg = degree_many(ctx, rows)
    sizes = {d: int(np.count_nonzero(deg == d)) for d in divisors(ctx.r)}
    members = None
    if len(tuples) <= member_cap:
        members = {d: [t for t, dd in zip(tuples, deg.tolist()) if dd == d] for d in divisors(ctx.r)}
    return StrataReport(pivot, sizes, members)
