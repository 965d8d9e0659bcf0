"""Instance-wise evaluation of the second-moment argument behind ``bound_main``.

``compute_chain`` evaluates every intermediate quantity (the second moment A,
its per-stratum pieces A_d, the sums S_1 and S_2) exactly on a concrete digit
spec and records each inequality of the argument as a ``ChainCheck``.
``wan_lemma_sum`` and ``lemma_sweep`` evaluate the complete sums
sum_xi chi_s((xi + alpha)(xi + beta)^(s-1)) over the prime field and compare
them with (2r - 1) sqrt(p).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .bounds import bound_main, within_bound
from .counting import CountReport, count_squares_enum
from .digit_space import DigitSpec, resolve_pivot, tail_elements
from .errors import CapExceeded, ConjugatePair, DomainError, NotGenerator, OrderDoesNotDivide
from .field_core import (
    ENUM_CAP,
    FieldCtx,
    FieldElement,
    add,
    are_conjugate,
    array_from_codes,
    codes_of,
    degree_many,
    degree_over_prime,
    divisors,
    frobenius_many,
    mul,
    mult_char,
    mult_char_many,
    fe_pow,
    mul_many,
    pow_many,
    quadratic_char,
    quadratic_char_many,
)
from .rng import SplitMix64

FLOAT_REL = 1e-12
MATRIX_BLOCK = 1 << 22


@dataclass
class ChainCheck:
    name: str
    lhs: float | int
    rhs: float | int
    passed: bool
    vacuous: bool = False

    def to_json(self) -> dict:
        def enc(v):
            return str(v) if isinstance(v, int) else v

        return {"name": self.name, "lhs": enc(self.lhs), "rhs": enc(self.rhs), "pass": self.passed, "vacuous": self.vacuous}


@dataclass
class HCurve:
    xs: list[float]
    values: list[float]
    argmin: float
    stationary: float

    def to_json(self) -> dict:
        return {"xs": self.xs, "values": self.values, "argmin": self.argmin, "stationary": self.stationary}


@dataclass
class DiagnosticsReport:
    pivot: int
    char_sum: int
    A: int
    A_d: dict[int, int]
    strata: dict[int, int]
    J: list[int]
    S_1: float
    S_2: float
    h_curve: HCurve
    chain: list[ChainCheck] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.chain)

    def failures(self) -> list[ChainCheck]:
        return [c for c in self.chain if not c.passed]

    def to_json(self) -> dict:
        return {
            "pivot": self.pivot,
            "char_sum": str(self.char_sum),
            "A": str(self.A),
            "A_d": {str(d): str(v) for d, v in self.A_d.items()},
            "strata": {str(d): str(v) for d, v in self.strata.items()},
            "J": self.J,
            "S_1": self.S_1,
            "S_2": self.S_2,
            "h_curve": self.h_curve.to_json(),
            "chain": [c.to_json() for c in self.chain],
            "all_pass": self.all_pass,
        }


# ---------------------------------------------------------------------------
# H(x)


def h_value(p: int, r: int, w_size: int, x: float) -> float:
    return x**-0.5 * p**0.25 * math.sqrt(2 * r - 1) * w_size + x**0.5 * (0.25 * p**0.75 * r**1.5 + math.sqrt(p))


def h_stationary(p: int, r: int, w_size: int) -> float:
    """Closed-form zero of H'(x)."""
    return 4 * w_size * p**-0.5 * math.sqrt(2 * r - 1) / (r**1.5 + 4 * p**-0.25)


def h_curve(p: int, r: int, w_size: int, x_grid=None) -> HCurve:
    """Samples of H on a grid inside [1, |W|] (default: 65 geometric points)."""
    if x_grid is None:
        n = 65
        x_grid = [w_size ** (k / (n - 1)) for k in range(n)]
    xs = [float(x) for x in x_grid]
    if any(not 1 <= x <= w_size for x in xs):
        raise DomainError("H is sampled on [1, |W|] only")
    vals = [h_value(p, r, w_size, x) for x in xs]
    best = min(range(len(xs)), key=vals.__getitem__)
    return HCurve(xs, vals, xs[best], h_stationary(p, r, w_size))


# ---------------------------------------------------------------------------
# the chain


def stratum_sums(spec: DigitSpec, pivot: int, cap: int = ENUM_CAP):
    """Per-stratum sums f_d(c) = sum_{tail in L_d} chi(c + sum c_j b_j), c over D_pivot.

    Returns (digits of D_pivot, {d: int64 array over D_pivot}, tail degree array).
    """
    ctx = spec.ctx
    rows, _ = tail_elements(spec, pivot, cap)
    deg = degree_many(ctx, rows)
    head = np.array(spec.digit_sets[pivot - 1], dtype=np.int64)
    if len(head) * len(rows) > cap:
        raise CapExceeded(f"|D_pivot| * tail = {len(head) * len(rows)} exceeds the cap {cap}")
    sums = {d: np.zeros(len(head), dtype=np.int64) for d in divisors(ctx.r)}
    step = max(1, MATRIX_BLOCK // max(1, len(rows)))
    for lo in range(0, len(head), step):
        cs = head[lo : lo + step]
        elems = np.repeat(rows[None, :, :], len(cs), axis=0)
        elems[:, :, 0] = (elems[:, :, 0] + cs[:, None]) % ctx.p
        chi = quadratic_char_many(ctx, elems).astype(np.int64)
        for d in sums:
            mask = deg == d
            if mask.any():
                sums[d][lo : lo + len(cs)] = chi[:, mask].sum(axis=1)
    return head, sums, deg


def _le_sqrt(lhs_int: int, coef_sq: int) -> bool:
    """lhs_int <= sqrt(coef_sq), exactly."""
    return lhs_int <= 0 or lhs_int * lhs_int <= coef_sq


def compute_chain(spec: DigitSpec, pivot: int | str | None = "auto", cap: int = ENUM_CAP, counts: CountReport | None = None) -> DiagnosticsReport:
    ctx = spec.ctx
    p, r = ctx.p, ctx.r
    if r < 2:
        raise DomainError("the chain is defined for r >= 2")
    pivot = resolve_pivot(spec, pivot)
    head, sums, deg = stratum_sums(spec, pivot, cap)
    divs = divisors(r)
    total = sum(sums.values())
    A = int((total * total).sum())
    A_d = {d: int((sums[d] * sums[d]).sum()) for d in divs}
    L = {d: int(np.count_nonzero(deg == d)) for d in divs}
    J = [d for d in divs if d > 1 and L[d] > 0]
    # chi(c a_pivot + ...) = chi(a_pivot) chi(c + sum c_j b_j)
    s = quadratic_char(ctx, spec.basis.elements[pivot - 1]) * int(total.sum())
    if counts is None:
        counts = count_squares_enum(spec, cap)
    d_piv = len(head)
    tail_size = spec.w_size // d_piv
    w = spec.w_size

    S1 = sum(math.sqrt(2 * d - 1) * L[d] for d in J)
    S2 = sum(d / math.sqrt(2 * d - 1) for d in J)
    chain: list[ChainCheck] = []

    dev = counts.deviation
    chain.append(ChainCheck("eq0_char_sum", float(dev), 0.5 + abs(s) / 2, dev <= Fraction(1, 2) + Fraction(abs(s), 2)))
    chain.append(ChainCheck("i_cauchy_schwarz", abs(s), math.sqrt(d_piv * A), s * s <= d_piv * A))
    rhs = sum(math.sqrt(v) for v in A_d.values())
    chain.append(ChainCheck("ii_triangle", math.sqrt(A), rhs, math.sqrt(A) <= rhs * (1 + FLOAT_REL)))
    for d in divs:
        if d == 1:
            continue
        Ld = L[d]
        bound = (2 * d - 1) * math.sqrt(p) * Ld * Ld + d * p * Ld
        ok = _le_sqrt(A_d[d] - d * p * Ld, (2 * d - 1) ** 2 * Ld**4 * p)
        chain.append(ChainCheck(f"iii_A_d_bound[d={d}]", A_d[d], bound, ok, vacuous=Ld == 0))
    chain.append(ChainCheck("iv_A_1_bound", A_d[1], d_piv, A_d[1] <= d_piv))
    s1_rhs = math.sqrt(2 * r - 1) * tail_size
    chain.append(ChainCheck("v_S1_bound", S1, s1_rhs, S1 <= s1_rhs * (1 + FLOAT_REL), vacuous=not J))
    s2_rhs = 0.5 * r**1.5
    chain.append(ChainCheck("v_S2_bound", S2, s2_rhs, S2 <= s2_rhs * (1 + FLOAT_REL), vacuous=not J))
    assembled = p**0.25 * S1 + 0.5 * p**0.75 * S2 + math.sqrt(p)
    chain.append(ChainCheck("A_half_assembled", math.sqrt(A), assembled, math.sqrt(A) <= assembled * (1 + FLOAT_REL)))
    pivot_bound = h_value(p, r, w, d_piv)
    chain.append(ChainCheck("pivot_char_sum_bound", abs(s), pivot_bound, abs(s) <= pivot_bound * (1 + FLOAT_REL)))
    main = bound_main(p, r, w)
    chain.append(ChainCheck("vi_main_bound", float(dev), main, within_bound(dev, main)))

    return DiagnosticsReport(pivot, s, A, A_d, L, J, S1, S2, h_curve(p, r, w), chain)


def naive_second_moments(spec: DigitSpec, pivot: int) -> tuple[int, dict[int, int]]:
    """Double-loop reference for A and A_d using scalar arithmetic only."""
    import itertools

    ctx = spec.ctx
    a = spec.basis.elements
    inv = fe_pow(ctx, a[pivot - 1], ctx.q - 2)
    idx = [j for j in range(ctx.r) if j != pivot - 1]
    b = [mul(ctx, a[j], inv) for j in idx]
    tails = []
    for digits in itertools.product(*(spec.digit_sets[j] for j in idx)):
        e = ctx.zero
        for c, bj in zip(digits, b):
            e = add(ctx, e, mul(ctx, ctx.scalar(c), bj))
        tails.append((e, degree_over_prime(ctx, e)))
    A = 0
    A_d = {d: 0 for d in divisors(ctx.r)}
    for c in spec.digit_sets[pivot - 1]:
        per = {d: 0 for d in A_d}
        for e, d in tails:
            per[d] += quadratic_char(ctx, add(ctx, ctx.scalar(c), e))
        A += sum(per.values()) ** 2
        for d in per:
            A_d[d] += per[d] ** 2
    return A, A_d


# ---------------------------------------------------------------------------
# S_2 combinatorics


def s2_combinatorial_check(r_max: int) -> list[tuple[int, float, float, bool]]:
    """sum_{d | r, d > 1} sqrt(d) <= r^(3/2)/2 for 2 <= r <= r_max, decided exactly."""
    if r_max < 2:
        raise DomainError("r_max must be >= 2")
    rows = []
    for r in range(2, r_max + 1):
        lhs = sympy.Add(*[sympy.sqrt(d) for d in divisors(r) if d > 1])
        rhs = sympy.Rational(1, 2) * sympy.Integer(r) ** sympy.Rational(3, 2)
        diff = sympy.nsimplify(rhs - lhs)
        ok = diff == 0 or bool(diff.is_nonnegative)
        rows.append((r, float(lhs), float(rhs), ok))
    return rows


# ---------------------------------------------------------------------------
# the character-sum lemma


@dataclass
class LemmaReport:
    s: int
    alpha: FieldElement
    beta: FieldElement
    counts: list[int]
    sum_value: complex
    magnitude: float
    bound: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "counts": [str(c) for c in self.counts],
            "sum_real": self.sum_value.real,
            "sum_imag": self.sum_value.imag,
            "magnitude": self.magnitude,
            "bound": self.bound,
            "pass": self.passed,
        }


def _cyclotomic_value(counts) -> complex:
    s = len(counts)
    return sum(c * cmath.exp(2j * math.pi * k / s) for k, c in enumerate(counts))


def lemma_bound(p: int, r: int) -> float:
    return (2 * r - 1) * math.sqrt(p)


def _check_lemma_hypotheses(ctx: FieldCtx, s: int, alpha: FieldElement, beta: FieldElement) -> None:
    if s < 2 or (ctx.q - 1) % s:
        raise OrderDoesNotDivide(f"order {s} does not divide q-1 = {ctx.q - 1}")
    for name, x in (("alpha", alpha), ("beta", beta)):
        if degree_over_prime(ctx, x) != ctx.r:
            raise NotGenerator(f"{name} = {x} lies in a proper subfield")
    if are_conjugate(ctx, alpha, beta):
        raise ConjugatePair(f"{alpha} and {beta} are conjugate")


def wan_lemma_sum(ctx: FieldCtx, s: int, alpha: FieldElement, beta: FieldElement) -> LemmaReport:
    """Exact sum over xi in F_p of chi_s((xi + alpha)(xi + beta)^(s-1)).

    The value is kept as counts of each root of unity zeta_s^k (for s = 2
    the sum is counts[0] - counts[1]); only the magnitude is a float.
    """
    _check_lemma_hypotheses(ctx, s, alpha, beta)
    counts = [0] * s
    for xi in range(ctx.p):
        x = ctx.scalar(xi)
        y = mul(ctx, add(ctx, x, alpha), fe_pow(ctx, add(ctx, x, beta), s - 1))
        if s == 2:
            v = quadratic_char(ctx, y)
            if v:
                counts[0 if v == 1 else 1] += 1
        else:
            cv = mult_char(ctx, s, y)
            if not cv.zero:
                counts[cv.index] += 1
    if s == 2:
        value = complex(counts[0] - counts[1])
        mag = float(abs(counts[0] - counts[1]))
    else:
        value = _cyclotomic_value(counts)
        mag = abs(value)
    bound = lemma_bound(ctx.p, ctx.r)
    return LemmaReport(s, alpha, beta, counts, value, mag, bound, mag <= bound * (1 + FLOAT_REL))


@dataclass
class LemmaSweepResult:
    p: int
    r: int
    s: int
    mode: str
    pairs: int
    max_abs: float
    argmax: tuple[FieldElement, FieldElement] | None
    bound: float

    @property
    def max_ratio(self) -> float:
        return self.max_abs / self.bound

    @property
    def passed(self) -> bool:
        return self.max_abs <= self.bound * (1 + FLOAT_REL)

    @property
    def bound_trivial(self) -> bool:
        """True when the bound is no better than the trivial |sum| <= p."""
        return self.bound >= self.p


def generators_with_classes(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    """Codes of all degree-r elements and the conjugacy-class id (smallest code in the orbit)."""
    codes = np.arange(ctx.q, dtype=np.int64)
    X = array_from_codes(ctx, codes)
    gen = degree_many(ctx, X) == ctx.r
    codes, X = codes[gen], X[gen]
    cls = codes.copy()
    cur = X
    for _ in range(ctx.r - 1):
        cur = frobenius_many(ctx, cur, 1)
        cls = np.minimum(cls, codes_of(ctx, cur))
    return codes, cls


def _pair_sums(ctx: FieldCtx, s: int, alpha_rows: np.ndarray, beta_rows: np.ndarray) -> np.ndarray:
    """|sum| for each (alpha_i, beta_i) row pair, vectorised over xi in F_p."""
    p = ctx.p
    xi = np.zeros((p, ctx.r), dtype=np.int64)
    xi[:, 0] = np.arange(p)
    A = (alpha_rows[:, None, :] + xi[None]) % p
    B = (beta_rows[:, None, :] + xi[None]) % p
    Y = pow_many(ctx, B, s - 1) if s > 2 else B
    prod = mul_many(ctx, A, Y)
    if s == 2:
        return np.abs(quadratic_char_many(ctx, prod).astype(np.int64).sum(axis=1)).astype(float)
    idx = mult_char_many(ctx, s, prod)
    zeta = np.exp(2j * np.pi * np.arange(s) / s)
    vals = np.where(idx >= 0, zeta[np.clip(idx, 0, None)], 0)
    return np.abs(vals.sum(axis=1))


def lemma_sweep(
    ctx: FieldCtx,
    s: int,
    pair_cap: int = 200_000,
    samples: int = 500,
    seed: int = 0,
    force_sampled: bool = False,
) -> LemmaSweepResult:
    """Max |sum| over non-conjugate generator pairs: exhaustive (unordered) or seeded sample."""
    if s < 2 or (ctx.q - 1) % s:
        raise OrderDoesNotDivide(f"order {s} does not divide q-1 = {ctx.q - 1}")
    codes, cls = generators_with_classes(ctx)
    n = len(codes)
    rows = array_from_codes(ctx, codes)
    bound = lemma_bound(ctx.p, ctx.r)
    n_pairs = n * (n - ctx.r) // 2
    best, arg = 0.0, None
    if n_pairs <= pair_cap and not force_sampled:
        mode, tested = "exhaustive", 0
        for i in range(n):
            js = np.nonzero((np.arange(n) > i) & (cls != cls[i]))[0]
            if not len(js):
                continue
            mags = _pair_sums(ctx, s, np.repeat(rows[i : i + 1], len(js), axis=0), rows[js])
            tested += len(js)
            k = int(np.argmax(mags))
            if mags[k] > best or arg is None:
                best, arg = float(mags[k]), (i, int(js[k]))
    else:
        mode = "sampled"
        rng = SplitMix64(seed)
        ii, jj = [], []
        while len(ii) < samples:
            i, j = rng.below(n), rng.below(n)
            if cls[i] != cls[j]:
                ii.append(i)
                jj.append(j)
        tested = len(ii)
        mags = _pair_sums(ctx, s, rows[ii], rows[jj])
        k = int(np.argmax(mags))
        best, arg = float(mags[k]), (ii[k], jj[k])
    pair = None
    if arg is not None:
        pair = (ctx.from_int(int(codes[arg[0]])), ctx.from_int(int(codes[arg[1]])))
    return LemmaSweepResult(ctx.p, ctx.r, s, mode, tested, best, pair, bound)
