"""Closed-form bounds and thresholds for squares in digit-restricted sets.

Threshold predicates are decided in exact integer arithmetic wherever the
exponents allow it; float evaluation is only used for reported values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from .errors import DomainError


def _check_pr(p: int, r: int, min_r: int = 2) -> None:
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise DomainError(f"p = {p} must be an odd prime")
    if r < min_r:
        raise DomainError(f"r = {r} must be >= {min_r}")


def main_terms(p: int, r: int, w_size: int) -> tuple[float, float]:
    """The two power terms |W|^(1-1/2r) p^(1/4) (2r-1)^(1/2) and |W|^(1/2r) (p^(3/4) r^(3/2)/4 + p^(1/2))."""
    big = w_size ** (1 - 1 / (2 * r)) * p**0.25 * math.sqrt(2 * r - 1)
    small = w_size ** (1 / (2 * r)) * (0.25 * p**0.75 * r**1.5 + math.sqrt(p))
    return big, small


def bound_main(p: int, r: int, w_size: int) -> float:
    """Upper bound on | |W cap Q| - |W|/2 | in terms of p, r and |W| only."""
    _check_pr(p, r)
    if not 1 <= w_size <= p**r:
        raise DomainError(f"|W| = {w_size} outside [1, p^r]")
    big, small = main_terms(p, r, w_size)
    return 0.5 * (big + small + 1)


def bound_dms(p: int, r: int, d_size: int) -> float:
    """(|D| + p sqrt(p - |D|))^r / (2 sqrt(q)) for W built from one repeated digit set D."""
    _check_pr(p, r, min_r=1)
    if not 2 <= d_size <= p - 1:
        raise DomainError(f"|D| = {d_size} outside [2, p-1]")
    return (d_size + p * math.sqrt(p - d_size)) ** r / (2 * math.sqrt(p**r))


def dms_nontrivial_size(p: int) -> float:
    """Leading-order size (sqrt5 - 1) p / 2 above which bound_dms beats |W|/2."""
    return (math.sqrt(5) - 1) * p / 2


@dataclass
class PriorThresholds:
    thm_b: float | None
    thm_b_applicable: bool
    thm_c: float | None
    thm_c_applicable: bool
    notes: list[str] = field(default_factory=list)


def thresholds_prior(p: int, r: int) -> PriorThresholds:
    """Earlier single-digit-set size thresholds guaranteeing a square in W.

    thm_b = (1 + delta) (2r-1) sqrt(p) with delta = (sqrt(p) (2r-1))^(2-r),
    valid when 2r-1 <= sqrt(p); thm_c = C(r) sqrt(p) exp((log p + 4 log log p)/r)
    with C(r) = exp((4 log r + 8)/r), valid for r >= 20.
    """
    _check_pr(p, r)
    notes = []
    b_ok = (2 * r - 1) ** 2 <= p
    delta = (math.sqrt(p) * (2 * r - 1)) ** (2 - r)
    thm_b = (1 + delta) * (2 * r - 1) * math.sqrt(p)
    if not b_ok:
        notes.append(f"thm_b inapplicable: 2r-1 = {2 * r - 1} > sqrt(p)")
    c_ok = r >= 20
    thm_c = None
    if c_ok:
        c_r = math.exp((4 * math.log(r) + 8) / r)
        thm_c = c_r * math.sqrt(p) * math.exp((math.log(p) + 4 * math.log(math.log(p))) / r)
    else:
        notes.append("thm_c requires r >= 20")
    return PriorThresholds(thm_b if b_ok else None, b_ok, thm_c, c_ok, notes)


# ---------------------------------------------------------------------------
# corollaries


def cor1_threshold(p: int, r: int, eps: float) -> float:
    return (2 * r - 1) ** r * p ** (r * (0.5 + eps))


@dataclass
class Corollary1Result:
    predicate: bool
    threshold: float
    budget: float | None
    direct_budget: float | None
    note: str = "the O-constant is not made explicit; budget uses constant 1 on the pre-O expression"


def corollary1_check(p: int, r: int, eps: float, prod_d: int) -> Corollary1Result:
    """Size condition prod |D_i| >= (2r-1)^r p^(r(1/2+eps)) and the relative deviation it buys.

    When the condition holds, ``budget`` is p^(-eps/2) + r^(2-r) p^(1-r/2) p^(-(2r-1) eps/2),
    which dominates |squares/|W| - 1/2|; ``direct_budget`` is bound_main(...)/|W|.
    """
    _check_pr(p, r)
    if eps <= 0:
        raise DomainError("eps must be positive")
    thr = cor1_threshold(p, r, eps)
    # compare in logs to avoid overflow for large r
    ok = prod_d > 0 and math.log(prod_d) >= r * math.log(2 * r - 1) + r * (0.5 + eps) * math.log(p)
    if not ok:
        return Corollary1Result(False, thr, None, None)
    budget = p ** (-eps / 2) + r ** (2 - r) * p ** (1 - r / 2) * p ** (-(2 * r - 1) * eps / 2)
    direct = bound_main(p, r, prod_d) / prod_d if prod_d <= p**r else None
    return Corollary1Result(True, thr, budget, direct)


def cor2_threshold(p: int, r: int) -> float:
    return 8 * (2 * r - 1) ** r * p ** (r / 2)


def cor2_threshold_exact(p: int, r: int) -> int | None:
    """Integer value of 8 (2r-1)^r p^(r/2) when r is even, else None."""
    return 8 * (2 * r - 1) ** r * p ** (r // 2) if r % 2 == 0 else None


def corollary2_check(p: int, r: int, prod_d: int) -> bool:
    """prod |D_i| >= 8 (2r-1)^r p^(r/2), decided exactly."""
    _check_pr(p, r)
    c = 8 * (2 * r - 1) ** r
    if r % 2 == 0:
        return prod_d >= c * p ** (r // 2)
    # both sides positive: square them
    return prod_d >= 0 and prod_d * prod_d >= c * c * p**r


# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    p: int
    r: int
    w_size: int
    main_bound: float
    dms_bound: float | None
    thm_b_threshold: float | None
    thm_c_threshold: float | None
    cor1: Corollary1Result
    cor2_threshold: float
    cor2: bool
    eps: float
    actual_deviation: Fraction | None = None

    @property
    def sound(self) -> bool | None:
        if self.actual_deviation is None:
            return None
        return within_bound(self.actual_deviation, self.main_bound)

    def to_json(self) -> dict:
        def g(x):
            return None if x is None else float(f"{x:.6g}")

        exact2 = cor2_threshold_exact(self.p, self.r)
        return {
            "p": self.p,
            "r": self.r,
            "w_size": str(self.w_size),
            "main_bound": self.main_bound,
            "dms_bound": self.dms_bound,
            "thm_b_threshold": g(self.thm_b_threshold),
            "thm_c_threshold": g(self.thm_c_threshold),
            "cor1": {
                "eps": self.eps,
                "threshold": g(self.cor1.threshold),
                "predicate": self.cor1.predicate,
                "budget": self.cor1.budget,
                "direct_budget": self.cor1.direct_budget,
                "note": self.cor1.note,
            },
            "cor2": {
                "threshold": g(self.cor2_threshold),
                "threshold_exact": None if exact2 is None else str(exact2),
                "predicate": self.cor2,
            },
            "actual_deviation": None if self.actual_deviation is None else str(self.actual_deviation),
            "sound": self.sound,
        }


SLACK = 1e-6


def within_bound(deviation: Fraction, bound: float, slack: float = SLACK) -> bool:
    """Exact rational deviation against a float bound, slack on the float side."""
    return deviation <= Fraction(bound) + Fraction(slack)


def bound_report(p: int, r: int, digit_sets, eps: float = 0.1, deviation: Fraction | None = None) -> BoundReport:
    sizes = [len(d) for d in digit_sets]
    w = math.prod(sizes)
    dms = None
    same = all(tuple(d) == tuple(digit_sets[0]) for d in digit_sets)
    if same and 2 <= sizes[0] <= p - 1:
        dms = bound_dms(p, r, sizes[0])
    prior = thresholds_prior(p, r)
    return BoundReport(
        p=p,
        r=r,
        w_size=w,
        main_bound=bound_main(p, r, w),
        dms_bound=dms,
        thm_b_threshold=prior.thm_b,
        thm_c_threshold=prior.thm_c,
        cor1=corollary1_check(p, r, eps, w),
        cor2_threshold=cor2_threshold(p, r),
        cor2=corollary2_check(p, r, w),
        eps=eps,
        actual_deviation=deviation,
    )
