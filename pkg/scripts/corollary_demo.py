"""Corollary thresholds end to end: exact predicates and enumerated square counts."""

import time

from mdsquares.bounds import cor1_threshold, cor2_threshold, corollary1_check, corollary2_check
from mdsquares.counting import count_squares_enum
from mdsquares.digit_space import make_digit_spec, polynomial_basis
from mdsquares.field_core import make_field

CASES = [
    (73, 2, ["range:1..72", "full"]),
    (73, 2, ["range:1..71", "full"]),
    (101, 3, ["full", "full", "range:1..100"]),
    (53, 2, ["range:0..40", "range:5..50"]),
]


def main():
    for p, r, digits in CASES:
        ctx = make_field(p, r)
        spec = make_digit_spec(polynomial_basis(ctx), digits)
        t0 = time.perf_counter()
        rep = count_squares_enum(spec)
        dt = time.perf_counter() - t0
        c1 = corollary1_check(p, r, 0.1, spec.w_size)
        print(
            f"p={p} r={r} |W|={spec.w_size} squares={rep.squares} ({dt:.2f}s)\n"
            f"  cor2: threshold {cor2_threshold(p, r):.2f} -> {corollary2_check(p, r, spec.w_size)}\n"
            f"  cor1(eps=0.1): threshold {cor1_threshold(p, r, 0.1):.2f} -> {c1.predicate}"
            + (f", |ratio-1/2|={abs(rep.squares / rep.w_size - 0.5):.4f} budget={c1.budget:.4f}" if c1.predicate else "")
        )


if __name__ == "__main__":
    main()
