"""Per-stratum second moments A_d against their bound when r is composite.

When r/d is even the quadratic character is trivial on F_{p^d}^*, so the
stratum sums carry no cancellation; this prints which (p, r, d) break the
per-stratum inequality while the final bound still holds.
"""

import argparse

from mdsquares.digit_space import make_digit_spec, polynomial_basis
from mdsquares.field_core import make_field
from mdsquares.proof_diagnostics import compute_chain

def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", default="3:4,5:4,7:4,11:4,13:4,17:4,3:6,5:6")
    args = ap.parse_args()
    print("p,r,d,|L_d|,A_d,bound,ok,main_ok")
    for case in args.cases.split(","):
        p, r = map(int, case.split(":"))
        ctx = make_field(p, r)
        spec = make_digit_spec(polynomial_basis(ctx), ["full"] * r)
        if spec.w_size > 5 * 10**6:
            continue
        rep = compute_chain(spec, pivot=1)
        main_ok = next(c.passed for c in rep.chain if c.name == "vi_main_bound")
        for c in rep.chain:
            if c.name.startswith("iii_"):
                d = int(c.name.split("=")[1].rstrip("]"))
                print(f"{p},{r},{d},{rep.strata[d]},{c.lhs},{c.rhs:.3f},{c.passed},{main_ok}")

if __name__ == "__main__":
    main()
