"""Sweep deviation vs bound_main over small fields and write a CSV.

    python3 scripts/soundness_sweep.py --out results/ --workers 4
"""

import argparse
import os
from fractions import Fraction

from mdsquares.harness import ExperimentConfig, SweepConfig, rows_ok, run_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    cfg = ExperimentConfig(
        workers=args.workers,
        sweep=SweepConfig(ps=[3, 5, 7, 11, 13, 17], rs=[2, 3], families=["random", "range", "shifted"], seeds=args.seeds),
    )
    path = os.path.join(args.out, "soundness_sweep.csv")
    rows = run_sweep(cfg, path)
    worst = max(float(Fraction(r["deviation"])) / float(r["bound_main"]) for r in rows if not r["error"])
    print(f"{len(rows)} rows -> {path}; all sound: {rows_ok(rows)}; max deviation/bound = {worst:.4f}")


if __name__ == "__main__":
    main()
