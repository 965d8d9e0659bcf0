"""Max |character sum| over non-conjugate generator pairs, per (p, r, s)."""

import argparse
import os

from mdsquares.harness import LEMMA_COLUMNS, ExperimentConfig, LemmaConfig, rows_to_csv, run_lemma_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--pair-cap", type=int, default=200_000)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for ps, rs in (([11, 13, 17, 19, 23], [2]), ([5, 7], [3])):
        cfg = ExperimentConfig(lemma=LemmaConfig(ps=ps, rs=rs, orders=[2, 3, 4], pair_cap=args.pair_cap))
        rows += run_lemma_sweep(cfg)
    text = rows_to_csv(rows, LEMMA_COLUMNS)
    with open(os.path.join(args.out, "lemma_table.csv"), "w") as fh:
        fh.write(text)
    print(text, end="")


if __name__ == "__main__":
    main()
