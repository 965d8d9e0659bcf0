"""Command-line entry point: ``mdsquares {field,count,verify,lemma,sweep,strata}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import harness
from .counting import count_squares_enum, count_squares_identity
from .digit_space import split_digit_specs, stratify
from .errors import CapExceeded, ConfigError, MDSError
from .field_core import format_poly, parse_poly
from .proof_diagnostics import wan_lemma_sum

log = logging.getLogger("mdsquares")


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--config", help="JSON config file; flags override its values")
    ap.add_argument("--p", type=int)
    ap.add_argument("--r", type=int)
    ap.add_argument("--modulus", help="coefficients, constant term first, e.g. 1,0,1")
    ap.add_argument("--digits", help="per-position specs: full | range:a..b | list:3,5,7 | random:k:seed")
    ap.add_argument("--pivot", help="1-based index or 'auto'")
    ap.add_argument("--eps", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="directory for report files")
    ap.add_argument("--cap", type=int)
    ap.add_argument("--workers", type=int)
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdsquares", description="Squares in digit-restricted subsets of F_{p^r}.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name, help_ in [
        ("field", "print modulus and generator"),
        ("count", "count squares in W two ways"),
        ("verify", "count + bounds + proof-chain checks"),
        ("strata", "sizes of the subfield strata of the tail digits"),
    ]:
        _common(sub.add_parser(name, help=help_))
    lp = sub.add_parser("lemma", help="character-sum lemma: one pair or a sweep")
    _common(lp)
    lp.add_argument("--s", default="2", help="character order(s), comma separated")
    lp.add_argument("--alpha")
    lp.add_argument("--beta")
    lp.add_argument("--ps", type=_int_list)
    lp.add_argument("--rs", type=_int_list)
    lp.add_argument("--pair-cap", type=int)
    lp.add_argument("--samples", type=int)
    sp = sub.add_parser("sweep", help="Cartesian sweep over p, r, family and digit-set size")
    _common(sp)
    sp.add_argument("--ps", type=_int_list)
    sp.add_argument("--rs", type=_int_list)
    sp.add_argument("--families", type=lambda t: t.split(","))
    sp.add_argument("--seeds", type=int, help="number of seeds per random-family size")
    sp.add_argument("--min-size", type=int)
    sp.add_argument("--max-size", type=int)
    return ap


def resolve_config(args) -> harness.ExperimentConfig:
    cfg = harness.load_config(args.config) if args.config else harness.ExperimentConfig()
    for key in ("p", "r", "modulus", "eps", "seed", "out", "cap", "workers"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if args.digits is not None:
        cfg.digits = split_digit_specs(args.digits)
    if args.pivot is not None:
        cfg.pivot = args.pivot if args.pivot == "auto" else int(args.pivot)
    if args.cmd == "sweep":
        for key in ("ps", "rs", "families", "seeds", "min_size", "max_size"):
            val = getattr(args, key, None)
            if val is not None:
                setattr(cfg.sweep, key, val)
    if args.cmd == "lemma":
        if args.ps is not None:
            cfg.lemma.ps = args.ps
        elif args.p is not None:
            cfg.lemma.ps = [args.p]
        if args.rs is not None:
            cfg.lemma.rs = args.rs
        elif args.r is not None:
            cfg.lemma.rs = [args.r]
        cfg.lemma.orders = _int_list(args.s)
        if args.pair_cap is not None:
            cfg.lemma.pair_cap = args.pair_cap
        if args.samples is not None:
            cfg.lemma.samples = args.samples
    harness.validate_config(cfg)
    return cfg


def _emit_rows(rows, columns, fmt, out_path) -> None:
    if fmt == "json":
        print(json.dumps(rows, indent=2, default=str))
    else:
        sys.stdout.write(harness.rows_to_csv(rows, columns))


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _dispatch(args, cfg)
    except CapExceeded as exc:
        log.error("cap exceeded: %s", exc)
        return harness.EXIT_CAP
    except (ConfigError, ValueError) as exc:
        log.error("config error: %s", exc)
        return harness.EXIT_CONFIG
    except MDSError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return harness.EXIT_CONFIG


def _dispatch(args, cfg: harness.ExperimentConfig) -> int:
    cmd = args.cmd
    if cmd == "field":
        info = harness.field_info(harness.build_field(cfg))
        if args.fmt == "json":
            print(json.dumps(info, indent=2))
        else:
            for k, v in info.items():
                print(f"{k}: {v}")
        return harness.EXIT_OK

    if cmd == "count":
        ctx = harness.build_field(cfg)
        spec = harness.build_spec(ctx, cfg.digits)
        enum = count_squares_enum(spec, cfg.cap)
        ident = count_squares_identity(spec, cfg.cap)
        out = {"enum": enum.to_json(), "identity": ident.to_json(), "agree": enum == ident}
        if args.fmt == "json":
            print(json.dumps(out, indent=2))
        else:
            print(f"|W| = {enum.w_size}  squares = {enum.squares}  with zero = {enum.squares_with_zero}  "
                  f"char_sum = {enum.char_sum}  deviation = {enum.deviation}  identity agrees: {enum == ident}")
        return harness.EXIT_OK if enum == ident else harness.EXIT_UNSOUND

    if cmd == "strata":
        ctx = harness.build_field(cfg)
        spec = harness.build_spec(ctx, cfg.digits)
        rep = stratify(spec, cfg.pivot, cfg.cap)
        if args.fmt == "json":
            print(json.dumps({"pivot": rep.pivot, "sizes": {str(d): n for d, n in rep.sizes.items()}}, indent=2))
        else:
            print(f"pivot {rep.pivot}: " + "  ".join(f"|L_{d}| = {n}" for d, n in rep.sizes.items()))
        return harness.EXIT_OK

    if cmd == "verify":
        report = harness.run_instance(cfg)
        if args.fmt == "json":
            sys.stdout.write(harness.dump_report(report))
        elif args.fmt == "csv":
            print(",".join(report["checks"]))
            print(",".join(str(v) for v in report["checks"].values()))
        else:
            c, b = report["counts"], report["bounds"]
            print(f"p={cfg.p} r={cfg.r} |W|={c['w_size']} squares={c['squares']} deviation={c['deviation']} "
                  f"bound={b['main_bound']:.6g}")
            for name, ok in report["checks"].items():
                print(f"  {'PASS' if ok else 'FAIL'}  {name}")
            if report["diagnostics"]:
                for row in report["diagnostics"]["chain"]:
                    if not row["pass"]:
                        print(f"  FAIL  chain {row['name']}: {row['lhs']} > {row['rhs']}")
        return harness.EXIT_OK if report["all_pass"] else harness.EXIT_UNSOUND

    if cmd == "lemma":
        if args.alpha or args.beta:
            ctx = harness.build_field(cfg)
            s = cfg.lemma.orders[0]
            rep = wan_lemma_sum(ctx, s, ctx.element(parse_poly(args.alpha)), ctx.element(parse_poly(args.beta)))
            out = rep.to_json()
            print(json.dumps(out, indent=2) if args.fmt == "json" else
                  f"s={s} alpha={format_poly(rep.alpha.coeffs)} beta={format_poly(rep.beta.coeffs)} "
                  f"|sum|={rep.magnitude:.6g} bound={rep.bound:.6g} {'PASS' if rep.passed else 'FAIL'}")
            return harness.EXIT_OK if rep.passed else harness.EXIT_UNSOUND
        path = os.path.join(cfg.out, "lemma_sweep.csv") if cfg.out else None
        if cfg.out:
            os.makedirs(cfg.out, exist_ok=True)
        rows = harness.run_lemma_sweep(cfg, path)
        _emit_rows(rows, harness.LEMMA_COLUMNS, args.fmt, path)
        bad = [r for r in rows if r["pass"] is not True and not r["error"]]
        return harness.EXIT_UNSOUND if bad else harness.EXIT_OK

    if cmd == "sweep":
        path = os.path.join(cfg.out, "sweep.csv") if cfg.out else None
        if cfg.out:
            os.makedirs(cfg.out, exist_ok=True)
        rows = harness.run_sweep(cfg, path)
        _emit_rows(rows, harness.SWEEP_COLUMNS, args.fmt, path)
        bad = [r for r in rows if r["sound"] is not True and not r["error"]]
        return harness.EXIT_UNSOUND if bad else harness.EXIT_OK

    raise ConfigError(f"unknown command {cmd}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
