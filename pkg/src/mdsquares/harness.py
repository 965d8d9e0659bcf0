"""Experiment configs, single-instance runs, sweeps and report writing."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .bounds import bound_report
from .counting import count_squares_enum, count_squares_identity
from .digit_space import make_digit_spec, polynomial_basis, resolve_pivot, split_digit_specs
from .errors import ConfigError, EvenCharacteristic, MDSError
from .field_core import ENUM_CAP, FieldCtx, format_poly, make_field
from .proof_diagnostics import compute_chain, lemma_sweep
from .rng import derive_seed

SCHEMA = "mdsquares.report/1"

EXIT_OK, EXIT_CONFIG, EXIT_CAP, EXIT_UNSOUND = 0, 2, 3, 4


@dataclass
class SweepConfig:
    ps: list[int] = field(default_factory=lambda: [3, 5, 7, 11, 13])
    rs: list[int] = field(default_factory=lambda: [2])
    families: list[str] = field(default_factory=lambda: ["random"])
    min_size: int = 2
    max_size: int | None = None  # None: p
    seeds: int = 5


@dataclass
class LemmaConfig:
    ps: list[int] = field(default_factory=lambda: [11, 13, 17, 19])
    rs: list[int] = field(default_factory=lambda: [2])
    orders: list[int] = field(default_factory=lambda: [2])
    pair_cap: int = 200_000
    samples: int = 500


@dataclass
class ExperimentConfig:
    p: int = 3
    r: int = 2
    modulus: str | None = None
    digits: list[str] = field(default_factory=lambda: ["full"])
    pivot: int | str = "auto"
    eps: float = 0.1
    seed: int = 0
    out: str | None = None
    cap: int = ENUM_CAP
    workers: int = 1
    sweep: SweepConfig = field(default_factory=SweepConfig)
    lemma: LemmaConfig = field(default_factory=LemmaConfig)


def _build(cls, data: dict, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'}: expected an object")
    names = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, val in data.items():
        if key not in names:
            raise ConfigError(f"unknown field '{where + key}'")
        if key == "sweep":
            val = _build(SweepConfig, val, "sweep.")
        elif key == "lemma":
            val = _build(LemmaConfig, val, "lemma.")
        elif key == "digits" and isinstance(val, str):
            val = split_digit_specs(val)
        kwargs[key] = val
    return cls(**kwargs)


def config_from_dict(data: dict) -> ExperimentConfig:
    cfg = _build(ExperimentConfig, data, "")
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    for where, p in [("p", cfg.p)] + [("sweep.ps", v) for v in cfg.sweep.ps] + [("lemma.ps", v) for v in cfg.lemma.ps]:
        if p == 2:
            raise EvenCharacteristic(f"field '{where}': characteristic 2 is excluded")


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return config_from_dict(data)


# ---------------------------------------------------------------------------
# single instance


def build_field(cfg: ExperimentConfig) -> FieldCtx:
    return make_field(cfg.p, cfg.r, cfg.modulus)


def build_spec(ctx: FieldCtx, digit_texts: list[str]):
    texts = list(digit_texts)
    if len(texts) == 1:
        texts = texts * ctx.r
    if len(texts) != ctx.r:
        raise ConfigError(f"digits: {len(texts)} specs given for r = {ctx.r}")
    return make_digit_spec(polynomial_basis(ctx), texts)


def _instance(ctx: FieldCtx, spec, pivot, eps: float, cap: int) -> dict:
    enum = count_squares_enum(spec, cap)
    ident = count_squares_identity(spec, cap)
    bounds = bound_report(ctx.p, ctx.r, spec.digit_sets, eps, enum.deviation)
    diag = compute_chain(spec, pivot, cap, counts=enum) if ctx.r >= 2 else None
    checks = {
        "identity_agrees": enum == ident,
        "theorem_sound": bool(bounds.sound),
        "cor2_sound": (not bounds.cor2) or enum.squares >= 1,
        "cor1_sound": True,
        "chain_pass": diag is None or diag.all_pass,
    }
    if bounds.cor1.predicate:
        ratio_dev = abs(enum.squares / enum.w_size - 0.5)
        checks["cor1_sound"] = ratio_dev <= bounds.cor1.budget
    return {"enum": enum, "identity": ident, "bounds": bounds, "diag": diag, "checks": checks}


def run_instance(cfg: ExperimentConfig, write: bool = True) -> dict:
    """Count, bound and chain-check one configured instance; returns the report dict."""
    ctx = build_field(cfg)
    spec = build_spec(ctx, cfg.digits)
    pivot = resolve_pivot(spec, cfg.pivot)
    res = _instance(ctx, spec, pivot, cfg.eps, cfg.cap)
    report = {
        "schema": SCHEMA,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": {"digits": list(spec.labels), "pivot": cfg.pivot, "eps": cfg.eps, "seed": cfg.seed, "cap": cfg.cap},
        "field": field_info(ctx),
        "digit_sets": [list(d) for d in spec.digit_sets],
        "sizes": list(spec.sizes),
        "counts": res["enum"].to_json(),
        "counts_identity": res["identity"].to_json(),
        "bounds": res["bounds"].to_json(),
        "diagnostics": None if res["diag"] is None else res["diag"].to_json(),
        "checks": res["checks"],
        "all_pass": all(res["checks"].values()),
    }
    if write and cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        stem = f"instance_p{ctx.p}_r{ctx.r}"
        with open(os.path.join(cfg.out, stem + ".json"), "w") as fh:
            fh.write(dump_report(report))
        with open(os.path.join(cfg.out, stem + ".csv"), "w", newline="") as fh:
            write_rows(fh, [instance_row(ctx.p, ctx.r, "config", cfg.seed, spec, res)])
    return report


def field_info(ctx: FieldCtx) -> dict:
    return {
        "p": ctx.p,
        "r": ctx.r,
        "q": str(ctx.q),
        "modulus": format_poly(ctx.modulus),
        "generator": format_poly(ctx.primitive.coeffs),
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_body(report: dict) -> str:
    """Serialized report without the timestamp -- the determinism contract."""
    return dump_report({k: v for k, v in report.items() if k != "timestamp"})


# ---------------------------------------------------------------------------
# sweeps

SWEEP_COLUMNS = [
    "p", "r", "family", "seed", "sizes", "w_size", "squares", "char_sum", "deviation",
    "bound_main", "dms_bound", "cor1", "cor2", "identity_agrees", "chain_pass", "sound", "error",
]  # fmt: skip


def instance_row(p, r, family, seed, spec, res) -> dict:
    enum, bounds = res["enum"], res["bounds"]
    return {
        "p": p,
        "r": r,
        "family": family,
        "seed": seed,
        "sizes": "x".join(map(str, spec.sizes)),
        "w_size": enum.w_size,
        "squares": enum.squares,
        "char_sum": enum.char_sum,
        "deviation": str(enum.deviation),
        "bound_main": repr(bounds.main_bound),
        "dms_bound": "" if bounds.dms_bound is None else repr(bounds.dms_bound),
        "cor1": bounds.cor1.predicate,
        "cor2": bounds.cor2,
        "identity_agrees": res["checks"]["identity_agrees"],
        "chain_pass": res["checks"]["chain_pass"],
        "sound": all(res["checks"].values()),
        "error": "",
    }


def family_digits(family: str, p: int, r: int, k: int, seed: int) -> list[str]:
    if family == "random":
        return [f"random:{k}:{derive_seed(seed, p, r, k, i)}" for i in range(r)]
    if family == "range":
        return [f"range:0..{k - 1}"] * r
    if family == "shifted":
        return [f"range:{p - k}..{p - 1}"] * r
    raise ConfigError(f"unknown digit-set family {family!r}")


def sweep_tasks(cfg: ExperimentConfig) -> list[tuple]:
    sw = cfg.sweep
    tasks = []
    for p in sw.ps:
        for r in sw.rs:
            hi = p if sw.max_size is None else min(sw.max_size, p)
            for fam in sw.families:
                seeds = range(sw.seeds) if fam == "random" else [0]
                for k in range(sw.min_size, hi + 1):
                    for s in seeds:
                        tasks.append((p, r, fam, k, cfg.seed + s, cfg.eps, cfg.cap, cfg.pivot))
    return tasks


def _sweep_one(task) -> dict:
    p, r, fam, k, seed, eps, cap, pivot = task
    try:
        ctx = _field_cached(p, r)
        spec = build_spec(ctx, family_digits(fam, p, r, k, seed))
        return instance_row(p, r, fam, seed, spec, _instance(ctx, spec, resolve_pivot(spec, pivot), eps, cap))
    except MDSError as exc:
        row = {c: "" for c in SWEEP_COLUMNS}
        row.update(p=p, r=r, family=fam, seed=seed, sizes=f"{k}^{r}", sound=False, error=f"{type(exc).__name__}: {exc}")
        return row


_FIELDS: dict[tuple[int, int], FieldCtx] = {}


def _field_cached(p: int, r: int) -> FieldCtx:
    if (p, r) not in _FIELDS:
        _FIELDS[p, r] = make_field(p, r)
    return _FIELDS[p, r]


def _map(fn, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def run_sweep(cfg: ExperimentConfig, path: str | None = None) -> list[dict]:
    """One row per (p, r, family, size, seed), in deterministic sweep order."""
    rows = _map(_sweep_one, sweep_tasks(cfg), cfg.workers)
    if path:
        with open(path, "w", newline="") as fh:
            write_rows(fh, rows, SWEEP_COLUMNS)
    return rows


LEMMA_COLUMNS = ["p", "r", "s", "mode", "pairs", "max_abs", "bound", "max_ratio", "bound_trivial", "pass", "error"]


def _lemma_one(task) -> dict:
    p, r, s, pair_cap, samples, seed = task
    row = {c: "" for c in LEMMA_COLUMNS}
    row.update(p=p, r=r, s=s)
    try:
        res = lemma_sweep(_field_cached(p, r), s, pair_cap=pair_cap, samples=samples, seed=seed)
    except MDSError as exc:
        row.update({"pass": False, "error": f"{type(exc).__name__}: {exc}"})
        return row
    row.update(
        mode=res.mode,
        pairs=res.pairs,
        max_abs=repr(res.max_abs),
        bound=repr(res.bound),
        max_ratio=repr(res.max_ratio),
        bound_trivial=res.bound_trivial,
    )
    row["pass"] = res.passed
    return row


def run_lemma_sweep(cfg: ExperimentConfig, path: str | None = None) -> list[dict]:
    lc = cfg.lemma
    tasks = [(p, r, s, lc.pair_cap, lc.samples, derive_seed(cfg.seed, p, r, s)) for p in lc.ps for r in lc.rs for s in lc.orders]
    rows = _map(_lemma_one, tasks, cfg.workers)
    if path:
        with open(path, "w", newline="") as fh:
            write_rows(fh, rows, LEMMA_COLUMNS)
    return rows


def write_rows(fh, rows: list[dict], columns: list[str] | None = None) -> None:
    columns = columns or SWEEP_COLUMNS
    w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)


def rows_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    buf = io.StringIO()
    write_rows(buf, rows, columns)
    return buf.getvalue()


def rows_ok(rows: list[dict], key: str = "sound") -> bool:
    return all(row[key] is True for row in rows)

