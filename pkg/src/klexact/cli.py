"""Command-line front end.

Exit codes: 0 for success, 1 when a computation ran but could not
certify its result (a failed or indeterminate rounding verdict, a bound
violation, a failed cache verification), 2 for usage and domain errors.

JSON output is canonical: sorted keys, compact separators, one object
per invocation with a schema_version field, so byte-identical
round-trips are guaranteed for equal inputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from mpmath import mp

from klexact.cache import CacheCorruptError, CacheVersionError, open_cache
from klexact.dedekind import dedekind_fast
from klexact.multipliers import GammaMatrix, eval_multiplier
from klexact.oracles import (
    DEFAULT_TABLE_CAP,
    build_rank_table,
    pentagonal_p,
)
from klexact.series import (
    SeriesResult,
    andrews_dragonette,
    default_cutoff,
    rademacher_p,
    rank_mod3_exact,
)
from klexact import boundlab
from klexact.sums import generalized_S, recompute_terms, spec_from_ident

SCHEMA_VERSION = 1

_SERIES = {"partition": (1, rademacher_p), "rank2": (2, andrews_dragonette), "rank3": (3, rank_mod3_exact)}


@dataclass
class Config:
    precision_bits: int | None = None  # None means per-command automatic
    cache_path: str | None = None
    threads: int = 1
    output_format: str = "json"


class UsageError(Exception):
    pass


def _read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    return out


def _build_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    file_values: dict[str, str] = {}
    if args.config:
        file_values = _read_config_file(args.config)
    known = {"precision", "cache", "threads", "format"}
    unknown = set(file_values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    precision = args.precision or file_values.get("precision")
    if precision and precision != "auto":
        try:
            cfg.precision_bits = int(precision)
        except ValueError:
            raise UsageError(f"bad precision {precision!r}") from None
        if cfg.precision_bits < 53:
            raise UsageError("precision must be at least 53 bits")
    cfg.cache_path = args.cache or file_values.get("cache") or os.environ.get("KLEXACT_CACHE")
    threads = args.threads if args.threads is not None else file_values.get("threads")
    if threads is not None:
        try:
            cfg.threads = int(threads)
        except ValueError:
            raise UsageError(f"bad thread count {threads!r}") from None
        if cfg.threads < 1:
            raise UsageError("threads must be at least 1")
    fmt = args.format or file_values.get("format") or "json"
    if fmt not in ("json", "csv", "text"):
        raise UsageError(f"unknown format {fmt!r}")
    cfg.output_format = fmt
    return cfg


def _emit_json(command: str, results: list[dict], out) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "results": results}
    out.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _emit_csv(columns: list[str], rows: list[dict], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])


def _mpf_str(x, bits: int) -> str:
    digits = max(17, int(bits * 0.302) + 2)
    return mp.nstr(x, digits, strip_zeros=True)


def _parse_int_range(text: str) -> list[int]:
    """"3" -> [3]; "1..5" -> [1, 2, 3, 4, 5]."""
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _parse_grid(text: str) -> list[int]:
    """"100..10000:25" -> 25 geometrically spaced integers inclusive."""
    try:
        span, _, count_s = text.partition(":")
        lo_s, _, hi_s = span.partition("..")
        lo, hi, count = int(lo_s), int(hi_s), int(count_s)
    except ValueError:
        raise UsageError(f"bad grid {text!r}, expected LO..HI:COUNT") from None
    if lo < 1 or hi < lo or count < 2:
        raise UsageError(f"bad grid {text!r}")
    ratio = (hi / lo) ** (1 / (count - 1))
    pts = sorted({int(round(lo * ratio**i)) for i in range(count)})
    pts[0], pts[-1] = lo, hi
    return sorted(set(pts))


# ---------------------------------------------------------------- series


def _series_oracle(j: int, n: int) -> int | None:
    if j == 1:
        return pentagonal_p(n)
    if n > DEFAULT_TABLE_CAP:
        return None
    from klexact.oracles import A_ab, get_rank_table

    return A_ab(1, j, n, get_rank_table(n))


def _series_row(j: int, n: int, cutoff: int | None, bits: int | None) -> dict:
    fn = {1: rademacher_p, 2: andrews_dragonette, 3: rank_mod3_exact}[j]
    res: SeriesResult = fn(n, cutoff, bits)
    oracle = _series_oracle(j, n)
    with mp.workprec(res.precision_bits + 16):
        tail = (
            _mpf_str(mp.mpf(oracle) - res.value.value, 64) if oracle is not None else ""
        )
    row = {
        "n": n,
        "value": _mpf_str(res.value.value, res.precision_bits),
        "rounded": res.rounded,
        "gap": _mpf_str(res.rounding_gap.value, 64),
        "tail": tail,
        "cutoff": res.cutoff_c,
        "verdict": res.verdict,
        "err": _mpf_str(res.value.err, 64),
    }
    if j == 1:
        row["p"] = res.rounded
    return row


def _series_worker(task: tuple[int, int, int | None, int | None]) -> dict:
    j, n, cutoff, bits = task
    return _series_row(j, n, cutoff, bits)


def _cmd_series(kind: str, args: argparse.Namespace, cfg: Config, out) -> int:
    j = _SERIES[kind][0]
    ns = _parse_int_range(args.n)
    if any(n < 1 for n in ns):
        raise UsageError("n must be positive")
    tasks = [(j, n, args.cutoff, cfg.precision_bits) for n in ns]
    if cfg.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(_series_worker, tasks))
    else:
        rows = [_series_worker(t) for t in tasks]
    columns = ["n", "value", "rounded", "gap", "tail", "cutoff"]
    if cfg.output_format == "json":
        _emit_json(kind, rows, out)
    elif cfg.output_format == "csv":
        _emit_csv(columns, rows, out)
    else:
        for row in rows:
            out.write(
                f"{kind}({row['n']}) = {row['rounded']} [{row['verdict']}] "
                f"gap={row['gap']} cutoff={row['cutoff']}\n"
            )
    return 0 if all(r["verdict"] == "rounded" for r in rows) else 1


def _cmd_tail(args: argparse.Namespace, cfg: Config, out) -> int:
    j = args.j
    ns = _parse_int_range(args.n)
    rows = []
    ok = True
    for n in ns:
        cutoff = int(args.x) if args.x is not None else default_cutoff(j, n)
        if cutoff < 1:
            raise UsageError("cutoff bound must be at least 1")
        oracle = _series_oracle(j, n)
        if oracle is None:
            raise UsageError(f"rank oracle capped at n = {DEFAULT_TABLE_CAP}")
        fn = {1: rademacher_p, 2: andrews_dragonette, 3: rank_mod3_exact}[j]
        res = fn(n, cutoff, cfg.precision_bits)
        ok = ok and res.verdict == "rounded"
        with mp.workprec(res.precision_bits + 16):
            tail = mp.mpf(oracle) - res.value.value
        rows.append(
            {
                "n": n,
                "value": _mpf_str(res.value.value, res.precision_bits),
                "rounded": res.rounded,
                "gap": _mpf_str(res.rounding_gap.value, 64),
                "tail": _mpf_str(tail, 64),
                "cutoff": cutoff,
                "verdict": res.verdict,
            }
        )
    columns = ["n", "value", "rounded", "gap", "tail", "cutoff"]
    if cfg.output_format == "json":
        _emit_json("tail", rows, out)
    elif cfg.output_format == "csv":
        _emit_csv(columns, rows, out)
    else:
        for row in rows:
            out.write(f"R_{j}({row['n']}, {row['cutoff']}) = {row['tail']}\n")
    return 0 if ok else 1


# ----------------------------------------------------------- point values


def _cmd_kloosterman(args: argparse.Namespace, cfg: Config, out) -> int:
    try:
        spec = spec_from_ident(args.mult)
    except (ValueError, KeyError):
        raise UsageError(f"unknown multiplier {args.mult!r}") from None
    bits = cfg.precision_bits or 128
    try:
        expsum = generalized_S(args.m, args.n, args.c, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.store:
        cache = open_cache(cfg.cache_path)
        cache.put((spec.ident, args.m, args.n, args.c), expsum.terms)
    value, err = expsum.evaluate(bits)
    record = {
        "m": args.m,
        "n": args.n,
        "c": args.c,
        "multiplier": spec.ident,
        "re": _mpf_str(value.real, bits),
        "im": _mpf_str(value.imag, bits),
        "err": _mpf_str(err, 64),
        "nterms": expsum.nterms,
    }
    if cfg.output_format == "json":
        _emit_json("kloosterman", [record], out)
    elif cfg.output_format == "csv":
        _emit_csv(["m", "n", "c", "multiplier", "re", "im", "err", "nterms"], [record], out)
    else:
        out.write(
            f"S({args.m},{args.n},{args.c};{spec.ident}) = "
            f"{record['re']} + {record['im']}i  ({record['nterms']} terms)\n"
        )
    return 0


def _cmd_dedekind(args: argparse.Namespace, cfg: Config, out) -> int:
    try:
        value = dedekind_fast(args.d, args.c)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.output_format == "json":
        _emit_json(
            "dedekind",
            [{"d": args.d, "c": args.c, "value": str(value)}],
            out,
        )
    else:
        out.write(f"{value}\n")
    return 0


def _cmd_multiplier(args: argparse.Namespace, cfg: Config, out) -> int:
    try:
        spec = spec_from_ident(args.mult)
        g = GammaMatrix(args.a, args.b, args.c, args.d)
        phase = eval_multiplier(spec, g)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    if cfg.output_format == "json":
        _emit_json(
            "multiplier",
            [
                {
                    "multiplier": spec.ident,
                    "a": args.a,
                    "b": args.b,
                    "c": args.c,
                    "d": args.d,
                    "phase": str(phase),
                }
            ],
            out,
        )
    else:
        out.write(f"{phase}\n")
    return 0


def _cmd_oracle(args: argparse.Namespace, cfg: Config, out) -> int:
    if args.what == "p":
        ns = _parse_int_range(args.n)
        rows = [{"n": n, "p": pentagonal_p(n)} for n in ns]
        columns = ["n", "p"]
    else:  # rank
        ns = _parse_int_range(args.n)
        top = max(ns)
        table = build_rank_table(top)
        rows = []
        if args.mod:
            from klexact.oracles import N_abn

            columns = ["n", "m", "count"]
            for n in ns:
                for a in range(args.mod):
                    rows.append(
                        {"n": n, "m": a, "count": N_abn(a, args.mod, n, table)}
                    )
        else:
            columns = ["n", "m", "count"]
            for n in ns:
                for m, v in sorted(table.row(n).items()):
                    rows.append({"n": n, "m": m, "count": v})
    if cfg.output_format == "json":
        _emit_json("oracle", rows, out)
    elif cfg.output_format == "csv":
        _emit_csv(columns, rows, out)
    else:
        for row in rows:
            out.write(" ".join(f"{k}={row[k]}" for k in columns) + "\n")
    return 0


# ------------------------------------------------------------------- lab


def _fit_dict(fit: boundlab.FitReport) -> dict:
    return {
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "sample_range": list(fit.sample_range),
        "dropped": fit.dropped,
        "points": [[x, y] for x, y in fit.points],
    }


def _bound_dict(rep: boundlab.BoundReport) -> dict:
    doc = {
        "checked": rep.checked,
        "violations": rep.violations,
        "max_ratio": rep.max_ratio,
    }
    if rep.windows is not None:
        doc["windows"] = [[lo, hi, r] for lo, hi, r in rep.windows]
    return doc


def _cmd_lab(args: argparse.Namespace, cfg: Config, out) -> int:
    if cfg.output_format == "csv":
        raise UsageError("lab reports have no CSV form; use json or text")
    cache = open_cache(cfg.cache_path) if cfg.cache_path else None
    if args.experiment == "weil-standard":
        rep = boundlab.weil_check_standard(
            _parse_int_range(args.m), _parse_int_range(args.n), args.cmax
        )
        doc = _bound_dict(rep)
        bad = bool(rep.violations)
    elif args.experiment == "weil-theta":
        spec = spec_from_ident(args.mult or "theta")
        rep = boundlab.weil_check_theta_type(
            spec, _parse_int_range(args.m), _parse_int_range(args.n), args.cmax
        )
        doc = _bound_dict(rep)
        bad = bool(rep.violations)
    elif args.experiment == "weil-eta-twist":
        rep = boundlab.weil_check_eta_twist(
            args.q,
            _parse_int_range(args.m),
            _parse_int_range(args.n),
            args.cmax,
            constant=args.constant,
        )
        doc = _bound_dict(rep)
        bad = bool(rep.violations)
    elif args.experiment == "cancel":
        spec = spec_from_ident(args.mult or "eta")
        fit = boundlab.cancellation_experiment(
            args.m0,
            args.n0,
            spec,
            _parse_grid(args.grid),
            cache=cache,
            control=args.control,
        )
        doc = _fit_dict(fit)
        bad = False
    elif args.experiment == "windows":
        spec = spec_from_ident(args.mult or "eta")
        rep = boundlab.average_weil_windows(args.m0, args.n0, spec, args.cmax)
        doc = _bound_dict(rep)
        bad = bool(rep.violations)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown experiment {args.experiment!r}")
    if cfg.output_format == "json":
        _emit_json(f"lab:{args.experiment}", [doc], out)
    else:
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 1 if bad else 0


# ----------------------------------------------------------------- cache


def _cmd_cache(args: argparse.Namespace, cfg: Config, out) -> int:
    cache = open_cache(cfg.cache_path)
    if args.action == "stats":
        st = cache.stats()
        doc = {
            "path": st.path,
            "records": st.records,
            "total_terms": st.total_terms,
            "size_bytes": st.size_bytes,
            "corrupt": st.corrupt,
        }
        code = 1 if st.corrupt else 0
    elif args.action == "clear":
        removed = cache.clear()
        doc = {"path": cache.path, "cleared": removed}
        code = 0
    else:  # verify
        try:
            checked, bad = cache.verify(recompute_terms, fraction=args.fraction)
        except CacheCorruptError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        doc = {
            "path": cache.path,
            "checked": checked,
            "bad": [list(k) for k in bad],
        }
        code = 1 if bad else 0
    if cfg.output_format == "json":
        _emit_json(f"cache:{args.action}", [doc], out)
    else:
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return code


# ---------------------------------------------------------------- parser


def _add_global_opts(parser: argparse.ArgumentParser, top: bool) -> None:
    # Repeated on every subparser (with SUPPRESS defaults) so the flags
    # are accepted both before and after the subcommand name.
    default = None if top else argparse.SUPPRESS
    parser.add_argument("--precision", default=default, help="working precision in bits, or 'auto'")
    parser.add_argument("--cache", default=default, help="path to the sum cache file")
    parser.add_argument("--threads", type=int, default=default, help="worker processes for ranges")
    parser.add_argument(
        "--format", choices=["json", "csv", "text"], default=default, help="output format"
    )
    parser.add_argument("--config", default=default, help="key = value configuration file")


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klexact",
        description="Exact Kloosterman sums and the convergent series built on them.",
    )
    _add_global_opts(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("partition", "evaluate the partition series p(n)"),
        ("rank2", "evaluate the rank statistic A(1/2; n)"),
        ("rank3", "evaluate the rank statistic A(1/3; n)"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_global_opts(p, top=False)
        p.add_argument("n", help="index or inclusive range LO..HI")
        p.add_argument("--cutoff", type=int, help="largest modulus c in the sum")

    p = sub.add_parser("tail", help="remainder past a modulus cutoff")
    _add_global_opts(p, top=False)
    p.add_argument("j", type=int, choices=[1, 2, 3], help="series: 1 = partition, 2, 3 = ranks")
    p.add_argument("n", help="index or inclusive range LO..HI")
    p.add_argument("--x", type=float, help="cutoff bound (default: desk-scale cutoff)")

    p = sub.add_parser("kloosterman", help="one generalized Kloosterman sum")
    _add_global_opts(p, top=False)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("c", type=int)
    p.add_argument("--mult", default="eta", help="multiplier name")
    p.add_argument("--store", action="store_true", help="write the phase multiset to the cache")

    p = sub.add_parser("dedekind", help="exact Dedekind sum s(d, c)")
    _add_global_opts(p, top=False)
    p.add_argument("d", type=int)
    p.add_argument("c", type=int)

    p = sub.add_parser("multiplier", help="multiplier phase at a group element")
    _add_global_opts(p, top=False)
    p.add_argument("mult", help="multiplier name")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("c", type=int)
    p.add_argument("d", type=int)

    p = sub.add_parser("oracle", help="combinatorial oracles")
    _add_global_opts(p, top=False)
    p.add_argument("what", choices=["p", "rank"])
    p.add_argument("n", help="index or inclusive range LO..HI")
    p.add_argument("--mod", type=int, help="group rank counts mod this")

    p = sub.add_parser("lab", help="bound checks and cancellation experiments")
    _add_global_opts(p, top=False)
    p.add_argument(
        "experiment",
        choices=["weil-standard", "weil-theta", "weil-eta-twist", "cancel", "windows"],
    )
    p.add_argument("--m", default="1..5", help="m range for box checks")
    p.add_argument("--n", default="1..5", help="n range for box checks")
    p.add_argument("--m0", type=int, default=1, help="m for single-index experiments")
    p.add_argument("--n0", type=int, default=1, help="n for single-index experiments")
    p.add_argument("--cmax", type=int, default=300)
    p.add_argument("--q", type=int, default=1, help="twist modulus for weil-eta-twist")
    p.add_argument("--constant", type=float, help="constant to scale the eta-twist bound")
    p.add_argument("--mult", help="multiplier name")
    p.add_argument("--grid", default="100..10000:25", help="LO..HI:COUNT geometric grid")
    p.add_argument("--control", action="store_true", help="fit the absolute-value baseline")

    p = sub.add_parser("cache", help="cache administration")
    _add_global_opts(p, top=False)
    p.add_argument("action", choices=["stats", "clear", "verify"])
    p.add_argument("--fraction", type=float, default=0.01, help="sample fraction for verify")

    return parser


def run(argv: list[str], out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _build_config(args)
        if args.command in _SERIES:
            return _cmd_series(args.command, args, cfg, out)
        if args.command == "tail":
            return _cmd_tail(args, cfg, out)
        if args.command == "kloosterman":
            return _cmd_kloosterman(args, cfg, out)
        if args.command == "dedekind":
            return _cmd_dedekind(args, cfg, out)
        if args.command == "multiplier":
            return _cmd_multiplier(args, cfg, out)
        if args.command == "oracle":
            return _cmd_oracle(args, cfg, out)
        if args.command == "lab":
            return _cmd_lab(args, cfg, out)
        if args.command == "cache":
            return _cmd_cache(args, cfg, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, CacheVersionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
