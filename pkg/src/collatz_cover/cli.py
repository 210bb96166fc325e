"""Command-line surface wiring the library into reproducible batch commands.

Configuration precedence: built-in defaults, then the key=value config file
named by the COLLATZ_COVER_CONFIG environment variable (or --config), then
flags. Stdout carries data only and is byte-identical for identical inputs;
logs and timing go to stderr.

Exit codes: 0 pass, 1 fail or I/O error, 2 usage error, 3 deferred-only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .arith import BudgetExceededError, DEFAULT_BUDGET, sigma_infinity
from .cache import CacheFormatError, SigmaCache
from .covering import (CSV_HEADER, ProfileTable, classify, cover_audit,
                       digit_root_class, residue_class)
from .mapgen import build_schema, build_sigma_schema, format_progression, render_str
from .reports import (OUTCOME_DEFERRED, OUTCOME_PASS, report_to_json,
                      report_to_text)
from .verify import (verify_conjecture1, verify_cyclic, verify_range,
                     verify_sigma_relation, verify_theorem1_symbolic)

CONFIG_ENV = "COLLATZ_COVER_CONFIG"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DEFERRED = 3

_CONFIG_KEYS = ("max_m", "budget", "cache", "format", "threads")


class UsageError(Exception):
    """Bad arguments or configuration; maps to exit code 2."""


@dataclass
class Config:
    max_m: int = 18
    budget: int = DEFAULT_BUDGET
    cache_path: str | None = None
    output_format: str = "text"
    threads: int = 0  # resolved to available parallelism

    def validate(self) -> None:
        if self.max_m < 1:
            raise UsageError(f"max_m must be >= 1, got {self.max_m}")
        if self.budget < 1:
            raise UsageError(f"budget must be >= 1, got {self.budget}")
        if self.threads < 1:
            raise UsageError(f"threads must be >= 1, got {self.threads}")
        if self.output_format not in ("text", "csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")


def _parse_config_file(path: str) -> dict[str, str]:
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _config_int(values: dict[str, str], key: str, fallback: int) -> int:
    if key not in values:
        return fallback
    try:
        return int(values[key])
    except ValueError as exc:
        raise UsageError(f"config key {key} needs an integer, got {values[key]!r}") from exc


def resolve_config(args: argparse.Namespace) -> Config:
    cfg = Config(threads=os.cpu_count() or 1)
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        values = _parse_config_file(path)
        cfg.max_m = _config_int(values, "max_m", cfg.max_m)
        cfg.budget = _config_int(values, "budget", cfg.budget)
        cfg.threads = _config_int(values, "threads", cfg.threads)
        cfg.cache_path = values.get("cache", cfg.cache_path)
        cfg.output_format = values.get("format", cfg.output_format)
    if getattr(args, "max_m", None) is not None:
        cfg.max_m = args.max_m
    if getattr(args, "budget", None) is not None:
        cfg.budget = args.budget
    if getattr(args, "cache", None) is not None:
        cfg.cache_path = args.cache
    if getattr(args, "format", None) is not None:
        cfg.output_format = args.format
    if getattr(args, "threads", None) is not None:
        cfg.threads = args.threads
    cfg.validate()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-m", dest="max_m", type=int,
                        help="deepest exponent row to derive (default 18)")
    common.add_argument("--budget", type=int,
                        help="unit-step ceiling per stopping-time input")
    common.add_argument("--cache", help="path of the persistent stopping-time cache")
    common.add_argument("--format", choices=("text", "csv", "json"),
                        help="output format (default text)")
    common.add_argument("--threads", type=int, help="worker threads for range sweeps")
    common.add_argument("--output", metavar="FILE", help="write data here instead of stdout")
    common.add_argument("--config", metavar="FILE",
                        help=f"key=value config file (also via ${CONFIG_ENV})")

    parser = argparse.ArgumentParser(
        prog="collatz-cover",
        description="Residue-class covering system for Collatz dynamics: "
                    "derived progression tables, the generalized map, stopping "
                    "times, and machine verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common],
                       help="emit the derived progression table")
    p.add_argument("--class", dest="class_index", type=int,
                   help="restrict to one class index (1..9)")

    p = sub.add_parser("map", parents=[common],
                       help="emit the generalized map or the stopping-time map")
    p.add_argument("which", choices=("schema", "sigma"))

    p = sub.add_parser("sigma", parents=[common],
                       help="total stopping times for the given integers")
    p.add_argument("values", nargs="+", metavar="N",
                   help="positive integers (decimal, any size)")

    p = sub.add_parser("classify", parents=[common],
                       help="residue class and progression of odd integers")
    p.add_argument("values", nargs="+", metavar="D")

    p = sub.add_parser("verify", parents=[common], help="run one machine check")
    p.add_argument("check", choices=("theorem1", "conjecture1", "sigma-relation",
                                     "cover", "cyclic", "range"))
    p.add_argument("--bound", type=int, help="inclusive odd-range bound")
    p.add_argument("--start", type=int, help="range start (default 1)")
    p.add_argument("--end", type=int, help="range end (for: range)")
    p.add_argument("--class", dest="class_index", type=int,
                   help="restrict range sweep to one class")
    p.add_argument("--samples", type=int,
                   help="members sampled per class (for: cyclic, default 100)")
    p.add_argument("--seed", type=int, help="sampling seed (for: cyclic, default 0)")
    return parser


def _emit(text: str, output: str | None) -> int:
    if output is None:
        sys.stdout.write(text)
        return EXIT_PASS
    try:
        with open(output, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def _aligned(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> str:
    table = [header, *rows]
    widths = [max(len(row[col]) for row in table) for col in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in table]
    return "\n".join(lines) + "\n"


def _parse_values(raw_values, require_odd: bool) -> list[int]:
    values = []
    for raw in raw_values:
        try:
            d = int(raw, 10)
        except ValueError as exc:
            raise UsageError(f"not a decimal integer: {raw!r}") from exc
        if d < 1:
            raise UsageError(f"need positive integers, got {d}")
        if require_odd and not d & 1:
            raise UsageError(f"need odd integers, got {d}")
        values.append(d)
    return values


def _open_cache(cfg: Config) -> SigmaCache:
    if cfg.cache_path and os.path.exists(cfg.cache_path):
        return SigmaCache.load(cfg.cache_path)
    return SigmaCache()


def _save_cache(cache: SigmaCache, cfg: Config) -> None:
    if cfg.cache_path:
        cache.save(cfg.cache_path)


def cmd_table(args: argparse.Namespace, cfg: Config) -> int:
    if args.class_index is not None and not 1 <= args.class_index <= 9:
        raise UsageError(f"class index must be in 1..9, got {args.class_index}")
    table = ProfileTable.build(cfg.max_m)
    rows = [p for p in table.rows
            if args.class_index is None or p.class_index == args.class_index]
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in rows:
            d = p.row_dict()
            writer.writerow([d[field] for field in CSV_HEADER])
        text = buf.getvalue()
    elif cfg.output_format == "json":
        text = json.dumps([p.row_dict() for p in rows], indent=2) + "\n"
    else:
        header = ("i", "r", "m", "v_offset", "odd", "even", "next")
        body = [(str(p.class_index), str(p.residue), str(p.m), str(p.v_offset),
                 format_progression(p.d_modulus, p.d_offset),
                 format_progression(p.even_modulus, p.even_offset),
                 format_progression(p.next_modulus, p.next_offset))
                for p in rows]
        text = _aligned(header, body)
    return _emit(text, args.output)


def cmd_map(args: argparse.Namespace, cfg: Config) -> int:
    if args.which == "schema":
        table = build_schema(cfg.max_m)
    else:
        table = build_sigma_schema(cfg.max_m)
    return _emit(render_str(table, cfg.output_format), args.output)


def cmd_sigma(args: argparse.Namespace, cfg: Config) -> int:
    values = _parse_values(args.values, require_odd=False)
    cache = _open_cache(cfg)
    results = []  # (d, sigma|None, class|None, m|None, next|None)
    for d in values:
        try:
            sigma = sigma_infinity(d, cache, cfg.budget)
        except BudgetExceededError:
            results.append((d, None, None, None, None))
            continue
        if d & 1:
            profile, _n = classify(d)
            results.append((d, sigma, profile.class_index, profile.m,
                            (3 * d + 1) >> profile.m))
        else:
            results.append((d, sigma, None, None, None))
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("d", "sigma", "class", "m", "next", "status"))
        for d, sigma, i, m, nxt in results:
            status = "ok" if sigma is not None else "deferred"
            writer.writerow([d, _blank(sigma), _blank(i), _blank(m),
                             _blank(nxt), status])
        text = buf.getvalue()
    elif cfg.output_format == "json":
        text = json.dumps([
            {"d": d, "sigma": sigma, "class": i, "m": m, "next": nxt,
             "status": "ok" if sigma is not None else "deferred"}
            for d, sigma, i, m, nxt in results], indent=2) + "\n"
    else:
        lines = []
        for d, sigma, i, m, nxt in results:
            if sigma is None:
                lines.append(f"d={d} deferred budget-exceeded")
            elif i is None:
                lines.append(f"d={d} sigma={sigma} class=- m=- next=-")
            else:
                lines.append(f"d={d} sigma={sigma} class={i} m={m} next={nxt}")
        text = "\n".join(lines) + "\n"
    code = _emit(text, args.output)
    if code != EXIT_PASS:
        return code
    _save_cache(cache, cfg)
    if any(sigma is None for _, sigma, *_ in results):
        return EXIT_DEFERRED
    return EXIT_PASS


def _blank(value) -> str:
    return "" if value is None else str(value)


def cmd_classify(args: argparse.Namespace, cfg: Config) -> int:
    values = _parse_values(args.values, require_odd=True)
    rows = []
    for d in values:
        by_mod = residue_class(d)
        by_digits = digit_root_class(d)
        if by_mod != by_digits:  # cannot happen; surfaced rather than hidden
            print(f"error: class disagreement for {d}: "
                  f"mod gives {by_mod}, digit root gives {by_digits}",
                  file=sys.stderr)
            return EXIT_FAIL
        profile, n = classify(d)
        rows.append((d, by_mod, by_digits, profile, n,
                     (3 * d + 1) >> profile.m))
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("d", "class", "digit_root_class", "residue", "m",
                         "d_modulus", "d_offset", "n", "next"))
        for d, by_mod, by_digits, p, n, nxt in rows:
            writer.writerow([d, by_mod, by_digits, p.residue, p.m,
                             p.d_modulus, p.d_offset, n, nxt])
        text = buf.getvalue()
    elif cfg.output_format == "json":
        text = json.dumps([
            {"d": d, "class": by_mod, "digit_root_class": by_digits,
             "residue": p.residue, "m": p.m, "d_modulus": p.d_modulus,
             "d_offset": p.d_offset, "n": n, "next": nxt}
            for d, by_mod, by_digits, p, n, nxt in rows], indent=2) + "\n"
    else:
        lines = [
            f"d={d} class={by_mod} digit_root_class={by_digits} "
            f"residue={p.residue} m={p.m} "
            f"progression={p.d_modulus}n+{p.d_offset} n={n} next={nxt}"
            for d, by_mod, by_digits, p, n, nxt in rows
        ]
        text = "\n".join(lines) + "\n"
    return _emit(text, args.output)


def _require_flag(value, flag: str, check: str):
    if value is None:
        raise UsageError(f"verify {check} needs {flag}")
    return value


def cmd_verify(args: argparse.Namespace, cfg: Config) -> int:
    if cfg.output_format == "csv":
        raise UsageError("verify reports support text or json output")
    check = args.check
    cache = _open_cache(cfg)
    if check == "theorem1":
        report = verify_theorem1_symbolic(cfg.max_m)
    elif check == "conjecture1":
        bound = _require_flag(args.bound, "--bound", check)
        start = args.start if args.start is not None else 1
        report = verify_conjecture1(bound, start=start)
    elif check == "sigma-relation":
        bound = _require_flag(args.bound, "--bound", check)
        report = verify_sigma_relation(bound, cache, cfg.budget)
    elif check == "cover":
        bound = _require_flag(args.bound, "--bound", check)
        report = cover_audit(bound, cfg.max_m)
    elif check == "cyclic":
        samples = args.samples if args.samples is not None else 100
        seed = args.seed if args.seed is not None else 0
        report = verify_cyclic(samples_per_class=samples, seed=seed)
    else:
        end = _require_flag(args.end, "--end", check)
        if args.class_index is not None and not 1 <= args.class_index <= 9:
            raise UsageError(f"class index must be in 1..9, got {args.class_index}")
        start = args.start if args.start is not None else 1
        report = verify_range(start, end, class_filter=args.class_index,
                              threads=cfg.threads, budget=cfg.budget,
                              cache=cache)
    try:
        report = _validated(report)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.output_format == "json":
        text = report_to_json(report)
    else:
        text = report_to_text(report)
    code = _emit(text, args.output)
    _save_cache(cache, cfg)
    print(f"# {report.check_name}: {report.outcome} "
          f"({report.items_checked} items, {report.elapsed_s:.3f}s)",
          file=sys.stderr)
    if code != EXIT_PASS:
        return code
    if report.outcome == OUTCOME_PASS:
        return EXIT_PASS
    if report.outcome == OUTCOME_DEFERRED:
        return EXIT_DEFERRED
    return EXIT_FAIL


def _validated(report):
    # exit codes are a function of outcomes only; keep the invariant tight
    if (report.outcome == "fail") != bool(report.counterexamples):
        raise ValueError(f"report outcome {report.outcome} does not match "
                         f"{len(report.counterexamples)} counterexamples")
    return report


_HANDLERS = {
    "table": cmd_table,
    "map": cmd_map,
    "sigma": cmd_sigma,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # decimal inputs of arbitrary length
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already reported usage/help
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return _HANDLERS[args.command](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:  # parameter validation from the library
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
