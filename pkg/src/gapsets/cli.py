"""``gapset`` command line: inspect, count, table, verify, maps.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path

from .core import (Gapset, GapsetError, InvalidGapsetError, InvalidKunzTupleError,
                   UndefinedInvariantError, format_kunz, gamma_prime_levels, parse_gaps,
                   parse_kunz)
from .enumeration import (STRATEGIES, BudgetExceededError, CountCache, build_table,
                          cached_column, count_n, count_n_prime)
from .maps import DEFAULT_MAP_BUDGET, describe_maps, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
MAX_FULL_GENUS = 80
MAX_GENUS = 10_000
DEFAULT_BUDGET = 5_000_000_000


class UsageError(Exception):
    pass


def _set(values) -> str:
    return "{" + ",".join(map(str, sorted(values))) + "}"


def parse_spec(spec: str) -> Gapset:
    kind, sep, body = spec.partition(":")
    if not sep or kind not in ("gaps", "kunz"):
        raise UsageError(f"expected 'gaps:1,2,...' or 'kunz:(k1,...)', got {spec!r}")
    if kind == "gaps":
        return Gapset.of(parse_gaps(body))
    return Gapset.from_kunz(parse_kunz(body))


def inspect_report(G: Gapset) -> str:
    out = io.StringIO()
    p = lambda key, value: print(f"{key}: {value}", file=out)  # noqa: E731
    p("gaps", _set(G.gaps))
    p("multiplicity", G.multiplicity)
    p("genus", G.genus)
    p("conductor", G.conductor)
    p("depth", G.depth)
    try:
        p("ratio", G.ratio)
        p("level", G.level)
    except UndefinedInvariantError:
        p("ratio", "undefined (multiplicity 1)")
        p("level", "undefined (multiplicity 1)")
    p("apery", _set(G.apery_set()))
    p("kunz", format_kunz(G.kunz()))
    p("canonical partition", " ".join(_set(b) for b in G.canonical_partition()) or "(none)")
    levels = gamma_prime_levels(G)
    if levels is None:
        p("families", "every l")
    else:
        p("families", ",".join(f"l={l}" for l in levels) or "none")
    return out.getvalue()


def _genus(value: int, limit: int = MAX_GENUS) -> int:
    if not 1 <= value <= limit:
        raise UsageError(f"genus must be in [1, {limit}], got {value}")
    return value


def _level(value: int) -> int:
    if value < 1:
        raise UsageError(f"level must be >= 1, got {value}")
    return value


def _cache(args) -> CountCache | None:
    if args.no_cache:
        return None
    return CountCache(args.cache)


def render_table(table, g_max: int, level_max: int, fmt: str) -> str:
    if fmt == "csv":
        rows = ["g,l,count"]
        rows += [f"{g},{l},{table.n_prime[g, l]}"
                 for g in range(1, g_max + 1) for l in range(1, level_max + 1)]
        return "\n".join(rows) + "\n"
    if fmt == "json":
        return table.to_json()
    head = "| g \\ l | " + " | ".join(str(l) for l in range(1, level_max + 1)) + " |"
    rule = "|---|" + "---|" * level_max
    rows = [head, rule]
    for g in range(1, g_max + 1):
        cells = [str(table.n_prime[g, l]) if l <= g else " " for l in range(1, level_max + 1)]
        rows.append(f"| {g} | " + " | ".join(cells) + " |")
    return "\n".join(rows) + "\n"


def cmd_inspect(args) -> int:
    try:
        G = parse_spec(args.spec)
    except InvalidGapsetError as exc:
        print(f"invalid gapset: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidKunzTupleError as exc:
        v = exc.violation
        print(f"invalid Kunz tuple: {format_kunz(exc.coords)}, witness (i={v.i}, j={v.j}): "
              f"{v.describe()}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(inspect_report(G))
    return EXIT_OK


def cmd_count(args) -> int:
    cache = _cache(args)
    if args.level is None:
        g = _genus(args.genus, MAX_FULL_GENUS)
        value = cache.get_full(g) if cache else None
        if value is None:
            value = count_n(g, jobs=args.jobs, budget=args.budget)
            if cache:
                cache.store_full(g, value)
    else:
        g, level = _genus(args.genus), _level(args.level)
        if args.strategy == "kunz":
            value = cached_column(level, g, jobs=args.jobs, budget=args.budget, cache=cache)[g]
        else:
            value = count_n_prime(g, level, strategy=args.strategy)
    print(value)
    return EXIT_OK


def cmd_table(args) -> int:
    g_max, level_max = _genus(args.max_genus), _level(args.max_level)
    table = build_table(g_max, level_max, strategy=args.strategy, jobs=args.jobs,
                        budget=args.budget, cache=_cache(args))
    text = render_table(table, g_max, level_max, args.format)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verify_cell(task):
    g, level, column, map_budget = task
    return verify_theorem(g, level, column[: g + 1], map_budget=map_budget)


def cmd_verify(args) -> int:
    g_max, level_max = _genus(args.max_genus), _level(args.max_level)
    cache = _cache(args)
    columns = {l: cached_column(l, g_max, jobs=args.jobs, budget=args.budget, cache=cache)
               for l in range(1, level_max + 1)}
    map_budget = None if args.map_budget < 0 else args.map_budget
    tasks = [(g, l, columns[l], map_budget)
             for g in range(1, g_max + 1) for l in range(1, level_max + 1)]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_verify_cell, tasks))
    else:
        reports = [_verify_cell(t) for t in tasks]
    for r in reports:
        print(r.to_json())
    failed = [r for r in reports if r.status == "fail"]
    skipped = [r for r in reports if r.status == "budget_exceeded"]
    if failed:
        print(f"verification failed at g={failed[0].g} l={failed[0].l}: {failed[0].to_json()}",
              file=sys.stderr)
        return EXIT_FAIL
    if skipped:
        print(f"{len(skipped)} cell(s) exceeded the map-check budget, first at "
              f"g={skipped[0].g} l={skipped[0].l}; rerun with a larger --map-budget",
              file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_maps(args) -> int:
    g, level = _genus(args.genus), _level(args.level)
    sys.stdout.write(describe_maps(g, level))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", default=None,
                        help="count cache file (default: $GAPSET_CACHE or ~/.cache/gapset)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum search-node expansions")

    parser = argparse.ArgumentParser(prog="gapset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", parents=[common], help="invariants of one gapset")
    p.add_argument("spec", help="'gaps:1,2,4,5,8,11' or 'kunz:(2,4)'")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("count", parents=[common], help="n_g, or n'_{g,l} with --level")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--strategy", choices=STRATEGIES, default="kunz")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("table", parents=[common], help="grid of n'_{g,l}")
    p.add_argument("--max-genus", type=int, required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json", "md"), default="csv")
    p.add_argument("--strategy", choices=STRATEGIES, default="kunz")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="check the bounds on every cell")
    p.add_argument("--max-genus", type=int, required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--map-budget", type=int, default=DEFAULT_MAP_BUDGET,
                   help="max tuples per cell for the map checks (-1: unlimited)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("maps", parents=[common], help="list both maps at one cell")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_maps)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gapset: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"gapset: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GapsetError as exc:
        print(f"gapset: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
