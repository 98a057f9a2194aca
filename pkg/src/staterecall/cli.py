"""Command-line entry point.

Subcommands: ``generate`` (instances + prompts to JSONL, no endpoint),
``run`` (full evaluation against an endpoint or scripted baseline),
``score`` (re-parse and re-aggregate an existing records file),
``report`` (pretty-print a metrics CSV), ``selftest`` (in-process harness
checks on a reduced grid).

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from staterecall import metrics as metrics_mod
from staterecall.answerparse import ParserConfig
from staterecall.baselines import BaselineName, BaselineSpec, make_spec
from staterecall.endpointclient import EndpointConfig, Variant
from staterecall.metrics import CHANCE_LEVELS, aggregate, read_metrics_csv, write_metrics_csv
from staterecall.promptrender import PromptTemplateConfig, render_instance
from staterecall.runner import (
    DEFAULT_GRID,
    RunConfig,
    execute_run,
    load_records,
    plan_run,
    remaining_items,
    rescore_records,
    resume_run,
)
from staterecall.taskgen.astro import SwapPattern
from staterecall.taskgen.catalog import default_catalog_path, load_catalog
from staterecall.taskgen.instance import canonical_json, generate_instance, task_to_dict
from staterecall.taskgen.seeds import Family

SQUARE_SIZES = (4, 8, 16, 32, 64)


class UsageError(Exception):
    """Flag combinations argparse can't catch declaratively; exits 2."""


def parse_grid(text: str) -> tuple[tuple[int, int], ...]:
    """Parse a comma list of mxn bins, e.g. "4x4,8x16"."""
    bins: list[tuple[int, int]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        parts = chunk.split("x")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"bad grid bin {chunk!r}, expected mxn")
        try:
            bins.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad grid bin {chunk!r}: {exc}") from exc
    return tuple(bins)


def _resolve_grid(args: argparse.Namespace) -> tuple[tuple[int, int], ...]:
    single = args.m is not None or args.n is not None
    if single and (args.m is None or args.n is None):
        raise UsageError("--m and --n must be given together")
    if single and args.grid is not None:
        raise UsageError("--grid conflicts with --m/--n")
    if single:
        return ((args.m, args.n),)
    if args.grid is not None:
        return args.grid
    return DEFAULT_GRID


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--family", required=True, type=Family, choices=list(Family),
        metavar="{astro,collision}",
    )
    parser.add_argument("--grid", type=parse_grid, default=None, help="comma list of mxn bins, e.g. 4x4,8x8")
    parser.add_argument(
        "--square",
        action="store_true",
        help=f"use the full {'x'.join(str(s) for s in SQUARE_SIZES)} square grid (the default)",
    )
    parser.add_argument("--m", type=int, default=None, help="single-bin m (with --n)")
    parser.add_argument("--n", type=int, default=None, help="single-bin n (with --m)")
    parser.add_argument("--count", type=int, default=100, help="instances per bin")
    parser.add_argument("--seed", type=int, default=0, help="base seed for instance derivation")
    parser.add_argument("--catalog", type=Path, default=None, help="catalog CSV (default: bundled)")
    parser.add_argument(
        "--swap-pattern",
        type=SwapPattern,
        choices=list(SwapPattern),
        default=SwapPattern.ANCHORED,
        metavar="{anchored,true-swap,general}",
        help="astro swap structure",
    )


def _parser_config(args: argparse.Namespace) -> ParserConfig:
    kwargs: dict[str, object] = {}
    if getattr(args, "no_option_text", False):
        kwargs["accept_option_text"] = False
    delimiters = getattr(args, "reasoning_delimiter", None)
    if delimiters:
        kwargs["reasoning_delimiters"] = tuple((open_tag, close_tag) for open_tag, close_tag in delimiters)
    return ParserConfig(**kwargs)  # type: ignore[arg-type]


def cmd_generate(args: argparse.Namespace) -> int:
    grid = _resolve_grid(args)
    catalog = None
    if args.family is Family.ASTRO:
        catalog = load_catalog(args.catalog or default_catalog_path())
    out_path = args.out
    count = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for m, n in sorted(set(grid)):
            for index in range(args.count):
                task = generate_instance(
                    args.family, m, n, index, args.seed, catalog=catalog, pattern=args.swap_pattern
                )
                prompt = render_instance(task.payload)
                line = task_to_dict(task)
                line["prompt"] = prompt.text
                fh.write(canonical_json(line) + "\n")
                count += 1
    print(f"wrote {count} instances to {out_path}")
    return 0


def _solver_from_args(args: argparse.Namespace) -> EndpointConfig | BaselineSpec:
    if args.baseline and args.endpoint:
        raise UsageError("--baseline conflicts with --endpoint")
    if args.baseline:
        return make_spec(
            args.baseline,
            rng_seed=args.solver_seed,
            fail_rate=args.flaky_rate if args.baseline == BaselineName.FLAKY_FORMAT.value else None,
            inner=args.flaky_inner if args.baseline == BaselineName.FLAKY_FORMAT.value else None,
        )
    if args.endpoint:
        return EndpointConfig(
            base_url=args.endpoint,
            model_id=args.model,
            variant=args.variant,
            api_key=args.api_key,
            temperature=args.temperature,
            max_output_tokens=args.max_output_tokens,
            request_timeout=args.timeout,
            max_retries=args.max_retries,
            max_in_flight=args.max_in_flight,
        )
    raise UsageError("one of --baseline or --endpoint is required")


def _default_run_id(args: argparse.Namespace) -> str:
    solver = args.baseline if args.baseline else args.model.replace("/", "-")
    return f"{args.family.value}-{solver}-seed{args.seed}"


def cmd_run(args: argparse.Namespace) -> int:
    grid = _resolve_grid(args)
    solver = _solver_from_args(args)
    run_id = args.run_id or _default_run_id(args)
    cfg = RunConfig(
        family=args.family,
        solver=solver,
        output_dir=args.output_dir,
        run_id=run_id,
        grid=grid,
        instances_per_bin=args.count,
        base_seed=args.seed,
        swap_pattern=args.swap_pattern,
        catalog_path=args.catalog,
        parser=_parser_config(args),
    )
    if args.resume:
        todo = len(remaining_items(cfg))
        print(f"resuming {cfg.run_dir}: {todo} remaining")
        report = resume_run(cfg)
    else:
        print(f"running {len(plan_run(cfg))} instances into {cfg.run_dir}")
        report = execute_run(cfg)
    print(metrics_mod.format_report(report))
    print(f"records: {cfg.run_dir / 'records.jsonl'}")
    print(f"metrics: {cfg.run_dir / 'metrics.csv'}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    records = load_records(args.records)
    records = rescore_records(records, _parser_config(args))
    report = aggregate(records)
    out = args.out or Path(args.records).with_name("metrics.csv")
    write_metrics_csv(report, out)
    print(metrics_mod.format_report(report))
    print(f"metrics: {out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    rows = read_metrics_csv(args.csv)
    if not rows:
        print(f"{args.csv}: no bins")
        return 0
    header = list(metrics_mod.CSV_COLUMNS)
    ratios = {"accuracy", "parsed_rate", "parsed_weighted"}
    table = [
        [f"{row[col]:.6f}" if col in ratios else str(row[col]) for col in header] for row in rows
    ]
    widths = [max(len(header[i]), *(len(r[i]) for r in table)) for i in range(len(header))]
    print("  ".join(header[i].rjust(widths[i]) for i in range(len(header))))
    for r in table:
        print("  ".join(r[i].rjust(widths[i]) for i in range(len(header))))
    return 0


def _selftest_run(family: Family, solver: BaselineSpec, grid, count, seed, out_dir) -> object:
    cfg = RunConfig(
        family=family,
        solver=solver,
        output_dir=out_dir,
        run_id=f"selftest-{family.value}-{solver.name.value}",
        grid=grid,
        instances_per_bin=count,
        base_seed=seed,
    )
    return execute_run(cfg)


def cmd_selftest(args: argparse.Namespace) -> int:
    import tempfile

    grid = ((4, 4), (8, 8)) if args.quick else ((4, 4), (8, 8), (16, 16))
    count = 50 if args.quick else 100
    failures: list[str] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        status = "pass" if ok else "FAIL"
        print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
        if not ok:
            failures.append(name)

    with tempfile.TemporaryDirectory(prefix="staterecall-selftest-") as tmp:
        out_dir = Path(tmp)
        for family in Family:
            oracle = _selftest_run(family, make_spec("oracle"), grid, count, 7, out_dir)
            check(
                f"oracle accuracy 1.0 ({family.value})",
                all(b.accuracy == 1 and b.parsed == b.total for b in oracle.bins),
            )
            for b in oracle.bins:
                if b.parsed_weighted * b.total != b.correct:
                    check(f"metric identity ({family.value})", False, f"bin ({b.m},{b.n})")
                    break
            else:
                check(f"metric identity ({family.value})", True)

            random_report = _selftest_run(family, make_spec("random", rng_seed=11), grid, count, 7, out_dir)
            total = sum(b.total for b in random_report.bins)
            correct = sum(b.correct for b in random_report.bins)
            chance = CHANCE_LEVELS[family]
            observed = Fraction(correct, total)
            tolerance = Fraction(15, 100)
            check(
                f"random near chance ({family.value})",
                abs(observed - chance) <= tolerance,
                f"observed {float(observed):.3f} vs chance {float(chance):.2f}",
            )

            flaky = _selftest_run(
                family, make_spec("flaky-format", rng_seed=13, fail_rate=0.5, inner="oracle"),
                grid, count, 7, out_dir,
            )
            parsed = sum(b.parsed for b in flaky.bins)
            correct = sum(b.correct for b in flaky.bins)
            total = sum(b.total for b in flaky.bins)
            check(
                f"flaky-format halves parsed rate ({family.value})",
                correct == parsed and abs(Fraction(parsed, total) - Fraction(1, 2)) <= Fraction(15, 100),
                f"parsed_rate {parsed / total:.3f}, accuracy {'1.0' if correct == parsed else 'degraded'}",
            )

    if failures:
        print(f"selftest failed: {failures[0]}", file=sys.stderr)
        return 1
    print("selftest passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="staterecall",
        description="Generate, evaluate, and score recall/state-tracking benchmark tasks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_generate = sub.add_parser(
        "generate",
        help="write instances and prompts to JSONL without contacting any endpoint",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_grid_flags(p_generate)
    p_generate.add_argument("--out", type=Path, default=Path("instances.jsonl"))
    p_generate.set_defaults(func=cmd_generate)

    p_run = sub.add_parser(
        "run",
        help="evaluate a solver over the grid and persist records + metrics",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_grid_flags(p_run)
    p_run.add_argument("--baseline", choices=[b.value for b in BaselineName], default=None)
    p_run.add_argument("--solver-seed", type=int, default=0, help="baseline RNG seed")
    p_run.add_argument("--flaky-rate", type=float, default=None, help="flaky-format failure probability")
    p_run.add_argument("--flaky-inner", choices=[b.value for b in BaselineName if b is not BaselineName.FLAKY_FORMAT], default=None)
    p_run.add_argument("--endpoint", default=None, help="base URL of an OpenAI-compatible server")
    p_run.add_argument("--model", default="default", help="model id sent to the endpoint")
    p_run.add_argument(
        "--variant", type=Variant, choices=list(Variant), default=Variant.INSTRUCT,
        metavar="{think,instruct}",
    )
    p_run.add_argument("--api-key", default=None, help="bearer token (or set STATERECALL_API_KEY)")
    p_run.add_argument("--temperature", type=float, default=0.0)
    p_run.add_argument("--max-output-tokens", type=int, default=None, help="default: 6000 think / 40 instruct")
    p_run.add_argument("--timeout", type=float, default=120.0, help="per-request timeout, seconds")
    p_run.add_argument("--max-retries", type=int, default=3)
    p_run.add_argument("--max-in-flight", type=int, default=4)
    p_run.add_argument("--output-dir", type=Path, default=Path("runs"))
    p_run.add_argument("--run-id", default=None, help="default: derived from family/solver/seed")
    p_run.add_argument("--resume", action="store_true", help="finish an existing run directory")
    p_run.add_argument("--no-option-text", action="store_true", help="parser matches letters only")
    p_run.add_argument(
        "--reasoning-delimiter", nargs=2, action="append", metavar=("OPEN", "CLOSE"),
        help="reasoning span tags to strip (repeatable; default: <think> </think>)",
    )
    p_run.set_defaults(func=cmd_run)

    p_score = sub.add_parser(
        "score",
        help="re-parse and re-aggregate an existing records file",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p_score.add_argument("--records", type=Path, required=True)
    p_score.add_argument("--out", type=Path, default=None, help="metrics CSV path (default: alongside records)")
    p_score.add_argument("--no-option-text", action="store_true", help="parser matches letters only")
    p_score.add_argument(
        "--reasoning-delimiter", nargs=2, action="append", metavar=("OPEN", "CLOSE"),
        help="reasoning span tags to strip (repeatable; default: <think> </think>)",
    )
    p_score.set_defaults(func=cmd_score)

    p_report = sub.add_parser("report", help="pretty-print a metrics CSV")
    p_report.add_argument("--csv", type=Path, required=True)
    p_report.set_defaults(func=cmd_report)

    p_selftest = sub.add_parser(
        "selftest",
        help="run baseline/metric sanity properties on a reduced grid",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p_selftest.add_argument("--quick", action="store_true", help="smaller grid and bins")
    p_selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - the CLI boundary maps failures to exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
