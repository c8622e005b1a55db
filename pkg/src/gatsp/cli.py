"""Command-line front end.

Subcommands: ``gen`` (write an instance file), ``run`` (one GA run),
``sweep`` (factorial sweep to a runs CSV), ``anova``, ``dmrt``, ``novelty``
(analyses of a runs CSV) and ``report`` (all analyses into one directory).

Exit codes: 0 success, 2 usage errors (argparse), 3 file errors (missing,
unreadable or malformed files), 4 invalid data or parameters.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .engine import GaConfig, default_max_generations, run_ga
from .experiment import (
    PRESETS,
    build_design,
    derive_seed,
    read_runs,
    run_sweep,
    write_runs,
)
from .instance import generate_instance, read_instance, write_instance
from .report import (
    dmrt_for_factors,
    factor_trend,
    novelty_comparison,
    render_novelty_csv,
    render_novelty_text,
    render_trend_csv,
    render_trend_text,
)
from .stats.anova import anova

EXIT_OK = 0
EXIT_FILE = 3
EXIT_DATA = 4


class CliError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _load(reader, path):
    try:
        return reader(path)
    except OSError as exc:
        raise CliError(EXIT_FILE, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_FILE, str(exc)) from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="ascii")
    except OSError as exc:
        raise CliError(EXIT_FILE, str(exc)) from exc


def cmd_gen(args) -> int:
    inst = generate_instance(
        args.n, args.seed, margin=args.margin, zero_fraction=args.zero_fraction
    )
    try:
        write_instance(inst, args.out)
    except OSError as exc:
        raise CliError(EXIT_FILE, str(exc)) from exc
    print(f"wrote {args.out} (n={inst.n} optimum={inst.optimum})")
    return EXIT_OK


def cmd_run(args) -> int:
    inst = _load(read_instance, args.instance)
    pop_seed = args.pop_seed
    if pop_seed is None:
        pop_seed = derive_seed(args.seed, "pop", 1)
    run_seed_value = args.run_seed
    if run_seed_value is None:
        run_seed_value = derive_seed(args.seed, "run-single")
    max_gens = args.max_generations
    if max_gens is None:
        max_gens = default_max_generations(inst.n)
    config = GaConfig(
        selection=args.selection,
        crossover=args.crossover,
        crossover_prob=args.pc,
        mutation_rate=args.pm,
        population_size=args.lam,
        max_generations=max_gens,
        population_seed=pop_seed,
        run_seed=run_seed_value,
    )
    result = run_ga(config, inst)
    print(f"offline={result.offline!r}")
    print(f"online={result.online!r}")
    print(f"generations={result.generations}")
    print(f"evaluations={result.evaluations}")
    print(f"reached_optimum={int(result.reached_optimum)}")
    print(f"xover_attempted={result.novelty.expected}")
    print(f"xover_new={result.novelty.actual_new}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    inst = _load(read_instance, args.instance)
    design = build_design(
        n=inst.n,
        preset=args.preset,
        reps=args.reps,
        selection=args.selection,
        crossover=args.crossover,
        pc=args.pc,
        pm=args.pm,
    )
    table = run_sweep(
        design,
        inst,
        master_seed=args.seed,
        lam=args.lam,
        max_generations=args.max_generations,
        threads=args.threads,
    )
    try:
        write_runs(table, args.out)
    except OSError as exc:
        raise CliError(EXIT_FILE, str(exc)) from exc
    print(f"wrote {args.out} ({len(table)} runs)")
    return EXIT_OK


def cmd_anova(args) -> int:
    table = _load(read_runs, args.runs)
    result = anova(table, response=args.response)
    text = result.to_text()
    if args.out:
        _write_text(args.out, text)
    else:
        print(text, end="")
    if args.csv:
        _write_text(args.csv, result.to_csv())
    return EXIT_OK


def cmd_dmrt(args) -> int:
    table = _load(read_runs, args.runs)
    grouping = dmrt_for_factors(
        table, args.factors, response=args.response, alpha=args.alpha
    )
    text = grouping.to_text(title=f"Mean {args.response}")
    if args.out:
        _write_text(args.out, text)
    else:
        print(text, end="")
    if args.csv:
        _write_text(args.csv, grouping.to_csv())
    return EXIT_OK


def cmd_novelty(args) -> int:
    table = _load(read_runs, args.runs)
    rows = novelty_comparison(table)
    text = render_novelty_text(rows)
    if args.out:
        _write_text(args.out, text)
    else:
        print(text, end="")
    if args.csv:
        _write_text(args.csv, render_novelty_csv(rows))
    return EXIT_OK


def cmd_report(args) -> int:
    table = _load(read_runs, args.runs)
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(EXIT_FILE, str(exc)) from exc

    anova_table = anova(table, response=args.response)
    sections = [
        f"ANOVA of {args.response} performance",
        anova_table.to_text(),
    ]

    trends = {}
    for factor in ("pc", "pm"):
        levels = {getattr(rec, factor) for rec in table.records}
        if len(levels) < 3:
            sections.append(
                f"Trend contrasts for {factor}: skipped "
                f"({len(levels)} level(s); needs at least 3)\n"
            )
            continue
        rows, scale = factor_trend(
            table, factor, response=args.response, anova_table=anova_table
        )
        trends[factor] = (rows, scale)
        sections.append(render_trend_text(factor, rows, scale))

    grouping = dmrt_for_factors(
        table,
        ["selection", "crossover"],
        response=args.response,
        alpha=args.alpha,
        anova_table=anova_table,
    )
    sections.append(
        "DMRT on selection-crossover combinations "
        f"(alpha={args.alpha:g})\n" + grouping.to_text(title=f"Mean {args.response}")
    )

    novelty_rows = novelty_comparison(table)
    sections.append(
        "Crossover novelty comparison\n" + render_novelty_text(novelty_rows)
    )

    _write_text(out_dir / "report.txt", "\n".join(sections))
    _write_text(out_dir / "anova.csv", anova_table.to_csv())
    _write_text(out_dir / "trend.csv", render_trend_csv(trends))
    _write_text(out_dir / "dmrt.csv", grouping.to_csv())
    _write_text(out_dir / "novelty.csv", render_novelty_csv(novelty_rows))
    for name in ("report.txt", "anova.csv", "trend.csv", "dmrt.csv", "novelty.csv"):
        print(f"wrote {out_dir / name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gatsp",
        description="Permutation-GA experiment lab for planted-optimum TSPs",
    )
    parser.add_argument("--version", action="version", version=f"gatsp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--margin", type=int, default=1)
    p.add_argument("--zero-fraction", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one GA configuration")
    p.add_argument("--instance", required=True)
    p.add_argument("--selection", choices=("RSIS", "SUS"), required=True)
    p.add_argument("--crossover", choices=("PMX", "CX"), required=True)
    p.add_argument("--pc", type=float, required=True)
    p.add_argument("--pm", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lam", type=int, default=30)
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--pop-seed", type=int, default=None)
    p.add_argument("--run-seed", type=int, default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a factorial sweep to a runs CSV")
    p.add_argument("--instance", required=True)
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--selection", type=_str_list, default=["RSIS", "SUS"])
    p.add_argument("--crossover", type=_str_list, default=["PMX", "CX"])
    p.add_argument("--pc", type=_float_list, default=None)
    p.add_argument("--pm", type=_float_list, default=None)
    p.add_argument("--reps", type=int, default=4)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lam", type=int, default=30)
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("anova", help="factorial ANOVA of a runs CSV")
    p.add_argument("--runs", required=True)
    p.add_argument("--response", choices=("offline", "online"), default="offline")
    p.add_argument("--out", default=None, help="write the text table here")
    p.add_argument("--csv", default=None, help="write the machine CSV here")
    p.set_defaults(func=cmd_anova)

    p = sub.add_parser("dmrt", help="Duncan multiple range test on group means")
    p.add_argument("--runs", required=True)
    p.add_argument(
        "--factors",
        type=_str_list,
        default=["selection", "crossover"],
        help="comma-separated factor columns, e.g. selection,crossover",
    )
    p.add_argument("--response", choices=("offline", "online"), default="offline")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_dmrt)

    p = sub.add_parser("novelty", help="PMX-vs-CX new-offspring comparison")
    p.add_argument("--runs", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_novelty)

    p = sub.add_parser("report", help="all analyses for one sweep")
    p.add_argument("--runs", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--response", choices=("offline", "online"), default="offline")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_report)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"gatsp: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"gatsp: error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except (ValueError, RuntimeError) as exc:
        print(f"gatsp: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main(argv=None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
