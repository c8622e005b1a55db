"""Analyses over a persisted run table: group means, DMRT selections,
trend contrast tables, the PMX-vs-CX novelty comparison, and the combined
report document."""

import math
from dataclasses import dataclass

import numpy as np

from .experiment import RunTable
from .stats.anova import AnovaTable, anova, format_p
from .stats.contrasts import trend_contrasts
from .stats.dmrt import DmrtGrouping, dmrt

FACTOR_COLUMNS = ("selection", "crossover", "pc", "pm")
CONTINUOUS_FACTORS = ("pc", "pm")


def _format_level(value) -> str:
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def group_means(table: RunTable, factors: list[str], response: str = "offline"):
    """Mean response per combination of the given factor columns.

    Returns (labels, means, count_per_group); groups are ordered by first
    appearance, labels join the level values with '-'.
    """
    for f in factors:
        if f not in FACTOR_COLUMNS:
            raise ValueError(f"unknown factor {f!r}; choose from {FACTOR_COLUMNS}")
    if not factors:
        raise ValueError("need at least one factor")
    groups: dict[tuple, list[float]] = {}
    for rec in table.records:
        key = tuple(getattr(rec, f) for f in factors)
        groups.setdefault(key, []).append(getattr(rec, response))
    labels = ["-".join(_format_level(v) for v in key) for key in groups]
    means = np.array([np.mean(v) for v in groups.values()])
    counts = {len(v) for v in groups.values()}
    if len(counts) != 1:
        raise ValueError("unbalanced grouping: unequal observations per group")
    return labels, means, counts.pop()


def dmrt_for_factors(
    table: RunTable,
    factors: list[str],
    response: str = "offline",
    alpha: float = 0.05,
    anova_table: AnovaTable | None = None,
) -> DmrtGrouping:
    """DMRT over the mean response of each factor-level combination, using
    the sweep ANOVA's error mean square."""
    if anova_table is None:
        anova_table = anova(table, response)
    labels, means, r_per_mean = group_means(table, factors, response)
    return dmrt(
        labels,
        means,
        r_per_mean=r_per_mean,
        ms_error=anova_table.ms_error,
        df_error=anova_table.df_error,
        alpha=alpha,
    )


@dataclass
class NoveltyRow:
    selection: str
    pc: float
    pm: float
    pmx_new: int | None
    pmx_attempted: int | None
    cx_new: int | None
    cx_attempted: int | None

    @staticmethod
    def _pct(new, attempted):
        if not attempted:
            return float("nan")
        return 100.0 * new / attempted

    @property
    def pmx_percent(self) -> float:
        return self._pct(self.pmx_new, self.pmx_attempted)

    @property
    def cx_percent(self) -> float:
        return self._pct(self.cx_new, self.cx_attempted)


def novelty_comparison(table: RunTable) -> list[NoveltyRow]:
    """Crossover novelty counts per (selection, pc, pm) cell, split by
    crossover operator: how often an application produced a child distinct
    from both parents."""
    cells: dict[tuple, dict[str, list[int]]] = {}
    for rec in table.records:
        key = (rec.selection, rec.pc, rec.pm)
        ops = cells.setdefault(key, {})
        new, att = ops.setdefault(rec.crossover, [0, 0])
        ops[rec.crossover] = [new + rec.xover_new, att + rec.xover_attempted]
    rows = []
    for (sel, pc, pm), ops in cells.items():
        pmx_counts = ops.get("PMX")
        cx_counts = ops.get("CX")
        rows.append(
            NoveltyRow(
                selection=sel,
                pc=pc,
                pm=pm,
                pmx_new=None if pmx_counts is None else pmx_counts[0],
                pmx_attempted=None if pmx_counts is None else pmx_counts[1],
                cx_new=None if cx_counts is None else cx_counts[0],
                cx_attempted=None if cx_counts is None else cx_counts[1],
            )
        )
    return rows


def render_novelty_text(rows: list[NoveltyRow]) -> str:
    header = (
        f"{'selection':<10}{'pc':>6}{'pm':>8}"
        f"{'PMX new':>10}{'PMX att':>10}{'PMX %':>9}"
        f"{'CX new':>10}{'CX att':>10}{'CX %':>9}"
    )
    lines = [header]

    def num(v):
        return "" if v is None else str(v)

    def pct(v):
        return "" if math.isnan(v) else f"{v:.2f}"

    for r in rows:
        lines.append(
            f"{r.selection:<10}{r.pc:>6g}{r.pm:>8g}"
            f"{num(r.pmx_new):>10}{num(r.pmx_attempted):>10}{pct(r.pmx_percent):>9}"
            f"{num(r.cx_new):>10}{num(r.cx_attempted):>10}{pct(r.cx_percent):>9}"
        )
    return "\n".join(lines) + "\n"


def render_novelty_csv(rows: list[NoveltyRow]) -> str:
    lines = ["selection,pc,pm,pmx_new,pmx_attempted,pmx_percent,cx_new,cx_attempted,cx_percent"]

    def num(v):
        return "" if v is None else str(v)

    def pct(v):
        return "" if math.isnan(v) else repr(v)

    for r in rows:
        lines.append(
            ",".join(
                (
                    r.selection,
                    repr(float(r.pc)),
                    repr(float(r.pm)),
                    num(r.pmx_new),
                    num(r.pmx_attempted),
                    pct(r.pmx_percent),
                    num(r.cx_new),
                    num(r.cx_attempted),
                    pct(r.cx_percent),
                )
            )
        )
    return "\n".join(lines) + "\n"


def factor_trend(
    table: RunTable,
    factor: str,
    response: str = "offline",
    anova_table: AnovaTable | None = None,
):
    """Trend-contrast partition of a continuous factor's sum of squares.

    Geometric grids (e.g. 0.001/0.01/0.1) are handled on the log10 scale,
    since the contrast coefficients only require equal spacing.
    Returns (rows, scale) where scale is 'linear' or 'log10'.
    """
    if factor not in CONTINUOUS_FACTORS:
        raise ValueError(f"trend contrasts apply to {CONTINUOUS_FACTORS}")
    if anova_table is None:
        anova_table = anova(table, response)
    labels, means, r_per_mean = group_means(table, [factor], response)
    levels = np.array([float(l) for l in labels])
    order = np.argsort(levels)
    levels = levels[order]
    means = means[order]
    gaps = np.diff(levels)
    scale = "linear"
    if not np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0):
        logs = np.log10(levels)
        lgaps = np.diff(logs)
        if np.allclose(lgaps, lgaps[0], rtol=1e-9, atol=1e-12):
            levels = logs
            scale = "log10"
        else:
            raise ValueError(
                f"{factor} levels are neither arithmetically nor "
                "geometrically equally spaced"
            )
    rows = trend_contrasts(
        means,
        levels,
        r_per_mean=r_per_mean,
        ms_error=anova_table.ms_error,
        df_error=anova_table.df_error,
    )
    return rows, scale


def render_trend_text(factor: str, rows, scale: str) -> str:
    title = f"Trend contrasts for {factor}"
    if scale != "linear":
        title += f" (levels on {scale} scale)"
    lines = [title, f"{'component':<12}{'SS':>14}{'F-Value':>10}{'Pr>F':>9}"]
    for r in rows:
        lines.append(f"{r.name:<12}{r.ss:>14.4f}{r.f:>10.2f}{format_p(r.p):>9}")
    return "\n".join(lines) + "\n"


def render_trend_csv(trends: dict) -> str:
    lines = ["factor,scale,component,ss,f,p"]
    for factor, (rows, scale) in trends.items():
        for r in rows:
            lines.append(
                f"{factor},{scale},{r.name},{repr(r.ss)},{repr(r.f)},{repr(r.p)}"
            )
    return "\n".join(lines) + "\n"
