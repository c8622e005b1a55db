"""Balanced n-factor factorial ANOVA with a replication block.

Sums of squares use the effects formulation: a factor subset's effect tensor
is its table of marginal means minus the grand mean and all lower-order
effects, and its SS is ``(obs per marginal cell) * sum(effects^2)``.  On
balanced data this equals the classical marginal-mean decomposition, without
the cancellation that the raw inclusion-exclusion form suffers when an
interaction SS is tiny.  The replication block is removed before the error
term, which is obtained by subtraction from the total.  Only balanced data
are accepted.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .distributions import clamp_p, f_sf

SWEEP_FACTORS = ("selection", "crossover", "pc", "pm")


@dataclass
class AnovaRow:
    source: str
    df: int
    ss: float
    ms: float | None
    f: float | None
    p: float | None


@dataclass
class AnovaTable:
    rows: list[AnovaRow]
    grand_mean: float
    cv: float
    df_error: int
    ms_error: float

    def row(self, source: str) -> AnovaRow:
        for r in self.rows:
            if r.source == source:
                return r
        raise KeyError(f"no ANOVA row named {source!r}")

    @property
    def df_column(self) -> tuple[int, ...]:
        return tuple(r.df for r in self.rows)

    def to_text(self) -> str:
        return render_anova_text(self)

    def to_csv(self) -> str:
        return render_anova_csv(self)


def _encode(values) -> tuple[np.ndarray, list]:
    """Codes 0..L-1 with levels in sorted order, so the decomposition does
    not depend on row order."""
    levels = {v: i for i, v in enumerate(sorted(set(values)))}
    codes = np.fromiter((levels[v] for v in values), dtype=np.int64, count=len(values))
    return codes, list(levels)


def factorial_anova(
    response,
    factors: list[tuple[str, list]],
    rep,
) -> AnovaTable:
    """ANOVA of ``response`` on crossed ``factors`` with ``rep`` as block."""
    y = np.asarray(response, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("response must be a nonempty 1-d sequence")
    n_obs = y.size
    names = [name for name, _ in factors]
    codes = []
    n_levels = []
    for name, values in factors:
        if len(values) != n_obs:
            raise ValueError(f"factor {name!r} length differs from response")
        c, lv = _encode(values)
        codes.append(c)
        n_levels.append(len(lv))
    rep_codes, rep_levels = _encode(rep)
    if len(rep) != n_obs:
        raise ValueError("rep column length differs from response")
    r = len(rep_levels)
    if r < 2:
        raise ValueError("need at least 2 replicates")

    dims = tuple(n_levels) + (r,)
    flat = np.ravel_multi_index(tuple(codes) + (rep_codes,), dims)
    counts = np.bincount(flat, minlength=int(np.prod(dims)))
    if not (counts == 1).all():
        raise ValueError("unbalanced data: every cell x replicate must appear exactly once")

    # canonical observation order: results are invariant to row shuffling
    order = np.argsort(flat, kind="stable")
    y = y[order]
    codes = [c[order] for c in codes]
    rep_codes = rep_codes[order]

    n_cells = int(np.prod(n_levels))
    df_total = n_obs - 1
    df_rep = r - 1
    grand = float(y.mean())
    ss_total = float(((y - grand) ** 2).sum())

    def marginal_means(subset: tuple[int, ...]) -> np.ndarray:
        sub_dims = tuple(n_levels[i] for i in subset)
        idx = np.ravel_multi_index(tuple(codes[i] for i in subset), sub_dims)
        m = int(np.prod(sub_dims))
        sums = np.bincount(idx, weights=y, minlength=m)
        return (sums / (n_obs // m)).reshape(sub_dims)

    k = len(factors)
    subsets = [
        s for size in range(1, k + 1) for s in combinations(range(k), size)
    ]
    # effects formulation: each subset's effect tensor is its marginal means
    # minus the grand mean and all lower-order effects; squaring the small
    # effects avoids the cancellation of the raw inclusion-exclusion form
    effects: dict[tuple[int, ...], np.ndarray] = {}
    ss: dict[tuple[int, ...], float] = {}
    df: dict[tuple[int, ...], int] = {}
    for s in subsets:
        eff = marginal_means(s) - grand
        for size in range(1, len(s)):
            for sub in combinations(s, size):
                shape = tuple(n_levels[i] if i in sub else 1 for i in s)
                eff -= effects[sub].reshape(shape)
        effects[s] = eff
        per_cell = n_obs // eff.size
        ss[s] = per_cell * float((eff**2).sum())
        d = 1
        for i in s:
            d *= n_levels[i] - 1
        df[s] = d

    rep_sums = np.bincount(rep_codes, weights=y, minlength=r)
    rep_means = rep_sums / n_cells
    ss_rep = n_cells * float(((rep_means - grand) ** 2).sum())

    df_error = df_total - df_rep - sum(df.values())
    if df_error <= 0:
        raise ValueError("zero error degrees of freedom; need more replicates or cells")
    ss_error = ss_total - ss_rep - sum(ss.values())
    ms_error = ss_error / df_error

    def effect_stats(ss_val: float, df_val: int):
        if df_val <= 0:
            return None, None, None
        ms = ss_val / df_val
        if ms_error > 0:
            f = ms / ms_error
            p = f_sf(f, df_val, df_error)
        else:
            f, p = 0.0, 1.0
        return ms, f, p

    rows = []
    ms, f, p = effect_stats(ss_rep, df_rep)
    rows.append(AnovaRow("Replication", df_rep, ss_rep, ms, f, p))
    for s in subsets:
        source = " x ".join(names[i] for i in s)
        ms, f, p = effect_stats(ss[s], df[s])
        rows.append(AnovaRow(source, df[s], ss[s], ms, f, p))
    rows.append(AnovaRow("Error", df_error, ss_error, ms_error, None, None))
    rows.append(AnovaRow("Total", df_total, ss_total, None, None, None))

    cv = 0.0 if grand == 0 else 100.0 * np.sqrt(max(ms_error, 0.0)) / abs(grand)
    return AnovaTable(
        rows=rows, grand_mean=grand, cv=float(cv),
        df_error=df_error, ms_error=ms_error,
    )


def anova(table, response: str = "offline") -> AnovaTable:
    """Four-factor ANOVA (selection, crossover, pc, pm) of a sweep RunTable,
    with the replicate as block."""
    if response not in ("offline", "online"):
        raise ValueError("response must be 'offline' or 'online'")
    if len(table.records) == 0:
        raise ValueError("empty run table")
    y = [getattr(rec, response) for rec in table.records]
    factors = [
        (name, [getattr(rec, name) for rec in table.records])
        for name in SWEEP_FACTORS
    ]
    rep = [rec.rep for rec in table.records]
    return factorial_anova(y, factors, rep)


def format_p(p: float | None) -> str:
    if p is None:
        return ""
    p = clamp_p(p)
    if p < 1e-4:
        return "<0.0001"
    return f"{p:.4f}"


def render_anova_text(table: AnovaTable) -> str:
    headers = (
        "Source of Variation",
        "Degree of Freedom",
        "Sum of Squares",
        "Mean Square",
        "F-Value",
        "Pr>F",
    )
    body = []
    for r in table.rows:
        body.append(
            (
                r.source,
                str(r.df),
                f"{r.ss:.2f}",
                "" if r.ms is None else f"{r.ms:.2f}",
                "" if r.f is None else f"{r.f:.2f}",
                format_p(r.p),
            )
        )
    widths = [
        max(len(headers[c]), max(len(row[c]) for row in body))
        for c in range(len(headers))
    ]
    lines = [
        "  ".join(
            h.ljust(widths[i]) if i == 0 else h.rjust(widths[i])
            for i, h in enumerate(headers)
        )
    ]
    for row in body:
        lines.append(
            "  ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(row)
            )
        )
    lines.append(f"CV={table.cv:.2f}")
    return "\n".join(lines) + "\n"


def render_anova_csv(table: AnovaTable) -> str:
    lines = ["source,df,ss,ms,f,p"]
    for r in table.rows:
        lines.append(
            ",".join(
                (
                    r.source,
                    str(r.df),
                    repr(float(r.ss)),
                    "" if r.ms is None else repr(float(r.ms)),
                    "" if r.f is None else repr(float(r.f)),
                    "" if r.p is None else repr(float(r.p)),
                )
            )
        )
    return "\n".join(lines) + "\n"
