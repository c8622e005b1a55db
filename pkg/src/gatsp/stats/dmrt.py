"""Duncan's multiple range test with compact letter display.

Means are ranked in descending order.  For a span of p ranked means the least
significant range is ``R_p = q(p, df, alpha_p) * sqrt(MS_error / r)`` with
Duncan's protection level ``alpha_p = 1 - (1 - alpha)**(p - 1)``.  Two means
are not significantly different when they lie inside some ranked interval
whose extremes differ by less than the R for that span; each maximal such
interval gets one letter.
"""

from dataclasses import dataclass

import numpy as np

from .distributions import studentized_range_quantile


@dataclass
class DmrtGrouping:
    labels: list[str]            # ranked by descending mean
    means: np.ndarray            # descending
    letters: list[str]           # rendered letter membership per treatment
    std_error: float             # sqrt(MS_error / r)
    ranges: np.ndarray           # R_p for p = 2..k
    alpha: float
    df_error: int

    def to_text(self, title: str = "Mean") -> str:
        width = max(len(lbl) for lbl in self.labels)
        width = max(width, len("Treatment"))
        lines = [f"{'Treatment'.ljust(width)}  {title}"]
        for lbl, mean, letters in zip(self.labels, self.means, self.letters):
            lines.append(f"{lbl.ljust(width)}  {mean:.2f}{letters}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = ["label,mean,letters"]
        for lbl, mean, letters in zip(self.labels, self.means, self.letters):
            lines.append(f"{lbl},{repr(float(mean))},{letters}")
        return "\n".join(lines) + "\n"


def duncan_alpha(alpha: float, p: int) -> float:
    """Duncan's protection level for a span of p means."""
    return 1.0 - (1.0 - alpha) ** (p - 1)


def duncan_ranges(k: int, df_error: int, alpha: float, std_error: float) -> np.ndarray:
    """Least significant ranges R_p for spans p = 2..k."""
    return np.array(
        [
            studentized_range_quantile(p, df_error, duncan_alpha(alpha, p)) * std_error
            for p in range(2, k + 1)
        ]
    )


def homogeneous_intervals(means_desc: np.ndarray, ranges: np.ndarray) -> list[tuple[int, int]]:
    """Maximal ranked intervals whose extreme means differ by less than the
    applicable least significant range (singletons are always homogeneous)."""
    k = len(means_desc)

    def homog(i: int, j: int) -> bool:
        if i == j:
            return True
        return (means_desc[i] - means_desc[j]) < ranges[j - i - 1]

    best_end = []
    for i in range(k):
        j_max = i
        for j in range(i + 1, k):
            if homog(i, j):
                j_max = j
        best_end.append(j_max)
    intervals = []
    covered_end = -1  # max interval end seen so far; ends beyond it are maximal
    for i in range(k):
        if best_end[i] > covered_end:
            intervals.append((i, best_end[i]))
            covered_end = best_end[i]
    return intervals


def render_letter_run(first: int, last: int) -> str:
    """Compact display for a run of group letters: 'a', 'ab', 'a-c'."""
    letters = [chr(ord("a") + g) for g in range(first, last + 1)]
    if len(letters) <= 2:
        return "".join(letters)
    return f"{letters[0]}-{letters[-1]}"


def assign_letters(means_desc, ranges) -> list[str]:
    """Letter membership per ranked mean given the ranges R_2..R_k."""
    means_desc = np.asarray(means_desc, dtype=np.float64)
    ranges = np.asarray(ranges, dtype=np.float64)
    k = means_desc.size
    if k < 1:
        raise ValueError("need at least one mean")
    if ranges.size != max(k - 1, 0):
        raise ValueError("ranges must hold R_p for p = 2..k")
    intervals = homogeneous_intervals(means_desc, ranges)
    if len(intervals) > 26:
        raise ValueError("more than 26 distinct groups; letter display overflows")
    letters = []
    for t in range(k):
        groups = [g for g, (i, j) in enumerate(intervals) if i <= t <= j]
        letters.append(render_letter_run(groups[0], groups[-1]))
    return letters


def dmrt(
    labels,
    means,
    r_per_mean: int,
    ms_error: float,
    df_error: int,
    alpha: float = 0.05,
) -> DmrtGrouping:
    """Duncan's multiple range test over treatment means (balanced)."""
    means = np.asarray(means, dtype=np.float64)
    labels = [str(l) for l in labels]
    if means.ndim != 1 or means.size < 2:
        raise ValueError("need at least 2 treatment means")
    if len(labels) != means.size:
        raise ValueError("labels and means must be equally long")
    if r_per_mean < 1:
        raise ValueError("r_per_mean must be >= 1")
    if ms_error <= 0:
        raise ValueError("ms_error must be positive")
    if df_error < 1:
        raise ValueError("df_error must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    order = np.argsort(-means, kind="stable")
    ranked_means = means[order]
    ranked_labels = [labels[i] for i in order]
    std_error = float(np.sqrt(ms_error / r_per_mean))
    ranges = duncan_ranges(means.size, df_error, alpha, std_error)
    letters = assign_letters(ranked_means, ranges)
    return DmrtGrouping(
        labels=ranked_labels,
        means=ranked_means,
        letters=letters,
        std_error=std_error,
        ranges=ranges,
        alpha=alpha,
        df_error=df_error,
    )
