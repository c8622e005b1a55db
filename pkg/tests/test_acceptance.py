"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Two criteria assert worked-example values that contradict the construction
rules they are derived from (see notes in the repository's review ledger);
they are implemented exactly as stated and marked as expected failures so
the contradiction stays visible.

Run with: pytest tests/test_acceptance.py -v -s
"""

import itertools
import json
import math
from pathlib import Path

import numpy as np
import pytest

import gatsp
from gatsp import kernels
from gatsp.cli import main as cli_main
from gatsp.instance import same_cycle
from gatsp.report import novelty_comparison
from gatsp.stats.anova import anova, factorial_anova
from gatsp.stats.distributions import f_sf, studentized_range_quantile
from gatsp.stats.dmrt import assign_letters, dmrt

DATA = Path(__file__).parent / "data"


def report(num: int, name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: {status}{suffix}")
    return ok


def test_01_planted_optimum_correctness():
    ok = True
    count = 0
    for seed in range(50):
        n = 3 + seed % 6  # cycles 3..8
        inst = gatsp.generate_instance(n, seed=seed)
        tour, best = gatsp.brute_force_optimum(inst)
        ok = ok and best == inst.optimum
        ok = ok and same_cycle(tour, inst.planted_route[:-1])
        count += 1
    assert report(1, "planted-optimum brute force", ok and count == 50)


@pytest.mark.xfail(
    strict=True,
    reason="the stated worked-example values contradict the construction rules: "
    "the five planted edges are worth 28 each, so the planted profit is 140 "
    "(168 would need six edges), and the 1..5 tour crosses planted edge "
    "{3,4}, giving 118 (the 106 hand-sum treats that edge as off-route)",
)
def test_02_worked_example_values(example_instance):
    planted = gatsp.fitness(example_instance.planted_route[:-1], example_instance)
    identity = gatsp.fitness(np.arange(5), example_instance)
    ok = planted == 168 and identity == 106
    report(2, "worked example (168/106 as stated)", ok,
           f"planted={planted}, tour(1..5)={identity}")
    assert planted == 168
    assert identity == 106


def test_03_cx_degeneracy_fixture():
    a = np.array([6, 2, 0, 3, 4, 7, 9, 1, 8, 5])
    b = np.array([7, 0, 5, 2, 8, 1, 3, 4, 9, 6])
    ca, cb = gatsp.cx(a, b)
    ok = {tuple(ca), tuple(cb)} == {tuple(a), tuple(b)}
    assert report(3, "CX single-cycle degeneracy", ok)


def test_04_operator_closure():
    rng = np.random.Generator(np.random.PCG64(2024))
    violations = 0
    applications = 0
    for n in (5, 10, 50):
        child_a = np.empty(n, dtype=np.int64)
        child_b = np.empty(n, dtype=np.int64)
        for _ in range(11200):
            a = rng.permutation(n).astype(np.int64)
            b = rng.permutation(n).astype(np.int64)
            c1 = int(rng.integers(0, n + 1))
            c2 = int(rng.integers(c1, n + 1))
            kernels.pmx_pair(a, b, c1, c2, child_a, child_b)
            violations += not (
                kernels.is_permutation(child_a, n) and kernels.is_permutation(child_b, n)
            )
            kernels.cx_pair(a, b, child_a, child_b)
            violations += not (
                kernels.is_permutation(child_a, n) and kernels.is_permutation(child_b, n)
            )
            i = int(rng.integers(0, n))
            j = int(rng.integers(i, n))
            mutated = a.copy()
            kernels.invert_segment(mutated, i, j)
            violations += not kernels.is_permutation(mutated, n)
            applications += 3
    ok = violations == 0 and applications >= 100_000
    assert report(4, "operator permutation closure", ok,
                  f"{applications} applications, {violations} violations")


@pytest.mark.xfail(
    strict=True,
    reason="the stated brackets are unattainable on 5-city tours: over all "
    "parent pairs CX creates a child distinct from both parents for 25.8% of "
    "applications (exhaustive enumeration) and PMX for at most ~73% under any "
    "cut distribution; the bracketed percentages match 10-city strings (the "
    "degenerate-input fixture's length), demonstrated in "
    "tests/test_report.py::test_novelty_brackets_hold_at_length_ten",
)
def test_05_novelty_separation_as_stated():
    inst = gatsp.generate_instance(5, seed=1)
    design = gatsp.build_design(n=5, preset="table3-novelty", reps=24)
    table = gatsp.run_sweep(design, inst, master_seed=7)
    rows = novelty_comparison(table)
    ok = all(
        row.pmx_percent >= 90.0
        and 50.0 <= row.cx_percent <= 75.0
        and row.pmx_percent > row.cx_percent
        for row in rows
    )
    pmx_lo = min(r.pmx_percent for r in rows)
    cx_lo = min(r.cx_percent for r in rows)
    cx_hi = max(r.cx_percent for r in rows)
    report(5, "novelty separation on n=5 as stated", ok,
           f"PMX min {pmx_lo:.1f}%, CX range [{cx_lo:.1f}%, {cx_hi:.1f}%]")
    assert ok


def test_06_anova_df_structure():
    inst = gatsp.generate_instance(5, seed=1)
    small = gatsp.run_sweep(
        gatsp.build_design(n=5, preset="table1-small", reps=4), inst, master_seed=2
    )
    small_df = anova(small).df_column
    expected = (3, 1, 1, 4, 4, 1, 4, 4, 4, 4, 16, 4, 4, 16, 16, 16, 297, 399)
    big = gatsp.run_sweep(
        gatsp.build_design(n=5, preset="big", reps=4), inst, master_seed=2
    )
    big_table = anova(big)
    ok = (
        small_df == expected
        and big_table.row("Error").df == 105
        and big_table.row("Total").df == 143
    )
    assert report(6, "ANOVA df bookkeeping", ok, f"small df={small_df}")


def test_07_anova_numeric_oracle():
    rows = [
        ln.split(",")
        for ln in (DATA / "golden_anova_input.csv").read_text().splitlines()[1:]
    ]
    y = [float(r[4]) for r in rows]
    factors = [(name, [r[i] for r in rows]) for i, name in ((0, "a"), (1, "b"), (2, "c"))]
    rep = [int(r[3]) for r in rows]
    mine = factorial_anova(y, factors, rep)
    expected = json.loads((DATA / "golden_anova_expected.json").read_text())
    ok = True
    for source, ref in expected["rows"].items():
        row = mine.row(source)
        ok = ok and row.df == ref["df"]
        ok = ok and math.isclose(row.ss, ref["ss"], rel_tol=1e-8, abs_tol=1e-12)
        if "ms" in ref and row.ms is not None:
            ok = ok and math.isclose(row.ms, ref["ms"], rel_tol=1e-8, abs_tol=1e-12)
        if "f" in ref:
            ok = ok and math.isclose(row.f, ref["f"], rel_tol=1e-8)
            ok = ok and math.isclose(row.p, ref["p"], rel_tol=1e-8, abs_tol=1e-300)

    rng = np.random.default_rng(55)
    for _ in range(25):
        la, lb = int(rng.integers(2, 5)), int(rng.integers(2, 4))
        reps = int(rng.integers(2, 5))
        ys, fa, fb, rp = [], [], [], []
        for ai in range(la):
            for bi in range(lb):
                for r in range(1, reps + 1):
                    ys.append(float(rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 3))))
                    fa.append(ai)
                    fb.append(bi)
                    rp.append(r)
        out = factorial_anova(ys, [("a", fa), ("b", fb)], rp)
        total = out.row("Total").ss
        parts = sum(r.ss for r in out.rows if r.source != "Total")
        ok = ok and math.isclose(parts, total, rel_tol=1e-9, abs_tol=1e-12)
    assert report(7, "ANOVA numeric oracle + additivity", ok)


def test_08_f_distribution_tail():
    p1 = f_sf(4.96, 1, 10)
    p2 = f_sf(4.10, 2, 10)
    ok = abs(p1 - 0.050) <= 0.002 and abs(p2 - 0.050) <= 0.002
    assert report(8, "F upper-tail probabilities", ok, f"p1={p1:.4f}, p2={p2:.4f}")


def test_09_studentized_range():
    q1 = studentized_range_quantile(2, 20, 0.05)
    q2 = studentized_range_quantile(3, 120, 0.05)
    ok = abs(q1 - 2.95) <= 0.02 and abs(q2 - 3.36) <= 0.02
    for df in (10, 30, 120):
        prev = 0.0
        for k in range(2, 11):
            q = studentized_range_quantile(k, df, 0.05)
            ok = ok and q > prev
            prev = q
    assert report(9, "studentized range quantiles", ok, f"q(2,20)={q1:.3f}, q(3,120)={q2:.3f}")


def test_10_dmrt_groupings():
    g1 = dmrt(["p", "q", "r"], [4.0, 4.0, 4.0], 5, ms_error=1.0, df_error=20)
    ok = g1.letters == ["a", "a", "a"]
    g2 = dmrt(["hi", "lo"], [100.0, 50.0], 4, ms_error=1.0, df_error=20)
    ok = ok and g2.letters == ["a", "b"]
    ok = ok and assign_letters([10.0, 9.9, 5.0], [0.5, 0.6]) == ["a", "a", "b"]

    def expand(s):
        if "-" in s:
            first, last = s.split("-")
            return {chr(c) for c in range(ord(first), ord(last) + 1)}
        return set(s)

    def declarative_nonsig(means, ranges, i, j):
        for s in range(0, i + 1):
            for e in range(j, len(means)):
                if s == e or (means[s] - means[e]) < ranges[e - s - 1]:
                    return True
        return False

    rng = np.random.default_rng(77)
    for _ in range(1000):
        k = int(rng.integers(2, 9))
        means = np.sort(rng.uniform(0, 10, size=k))[::-1]
        ranges = float(rng.uniform(0.05, 3.0)) * np.cumprod(
            rng.uniform(1.0, 1.3, size=k - 1)
        )
        letters = [expand(l) for l in assign_letters(means, ranges)]
        for i in range(k):
            for j in range(i + 1, k):
                share = bool(letters[i] & letters[j])
                ok = ok and share == declarative_nonsig(means, ranges, i, j)
    assert report(10, "DMRT letter groupings + consistency", ok)


def test_11_qualitative_crossover_effect():
    inst = gatsp.generate_instance(5, seed=1)
    hits = 0
    for master_seed in (1, 2, 3, 4, 5):
        table = gatsp.run_sweep(
            gatsp.build_design(n=5, preset="table1-small", reps=4),
            inst,
            master_seed=master_seed,
        )
        result = anova(table)
        row = result.row("crossover")
        pmx = np.mean([r.offline for r in table.records if r.crossover == "PMX"])
        cxm = np.mean([r.offline for r in table.records if r.crossover == "CX"])
        hits += row.p < 0.05 and pmx > cxm
    ok = hits >= 4
    assert report(11, "significant crossover effect, PMX > CX", ok, f"{hits}/5 seeds")


def test_12_pipeline_determinism(tmp_path):
    def pipeline(tag: str) -> tuple[bytes, bytes, bytes]:
        d = tmp_path / tag
        d.mkdir()
        inst = d / "inst.txt"
        runs = d / "runs.csv"
        anova_csv = d / "anova.csv"
        dmrt_csv = d / "dmrt.csv"
        assert cli_main(["gen", "--n", "6", "--seed", "11", "--out", str(inst)]) == 0
        assert cli_main([
            "sweep", "--preset", "table3-novelty", "--instance", str(inst),
            "--reps", "3", "--seed", "42", "--threads", "2", "--out", str(runs),
        ]) == 0
        assert cli_main(["anova", "--runs", str(runs), "--csv", str(anova_csv)]) == 0
        assert cli_main([
            "dmrt", "--runs", str(runs), "--factors", "selection,crossover",
            "--csv", str(dmrt_csv),
        ]) == 0
        return runs.read_bytes(), anova_csv.read_bytes(), dmrt_csv.read_bytes()

    first = pipeline("one")
    second = pipeline("two")
    ok = first == second
    assert report(12, "end-to-end byte determinism", ok)
