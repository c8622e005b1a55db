import numpy as np
import pytest

from gatsp.stats.distributions import studentized_range_quantile
from gatsp.stats.dmrt import (
    assign_letters,
    dmrt,
    duncan_alpha,
    duncan_ranges,
    homogeneous_intervals,
    render_letter_run,
)


class TestDuncanRanges:
    def test_protection_levels(self):
        assert duncan_alpha(0.05, 2) == pytest.approx(0.05)
        assert duncan_alpha(0.05, 3) == pytest.approx(1 - 0.95**2)

    def test_reproduces_published_duncan_table(self):
        # Duncan 5% significant ranges at df=20: 2.95, 3.10, 3.18 (p=2,3,4)
        ranges = duncan_ranges(4, 20, 0.05, std_error=1.0)
        assert ranges[0] == pytest.approx(2.95, abs=0.02)
        assert ranges[1] == pytest.approx(3.10, abs=0.02)
        assert ranges[2] == pytest.approx(3.18, abs=0.02)

    def test_ranges_increase_with_span(self):
        ranges = duncan_ranges(8, 30, 0.05, std_error=2.0)
        assert (np.diff(ranges) > 0).all()


class TestAssignLetters:
    def test_two_groups(self):
        assert assign_letters([10.0, 9.9, 5.0], [0.5, 0.6]) == ["a", "a", "b"]

    def test_single_group(self):
        assert assign_letters([5.0, 5.0, 5.0], [0.1, 0.2]) == ["a", "a", "a"]

    def test_overlap_chain(self):
        assert assign_letters([10.0, 9.8, 9.6], [0.3, 0.35]) == ["a", "ab", "b"]

    def test_all_separated(self):
        assert assign_letters([10.0, 8.0, 6.0, 4.0], [1.0, 1.1, 1.2]) == [
            "a",
            "b",
            "c",
            "d",
        ]

    def test_protected_subrange(self):
        # the whole range (span 3) is homogeneous even though the (0,1) pair
        # exceeds R_2: containment protects the narrower comparison
        assert assign_letters([10.0, 9.5, 9.4], [0.4, 0.7]) == ["a", "a", "a"]

    def test_range_abbreviation(self):
        # maximal intervals (0,2), (1,3), (2,4): the middle treatment belongs
        # to three consecutive groups and renders as 'a-c'
        means = [10.0, 9.9, 9.8, 9.7, 9.6]
        letters = assign_letters(means, [0.15, 0.25, 0.28, 0.3])
        assert letters == ["a", "ab", "a-c", "bc", "c"]

    def test_render_letter_run(self):
        assert render_letter_run(0, 0) == "a"
        assert render_letter_run(0, 1) == "ab"
        assert render_letter_run(0, 2) == "a-c"
        assert render_letter_run(1, 3) == "b-d"


def _expand(rendered: str) -> set[str]:
    if "-" in rendered:
        first, last = rendered.split("-")
        return {chr(c) for c in range(ord(first), ord(last) + 1)}
    return set(rendered)


def _pair_nonsignificant(means, ranges, i, j):
    """Declarative Duncan rule: a ranked pair is not significantly different
    iff some ranked interval containing it has extreme difference below the
    interval's least significant range."""
    k = len(means)
    for s in range(0, i + 1):
        for e in range(j, k):
            if s == e or (means[s] - means[e]) < ranges[e - s - 1]:
                return True
    return False


class TestLetterConsistency:
    def test_letters_match_declarative_rule(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            k = int(rng.integers(2, 9))
            means = np.sort(rng.uniform(0, 10, size=k))[::-1]
            base = float(rng.uniform(0.05, 3.0))
            ranges = base * np.cumprod(rng.uniform(1.0, 1.3, size=k - 1))
            letters = assign_letters(means, ranges)
            sets = [_expand(l) for l in letters]
            for i in range(k):
                for j in range(i + 1, k):
                    share = bool(sets[i] & sets[j])
                    expect = _pair_nonsignificant(means, ranges, i, j)
                    assert share == expect, (means, ranges, letters, i, j)

    def test_every_treatment_lettered(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            k = int(rng.integers(2, 9))
            means = np.sort(rng.uniform(0, 10, size=k))[::-1]
            ranges = np.sort(rng.uniform(0.1, 2.0, size=k - 1))
            letters = assign_letters(means, ranges)
            assert all(len(l) >= 1 for l in letters)


class TestDmrt:
    def test_all_equal_single_group(self):
        g = dmrt(["w", "x", "y"], [4.0, 4.0, 4.0], 5, ms_error=1.0, df_error=20)
        assert g.letters == ["a", "a", "a"]

    def test_forced_separation(self):
        g = dmrt(["hi", "lo"], [100.0, 50.0], 4, ms_error=1.0, df_error=20)
        assert g.labels == ["hi", "lo"]
        assert g.letters == ["a", "b"]

    def test_means_sorted_descending(self):
        g = dmrt(["a", "b", "c"], [1.0, 3.0, 2.0], 4, ms_error=0.5, df_error=10)
        assert g.labels == ["b", "c", "a"]
        assert (np.diff(g.means) <= 0).all()

    def test_std_error_and_ranges(self):
        g = dmrt(["a", "b", "c"], [1.0, 3.0, 2.0], 4, ms_error=2.0, df_error=20, alpha=0.05)
        assert g.std_error == pytest.approx(np.sqrt(0.5))
        expect_r2 = studentized_range_quantile(2, 20, 0.05) * g.std_error
        expect_r3 = studentized_range_quantile(3, 20, duncan_alpha(0.05, 3)) * g.std_error
        assert g.ranges[0] == pytest.approx(expect_r2, rel=1e-6)
        assert g.ranges[1] == pytest.approx(expect_r3, rel=1e-6)

    def test_output_formats(self):
        g = dmrt(["hi", "lo"], [100.0, 50.0], 4, ms_error=1.0, df_error=20)
        text = g.to_text(title="Mean offline")
        assert "100.00a" in text and "50.00b" in text
        csv = g.to_csv()
        assert csv.splitlines()[0] == "label,mean,letters"
        assert csv.splitlines()[1] == "hi,100.0,a"

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            dmrt(["a"], [1.0], 4, 1.0, 10)
        with pytest.raises(ValueError):
            dmrt(["a", "b"], [1.0, 2.0], 4, 0.0, 10)
        with pytest.raises(ValueError):
            dmrt(["a", "b"], [1.0, 2.0], 0, 1.0, 10)
        with pytest.raises(ValueError):
            dmrt(["a", "b"], [1.0, 2.0], 4, 1.0, 10, alpha=1.5)


def test_homogeneous_intervals_maximality():
    means = np.array([10.0, 9.8, 9.6])
    intervals = homogeneous_intervals(means, np.array([0.3, 0.35]))
    assert intervals == [(0, 1), (1, 2)]
