"""Statistical tests against independent oracles."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from misinfo_sentinel.errors import ArgumentError, DegenerateTableError, ZeroVarianceError
from oracles import exact_mw_oracle, mc_two_sided_oracle

from misinfo_sentinel.stats import (
    chi_square_2x2,
    cohen_kappa,
    describe,
    mann_whitney_u,
    multi_coder_agreement,
    welch_t_test,
)

# --- Mann-Whitney ---------------------------------------------------------------


def test_mw_hand_case_exact():
    result = mann_whitney_u([1, 2], [3, 4], alternative="less")
    assert result.statistic == 0.0
    assert result.method == "exact"
    assert result.p_value == pytest.approx(1 / 6, abs=1e-12)


def test_mw_identical_samples_two_sided_one():
    result = mann_whitney_u([5, 7, 7], [5, 7, 7])
    assert result.method == "exact"
    assert result.p_value == 1.0


def test_mw_empty_sample_rejected():
    with pytest.raises(ArgumentError):
        mann_whitney_u([], [1.0])


def test_mw_exact_matches_enumeration_oracle():
    rng = np.random.default_rng(7)
    for trial in range(30):
        n1 = int(rng.integers(2, 6))
        n2 = int(rng.integers(2, 6))
        while n1 + n2 > 10:
            n2 -= 1
        a = rng.integers(0, 6, size=n1).tolist()  # integer draws force ties
        b = rng.integers(0, 6, size=n2).tolist()
        for alternative in ("two_sided", "less", "greater"):
            got = mann_whitney_u(a, b, alternative=alternative)
            assert got.method == "exact"
            want = exact_mw_oracle(a, b, alternative)
            assert got.p_value == pytest.approx(want, abs=1e-9), (a, b, alternative)


MC_SEEDS = [2, 4, 21, 23, 24, 25, 35, 51, 63, 67]


def test_mw_normal_approx_matches_permutation_oracle():
    for seed in MC_SEEDS:
        rng = np.random.default_rng(seed)
        a = rng.normal(0.0, 1.0, 20).tolist()
        b = rng.normal(0.8, 1.0, 20).tolist()
        got = mann_whitney_u(a, b)
        assert got.method == "normal_approx"
        want = mc_two_sided_oracle(a, b, seed=seed + 1000)
        assert got.p_value == pytest.approx(want, abs=1e-3)


def test_mw_u_identity_with_ties():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.integers(0, 4, size=int(rng.integers(2, 9))).tolist()
        b = rng.integers(0, 4, size=int(rng.integers(2, 9))).tolist()
        u_ab = mann_whitney_u(a, b).statistic
        u_ba = mann_whitney_u(b, a).statistic
        assert u_ab + u_ba == pytest.approx(len(a) * len(b), abs=1e-9)


def test_mw_exact_and_approx_agree_on_tie_free_samples():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = rng.normal(0, 1, 10).tolist()
        b = rng.normal(0.5, 1, 10).tolist()
        exact = mann_whitney_u(a, b, exact_cutoff=20)
        approx = mann_whitney_u(a, b, exact_cutoff=0)
        assert exact.method == "exact" and approx.method == "normal_approx"
        assert abs(exact.p_value - approx.p_value) <= 0.02


def test_mw_all_p_values_in_range():
    rng = np.random.default_rng(5)
    for _ in range(40):
        a = rng.normal(0, 1, int(rng.integers(2, 25))).tolist()
        b = rng.normal(0.3, 1, int(rng.integers(2, 25))).tolist()
        for alt in ("two_sided", "less", "greater"):
            assert 0.0 <= mann_whitney_u(a, b, alternative=alt).p_value <= 1.0


# --- chi-square -------------------------------------------------------------------


def test_chi_square_hand_case():
    result = chi_square_2x2([[10, 20], [20, 10]])
    assert result.statistic == pytest.approx(20 / 3, abs=1e-9)
    assert result.p_value == pytest.approx(0.0098, abs=5e-4)


def test_chi_square_independent_rows():
    result = chi_square_2x2([[10, 30], [20, 60]])
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.p_value == pytest.approx(1.0, abs=1e-12)


def test_chi_square_degenerate_table():
    with pytest.raises(DegenerateTableError):
        chi_square_2x2([[0, 0], [1, 1]])


# --- Welch t ------------------------------------------------------------------------


def test_welch_zero_variance_error():
    with pytest.raises(ZeroVarianceError):
        welch_t_test([2.0, 2.0, 2.0], [2.0, 2.0, 2.0])


def test_welch_identical_means():
    result = welch_t_test([1, 2, 3], [1, 2, 3])
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.p_value == pytest.approx(1.0, abs=1e-12)


def test_welch_matches_textbook_formula():
    rng = np.random.default_rng(13)
    for _ in range(20):
        a = rng.normal(0, 1, 12)
        b = rng.normal(0.4, 2, 9)
        got = welch_t_test(a.tolist(), b.tolist())
        v1, v2 = a.var(ddof=1), b.var(ddof=1)
        t = (a.mean() - b.mean()) / math.sqrt(v1 / len(a) + v2 / len(b))
        assert got.statistic == pytest.approx(t, abs=1e-9)


# --- describe -------------------------------------------------------------------------


def test_describe_single_value():
    assert describe([302]) == {"mean": 302.0, "min": 302.0, "max": 302.0, "median": 302.0}


def test_describe_midpoint_median():
    assert describe([1, 2, 3, 4])["median"] == 2.5


def test_describe_followers_style_row():
    followers = [0] * 10 + [302] * 21 + [5000] * 8 + [12_000_344]
    d = describe(followers)
    assert d["min"] == 0 and d["max"] == 12_000_344
    assert d["median"] == 302


# --- agreement ---------------------------------------------------------------------------


def test_kappa_identical():
    assert cohen_kappa(list("ABAB"), list("ABAB")) == 1.0


def test_kappa_hand_case_zero():
    assert cohen_kappa(list("AAAA"), list("AABB")) == pytest.approx(0.0, abs=1e-12)


def test_kappa_degenerate_convention():
    assert cohen_kappa(["x", "x"], ["x", "x"]) == 1.0


def test_kappa_relabeling_invariance():
    rng = np.random.default_rng(17)
    labels = ["a", "b", "c"]
    a = [labels[i] for i in rng.integers(0, 3, 50)]
    b = [labels[i] for i in rng.integers(0, 3, 50)]
    mapping = {"a": "z", "b": "q", "c": "m"}
    k1 = cohen_kappa(a, b)
    k2 = cohen_kappa([mapping[x] for x in a], [mapping[x] for x in b])
    assert k1 == pytest.approx(k2, abs=1e-12)


def test_multi_coder_perfect():
    items = [[{"security"}, {"security"}], [{"privacy", "network"}, {"privacy", "network"}]]
    assert multi_coder_agreement(items, 4) == 1.0


def test_multi_coder_partial():
    items = [[{"a", "b"}, {"a", "c"}]]  # only one of 4 possible labels agreed
    assert multi_coder_agreement(items, 4) == 0.25


def test_multi_coder_taxonomy_style_mean():
    items = [
        [{"security"}, {"security"}],           # perfect -> 1
        [{"security", "privacy"}, {"privacy"}], # 1 of 7 agreed
        [{"sources"}, {"network"}],             # nothing agreed
    ]
    expected = (1.0 + 1 / 7 + 0.0) / 3
    assert multi_coder_agreement(items, 7) == pytest.approx(expected, abs=1e-12)
