import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy import special, stats as sps

from genome_kit.stats import regularized_incomplete_beta, significance_test, student_t_sf


@pytest.mark.parametrize("x,a,b", [
    (0.1, 0.5, 0.5), (0.5, 2.0, 3.0), (0.9, 10.0, 0.5), (0.001, 3.0, 0.5),
    (0.999, 0.5, 40.0), (0.3, 100.0, 100.0), (0.7, 1.0, 1.0),
])
def test_incomplete_beta_against_scipy(x, a, b):
    assert regularized_incomplete_beta(x, a, b) == pytest.approx(special.betainc(a, b, x), abs=1e-12)


@settings(max_examples=200)
@given(st.floats(0, 1), st.floats(0.05, 60), st.floats(0.05, 60))
def test_incomplete_beta_property(x, a, b):
    got = regularized_incomplete_beta(x, a, b)
    assert got == pytest.approx(special.betainc(a, b, x), abs=1e-9)
    if 1 - (1 - x) == x:  # reflection is only meaningful when 1 - x is exact
        assert got + regularized_incomplete_beta(1 - x, b, a) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("args", [(0.5, 0.0, 1.0), (0.5, 1.0, -1.0), (1.5, 1.0, 1.0), (-0.1, 1.0, 1.0)])
def test_incomplete_beta_domain(args):
    with pytest.raises(ValueError):
        regularized_incomplete_beta(*args)


@pytest.mark.parametrize("t,df", [(0.5, 3), (-2.0, 7.5), (4.0, 1), (12.0, 30)])
def test_t_tail(t, df):
    assert student_t_sf(t, df) == pytest.approx(sps.t.sf(t, df), abs=1e-12)


samples = st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=12)


@settings(max_examples=100)
@given(samples, samples)
def test_welch_antisymmetric(a, b):
    ab = significance_test(a, b)
    ba = significance_test(b, a)
    assert ab.p == pytest.approx(ba.p, abs=1e-12)
    if math.isfinite(ab.t):
        assert ab.t == pytest.approx(-ba.t, abs=1e-9)


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=3, max_size=12))
def test_paired_matches_scipy(pairs):
    a, b = [p[0] for p in pairs], [p[1] for p in pairs]
    ours = significance_test(a, b, "paired")
    d = [x - y for x, y in pairs]
    if max(d) - min(d) < 1e-6:
        return
    ref = sps.ttest_rel(a, b)
    assert ours.t == pytest.approx(ref.statistic, rel=1e-6, abs=1e-9)
    assert ours.p == pytest.approx(ref.pvalue, abs=1e-9)


def test_zero_variance_nonzero_difference():
    r = significance_test([1, 1, 1], [2, 2, 2])
    assert r.t == -math.inf and r.p == 0.0 and r.infinite
    assert significance_test([3, 3], [1, 1], "paired").t == math.inf


def test_identical_samples():
    r = significance_test([4, 5, 6], [4, 5, 6], "paired")
    assert (r.t, r.p) == (0.0, 1.0)


@pytest.mark.parametrize("args,kwargs", [
    (([1], [1, 2]), {}),
    (([1, 2], [1, 2, 3]), {"mode": "paired"}),
    (([1, 2], [3, 4]), {"mode": "anova"}),
    (([1, 2], [3, 5]), {"alternative": "sideways"}),
])
def test_invalid_inputs(args, kwargs):
    with pytest.raises(ValueError):
        significance_test(*args, **kwargs)


def test_one_sided_tails():
    a, b = [31, 18, 8, 5, 7, 8, 10], [48, 29, 17, 14, 11, 13, 17]
    less = significance_test(a, b, "paired", alternative="less")
    ref = sps.ttest_rel(a, b, alternative="less")
    assert less.p == pytest.approx(ref.pvalue, abs=1e-12)
    assert significance_test(a, b, "paired", alternative="greater").p == pytest.approx(1 - less.p, abs=1e-12)


def test_answered_counts_give_reported_statistic():
    # per-asker answered counts before and after enrichment
    r = significance_test([31, 18, 8, 5, 7, 8, 10], [48, 29, 17, 14, 11, 13, 17], "paired", alternative="less")
    assert round(r.t, 2) == -5.40
    assert round(r.p, 5) == 0.00083
