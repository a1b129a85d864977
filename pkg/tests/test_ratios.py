import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaplab.errors import PositivityError
from gaplab.expr import parse_sequence
from gaplab.ratios import (
    check_candidate,
    estimate_r,
    gap_bound_report,
    prime_ratio_scan,
    ratio_comparison,
    ratio_excess,
    summability_probe,
)

from oracles import brute_force_scan, mp_ratio_excess


def expr(text: str):
    return parse_sequence(text)


# ---------------------------------------------------------------------------
# ratio excess


def test_excess_for_inverse_square_has_closed_form():
    # b = 1/n^2: e_n = ln(n) (2 + 1/n)
    got = ratio_excess(expr("1/(n^2)"), 100)
    assert math.isclose(got, math.log(100) * (2 + 1 / 100), rel_tol=1e-12)


def test_excess_constant_sequence_is_exactly_zero():
    for n in (2, 10, 1024):
        assert ratio_excess(expr("1"), n) == 0.0


def test_excess_log_square_family_near_two():
    got = ratio_excess(expr("1/ln(n)^2"), 10**4)
    assert abs(got - 2.0) < 1e-3
    assert math.isclose(got, mp_ratio_excess(lambda x: 1 / mpmath.ln(x) ** 2, 10**4), rel_tol=1e-10)


def test_excess_remainder_bound_for_log_square():
    # |e_n - 2| <= 5/n for n >= 10 in this family (oracle-checked margin)
    for n in (10, 37, 100, 1024, 2**14, 2**20):
        assert abs(ratio_excess(expr("1/ln(n)^2"), n) - 2.0) <= 5.0 / n


def test_excess_needs_n_at_least_two():
    with pytest.raises(ValueError):
        ratio_excess(expr("1/n"), 1)


def test_excess_propagates_positivity():
    with pytest.raises(PositivityError):
        ratio_excess(expr("n-10"), 8)


# ---------------------------------------------------------------------------
# extrapolation


def test_estimate_log_square_family():
    diag = estimate_r(expr("1/ln(n)^2"), 2**20)
    assert isinstance(diag.r_estimate, float)
    assert abs(diag.r_estimate - 2.0) <= 0.01
    assert diag.remainder_trend == "shrinking"
    assert diag.samples[-1][0] == 2**20


def test_estimate_log_3_5_family():
    diag = estimate_r(expr("1/ln(n)^3.5"), 2**20)
    assert abs(diag.r_estimate - 3.5) <= 0.02


def test_estimate_inverse_square_is_divergent():
    diag = estimate_r(expr("1/(n^2)"), 2**20)
    assert diag.r_estimate == "divergent"
    assert diag.remainder_trend == "growing"


def test_estimate_constant_is_exactly_zero():
    diag = estimate_r(expr("1"), 2**12)
    assert diag.r_estimate == 0.0
    assert all(e == 0.0 for _, e in diag.samples)


def test_estimate_requires_minimum_range():
    with pytest.raises(ValueError):
        estimate_r(expr("1/n"), 63)


def test_extrapolation_table_carries_differences():
    diag = estimate_r(expr("1/ln(n)^2"), 2**10)
    assert diag.extrapolation_table[0][2] is None
    for (n1, e1, _), (n2, e2, d2) in zip(diag.extrapolation_table, diag.extrapolation_table[1:]):
        assert n2 == 2 * n1
        assert d2 == e2 - e1


# ---------------------------------------------------------------------------
# second-kind ratio comparison


def test_comparison_equal_sequences_hold_trivially():
    res = ratio_comparison(expr("1/n"), expr("1/n"), 2, 500)
    assert res.holds_on_range
    assert res.summary() == "holds on range"


def test_comparison_inverse_square_dominates_harmonic():
    res = ratio_comparison(expr("1/(n^2)"), expr("1/n"), 2, 10**4)
    assert res.holds_on_range


def test_comparison_first_violation_is_reported():
    res = ratio_comparison(expr("1/n"), expr("1/(n^2)"), 2, 100)
    assert not res.holds_on_range
    assert res.first_violation == 2
    assert res.summary() == "first violation at n=2"


def test_comparison_range_validation():
    with pytest.raises(ValueError):
        ratio_comparison(expr("1/n"), expr("1/n"), 1, 10)
    with pytest.raises(ValueError, match="empty"):
        ratio_comparison(expr("1/n"), expr("1/n"), 10, 9)


def test_comparison_consequence_transfers_geometric_decay():
    # if a's ratio dominates b's on the range and b's dyadic increments
    # shrink geometrically, a's must as well
    a, b = expr("1/(n^3)"), expr("1/(n^2)")
    assert ratio_comparison(a, b, 2, 2**13).holds_on_range
    pa = summability_probe(a, 2**13)
    pb = summability_probe(b, 2**13)
    assert pb.geometric_decay
    assert pa.geometric_decay


# ---------------------------------------------------------------------------
# summability probe


@pytest.mark.parametrize(
    "text,verdict",
    [
        ("1/(n^2)", "converging-evidence"),
        ("1/(n*ln(n)^2)", "converging-evidence"),
        ("1/(n^3)", "converging-evidence"),
        ("1/(n^1.5)", "converging-evidence"),
        ("1/(n*ln(n))", "diverging-evidence"),
        ("1/ln(n)^2", "diverging-evidence"),
        ("1/n", "diverging-evidence"),
        ("n", "diverging-evidence"),
    ],
)
def test_probe_verdicts(text, verdict):
    assert summability_probe(expr(text), 2**14).verdict == verdict


def test_probe_partial_sums_and_increments_are_consistent():
    probe = summability_probe(expr("1/(n^2)"), 2**12)
    sums = dict(probe.partial_sums)
    for n, inc in probe.increments:
        assert math.isclose(inc, sums[n] - sums[n // 2], rel_tol=1e-12)
    # converging toward pi^2/6 - 1
    assert abs(sums[2**12] - (math.pi**2 / 6 - 1)) < 1e-3


def test_probe_never_claims_proof():
    probe = summability_probe(expr("1/(n^2)"), 2**10)
    assert "not a proof" in probe.method
    assert probe.reference_comparisons["convergent_reference"]["holds_on_tail"]


def test_probe_range_validation():
    with pytest.raises(ValueError):
        summability_probe(expr("1/n"), 1023)


# ---------------------------------------------------------------------------
# combined candidate check


def test_log_square_fails_only_summability():
    rep = check_candidate(expr("1/ln(n)^2"), r=2.0, n_max=2**16)
    assert not rep.candidate
    assert rep.ratio_axis_pass
    assert not rep.summability_axis_pass
    assert rep.failed_axes == ("summability",)


def test_inverse_square_fails_only_ratio():
    rep = check_candidate(expr("1/(n^2)"), r=2.0, n_max=2**16)
    assert not rep.candidate
    assert rep.failed_axes == ("ratio",)
    assert rep.summability.verdict == "converging-evidence"


def test_n_log_square_fails_only_ratio():
    rep = check_candidate(expr("1/(n*ln(n)^2)"), r=2.0, n_max=2**16)
    assert not rep.candidate
    assert rep.failed_axes == ("ratio",)
    # e_n grows like ln n + 2 here, so the deviation from 2 is the ln
    assert rep.max_excess_deviation > 5


def test_candidate_check_validation():
    with pytest.raises(ValueError):
        check_candidate(expr("1/n"), r=0.0)
    with pytest.raises(ValueError):
        check_candidate(expr("1/n"), r=2.0, n0=100, n_max=50)


# ---------------------------------------------------------------------------
# prime-ratio scan


def test_scan_tiny_range_matches_hand_computation():
    report = prime_ratio_scan(2.0, 0.0, 12)
    hits = list(report.iter_hits())
    assert [h[0] for h in hits] == [2, 3]
    # n=2: 5/3 < 1 + 2/(2 ln 2); n=3: 7/5 < 1 + 2/(3 ln 3); n=4 misses
    assert math.isclose(hits[0][4], 3 * 2 / (2 * math.log(2)), rel_tol=1e-12)
    assert report.min_gap_among_hits == 2


def test_scan_limit_30(oracle_primes_1m):
    report = prime_ratio_scan(2.0, 0.0, 30)
    hits = list(report.iter_hits())
    oracle = brute_force_scan(oracle_primes_1m, 2.0, 0.0, 30)
    assert [(n, p, q, g) for n, p, q, g, _t, _b in hits] == oracle
    assert all(g == 2 for _n, _p, _q, g, _t, _b in hits)
    # thresholds sit in (2, 3.1] from n=3 on; the n=2 threshold is 4.328
    assert all(2 < t <= 3.1 for n, _p, _q, _g, t, _b in hits if n >= 3)
    assert math.isclose(hits[0][4], 4.328085122666891, rel_tol=1e-12)


def test_scan_matches_brute_force_oracle(oracle_primes_1m):
    report = prime_ratio_scan(3.0, 0.25, 10**4)
    oracle = brute_force_scan(oracle_primes_1m, 3.0, 0.25, 10**4)
    assert [(n, p, q, g) for n, p, q, g, _t, _b in report.iter_hits()] == oracle


def test_scan_thresholds_bound_the_gaps():
    report = prime_ratio_scan(2.0, 0.0, 10**5)
    assert (report.hits_gap < report.hits_threshold).all()


def test_weak_strength_yields_no_hits():
    report = prime_ratio_scan(0.001, 0.0, 10**6)
    assert report.hit_count == 0
    assert report.min_gap_among_hits is None
    assert report.tail_min_gap == []


def test_scan_validation():
    with pytest.raises(ValueError):
        prime_ratio_scan(0.0, 0.0, 100)
    with pytest.raises(ValueError):
        prime_ratio_scan(2.0, -0.1, 100)
    with pytest.raises(ValueError, match="n ln n vanishes"):
        prime_ratio_scan(2.0, 0.0, 100, n_lo=1)
    with pytest.raises(ValueError, match="too small"):
        prime_ratio_scan(2.0, 0.0, 5, n_lo=100)


def test_borderline_hits_are_flagged():
    # tune r so the n=2 inequality is satisfied by a hair: the hit must be
    # flagged borderline; nudge the other way and the hit disappears
    r_star = (5 / 3 - 1) * 2 * math.log(2)
    just_over = prime_ratio_scan(r_star * (1 + 1e-13), 0.0, 12)
    twos = [h for h in just_over.iter_hits() if h[0] == 2]
    assert len(twos) == 1 and twos[0][5] is True
    assert just_over.borderline_count >= 1
    just_under = prime_ratio_scan(r_star * (1 - 1e-13), 0.0, 12)
    assert all(h[0] != 2 for h in just_under.iter_hits())


def test_tail_min_gap_is_suffix_minimum():
    report = prime_ratio_scan(6.0, 0.0, 10**4)
    for checkpoint, tail_min in report.tail_min_gap:
        mask = report.hits_n >= checkpoint
        assert tail_min == int(report.hits_gap[mask].min())


@settings(max_examples=12, deadline=None)
@given(
    r1=st.floats(min_value=0.1, max_value=6.0),
    r2=st.floats(min_value=0.1, max_value=6.0),
    eps=st.floats(min_value=0.0, max_value=1.0),
)
def test_hit_sets_are_monotone_in_strength(r1, r2, eps):
    lo, hi = sorted((r1, r2))
    weak = prime_ratio_scan(lo, eps, 10**5)
    strong = prime_ratio_scan(hi, eps, 10**5)
    assert set(weak.hits_n.tolist()) <= set(strong.hits_n.tolist())
    wider = prime_ratio_scan(lo, eps + 0.5, 10**5)
    assert set(weak.hits_n.tolist()) <= set(wider.hits_n.tolist())


def test_scan_deterministic_across_threads():
    a = prime_ratio_scan(2.0, 0.0, 10**5)
    b = prime_ratio_scan(2.0, 0.0, 10**5, segment_size=1000, threads=8)
    assert np.array_equal(a.hits_n, b.hits_n)
    assert np.array_equal(a.hits_threshold, b.hits_threshold)


# ---------------------------------------------------------------------------
# gap-bound reporter


def test_gap_bound_statement_and_ceiling():
    summary = gap_bound_report(2.0, 0.0, 10**6)
    assert summary.scan.min_gap_among_hits == 2
    assert summary.implied_bound == 5  # ceil(4.3281), the n=2 threshold
    assert "not a proof" in summary.statement


def test_gap_bound_without_hits():
    summary = gap_bound_report(0.001, 0.0, 10**5)
    assert summary.implied_bound is None
    assert "No index" in summary.statement
