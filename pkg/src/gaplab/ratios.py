"""Ratio-excess analysis of candidate sequences and the prime-ratio scan.

The central quantity is the ratio excess

    e_n = n ln(n) (b_n / b_{n+1} - 1),

whose limit r (when it exists) measures how fast the term ratio of a
positive sequence approaches 1. Sequences with summable terms AND a
positive finite excess limit are the interesting candidates: given such a
pair (b, r), any positive sequence whose term ratio eventually dominates
b's must itself be summable (ratio comparison, second kind), and because
the sum of prime reciprocals diverges, the contrapositive hands back
infinitely many n with

    p_{n+1} / p_n < 1 + r / (n ln n),

i.e. prime gaps below p_n * r / (n ln n). The scan here makes that
inequality a concrete predicate over sieved primes: the asymptotically
vanishing correction term is replaced by an explicit user epsilon, added
as (r + epsilon)/(n ln n).

Everything reported is finite-range evidence. Convergence of a series and
liminf values are not decidable by any finite computation, and the
verdict fields say so explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import mpmath
import numpy as np

from .accum import DoubleDouble, exact_block_sum
from .expr import (
    SequenceExpr,
    eval_array,
    eval_sequence_mp,
    format_sequence,
    parse_sequence,
)
from .gaps import iter_gap_blocks

__all__ = [
    "RatioDiagnostics",
    "ComparisonResult",
    "SummabilityVerdict",
    "CandidateReport",
    "ScanReport",
    "GapBoundSummary",
    "ratio_excess",
    "estimate_r",
    "ratio_comparison",
    "summability_probe",
    "check_candidate",
    "prime_ratio_scan",
    "gap_bound_report",
]

# Reference series for the second-kind comparison: the slowest standard
# convergent/divergent pair in the n ln n family.
CONVERGENT_REFERENCE = "1/(n*ln(n)^2)"
DIVERGENT_REFERENCE = "1/(n*ln(n))"

EXCESS_DPS = 35          # working precision for scalar excess samples
SCAN_DPS = 40            # working precision for borderline scan re-checks
DECAY_WINDOW = 6         # dyadic difference ratios inspected for decay
DECAY_FACTOR = 1.5       # required shrink factor per doubling
DIVERGE_FACTOR = 1.25    # difference ratios below this are non-decaying
TREND_WINDOW = 6         # samples inspected for the remainder trend
INCREMENT_WINDOW = 5     # dyadic sum increments inspected by the probe
RECHECK_BAND = 1e-9      # float64 margins inside this band go to mpmath
BORDERLINE_REL = 1e-12   # hits with relative margin below this are flagged


# ---------------------------------------------------------------------------
# ratio excess and its extrapolation


def ratio_excess(expr: SequenceExpr, n: int) -> float:
    """e_n = n ln(n) (b(n)/b(n+1) - 1), computed in extended precision.

    Requires n >= 2 (n ln n vanishes at 1) and positive values at n and
    n + 1.
    """
    if n < 2:
        raise ValueError(f"ratio excess needs n >= 2, got {n}")
    with mpmath.workdps(EXCESS_DPS):
        v1 = eval_sequence_mp(expr, n)
        v2 = eval_sequence_mp(expr, n + 1)
        nn = mpmath.mpf(n)
        return float(nn * mpmath.ln(nn) * (v1 / v2 - 1))


def _dyadic_range(lo: int, hi: int) -> list[int]:
    out = []
    c = 1
    while c < lo:
        c *= 2
    while c <= hi:
        out.append(c)
        c *= 2
    return out


@dataclass
class RatioDiagnostics:
    """Dyadic samples of the ratio excess and what they extrapolate to.

    r_estimate is the last sample when successive dyadic differences
    shrink by at least DECAY_FACTOR per doubling, the string "divergent"
    when the samples grow without bound, and None when neither pattern is
    established. remainder_trend classifies |e_n - r_reference| over the
    trailing dyadic window as shrinking, flat or growing; when
    r_reference is None it reflects the samples themselves.
    """

    samples: list[tuple[int, float]]
    r_estimate: float | str | None
    extrapolation_table: list[tuple[int, float, float | None]]
    remainder_trend: str
    r_reference: float | None = None


def _classify_trend(rems: list[float], scale: float) -> str:
    window = rems[-TREND_WINDOW:]
    if len(window) < 2:
        return "flat"
    if all(x <= 1e-12 * scale for x in window):
        return "shrinking"
    decreasing = all(b < a for a, b in zip(window, window[1:]))
    increasing = all(b > a for a, b in zip(window, window[1:]))
    if decreasing and window[-1] <= 0.8 * window[0]:
        return "shrinking"
    if increasing and window[-1] >= 1.2 * window[0]:
        return "growing"
    return "flat"


def _diff_ratios(diffs: list[float]) -> list[float]:
    ratios = []
    for a, b in zip(diffs, diffs[1:]):
        if b == 0.0:
            ratios.append(math.inf)  # exact stall counts as decayed
        else:
            ratios.append(abs(a) / abs(b))
    return ratios


def _estimate_from_samples(samples: list[tuple[int, float]]) -> float | str | None:
    values = [e for _, e in samples]
    diffs = [b - a for a, b in zip(values, values[1:])]
    if len(diffs) < 3:
        return None
    ratios = _diff_ratios(diffs)
    tail = ratios[-DECAY_WINDOW:]
    if all(q >= DECAY_FACTOR for q in tail):
        return values[-1]
    mags = [abs(v) for v in values[-(DECAY_WINDOW + 1):]]
    growing = all(b > a for a, b in zip(mags, mags[1:]))
    if growing and all(q <= DIVERGE_FACTOR for q in tail):
        return "divergent"
    return None


def _diagnose(
    samples: list[tuple[int, float]], r_reference: float | None
) -> RatioDiagnostics:
    values = [e for _, e in samples]
    diffs: list[float | None] = [None] + [b - a for a, b in zip(values, values[1:])]
    table = [(n, e, d) for (n, e), d in zip(samples, diffs)]
    estimate = _estimate_from_samples(samples)

    if r_reference is not None:
        ref: float | None = r_reference
    elif isinstance(estimate, float):
        ref = estimate
    else:
        ref = None

    if ref is not None:
        rems = [abs(e - ref) for e in values]
        trend = _classify_trend(rems, max(1.0, abs(ref)))
    elif estimate == "divergent":
        trend = "growing"
    else:
        trend = "flat"

    return RatioDiagnostics(
        samples=samples,
        r_estimate=estimate,
        extrapolation_table=table,
        remainder_trend=trend,
        r_reference=r_reference,
    )


def estimate_r(expr: SequenceExpr, n_max: int) -> RatioDiagnostics:
    """Extrapolate the ratio-excess limit from dyadic samples up to n_max.

    Dyadic sampling with a geometric-decay acceptance test: honest and
    reproducible, no curve fitting. Requires n_max >= 64.
    """
    if n_max < 64:
        raise ValueError(f"n_max must be >= 64, got {n_max}")
    samples = [(n, ratio_excess(expr, n)) for n in _dyadic_range(2, n_max)]
    return _diagnose(samples, r_reference=None)


# ---------------------------------------------------------------------------
# second-kind (ratio) comparison


@dataclass
class ComparisonResult:
    """Pointwise outcome of a(n)/a(n+1) >= b(n)/b(n+1) on [n_lo, n_hi]."""

    n_lo: int
    n_hi: int
    holds: np.ndarray
    first_violation: int | None
    last_violation: int | None
    violation_count: int

    @property
    def holds_on_range(self) -> bool:
        return self.violation_count == 0

    def summary(self) -> str:
        if self.holds_on_range:
            return "holds on range"
        return f"first violation at n={self.first_violation}"


_CHUNK = 1 << 20


def _chunks(n_lo: int, n_hi: int) -> Iterator[tuple[int, int]]:
    lo = n_lo
    while lo <= n_hi:
        yield lo, min(lo + _CHUNK - 1, n_hi)
        lo += _CHUNK


def ratio_comparison(
    a: SequenceExpr, b: SequenceExpr, n_lo: int, n_hi: int
) -> ComparisonResult:
    """Compare term ratios of two positive sequences pointwise.

    The comparison test of the second kind: if a's term ratio dominates
    b's from some point on and b has a convergent sum, then a does too.
    This is the finite-range report that feeds that argument.
    """
    if n_lo < 2:
        raise ValueError(f"comparison range must start at n >= 2, got {n_lo}")
    if n_hi < n_lo:
        raise ValueError(f"empty comparison range [{n_lo}, {n_hi}]")
    holds = np.zeros(n_hi - n_lo + 1, dtype=bool)
    for lo, hi in _chunks(n_lo, n_hi):
        ns = np.arange(lo, hi + 2, dtype=np.int64)
        va = eval_array(a, ns)
        vb = eval_array(b, ns)
        ra = va[:-1] / va[1:]
        rb = vb[:-1] / vb[1:]
        holds[lo - n_lo : hi - n_lo + 1] = ra >= rb
    violations = np.flatnonzero(~holds)
    return ComparisonResult(
        n_lo=n_lo,
        n_hi=n_hi,
        holds=holds,
        first_violation=int(violations[0]) + n_lo if violations.size else None,
        last_violation=int(violations[-1]) + n_lo if violations.size else None,
        violation_count=int(violations.size),
    )


# ---------------------------------------------------------------------------
# summability probe


_PROBE_METHOD = (
    "Finite-range heuristic, not a proof. Partial sums start at n=2. "
    "converging-evidence: term-ratio comparison against the convergent "
    f"reference {CONVERGENT_REFERENCE} holds outside the first eighth of the "
    "range AND dyadic partial-sum increments are strictly decreasing over the "
    f"last {INCREMENT_WINDOW} doublings. diverging-evidence: the divergent "
    f"reference {DIVERGENT_REFERENCE} dominates the sequence's term ratio on "
    "the same tail, or the increments fail to shrink at all. Anything mixed "
    "is inconclusive."
)


@dataclass
class SummabilityVerdict:
    """Labeled evidence about convergence of the term sum; never a proof."""

    verdict: str  # converging-evidence | diverging-evidence | inconclusive
    partial_sums: list[tuple[int, float]]
    increments: list[tuple[int, float]]
    geometric_decay: bool
    reference_comparisons: dict[str, dict]
    method: str = _PROBE_METHOD


def _comparison_summary(res: ComparisonResult, expr_text: str, tail_start: int) -> dict:
    holds_on_tail = res.last_violation is None or res.last_violation < tail_start
    return {
        "expression": expr_text,
        "holds_on_range": res.holds_on_range,
        "holds_on_tail": holds_on_tail,
        "tail_start": tail_start,
        "first_violation": res.first_violation,
        "last_violation": res.last_violation,
        "violation_count": res.violation_count,
    }


def summability_probe(
    expr: SequenceExpr, n_max: int
) -> SummabilityVerdict:
    """Gather convergence evidence for the sum of expr over n >= 2.

    Requires n_max >= 1024 so the dyadic windows have something to say.
    """
    if n_max < 1024:
        raise ValueError(f"n_max must be >= 1024, got {n_max}")

    checkpoints = _dyadic_range(2, n_max)
    if checkpoints[-1] != n_max:
        checkpoints.append(n_max)
    acc = DoubleDouble()
    sums: list[tuple[int, float]] = []
    prev = 2
    for cp in checkpoints:
        for lo, hi in _chunks(prev, cp):
            ns = np.arange(lo, hi + 1, dtype=np.int64)
            acc.add(*exact_block_sum(eval_array(expr, ns)))
        sums.append((cp, acc.value()))
        prev = cp + 1

    dyadic_sums = [(n, s) for n, s in sums if n & (n - 1) == 0]
    increments = [
        (dyadic_sums[i + 1][0], dyadic_sums[i + 1][1] - dyadic_sums[i][1])
        for i in range(len(dyadic_sums) - 1)
    ]
    inc_tail = [v for _, v in increments[-INCREMENT_WINDOW:]]
    decreasing = all(b < a for a, b in zip(inc_tail, inc_tail[1:]))
    nondecreasing = all(b >= a for a, b in zip(inc_tail, inc_tail[1:]))
    geometric = all(
        b != 0 and a / b >= DECAY_FACTOR for a, b in zip(inc_tail, inc_tail[1:])
    )

    tail_start = max(16, n_max // 8)
    conv_ref = parse_sequence(CONVERGENT_REFERENCE)
    div_ref = parse_sequence(DIVERGENT_REFERENCE)
    conv_cmp = ratio_comparison(expr, conv_ref, 2, n_max)
    div_cmp = ratio_comparison(div_ref, expr, 2, n_max)
    comparisons = {
        "convergent_reference": _comparison_summary(conv_cmp, CONVERGENT_REFERENCE, tail_start),
        "divergent_reference": _comparison_summary(div_cmp, DIVERGENT_REFERENCE, tail_start),
    }

    conv_ok = comparisons["convergent_reference"]["holds_on_tail"] and decreasing
    div_ok = comparisons["divergent_reference"]["holds_on_tail"] or nondecreasing
    if conv_ok and not div_ok:
        verdict = "converging-evidence"
    elif div_ok and not conv_ok:
        verdict = "diverging-evidence"
    else:
        verdict = "inconclusive"

    return SummabilityVerdict(
        verdict=verdict,
        partial_sums=sums,
        increments=increments,
        geometric_decay=geometric,
        reference_comparisons=comparisons,
    )


# ---------------------------------------------------------------------------
# combined candidate check


@dataclass
class CandidateReport:
    """Both axes of the candidate question, reported independently.

    A sequence qualifies as a candidate pair with its r only when the
    ratio axis passes (remainder trend shrinking, so e_n -> r is
    plausible) AND the summability axis passes (converging evidence).
    The axes are deliberately independent: families that nail the ratio
    expansion tend to fail summability and vice versa, and the report
    must expose that tension rather than bury it.
    """

    expression: str
    r: float
    n0: int
    n_max: int
    diagnostics: RatioDiagnostics
    max_excess_deviation: float
    summability: SummabilityVerdict
    ratio_axis_pass: bool
    summability_axis_pass: bool
    candidate: bool
    failed_axes: tuple[str, ...]


def check_candidate(
    expr: SequenceExpr, r: float, n0: int = 2, n_max: int = 1 << 16
) -> CandidateReport:
    """Judge (expr, r) on the ratio axis and the summability axis."""
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if not 2 <= n0 < n_max:
        raise ValueError(f"need 2 <= n0 < n_max, got n0={n0}, n_max={n_max}")
    samples = [(n, ratio_excess(expr, n)) for n in _dyadic_range(max(n0, 2), n_max)]
    if len(samples) < 4:
        raise ValueError(f"range [{n0}, {n_max}] contains too few dyadic sample points")
    diagnostics = _diagnose(samples, r_reference=r)
    max_dev = max(abs(e - r) for _, e in samples)
    summability = summability_probe(expr, n_max)

    ratio_axis = diagnostics.remainder_trend == "shrinking"
    summ_axis = summability.verdict == "converging-evidence"
    failed = tuple(
        name
        for name, ok in (("ratio", ratio_axis), ("summability", summ_axis))
        if not ok
    )
    return CandidateReport(
        expression=format_sequence(expr),
        r=r,
        n0=n0,
        n_max=n_max,
        diagnostics=diagnostics,
        max_excess_deviation=max_dev,
        summability=summability,
        ratio_axis_pass=ratio_axis,
        summability_axis_pass=summ_axis,
        candidate=ratio_axis and summ_axis,
        failed_axes=failed,
    )


# ---------------------------------------------------------------------------
# prime-ratio scan


@dataclass
class ScanReport:
    """Indices where p_{n+1}/p_n < 1 + (r + epsilon)/(n ln n).

    threshold[i] = p_n (r + epsilon)/(n ln n) is the gap bound implied at
    hit i: the hit condition is exactly g_n < threshold. Hits whose
    relative margin is below BORDERLINE_REL are flagged borderline and
    surfaced separately; their classification is knife-edge by any
    arithmetic. tail_min_gap is the running minimum of the hit gaps from
    each dyadic checkpoint onward, the finite-range proxy for a liminf.
    """

    r: float
    epsilon: float
    limit: int
    n_lo: int
    n_hi: int
    hit_count: int
    hits_n: np.ndarray
    hits_p: np.ndarray
    hits_gap: np.ndarray
    hits_threshold: np.ndarray
    hits_borderline: np.ndarray
    min_gap_among_hits: int | None
    max_threshold_among_hits: float | None
    tail_min_gap: list[tuple[int, int]] = field(default_factory=list)

    @property
    def borderline_count(self) -> int:
        return int(np.count_nonzero(self.hits_borderline))

    def iter_hits(self) -> Iterator[tuple[int, int, int, int, float, bool]]:
        for i in range(self.hit_count):
            n = int(self.hits_n[i])
            p = int(self.hits_p[i])
            g = int(self.hits_gap[i])
            yield n, p, p + g, g, float(self.hits_threshold[i]), bool(self.hits_borderline[i])


def _recheck_mp(n: int, p: int, g: int, r: float, epsilon: float) -> tuple[bool, bool]:
    """Extended-precision hit decision for knife-edge margins.

    Returns (is_hit, is_borderline). The left side p_{n+1}/p_n is an
    exact rational; only ln needs rounding, at SCAN_DPS digits.
    """
    with mpmath.workdps(SCAN_DPS):
        lhs = mpmath.mpf(p + g) / p
        rhs = 1 + (mpmath.mpf(r) + mpmath.mpf(epsilon)) / (n * mpmath.ln(n))
        margin = (rhs - lhs) / rhs
        return bool(margin > 0), bool(0 < margin < BORDERLINE_REL)


def prime_ratio_scan(
    r: float,
    epsilon: float = 0.0,
    limit: int = 1_000_000,
    n_lo: int = 2,
    segment_size: int | None = None,
    threads: int = 1,
) -> ScanReport:
    """Scan all prime pairs with p_next <= limit for the ratio inequality.

    Both sides are compared in float64 first; margins within RECHECK_BAND
    are re-decided in extended precision (float64 error is ~1e-16, so any
    margin beyond the band is provably classified identically). The hit
    set is monotone in r and epsilon by construction.
    """
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    if n_lo < 2:
        raise ValueError(f"n ln n vanishes at n = 1: scan must start at n_lo >= 2, got {n_lo}")

    strength = r + epsilon
    ns_out: list[np.ndarray] = []
    ps_out: list[np.ndarray] = []
    gs_out: list[np.ndarray] = []
    th_out: list[np.ndarray] = []
    bl_out: list[np.ndarray] = []
    n_hi = 0
    scanned = 0

    for n0, p, g in iter_gap_blocks(limit, segment_size, threads):
        ns = n0 + np.arange(len(p), dtype=np.int64)
        n_hi = int(ns[-1])
        mask = ns >= n_lo
        if not mask.any():
            continue
        ns_m = ns[mask]
        p_m = p[mask]
        g_m = g[mask]
        scanned += len(ns_m)

        nf = ns_m.astype(np.float64)
        pf = p_m.astype(np.float64)
        gf = g_m.astype(np.float64)
        factor = strength / (nf * np.log(nf))
        rhs = 1.0 + factor
        lhs = (pf + gf) / pf
        margin = (rhs - lhs) / rhs

        is_hit = margin > 0
        borderline = np.zeros(len(ns_m), dtype=bool)
        uncertain = np.abs(margin) <= RECHECK_BAND
        for idx in np.flatnonzero(uncertain).tolist():
            hit, near = _recheck_mp(
                int(ns_m[idx]), int(p_m[idx]), int(g_m[idx]), r, epsilon
            )
            is_hit[idx] = hit
            borderline[idx] = near

        if is_hit.any():
            ns_out.append(ns_m[is_hit])
            ps_out.append(p_m[is_hit])
            gs_out.append(g_m[is_hit])
            th_out.append(pf[is_hit] * factor[is_hit])
            bl_out.append(borderline[is_hit])

    if scanned == 0:
        raise ValueError(
            f"limit {limit} is too small to contain the prime pair at index {n_lo}"
        )

    hits_n = np.concatenate(ns_out) if ns_out else np.zeros(0, dtype=np.int64)
    hits_p = np.concatenate(ps_out) if ps_out else np.zeros(0, dtype=np.int64)
    hits_g = np.concatenate(gs_out) if gs_out else np.zeros(0, dtype=np.int64)
    hits_t = np.concatenate(th_out) if th_out else np.zeros(0, dtype=np.float64)
    hits_b = np.concatenate(bl_out) if bl_out else np.zeros(0, dtype=bool)

    tail: list[tuple[int, int]] = []
    if len(hits_n):
        suffix_min = np.minimum.accumulate(hits_g[::-1])[::-1]
        for cp in _dyadic_range(n_lo, n_hi):
            pos = int(np.searchsorted(hits_n, cp))
            if pos < len(hits_n):
                tail.append((cp, int(suffix_min[pos])))

    return ScanReport(
        r=r,
        epsilon=epsilon,
        limit=limit,
        n_lo=n_lo,
        n_hi=n_hi,
        hit_count=int(len(hits_n)),
        hits_n=hits_n,
        hits_p=hits_p,
        hits_gap=hits_g,
        hits_threshold=hits_t,
        hits_borderline=hits_b,
        min_gap_among_hits=int(hits_g.min()) if len(hits_g) else None,
        max_threshold_among_hits=float(hits_t.max()) if len(hits_t) else None,
        tail_min_gap=tail,
    )


@dataclass
class GapBoundSummary:
    """Reporter over a ScanReport: what the hits say about small gaps."""

    scan: ScanReport
    implied_bound: int | None
    statement: str


def gap_bound_report(
    r: float,
    epsilon: float = 0.0,
    limit: int = 1_000_000,
    n_lo: int = 2,
    segment_size: int | None = None,
    threads: int = 1,
) -> GapBoundSummary:
    """Run the scan and phrase its finite-range reading.

    Each hit satisfies g_n < p_n (r + epsilon)/(n ln n), and since
    p_n/(n ln n) -> 1 (prime number theorem), the thresholds approach
    r + epsilon. If hits continued indefinitely, the liminf of the gap
    would be bounded by any eventual threshold ceiling. A finite scan
    cannot establish that; this is evidence, stated as such.
    """
    scan = prime_ratio_scan(r, epsilon, limit, n_lo, segment_size, threads)
    if scan.hit_count:
        implied = math.ceil(scan.max_threshold_among_hits)
        statement = (
            f"{scan.hit_count} indices n in [{scan.n_lo}, {scan.n_hi}] satisfy "
            f"p_(n+1)/p_n < 1 + {scan.r + scan.epsilon:g}/(n ln n); the smallest gap "
            f"among them is {scan.min_gap_among_hits}. If such hits continued "
            f"indefinitely, liminf of the prime gap would be at most "
            f"ceil(max threshold) = {implied}. Finite-range evidence, not a proof."
        )
    else:
        implied = None
        statement = (
            f"No index n in [{scan.n_lo}, {scan.n_hi}] satisfies "
            f"p_(n+1)/p_n < 1 + {scan.r + scan.epsilon:g}/(n ln n); "
            f"this range offers no gap bound at this strength."
        )
    return GapBoundSummary(scan=scan, implied_bound=implied, statement=statement)
