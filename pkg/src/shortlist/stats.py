"""Usability analytics: summaries, confidence intervals, t-tests, accuracy.

The Student-t distribution function is implemented here via the regularized
incomplete beta function (continued-fraction evaluation), so the package has
no runtime statistical dependency; the test suite pins it against published
quantiles.  One-tailed tests follow the alternative "mean(a) > mean(b)".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import CountExceedsN, EmptySample, InsufficientN, MixedInstruments, ModeMismatch

ALPHA = 0.05


# -- Student-t distribution ----------------------------------------------------

_BETACF_MAX_ITER = 300
_BETACF_EPS = 3e-15
_BETACF_FPMIN = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETACF_FPMIN:
        d = _BETACF_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_FPMIN:
            d = _BETACF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETACF_FPMIN:
            c = _BETACF_FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_FPMIN:
            d = _BETACF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETACF_FPMIN:
            c = _BETACF_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction failed to converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # the continued fraction converges fast on one side of the mean; use the
    # symmetry I_x(a,b) = 1 - I_{1-x}(b,a) for the other
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    """P(T <= t) for T ~ Student-t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isnan(t):
        raise ValueError("t must be a number")
    if math.isinf(t):
        return 0.0 if t < 0 else 1.0
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return tail if t < 0 else 1.0 - tail


def student_t_quantile(p: float, df: float) -> float:
    """Inverse of student_t_cdf in p, by bisection on the monotone CDF."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be strictly between 0 and 1")
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if p == 0.5:
        return 0.0
    lo, hi = -1.0, 1.0
    while student_t_cdf(lo, df) > p:
        lo *= 2.0
    while student_t_cdf(hi, df) < p:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)


# -- summaries and intervals -----------------------------------------------------

@dataclass(frozen=True)
class SampleSummary:
    n: int
    mean: float
    sd: float | None  # sample standard deviation (n-1); None when n == 1

    def __post_init__(self):
        if self.sd is not None and self.sd < 0:
            raise ValueError("standard deviation must be non-negative")


def summarize(samples: Sequence[float]) -> SampleSummary:
    """Arithmetic mean and sample standard deviation (n-1 denominator)."""
    if len(samples) == 0:
        raise EmptySample("cannot summarize an empty sample")
    arr = np.asarray(samples, dtype=float)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if arr.size >= 2 else None
    return SampleSummary(n=int(arr.size), mean=mean, sd=sd)


def ci95(summary: SampleSummary) -> tuple[float, float]:
    """mean +/- t(n-1, 0.975) * sd / sqrt(n)."""
    if summary.n < 2 or summary.sd is None:
        raise InsufficientN("a 95% confidence interval needs n >= 2", n=summary.n)
    half = student_t_quantile(0.975, summary.n - 1) * summary.sd / math.sqrt(summary.n)
    return (summary.mean - half, summary.mean + half)


def intervals_overlap(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


# -- t-tests -------------------------------------------------------------------

@dataclass(frozen=True)
class TestResult:
    t: float
    df: float
    p_one_tailed: float
    alpha: float = ALPHA

    @property
    def reject(self) -> bool:
        return self.p_one_tailed < self.alpha


SummaryOrRaw = Union[SampleSummary, Sequence[float]]


def _as_summary(sample: SummaryOrRaw) -> SampleSummary:
    return sample if isinstance(sample, SampleSummary) else summarize(sample)


def _one_tailed_p(t: float, df: float) -> float:
    return 1.0 - student_t_cdf(t, df)


def t_test_one_tailed(a: SummaryOrRaw, b: SummaryOrRaw, mode: str = "welch") -> TestResult:
    """One-tailed two-sample or paired t-test for H1: mean(a) > mean(b).

    welch (default): unequal variances, Welch-Satterthwaite df.
    pooled: equal-variance two-sample test.
    paired: requires raw, equal-length samples; tests the mean difference.
    """
    if mode == "paired":
        if isinstance(a, SampleSummary) or isinstance(b, SampleSummary):
            raise ModeMismatch("paired mode requires raw samples, not summaries")
        if len(a) != len(b):
            raise ModeMismatch(f"paired samples differ in length ({len(a)} vs {len(b)})")
        diffs = summarize([x - y for x, y in zip(a, b)])
        if diffs.n < 2:
            raise InsufficientN("paired test needs at least 2 pairs", n=diffs.n)
        df = float(diffs.n - 1)
        se = diffs.sd / math.sqrt(diffs.n)
        if se == 0.0:
            t = 0.0 if diffs.mean == 0.0 else math.copysign(math.inf, diffs.mean)
        else:
            t = diffs.mean / se
        return TestResult(t=t, df=df, p_one_tailed=_one_tailed_p(t, df))

    if mode not in ("welch", "pooled"):
        raise ModeMismatch(f"unknown test mode {mode!r}")
    sa = _as_summary(a)
    sb = _as_summary(b)
    if sa.n < 2 or sb.n < 2 or sa.sd is None or sb.sd is None:
        raise InsufficientN("two-sample tests need n >= 2 in both groups", n_a=sa.n, n_b=sb.n)

    va, vb = sa.sd**2, sb.sd**2
    if mode == "welch":
        qa, qb = va / sa.n, vb / sb.n
        se = math.sqrt(qa + qb)
        if se == 0.0:
            df = float(sa.n + sb.n - 2)
            t = 0.0 if sa.mean == sb.mean else math.copysign(math.inf, sa.mean - sb.mean)
        else:
            df = (qa + qb) ** 2 / (qa**2 / (sa.n - 1) + qb**2 / (sb.n - 1))
            t = (sa.mean - sb.mean) / se
    else:
        pooled_var = ((sa.n - 1) * va + (sb.n - 1) * vb) / (sa.n + sb.n - 2)
        se = math.sqrt(pooled_var * (1.0 / sa.n + 1.0 / sb.n))
        df = float(sa.n + sb.n - 2)
        if se == 0.0:
            t = 0.0 if sa.mean == sb.mean else math.copysign(math.inf, sa.mean - sb.mean)
        else:
            t = (sa.mean - sb.mean) / se
    return TestResult(t=t, df=df, p_one_tailed=_one_tailed_p(t, df))


# -- accuracy and survey summaries ------------------------------------------------

def _round_half_up(value: Fraction, decimals: int) -> float:
    quantum = Decimal(1).scaleb(-decimals)
    as_decimal = Decimal(value.numerator) / Decimal(value.denominator)
    return float(as_decimal.quantize(quantum, rounding=ROUND_HALF_UP))


def accuracy_fraction(correct_counts: Sequence[int], participants: int, tasks: int) -> Fraction:
    """Exact overall correctness rate: sum(counts) / (participants * tasks)."""
    if len(correct_counts) != tasks:
        raise CountExceedsN(
            f"expected one count per task ({tasks}), got {len(correct_counts)}", tasks=tasks
        )
    for count in correct_counts:
        if count < 0 or count > participants:
            raise CountExceedsN(
                f"correct count {count} outside [0, {participants}]", count=count, participants=participants
            )
    return Fraction(sum(correct_counts), participants * tasks)


def accuracy(correct_counts: Sequence[int], participants: int, tasks: int) -> float:
    """Overall accuracy as a percentage, rounded half-up to 2 decimals."""
    return _round_half_up(100 * accuracy_fraction(correct_counts, participants, tasks), 2)


AGREE = "Agree"
NEUTRAL = "Neutral"
DISAGREE = "Disagree"


def likert_summary(responses: Sequence) -> list[int]:
    """Per-question percentage agreeing, rounded half-up to a whole percent.

    Accepts satisfaction-instrument responses only, all with the same number
    of questions.
    """
    if not responses:
        raise EmptySample("no survey responses")
    n_questions = len(responses[0].answers)
    for response in responses:
        if response.instrument != "satisfaction":
            raise MixedInstruments(
                f"likert summary is for the satisfaction instrument, got {response.instrument!r}"
            )
        if len(response.answers) != n_questions:
            raise MixedInstruments("question counts differ across responses")
    out = []
    for q in range(n_questions):
        agreeing = sum(1 for r in responses if r.answers[q] == AGREE)
        out.append(int(_round_half_up(Fraction(100 * agreeing, len(responses)), 0)))
    return out
