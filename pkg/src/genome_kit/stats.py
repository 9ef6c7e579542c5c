"""Welch and paired t-tests with Student-t p-values from the regularized
incomplete beta function (continued fraction, modified Lentz)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def _beta_cf(x: float, a: float, b: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # the continued fraction converges fast only below the mean of the beta law
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(x, a, b) / a
    return 1.0 - front * _beta_cf(1.0 - x, b, a) / b


def student_t_sf(t: float, df: float) -> float:
    """P(T > t) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)
    return tail if t > 0 else 1.0 - tail


def student_t_cdf(t: float, df: float) -> float:
    return student_t_sf(-t, df)


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def _var(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1)


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    df: float
    mode: str
    alternative: str = "two-sided"

    @property
    def infinite(self) -> bool:
        """Zero variance with a non-zero mean difference."""
        return math.isinf(self.t)

    def to_dict(self) -> dict:
        return {"t": self.t, "p": self.p, "df": self.df, "mode": self.mode,
                "alternative": self.alternative, "infinite": self.infinite}


def _p_value(t: float, df: float, alternative: str) -> float:
    if alternative == "two-sided":
        if math.isinf(t):
            return 0.0
        return min(1.0, regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5))
    if alternative == "less":
        return student_t_cdf(t, df)
    if alternative == "greater":
        return student_t_sf(t, df)
    raise ValueError(f"unknown alternative {alternative!r}")


def significance_test(before: Sequence[float], after: Sequence[float], mode: str = "welch",
                      alternative: str = "two-sided") -> TTestResult:
    """t statistic for ``before - after``.

    ``mode`` is ``"welch"`` (unequal-variance two-sample) or ``"paired"``.
    ``alternative`` selects the tail: ``"two-sided"`` (default), ``"less"``
    (before < after) or ``"greater"``.  A zero-variance sample with a
    non-zero mean difference yields ``t = ±inf`` and ``p = 0`` for the
    matching tail; zero variance and zero difference yields ``t = 0, p = 1``.
    """
    before = [float(x) for x in before]
    after = [float(x) for x in after]
    if len(before) < 2 or len(after) < 2:
        raise ValueError("each sample needs at least two observations")
    if mode == "paired":
        if len(before) != len(after):
            raise ValueError("paired test needs samples of equal length")
        diffs = [b - a for b, a in zip(before, after)]
        n = len(diffs)
        mean_d = _mean(diffs)
        var_d = _var(diffs)
        df = float(n - 1)
        if var_d == 0.0:
            t = 0.0 if mean_d == 0.0 else math.copysign(math.inf, mean_d)
        else:
            t = mean_d / math.sqrt(var_d / n)
    elif mode == "welch":
        n1, n2 = len(before), len(after)
        v1, v2 = _var(before) / n1, _var(after) / n2
        diff = _mean(before) - _mean(after)
        se2 = v1 + v2
        if se2 == 0.0:
            t = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
            df = float(n1 + n2 - 2)
        else:
            t = diff / math.sqrt(se2)
            # scale before squaring so tiny variances do not underflow
            r1, r2 = v1 / max(v1, v2), v2 / max(v1, v2)
            df = (r1 + r2) ** 2 / (r1 * r1 / (n1 - 1) + r2 * r2 / (n2 - 1))
    else:
        raise ValueError(f"mode must be 'welch' or 'paired', got {mode!r}")
    if t == 0.0:
        p = 1.0 if alternative == "two-sided" else 0.5
    else:
        p = _p_value(t, df, alternative)
    return TTestResult(t, p, df, mode, alternative)
