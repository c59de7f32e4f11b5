# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 16:30
# @File    : statistics.py
# @Software: PyCharm
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import stats
from statsmodels.stats.contingency_tables import mcnemar as sm_mcnemar
from statsmodels.stats.proportion import proportion_confint

from config import config
from utils.exceptions import EmptyInput, LengthMismatch, NoDiscordantPairs, TooFewSamples, ZeroVariance

"""
统计检验

- 单个比例: Wilson score 区间
- 配对比例: McNemar（不一致对 >= 25 用带连续性校正的卡方，否则精确二项）
- 非劣效: 配对差值的 Wald 区间，下限 > margin 即非劣效
- 时间: 配对 t 检验，均值的 t 分布区间
"""

MCNEMAR_EXACT_BELOW = 25


@dataclass(frozen=True)
class ProportionEstimate:
    successes: int
    n: int
    proportion: float
    ci_lower: float
    ci_upper: float
    confidence: float = 0.95


@dataclass(frozen=True)
class PairedOutcomes:
    """n11 都对, n10 仅 A 对, n01 仅 B 对, n00 都错"""
    n11: int
    n10: int
    n01: int
    n00: int

    @property
    def n(self):
        return self.n11 + self.n10 + self.n01 + self.n00

    @property
    def discordant(self):
        return self.n10 + self.n01

    @property
    def accuracy_a(self):
        return (self.n11 + self.n10) / self.n

    @property
    def accuracy_b(self):
        return (self.n11 + self.n01) / self.n

    def swapped(self) -> 'PairedOutcomes':
        return PairedOutcomes(self.n11, self.n01, self.n10, self.n00)


@dataclass(frozen=True)
class McNemarResult:
    statistic: float
    p_value: float
    method: str
    chi_square_p: float
    exact_p: float


@dataclass(frozen=True)
class NonInferiorityResult:
    diff: float
    ci_lower: float
    ci_upper: float
    margin: float
    alpha: float
    non_inferior: bool

    @property
    def verdict(self):
        return 'non-inferior' if self.non_inferior else 'not shown non-inferior'


@dataclass(frozen=True)
class PairedTTestResult:
    t: float
    df: int
    p_value: float
    mean_diff: float
    ci_lower: float
    ci_upper: float


@dataclass(frozen=True)
class MeanEstimate:
    mean: float
    ci_lower: float
    ci_upper: float
    n: int
    minimum: float
    maximum: float


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> ProportionEstimate:
    if n < 1:
        raise EmptyInput('a proportion needs at least one observation')
    if not 0 <= successes <= n:
        raise ValueError('successes must be within [0, n]')
    lower, upper = proportion_confint(successes, n, alpha=1 - confidence, method='wilson')
    p_hat = successes / n
    lower = max(0.0, min(float(lower), p_hat))
    upper = min(1.0, max(float(upper), p_hat))
    return ProportionEstimate(successes=successes, n=n, proportion=p_hat, ci_lower=lower, ci_upper=upper,
                              confidence=confidence)


def mcnemar(p: PairedOutcomes) -> McNemarResult:
    """
    statistic 始终是连续性校正的卡方值 (|n10-n01|-1)^2 / (n10+n01)
    p_value 在不一致对少于 25 时取精确二项检验，否则取卡方尾概率
    """
    if p.discordant < 1:
        raise NoDiscordantPairs('McNemar needs at least one discordant pair')
    table = [[p.n11, p.n10], [p.n01, p.n00]]
    chi = sm_mcnemar(table, exact=False, correction=True)
    exact = sm_mcnemar(table, exact=True)
    use_exact = p.discordant < MCNEMAR_EXACT_BELOW
    return McNemarResult(
        statistic=float(chi.statistic),
        p_value=float(exact.pvalue if use_exact else chi.pvalue),
        method='exact-binomial' if use_exact else 'chi-square-cc',
        chi_square_p=float(chi.pvalue),
        exact_p=float(min(1.0, exact.pvalue)),
    )


def noninferiority(p: PairedOutcomes, margin: float = config.noninferiority_margin,
                   alpha: float = config.noninferiority_alpha) -> NonInferiorityResult:
    """A（候选）减 B（对照）的准确率差，双侧 1-alpha Wald 区间"""
    n = p.n
    if n < 1:
        raise EmptyInput('no paired datapoints')
    diff = (p.n10 - p.n01) / n
    z = stats.norm.ppf(1 - alpha / 2)
    spread = max(0.0, p.discordant - (p.n10 - p.n01) ** 2 / n)
    half_width = z * math.sqrt(spread) / n
    lower, upper = diff - half_width, diff + half_width
    return NonInferiorityResult(diff=diff, ci_lower=lower, ci_upper=upper, margin=margin, alpha=alpha,
                                non_inferior=bool(lower > margin))


def _as_array(values: Sequence[float]) -> np.ndarray:
    return np.asarray(values, dtype=np.float64)


def paired_t_test(times_a: Sequence[float], times_b: Sequence[float], confidence: float = 0.95) -> PairedTTestResult:
    a, b = _as_array(times_a), _as_array(times_b)
    if a.shape != b.shape:
        raise LengthMismatch(f'{a.size} vs {b.size} paired samples')
    if a.size < 2:
        raise TooFewSamples('a paired t-test needs at least 2 pairs')
    diffs = a - b
    if np.all(diffs == diffs[0]):
        raise ZeroVariance(float(diffs[0]), int(diffs.size))
    result = stats.ttest_rel(a, b)
    df = int(diffs.size - 1)
    mean_diff = float(diffs.mean())
    half = stats.t.ppf(0.5 + confidence / 2, df) * diffs.std(ddof=1) / math.sqrt(diffs.size)
    return PairedTTestResult(t=float(result.statistic), df=df, p_value=float(result.pvalue), mean_diff=mean_diff,
                             ci_lower=mean_diff - half, ci_upper=mean_diff + half)


def mean_ci(times: Sequence[float], confidence: float = 0.95) -> MeanEstimate:
    values = _as_array(times)
    if values.size < 2:
        raise TooFewSamples('a confidence interval on the mean needs at least 2 samples')
    mean = float(values.mean())
    half = stats.t.ppf(0.5 + confidence / 2, values.size - 1) * values.std(ddof=1) / math.sqrt(values.size)
    return MeanEstimate(mean=mean, ci_lower=mean - half, ci_upper=mean + half, n=int(values.size),
                        minimum=float(values.min()), maximum=float(values.max()))


def format_percent_ci(estimate, digits=1) -> Tuple[str, str, str]:
    return tuple(f'{value * 100:.{digits}f}' for value in (estimate.proportion, estimate.ci_lower, estimate.ci_upper))
