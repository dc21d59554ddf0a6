"""Statistical tests for audit results.

Chi-square goodness-of-fit against given (default uniform) proportions,
2x2 independence with optional Yates continuity correction, upper-tail
chi-square p-values via the regularized incomplete gamma function, and
Krippendorff's alpha for nominal inter-rater data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .errors import ValidationError

__all__ = [
    "Chi2Result",
    "RatingsMatrix",
    "chi2_gof",
    "chi2_2x2",
    "chi2_p",
    "kripp_alpha",
]


@dataclass(frozen=True)
class Chi2Result:
    statistic: float
    df: int
    p: float
    corrected: bool = False


def chi2_gof(
    observed: Sequence[float],
    expected_proportions: Sequence[float] | None = None,
) -> Chi2Result:
    """Goodness-of-fit statistic sum((O-E)^2 / E) with E = total * proportion.

    Proportions default to uniform; they must sum to 1 and contain no zero
    cell. df = cells - 1.
    """
    if len(observed) < 2:
        raise ValidationError("goodness-of-fit needs at least 2 cells")
    if any(o < 0 for o in observed):
        raise ValidationError("observed counts must be non-negative")
    total = float(sum(observed))
    if total == 0:
        raise ValidationError("observed total must be positive")
    k = len(observed)
    if expected_proportions is None:
        proportions = [1.0 / k] * k
    else:
        proportions = [float(p) for p in expected_proportions]
        if len(proportions) != k:
            raise ValidationError("proportions length must match observed cells")
        if any(p <= 0 for p in proportions):
            raise ValidationError("expected proportions must be positive")
        if abs(sum(proportions) - 1.0) > 1e-9:
            raise ValidationError("expected proportions must sum to 1")
    statistic = 0.0
    for o, p in zip(observed, proportions):
        e = total * p
        statistic += (o - e) ** 2 / e
    df = k - 1
    return Chi2Result(statistic, df, chi2_p(statistic, df))


def chi2_2x2(table: Sequence[Sequence[float]], yates: bool = True) -> Chi2Result:
    """2x2 independence test.

    With the Yates continuity correction the statistic is
    N * (max(0, |ad - bc| - N/2))^2 / ((a+b)(c+d)(a+c)(b+d)); without it the
    |ad - bc| - N/2 term is just (ad - bc). df = 1.
    """
    if len(table) != 2 or any(len(row) != 2 for row in table):
        raise ValidationError("table must be 2x2")
    (a, b), (c, d) = table
    if min(a, b, c, d) < 0:
        raise ValidationError("cell counts must be non-negative")
    n = float(a + b + c + d)
    margins = [(a + b), (c + d), (a + c), (b + d)]
    if any(m == 0 for m in margins):
        raise ValidationError("all row and column sums must be positive")
    ad_bc = a * d - b * c
    if yates:
        numerator = max(0.0, abs(ad_bc) - n / 2.0)
        statistic = n * numerator**2
    else:
        statistic = n * float(ad_bc) ** 2
    statistic /= math.prod(margins)
    return Chi2Result(statistic, 1, chi2_p(statistic, 1), corrected=yates)


def chi2_p(statistic: float, df: int) -> float:
    """Upper-tail probability of the chi-square distribution.

    Computed as the regularized upper incomplete gamma Q(df/2, statistic/2),
    using the power series for the lower function when x < a + 1 and the
    Lentz continued fraction otherwise. Absolute accuracy is far below the
    1e-6 target for statistics up to 100.
    """
    if statistic < 0:
        raise ValidationError("statistic must be non-negative")
    if df < 1:
        raise ValidationError("degrees of freedom must be positive")
    if statistic == 0:
        return 1.0
    a = df / 2.0
    x = statistic / 2.0
    if x < a + 1.0:
        q = 1.0 - _lower_gamma_series(a, x)
    else:
        q = _upper_gamma_cf(a, x)
    return min(1.0, max(0.0, q))


def _lower_gamma_series(a: float, x: float, max_iter: int = 500) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(max_iter):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _upper_gamma_cf(a: float, x: float, max_iter: int = 500) -> float:
    """Regularized upper incomplete gamma Q(a, x) by continued fraction."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


@dataclass(frozen=True)
class RatingsMatrix:
    """Nominal ratings: a partial map of (item, rater) to category.

    Items rated by fewer than two raters contribute nothing to alpha.
    """

    items: tuple[str, ...]
    raters: tuple[str, ...]
    values: Mapping[tuple[str, str], Hashable] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.raters) < 2:
            raise ValidationError("a ratings matrix needs at least 2 raters")
        for (item, rater) in self.values:
            if item not in self.items:
                raise ValidationError(f"rating for unknown item {item!r}")
            if rater not in self.raters:
                raise ValidationError(f"rating by unknown rater {rater!r}")

    def item_values(self, item: str) -> list[Hashable]:
        return [
            self.values[(item, rater)]
            for rater in self.raters
            if (item, rater) in self.values
        ]


def kripp_alpha(matrix: RatingsMatrix) -> float:
    """Krippendorff's alpha for nominal data, coincidence-matrix form.

    Within each item with m >= 2 ratings, every ordered pair of ratings adds
    1/(m-1) to the coincidence count of its value pair. With nominal
    disagreement (0 if equal, else 1):

        Do = (n - sum_c o_cc) / n
        De = (n^2 - sum_c n_c^2) / (n * (n - 1))
        alpha = 1 - Do / De

    Items with a single rating are skipped; alpha is 1 by definition when
    expected disagreement is zero (all values identical).
    """
    coincidence: dict[tuple[Hashable, Hashable], float] = {}
    n = 0.0
    for item in matrix.items:
        values = matrix.item_values(item)
        m = len(values)
        if m < 2:
            continue
        n += m
        weight = 1.0 / (m - 1)
        for i, vi in enumerate(values):
            for j, vj in enumerate(values):
                if i == j:
                    continue
                key = (vi, vj)
                coincidence[key] = coincidence.get(key, 0.0) + weight
    if n == 0:
        raise ValidationError("no item has two or more ratings")
    totals: dict[Hashable, float] = {}
    agreement = 0.0
    for (vi, vj), count in coincidence.items():
        totals[vi] = totals.get(vi, 0.0) + count
        if vi == vj:
            agreement += count
    d_observed = (n - agreement) / n
    d_expected = (n * n - sum(t * t for t in totals.values())) / (n * (n - 1.0))
    if d_expected == 0.0:
        return 1.0
    return 1.0 - d_observed / d_expected
