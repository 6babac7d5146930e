"""Country development scores and the leave-one-out global equity index."""

from dataclasses import dataclass

import numpy as np

from .errors import SingularityError, ValidationError

# Coefficients of the shipped development-score formula, in indicator order
# (EI, IDG, CEA, MA, HR, ER, SA). They are rounded method averages and sum to
# 1.0007 rather than exactly 1.
DEFAULT_SCORE_WEIGHTS = (0.187, 0.387, 0.097, 0.0436, 0.086, 0.0831, 0.117)


@dataclass
class IndicatorVector:
    """Normalized levels of the seven development indicators."""

    ei: float
    idg: float
    cea: float
    ma: float
    hr: float
    er: float
    sa: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in self.as_array()):
            raise ValidationError("all seven indicators must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.ei, self.idg, self.cea, self.ma, self.hr, self.er, self.sa])


@dataclass
class EquitySeries:
    """Per-year development scores for one country."""

    country: str
    scores_by_year: list  # [(year, score), ...] with strictly increasing years

    def __post_init__(self):
        years = [y for y, _ in self.scores_by_year]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValidationError(f"{self.country}: years must be strictly increasing")
        if not all(np.isfinite(s) for _, s in self.scores_by_year):
            raise ValidationError(f"{self.country}: scores must be finite")


@dataclass
class EquityIndexParams:
    period_count: int

    def __post_init__(self):
        if self.period_count < 1:
            raise ValidationError("period_count must be positive")


def country_score(v: IndicatorVector, weights=DEFAULT_SCORE_WEIGHTS) -> float:
    """Weighted sum of the seven indicators."""
    if hasattr(weights, "weights"):  # accept a WeightVector
        weights = weights.weights
    w = np.asarray(weights, dtype=float)
    if w.shape != (7,):
        raise ValidationError(f"expected 7 weights, got shape {w.shape}")
    return float(w @ v.as_array())


def global_equity_index(scores_by_year, countries=None, years=None,
                        params: EquityIndexParams = None) -> float:
    """Variance of leave-one-out score ratios, averaged over years.

    For each year, every country's score is divided by the mean score of the
    other countries; the squared deviations of those ratios from their
    within-year mean are summed. The total is divided by (number of years *
    number of countries). Identical countries therefore give exactly 0, and
    rescaling all scores within a year changes nothing.

    Parameters
    ----------
    scores_by_year : array-like, shape (T, n)
        One row per year, one column per country; all entries present.
    countries, years : optional labels used in error messages.
    params : optional EquityIndexParams; its period_count must match T.
    """
    s = np.asarray(scores_by_year, dtype=float)
    if s.ndim != 2:
        raise ValidationError(f"expected a (years x countries) table, got shape {s.shape}")
    t, n = s.shape
    if n < 2:
        raise ValidationError("need at least 2 countries")
    if t < 1:
        raise ValidationError("need at least 1 year")
    if not np.all(np.isfinite(s)):
        raise ValidationError("scores must be finite")
    if params is not None and params.period_count != t:
        raise ValidationError(
            f"period_count {params.period_count} does not match {t} supplied years"
        )

    total = 0.0
    for ti in range(t):
        row = s[ti]
        loo_mean = (row.sum() - row) / (n - 1)
        for k in range(n):
            if loo_mean[k] == 0:
                country = countries[k] if countries is not None else f"#{k}"
                year = years[ti] if years is not None else f"#{ti}"
                raise SingularityError(country, year)
        ratios = row / loo_mean
        total += float(((ratios - ratios.mean()) ** 2).sum())
    return total / (t * n)
