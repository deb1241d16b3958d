"""Correlations, paired t-test, z-scoring, F distribution, and a dummy-coded
OLS outcome model.

p-values for t and F statistics use the exact reference distributions via the
regularized incomplete beta function; no normal approximations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from ._linalg import lstsq_fit
from .errors import DegenerateDataError, InsufficientDataError


@dataclass(frozen=True)
class CorrelationResult:
    coefficient: float
    p_value: float
    n: int
    kind: str


@dataclass(frozen=True)
class PairedTResult:
    statistic: float
    df: int
    p_value: float


@dataclass(frozen=True)
class OutcomeModel:
    coefficients: dict[str, float]
    stderrs: dict[str, float]
    r_squared: float
    n: int


def _as_pair(x, y, kind: str) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"{kind}: inputs must be 1-d and equal length")
    return x, y


def _t_sf_two_sided(t: float, df: int) -> float:
    """P(|T| >= t) for Student's t with df degrees of freedom."""
    t = abs(float(t))
    if not np.isfinite(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def pearson(x, y) -> CorrelationResult:
    x, y = _as_pair(x, y, "pearson")
    n = len(x)
    if n < 3:
        raise InsufficientDataError("pearson needs at least 3 pairs")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateDataError("zero variance input")
    r = float(xc @ yc) / np.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * np.sqrt((n - 2) / (1.0 - r * r))
        p = _t_sf_two_sided(t, n - 2)
    return CorrelationResult(r, p, n, "pearson")


def _midranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=np.float64)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> CorrelationResult:
    x, y = _as_pair(x, y, "spearman")
    res = pearson(_midranks(x), _midranks(y))
    return CorrelationResult(res.coefficient, res.p_value, res.n, "spearman")


def point_biserial(binary, continuous) -> CorrelationResult:
    """Pearson correlation with the binary variable coded 0/1."""
    b = np.asarray(binary)
    levels = sorted(set(b.tolist()))
    if len(levels) != 2:
        raise DegenerateDataError("binary input must contain exactly two classes")
    coded = np.where(b == levels[1], 1.0, 0.0)
    res = pearson(coded, continuous)
    return CorrelationResult(res.coefficient, res.p_value, res.n, "point_biserial")


def paired_t(pre, post) -> PairedTResult:
    """t-test on the differences post - pre; df = n - 1."""
    pre, post = _as_pair(pre, post, "paired_t")
    n = len(pre)
    if n < 2:
        raise InsufficientDataError("paired_t needs at least 2 pairs")
    d = post - pre
    sd = d.std(ddof=1)
    mean = float(d.mean())
    if sd == 0.0:
        if mean != 0.0:
            raise DegenerateDataError("zero variance of differences")
        return PairedTResult(0.0, n - 1, 1.0)
    t = mean / (sd / np.sqrt(n))
    return PairedTResult(float(t), n - 1, _t_sf_two_sided(t, n - 1))


def zscore(values) -> np.ndarray:
    """Center to mean 0 and scale to sample standard deviation 1."""
    x = np.asarray(values, dtype=np.float64)
    sd = x.std(ddof=1)
    if sd == 0.0 or not np.isfinite(sd):
        raise DegenerateDataError("zero variance input")
    return (x - x.mean()) / sd


def f_cdf(x: float, d1: int, d2: int) -> float:
    """CDF of the F distribution via the regularized incomplete beta."""
    if d1 < 1 or d2 < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if x < 0:
        raise ValueError("F statistic must be non-negative")
    if x == 0.0:
        return 0.0
    return float(betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2)))


def dummy_ols_outcomes(
    outcome,
    effects: dict[str, object],
    groups: dict[str, object] | None = None,
    covariates: dict[str, object] | None = None,
) -> OutcomeModel:
    """OLS of an outcome on named effects and covariates plus dummy-coded
    grouping factors (first level of each factor dropped).

    A fixed-effects stand-in for a mixed model with the same grouping
    structure; estimates are not comparable to random-effects fits.
    """
    y = np.asarray(outcome, dtype=np.float64)
    n = len(y)
    names = ["intercept"]
    cols = [np.ones(n)]
    for name, values in effects.items():
        cols.append(np.asarray(values, dtype=np.float64))
        names.append(name)
    for name, values in (covariates or {}).items():
        cols.append(np.asarray(values, dtype=np.float64))
        names.append(name)
    for factor, labels in (groups or {}).items():
        labels = list(labels)
        if len(labels) != n:
            raise ValueError(f"group {factor!r}: length mismatch")
        for level in sorted(set(map(str, labels)))[1:]:
            cols.append(np.array([1.0 if str(v) == level else 0.0 for v in labels]))
            names.append(f"{factor}={level}")
    X = np.column_stack(cols)
    coef, stderr, rss = lstsq_fit(X, y)
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    return OutcomeModel(
        coefficients=dict(zip(names, map(float, coef))),
        stderrs=dict(zip(names, map(float, stderr))),
        r_squared=r2,
        n=n,
    )
