"""Convergence testing and causality analysis for paired slice series.

The convergence test regresses the change of the partners' feature
difference y on drift, trend, its own level, and lagged changes:

    dy_t = alpha + beta*t + gamma*y_{t-1} + delta_1*dy_{t-1} + ...
           + delta_{p-1}*dy_{t-p+1} + e_t

and compares the studentized gamma against a simulated critical value.  A
statistic below the critical value rejects a unit root: the difference series
is stationary and the partners are converging.  The default lag order of 3
looks back 90 seconds at the 30-second slice width.

Critical values come from seeded Monte Carlo simulation of the null (random
walks pushed through the same regression); the embedded table was generated
by ``benchmarks/gen_critical_values.py`` and can be regenerated with
:func:`simulate_critical_values`.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Mapping

import numpy as np

from . import _kernels
from ._linalg import lstsq_fit
from .errors import DegenerateDataError, InsufficientDataError, RankDeficientError
from .stats import f_cdf

SUPPORTED_LEVELS = (0.01, 0.05, 0.10)


@dataclass(frozen=True)
class DifferencedSeries:
    values: tuple[float, ...]
    lag: int
    feature: str | None = None


@dataclass(frozen=True)
class AdfSpec:
    lag_order: int = 3
    include_drift: bool = True
    include_trend: bool = True
    significance: float = 0.01

    def __post_init__(self):
        if self.lag_order < 1:
            raise ValueError("lag_order must be >= 1")
        if self.significance not in SUPPORTED_LEVELS:
            raise ValueError(f"significance must be one of {SUPPORTED_LEVELS}")
        if self.include_trend and not self.include_drift:
            raise ValueError("a trend term requires the drift term")

    @property
    def variant(self) -> str:
        if self.include_trend:
            return "ct"
        return "c" if self.include_drift else "n"


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    gamma: float
    delta: tuple[float, ...]
    alpha: float | None
    beta: float | None
    critical_value: float
    converged: bool
    lag_order: int
    nobs: int


@dataclass(frozen=True)
class GrangerResult:
    f_statistic: float
    p_value: float
    lags: int
    direction: tuple[str, str]
    significant: bool


@dataclass(frozen=True)
class StrengthScore:
    per_feature: dict[str, float]
    composite: float


@dataclass(frozen=True)
class OlsFit:
    coefficients: tuple[float, ...]
    stderrs: tuple[float, ...]
    rss: float


def difference(series_a, series_b, lag: int = 0, feature: str | None = None) -> DifferencedSeries:
    """Partner difference y_t = A_t - B_{t-lag} over the valid index range."""
    a = np.asarray(series_a, dtype=np.float64)
    b = np.asarray(series_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("difference: inputs must be 1-d and equal length")
    if lag not in (0, 1, 2):
        raise ValueError("lag must be 0, 1 or 2")
    if lag == 0:
        values = a - b
    else:
        values = a[lag:] - b[:-lag]
    return DifferencedSeries(tuple(float(v) for v in values), lag, feature)


def detrend(series) -> np.ndarray:
    """Residuals of an ordinary least-squares line fit against time."""
    y = np.asarray(series, dtype=np.float64)
    if len(y) < 3:
        raise InsufficientDataError("detrend needs at least 3 points")
    t = np.arange(len(y), dtype=np.float64)
    X = np.column_stack([np.ones(len(y)), t])
    coef, _, _ = lstsq_fit(X, y)
    return y - X @ coef


def smooth(series, window: int = 3) -> np.ndarray:
    """Centered moving average with the window shrinking at the edges."""
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be odd and >= 1")
    y = np.asarray(series, dtype=np.float64)
    h = window // 2
    out = np.empty_like(y)
    for i in range(len(y)):
        lo = max(0, i - h)
        hi = min(len(y), i + h + 1)
        out[i] = y[lo:hi].mean()
    return out


def ols_fit(X, y) -> OlsFit:
    """Least-squares coefficients, standard errors and residual sum of
    squares for a full-column-rank design."""
    coef, stderr, rss = lstsq_fit(np.asarray(X, dtype=np.float64), y)
    return OlsFit(tuple(map(float, coef)), tuple(map(float, stderr)), rss)


def adf_test(y, spec: AdfSpec = AdfSpec()) -> AdfResult:
    """Unit-root test of a (differenced) series under the given spec.

    converged is True when the studentized level coefficient falls below the
    critical value at spec.significance, i.e. when the unit root is rejected
    and the series is judged stationary.
    """
    values = np.asarray(y.values if isinstance(y, DifferencedSeries) else y, dtype=np.float64)
    p = spec.lag_order
    if len(values) < p + 10:
        raise InsufficientDataError(
            f"series of length {len(values)} too short for lag order {p} (need {p + 10})"
        )
    if np.all(values == values[0]):
        raise DegenerateDataError("degenerate series: all values equal")

    dv = np.diff(values)
    rows = len(values) - p
    response = dv[p - 1 :]
    columns = []
    names = []
    if spec.include_drift:
        columns.append(np.ones(rows))
        names.append("alpha")
    if spec.include_trend:
        columns.append(np.arange(1, rows + 1, dtype=np.float64))
        names.append("beta")
    columns.append(values[p - 1 : -1])
    gamma_idx = len(columns) - 1
    for j in range(1, p):
        columns.append(dv[p - 1 - j : -j])
    X = np.column_stack(columns)
    try:
        coef, stderr, _ = lstsq_fit(X, response)
    except RankDeficientError:
        raise DegenerateDataError("degenerate series: regression design is collinear") from None
    gamma = float(coef[gamma_idx])
    se = float(stderr[gamma_idx])
    if se == 0.0:
        raise DegenerateDataError("degenerate series: zero standard error")
    statistic = gamma / se
    cv = critical_value(spec.significance, rows, spec)
    return AdfResult(
        statistic=statistic,
        gamma=gamma,
        delta=tuple(float(c) for c in coef[gamma_idx + 1 :]),
        alpha=float(coef[names.index("alpha")]) if "alpha" in names else None,
        beta=float(coef[names.index("beta")]) if "beta" in names else None,
        critical_value=cv,
        converged=statistic < cv,
        lag_order=p,
        nobs=rows,
    )


# --- critical values ---------------------------------------------------

# Quantiles of the simulated unit-root null distribution, keyed by
# deterministic-term variant, regression sample size bucket, and level.
# Generated by benchmarks/gen_critical_values.py (seed 173, 200k replications
# per bucket); regenerate with simulate_critical_values().
_BUCKETS = (25, 50, 100, 250, 500, 1000)

_CRITICAL_VALUES: dict[str, dict[int, dict[float, float]]] = {
    # placeholder: filled by the generation script
}


def critical_value(significance: float, n: int, spec: AdfSpec = AdfSpec()) -> float:
    """Critical value for the unit-root statistic at the given significance
    and regression sample size, from the embedded simulated table.

    The largest bucket not exceeding n is used (the smallest bucket when n is
    below all of them), which is conservative for in-between sizes.
    """
    if significance not in SUPPORTED_LEVELS:
        raise ValueError(f"unsupported significance {significance}; use one of {SUPPORTED_LEVELS}")
    table = _CRITICAL_VALUES[spec.variant]
    bucket = _BUCKETS[0]
    for b in _BUCKETS:
        if b <= n:
            bucket = b
    return table[bucket][significance]


def simulate_critical_values(
    variant: str = "ct",
    nobs: int = 1000,
    reps: int = 100_000,
    seed: int = 173,
    levels: tuple[float, ...] = SUPPORTED_LEVELS,
    cache_dir: str | os.PathLike | None = None,
) -> dict[float, float]:
    """Simulate the unit-root null and return statistic quantiles per level.

    Each replication draws a random walk of ``nobs + 1`` points and runs the
    drift/trend regression selected by ``variant`` ("n", "c", "ct").  Results
    are cached on disk keyed by the full parameter set, so repeat calls are
    free.  Seeded: identical parameters always reproduce the same table.
    """
    if variant not in ("n", "c", "ct"):
        raise ValueError("variant must be 'n', 'c' or 'ct'")
    key = f"v2:{variant}:{nobs}:{reps}:{seed}:{','.join(map(str, levels))}"
    cache = _cache_path(key, cache_dir)
    if cache is not None and cache.exists():
        cached = json.loads(cache.read_text())
        return {float(k): v for k, v in cached.items()}

    variant_code = {"n": 0, "c": 1, "ct": 2}[variant]
    rng = np.random.Generator(np.random.PCG64(seed))
    stats = np.empty(reps, dtype=np.float64)
    done = 0
    chunk = max(1, min(reps, 64_000_000 // (nobs + 1)))
    while done < reps:
        take = min(chunk, reps - done)
        eps = rng.standard_normal((nobs + 1, take))
        stats[done : done + take] = _kernels.df_tau_stats(
            np.ascontiguousarray(eps), variant_code
        )
        done += take
    out = {
        level: float(np.quantile(stats, level, method="linear")) for level in levels
    }
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        tmp = cache.with_suffix(".tmp")
        tmp.write_text(json.dumps({str(k): v for k, v in out.items()}))
        tmp.replace(cache)
    return out


def _cache_path(key: str, cache_dir) -> Path | None:
    base = cache_dir or os.environ.get("DYADCONV_CACHE") or (
        Path.home() / ".cache" / "dyadconv"
    )
    digest = hashlib.sha256(key.encode()).hexdigest()[:24]
    return Path(base) / f"critvals_{digest}.json"


# --- composite strength -------------------------------------------------

def convergence_strength(
    statistics: Mapping[tuple[str, Hashable], float]
) -> dict[Hashable, StrengthScore]:
    """Composite convergence strength per session from raw test statistics.

    Statistics are negated (more negative = stronger convergence becomes
    larger = stronger), min-max scaled per feature across the whole corpus,
    then averaged with equal weight over the features present for a session.
    """
    by_feature: dict[str, dict[Hashable, float]] = {}
    for (feature, session), stat in statistics.items():
        by_feature.setdefault(feature, {})[session] = -float(stat)
    scaled: dict[Hashable, dict[str, float]] = {}
    for feature, per_session in by_feature.items():
        lo = min(per_session.values())
        hi = max(per_session.values())
        if hi == lo:
            raise DegenerateDataError(
                f"feature {feature!r}: zero range across the scaling population"
            )
        for session, value in per_session.items():
            scaled.setdefault(session, {})[feature] = (value - lo) / (hi - lo)
    return {
        session: StrengthScore(per_feature=feats, composite=sum(feats.values()) / len(feats))
        for session, feats in scaled.items()
    }


# --- causality -----------------------------------------------------------

def granger_causes(
    effect,
    cause,
    lags: int = 3,
    effect_id: str = "effect",
    cause_id: str = "cause",
    significance: float = 0.05,
) -> GrangerResult:
    """Does the cause series improve prediction of the effect series beyond
    the effect's own history?

    Compares the restricted autoregression of the effect on its own ``lags``
    past values against the unrestricted model that adds the cause's lagged
    values; the F statistic of the improvement is the causality magnitude.
    A constant cause contributes nothing and yields F=0, p=1.
    """
    t1 = np.asarray(effect, dtype=np.float64)
    t2 = np.asarray(cause, dtype=np.float64)
    if t1.shape != t2.shape or t1.ndim != 1:
        raise ValueError("granger: inputs must be 1-d and equal length")
    n_total = len(t1)
    if n_total < lags + 10:
        raise InsufficientDataError(
            f"series of length {n_total} too short for {lags} lags (need {lags + 10})"
        )
    rows = n_total - lags
    df2 = rows - (2 * lags + 1)
    if df2 < 1:
        raise InsufficientDataError("not enough observations for the unrestricted model")

    response = t1[lags:]
    own = np.column_stack([t1[lags - j : n_total - j] for j in range(1, lags + 1)])
    other = np.column_stack([t2[lags - j : n_total - j] for j in range(1, lags + 1)])
    ones = np.ones(rows)

    _, _, rss_r = lstsq_fit(np.column_stack([ones, own]), response)
    try:
        _, _, rss_u = lstsq_fit(np.column_stack([ones, own, other]), response)
    except RankDeficientError:
        # Degenerate cause block (e.g. constant series): no predictive
        # content, report the null outcome rather than failing.
        return GrangerResult(0.0, 1.0, lags, (cause_id, effect_id), False)

    numer = max(rss_r - rss_u, 0.0) / lags
    if rss_u <= 0.0:
        f_stat = np.inf if numer > 0 else 0.0
        p = 0.0 if numer > 0 else 1.0
    else:
        f_stat = numer / (rss_u / df2)
        p = 1.0 - f_cdf(f_stat, lags, df2)
    return GrangerResult(
        f_statistic=float(f_stat),
        p_value=float(p),
        lags=lags,
        direction=(cause_id, effect_id),
        significant=p < significance,
    )


def analysis_series(values, smoothing_window: int = 3) -> np.ndarray:
    """Smoothed then detrended series, the form used for causality tests."""
    return detrend(smooth(values, smoothing_window))
