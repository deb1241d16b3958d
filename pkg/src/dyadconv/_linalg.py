"""Least-squares core shared by the regression surfaces."""

from __future__ import annotations

import numpy as np

from .errors import InsufficientDataError, RankDeficientError


def lstsq_fit(X: np.ndarray, y: np.ndarray):
    """OLS fit with coefficient standard errors.

    Returns (coef, stderr, rss).  Raises when rows <= columns or the design
    is rank deficient.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, k = X.shape
    if n <= k:
        raise InsufficientDataError(f"need more than {k} rows, got {n}")
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < k:
        raise RankDeficientError(f"design matrix has rank {rank} < {k}")
    resid = y - X @ coef
    rss = float(resid @ resid)
    sigma2 = rss / (n - k)
    xtx_inv = np.linalg.inv(X.T @ X)
    stderr = np.sqrt(np.clip(np.diag(xtx_inv) * sigma2, 0.0, None))
    return coef, stderr, rss
