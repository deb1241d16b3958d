"""Pure implementations of the compiled kernels.

``dtw_accumulate`` mirrors the Cython loop operation for operation, so the
two backends produce bit-identical matrices.  ``df_tau_stats`` evaluates the
same regressions vectorized across replications; summation order differs from
the compiled loop, so agreement is to float rounding rather than bit-exact.
"""

from __future__ import annotations

import numpy as np


def dtw_accumulate(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, m = len(a), len(b)
    D = np.empty((n, m), dtype=np.float64)
    D[0, 0] = 2.0 * abs(a[0] - b[0])
    for j in range(1, m):
        D[0, j] = D[0, j - 1] + abs(a[0] - b[j])
    for i in range(1, n):
        ai = a[i]
        D[i, 0] = D[i - 1, 0] + abs(ai - b[0])
        for j in range(1, m):
            d = abs(ai - b[j])
            best = D[i - 1, j - 1] + 2.0 * d
            v = D[i - 1, j] + d
            if v < best:
                best = v
            v = D[i, j - 1] + d
            if v < best:
                best = v
            D[i, j] = best
    return D


def df_tau_stats(innovations: np.ndarray, variant: int) -> np.ndarray:
    """Unit-root tau statistics for random walks built from ``innovations``.

    See the compiled twin for the regression being evaluated; ``variant``
    selects the deterministic terms (0 none, 1 intercept, 2 intercept and
    linear trend), removed here via an orthonormal projection shared across
    all replications.
    """
    innovations = np.asarray(innovations, dtype=np.float64)
    n, _ = innovations.shape
    nobs = n - 1
    if nobs < 4:
        raise ValueError("need at least 5 points per walk")
    if variant not in (0, 1, 2):
        raise ValueError("variant must be 0, 1 or 2")

    y = np.cumsum(innovations, axis=0)
    x = y[:-1]              # y_{t-1}
    z = innovations[1:]     # dy_t

    sxx = np.einsum("ij,ij->j", x, x)
    sxz = np.einsum("ij,ij->j", x, z)
    szz = np.einsum("ij,ij->j", z, z)

    if variant >= 1:
        q1 = np.full(nobs, 1.0 / np.sqrt(nobs))
        a1x = q1 @ x
        a1z = q1 @ z
        sxx = sxx - a1x * a1x
        sxz = sxz - a1x * a1z
        szz = szz - a1z * a1z
    if variant == 2:
        r = np.arange(nobs, dtype=np.float64)
        rc = r - r.mean()
        q2 = rc / np.sqrt(rc @ rc)
        a2x = q2 @ x
        a2z = q2 @ z
        sxx = sxx - a2x * a2x
        sxz = sxz - a2x * a2z
        szz = szz - a2z * a2z

    gamma = sxz / sxx
    rss = szz - gamma * sxz
    sigma2 = rss / (nobs - 1 - variant)
    return gamma / np.sqrt(sigma2 / sxx)
