# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two hot loops.

``dtw_accumulate`` fills the warping cost matrix (the O(n*m) inner loop of
every alignment), ``df_tau_stats`` evaluates one unit-root tau statistic per
simulated random walk (the inner loop of critical-value calibration).  Both
have drop-in pure implementations in ``_fallback``; results agree exactly for
the DTW matrix and to float rounding for the tau statistics.
"""

from libc.math cimport fabs, sqrt

import numpy as np


def dtw_accumulate(double[::1] a, double[::1] b):
    """Accumulated-cost matrix, diagonal steps weighted twice the side steps.

    The (0, 0) cell enters on a diagonal, so it carries weight 2.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] D = out
    cdef Py_ssize_t i, j
    cdef double d, best, v, ai

    D[0, 0] = 2.0 * fabs(a[0] - b[0])
    for j in range(1, m):
        D[0, j] = D[0, j - 1] + fabs(a[0] - b[j])
    for i in range(1, n):
        ai = a[i]
        D[i, 0] = D[i - 1, 0] + fabs(ai - b[0])
        for j in range(1, m):
            d = fabs(ai - b[j])
            best = D[i - 1, j - 1] + 2.0 * d
            v = D[i - 1, j] + d
            if v < best:
                best = v
            v = D[i, j - 1] + d
            if v < best:
                best = v
            D[i, j] = best
    return out


def df_tau_stats(double[:, ::1] innovations, int variant):
    """Unit-root tau statistics for random walks built from ``innovations``.

    Column k of ``innovations`` (shape n x reps) holds the step noise of one
    random walk y_t.  For each walk the regression of dy_t on y_{t-1} plus the
    deterministic terms selected by ``variant`` (0 none, 1 intercept,
    2 intercept and linear trend) yields tau = gamma_hat / se(gamma_hat).
    Deterministic terms are removed through an orthonormal projection so each
    replication costs one pass.
    """
    cdef Py_ssize_t n = innovations.shape[0]
    cdef Py_ssize_t reps = innovations.shape[1]
    cdef Py_ssize_t nobs = n - 1
    if nobs < 4:
        raise ValueError("need at least 5 points per walk")
    if variant < 0 or variant > 2:
        raise ValueError("variant must be 0, 1 or 2")

    out = np.empty(reps, dtype=np.float64)
    cdef double[::1] tau = out

    cdef double rbar = (nobs - 1) / 2.0
    cdef double s2 = 0.0
    cdef Py_ssize_t r, k
    for r in range(nobs):
        s2 += (r - rbar) * (r - rbar)
    cdef double snorm = sqrt(s2)
    cdef double root_nobs = sqrt(<double> nobs)

    cdef double cum, x, z
    cdef double sx, sxr, sxx, sz, szr, szz, sxz
    cdef double a1x, a2x, a1z, a2z
    cdef double qxx, qxz, qzz, gamma, rss, sigma2, kparams

    kparams = <double> (nobs - 1 - variant)

    for k in range(reps):
        cum = innovations[0, k]
        sx = 0.0
        sxr = 0.0
        sxx = 0.0
        sz = 0.0
        szr = 0.0
        szz = 0.0
        sxz = 0.0
        for r in range(nobs):
            x = cum
            z = innovations[r + 1, k]
            sx += x
            sxr += x * r
            sxx += x * x
            sz += z
            szr += z * r
            szz += z * z
            sxz += x * z
            cum += z
        qxx = sxx
        qxz = sxz
        qzz = szz
        if variant >= 1:
            a1x = sx / root_nobs
            a1z = sz / root_nobs
            qxx -= a1x * a1x
            qxz -= a1x * a1z
            qzz -= a1z * a1z
        if variant == 2:
            a2x = (sxr - rbar * sx) / snorm
            a2z = (szr - rbar * sz) / snorm
            qxx -= a2x * a2x
            qxz -= a2x * a2z
            qzz -= a2z * a2z
        gamma = qxz / qxx
        rss = qzz - gamma * qxz
        sigma2 = rss / kparams
        tau[k] = gamma / sqrt(sigma2 / qxx)
    return out
