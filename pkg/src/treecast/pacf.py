"""Sample autocorrelations and partial autocorrelations.

The ACF uses the biased (1/T) normalization on the demeaned series, which
keeps the Durbin-Levinson recursion for the PACF well conditioned. Both
functions return arrays indexed by lag, with lag 0 set to 1.
"""

from __future__ import annotations

import numpy as np

__all__ = ["acf", "pacf"]


def acf(values, nlags: int) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    n = x.size
    if nlags < 0 or nlags >= n:
        raise ValueError(f"need 0 <= nlags < {n}, got {nlags}")
    xd = x - x.mean()
    denom = float(np.dot(xd, xd))
    out = np.zeros(nlags + 1)
    out[0] = 1.0
    if denom == 0.0:  # constant series: correlations undefined, report none
        return out
    for k in range(1, nlags + 1):
        out[k] = float(np.dot(xd[k:], xd[:-k])) / denom
    return out


def pacf(values, nlags: int) -> np.ndarray:
    """Partial autocorrelations via the Durbin-Levinson recursion.

    ``pacf(x, L)[1]`` equals the lag-1 sample autocorrelation exactly (the
    recursion's base case). If the recursion degenerates numerically the
    remaining lags are reported as 0.
    """
    r = acf(values, nlags)
    out = np.zeros(nlags + 1)
    out[0] = 1.0
    if nlags == 0:
        return out
    phi = np.zeros(nlags + 1)
    phi[1] = r[1]
    out[1] = r[1]
    for k in range(2, nlags + 1):
        den = 1.0 - float(np.dot(phi[1:k], r[1:k]))
        if den <= 1e-12:
            break
        pk = (r[k] - float(np.dot(phi[1:k], r[k - 1 : 0 : -1]))) / den
        phi_new = phi.copy()
        phi_new[k] = pk
        phi_new[1:k] = phi[1:k] - pk * phi[k - 1 : 0 : -1]
        phi = phi_new
        out[k] = pk
    return out
