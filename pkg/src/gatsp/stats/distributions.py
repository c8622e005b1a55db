"""Probability helpers used by the ANOVA and Duncan test.

The F upper-tail probability goes through the regularized incomplete beta
function.  The studentized range quantile is computed from scratch: its CDF
is the scale mixture of the range of k standard normals over the chi
distribution of the error estimate, evaluated with Gauss-Legendre quadrature,
and the quantile is found by bisection.
"""

from functools import lru_cache

import numpy as np
from scipy import special
from scipy.stats import chi2

P_FLOOR = 1e-16


def f_sf(f: float, df1: int, df2: int) -> float:
    """Upper-tail probability of an F statistic (the ``Pr>F`` column)."""
    if df1 < 1 or df2 < 1:
        raise ValueError("F degrees of freedom must be >= 1")
    if f < 0 or not np.isfinite(f):
        raise ValueError("F statistic must be finite and >= 0")
    x = df2 / (df2 + df1 * f)
    return float(special.betainc(df2 / 2.0, df1 / 2.0, x))


def clamp_p(p: float) -> float:
    return min(1.0, max(P_FLOOR, p))


@lru_cache(maxsize=None)
def _gl_nodes(npts: int, lo: float, hi: float):
    x, w = np.polynomial.legendre.leggauss(npts)
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    return mid + half * x, half * w


def _range_cdf(w: np.ndarray, k: int, n_inner: int = 160) -> np.ndarray:
    """P(range of k iid standard normals <= w), elementwise; w >= 0."""
    z, wz = _gl_nodes(n_inner, -9.0, 9.0)
    phi = np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)
    big_phi = special.ndtr(z)
    # columns: z nodes; rows: requested range widths
    span = special.ndtr(z[None, :] + w[:, None]) - big_phi[None, :]
    integrand = k * phi[None, :] * np.power(span, k - 1)
    return integrand @ wz


def studentized_range_cdf(q: float, k: int, df: int, n_outer: int = 96) -> float:
    """P(Q <= q) for the studentized range with k means and df error df."""
    if k < 2 or df < 1:
        raise ValueError("studentized range needs k >= 2 and df >= 1")
    if q <= 0:
        return 0.0
    u, wu = _gl_nodes(n_outer, 0.0, 1.0)
    s = np.sqrt(chi2.ppf(u, df) / df)
    return float(np.dot(_range_cdf(q * s, k), wu))


def studentized_range_quantile(k: int, df: int, alpha: float) -> float:
    """Upper-alpha quantile of the studentized range, by bisection."""
    if k < 2 or df < 1:
        raise ValueError("studentized range needs k >= 2 and df >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    target = 1.0 - alpha
    lo, hi = 0.0, 8.0
    while studentized_range_cdf(hi, k, df) < target:
        hi *= 2.0
        if hi > 1e6:
            raise ArithmeticError("studentized range quantile did not bracket")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if studentized_range_cdf(mid, k, df) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
