"""Orthogonal polynomial trend contrasts for equally spaced factor levels."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .distributions import f_sf

ORDER_NAMES = ("linear", "quadratic", "cubic", "quartic", "quintic")


def order_name(order: int) -> str:
    if 1 <= order <= len(ORDER_NAMES):
        return ORDER_NAMES[order - 1]
    return f"order-{order}"


def orthogonal_polynomial_coefficients(k: int) -> list[np.ndarray]:
    """Integer contrast coefficients of orders 1..k-1 on k equally spaced
    points, via exact Gram-Schmidt over the rationals (the classical tables:
    (-2,-1,0,1,2), (2,-1,-2,-1,2), ...)."""
    if k < 2:
        raise ValueError("need at least 2 levels for polynomial contrasts")
    x = [Fraction(i) for i in range(k)]
    basis: list[list[Fraction]] = []
    for order in range(k):
        vec = [xi**order for xi in x]
        for prev in basis:
            norm = sum(p * p for p in prev)
            proj = sum(v * p for v, p in zip(vec, prev)) / norm
            vec = [v - proj * p for v, p in zip(vec, prev)]
        basis.append(vec)
    out = []
    for vec in basis[1:]:
        denom_lcm = 1
        for v in vec:
            denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
        ints = [int(v * denom_lcm) for v in vec]
        common = 0
        for v in ints:
            common = gcd(common, abs(v))
        ints = [v // common for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        out.append(np.array(ints, dtype=np.int64))
    return out


@dataclass
class TrendRow:
    order: int
    name: str
    ss: float
    f: float
    p: float


def _check_spacing(levels: np.ndarray) -> None:
    gaps = np.diff(levels)
    if not (gaps > 0).all() and not (gaps < 0).all():
        raise ValueError("levels must be strictly monotone")
    ref = gaps[0]
    if not np.allclose(gaps, ref, rtol=1e-9, atol=0.0):
        raise ValueError("trend contrasts require equally spaced levels")


def trend_contrasts(
    level_means,
    levels,
    r_per_mean: int,
    ms_error: float,
    df_error: int,
) -> list[TrendRow]:
    """Partition a factor's sum of squares into polynomial trend components.

    SS_order = r * (sum c_i m_i)^2 / (sum c_i^2); the orders 1..k-1 add up to
    the factor's main-effect sum of squares.
    """
    means = np.asarray(level_means, dtype=np.float64)
    lv = np.asarray(levels, dtype=np.float64)
    if means.shape != lv.shape or means.ndim != 1:
        raise ValueError("level_means and levels must be 1-d and equally long")
    if means.size < 3:
        raise ValueError("trend contrasts need at least 3 levels")
    if r_per_mean < 1:
        raise ValueError("r_per_mean must be >= 1")
    if ms_error < 0 or df_error < 1:
        raise ValueError("need ms_error >= 0 and df_error >= 1")
    _check_spacing(lv)
    rows = []
    for order, coeff in enumerate(orthogonal_polynomial_coefficients(means.size), 1):
        contrast = float(np.dot(coeff, means))
        ss = r_per_mean * contrast**2 / float(np.dot(coeff, coeff))
        if ms_error > 0:
            f = ss / ms_error
            p = f_sf(f, 1, df_error)
        else:
            f = 0.0
            p = 1.0
        rows.append(TrendRow(order=order, name=order_name(order), ss=ss, f=f, p=p))
    return rows
