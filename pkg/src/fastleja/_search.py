"""One-dimensional maximization of log|p| with accurate comparisons.

Near a smooth maximum two log-sums agree to ~1e-16 relative once the
abscissae are within ~1e-8, so comparing them by subtraction cannot locate
the maximizer any better than that. ``log_ratio`` evaluates
ln|p(x2)| - ln|p(x1)| directly as a sum of log1p terms, which keeps its
sign reliable down to parameter gaps of ~1e-15.
"""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def log_ratio(delta, d) -> float:
    """ln|p(x2)| - ln|p(x1)| given ``delta = x2 - x1`` and ``d = x1 - zeros``.

    Works for real or complex differences. Infinite when x1 is a zero.
    """
    d = np.asarray(d)
    if np.any(d == 0):
        return math.inf if np.all(d + delta != 0) else 0.0
    w = delta / d
    if np.iscomplexobj(w):
        # |1 + w|^2 = 1 + 2 Re w + |w|^2
        u = 2.0 * w.real + (w.real**2 + w.imag**2)
    else:
        u = w
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(u > -1.0, np.log1p(np.where(u > -1.0, u, 0.0)), np.log(np.abs(1.0 + u)))
    if np.iscomplexobj(w):
        terms = 0.5 * terms
    return float(np.sum(terms))


def ternary_max(diff, lo: float, hi: float, tol: float) -> float:
    """Ternary search for the maximizer of a unimodal function on [lo, hi].

    ``diff(a, b)`` must return f(b) - f(a).
    """
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if m1 >= m2:
            break
        if diff(m1, m2) > 0:
            lo = m1
        else:
            hi = m2
    return 0.5 * (lo + hi)


def golden_max(diff, lo: float, hi: float, tol: float) -> float:
    """Golden-section search for the maximizer of a unimodal function.

    ``diff(a, b)`` must return f(b) - f(a). Stops when the bracket is narrower
    than ``tol``.
    """
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    while hi - lo > tol:
        if not lo < c < d < hi:
            break
        if diff(c, d) > 0:
            lo, c = c, d
            d = lo + INV_PHI * (hi - lo)
        else:
            hi, d = d, c
            c = hi - INV_PHI * (hi - lo)
    return 0.5 * (lo + hi)


def chebyshev_grid(a: float, b: float, m: int) -> np.ndarray:
    """``m`` Chebyshev-Lobatto points on [a, b], increasing, endpoints exact."""
    if m < 2:
        raise ValueError("need at least two grid points")
    k = np.arange(m)
    x = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(np.pi * k / (m - 1))
    x[0], x[-1] = a, b
    return np.maximum.accumulate(x)
