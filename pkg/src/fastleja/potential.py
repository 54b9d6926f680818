"""Vandermonde growth, transfinite-diameter estimates and tau ratios.

Indexing follows the sequence convention a_0, a_1, ...: at stage n the node
polynomial p_n has zeros a_0..a_{n-1}, the new point is a_n, and
L_n = prod_{j<k<=n} |a_j - a_k| is the Vandermonde modulus of a_0..a_n. Then
L_n / L_{n-1} = |p_n(a_n)| and L_n^{2/(n(n+1))} -> d(K) for good sequences.

Pairwise log-sums are accumulated in ``np.longdouble`` (80-bit on x86) so
that ln L_n, which grows like n^2, keeps absolute errors near 1e-12 at
n ~ 1000.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from fastleja.bounds import supnorm
from fastleja.core import generate
from fastleja.domain import DomainSpec, Interval, is_real, real_parts

_ROWS = 256


def _ext(points) -> np.ndarray:
    pts = np.asarray(points)
    if np.iscomplexobj(pts):
        return pts.astype(np.clongdouble)
    return pts.astype(np.longdouble)


def _row_logs(pts: np.ndarray) -> np.ndarray:
    """r[k] = sum_{j<k} ln|a_k - a_j| in extended precision."""
    n = len(pts)
    out = np.zeros(n, dtype=np.longdouble)
    for r0 in range(1, n, _ROWS):
        r1 = min(n, r0 + _ROWS)
        d = np.abs(pts[r0:r1, None] - pts[None, :r1])
        mask = np.arange(r1)[None, :] < np.arange(r0, r1)[:, None]
        with np.errstate(divide="ignore"):
            logs = np.where(mask, np.log(np.where(mask, d, 1)), 0)
        out[r0:r1] = logs.sum(axis=1)
    return out


def log_vdm(points) -> float:
    """ln|VDM| = sum_{j<k} ln|a_j - a_k|; ``-inf`` if two points coincide.

    >>> round(log_vdm([0.0, 0.5, 1.0]), 6)
    -1.386294
    """
    pts = _ext(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    return float(np.sum(_row_logs(pts)))


def log_vdm_series(points) -> np.ndarray:
    """ln|VDM(a_0..a_m)| for every m (index 0 holds 0).

    Returned in ``np.longdouble`` so consecutive differences stay accurate
    even where ln L_m itself is of order 1e5 or more.
    """
    return np.cumsum(_row_logs(_ext(points)))


def dn_root(points) -> float:
    """|VDM|^{2/(n(n+1))} with n = number of points."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    return math.exp(2.0 * log_vdm(points) / (n * (n + 1)))


def cheb_constant(interval: DomainSpec, n: int) -> float:
    """tau_n([a, b]) = (2 ((b - a)/4)^n)^{1/n}, from the scaled Chebyshev polynomial."""
    if not isinstance(interval, Interval):
        raise TypeError("the Chebyshev-constant oracle is defined for intervals only")
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.exp((math.log(2.0) + n * math.log((interval.b - interval.a) / 4.0)) / n)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    log_vdm: float
    dn_root: float
    step_ratio: float
    tau_ratio: float
    pseudo_growth: float


def log_supnorm(zeros, domain: DomainSpec, tol: float = 1e-12) -> float:
    """ln ||p||_K for the monic polynomial with the given real zeros."""
    if not is_real(domain):
        raise ValueError("sup norms are only estimated on real domains")
    return max(supnorm(zeros, a, b, tol, grid_size=64)[1] for a, b in real_parts(domain))


def growth_report(seq, domain: DomainSpec, stages, tol: float = 1e-12) -> list[GrowthRow]:
    """GrowthRow for each stage n (1 <= n < len(seq)); see the module docstring.

    ``tau_ratio`` and ``pseudo_growth`` are NaN on curves. The sup norm is
    never taken below |p_n(a_n)|, so tau_ratio <= 1 holds exactly.
    """
    seq = np.asarray(seq)
    stages = [int(s) for s in stages]
    if any(s < 1 or s >= len(seq) for s in stages):
        raise ValueError(f"stages must lie in [1, {len(seq) - 1}]")
    series = log_vdm_series(seq[: max(stages) + 1])
    real = is_real(domain)
    rows = []
    for n in stages:
        lv = float(series[n])
        step = float(series[n] - series[n - 1])
        if real:
            zeros = seq[:n].real if np.iscomplexobj(seq) else seq[:n]
            ls = max(log_supnorm(zeros, domain, tol), step)
            tau = math.exp(step - ls)
            pseudo = (ls - step) / n
        else:
            tau = pseudo = math.nan
        rows.append(GrowthRow(n, lv, math.exp(2.0 * lv / (n * (n + 1))), math.exp(step), tau, pseudo))
    return rows


def growth_csv(rows: list[GrowthRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "log_vdm", "dn_root", "step_ratio", "tau_ratio", "pseudo_growth"])
    for r in rows:
        w.writerow([r.n] + [repr(float(v)) for v in
                            (r.log_vdm, r.dn_root, r.step_ratio, r.tau_ratio, r.pseudo_growth)])
    return buf.getvalue()


def growth_json(rows: list[GrowthRow]) -> str:
    return json.dumps({"schema_version": "1", "rows": [asdict(r) for r in rows]}, sort_keys=True)


@dataclass(frozen=True)
class Fig3Data:
    x: np.ndarray
    p: np.ndarray
    midpoints: np.ndarray
    twice_p: np.ndarray


def fig3_data(n: int = 13, s1: float = 0.5, samples: int = 2001) -> Fig3Data:
    """Graph of p_n for the first ``n`` fast Leja points on [0, 1] and 2 p_n at gap midpoints."""
    pts = generate(Interval(0.0, 1.0), n, s1)
    x = np.linspace(0.0, 1.0, samples)
    p = np.prod(x[:, None] - pts[None, :], axis=1)
    srt = np.sort(pts)
    mids = 0.5 * (srt[:-1] + srt[1:])
    twice = 2.0 * np.prod(mids[:, None] - pts[None, :], axis=1)
    return Fig3Data(x, p, mids, twice)


def fig3_csv(data: Fig3Data) -> tuple[str, str]:
    """The two CSV streams: ``x,p13`` graph samples and ``midpoint,2p13`` circles."""
    a = io.StringIO()
    w = csv.writer(a, lineterminator="\n")
    w.writerow(["x", "p13"])
    w.writerows([repr(float(x)), repr(float(v))] for x, v in zip(data.x, data.p))
    b = io.StringIO()
    w = csv.writer(b, lineterminator="\n")
    w.writerow(["midpoint", "2p13"])
    w.writerows([repr(float(x)), repr(float(v))] for x, v in zip(data.midpoints, data.twice_p))
    return a.getvalue(), b.getvalue()


def step_log(seq, n: int) -> float:
    """ln|p_n(a_n)| evaluated directly in float64, independent of the VDM sums."""
    seq = np.asarray(seq)
    with np.errstate(divide="ignore"):
        return math.fsum(np.log(np.abs(seq[n] - seq[:n])).tolist())
