"""Local-gap diagnostics of triangular arrays on the real line.

For a sorted row z_1 < ... < z_n and each gap j, with midpoint m_j, half-gap
s_n(j) = |m_j - z_j| and harmonic mean distance

    H_n(j) = ( (1/n) * sum_k 1/|m_j - z_k| )^(-1),

an array has the star property when max_j s_n(j)/H_n(j) -> 0. This module
measures that ratio, checks two-sided power-law separation bounds of the
form  B1 |(j-k)/n|^a1 <= |b_j - b_k| <= B2 |(j-k)/n|^a2,  and compares
empirical distributions with the arcsine and uniform laws.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

# Relative slack for the separation inequalities; equality cases such as
# b_j = j/n with unit constants are otherwise decided by rounding.
SEPARATION_RTOL = 1e-12

_CHUNK = 512


class DuplicatePointError(ValueError):
    pass


@dataclass(frozen=True)
class ArrayRow:
    n: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or len(pts) != self.n:
            raise ValueError("row length must equal n")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("row points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points) -> "ArrayRow":
        pts = np.sort(np.asarray(points, dtype=float))
        return cls(len(pts), pts)


def sorted_prefix(seq, n: int) -> ArrayRow:
    """First ``n`` entries of ``seq`` as a sorted row."""
    head = np.asarray(seq[:n], dtype=float)
    if len(head) < n:
        raise ValueError(f"sequence has only {len(head)} entries, need {n}")
    srt = np.sort(head)
    if np.any(np.diff(srt) == 0):
        raise DuplicatePointError("duplicate points among the first n entries")
    return ArrayRow(n, srt)


@dataclass(frozen=True)
class StarReport:
    n: int
    midpoint: np.ndarray
    s: np.ndarray
    H: np.ndarray
    ratio: np.ndarray
    max_ratio: float
    argmax_j: int  # 1-based gap index

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "j", "midpoint", "s", "H", "ratio"])
        for j in range(self.n - 1):
            w.writerow([self.n, j + 1, repr(float(self.midpoint[j])), repr(float(self.s[j])),
                        repr(float(self.H[j])), repr(float(self.ratio[j]))])
        buf.write(f"# summary n={self.n} max_ratio={self.max_ratio!r} argmax_j={self.argmax_j}\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "schema_version": "1", "n": self.n, "max_ratio": self.max_ratio,
            "argmax_j": self.argmax_j,
            "rows": [{"j": j + 1, "midpoint": float(self.midpoint[j]), "s": float(self.s[j]),
                      "H": float(self.H[j]), "ratio": float(self.ratio[j])}
                     for j in range(self.n - 1)],
        }


def star_metrics(row: ArrayRow) -> StarReport:
    """Midpoints, half-gaps, harmonic distances and their ratios for a row.

    Every point of the row, including the two ends of the gap, enters H.
    Ties in the maximal ratio resolve to the smallest j.
    """
    if row.n < 2:
        raise ValueError("need at least two points")
    z = row.points
    mids = 0.5 * (z[:-1] + z[1:])
    s = np.abs(mids - z[:-1])
    inv_h = np.empty(row.n - 1)
    for lo in range(0, row.n - 1, _CHUNK):
        block = mids[lo:lo + _CHUNK, None]
        inv_h[lo:lo + _CHUNK] = np.sum(1.0 / np.abs(block - z[None, :]), axis=1) / row.n
    H = 1.0 / inv_h
    ratio = s * inv_h
    j = int(np.argmax(ratio))
    return StarReport(row.n, mids, s, H, ratio, float(ratio[j]), j + 1)


def star_metrics_exact(points: Sequence[Fraction], j: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact (midpoint, s, 1/H) at 1-based gap ``j`` of a rational row."""
    z = sorted(Fraction(p) for p in points)
    n = len(z)
    if not 1 <= j < n:
        raise ValueError("gap index out of range")
    m = (z[j - 1] + z[j]) / 2
    s = abs(m - z[j - 1])
    inv_h = sum(Fraction(1) / abs(m - zk) for zk in z) / n
    return m, s, inv_h


def star_trend(seq, stages: Sequence[int]) -> list[tuple[int, float]]:
    """``(n, max_ratio)`` for the sorted prefixes of ``seq`` at each stage."""
    stages = list(stages)
    if any(b <= a for a, b in zip(stages, stages[1:])):
        raise ValueError("stages must be strictly increasing")
    if stages and stages[-1] > len(seq):
        raise ValueError("largest stage exceeds the sequence length")
    return [(n, star_metrics(sorted_prefix(seq, n)).max_ratio) for n in stages]


def dyadic_sequence(count: int, exact: bool = False) -> list:
    """0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, ... ordered by denominator, then numerator."""
    out = [Fraction(0), Fraction(1)]
    k = 1
    while len(out) < count:
        den = 2 ** k
        out.extend(Fraction(m, den) for m in range(1, den, 2))
        k += 1
    out = out[:count]
    return out if exact else [float(x) for x in out]


def _as_intervals(J) -> tuple[tuple[float, float], ...]:
    if J is None:
        return ()
    if hasattr(J, "parts"):
        return tuple(J.parts)
    return tuple((float(a), float(b)) for a, b in J)


@dataclass
class SeparationFit:
    alpha1: float
    alpha2: float
    B1: float
    B2: float
    J: tuple[tuple[float, float], ...]
    n0: int
    feasible: bool
    first_violation: Optional[dict] = None
    J_length: float = field(init=False)

    def __post_init__(self):
        self.J_length = float(sum(b - a for a, b in self.J))

    def to_json(self) -> str:
        return json.dumps({
            "schema_version": "1",
            "alpha1": self.alpha1, "alpha2": self.alpha2, "B1": self.B1, "B2": self.B2,
            "J": [list(p) for p in self.J], "J_length": self.J_length, "n0": self.n0,
            "feasible": self.feasible, "first_violation": self.first_violation,
        }, indent=2)


def _check_constants(alpha1, alpha2, B1, B2):
    if min(alpha1, alpha2, B1, B2) <= 0:
        raise ValueError("separation constants must be positive")
    if not (alpha2 <= alpha1 < 1 + alpha2):
        raise ValueError("need 0 < alpha2 <= alpha1 < 1 + alpha2")


def _excluded(jn: np.ndarray, J) -> np.ndarray:
    mask = np.zeros(len(jn), dtype=bool)
    for a, b in J:
        mask |= (jn >= a) & (jn <= b)
    return mask


def _row_points(row) -> np.ndarray:
    return row.points if isinstance(row, ArrayRow) else np.asarray(row, dtype=float)


def separation_check(rows, alpha1: float, alpha2: float, B1: float, B2: float,
                     J=(), n0: int = 1, js: Optional[Sequence[int]] = None) -> SeparationFit:
    """Check the two-sided separation bounds on every row with n >= n0.

    Row entries are indexed j = 1..n. Indices with j/n in the closed set J
    are skipped; ``js`` optionally restricts the check to the listed j. The
    first violating (n, j, k) is reported.
    """
    _check_constants(alpha1, alpha2, B1, B2)
    J = _as_intervals(J)
    fit = SeparationFit(alpha1, alpha2, B1, B2, J, n0, True)
    for row in rows:
        b = _row_points(row)
        n = len(b)
        if n < n0:
            continue
        idx = np.arange(1, n + 1)
        check = ~_excluded(idx / n, J)
        if js is not None:
            check &= np.isin(idx, list(js))
        for j in idx[check]:
            dk = np.abs(j - idx) / n
            db = np.abs(b[j - 1] - b)
            lower = B1 * dk ** alpha1
            upper = B2 * dk ** alpha2
            bad = (lower > db * (1 + SEPARATION_RTOL)) | (db > upper * (1 + SEPARATION_RTOL))
            if np.any(bad):
                k = int(idx[np.argmax(bad)])
                fit.feasible = False
                fit.first_violation = {"n": n, "j": int(j), "k": k,
                                       "gap": float(db[k - 1]), "lower": float(lower[k - 1]),
                                       "upper": float(upper[k - 1])}
                return fit
    return fit


def fit_separation(rows, J=(), n0: int = 1, alpha1: Optional[float] = None,
                   alpha2: Optional[float] = None, slack: float = 2.0,
                   js: Optional[Sequence[int]] = None) -> SeparationFit:
    """Heuristic witness constants for :func:`separation_check`.

    Missing exponents come from a log-log least-squares fit of |b_j - b_k|
    against |j - k|/n (both set to the fitted slope). B1 and B2 are the
    extreme envelope ratios divided, respectively multiplied, by ``slack``.
    Not a proof of anything: the result only witnesses the supplied rows.
    """
    J = _as_intervals(J)
    xs, ys = [], []
    for row in rows:
        b = _row_points(row)
        n = len(b)
        if n < n0:
            continue
        idx = np.arange(1, n + 1)
        check = ~_excluded(idx / n, J)
        if js is not None:
            check &= np.isin(idx, list(js))
        for j in idx[check]:
            keep = idx != j
            xs.append(np.abs(j - idx[keep]) / n)
            ys.append(np.abs(b[j - 1] - b[keep]))
    if not xs:
        raise ValueError("no (j, k) pairs to fit")
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    if alpha1 is None or alpha2 is None:
        slope = float(np.polyfit(np.log(x), np.log(y), 1)[0])
        alpha1 = slope if alpha1 is None else alpha1
        alpha2 = slope if alpha2 is None else alpha2
    B1 = float(np.min(y / x ** alpha1)) / slack
    B2 = float(np.max(y / x ** alpha2)) * slack
    return separation_check(rows, alpha1, alpha2, B1, B2, J, n0, js)


def arcsine_cdf(x, a: float = 0.0, b: float = 1.0):
    """Distribution function of the equilibrium (arcsine) measure of [a, b]."""
    u = np.clip((np.asarray(x, dtype=float) - a) / (b - a), 0.0, 1.0)
    return (2.0 / np.pi) * np.arcsin(np.sqrt(u))


def arcsine_quantile(p, a: float = 0.0, b: float = 1.0):
    return a + (b - a) * np.sin(0.5 * np.pi * np.asarray(p, dtype=float)) ** 2


def uniform_cdf(x, a: float = 0.0, b: float = 1.0):
    return np.clip((np.asarray(x, dtype=float) - a) / (b - a), 0.0, 1.0)


TARGETS = {"arcsine": arcsine_cdf, "uniform": uniform_cdf}


def empirical_cdf_distance(row, target: str = "arcsine", a: float = 0.0, b: float = 1.0) -> float:
    """Kolmogorov-Smirnov distance between a row and a target law on [a, b].

    The supremum is attained at the jumps of the empirical CDF, so only those
    are examined: D = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n).
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}")
    x = np.sort(_row_points(row))
    if x[0] < a or x[-1] > b:
        raise ValueError(f"row points must lie in [{a}, {b}]")
    n = len(x)
    F = TARGETS[target](x, a, b)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def chebyshev_row(n: int) -> np.ndarray:
    """Arcsine-distributed row (1 - cos(pi (j - 1/2) / n)) / 2, j = 1..n."""
    j = np.arange(1, n + 1)
    return 0.5 * (1.0 - np.cos(np.pi * (j - 0.5) / n))


def loglog_slope(ns, values) -> float:
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)), 1)[0])


def trend_csv(trend) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "max_ratio"])
    for n, r in trend:
        w.writerow([n, repr(float(r))])
    return buf.getvalue()


__all__ = [
    "ArrayRow", "StarReport", "SeparationFit", "DuplicatePointError", "sorted_prefix",
    "star_metrics", "star_metrics_exact", "star_trend", "dyadic_sequence", "separation_check",
    "fit_separation", "empirical_cdf_distance", "arcsine_cdf", "arcsine_quantile", "uniform_cdf",
    "chebyshev_row", "loglog_slope", "trend_csv",
]

