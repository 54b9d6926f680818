"""Sup norms of real-rooted polynomials and the midpoint bounds built on them.

Setup: real zeros zeta_1 < ... < zeta_{n1} < -eps < eps < eta_1 < ... < eta_{n2},
and p the monic polynomial with those zeros together with -eps and eps.
With q1 = prod (z - zeta_j), q2 = prod (z - eta_j), p1 = (z^2 - eps^2) q1 and
p2 = (z^2 - eps^2) q2, the quantities checked are

  * m > 0:  |q2(m)| < exp(eps * sum 1/|eta_j|) |q2(0)|  and  |p1(m)| < eps |p1'(eps)|
  * m < 0:  |q1(m)| < exp(eps * sum 1/|eta_j|) |q1(0)|  and  |p2(m)| < eps |p2'(-eps)|
  * always: ||p||_I / |p(0)| <= 2 exp(eps * (sum 1/|zeta_j| + sum 1/|eta_j|))

where I = [-eps, eps] and m is the maximizer of |p| on I.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from fastleja._search import chebyshev_grid, golden_max, log_ratio


_BLOCK = 32


def _logabs(x, zeros: np.ndarray) -> np.ndarray:
    """ln|p(x)| on an array of abscissae.

    Distances are scaled by the joint span so every factor is <= 1 and
    multiplied in blocks of 32 before taking logs; block products that
    underflow are recomputed term by term.
    """
    x = np.asarray(x, dtype=float)
    lo = min(x.min(), zeros.min())
    span = max(x.max(), zeros.max()) - lo
    span = span if span > 0 else 1.0
    n = zeros.size
    pad = (-n) % _BLOCK
    zpad = np.concatenate([zeros, np.full(pad, np.nan)])
    out = np.empty(x.size)
    rows = max(1, (1 << 22) // max(n + pad, 1))
    for r0 in range(0, x.size, rows):
        xc = x[r0:r0 + rows]
        d = np.abs(xc[:, None] - zpad[None, :]) * (1.0 / span)
        d[:, n:] = 1.0
        prods = d.reshape(len(xc), -1, _BLOCK).prod(axis=2)
        with np.errstate(divide="ignore"):
            logs = np.log(prods)
        for i in np.flatnonzero((prods < 1e-280).any(axis=1)):
            with np.errstate(divide="ignore"):
                logs[i] = 0.0
                logs[i, 0] = np.sum(np.log(d[i, :n]))
        out[r0:r0 + rows] = logs.sum(axis=1)
    return out + n * math.log(span)


def _dlog(x: np.ndarray, zeros: np.ndarray) -> np.ndarray:
    """Derivative of ln|p| at points that are not zeros."""
    out = np.empty(len(x))
    rows = max(1, (1 << 22) // max(zeros.size, 1))
    for r0 in range(0, len(x), rows):
        out[r0:r0 + rows] = np.sum(1.0 / (x[r0:r0 + rows, None] - zeros[None, :]), axis=1)
    return out


def supnorm(zeros, a: float, b: float, tol: float = 1e-12,
            grid_size: int | None = None, per_gap: int = 1) -> tuple[float, float]:
    """Maximizer and log-value of |prod (x - z_j)| over [a, b].

    Samples a Chebyshev grid of ``grid_size`` points (default
    max(64, 8 * len(zeros))) plus ``per_gap`` equally spaced points in every gap
    between zeros inside [a, b]. Between consecutive zeros
    ln|p| is strictly concave, so each such segment has one maximum, bracketed
    by the neighbours of its best sample. Segments whose tangent-line bound
    cannot beat the best sample are dropped; the rest are refined by
    golden-section search to ``tol``. Near-ties (relative 1e-12) go to the
    smaller abscissa.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    zeros = np.sort(np.asarray(zeros, dtype=float))
    if zeros.size == 0:
        return a, 0.0
    inner = np.unique(zeros[(zeros > a) & (zeros < b)])
    if grid_size is None:
        grid_size = max(64, 8 * zeros.size)
    xs = chebyshev_grid(a, b, max(grid_size, 2))
    if inner.size > 1:
        frac = np.arange(1, per_gap + 1) / (per_gap + 1)
        gaps = inner[:-1, None] + frac[None, :] * np.diff(inner)[:, None]
        xs = np.union1d(xs, gaps.ravel())
    vals = _logabs(xs, zeros)
    seg = np.searchsorted(inner, xs, side="right")
    bounds_ = np.concatenate([[a], inner, [b]])

    # best sample of each segment (first index on ties)
    order = np.lexsort((np.arange(len(xs)), -vals, seg))
    first = np.ones(len(order), dtype=bool)
    first[1:] = seg[order][1:] != seg[order][:-1]
    best_idx = order[first]
    best_idx = best_idx[np.isfinite(vals[best_idx])]
    floor = float(np.max(vals))

    lo = np.where((best_idx > 0) & (seg[np.maximum(best_idx - 1, 0)] == seg[best_idx]),
                  xs[np.maximum(best_idx - 1, 0)], bounds_[seg[best_idx]])
    hi = np.where((best_idx < len(xs) - 1) & (seg[np.minimum(best_idx + 1, len(xs) - 1)] == seg[best_idx]),
                  xs[np.minimum(best_idx + 1, len(xs) - 1)], bounds_[seg[best_idx] + 1])
    slope = _dlog(xs[best_idx], zeros)
    reach = np.maximum(xs[best_idx] - lo, hi - xs[best_idx])
    upper = vals[best_idx] + np.abs(slope) * reach
    keep = upper >= floor - 1e-12 * max(1.0, abs(floor))

    def diff(x1, x2):
        return log_ratio(x2 - x1, x1 - zeros)

    found = {}
    for i, l, h in zip(best_idx[keep], lo[keep], hi[keep]):
        top = float(xs[i])
        l, h = float(l), float(h)
        for cand in (golden_max(diff, l, h, tol), l, h):
            if cand != top and np.all(cand != zeros) and diff(top, cand) > 0:
                top = cand
        found[top] = math.fsum(np.log(np.abs(top - zeros)).tolist())
    xs_f = sorted(found)
    vs = np.array([found[x] for x in xs_f])
    vmax = np.max(vs)
    tie = 1e-12 * max(1.0, abs(vmax))
    k = int(np.flatnonzero(vs >= vmax - tie)[0])
    return xs_f[k], float(vs[k])


class InvalidConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BoundConfig:
    epsilon: float
    zetas: tuple[float, ...]
    etas: tuple[float, ...]

    def __post_init__(self):
        z, e, eps = self.zetas, self.etas, self.epsilon
        if not eps > 0:
            raise InvalidConfigError("epsilon must be positive")
        if len(z) < 1 or len(e) < 1:
            raise InvalidConfigError("need at least one zeta and one eta")
        if any(b <= a for a, b in zip(z, z[1:])) or any(b <= a for a, b in zip(e, e[1:])):
            raise InvalidConfigError("zetas and etas must be strictly increasing")
        if not (z[-1] < -eps and e[0] > eps):
            raise InvalidConfigError("need zeta_n1 < -epsilon < epsilon < eta_1")
        object.__setattr__(self, "zetas", tuple(float(v) for v in z))
        object.__setattr__(self, "etas", tuple(float(v) for v in e))

    @property
    def zeros(self) -> np.ndarray:
        return np.array(self.zetas + (-self.epsilon, self.epsilon) + self.etas)

    @property
    def n(self) -> int:
        return len(self.zetas) + len(self.etas) + 2


@dataclass(frozen=True)
class BoundCheck:
    config: BoundConfig
    m: float
    lemma2_ok: bool
    prop3_ok: bool
    prop3_margin: float  # log(rhs) - log(lhs)
    lemma2_case: str  # "right", "left" or "vacuous"


def _logprod(x: float, zeros) -> float:
    return math.fsum(math.log(abs(x - z)) for z in zeros)


def _evaluate(config: BoundConfig, tol: float) -> BoundCheck:
    eps = config.epsilon
    zeta = np.array(config.zetas)
    eta = np.array(config.etas)
    m, log_sup = supnorm(config.zeros, -eps, eps, tol)
    growth = eps * float(np.sum(1.0 / np.abs(eta)))

    # m = 0 is excluded from both cases; within search tolerance counts as 0
    if abs(m) <= 10.0 * tol:
        case, lemma_ok = "vacuous", True
    elif m > 0:
        case = "right"
        q_ok = _logprod(m, eta) < growth + _logprod(0.0, eta)
        # |p1'(eps)| = 2 eps |q1(eps)|
        p_ok = _logprod(m, np.concatenate([[-eps, eps], zeta])) < (
            math.log(eps) + math.log(2 * eps) + _logprod(eps, zeta))
        lemma_ok = q_ok and p_ok
    else:
        case = "left"
        q_ok = _logprod(m, zeta) < growth + _logprod(0.0, zeta)
        p_ok = _logprod(m, np.concatenate([[-eps, eps], eta])) < (
            math.log(eps) + math.log(2 * eps) + _logprod(-eps, eta))
        lemma_ok = q_ok and p_ok

    log_lhs = log_sup - _logprod(0.0, config.zeros)
    log_rhs = math.log(2.0) + eps * math.fsum(np.concatenate([1.0 / np.abs(zeta), 1.0 / np.abs(eta)]).tolist())
    margin = log_rhs - log_lhs
    return BoundCheck(config, m, lemma_ok, margin >= 0.0, margin, case)


def check_lemma2(config: BoundConfig, tol: float = 1e-12) -> BoundCheck:
    """Verify the one-sided midpoint bounds at the maximizer m of |p| on [-eps, eps].

    Passes vacuously when m is numerically 0. The returned record also
    carries the sup-norm ratio verdict.
    """
    return _evaluate(config, tol)


def check_prop3(config: BoundConfig, tol: float = 1e-12) -> BoundCheck:
    """Verify ||p||_I / |p(0)| <= 2 exp(eps * sum over the outer zeros of 1/|z|).

    ``prop3_margin`` is the log-space gap rhs - lhs.
    """
    return _evaluate(config, tol)


def random_config(seed: int, max_each: int = 8, standoff: float = 0.05) -> BoundConfig:
    """Random configuration: eps in [0.01, 0.3], up to ``max_each`` zeros per side in
    [-3, -eps - standoff] and [eps + standoff, 3]."""
    rng = np.random.default_rng(seed)
    eps = float(rng.uniform(0.01, 0.3))
    n1 = int(rng.integers(1, max_each + 1))
    n2 = int(rng.integers(1, max_each + 1))
    zetas = np.sort(rng.uniform(-3.0, -eps - standoff, n1))
    etas = np.sort(rng.uniform(eps + standoff, 3.0, n2))
    return BoundConfig(eps, tuple(zetas), tuple(etas))


def run_trials(trials: int, seed: int, threads: int = 1) -> list[BoundCheck]:
    """Check ``trials`` random configurations; trial i uses seed ``seed + i``.

    Results are in trial order and independent of ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")

    def one(i):
        return check_lemma2(random_config(seed + i))

    if threads <= 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(trials)))


def trials_csv(checks: list[BoundCheck]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "epsilon", "n1", "n2", "m", "lemma2_ok", "prop3_ok", "prop3_log_margin"])
    for i, c in enumerate(checks):
        w.writerow([i, repr(c.config.epsilon), len(c.config.zetas), len(c.config.etas), repr(c.m),
                    str(c.lemma2_ok).lower(), str(c.prop3_ok).lower(), repr(c.prop3_margin)])
    return buf.getvalue()
