"""Fast Leja points: the candidate-set state machine and a continuum reference.

Points live in a *chart*: a parameter in [0, 1] (or R/Z for closed curves)
that :func:`fastleja.domain.to_point` sends into K. For an interval and for
registered curves this is the domain parametrization itself; for a union of
intervals it is the affine chart of the hull, so that the right end of one
part and the left end of the next stay distinct parameters.

Magnitudes of node polynomials are always compared as sums of logarithms,
with ``-inf`` marking a coincidence with a zero.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from fastleja._search import log_ratio, ternary_max
from fastleja.domain import (DomainSpec, Interval, IntervalUnion, ParamCurve,
                             from_point, is_closed, map_param, point_diff,
                             to_point)

# Relative width of the band in which two log-values count as tied.
TIE_RTOL = 1e-12


class EmptyCandidatesError(RuntimeError):
    pass


def _tie_argmax(values: np.ndarray) -> int:
    """Index of the maximum, preferring the lowest index among near-ties."""
    best = np.max(values)
    if best == -np.inf:
        return 0
    tol = TIE_RTOL * max(1.0, abs(best))
    return int(np.flatnonzero(values >= best - tol)[0])


def _log_dist(domain: DomainSpec, x, t) -> np.ndarray:
    """Elementwise ln|x - t| in the scoring geometry of ``domain``.

    Real domains are scored in chart coordinates (this differs from the true
    log-distance by the constant ln(hull length), which never changes an
    argmax). Curves are scored with actual distances in C.
    """
    with np.errstate(divide="ignore"):
        if isinstance(domain, ParamCurve):
            return np.log(np.abs(point_diff(domain, x, t)))
        return np.log(np.abs(np.asarray(x, dtype=float) - np.asarray(t, dtype=float)))


def log_abs_poly(points, domain: DomainSpec, x) -> float:
    """Return ln|p(x)| for the node polynomial with zeros at ``points``.

    ``points`` and ``x`` are chart parameters. The result is ``-inf`` exactly
    when ``x`` coincides with one of the points.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return 0.0
    with np.errstate(divide="ignore"):
        terms = np.log(np.abs(point_diff(domain, float(x), pts)))
    if np.any(terms == -np.inf):
        return -math.inf
    return math.fsum(terms.tolist())


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LejaState:
    """Fast Leja points and their interlacing candidates.

    ``scores`` caches the log-value of the node polynomial at each candidate
    (in the domain's scoring geometry) so a step costs O(n).
    """

    domain: DomainSpec
    insertion_order: np.ndarray
    sorted_points: np.ndarray
    candidates: np.ndarray
    scores: np.ndarray = field(repr=False)

    @property
    def n_points(self) -> int:
        return len(self.insertion_order)

    def points(self) -> np.ndarray:
        """Points of K in insertion order."""
        return to_point(self.domain, self.insertion_order)

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if a state invariant is broken."""
        pts, cands = self.sorted_points, self.candidates
        assert np.all(np.diff(pts) > 0), "points not distinct"
        assert np.all(np.diff(cands) > 0), "candidates not distinct"
        assert np.array_equal(np.sort(self.insertion_order), pts), "order/sorted mismatch"
        assert len(self.scores) == len(cands)
        # gap[i] = number of points <= cands[i]; cands[i] sits in gap (gap-1, gap)
        gap = np.searchsorted(pts, cands, side="right")
        assert np.all(gap >= 1) and np.all(pts[gap - 1] != cands), "candidate equals a point"
        if is_closed(self.domain):
            assert len(cands) == len(pts), "closed curve: |S| != |T|"
            # one candidate in each cyclic gap
            assert np.array_equal(gap, np.arange(1, len(pts) + 1)), "interlacing broken"
            return
        # open arcs: exactly one candidate in each gap that lies inside K
        inside = _inside_gaps(self.domain, pts)
        assert np.array_equal(gap, np.flatnonzero(inside) + 1), "interlacing broken"
        if isinstance(self.domain, (Interval, ParamCurve)):
            assert len(cands) == len(pts) - 1


def _inside_gaps(domain: DomainSpec, pts: np.ndarray) -> np.ndarray:
    """Mask over the gaps (pts[i], pts[i+1]) that belong to K."""
    inside = np.ones(len(pts) - 1, dtype=bool)
    if isinstance(domain, IntervalUnion):
        mids = to_point(domain, 0.5 * (pts[:-1] + pts[1:]))
        inside[:] = False
        for a, b in domain.parts:
            inside |= (mids > a) & (mids < b)
    return inside


def _fresh_scores(domain: DomainSpec, points: np.ndarray, cands: np.ndarray) -> np.ndarray:
    if len(cands) == 0:
        return np.zeros(0)
    return _log_dist(domain, cands[:, None], points[None, :]).sum(axis=1)


def init_state(domain: DomainSpec, s1: float = 0.5) -> LejaState:
    """Initial points and candidates.

    An interval or open arc starts from its two endpoints with one candidate
    at ``s1``; a closed curve from parameter 0 with one candidate at ``s1``;
    a union of intervals from all part endpoints with the part midpoints as
    candidates (``s1`` is then only range-checked).
    """
    if not 0.0 < s1 < 1.0:
        raise ValueError(f"s1 must lie in (0, 1), got {s1!r}")
    if isinstance(domain, IntervalUnion):
        ends = np.array([e for part in domain.parts for e in part])
        order = from_point(domain, ends)
        order[0], order[-1] = 0.0, 1.0
        cands = 0.5 * (order[0::2] + order[1::2])
    elif is_closed(domain):
        order = np.array([0.0])
        cands = np.array([s1])
    else:
        order = np.array([0.0, 1.0])
        cands = np.array([s1])
    pts = np.sort(order)
    return LejaState(domain, _freeze(order), _freeze(pts), _freeze(cands),
                     _freeze(_fresh_scores(domain, order, cands)))


def step(state: LejaState) -> tuple[LejaState, float]:
    """Move the best candidate into the point set and split its gap.

    The chosen candidate maximizes |p| over the candidates (smallest
    parameter among ties) and is replaced by the midpoints of the two gaps it
    creates with its neighbouring points. Returns the new state and the chosen
    parameter.
    """
    cands = state.candidates
    if len(cands) == 0:
        raise EmptyCandidatesError("no candidates left")
    i = _tie_argmax(state.scores)
    c = float(cands[i])
    pts = state.sorted_points
    pos = int(np.searchsorted(pts, c))
    left = pts[pos - 1]
    right = pts[pos] if pos < len(pts) else pts[0] + 1.0  # wraps only on closed curves
    new = np.array([0.5 * (left + c), 0.5 * (c + right)])
    if is_closed(state.domain):
        new = np.where(new >= 1.0, new - 1.0, new)

    rest = np.delete(cands, i)
    rest_scores = np.delete(state.scores, i) + _log_dist(state.domain, rest, c)
    new_pts = np.insert(pts, pos, c)
    new_scores = _fresh_scores(state.domain, new_pts, new)

    all_c = np.concatenate([rest, new])
    all_s = np.concatenate([rest_scores, new_scores])
    order = np.argsort(all_c, kind="stable")
    return LejaState(
        state.domain,
        _freeze(np.append(state.insertion_order, c)),
        _freeze(new_pts),
        _freeze(all_c[order]),
        _freeze(all_s[order]),
    ), c


def run(domain: DomainSpec, n: int, s1: float = 0.5) -> LejaState:
    """State after the first ``n`` points have been chosen."""
    state = init_state(domain, s1)
    if n < state.n_points:
        raise ValueError(f"n must be at least {state.n_points} for {domain.to_text()}")
    while state.n_points < n:
        state, _ = step(state)
    return state


def generate_params(domain: DomainSpec, n: int, s1: float = 0.5) -> np.ndarray:
    """First ``n`` fast Leja chart parameters in insertion order."""
    return np.array(run(domain, n, s1).insertion_order)


def generate(domain: DomainSpec, n: int, s1: float = 0.5) -> np.ndarray:
    """First ``n`` fast Leja points of K in insertion order.

    >>> generate(Interval(0.0, 1.0), 5).tolist()
    [0.0, 1.0, 0.5, 0.25, 0.75]
    """
    return to_point(domain, generate_params(domain, n, s1))


def true_leja(domain: DomainSpec, n: int, grid: int, tol: float = 1e-12) -> np.ndarray:
    """Continuum Leja points by greedy maximization over a parameter grid.

    Starts from parameter 0. Each new point maximizes |p| over ``grid``
    equispaced parameters; every grid local maximum within a factor e of the
    best is refined by ternary search to ``tol`` in parameter, and the best
    refined peak wins (smallest parameter among ties). Uses
    :func:`fastleja.domain.map_param`, so unions are sampled only on K.
    """
    if grid < 10 * n:
        raise ValueError(f"grid must be at least 10*n = {10 * n}")
    ts = np.linspace(0.0, 1.0, grid)
    if is_closed(domain):
        ts = ts[:-1]
    zs = map_param(domain, ts)
    curve = isinstance(domain, ParamCurve)
    if curve:
        zs = ts  # curve distances go through point_diff on parameters
    chosen_t = [0.0]
    chosen_z = [map_param(domain, 0.0)]

    def dist(a, b):
        return point_diff(domain, a, b) if curve else a - b

    def value(t: float) -> float:
        z = t if curve else map_param(domain, t)
        zeros = np.asarray(chosen_t if curve else chosen_z)
        with np.errstate(divide="ignore"):
            terms = np.log(np.abs(dist(z, zeros)))
        return -math.inf if np.any(terms == -np.inf) else math.fsum(terms.tolist())

    def diff(t1: float, t2: float) -> float:
        if curve:
            return log_ratio(point_diff(domain, t2, t1), point_diff(domain, t1, np.asarray(chosen_t)))
        x1 = map_param(domain, t1)
        return log_ratio(map_param(domain, t2) - x1, x1 - np.asarray(chosen_z))

    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(dist(zs, 0.0 if curve else chosen_z[0])))
    while len(chosen_t) < n:
        best = np.max(logs)
        padded = np.concatenate([[-np.inf], logs, [-np.inf]])
        is_peak = (padded[1:-1] >= padded[:-2]) & (padded[1:-1] >= padded[2:])
        peaks = np.flatnonzero(is_peak & (logs >= best - 1.0))
        found = {}
        for i in peaks:
            lo = float(ts[max(i - 1, 0)])
            hi = float(ts[min(i + 1, len(ts) - 1)])
            top = float(ts[i])
            for cand in (ternary_max(diff, lo, hi, tol), lo, hi):
                if diff(top, cand) > 0:
                    top = cand
            found[top] = value(top)
        ft = np.array(sorted(found))
        fv = np.array([found[t] for t in ft])
        t_new = float(ft[_tie_argmax(fv)])
        z_new = map_param(domain, t_new)
        chosen_t.append(t_new)
        chosen_z.append(z_new)
        with np.errstate(divide="ignore"):
            logs = logs + np.log(np.abs(dist(zs, t_new if curve else z_new)))
    return map_param(domain, np.asarray(chosen_t))


def sequence_csv(domain: DomainSpec, params) -> str:
    """CSV ``index,parameter,re,im`` for a sequence of chart parameters."""
    params = np.asarray(params, dtype=float)
    pts = np.asarray(to_point(domain, params), dtype=complex)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "parameter", "re", "im"])
    for i, (t, z) in enumerate(zip(params, pts)):
        w.writerow([i, repr(float(t)), repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


__all__ = [
    "LejaState", "EmptyCandidatesError", "init_state", "step", "run", "generate",
    "generate_params", "log_abs_poly", "true_leja", "sequence_csv",
]
