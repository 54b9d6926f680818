"""Barycentric Lagrange interpolation, Lebesgue constants and error studies.

Throughout, a node set of size n defines the interpolant of degree n - 1.
Barycentric weights w_j = 1 / prod_{k != j} (a_j - a_k) are formed from
log-magnitudes and signs and then rescaled so that max |w_j| = 1; the second
(true) barycentric formula is invariant under that common factor.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Union

import gmpy2
import numpy as np

from fastleja._search import chebyshev_grid, golden_max
from fastleja.core import generate, true_leja
from fastleja.domain import (DomainSpec, Interval, ParamCurve, is_closed,
                             is_real, map_param, real_parts)
from fastleja.star import chebyshev_row


class UnknownFunctionError(KeyError):
    pass


class DuplicateNodeError(ValueError):
    pass


FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "runge25": lambda x: 1.0 / (1.0 + 25.0 * (x - 0.5) ** 2),
    "pole2": lambda x: 1.0 / (x + 2.0),
    "abs-half": lambda x: np.abs(x - 0.5),
    "cube": lambda x: x ** 3,
}

# the same functions for multiprecision arguments
MP_FUNCTIONS: dict[str, Callable] = {
    "exp": gmpy2.exp,
    "runge25": lambda x: 1 / (1 + 25 * (x - 0.5) ** 2),
    "pole2": lambda x: 1 / (x + 2),
    "abs-half": lambda x: abs(x - 0.5),
    "cube": lambda x: x ** 3,
}

NODE_SOURCES = ("fast-leja", "true-leja", "chebyshev", "equispaced")


def get_function(fn) -> tuple[str, Callable]:
    """Resolve a registry id (or pass through a callable) to ``(fn_id, f)``."""
    if callable(fn):
        return getattr(fn, "__name__", "callable"), fn
    try:
        return fn, FUNCTIONS[fn]
    except KeyError:
        raise UnknownFunctionError(f"unknown function {fn!r}; known: {', '.join(FUNCTIONS)}") from None


@dataclass(frozen=True)
class Interpolant:
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    fn_id: str


def barycentric_weights(nodes) -> np.ndarray:
    """Weights 1/prod_{k != j}(a_j - a_k), scaled so the largest magnitude is 1.

    >>> barycentric_weights([0.0, 0.5, 1.0]).tolist()
    [0.5, -1.0, 0.5]
    """
    a = np.asarray(nodes)
    if len(a) == 0:
        raise ValueError("need at least one node")
    d = a[:, None] - a[None, :]
    np.fill_diagonal(d, 1.0)
    if np.any(d == 0):
        raise DuplicateNodeError("nodes must be distinct")
    logmag = -np.sum(np.log(np.abs(d)), axis=1)
    scale = np.exp(logmag - np.max(logmag))
    if np.iscomplexobj(d):
        return scale * np.exp(-1j * np.sum(np.angle(d), axis=1))
    # sign of prod (a_j - a_k) is (-1)^(number of negative factors)
    neg = np.sum(d < 0, axis=1)
    return np.where(neg % 2 == 0, 1.0, -1.0) * scale


def build_interpolant(nodes, fn) -> Interpolant:
    """Interpolant of ``fn`` (registry id or callable) at ``nodes``."""
    fn_id, f = get_function(fn)
    a = np.asarray(nodes)
    a = a.astype(complex if np.iscomplexobj(a) else float)
    w = barycentric_weights(a)
    return Interpolant(a, w, np.asarray(f(a)), fn_id)


def _cauchy(nodes: np.ndarray, x: np.ndarray):
    """Terms 1/(x - a_j), with the row index of any exact node hit."""
    diff = x[:, None] - nodes[None, :]
    hit = diff == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        c = 1.0 / np.where(hit, 1.0, diff)
    return c, hit


def eval_interpolant(ip: Interpolant, x):
    """Second-form barycentric evaluation; node hits return the stored value."""
    xa = np.atleast_1d(np.asarray(x))
    c, hit = _cauchy(ip.nodes, xa)
    t = c * ip.weights[None, :]
    out = (t @ ip.values) / t.sum(axis=1)
    rows, cols = np.nonzero(hit)
    out = out.astype(np.result_type(out, ip.values))
    out[rows] = ip.values[cols]
    return out if np.ndim(x) else out[0]


def lebesgue_function(nodes, x, weights=None) -> np.ndarray:
    """sum_j |l_j(x)|, using |l_j(x)| = |w_j/(x - a_j)| / |sum_k w_k/(x - a_k)|."""
    nodes = np.asarray(nodes)
    w = barycentric_weights(nodes) if weights is None else weights
    xa = np.atleast_1d(np.asarray(x))
    out = np.empty(len(xa))
    step = max(1, (1 << 21) // max(len(nodes), 1))
    for r0 in range(0, len(xa), step):
        c, hit = _cauchy(nodes, xa[r0:r0 + step])
        t = c * w[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.sum(np.abs(t), axis=1) / np.abs(t.sum(axis=1))
        val[hit.any(axis=1)] = 1.0
        out[r0:r0 + step] = val
    return out


def lagrange_basis_vdm(nodes, j: int, z) -> np.ndarray:
    """l_j(z) as a quotient of Vandermonde determinants (reference for small n)."""
    a = np.asarray(nodes, dtype=complex if np.iscomplexobj(nodes) else float)
    if len(a) > 12:
        raise ValueError("the determinant form is only used for n <= 12")
    den = np.linalg.det(np.vander(a, increasing=True))
    out = []
    for zz in np.atleast_1d(z):
        b = a.copy()
        b[j] = zz
        out.append(np.linalg.det(np.vander(b, increasing=True)) / den)
    return np.array(out)


@dataclass(frozen=True)
class LebesgueReport:
    n: int
    lambda_: float
    argmax_x: Union[float, complex]
    grid_size: int

    @property
    def nth_root(self) -> float:
        return self.lambda_ ** (1.0 / self.n)


def _sample_sets(domain: DomainSpec, m: int):
    """(chart, points) sample pairs per part, ``m`` samples each."""
    if is_real(domain):
        for a, b in real_parts(domain):
            xs = chebyshev_grid(a, b, m)
            yield (a, b), xs, xs
    else:
        ts = np.linspace(0.0, 1.0, m + (1 if is_closed(domain) else 0))
        if is_closed(domain):
            ts = ts[:-1]
        yield (0.0, 1.0), ts, map_param(domain, ts)


def lebesgue_constant(nodes, domain: DomainSpec, grid_multiplier: int = 10) -> LebesgueReport:
    """Lambda_n = max over K of the Lebesgue function.

    Samples ``grid_multiplier * n**2`` Chebyshev points per interval part (an
    equispaced parameter grid on curves), then golden-section refines the
    best cell to a relative width of 1e-10. Ties go to the smallest abscissa.
    """
    if grid_multiplier < 10:
        raise ValueError("grid_multiplier must be at least 10")
    nodes = np.asarray(nodes)
    n = len(nodes)
    w = barycentric_weights(nodes)
    m = max(grid_multiplier * n * n, 2)
    curve = isinstance(domain, ParamCurve)
    best = None
    total = 0
    for (lo_p, hi_p), ts, zs in _sample_sets(domain, m):
        total += len(ts)
        vals = lebesgue_function(nodes, zs, w)
        i = int(np.argmax(vals))
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]

        def f(t):
            z = map_param(domain, t) if curve else t
            return float(lebesgue_function(nodes, z, w)[0])

        t = golden_max(lambda u, v: f(v) - f(u), float(lo), float(hi), 1e-10 * (hi_p - lo_p))
        v, t = (f(t), t) if f(t) > vals[i] else (float(vals[i]), float(ts[i]))
        if best is None or v > best[0] * (1.0 + 1e-12):
            best = (v, t)
    v, t = best
    x = complex(map_param(domain, t)) if curve else t
    return LebesgueReport(n, v, x, total)


def node_set(source: str, n: int, domain: DomainSpec, s1: float = 0.5) -> np.ndarray:
    """First ``n`` nodes from one of ``NODE_SOURCES`` on ``domain``."""
    if source == "fast-leja":
        return generate(domain, n, s1)
    if source == "true-leja":
        return true_leja(domain, n, grid=max(10 * n, 2001))
    if source in ("chebyshev", "equispaced"):
        if not isinstance(domain, Interval):
            raise ValueError(f"{source} nodes are only defined on a single interval")
        u = chebyshev_row(n) if source == "chebyshev" else np.linspace(0.0, 1.0, n)
        return domain.a + (domain.b - domain.a) * u
    raise ValueError(f"unknown node source {source!r}; known: {', '.join(NODE_SOURCES)}")


def sup_error(ip: Interpolant, f: Callable, domain: DomainSpec, m: int) -> float:
    err = 0.0
    for _, _, zs in _sample_sets(domain, m):
        err = max(err, float(np.max(np.abs(eval_interpolant(ip, zs) - f(zs)))))
    return err


def sup_error_mp(nodes, fn, domain: DomainSpec, m: int, digits: int = 50) -> float:
    """Sup error of the exact interpolant of ``fn`` at the (float) nodes.

    Weights, samples and the barycentric sums are carried in ``digits``
    significant digits, so errors far below double-precision rounding are
    resolved. Real domains only.
    """
    if not is_real(domain):
        raise ValueError("multiprecision error estimates are for real domains")
    f = MP_FUNCTIONS[fn] if isinstance(fn, str) and fn in MP_FUNCTIONS else get_function(fn)[1]
    bits = int(math.ceil(digits * math.log2(10))) + 8
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        a = [gmpy2.mpfr(float(v)) for v in np.asarray(nodes, dtype=float)]
        w = []
        for j, aj in enumerate(a):
            prod = gmpy2.mpfr(1)
            for k, ak in enumerate(a):
                if k != j:
                    prod *= aj - ak
            w.append(1 / prod)
        fa = [f(v) for v in a]
        err = gmpy2.mpfr(0)
        for _, _, xs in _sample_sets(domain, m):
            for xf in xs:
                x = gmpy2.mpfr(float(xf))
                num = den = gmpy2.mpfr(0)
                hit = None
                for aj, wj, fj in zip(a, w, fa):
                    if x == aj:
                        hit = fj
                        break
                    c = wj / (x - aj)
                    num += c * fj
                    den += c
                val = hit if hit is not None else num / den
                err = max(err, abs(val - f(x)))
        return float(err)


def error_study(fn, node_source: str, stages, domain: DomainSpec,
                s1: float = 0.5, digits: int | None = None) -> list[tuple[int, float]]:
    """Sup-norm interpolation error on a 10 n^2-point probe grid per stage.

    With ``digits`` set the error is measured in multiprecision (see
    :func:`sup_error_mp`); in double precision it bottoms out near 1e-16.
    """
    stages = [int(s) for s in stages]
    if any(b <= a for a, b in zip(stages, stages[1:])) or (stages and stages[0] < 1):
        raise ValueError("stages must be positive and strictly increasing")
    _, f = get_function(fn)
    out = []
    for n in stages:
        nodes = node_set(node_source, n, domain, s1)
        m = max(10 * n * n, 2)
        if digits is None:
            out.append((n, sup_error(build_interpolant(nodes, fn), f, domain, m)))
        else:
            out.append((n, sup_error_mp(nodes, fn, domain, m, digits)))
    return out


def lebesgue_study(node_source: str, stages, domain: DomainSpec, grid_multiplier: int = 10,
                   s1: float = 0.5) -> list[LebesgueReport]:
    return [lebesgue_constant(node_set(node_source, int(n), domain, s1), domain, grid_multiplier)
            for n in stages]


def errors_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "sup_error"])
    w.writerows([n, repr(float(e))] for n, e in rows)
    return buf.getvalue()


def _fmt_point(x) -> str:
    return repr(float(x)) if not isinstance(x, complex) else repr(x)


def lebesgue_csv(reports: list[LebesgueReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "lambda", "lambda_nth_root", "argmax_x"])
    w.writerows([r.n, repr(r.lambda_), repr(r.nth_root), _fmt_point(r.argmax_x)] for r in reports)
    return buf.getvalue()


def lebesgue_json(reports: list[LebesgueReport]) -> str:
    rows = []
    for r in reports:
        d = asdict(r)
        d["lambda"] = d.pop("lambda_")
        d["lambda_nth_root"] = r.nth_root
        d["argmax_x"] = _fmt_point(r.argmax_x) if isinstance(r.argmax_x, complex) else r.argmax_x
        rows.append(d)
    return json.dumps({"schema_version": "1", "rows": rows}, sort_keys=True)


def errors_json(rows) -> str:
    return json.dumps({"schema_version": "1",
                       "rows": [{"n": n, "sup_error": e} for n, e in rows]}, sort_keys=True)


__all__ = [
    "FUNCTIONS", "NODE_SOURCES", "Interpolant", "LebesgueReport", "barycentric_weights",
    "build_interpolant", "eval_interpolant", "lebesgue_function", "lebesgue_constant",
    "lagrange_basis_vdm", "node_set", "error_study", "lebesgue_study",
]
