"""Compact sets K on which point sequences are built.

Three kinds are supported: a closed real interval, a finite union of disjoint
closed real intervals, and a parametrized curve taken from a fixed registry.
All of them are described by the one-line grammar::

    a,b                 interval [a, b]
    a,b;c,d;...         union of intervals, sorted and disjoint
    curve:<id>          registered curve, e.g. ``curve:semicircle``
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np


class DomainError(ValueError):
    """Base class for domain description errors."""


class DomainSyntaxError(DomainError):
    pass


class EmptyIntervalError(DomainError):
    pass


class OverlapError(DomainError):
    pass


class UnknownCurveError(DomainError):
    pass


@dataclass(frozen=True)
class Curve:
    func: Callable[[np.ndarray], np.ndarray]
    closed: bool
    chord: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None


CURVES: dict[str, Curve] = {}


def register_curve(curve_id: str, func: Callable[[np.ndarray], np.ndarray],
                   closed: bool, chord=None) -> None:
    """Add a parametrization ``z: [0, 1] -> C`` to the registry.

    ``func`` must accept numpy arrays. For ``closed=True`` the endpoint values
    must coincide exactly. ``chord(s, t)``, if given, returns z(s) - z(t)
    without the cancellation of subtracting two evaluations; searches near
    maxima of |p| need it to resolve the maximizer beyond ~1e-8.
    """
    if closed and func(np.array([0.0]))[0] != func(np.array([1.0]))[0]:
        raise ValueError(f"curve {curve_id!r} is declared closed but z(0) != z(1)")
    CURVES[curve_id] = Curve(func, closed, chord)


def _circle(t):
    t = np.asarray(t, dtype=float)
    # exact closure at t = 1
    return np.exp(2j * np.pi * np.where(t == 1.0, 0.0, t))


def _arc_chord(scale):
    # e^{ia} - e^{ib} = e^{i(a+b)/2} * 2i sin((a-b)/2), with a = scale*s
    def chord(s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.exp(0.5j * scale * (s + t)) * (2j * np.sin(0.5 * scale * (s - t)))
    return chord


register_curve("semicircle", lambda t: np.exp(1j * np.pi * np.asarray(t, dtype=float)),
               closed=False, chord=_arc_chord(np.pi))
register_curve("circle", _circle, closed=True, chord=_arc_chord(2.0 * np.pi))
register_curve("segment", lambda t: (2.0 * np.asarray(t, dtype=float) - 1.0) + 0j, closed=False,
               chord=lambda s, t: 2.0 * (np.asarray(s, dtype=float) - np.asarray(t, dtype=float)) + 0j)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainSyntaxError("interval endpoints must be finite")
        if not self.a < self.b:
            raise EmptyIntervalError(f"need a < b, got a={self.a!r}, b={self.b!r}")

    @property
    def parts(self) -> tuple[tuple[float, float], ...]:
        return ((self.a, self.b),)

    def to_text(self) -> str:
        return f"{self.a!r},{self.b!r}"


@dataclass(frozen=True)
class IntervalUnion:
    parts: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.parts:
            raise DomainSyntaxError("interval union needs at least one part")
        for a, b in self.parts:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise DomainSyntaxError("interval endpoints must be finite")
            if not a < b:
                raise EmptyIntervalError(f"need a < b, got a={a!r}, b={b!r}")
        for (a0, b0), (a1, b1) in zip(self.parts, self.parts[1:]):
            if a1 < a0:
                raise DomainSyntaxError("union parts must be sorted by left endpoint")
            if a1 <= b0:
                raise OverlapError(f"parts [{a0!r},{b0!r}] and [{a1!r},{b1!r}] overlap")

    @property
    def a(self) -> float:
        return self.parts[0][0]

    @property
    def b(self) -> float:
        return self.parts[-1][1]

    def to_text(self) -> str:
        return ";".join(f"{a!r},{b!r}" for a, b in self.parts)


@dataclass(frozen=True)
class ParamCurve:
    curve_id: str
    closed: bool

    def __post_init__(self):
        if self.curve_id not in CURVES:
            raise UnknownCurveError(f"unknown curve {self.curve_id!r}; known: {sorted(CURVES)}")
        if CURVES[self.curve_id].closed != self.closed:
            raise DomainError(f"curve {self.curve_id!r} has closed={CURVES[self.curve_id].closed}")

    def to_text(self) -> str:
        return f"curve:{self.curve_id}"


DomainSpec = Union[Interval, IntervalUnion, ParamCurve]

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PAIR = re.compile(rf"^\s*({_REAL})\s*,\s*({_REAL})\s*$")
_CURVE = re.compile(r"^\s*curve:([A-Za-z0-9_\-]+)\s*$")


def parse_domain(text: str) -> DomainSpec:
    """Parse a domain description.

    Raises a ``DomainSyntaxError``, ``EmptyIntervalError``, ``OverlapError`` or
    ``UnknownCurveError`` (all ``DomainError``) depending on what is wrong.

    >>> parse_domain("0,0.3;0.5,1")
    IntervalUnion(parts=((0.0, 0.3), (0.5, 1.0)))
    """
    m = _CURVE.match(text)
    if m:
        cid = m.group(1)
        if cid not in CURVES:
            raise UnknownCurveError(f"unknown curve {cid!r}; known: {sorted(CURVES)}")
        return ParamCurve(cid, CURVES[cid].closed)
    pieces = text.split(";")
    parts = []
    for piece in pieces:
        m = _PAIR.match(piece)
        if not m:
            raise DomainSyntaxError(f"cannot parse interval {piece!r} in {text!r}")
        parts.append((float(m.group(1)), float(m.group(2))))
    if len(parts) == 1:
        return Interval(*parts[0])
    # sort by left endpoint so that "c,d;a,b" is accepted; overlap still fails
    return IntervalUnion(tuple(sorted(parts)))


def is_real(spec: DomainSpec) -> bool:
    return not isinstance(spec, ParamCurve)


def is_closed(spec: DomainSpec) -> bool:
    return isinstance(spec, ParamCurve) and spec.closed


def real_parts(spec: DomainSpec) -> tuple[tuple[float, float], ...]:
    """Parts of a real domain; for a curve, the parameter interval [0, 1]."""
    if isinstance(spec, ParamCurve):
        return ((0.0, 1.0),)
    return spec.parts


def map_param(spec: DomainSpec, t):
    """Point of K at parameter ``t`` in [0, 1].

    Intervals map affinely, unions by length-proportional concatenation of
    their parts (a parameter on a part boundary belongs to the right-hand
    part), curves through their registered parametrization. Accepts scalars
    or arrays; real domains give real output, curves complex output.
    """
    arr = np.asarray(t, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise ValueError("parameter must lie in [0, 1]")
    if isinstance(spec, Interval):
        out = spec.a + (spec.b - spec.a) * arr
        out = np.where(arr == 1.0, spec.b, out)
    elif isinstance(spec, IntervalUnion):
        lengths = np.array([b - a for a, b in spec.parts])
        cum = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()
        idx = np.clip(np.searchsorted(cum, arr, side="right") - 1, 0, len(spec.parts) - 1)
        lefts = np.array([a for a, _ in spec.parts])
        rights = np.array([b for _, b in spec.parts])
        frac = (arr - cum[idx]) / (cum[idx + 1] - cum[idx])
        out = lefts[idx] + (rights[idx] - lefts[idx]) * frac
        out = np.where(arr == 1.0, rights[-1], out)
    else:
        out = CURVES[spec.curve_id].func(arr)
    if np.ndim(t) == 0:
        v = out.item() if isinstance(out, np.ndarray) else out
        return complex(v) if isinstance(spec, ParamCurve) else float(v)
    return out


def hull(spec: DomainSpec) -> tuple[float, float]:
    """Smallest interval containing a real domain."""
    if isinstance(spec, ParamCurve):
        raise ValueError("hull is defined for real domains only")
    return spec.parts[0][0], spec.parts[-1][1]


def to_point(spec: DomainSpec, u):
    """Map state coordinates used by the Leja state machine to points of K.

    Real domains use the affine chart of their hull onto [0, 1]; for a single
    interval this coincides with :func:`map_param`. Curves use their curve
    parameter.
    """
    if isinstance(spec, ParamCurve):
        return map_param(spec, u)
    lo, hi = hull(spec)
    arr = np.asarray(u, dtype=float)
    out = np.where(arr == 1.0, hi, lo + (hi - lo) * arr)
    if np.ndim(u) == 0:
        return float(out)
    return out


def point_diff(spec: DomainSpec, s, t):
    """``to_point(s) - to_point(t)`` for chart parameters, computed accurately."""
    if isinstance(spec, ParamCurve):
        curve = CURVES[spec.curve_id]
        if curve.chord is not None:
            return curve.chord(s, t)
        return curve.func(np.asarray(s, dtype=float)) - curve.func(np.asarray(t, dtype=float))
    lo, hi = hull(spec)
    return (hi - lo) * (np.asarray(s, dtype=float) - np.asarray(t, dtype=float))


def from_point(spec: DomainSpec, x):
    """Inverse of :func:`to_point` for real domains."""
    lo, hi = hull(spec)
    return (np.asarray(x, dtype=float) - lo) / (hi - lo)
