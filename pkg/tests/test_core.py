import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastleja import core
from fastleja.core import (EmptyCandidatesError, generate, generate_params, init_state,
                           log_abs_poly, run, sequence_csv, step, true_leja)
from fastleja.domain import Interval, parse_domain, to_point

UNIT = Interval(0.0, 1.0)


def exact_fast_leja(count, s1=Fraction(1, 2), prefer="smallest"):
    """Fast Leja points on [0, 1] in exact rational arithmetic."""
    pts = [Fraction(0), Fraction(1)]
    cands = [s1]
    while len(pts) < count:
        vals = []
        for c in cands:
            prod = Fraction(1)
            for p in pts:
                prod *= abs(c - p)
            vals.append(prod)
        best = max(vals)
        tied = [c for c, v in zip(cands, vals) if v == best]
        c = min(tied) if prefer == "smallest" else max(tied)
        srt = sorted(pts)
        left = max(p for p in srt if p < c)
        right = min(p for p in srt if p > c)
        cands.remove(c)
        cands += [(left + c) / 2, (c + right) / 2]
        pts.append(c)
    return pts


def test_init_interval():
    s = init_state(UNIT, 0.5)
    assert s.sorted_points.tolist() == [0.0, 1.0]
    assert s.candidates.tolist() == [0.5]


def test_init_union():
    dom = parse_domain("0,0.3;0.5,1")
    s = init_state(dom)
    assert np.allclose(to_point(dom, s.sorted_points), [0, 0.3, 0.5, 1])
    assert np.allclose(to_point(dom, s.candidates), [0.15, 0.75])
    s.check_invariants()


@pytest.mark.parametrize("s1", [1.5, 0.0, 1.0, -0.2])
def test_init_rejects_s1(s1):
    with pytest.raises(ValueError):
        init_state(UNIT, s1)


def test_log_abs_poly_examples():
    assert log_abs_poly([0, 1], UNIT, 0.5) == pytest.approx(2 * math.log(0.5), abs=1e-15)
    assert log_abs_poly([0, 1], UNIT, 0.0) == -math.inf
    v = log_abs_poly([0, 0.5, 1], UNIT, 0.25)
    assert v == pytest.approx(-3.060271, abs=1e-6)
    assert v == pytest.approx(math.log(0.25 * 0.25 * 0.75), rel=1e-15)


def test_step_examples():
    s = init_state(UNIT)
    s, c = step(s)
    assert c == 0.5 and s.candidates.tolist() == [0.25, 0.75]
    # |p(0.25)| = |p(0.75)| = 0.046875: tie goes to 0.25
    assert math.exp(log_abs_poly([0, 1, 0.5], UNIT, 0.25)) == pytest.approx(0.046875, rel=1e-14)
    s, c = step(s)
    assert c == 0.25 and s.candidates.tolist() == [0.125, 0.375, 0.75]
    vals = [math.exp(log_abs_poly([0, 1, 0.5, 0.25], UNIT, x)) for x in (0.75, 0.125, 0.375)]
    assert vals == pytest.approx([0.0234375, 0.0051269531, 0.0036621094], rel=1e-8)
    s, c = step(s)
    assert c == 0.75


def test_step_empty_candidates():
    s = init_state(UNIT)
    empty = core.LejaState(UNIT, s.insertion_order, s.sorted_points, np.zeros(0), np.zeros(0))
    with pytest.raises(EmptyCandidatesError):
        step(empty)


def test_generate_examples():
    assert generate(UNIT, 5, 0.5).tolist() == [0, 1, 0.5, 0.25, 0.75]
    assert generate(UNIT, 2, 0.5).tolist() == [0, 1]
    assert generate(Interval(2.0, 4.0), 3, 0.5).tolist() == [2, 4, 3]


def test_generate_too_few():
    with pytest.raises(ValueError):
        generate(UNIT, 1)


def test_matches_exact_rational_oracle():
    exact = exact_fast_leja(60)
    assert generate(UNIT, 60).tolist() == [float(x) for x in exact]


def test_matches_exact_oracle_for_other_s1():
    exact = exact_fast_leja(30, s1=Fraction(1, 3))
    assert generate(UNIT, 30, 1 / 3) == pytest.approx([float(x) for x in exact], abs=1e-15)


def test_reflection_covariance(monkeypatch):
    # x -> 1 - x maps the run to the run with the opposite tie-break
    exact_small = exact_fast_leja(40)
    exact_large = exact_fast_leja(40, prefer="largest")
    # the endpoints swap, everything after them is mirrored in order
    assert [1 - x for x in exact_small[2:]] == exact_large[2:]

    def last_argmax(values):
        best = np.max(values)
        tol = core.TIE_RTOL * max(1.0, abs(best))
        return int(np.flatnonzero(values >= best - tol)[-1])

    monkeypatch.setattr(core, "_tie_argmax", last_argmax)
    mirrored = generate(UNIT, 40)
    assert mirrored[2:].tolist() == [float(x) for x in exact_large[2:]]


def test_reflection_set_symmetry_fails_for_even_prefix():
    # the first n points are not a reflection-symmetric set in general
    first4 = sorted(exact_fast_leja(4))
    assert first4 != sorted(1 - x for x in first4)


@pytest.mark.parametrize("text, steps", [("0,1", 10_000), ("0,0.3;0.5,1", 10_000),
                                         ("curve:circle", 2_000), ("curve:semicircle", 2_000)])
def test_invariants_every_step(text, steps):
    s = init_state(parse_domain(text))
    s.check_invariants()
    for _ in range(steps):
        s, _ = step(s)
        s.check_invariants()


def test_determinism():
    a = generate(parse_domain("0,0.3;0.5,1"), 500, 0.37)
    b = generate(parse_domain("0,0.3;0.5,1"), 500, 0.37)
    assert a.tobytes() == b.tobytes()


@settings(max_examples=30, deadline=None)
@given(st.floats(-100, 100), st.floats(0.01, 100), st.floats(0.05, 0.95))
def test_affine_covariance(a, length, s1):
    b = a + length
    if not a < b:
        return
    ref = generate(UNIT, 60, s1)
    got = generate(Interval(a, b), 60, s1)
    assert np.allclose(got, a + (b - a) * ref, rtol=0, atol=4 * np.spacing(max(abs(a), abs(b))))


@pytest.mark.parametrize("text", ["0,1", "-1,3", "0,0.3;0.5,1", "curve:circle", "curve:semicircle"])
def test_greedy_optimality(text):
    dom = parse_domain(text)
    s = init_state(dom)
    for _ in range(150):
        cands = s.candidates.copy()
        pts = s.insertion_order.copy()
        s, c = step(s)
        chosen = log_abs_poly(pts, dom, c)
        others = [log_abs_poly(pts, dom, x) for x in cands]
        tol = core.TIE_RTOL * max(1.0, abs(max(others)))
        assert chosen >= max(others) - tol
        # ties resolve to the smallest parameter
        assert c == min(x for x, v in zip(cands, others) if v >= max(others) - tol)


def test_union_points_stay_in_parts():
    dom = parse_domain("0,0.3;0.5,1;1.5,1.6")
    pts = generate(dom, 400)
    inside = np.zeros(len(pts), bool)
    for a, b in dom.parts:
        inside |= (pts >= a) & (pts <= b)
    assert inside.all()


def test_circle_starts_at_one_and_wraps():
    pts = generate(parse_domain("curve:circle"), 4)
    assert np.allclose(pts, [1, -1, 1j, -1j], atol=1e-15)
    params = generate_params(parse_domain("curve:circle"), 64)
    assert np.all((params >= 0) & (params < 1))


def test_true_leja_examples():
    assert true_leja(UNIT, 2, 1000).tolist() == [0.0, 1.0]
    assert true_leja(UNIT, 3, 1000) == pytest.approx([0, 1, 0.5], abs=1e-12)
    pts = true_leja(UNIT, 4, 1000)
    assert pts[3] == pytest.approx((3 - math.sqrt(3)) / 6, abs=1e-12)


def test_true_leja_grid_precondition():
    with pytest.raises(ValueError):
        true_leja(UNIT, 10, 50)


def test_true_leja_beats_candidates():
    # the continuum point is at least as good as every fast Leja candidate
    pts = true_leja(UNIT, 12, 2000)
    for n in range(3, 12):
        best = max(log_abs_poly(pts[:n], UNIT, x) for x in np.linspace(0, 1, 4001))
        assert log_abs_poly(pts[:n], UNIT, pts[n]) >= best - 1e-12


def test_sequence_csv():
    text = sequence_csv(UNIT, generate_params(UNIT, 3))
    assert text.splitlines() == ["index,parameter,re,im", "0,0.0,0.0,0.0", "1,1.0,1.0,0.0",
                                 "2,0.5,0.5,0.0"]
