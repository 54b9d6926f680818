import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastleja.core import generate
from fastleja.domain import Interval, parse_domain
from fastleja.potential import (cheb_constant, dn_root, fig3_csv, fig3_data, growth_csv,
                                growth_report, log_vdm, log_vdm_series, step_log)

UNIT = Interval(0.0, 1.0)


@pytest.fixture(scope="module")
def leja1025():
    return generate(UNIT, 1025)


def test_log_vdm_examples():
    assert log_vdm([0.0, 1.0]) == 0.0
    assert log_vdm([0.0, 0.5, 1.0]) == pytest.approx(math.log(0.25), abs=1e-15)
    assert log_vdm([0.0, 1.0, 1.0]) == -math.inf


def test_log_vdm_needs_two_points():
    with pytest.raises(ValueError):
        log_vdm([0.5])


@pytest.mark.parametrize("n", [3, 6, 12])
def test_log_vdm_matches_determinant(n):
    x = generate(UNIT, n)
    sign, logdet = np.linalg.slogdet(np.vander(x, increasing=True))
    assert sign != 0
    assert log_vdm(x) == pytest.approx(logdet, abs=1e-9)


def test_log_vdm_complex():
    z = np.exp(2j * np.pi * np.arange(5) / 5)
    # roots of unity: |VDM|^2 = n^n
    assert log_vdm(z) == pytest.approx(2.5 * math.log(5), abs=1e-13)


def test_dn_root_examples():
    assert dn_root([0.0, 1.0]) == 1.0
    assert dn_root([0.0, 0.5, 1.0]) == pytest.approx(0.25 ** (1 / 6), rel=1e-15)
    assert dn_root([0.0, 0.5, 1.0]) == pytest.approx(0.793700, abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=40, unique=True))
def test_dn_root_at_most_one_on_unit_interval(xs):
    if np.any(np.diff(np.sort(xs)) == 0):
        return
    assert dn_root(xs) <= 1.0


def test_cheb_constant_examples():
    assert cheb_constant(UNIT, 1) == pytest.approx(0.5, rel=1e-15)
    assert cheb_constant(UNIT, 50) == pytest.approx(2 ** (1 / 50) / 4, rel=1e-15)
    assert cheb_constant(UNIT, 50) == pytest.approx(0.253506, abs=1e-4)
    assert cheb_constant(Interval(-1.0, 1.0), 3) == pytest.approx(0.25 ** (1 / 3), rel=1e-15)


def test_cheb_constant_rejects_other_domains():
    with pytest.raises(TypeError):
        cheb_constant(parse_domain("0,0.3;0.5,1"), 4)
    with pytest.raises(ValueError):
        cheb_constant(UNIT, 0)


def test_cheb_constant_oracle_against_supnorm():
    # ||T_n scaled|| matches a direct sup-norm of the monic Chebyshev polynomial
    from fastleja.bounds import supnorm
    n = 7
    zeros = 0.5 - 0.5 * np.cos(np.pi * (np.arange(n) + 0.5) / n)
    _, ls = supnorm(zeros, 0.0, 1.0)
    assert math.exp(ls / n) == pytest.approx(cheb_constant(UNIT, n), rel=1e-12)


def test_growth_examples(leja1025):
    r2, r3 = growth_report(leja1025, UNIT, [2, 3])
    assert r2.step_ratio == pytest.approx(0.25) and r2.tau_ratio == 1.0
    assert r3.step_ratio == pytest.approx(0.046875, rel=1e-14)
    assert r3.tau_ratio == pytest.approx(0.974278, abs=1e-6)
    sup3 = 0.046875 / r3.tau_ratio
    c = (3 - math.sqrt(3)) / 6
    assert sup3 == pytest.approx(abs(c * (c - 1) * (c - 0.5)), rel=1e-12)


def test_telescoping(leja1025):
    series = log_vdm_series(leja1025)
    errs = [abs(float(series[n] - series[n - 1]) - step_log(leja1025, n)) for n in range(3, 1025)]
    assert max(errs) <= 1e-10


def test_series_matches_direct(leja1025):
    series = log_vdm_series(leja1025)
    for n in (5, 100, 700, 1024):
        assert float(series[n]) == pytest.approx(log_vdm(leja1025[: n + 1]), rel=1e-15)


def test_growth_invariants(leja1025):
    rows = growth_report(leja1025[:200], UNIT, range(2, 199))
    series = log_vdm_series(leja1025[:200])
    for r in rows:
        assert 0 < r.tau_ratio <= 1
        assert r.pseudo_growth >= 0
        assert r.dn_root <= 1
    # accumulated step logs reproduce ln L_n
    acc = math.fsum(math.log(r.step_ratio) for r in rows) + float(series[1])
    assert acc == pytest.approx(rows[-1].log_vdm, rel=1e-9)


def test_growth_union_and_curve():
    dom = parse_domain("0,0.3;0.5,1")
    rows = growth_report(generate(dom, 40), dom, [5, 20, 39])
    assert all(0 < r.tau_ratio <= 1 for r in rows)
    circ = parse_domain("curve:circle")
    rows = growth_report(generate(circ, 9), circ, [4, 8])
    assert all(math.isnan(r.tau_ratio) for r in rows)
    # 2^k roots of unity: |p_n| = |z^n - 1| at a new point z with z^n = -1
    assert rows[0].step_ratio == pytest.approx(2.0)


def test_growth_stage_bounds(leja1025):
    with pytest.raises(ValueError):
        growth_report(leja1025[:10], UNIT, [10])


def test_growth_csv_header(leja1025):
    text = growth_csv(growth_report(leja1025, UNIT, [2]))
    assert text.splitlines()[0] == "n,log_vdm,dn_root,step_ratio,tau_ratio,pseudo_growth"


def test_fig3():
    data = fig3_data()
    assert len(data.x) == 2001 and len(data.midpoints) == 12
    pts = generate(UNIT, 13)
    srt = np.sort(pts)
    assert np.array_equal(data.midpoints, (srt[:-1] + srt[1:]) / 2)
    # observed for n = 13: 2|p13(m_j)| dominates |p13| on the j-th gap
    for lo, hi, twice in zip(srt[:-1], srt[1:], data.twice_p):
        on_gap = np.abs(data.p[(data.x >= lo) & (data.x <= hi)])
        assert on_gap.max() <= abs(twice)
    graph, circles = fig3_csv(data)
    assert graph.splitlines()[0] == "x,p13" and circles.splitlines()[0] == "midpoint,2p13"
