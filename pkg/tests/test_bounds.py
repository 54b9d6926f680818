import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastleja.bounds import (BoundConfig, InvalidConfigError, check_lemma2, check_prop3,
                             random_config, run_trials, supnorm, trials_csv)


def test_supnorm_examples():
    m, v = supnorm([0, 1], 0, 1)
    assert m == pytest.approx(0.5, abs=1e-11) and v == pytest.approx(math.log(0.25), abs=1e-15)
    m, v = supnorm([0, 0.5, 1], 0, 1)
    c = (3 - math.sqrt(3)) / 6
    assert m == pytest.approx(c, abs=1e-11)  # smaller of the tied pair
    assert v == pytest.approx(math.log(abs(c * (c - 0.5) * (c - 1))), abs=1e-14)
    assert v == pytest.approx(math.log(0.0481125), abs=1e-6)
    m, v = supnorm([0, 1], 2, 3)
    assert m == 3 and v == pytest.approx(math.log(6), abs=1e-15)


def test_supnorm_errors():
    with pytest.raises(ValueError):
        supnorm([0, 1], 1, 1)
    with pytest.raises(ValueError):
        supnorm([0, 1], 0, 1, tol=0)


def test_supnorm_brute_force():
    rng = np.random.default_rng(2024)
    grid = np.linspace(-1, 1, 10 ** 6)
    for _ in range(100):
        z = rng.uniform(-1.5, 1.5, rng.integers(1, 21))
        _, v = supnorm(z, -1, 1)
        brute = np.max(np.sum(np.log(np.abs(grid[:, None] - z[None, :])), axis=1))
        assert v >= brute - 1e-12
        assert v - brute <= 1e-9


def test_supnorm_gap_sampling_agrees():
    rng = np.random.default_rng(5)
    for _ in range(20):
        z = np.sort(rng.uniform(0, 1, 50))
        assert supnorm(z, 0, 1, grid_size=64)[1] == pytest.approx(supnorm(z, 0, 1)[1], abs=1e-12)


def test_lemma2_example_right_or_left():
    chk = check_lemma2(BoundConfig(0.25, (-0.5,), (2.0,)))
    assert chk.lemma2_ok and chk.lemma2_case in ("right", "left")
    assert -0.25 <= chk.m <= 0.25


def test_symmetric_example_is_vacuous():
    chk = check_prop3(BoundConfig(0.25, (-0.5,), (0.5,)))
    assert chk.lemma2_case == "vacuous" and chk.lemma2_ok
    assert abs(chk.m) < 1e-9
    assert chk.prop3_ok
    assert chk.prop3_margin == pytest.approx(math.log(2 * math.e), abs=1e-12)
    assert chk.prop3_margin == pytest.approx(1.693, abs=1e-3)


@pytest.mark.parametrize("args", [
    (0.25, (-0.2499,), (0.5,)),
    (0.25, (-0.5,), (0.2,)),
    (0.0, (-0.5,), (0.5,)),
    (0.25, (), (0.5,)),
    (0.25, (-0.4, -0.5), (0.5,)),
])
def test_invalid_configs(args):
    with pytest.raises(InvalidConfigError):
        BoundConfig(*args)


def test_near_touch_is_valid():
    # zeta = -0.2501 still satisfies zeta < -eps
    assert check_prop3(BoundConfig(0.25, (-0.2501,), (0.5,))).prop3_ok


def dense_check(cfg, m):
    """Independent evaluation of the one-sided bounds on a dense grid."""
    eps, zeta, eta = cfg.epsilon, np.array(cfg.zetas), np.array(cfg.etas)
    x = np.linspace(-eps, eps, 200001)
    with np.errstate(divide="ignore"):
        lp = np.sum(np.log(np.abs(x[:, None] - cfg.zeros[None, :])), axis=1)
    mg = x[np.argmax(lp)]
    assert abs(mg - m) < 1e-4 * max(1.0, eps) or abs(np.max(lp) - lp[np.argmin(np.abs(x - m))]) < 1e-8
    growth = eps * np.sum(1 / np.abs(eta))
    if m > 0:
        q = np.prod(np.abs(m - eta)) < math.exp(growth) * np.prod(np.abs(eta))
        p1 = np.prod(np.abs(m - np.r_[-eps, eps, zeta])) < eps * 2 * eps * np.prod(np.abs(eps - zeta))
    else:
        q = np.prod(np.abs(m - zeta)) < math.exp(growth) * np.prod(np.abs(zeta))
        p1 = np.prod(np.abs(m - np.r_[-eps, eps, eta])) < eps * 2 * eps * np.prod(np.abs(-eps - eta))
    return bool(q and p1)


def test_random_trials_pass():
    checks = run_trials(1000, 42)
    assert all(c.lemma2_ok for c in checks)
    assert all(c.prop3_ok and c.prop3_margin > 0 for c in checks)


def test_trials_against_dense_evaluation():
    for c in run_trials(60, 7):
        if c.lemma2_case != "vacuous":
            assert dense_check(c.config, c.m) == c.lemma2_ok


def test_trials_reproducible_and_thread_independent():
    a = run_trials(40, 3, threads=1)
    b = run_trials(40, 3, threads=4)
    assert a == b
    assert a[5] == run_trials(1, 8)[0]


def test_random_config_ranges():
    for seed in range(200):
        cfg = random_config(seed)
        assert 0.01 <= cfg.epsilon <= 0.3
        assert 1 <= len(cfg.zetas) <= 8 and 1 <= len(cfg.etas) <= 8
        assert cfg.zetas[0] >= -3 and cfg.zetas[-1] <= -cfg.epsilon - 0.05
        assert cfg.etas[0] >= cfg.epsilon + 0.05 and cfg.etas[-1] <= 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-6, 6))
def test_prop3_scale_invariance(seed, k):
    cfg = random_config(seed)
    lam = 2.0 ** k
    a = check_prop3(cfg)
    b = check_prop3(BoundConfig(lam * cfg.epsilon, tuple(lam * np.array(cfg.zetas)),
                                tuple(lam * np.array(cfg.etas))))
    assert a.prop3_ok == b.prop3_ok
    assert b.prop3_margin == pytest.approx(a.prop3_margin, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.1, 10))
def test_prop3_scale_invariance_generic(seed, lam):
    cfg = random_config(seed)
    a = check_prop3(cfg)
    b = check_prop3(BoundConfig(lam * cfg.epsilon, tuple(lam * np.array(cfg.zetas)),
                                tuple(lam * np.array(cfg.etas))))
    assert a.prop3_ok == b.prop3_ok
    assert b.prop3_margin == pytest.approx(a.prop3_margin, abs=1e-9)


def test_trials_csv():
    text = trials_csv(run_trials(3, 0))
    lines = text.splitlines()
    assert lines[0] == "trial,epsilon,n1,n2,m,lemma2_ok,prop3_ok,prop3_log_margin"
    assert len(lines) == 4 and lines[1].startswith("0,")
