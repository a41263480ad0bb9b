"""Legendre layer: segment free energy, tilts, rate function, profile."""

import math

import numpy as np
import pytest
import scipy.special
import scipy.stats

from ipdsaw import largedev, steps, wetting
from ipdsaw.largedev import TiltVector

import oracles

BETA = 2.0
LAW = steps.StepLaw(BETA)


def tv(h0, h1, beta=BETA):
    return TiltVector(h0, h1, beta)


# ---------------------------------------------------------------------------
# segment free energy l_lambda
# ---------------------------------------------------------------------------

def test_l_lambda_zero():
    assert largedev.l_lambda(tv(0.0, 0.0)) == 0.0


def test_l_lambda_constant_integrand():
    for h1 in (-0.7, 0.2, 0.9):
        assert largedev.l_lambda(tv(0.0, h1)) == \
            pytest.approx(steps.log_mgf(LAW, h1), rel=1e-13)


def test_l_lambda_matches_dense_trapezoid():
    got = largedev.l_lambda(tv(0.6, 0.1))
    assert got == pytest.approx(oracles.trapezoid_l_lambda(BETA, 0.6, 0.1),
                                abs=1e-9)


def test_l_lambda_rejects_outside_domain():
    bad = tv(0.3, 0.85)  # |h0 + h1| = 1.15 >= beta/2
    assert not bad.in_domain()
    with pytest.raises(ValueError):
        largedev.l_lambda(bad)


def test_finite_n_domain_is_larger():
    h = tv(0.3, 0.84)  # outside D_beta, inside D_{beta,2}
    assert not h.in_domain()
    assert h.in_domain(2)


# ---------------------------------------------------------------------------
# gradient
# ---------------------------------------------------------------------------

def test_grad_at_zero():
    assert largedev.grad_l_lambda(tv(0.0, 0.0)) == (0.0, 0.0)


def test_grad_matches_finite_differences():
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 30:
        h1 = rng.uniform(-0.9, 0.9)
        h0 = rng.uniform(-0.9 - h1, 0.9 - h1)
        if abs(h0) < 5e-3:
            continue
        q, p = largedev.grad_l_lambda(tv(h0, h1))
        fq = oracles.central_diff(
            lambda a: largedev.l_lambda(tv(a, h1)), h0, 1e-6)
        fp = oracles.central_diff(
            lambda a: largedev.l_lambda(tv(h0, a)), h1, 1e-6)
        assert q == pytest.approx(fq, rel=1e-5, abs=1e-8)
        assert p == pytest.approx(fp, rel=1e-5, abs=1e-8)
        checked += 1


def test_grad_h0_zero_branch():
    for h1 in (-0.6, 0.15, 0.8):
        lp = oracles.central_diff(lambda a: steps.log_mgf(LAW, a), h1, 1e-6)
        q, p = largedev.grad_l_lambda(tv(0.0, h1))
        assert q == pytest.approx(0.5 * lp, rel=1e-8, abs=1e-9)
        assert p == pytest.approx(lp, rel=1e-8, abs=1e-9)


# ---------------------------------------------------------------------------
# inverse tilt and duality
# ---------------------------------------------------------------------------

def test_tilt_inverse_origin():
    got = largedev.tilt_inverse(0.0, 0.0, BETA)
    assert abs(got.h0) < 1e-12 and abs(got.h1) < 1e-12


def test_tilt_inverse_diagonal_forces_h0_zero():
    # p = 2q can be realized with a constant tilt: h0 = 0, L'(h1) = 2q
    for q in (0.2, 0.7, 1.4):
        got = largedev.tilt_inverse(q, 2 * q, BETA)
        assert abs(got.h0) < 1e-8
        lp = oracles.central_diff(
            lambda a: steps.log_mgf(LAW, a), got.h1, 1e-6)
        assert lp == pytest.approx(2 * q, rel=1e-6)


def test_tilt_inverse_positive_h0_below_diagonal():
    for q in (0.3, 0.8, 1.5, 2.5):
        for p in (2 * q - 0.4, 0.0, -0.8):
            assert largedev.tilt_inverse(q, p, BETA).h0 > 0.0


def test_duality_roundtrip():
    rng = np.random.default_rng(23)
    for _ in range(40):
        q, p = rng.uniform(-2.5, 2.5, 2)
        h = largedev.tilt_inverse(q, p, BETA)
        assert h.in_domain()
        got = largedev.grad_l_lambda(h)
        assert got[0] == pytest.approx(q, abs=2e-10)
        assert got[1] == pytest.approx(p, abs=2e-10)


# ---------------------------------------------------------------------------
# rate function g
# ---------------------------------------------------------------------------

def test_rate_zero_at_origin():
    assert abs(largedev.rate_g(0.0, 0.0, BETA)) < 1e-12


def test_rate_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(25):
        q, p = rng.uniform(-2.0, 2.0, 2)
        assert largedev.rate_g(q, p, BETA) >= -1e-12


def test_rate_midpoint_convex():
    rng = np.random.default_rng(9)
    for _ in range(20):
        z1 = rng.uniform(-2.0, 2.0, 2)
        z2 = rng.uniform(-2.0, 2.0, 2)
        mid = 0.5 * (z1 + z2)
        g1 = largedev.rate_g(z1[0], z1[1], BETA)
        g2 = largedev.rate_g(z2[0], z2[1], BETA)
        gm = largedev.rate_g(mid[0], mid[1], BETA)
        assert gm <= 0.5 * (g1 + g2) + 1e-10


def test_rate_frozen_value():
    assert largedev.rate_g(0.5, 0.0, BETA) == \
        pytest.approx(0.5435051390781055, rel=1e-10)


# ---------------------------------------------------------------------------
# finite-n tilts
# ---------------------------------------------------------------------------

def test_finite_tilt_origin():
    got = largedev.finite_tilt(64, 0.0, 0.0, BETA)
    assert abs(got.h0) < 1e-12 and abs(got.h1) < 1e-12


def test_finite_tilt_gap_scales_like_inverse_n():
    ht = largedev.tilt_inverse(0.5, 0.0, BETA)
    prods = []
    for n in (50, 100, 200, 400, 800, 1600, 3200):
        hn = largedev.finite_tilt(n, 0.5, 0.0, BETA)
        prods.append(n * math.hypot(hn.h0 - ht.h0, hn.h1 - ht.h1))
    assert max(prods) < 1.0
    assert max(prods) / min(prods) < 1.1


def test_finite_tilt_solves_stationarity():
    for n, q, p in [(50, 0.5, 0.0), (200, 1.2, -0.5), (800, 0.3, 0.4)]:
        hn = largedev.finite_tilt(n, q, p, BETA)
        gq, gp = largedev.grad_finite_l_lambda(n, hn)
        assert gq == pytest.approx(q, abs=1e-10)
        assert gp == pytest.approx(p, abs=1e-10)


# ---------------------------------------------------------------------------
# tilted sampling
# ---------------------------------------------------------------------------

def test_tilted_sample_identity_tilt_matches_plain_walk():
    n, m = 25, 10 ** 5
    rng = np.random.default_rng(31)
    tilted = np.array([largedev.tilted_sample(n, tv(0.0, 0.0), rng)[-1]
                       for _ in range(m)])
    plain = steps.sample_step(LAW, np.random.default_rng(32), size=n * m)
    plain = plain.reshape(m, n).sum(axis=1)
    stat = scipy.stats.ks_2samp(tilted, plain)
    assert stat.pvalue > 1e-4


def test_tilted_sample_hits_prescribed_averages():
    n, m = 40, 20000
    q, p = 0.6, 0.2
    h = largedev.finite_tilt(n, q, p, BETA)
    rng = np.random.default_rng(41)
    area = np.empty(m)
    end = np.empty(m)
    for i in range(m):
        path = largedev.tilted_sample(n, h, rng)
        area[i] = path[1:-1].sum()  # the n-th increment carries tilt weight 0
        end[i] = path[-1]
    qs = area / n ** 2
    ps = end / n
    for emp, sd, target in ((qs.mean(), qs.std() / math.sqrt(m), q),
                            (ps.mean(), ps.std() / math.sqrt(m), p)):
        assert abs(emp - target) < 3.5 * sd


def test_tilted_sample_increment_means_decrease():
    n, m = 30, 6000
    h = largedev.finite_tilt(n, 0.8, 0.1, BETA)
    assert h.h0 > 0
    rng = np.random.default_rng(51)
    paths = np.array([largedev.tilted_sample(n, h, rng) for _ in range(m)])
    incs = np.diff(paths, axis=1).mean(axis=0)
    third = n // 3
    assert incs[:third].mean() > incs[-third:].mean() + 0.5


def test_tilted_sample_rejects_bad_tilt():
    with pytest.raises(ValueError):
        largedev.tilted_sample(10, tv(0.3, 0.95), np.random.default_rng(0))


def test_tilted_sample_deterministic():
    h = tv(0.4, -0.2)
    a = largedev.tilted_sample(20, h, np.random.default_rng(3))
    b = largedev.tilted_sample(20, h, np.random.default_rng(3))
    np.testing.assert_array_equal(a, b)


# ---------------------------------------------------------------------------
# collapse profile
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def profile_grid():
    pts = []
    for beta in (1.5, 2.0, 3.0):
        top = wetting.critical_curves(beta).delta_circ
        for frac in (0.0, 0.35, 0.85):
            delta = frac * top
            pts.append(largedev.collapse_profile(beta, delta))
    return pts


def test_profile_stationarity(profile_grid):
    for cp in profile_grid:
        assert abs(largedev.phi_prime(cp.a_tilde, cp.beta, cp.delta)) < 1e-8
        f = lambda a: largedev.phi(a, cp.beta, cp.delta)
        h = 1e-3 * cp.a_tilde
        second = (f(cp.a_tilde + h) - 2 * f(cp.a_tilde)
                  + f(cp.a_tilde - h)) / h ** 2
        assert second < 0.0


def test_profile_negative_and_positive_scale(profile_grid):
    for cp in profile_grid:
        assert cp.phi_max < 0.0
        assert cp.a_tilde > 0.0


def test_profile_h_wet_field(profile_grid):
    for cp in profile_grid:
        assert cp.h_wet == wetting.wetting_free_energy(cp.beta, cp.delta)


def test_profile_psi_only_at_delta_zero(profile_grid):
    for cp in profile_grid:
        if cp.delta == 0.0:
            assert cp.psi is not None and cp.psi < 0.0
        else:
            assert cp.psi is None


def test_profile_frozen_values():
    cp = largedev.collapse_profile(2.0, 1.2)
    assert cp.a_tilde == pytest.approx(0.7771590440433735, rel=1e-8)
    assert cp.phi_max == pytest.approx(-2.397933555200658, rel=1e-8)
    assert cp.h_wet == pytest.approx(0.49790758100394715, rel=1e-12)
    cp0 = largedev.collapse_profile(2.0, 0.0)
    assert cp0.a_tilde == pytest.approx(0.69431333, rel=1e-6)
    assert cp0.phi_max == pytest.approx(-2.76327343, rel=1e-6)
    assert cp0.psi == pytest.approx(-3.109838007875992, rel=1e-8)
    cp13 = largedev.collapse_profile(1.3, 0.0)
    assert cp13.a_tilde == pytest.approx(1.29678991, rel=1e-6)
    assert cp13.phi_max == pytest.approx(-0.50456764, rel=1e-6)
    assert cp13.psi == pytest.approx(-2.5311953815028776, rel=1e-8)
    cp31 = largedev.collapse_profile(3.0, 1.0)
    assert cp31.a_tilde == pytest.approx(0.61246073, rel=1e-6)
    assert cp31.phi_max == pytest.approx(-4.87549068, rel=1e-6)


def test_profile_adsorption_raises_scale():
    base = largedev.collapse_profile(2.0, 0.0).phi_max
    dt = wetting.delta_tilde(2.0)
    for delta in (dt + 0.2, 1.2, 2.4):
        assert largedev.collapse_profile(2.0, delta).phi_max > base


def test_profile_outside_collapsed_phase_rejected():
    top = wetting.critical_curves(2.0).delta_circ
    with pytest.raises(ValueError):
        largedev.collapse_profile(2.0, top + 1e-6)
    with pytest.raises(ValueError):
        largedev.collapse_profile(1.0, 0.0)  # below the collapse threshold


def test_phi_matches_expanded_display():
    # a (2 log Gamma + h - g(q,0)) with g expanded through its tilt
    for a in (0.4, 0.7771590440433735, 1.3):
        for delta in (0.0, 1.2):
            q = 0.5 / (a * a)
            h = largedev.tilt_inverse(q, 0.0, BETA)
            c = (2.0 * math.log(LAW.gamma_beta)
                 + wetting.wetting_free_energy(BETA, delta))
            display = a * (c - q * h.h0 + largedev.l_lambda(h))
            assert largedev.phi(a, BETA, delta) == \
                pytest.approx(display, rel=1e-10)


def test_profile_delta_slope_envelope():
    # d Phi / d delta = a_tilde * h'(delta): only the explicit delta
    # dependence survives at the maximizer
    cp = largedev.collapse_profile(2.0, 1.2)
    hp = oracles.central_diff(
        lambda d: wetting.wetting_free_energy(2.0, d), 1.2, 1e-5)
    got = largedev.phi_max_ddelta(2.0, 1.2)
    assert got == pytest.approx(cp.a_tilde * hp, rel=1e-4)
    assert got == pytest.approx(0.696706, rel=1e-4)


# ---------------------------------------------------------------------------
# Airy constant and meander rate
# ---------------------------------------------------------------------------

def test_airy_zero_value():
    a1 = largedev.airy_first_zero()
    assert a1 == pytest.approx(-2.3381074105, abs=1e-9)
    ref = -scipy.special.ai_zeros(1)[0][0]
    assert a1 == pytest.approx(-abs(ref), abs=1e-11)
    assert abs(scipy.special.airy(a1)[0]) < 1e-10


def test_airy_bracket_sign_change():
    assert scipy.special.airy(-3.0)[0] * scipy.special.airy(-2.0)[0] < 0


def test_meander_rate_values():
    a1 = largedev.airy_first_zero()
    assert largedev.meander_rate(1.0) == \
        pytest.approx(-2.0 ** (-1.0 / 3.0) * abs(a1), rel=1e-12)
    assert largedev.meander_rate(1.0) == pytest.approx(-1.85575, abs=1e-5)
    assert largedev.meander_rate(8.0) / largedev.meander_rate(1.0) == \
        pytest.approx(4.0, rel=1e-12)


def test_meander_rate_rejects_nonpositive():
    with pytest.raises(ValueError):
        largedev.meander_rate(0.0)
    with pytest.raises(ValueError):
        largedev.meander_rate(-2.0)
