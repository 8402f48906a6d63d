import numpy as np
import pytest

from conftest import random_spd
from wigcheck import (check_quantum_psd, check_rs, check_williamson_criterion,
                      covariance_from_grid, default_axis, fock_state, hbar_sweep,
                      lambda_star, random_symplectic, rescale_covariance,
                      uncertainty_report, wigner_gaussian, wigner_of_pure)


def test_covariance_vacuum(vacuum_wigner):
    cov = covariance_from_grid(vacuum_wigner)
    assert np.allclose(cov.sigma, 0.5 * np.eye(2), atol=1e-4)
    assert np.allclose(cov.mean, 0.0, atol=1e-6)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_covariance_fock_states(n):
    w = wigner_of_pure(fock_state(n, default_axis(extent=10.0)))
    cov = covariance_from_grid(w)
    assert np.allclose(cov.sigma, (2 * n + 1) / 2 * np.eye(2), atol=1e-3)


def test_covariance_of_equal_mixture(mixture_5050):
    # zero means, so the mixture covariance is the weight average: hbar * I
    cov = covariance_from_grid(mixture_5050)
    assert np.allclose(cov.sigma, np.eye(2), atol=1e-3)


def test_covariance_heavy_tail_warns():
    axis = default_axis()
    fat = wigner_gaussian(np.zeros(2), 9.0 * np.eye(2), axis, axis)
    with pytest.warns(UserWarning, match="tail"):
        covariance_from_grid(fat)


def test_covariance_gaussian_round_trip():
    axis = default_axis()
    sigma = np.array([[0.9, 0.25], [0.25, 0.6]])
    mean = np.array([0.4, -0.3])
    cov = covariance_from_grid(wigner_gaussian(mean, sigma, axis, axis))
    assert np.allclose(cov.sigma, sigma, atol=1e-4)
    assert np.allclose(cov.mean, mean, atol=1e-4)


def test_rs_saturation_passes():
    checks = check_rs(0.5 * np.eye(2), hbar=1.0)
    assert all(c.ok for c in checks)
    assert checks[0].margin == pytest.approx(0.0, abs=1e-12)


def test_rs_squeezed_below_bound_fails():
    hbar = 1.0
    checks = check_rs(0.5 * hbar * np.diag([1.0, 0.2]), hbar)
    assert not checks[0].ok
    assert checks[0].margin == pytest.approx(-0.8 * hbar**2 / 4, abs=1e-12)


def test_rs_correlated_equality_passes():
    hbar = 1.0
    sigma = 0.5 * hbar * np.array([[2.0, 1.0], [1.0, 1.0]])
    checks = check_rs(sigma, hbar)
    assert checks[0].ok
    assert checks[0].lhs == pytest.approx(checks[0].rhs, abs=1e-12)
    assert checks[0].lhs == pytest.approx(hbar**2 / 2)


def test_quantum_psd_boundary_and_failure():
    ok, min_eig = check_quantum_psd(0.5 * np.eye(2), 1.0)
    assert ok and min_eig == pytest.approx(0.0, abs=1e-12)
    ok, _ = check_quantum_psd(0.5 * np.diag([1.0, 0.9]), 1.0)
    assert not ok


def test_quantum_psd_fails_after_rescaling():
    sigma = rescale_covariance(0.5 * np.eye(2), 1.2)
    ok, _ = check_quantum_psd(sigma, 1.0)
    assert not ok


def test_williamson_criterion_examples():
    ok, nu = check_williamson_criterion(0.5 * np.eye(2), 1.0)
    assert ok and nu == pytest.approx(0.5)
    ok, nu = check_williamson_criterion(1.5 * np.eye(2), 1.0)
    assert ok and nu == pytest.approx(1.5)


def test_criteria_agree_on_random_covariances():
    rng = np.random.default_rng(10)
    hbar = 1.0
    for _ in range(500):
        dim = 2 * int(rng.integers(1, 3))
        sigma = random_spd(rng, dim, lo=0.15, hi=1.5)
        psd_ok, min_eig = check_quantum_psd(sigma, hbar)
        will_ok, nu = check_williamson_criterion(sigma, hbar)
        if abs(nu - hbar / 2) <= 1e-10 * np.abs(sigma).max():
            continue
        assert psd_ok == will_ok


def test_rescale_covariance_examples():
    sigma = 0.5 * np.eye(2)
    assert np.array_equal(rescale_covariance(sigma, 1.0), sigma)
    assert np.allclose(rescale_covariance(sigma, 2.0), np.eye(2) / 8)


def test_rescale_covariance_grid_cross_check(fock1_wigner):
    from wigcheck import rescale
    lam = 1.3
    direct = rescale_covariance(covariance_from_grid(fock1_wigner).sigma, lam)
    via_grid = covariance_from_grid(rescale(fock1_wigner, lam)).sigma
    assert np.allclose(direct, via_grid, atol=1e-3)


def test_lambda_star_values():
    assert lambda_star(0.5 * np.eye(2), 1.0) == pytest.approx(1.0, abs=1e-12)
    assert lambda_star(1.5 * np.eye(2), 1.0) == pytest.approx(np.sqrt(3.0), abs=1e-12)
    assert lambda_star(0.5 * np.diag([4.0, 1.0]), 1.0) == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_lambda_star_flags_failing_covariance():
    assert lambda_star(0.2 * np.eye(2), 1.0) < 1.0


def test_lambda_star_matches_sweep():
    rng = np.random.default_rng(11)
    hbar = 1.0
    for _ in range(20):
        sigma = random_spd(rng, 2, lo=0.3, hi=1.5)
        star = lambda_star(sigma, hbar)
        for lam in np.linspace(0.5 * star, 1.5 * star, 11):
            ok, _ = check_quantum_psd(rescale_covariance(sigma, lam), hbar)
            if abs(lam - star) > 1e-9:
                assert ok == (lam < star)


def test_hbar_sweep_vacuum(vacuum_wigner):
    reports = hbar_sweep(vacuum_wigner, [0.5, 1.0, 1.5])
    verdicts = [r.verdict for r in reports]
    assert verdicts == [True, True, False]
    # pass set is a down-set in hbar
    flips = [a and not b for a, b in zip(verdicts, verdicts[1:])]
    assert sum(flips) <= 1


def test_psd_implies_rs():
    # necessity direction: the canonical criterion implies every pair inequality
    rng = np.random.default_rng(12)
    hbar = 1.0
    checked = 0
    for _ in range(500):
        dim = 2 * int(rng.integers(1, 3))
        sigma = random_spd(rng, dim, lo=0.2, hi=2.0)
        psd_ok, _ = check_quantum_psd(sigma, hbar)
        if psd_ok:
            checked += 1
            assert all(c.ok for c in check_rs(sigma, hbar))
    assert checked > 50


def test_one_mode_three_way_equivalence():
    rng = np.random.default_rng(13)
    hbar = 1.0
    for _ in range(1000):
        sigma = random_spd(rng, 2, lo=0.2, hi=1.2)
        det_ok = np.linalg.det(sigma) >= hbar**2 / 4
        rs_ok = all(c.ok for c in check_rs(sigma, hbar))
        psd_ok, min_eig = check_quantum_psd(sigma, hbar)
        if abs(np.linalg.det(sigma) - hbar**2 / 4) <= 1e-9:
            continue
        assert rs_ok == psd_ok == det_ok


def test_verdict_symplectically_invariant():
    rng = np.random.default_rng(14)
    hbar = 1.0
    for i in range(50):
        ndof = int(rng.integers(1, 3))
        sigma = random_spd(rng, 2 * ndof, lo=0.2, hi=1.2)
        S = random_symplectic(i, ndof)
        ok_a, _ = check_quantum_psd(sigma, hbar)
        ok_b, _ = check_quantum_psd(S.T @ sigma @ S, hbar)
        assert ok_a == ok_b


def test_two_mode_rs_weaker_than_psd():
    # the pair inequalities ignore x-x correlations entirely, so covariances
    # passing all of them can still fail the canonical criterion; record how
    # often a random search finds one
    hbar = 1.0
    sigma = np.diag([0.6, 0.6, 0.6, 0.6]).astype(float)
    sigma[0, 1] = sigma[1, 0] = 0.55
    assert all(c.ok for c in check_rs(sigma, hbar))
    psd_ok, _ = check_quantum_psd(sigma, hbar)
    assert not psd_ok

    rng = np.random.default_rng(15)
    found = 0
    for _ in range(300):
        s = random_spd(rng, 4, lo=0.4, hi=0.9)
        if all(c.ok for c in check_rs(s, hbar)):
            ok, _ = check_quantum_psd(s, hbar)
            if not ok:
                found += 1
    print(f"\nrandom search: {found}/300 covariances pass the pair "
          f"inequalities but fail the canonical criterion")


def test_uncertainty_report_fields(vacuum_wigner):
    cov = covariance_from_grid(vacuum_wigner)
    rep = uncertainty_report(cov.sigma, 1.0)
    assert rep.verdict and rep.rs_ok
    assert rep.boundary  # vacuum saturates the bound
    assert rep.nu_min <= rep.nu_max
    assert rep.lambda_star == pytest.approx(1.0, abs=1e-10)
    d = rep.to_dict()
    assert d["verdict"] == "pass"
    assert len(d["rs"]) == 1
