import numpy as np
import pytest

from wigcheck import (AxisGrid, default_axis, fock_state, fourier_wavefunction,
                      gaussian_wavepacket, kernel_from_wigner, load_wigner_manifest,
                      mixture_wigner, operator_spectrum_oracle, rescale,
                      save_wigner_manifest, symplectic_fourier, trace,
                      wigner_gaussian, wigner_of_pure)
from wigcheck.states import WaveFunctionGrid


def test_fock_normalization_and_orthogonality():
    axis = default_axis()
    psi0 = fock_state(0, axis)
    psi1 = fock_state(1, axis)
    d = axis.spacing
    assert psi0.norm_squared() == pytest.approx(1.0, abs=1e-8)
    overlap = np.sum(np.conj(psi0.values) * psi1.values) * d
    assert abs(overlap) <= 1e-8


def test_fock1_odd_parity():
    psi1 = fock_state(1)
    mid = psi1.axis.count // 2
    assert psi1.axis.points[mid] == pytest.approx(0.0, abs=1e-14)
    assert psi1.values[mid] == pytest.approx(0.0, abs=1e-14)


def test_fock_grid_too_narrow():
    with pytest.raises(ValueError, match="narrow"):
        fock_state(0, default_axis(extent=2.0))


def test_wigner_vacuum_value(vacuum_wigner):
    # closed-form Gaussian value at the origin
    mid_x = vacuum_wigner.x_axis.count // 2
    mid_p = vacuum_wigner.p_axis.count // 2
    assert vacuum_wigner.values[mid_x, mid_p] == pytest.approx(1 / np.pi, abs=1e-4)
    assert trace(vacuum_wigner) == pytest.approx(1.0, abs=1e-5)


def test_wigner_fock1_value_against_quadrature(fock1_psi, fock1_wigner):
    # independent quadrature of the defining transform at the origin:
    # W(0,0) = (1/pi hbar) \int psi(y) conj(psi(-y)) dy
    d = fock1_psi.axis.spacing
    vals = fock1_psi.values
    # grid points are x_m = (m - n/2) d, so psi(-x_m) sits at index (n - m) % n
    reflected = np.concatenate([vals[:1], vals[1:][::-1]])
    expected = float(np.real(np.sum(vals * np.conj(reflected)) * d) / np.pi)
    assert expected == pytest.approx(-1 / np.pi, abs=1e-6)
    mid_x = fock1_wigner.x_axis.count // 2
    mid_p = fock1_wigner.p_axis.count // 2
    assert fock1_wigner.values[mid_x, mid_p] == pytest.approx(expected, abs=1e-3)


def test_wigner_imaginary_residual(fock1_wigner, vacuum_wigner):
    assert vacuum_wigner.imag_residual <= 1e-10
    assert fock1_wigner.imag_residual <= 1e-10


def test_wigner_requires_normalized_input():
    axis = default_axis()
    psi = fock_state(0, axis)
    bad = WaveFunctionGrid(axis, 2.0 * psi.values, psi.hbar)
    with pytest.raises(ValueError, match="normalized"):
        wigner_of_pure(bad)


def test_gaussian_matches_pure_vacuum(vacuum_wigner):
    closed = wigner_gaussian(np.zeros(2), 0.5 * np.eye(2),
                             vacuum_wigner.x_axis, vacuum_wigner.p_axis)
    assert np.abs(closed.values - vacuum_wigner.values).max() <= 1e-6


def test_gaussian_peak_and_trace():
    axis = default_axis()
    sigma = np.array([[0.7, 0.2], [0.2, 0.5]])
    w = wigner_gaussian(np.zeros(2), sigma, axis, axis)
    expected_peak = 1.0 / (2 * np.pi * np.sqrt(np.linalg.det(sigma)))
    assert w.values.max() == pytest.approx(expected_peak, rel=1e-10)
    assert trace(w) == pytest.approx(1.0, abs=1e-6)


def test_gaussian_rejects_singular():
    axis = default_axis()
    with pytest.raises(ValueError):
        wigner_gaussian(np.zeros(2), np.array([[1.0, 1.0], [1.0, 1.0]]), axis, axis)


def test_mixture_single_component_identity(vacuum_psi, vacuum_wigner):
    w = mixture_wigner([(1.0, vacuum_psi)])
    assert np.array_equal(w.values, vacuum_wigner.values)


def test_mixture_trace_and_weights(mixture_5050):
    assert trace(mixture_5050) == pytest.approx(1.0, abs=1e-5)
    with pytest.raises(ValueError, match="sum"):
        mixture_wigner([(0.5, fock_state(0)), (0.6, fock_state(1))])


def test_rescale_identity(vacuum_wigner):
    w = rescale(vacuum_wigner, 1.0)
    assert np.abs(w.values - vacuum_wigner.values).max() <= 1e-12


def test_rescale_vacuum_covariance():
    # second moments scale as 1/lambda^2
    from wigcheck import covariance_from_grid
    w = rescale(wigner_of_pure(fock_state(0)), 2.0)
    cov = covariance_from_grid(w)
    assert np.allclose(cov.sigma, np.diag([1 / 8, 1 / 8]), atol=1e-3)


@pytest.mark.parametrize("lam", [0.8, 1.2, 2.0])
def test_rescale_preserves_mass(fock1_wigner, lam):
    assert trace(rescale(fock1_wigner, lam)) == pytest.approx(trace(fock1_wigner), abs=1e-5)


def test_rescale_rejects_nonpositive(vacuum_wigner):
    with pytest.raises(ValueError):
        rescale(vacuum_wigner, 0.0)


def test_rescale_composition(vacuum_wigner):
    once = rescale(rescale(vacuum_wigner, 1.2), 1.1)
    direct = rescale(vacuum_wigner, 1.32)
    assert np.abs(once.values - direct.values).max() <= 1e-4


def test_trace_linearity(vacuum_wigner):
    from wigcheck.states import WignerGrid
    doubled = WignerGrid(vacuum_wigner.x_axis, vacuum_wigner.p_axis,
                         2.0 * vacuum_wigner.values, vacuum_wigner.hbar)
    assert trace(doubled) == pytest.approx(2.0, abs=2e-6)


def test_no_fixture_trace(no_grid):
    assert trace(no_grid) == pytest.approx(1.0, abs=1e-3)


def test_symplectic_fourier_at_origin(vacuum_wigner, mixture_5050):
    for w in (vacuum_wigner, mixture_5050):
        f = symplectic_fourier(w)
        assert f(np.zeros(2)) == pytest.approx(trace(w), abs=1e-12)


def test_symplectic_fourier_vacuum_analytic(vacuum_wigner):
    # separable Gaussian integral: F(z) = exp(-|z|^2/4) at hbar = 1
    f = symplectic_fourier(vacuum_wigner)
    pts = np.array([[0.5, 0.0], [0.0, 1.3], [1.0, -1.0], [2.0, 2.0]])
    expected = np.exp(-np.sum(pts**2, axis=1) / 4)
    assert np.abs(f(pts) - expected).max() <= 1e-4


def test_symplectic_fourier_reality_symmetry(fock1_wigner):
    f = symplectic_fourier(fock1_wigner)
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(8, 2))
    assert np.abs(np.conj(f(pts)) - f(-pts)).max() <= 1e-12


def test_kernel_round_trip(vacuum_psi, vacuum_wigner):
    k = kernel_from_wigner(vacuum_wigner)
    ref = np.outer(vacuum_psi.values, np.conj(vacuum_psi.values))
    assert np.abs(k.values - ref).max() <= 1e-5


def test_kernel_diagonal_trace(fock1_wigner):
    k = kernel_from_wigner(fock1_wigner)
    diag_sum = float(np.real(np.trace(k.values))) * k.axis.spacing
    assert diag_sum == pytest.approx(trace(fock1_wigner), abs=1e-5)


def test_kernel_hermitian(no_grid):
    assert kernel_from_wigner(no_grid).hermiticity_residual() <= 1e-8


def test_oracle_vacuum_projector(vacuum_wigner):
    eigs = operator_spectrum_oracle(vacuum_wigner)
    assert eigs[0] == pytest.approx(1.0, abs=1e-4)
    assert np.abs(eigs[1:]).max() <= 1e-4


def test_oracle_mixture_spectrum(mixture_5050):
    eigs = operator_spectrum_oracle(mixture_5050)
    assert eigs[0] == pytest.approx(0.5, abs=1e-3)
    assert eigs[1] == pytest.approx(0.5, abs=1e-3)
    assert np.abs(eigs[2:]).max() <= 1e-3


def test_oracle_sum_matches_trace(mixture_5050, no_grid):
    for w in (mixture_5050, no_grid):
        eigs = operator_spectrum_oracle(w)
        assert eigs.sum() == pytest.approx(trace(w), abs=1e-4)


def test_oracle_rescaled_fock1_negative_two_grids():
    vals = []
    for count in (256, 512):
        w = wigner_of_pure(fock_state(1, default_axis(count=count)))
        eigs = operator_spectrum_oracle(rescale(w, 1.2))
        assert eigs[-1] <= -1e-3
        vals.append(eigs[-1])
    assert 0.5 <= vals[0] / vals[1] <= 2.0


def test_marginal_property(fock1_psi, fock1_wigner):
    marginal = fock1_wigner.values.sum(axis=1) * fock1_wigner.p_axis.spacing
    assert np.abs(marginal - np.abs(fock1_psi.values) ** 2).max() <= 1e-5


def test_fourier_rotation_covariance():
    # the Wigner function of the transformed state is the original rotated
    # by 90 degrees: W_F(u, v) = W(-v, u); checked on an asymmetric state
    axis = default_axis()
    psi0, psi1 = fock_state(0, axis), fock_state(1, axis)
    sup = (psi0.values + psi1.values) / np.sqrt(2.0)
    psi = WaveFunctionGrid(axis, sup / np.sqrt(np.sum(np.abs(sup) ** 2) * axis.spacing))
    w = wigner_of_pure(psi)
    wf = wigner_of_pure(fourier_wavefunction(psi))
    n = axis.count
    i_idx = np.arange(n // 4, 3 * n // 4)
    j_idx = np.arange(0, n, 2)
    k_idx = n // 2 + 2 * (i_idx - n // 2)
    m_idx = n // 2 + (n // 2 - j_idx) // 2
    expected = w.values[np.ix_(m_idx, k_idx)].T
    got = wf.values[np.ix_(i_idx, j_idx)]
    assert np.abs(got - expected).max() <= 1e-5


def test_symplectic_fourier_warns_on_fat_boundary():
    axis = default_axis()
    fat = wigner_gaussian(np.zeros(2), 9.0 * np.eye(2), axis, axis)
    with pytest.warns(UserWarning, match="decay"):
        symplectic_fourier(fat)


def test_rescale_warns_when_mass_leaves_grid(vacuum_wigner):
    with pytest.warns(UserWarning, match="mass"):
        rescale(vacuum_wigner, 0.15)


def test_manifest_round_trip_inline(tmp_path, vacuum_wigner):
    path = tmp_path / "w.json"
    save_wigner_manifest(vacuum_wigner, path)
    back = load_wigner_manifest(path)
    assert back.x_axis == vacuum_wigner.x_axis
    assert back.p_axis == vacuum_wigner.p_axis
    assert np.array_equal(back.values, vacuum_wigner.values)


def test_manifest_round_trip_csv(tmp_path, fock1_wigner):
    path = tmp_path / "w.json"
    save_wigner_manifest(fock1_wigner, path, csv_path=tmp_path / "w.csv")
    back = load_wigner_manifest(path)
    assert np.array_equal(back.values, fock1_wigner.values)
    assert back.hbar == fock1_wigner.hbar


def test_axis_validation():
    with pytest.raises(ValueError):
        AxisGrid(1.0, 0.0, 64)
    with pytest.raises(ValueError):
        AxisGrid(0.0, 1.0, 4)


def test_gaussian_wavepacket_rates():
    psi = gaussian_wavepacket(2.0)
    assert psi.norm_squared() == pytest.approx(1.0, abs=1e-10)
    prob = np.abs(psi.values) ** 2 * psi.axis.spacing
    var = float((psi.axis.points**2 * prob).sum())
    assert var == pytest.approx(1.0 / (2 * 2.0), rel=1e-6)
