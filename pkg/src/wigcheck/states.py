"""Grid-based quantum states for one degree of freedom.

Wavefunctions live on a uniform position grid whose points are
x_m = (m - n/2) * dx, so the origin is always a grid point and the grid
conjugate to it under the discrete Fourier transform has the same layout.
Wigner grids produced from pure states carry the momentum axis conjugate
to the position axis (dp = pi*hbar / (n*dx)); grids built from closed
forms may use any pair of axes.
"""

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline, RectBivariateSpline

__all__ = [
    "PhaseSpaceContext",
    "AxisGrid",
    "default_axis",
    "wigner_momentum_axis",
    "fourier_momentum_axis",
    "WaveFunctionGrid",
    "WignerGrid",
    "KernelMatrix",
    "fock_state",
    "gaussian_wavepacket",
    "fourier_wavefunction",
    "wigner_of_pure",
    "wigner_gaussian",
    "mixture_wigner",
    "trace",
    "rescale",
    "SymplecticFourier",
    "symplectic_fourier",
    "kernel_from_wigner",
    "operator_spectrum_oracle",
    "save_wigner_manifest",
    "load_wigner_manifest",
]


@dataclass(frozen=True)
class PhaseSpaceContext:
    """Number of degrees of freedom and the value of hbar used by every check."""

    ndof: int = 1
    hbar: float = 1.0

    def __post_init__(self):
        if self.ndof < 1:
            raise ValueError("ndof must be >= 1")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class AxisGrid:
    """Uniform 1-d grid with inclusive endpoints."""

    min: float
    max: float
    count: int

    def __post_init__(self):
        if not self.min < self.max:
            raise ValueError("min must be < max")
        if self.count < 16:
            raise ValueError("count must be >= 16")

    @property
    def spacing(self):
        return (self.max - self.min) / (self.count - 1)

    @property
    def points(self):
        return np.linspace(self.min, self.max, self.count)

    def to_dict(self):
        return {"min": self.min, "max": self.max, "count": self.count}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["min"]), float(d["max"]), int(d["count"]))


def default_axis(hbar=1.0, count=256, extent=8.0):
    """Centered position axis covering [-extent*sqrt(hbar), extent*sqrt(hbar))."""
    if count % 2 != 0:
        raise ValueError("count must be even")
    d = 2.0 * extent * np.sqrt(hbar) / count
    return AxisGrid(-(count // 2) * d, (count // 2 - 1) * d, count)


def _conjugate(axis, step):
    n = axis.count
    return AxisGrid(-(n // 2) * step, (n // 2 - 1) * step, n)


def wigner_momentum_axis(axis, hbar=1.0):
    """Momentum axis conjugate to `axis` for the Wigner transform (dp = pi*hbar/(n*dx))."""
    return _conjugate(axis, np.pi * hbar / (axis.count * axis.spacing))


def fourier_momentum_axis(axis, hbar=1.0):
    """Momentum axis conjugate to `axis` for wavefunctions (dp = 2*pi*hbar/(n*dx))."""
    return _conjugate(axis, 2.0 * np.pi * hbar / (axis.count * axis.spacing))


def _cdft(a, axis=-1):
    # centered DFT: X[k] = sum_m a[m] exp(-2 pi i k m / n) with k, m in [-n/2, n/2)
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


@dataclass
class WaveFunctionGrid:
    """Complex wavefunction samples on a position axis."""

    axis: AxisGrid
    values: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.axis.count,):
            raise ValueError("values must match the axis length")

    def norm_squared(self):
        return float(np.sum(np.abs(self.values) ** 2) * self.axis.spacing)


@dataclass
class WignerGrid:
    """Real phase-space samples W[i, j] at (x_i, p_j)."""

    x_axis: AxisGrid
    p_axis: AxisGrid
    values: np.ndarray
    hbar: float = 1.0
    imag_residual: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.x_axis.count, self.p_axis.count):
            raise ValueError("values must have shape (len(x_axis), len(p_axis))")

    @property
    def cell_area(self):
        return self.x_axis.spacing * self.p_axis.spacing

    def meshgrid(self):
        return np.meshgrid(self.x_axis.points, self.p_axis.points, indexing="ij")


@dataclass
class KernelMatrix:
    """Discretized operator kernel K(x_i, x_j) on a position axis."""

    axis: AxisGrid
    values: np.ndarray
    hbar: float = 1.0

    def hermiticity_residual(self):
        return float(np.abs(self.values - self.values.conj().T).max())


def _hermite_functions(n, xi):
    """Normalized Hermite functions h_0..h_n at points xi (stable recurrence)."""
    h = np.zeros((n + 1, xi.size))
    h[0] = np.pi ** -0.25 * np.exp(-0.5 * xi**2)
    if n >= 1:
        h[1] = np.sqrt(2.0) * xi * h[0]
    for k in range(2, n + 1):
        h[k] = np.sqrt(2.0 / k) * xi * h[k - 1] - np.sqrt((k - 1) / k) * h[k - 2]
    return h


def fock_state(n, axis=None, hbar=1.0, boundary_tol=1e-12):
    """n-th harmonic oscillator eigenfunction on the grid, Riemann-normalized.

    Raises when the grid is too narrow to hold the state (boundary amplitude
    above `boundary_tol` relative to the peak).
    """
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    if axis is None:
        axis = default_axis(hbar)
    xs = axis.points
    vals = hbar ** -0.25 * _hermite_functions(n, xs / np.sqrt(hbar))[n]
    peak = np.abs(vals).max()
    if max(abs(vals[0]), abs(vals[-1])) > boundary_tol * peak:
        raise ValueError("grid too narrow: wavefunction does not vanish at the boundary")
    vals = vals / np.sqrt(np.sum(np.abs(vals) ** 2) * axis.spacing)
    return WaveFunctionGrid(axis, vals, hbar)


def gaussian_wavepacket(rate=1.0, axis=None, hbar=1.0):
    """Real Gaussian psi(x) propto exp(-rate*x^2 / (2*hbar)), normalized."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    if axis is None:
        axis = default_axis(hbar)
    xs = axis.points
    vals = (rate / (np.pi * hbar)) ** 0.25 * np.exp(-rate * xs**2 / (2 * hbar))
    vals = vals / np.sqrt(np.sum(vals**2) * axis.spacing)
    return WaveFunctionGrid(axis, vals, hbar)


def _require_normalized(psi, tol=1e-6):
    if abs(psi.norm_squared() - 1.0) > tol:
        raise ValueError("wavefunction is not normalized")


def fourier_wavefunction(psi):
    """Unitary hbar-scaled Fourier transform of a wavefunction.

    F psi(p) = (2 pi hbar)^(-1/2) int exp(-i p x / hbar) psi(x) dx, sampled
    on the conjugate momentum axis.
    """
    axis, hbar = psi.axis, psi.hbar
    if axis.count % 2 != 0:
        raise ValueError("count must be even")
    out_axis = fourier_momentum_axis(axis, hbar)
    vals = axis.spacing / np.sqrt(2 * np.pi * hbar) * _cdft(psi.values)
    return WaveFunctionGrid(out_axis, vals, hbar)


def wigner_of_pure(psi, aliasing_tol=1e-8):
    """Wigner distribution of a normalized pure state.

    W(x, p) = (1/(pi*hbar)) int exp(-2 i p y / hbar) psi(x+y) conj(psi(x-y)) dy,
    evaluated by a centered DFT over the offset variable.  The momentum axis
    is conjugate to the position axis.  The largest imaginary part discarded
    when taking the real part is recorded on the result.
    """
    _require_normalized(psi)
    axis, hbar = psi.axis, psi.hbar
    n = axis.count
    if n % 2 != 0:
        raise ValueError("count must be even")
    d = axis.spacing
    pad = np.concatenate([np.zeros(n, dtype=complex), psi.values, np.zeros(n, dtype=complex)])
    offs = np.arange(n) - n // 2
    rows = np.arange(n)[:, None]
    corr = pad[rows + offs[None, :] + n] * np.conjugate(pad[rows - offs[None, :] + n])
    wc = (d / (np.pi * hbar)) * _cdft(corr, axis=1)
    imag_residual = float(np.abs(wc.imag).max())
    w = WignerGrid(axis, wigner_momentum_axis(axis, hbar), wc.real, hbar, imag_residual)
    edge = max(np.abs(w.values[:, :2]).max(), np.abs(w.values[:, -2:]).max())
    if edge > aliasing_tol * np.abs(w.values).max():
        warnings.warn(f"possible momentum aliasing: boundary amplitude ratio {edge:.2e}")
    return w


def wigner_gaussian(mean, sigma, x_axis, p_axis, hbar=1.0):
    """Gaussian Wigner function with the given mean and covariance matrix.

    W(z) = (2 pi)^(-1) det(sigma)^(-1/2) exp(-(z-mean)^T sigma^(-1) (z-mean)/2).
    """
    sigma = np.asarray(sigma, dtype=float)
    mean = np.asarray(mean, dtype=float)
    if sigma.shape != (2, 2) or mean.shape != (2,):
        raise ValueError("grid-based Gaussian states support one degree of freedom only")
    det = np.linalg.det(sigma)
    if np.abs(sigma - sigma.T).max() > 1e-12 * max(1.0, np.abs(sigma).max()) or det <= 0:
        raise ValueError("sigma must be symmetric positive definite")
    inv = np.linalg.inv(sigma)
    X, P = np.meshgrid(x_axis.points - mean[0], p_axis.points - mean[1], indexing="ij")
    quad = inv[0, 0] * X * X + 2 * inv[0, 1] * X * P + inv[1, 1] * P * P
    vals = np.exp(-0.5 * quad) / (2 * np.pi * np.sqrt(det))
    return WignerGrid(x_axis, p_axis, vals, hbar)


def mixture_wigner(components):
    """Convex combination of pure-state Wigner grids.

    `components` is a sequence of (weight, WaveFunctionGrid) with positive
    weights summing to 1; all states must share the same axis and hbar.
    """
    components = list(components)
    if not components:
        raise ValueError("mixture needs at least one component")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights <= 0):
        raise ValueError("mixture weights must be positive")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("mixture weights must sum to 1")
    first = components[0][1]
    for _, psi in components[1:]:
        if psi.axis != first.axis or psi.hbar != first.hbar:
            raise ValueError("mixture components live on incompatible grids")
    grids = [wigner_of_pure(psi) for _, psi in components]
    vals = sum(w * g.values for w, g in zip(weights, grids))
    resid = max(g.imag_residual for g in grids)
    return WignerGrid(grids[0].x_axis, grids[0].p_axis, vals, first.hbar, resid)


def trace(w):
    """Riemann-sum trace: sum of the grid values times the cell area."""
    return float(w.values.sum() * w.cell_area)


def _is_wigner_conjugate(w):
    return abs(w.p_axis.spacing * w.x_axis.count * w.x_axis.spacing
               - np.pi * w.hbar) <= 1e-9 * np.pi * w.hbar


def rescale(w, lam, mass_tol=1e-5):
    """Mass-preserving rescaling: W_lam(z) = lam^2 W(lam*z) on the same axes.

    When the momentum axis is DFT-conjugate to the position axis the momentum
    resampling is done exactly through the band-limited trigonometric
    representation; otherwise a bicubic spline is used.  Points that fall
    outside the source domain are treated as zero; a warning reports the mass
    deviation when it exceeds `mass_tol`.
    """
    if lam <= 0:
        raise ValueError("rescale parameter must be positive")
    xs, ps = w.x_axis.points, w.p_axis.points
    n = w.x_axis.count
    out = np.zeros_like(w.values)
    okx = (lam * xs >= xs[0]) & (lam * xs <= xs[-1])
    okp = (lam * ps >= ps[0]) & (lam * ps <= ps[-1])
    if _is_wigner_conjugate(w) and n % 2 == 0:
        # W[i, k] = sum_m a[i, m] exp(-2 i p_k (m*dx) / hbar): resample p exactly
        offs = np.arange(w.p_axis.count) - w.p_axis.count // 2
        a = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(w.values, axes=1), axis=1), axes=1)
        ph = np.exp(-2j * np.outer(offs * w.x_axis.spacing, lam * ps[okp]) / w.hbar)
        resampled = (a @ ph).real
        spline = CubicSpline(xs, resampled, axis=0)
        out[np.ix_(okx, okp)] = spline(lam * xs[okx])
    else:
        spline = RectBivariateSpline(xs, ps, w.values, kx=3, ky=3)
        out[np.ix_(okx, okp)] = spline(lam * xs[okx], lam * ps[okp])
    out *= lam**2
    res = WignerGrid(w.x_axis, w.p_axis, out, w.hbar, w.imag_residual)
    drift = abs(trace(res) - trace(w))
    if drift > mass_tol * max(1.0, abs(trace(w))):
        warnings.warn(f"rescale mass drift {drift:.3e} (tail outside the grid)")
    return res


class SymplecticFourier:
    """Evaluator for F_sigma W(z) = int exp(i sigma(z, z')) W(z') dz'.

    The kernel at z = (x, p) is exp(i (p x' - p' x)); evaluation is a direct
    quadrature over the stored grid, so any point is admissible.  F(0) equals
    the grid trace.
    """

    def __init__(self, w, boundary_tol=1e-10):
        self._xs = w.x_axis.points
        self._ps = w.p_axis.points
        self._vals = w.values
        self._area = w.cell_area
        peak = np.abs(w.values).max()
        frame = max(np.abs(w.values[[0, -1], :]).max(), np.abs(w.values[:, [0, -1]]).max())
        self.boundary_ratio = float(frame / peak) if peak > 0 else 0.0
        self.trace = float(w.values.sum() * self._area)
        if self.boundary_ratio > boundary_tol:
            warnings.warn(
                f"Wigner grid does not decay at the boundary (tail ratio {self.boundary_ratio:.2e})")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        single = z.ndim == 1
        pts = np.atleast_2d(z)
        ex = np.exp(1j * np.outer(pts[:, 1], self._xs))
        ep = np.exp(-1j * np.outer(pts[:, 0], self._ps))
        out = ((ex @ self._vals) * ep).sum(axis=1) * self._area
        return out[0] if single else out


def symplectic_fourier(w, boundary_tol=1e-10):
    """Build the symplectic Fourier evaluator for a Wigner grid."""
    return SymplecticFourier(w, boundary_tol)


def kernel_from_wigner(w):
    """Reconstruct the operator kernel from a Wigner grid.

    K(x, x') = int W((x+x')/2, p) exp(i p (x-x') / hbar) dp.  Midpoints that
    fall between grid rows are filled by a cubic spline along x; on grids
    whose momentum axis is DFT-conjugate to the position axis the transform
    inverts the pure-state construction exactly on even index sums.
    """
    xs, ps = w.x_axis.points, w.p_axis.points
    n = w.x_axis.count
    d, dp = w.x_axis.spacing, w.p_axis.spacing
    spline = CubicSpline(xs, w.values, axis=0)
    half = xs[0] + np.arange(2 * n - 1) * (d / 2)
    w_half = spline(half)
    seps = np.arange(-(n - 1), n) * d
    phases = np.exp(1j * np.outer(ps, seps) / w.hbar) * dp
    b = w_half @ phases
    jj, ll = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    k = b[jj + ll, jj - ll + n - 1]
    k = 0.5 * (k + k.conj().T)
    return KernelMatrix(w.x_axis, k, w.hbar)


def operator_spectrum_oracle(w):
    """Ground-truth spectrum test: eigenvalues of the reconstructed kernel.

    Returns the eigenvalues of K * dx in descending order.  Their sum equals
    the grid trace; the grid corresponds to a positive operator exactly when
    the smallest eigenvalue is non-negative up to discretization noise.
    """
    kernel = kernel_from_wigner(w)
    eigs = np.linalg.eigvalsh(kernel.values * kernel.axis.spacing)
    return eigs[::-1].copy()


def save_wigner_manifest(w, path, csv_path=None):
    """Write a Wigner grid as a JSON manifest, values inline or in a CSV file.

    The CSV is row-major with one row per x index.
    """
    path = Path(path)
    manifest = {
        "x_axis": w.x_axis.to_dict(),
        "p_axis": w.p_axis.to_dict(),
        "hbar": w.hbar,
    }
    if csv_path is None:
        manifest["values"] = w.values.tolist()
    else:
        csv_path = Path(csv_path)
        np.savetxt(csv_path, w.values, delimiter=",", fmt="%.17g")
        manifest["values_path"] = str(csv_path.name if csv_path.parent == path.parent else csv_path)
    with open(path, "w") as fh:
        json.dump(manifest, fh)
        fh.write("\n")


def load_wigner_manifest(path):
    """Load a Wigner grid from a JSON manifest written by `save_wigner_manifest`."""
    path = Path(path)
    with open(path) as fh:
        manifest = json.load(fh)
    x_axis = AxisGrid.from_dict(manifest["x_axis"])
    p_axis = AxisGrid.from_dict(manifest["p_axis"])
    hbar = float(manifest.get("hbar", 1.0))
    if "values" in manifest:
        values = np.asarray(manifest["values"], dtype=float)
    elif "values_path" in manifest:
        vp = Path(manifest["values_path"])
        if not vp.is_absolute():
            vp = path.parent / vp
        values = np.loadtxt(vp, delimiter=",", ndmin=2)
    else:
        raise ValueError("manifest needs 'values' or 'values_path'")
    return WignerGrid(x_axis, p_axis, values, hbar)
