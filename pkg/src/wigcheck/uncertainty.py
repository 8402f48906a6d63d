"""Covariance extraction and the equivalent uncertainty criteria.

Three formulations of the uncertainty principle are implemented and
cross-validated: the per-pair moment inequalities, positive
semi-definiteness of the Hermitian matrix Sigma + (i*hbar/2) J, and the
bound nu_min >= hbar/2 on the smallest symplectic eigenvalue of Sigma.
The moment inequalities are necessary; the other two are equivalent to
each other and canonically invariant.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .symplectic import symplectic_form, symplectic_spectrum

__all__ = [
    "CovarianceMatrix",
    "covariance_from_grid",
    "RSInequality",
    "check_rs",
    "check_quantum_psd",
    "check_williamson_criterion",
    "rescale_covariance",
    "lambda_star",
    "UncertaintyReport",
    "uncertainty_report",
    "hbar_sweep",
]

BOUNDARY_BAND = 1e-10


@dataclass
class CovarianceMatrix:
    """Second moments of a phase-space distribution."""

    sigma: np.ndarray
    mean: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        self.sigma = np.asarray(self.sigma, dtype=float)
        self.mean = np.asarray(self.mean, dtype=float)
        if np.abs(self.sigma - self.sigma.T).max() > 1e-12 * max(1.0, np.abs(self.sigma).max()):
            raise ValueError("covariance matrix must be symmetric")


def covariance_from_grid(w, tail_tol=1e-6):
    """First and second phase-space moments of a Wigner grid.

    sigma_ab = int z_a z_b W dz - mean_a mean_b.  Warns when the boundary
    band contributes more than `tail_tol` of the second moment (heavy tail).
    """
    X, P = w.meshgrid()
    area = w.cell_area
    mx = float((X * w.values).sum() * area)
    mp = float((P * w.values).sum() * area)
    sxx = float((X * X * w.values).sum() * area) - mx * mx
    spp = float((P * P * w.values).sum() * area) - mp * mp
    sxp = float((X * P * w.values).sum() * area) - mx * mp

    band = np.zeros_like(w.values, dtype=bool)
    band[:2, :] = band[-2:, :] = True
    band[:, :2] = band[:, -2:] = True
    weight = (X * X + P * P) * np.abs(w.values)
    total = weight.sum()
    if total > 0 and weight[band].sum() > tail_tol * total:
        warnings.warn("second moments may not have converged (heavy tail at the grid boundary)")
    return CovarianceMatrix(np.array([[sxx, sxp], [sxp, spp]]), np.array([mx, mp]), w.hbar)


@dataclass
class RSInequality:
    """One moment inequality: lhs >= rhs with margin = lhs - rhs."""

    j: int
    k: int
    kind: str
    lhs: float
    rhs: float
    ok: bool

    @property
    def margin(self):
        return self.lhs - self.rhs

    def to_dict(self):
        return {"j": self.j, "k": self.k, "kind": self.kind, "lhs": self.lhs,
                "rhs": self.rhs, "margin": self.margin, "ok": self.ok}


def check_rs(sigma, hbar=1.0):
    """Per-pair moment inequalities for a 2N x 2N covariance matrix.

    Conjugate pairs require Var(x_j) Var(p_j) >= cov(x_j, p_j)^2 + hbar^2/4;
    cross pairs (j != k) require Var(x_j) Var(p_k) >= cov(x_j, p_k)^2.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    scale = max(1.0, np.abs(sigma).max()) ** 2
    out = []
    for j in range(n):
        for k in range(n):
            lhs = sigma[j, j] * sigma[n + k, n + k]
            cross = sigma[j, n + k] ** 2
            rhs = cross + hbar**2 / 4 if j == k else cross
            kind = "conjugate" if j == k else "cross"
            ok = lhs >= rhs - BOUNDARY_BAND * scale
            out.append(RSInequality(j, k, kind, float(lhs), float(rhs), bool(ok)))
    return out


def check_quantum_psd(sigma, hbar=1.0):
    """PSD test of Sigma + (i*hbar/2) J; returns (pass, smallest eigenvalue)."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    h = sigma + 0.5j * hbar * symplectic_form(n)
    min_eig = float(np.linalg.eigvalsh(h).min())
    norm = np.abs(np.linalg.eigvalsh(sigma)).max()
    return min_eig >= -BOUNDARY_BAND * norm, min_eig


def check_williamson_criterion(sigma, hbar=1.0):
    """Smallest symplectic eigenvalue test; returns (nu_min >= hbar/2, nu_min)."""
    sigma = np.asarray(sigma, dtype=float)
    nu = symplectic_spectrum(sigma)
    norm = np.abs(np.linalg.eigvalsh(sigma)).max()
    nu_min = float(nu[-1])
    return nu_min >= hbar / 2 - BOUNDARY_BAND * norm, nu_min


def rescale_covariance(sigma, lam):
    """Covariance of the lam-rescaled state: Sigma / lam^2."""
    if lam <= 0:
        raise ValueError("rescale parameter must be positive")
    return np.asarray(sigma, dtype=float) / lam**2


def lambda_star(sigma, hbar=1.0):
    """Largest rescaling parameter that keeps the covariance admissible.

    Equals sqrt(2 * nu_min / hbar); a value below 1 means the covariance
    already violates the uncertainty principle.
    """
    nu = symplectic_spectrum(np.asarray(sigma, dtype=float))
    return float(np.sqrt(2.0 * nu[-1] / hbar))


@dataclass
class UncertaintyReport:
    """Aggregate of the three criteria for one covariance matrix and hbar."""

    hbar: float
    rs: list
    rs_ok: bool
    psd_min_eigenvalue: float
    psd_ok: bool
    nu_min: float
    nu_max: float
    lambda_star: float
    verdict: bool
    boundary: bool

    def to_dict(self):
        return {
            "hbar": self.hbar,
            "rs": [r.to_dict() for r in self.rs],
            "rs_ok": self.rs_ok,
            "psd_min_eigenvalue": self.psd_min_eigenvalue,
            "psd_ok": self.psd_ok,
            "nu_min": self.nu_min,
            "nu_max": self.nu_max,
            "lambda_star": self.lambda_star,
            "verdict": "pass" if self.verdict else "fail",
            "boundary": self.boundary,
        }


def uncertainty_report(sigma, hbar=1.0):
    """Run all uncertainty criteria on one covariance matrix."""
    sigma = np.asarray(sigma, dtype=float)
    rs = check_rs(sigma, hbar)
    psd_ok, min_eig = check_quantum_psd(sigma, hbar)
    nu = symplectic_spectrum(sigma)
    norm = np.abs(np.linalg.eigvalsh(sigma)).max()
    boundary = abs(min_eig) <= BOUNDARY_BAND * norm
    return UncertaintyReport(
        hbar=hbar,
        rs=rs,
        rs_ok=all(r.ok for r in rs),
        psd_min_eigenvalue=min_eig,
        psd_ok=psd_ok,
        nu_min=float(nu[-1]),
        nu_max=float(nu[0]),
        lambda_star=float(np.sqrt(2.0 * nu[-1] / hbar)),
        verdict=psd_ok,
        boundary=boundary,
    )


def hbar_sweep(w, hbar_values):
    """Check the same grid covariance against several values of hbar.

    The moments do not depend on hbar, so the pass set is a down-set: once a
    value fails, every larger value fails as well.
    """
    cov = covariance_from_grid(w)
    return [uncertainty_report(cov.sigma, h) for h in hbar_values]
