"""Finite-order positivity conditions on the symplectic Fourier transform.

For a candidate state the m x m matrices

    F[j, k] = exp(i*hbar/2 * sigma(z_j, z_k)) * FsW(z_j - z_k)

must be positive semi-definite for every point set {z_1, ..., z_m} and every
order m.  A finite randomized search can only certify failure: a negative
eigenvalue at any order is a proof that the grid is not a state, while
"no violation found" proves nothing.
"""

from dataclasses import dataclass

import numpy as np

from .states import symplectic_fourier, trace
from .uncertainty import covariance_from_grid

__all__ = [
    "klm_matrix",
    "KLMWitness",
    "KLMOrderRecord",
    "KLMReport",
    "klm_check",
    "witness_quadratic_form",
]

DEFAULT_TOL = 1e-6

# Sign of the quadratic phase, pinned by calibration: the unrescaled vacuum
# passes every sampled order while rescaled Gaussians fail exactly when the
# spectrum oracle says they must.
PHASE_SIGN = +1


def klm_matrix(fsw, points, hbar=1.0):
    """Assemble the phase-weighted sample matrix for one point set.

    `fsw` is a symplectic Fourier evaluator; `points` is an (m, 2) array.
    The result is Hermitian because the transform of a real grid satisfies
    conj(FsW(z)) = FsW(-z); it is symmetrized before being returned.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m = pts.shape[0]
    diffs = pts[:, None, :] - pts[None, :, :]
    fvals = fsw(diffs.reshape(-1, 2)).reshape(m, m)
    sig = np.outer(pts[:, 1], pts[:, 0]) - np.outer(pts[:, 0], pts[:, 1])
    mat = np.exp(PHASE_SIGN * 0.5j * hbar * sig) * fvals
    return 0.5 * (mat + mat.conj().T)


@dataclass
class KLMWitness:
    """Reproducible certificate of a negative eigenvalue."""

    order: int
    points: np.ndarray
    eigenvector: np.ndarray
    min_eigenvalue: float
    trial: int
    strategy: str

    def to_dict(self):
        return {
            "order": self.order,
            "points": self.points.tolist(),
            "eigenvector_real": self.eigenvector.real.tolist(),
            "eigenvector_imag": self.eigenvector.imag.tolist(),
            "min_eigenvalue": self.min_eigenvalue,
            "trial": self.trial,
            "strategy": self.strategy,
        }


@dataclass
class KLMOrderRecord:
    order: int
    trials: int
    worst_min_eigenvalue: float

    def to_dict(self):
        return {"order": self.order, "trials": self.trials,
                "worst_min_eigenvalue": self.worst_min_eigenvalue}


@dataclass
class KLMReport:
    overall: str
    orders: list
    witness: KLMWitness | None
    seed: int
    max_order: int
    trials_per_order: int
    tol: float
    phase_sign: int = PHASE_SIGN

    def to_dict(self):
        return {
            "overall": self.overall,
            "orders": [o.to_dict() for o in self.orders],
            "witness": self.witness.to_dict() if self.witness else None,
            "seed": self.seed,
            "max_order": self.max_order,
            "trials_per_order": self.trials_per_order,
            "tol": self.tol,
            "phase_sign": self.phase_sign,
        }


def _lattice_points(order, scale):
    base = np.array([
        [0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0],
        [2.0, 0.0], [0.0, 2.0], [2.0, 1.0], [1.0, 2.0],
    ])
    return scale * base[:order]


def _sample_points(rng, order, trial, trials, chol, base_scale):
    """Alternate random Gaussian clouds with axis-aligned lattices."""
    if trial % 2 == 0:
        factor = np.exp(rng.uniform(np.log(0.5), np.log(3.0)))
        pts = rng.standard_normal((order, 2)) @ chol.T * factor
        return pts, "random"
    frac = trial / max(trials, 2)
    a = base_scale * (0.3 + 3.2 * frac)
    return _lattice_points(order, a), "lattice"


def klm_check(w, max_order=5, trials_per_order=50, seed=0, tol=DEFAULT_TOL):
    """Search for a finite-order positivity violation.

    Samples point sets of each order up to `max_order` and records the worst
    minimum eigenvalue seen.  Stops early with a reproducible witness once an
    eigenvalue falls below -tol.  A "no_violation_found" verdict is not a
    positivity proof.
    """
    if abs(trace(w) - 1.0) > 1e-3:
        raise ValueError("grid must have unit trace for the positivity search")
    fsw = symplectic_fourier(w, boundary_tol=np.inf)
    cov = covariance_from_grid(w).sigma
    eigs = np.linalg.eigvalsh(cov)
    if eigs.min() > 0:
        chol = np.linalg.cholesky(cov)
    else:
        chol = np.sqrt(w.hbar / 2) * np.eye(2)
    base_scale = float(np.sqrt(2.0 * max(np.trace(cov) / 2.0, w.hbar / 4)))

    rng = np.random.default_rng(seed)
    orders = []
    for order in range(1, max_order + 1):
        worst = np.inf
        for trial in range(trials_per_order):
            pts, strategy = _sample_points(rng, order, trial, trials_per_order, chol, base_scale)
            mat = klm_matrix(fsw, pts, w.hbar)
            vals, vecs = np.linalg.eigh(mat)
            worst = min(worst, float(vals[0]))
            if vals[0] < -tol:
                witness = KLMWitness(order, pts, vecs[:, 0], float(vals[0]), trial, strategy)
                orders.append(KLMOrderRecord(order, trial + 1, worst))
                return KLMReport("violation_certificate", orders, witness, seed,
                                 max_order, trials_per_order, tol)
        orders.append(KLMOrderRecord(order, trials_per_order, worst))
    return KLMReport("no_violation_found", orders, None, seed, max_order,
                     trials_per_order, tol)


def witness_quadratic_form(w, witness):
    """Re-evaluate a witness: v^H F v for the stored points and eigenvector."""
    fsw = symplectic_fourier(w, boundary_tol=np.inf)
    mat = klm_matrix(fsw, witness.points, w.hbar)
    v = witness.eigenvector
    return float(np.real(v.conj() @ mat @ v))
