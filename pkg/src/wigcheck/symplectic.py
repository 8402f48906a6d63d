"""Symplectic linear algebra on 2N-dimensional phase space.

Phase-space vectors are ordered z = (x_1, ..., x_N, p_1, ..., p_N) and the
standard form is

    J = [[0, I], [-I, 0]]

so that the symplectic product is sigma(z, z') = z'^T J z = p.x' - p'.x.
A real 2N x 2N matrix S is symplectic when S^T J S = J.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, schur

__all__ = [
    "symplectic_form",
    "symplectic_product",
    "is_symplectic",
    "symplectic_spectrum",
    "WilliamsonFactorization",
    "williamson",
    "random_symplectic",
]

PD_TOL = 1e-12


def symplectic_form(ndof):
    """Standard form J for `ndof` degrees of freedom."""
    eye = np.eye(ndof)
    zero = np.zeros((ndof, ndof))
    return np.block([[zero, eye], [-eye, zero]])


def _check_phase_space_dim(dim):
    if dim < 2 or dim % 2 != 0:
        raise ValueError(f"phase-space dimension must be even and >= 2, got {dim}")
    return dim // 2


def symplectic_product(z1, z2):
    """Symplectic product sigma(z1, z2) = z2^T J z1 = p1.x2 - p2.x1.

    Antisymmetric and bilinear; both arguments must be vectors of the same
    even length 2N.
    """
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if z1.shape != z2.shape or z1.ndim != 1:
        raise ValueError("arguments must be 1-d vectors of equal length")
    n = _check_phase_space_dim(z1.size)
    x1, p1 = z1[:n], z1[n:]
    x2, p2 = z2[:n], z2[n:]
    return float(p1 @ x2 - p2 @ x1)


def is_symplectic(S, tol=1e-10):
    """True when ||S^T J S - J||_inf <= tol."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("matrix must be square")
    n = _check_phase_space_dim(S.shape[0])
    J = symplectic_form(n)
    return bool(np.abs(S.T @ J @ S - J).max() <= tol)


def _check_spd(M):
    """Validate a symmetric positive-definite matrix; return (M, ndof)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    n = _check_phase_space_dim(M.shape[0])
    if np.abs(M - M.T).max() > 1e-10 * max(1.0, np.abs(M).max()):
        raise ValueError("matrix is not symmetric")
    w = np.linalg.eigvalsh(0.5 * (M + M.T))
    if w.min() <= PD_TOL * np.abs(w).max():
        raise ValueError("matrix is not positive definite")
    return 0.5 * (M + M.T), n


def _sqrtm_spd(M):
    w, V = np.linalg.eigh(M)
    return (V * np.sqrt(w)) @ V.T


def symplectic_spectrum(M):
    """Symplectic spectrum of a symmetric positive-definite matrix.

    The eigenvalues of J M come in pairs +/- i mu_j with mu_j > 0; the
    returned array holds the N values mu_j sorted in descending order.
    """
    M, n = _check_spd(M)
    root = _sqrtm_spd(M)
    K = root @ symplectic_form(n) @ root  # skew-symmetric, eigenvalues +/- i mu_j
    ev = np.linalg.eigvalsh(1j * K)       # Hermitian, eigenvalues +/- mu_j
    return np.sort(ev[ev > 0])[::-1].copy()


@dataclass
class WilliamsonFactorization:
    """Factorization M = S^T D S with S symplectic, D = diag(spectrum, spectrum)."""

    S: np.ndarray
    spectrum: np.ndarray
    residual: float = 0.0
    symplectic_residual: float = 0.0

    @property
    def D(self):
        return np.diag(np.concatenate([self.spectrum, self.spectrum]))

    def reconstruct(self):
        return self.S.T @ self.D @ self.S


def williamson(M):
    """Williamson normal form of a symmetric positive-definite matrix.

    Computes M^(1/2), block-diagonalizes the skew-symmetric matrix
    K = M^(1/2) J M^(1/2) with a real Schur decomposition, and assembles a
    symplectic S with M = S^T D S.  The relative reconstruction residual
    and the symplecticity residual of S are recorded on the result.
    """
    M, n = _check_spd(M)
    root = _sqrtm_spd(M)
    J = symplectic_form(n)
    K = root @ J @ root
    K = 0.5 * (K - K.T)
    T, Z = schur(K, output="real")

    pairs = []
    for i in range(n):
        a, b = 2 * i, 2 * i + 1
        mu = T[a, b]
        u, v = Z[:, a].copy(), Z[:, b].copy()
        if abs(T[a, a]) > 1e-8 * abs(mu):
            raise ValueError("Schur block structure not found; decomposition failed")
        if mu < 0:
            mu, u, v = -mu, v, u
        pairs.append((mu, u, v))
    pairs.sort(key=lambda t: -t[0])

    spectrum = np.array([p[0] for p in pairs])
    Q = np.column_stack([p[1] for p in pairs] + [p[2] for p in pairs])
    scale = np.concatenate([spectrum, spectrum])
    S = (Q.T / np.sqrt(scale)[:, None]) @ root

    recon = S.T @ np.diag(scale) @ S
    residual = np.abs(recon - M).max() / np.abs(M).max()
    sym_res = np.abs(S.T @ J @ S - J).max()
    if residual > 1e-6:
        raise ValueError(f"Williamson decomposition failed to converge (residual {residual:.3e})")
    return WilliamsonFactorization(S=S, spectrum=spectrum, residual=float(residual),
                                   symplectic_residual=float(sym_res))


def random_symplectic(seed, ndof):
    """Deterministic pseudo-random symplectic matrix.

    Composes two exponentials exp(J H) of random symmetric generators H,
    which stays inside the symplectic group.
    """
    if ndof < 1:
        raise ValueError("ndof must be >= 1")
    rng = np.random.default_rng(seed)
    dim = 2 * ndof
    J = symplectic_form(ndof)
    S = np.eye(dim)
    for _ in range(2):
        H = rng.normal(size=(dim, dim))
        H = 0.25 * (H + H.T) / np.sqrt(dim)
        S = S @ expm(J @ H)
    return S
