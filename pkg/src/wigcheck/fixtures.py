"""Reference constructions with known verdicts.

The quartic-transform family defined below satisfies every second-moment
uncertainty criterion once alpha*beta >= hbar^2/4, yet is never the Wigner
distribution of a state: its fourth momentum moment equals -24*beta^2 < 0,
which no positive operator can produce.  A hard-truncated phase-space bump
provides the compact-support regime.
"""

import warnings

import numpy as np

from .states import AxisGrid, WignerGrid

__all__ = [
    "narcowich_oconnell_grid",
    "no_default_axis",
    "moment_p4",
    "p4_series_reference",
    "truncated_bump_grid",
]


def no_default_axis(count=768, extent=28.0):
    """Square axis wide enough for the quartic-transform tails at alpha ~ 0.5.

    The second moments sit exactly on the uncertainty boundary for
    alpha*beta = hbar^2/4, so the tails must be resolved to ~1e-12 for the
    boundary verdicts to come out right; extent 28 achieves that."""
    if count % 2 != 0:
        raise ValueError("count must be even")
    d = 2.0 * extent / count
    return AxisGrid(-(count // 2) * d, (count // 2 - 1) * d, count)


def _inverse_transform_1d(profile, source, targets):
    """(1/2pi) int exp(-i t s) profile(s) ds by direct quadrature."""
    ds = source[1] - source[0]
    kernel = np.exp(-1j * np.outer(targets, source))
    return (kernel @ profile) * ds / (2 * np.pi)


def narcowich_oconnell_grid(alpha=0.5, beta=0.5, x_axis=None, p_axis=None,
                            hbar=1.0, source_count=4096, boundary_tol=1e-6):
    """Phase-space function whose 2-d Fourier transform (kernel exp(i(xx'+pp')))
    equals (1 - alpha x^2/2 - beta p^2/2) exp(-(alpha^2 x^4 + beta^2 p^4)).

    The inverse transform with normalization (2 pi)^-2 gives a real grid of
    unit trace whose covariance matrix is exactly diag(alpha, beta).  Raises
    when the grid cannot resolve the tails.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if x_axis is None:
        x_axis = no_default_axis()
    if p_axis is None:
        p_axis = x_axis

    # source range where exp(-a^2 s^4) has decayed below 1e-20
    ext = 1.35 * (np.log(1e20) / min(alpha, beta) ** 2) ** 0.25
    source = np.linspace(-ext, ext, source_count)
    ax = np.exp(-alpha**2 * source**4)
    bp = np.exp(-beta**2 * source**4)

    fa = _inverse_transform_1d(ax, source, x_axis.points)
    fa2 = _inverse_transform_1d(source**2 * ax, source, x_axis.points)
    fb = _inverse_transform_1d(bp, source, p_axis.points)
    fb2 = _inverse_transform_1d(source**2 * bp, source, p_axis.points)

    vals = (np.outer(fa, fb) - 0.5 * alpha * np.outer(fa2, fb)
            - 0.5 * beta * np.outer(fa, fb2))
    imag_residual = float(np.abs(vals.imag).max())
    vals = vals.real

    peak = np.abs(vals).max()
    edge = max(np.abs(vals[[0, -1], :]).max(), np.abs(vals[:, [0, -1]]).max())
    if edge > boundary_tol * peak:
        raise ValueError(
            f"grid does not resolve the transform tails (boundary ratio {edge / peak:.2e}); "
            "widen the axes")
    return WignerGrid(x_axis, p_axis, vals, hbar, imag_residual)


def moment_p4(w, tail_tol=1e-6):
    """Fourth momentum moment int p^4 W dx dp by Riemann sum.

    Warns when the boundary band carries more than `tail_tol` of the
    integrand mass (the moment has not converged on this grid).
    """
    X, P = w.meshgrid()
    integrand = P**4 * w.values
    total = float(integrand.sum() * w.cell_area)
    band = np.zeros_like(w.values, dtype=bool)
    band[:2, :] = band[-2:, :] = True
    band[:, :2] = band[:, -2:] = True
    weight = np.abs(integrand)
    if weight.sum() > 0 and weight[band].sum() > tail_tol * weight.sum():
        warnings.warn("fourth moment may not have converged (heavy tail at the boundary)")
    return total


def p4_series_reference(alpha, beta):
    """Fourth momentum moment from the Taylor coefficient of the transform.

    The moment equals the fourth derivative at p = 0 of the momentum profile
    (1 - beta p^2/2) exp(-beta^2 p^4), i.e. 24 times its p^4 series
    coefficient.  Computed by truncated polynomial arithmetic; the result is
    -24*beta^2 and is independent of alpha.
    """
    deg = 4
    # series of exp(-beta^2 p^4) up to p^deg
    exp_series = np.zeros(deg + 1)
    term = 1.0
    for k in range(deg // 4 + 1):
        exp_series[4 * k] = term
        term *= -beta**2 / (k + 1)
    prefactor = np.zeros(deg + 1)
    prefactor[0] = 1.0
    prefactor[2] = -0.5 * beta
    product = np.polynomial.polynomial.polymul(prefactor, exp_series)[: deg + 1]
    return float(24.0 * product[4])


def truncated_bump_grid(x_axis, p_axis, hbar=1.0, radius=1.0, profile="cosine"):
    """Unit-trace bump supported on the disk |z| <= radius, zero outside.

    Such hard-truncated grids can never be Wigner distributions; they are
    used to exercise the compact-support detector and the domination fit.
    `profile` is "cosine" (smooth cos^2 cap) or "indicator" (flat top).
    """
    X, P = np.meshgrid(x_axis.points, p_axis.points, indexing="ij")
    r = np.sqrt(X**2 + P**2)
    inside = r < radius
    vals = np.zeros_like(r)
    if profile == "cosine":
        vals[inside] = np.cos(0.5 * np.pi * r[inside] / radius) ** 2
    elif profile == "indicator":
        vals[inside] = 1.0
    else:
        raise ValueError(f"unknown profile: {profile}")
    area = x_axis.spacing * p_axis.spacing
    total = vals.sum() * area
    if total <= 0:
        raise ValueError("bump radius too small for the grid resolution")
    return WignerGrid(x_axis, p_axis, vals / total, hbar)
