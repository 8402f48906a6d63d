"""wigcheck: decide whether a phase-space function can be a Wigner distribution.

The package provides uncertainty-principle checks on covariance matrices,
finite-order positivity conditions on the symplectic Fourier transform,
Gaussian domination fits with a necessity verdict, symplectic capacity of
phase-space ellipsoids, and a brute-force operator-spectrum oracle that
serves as ground truth for all of them.
"""

__version__ = "0.1.0"

from .blobs import Blob, capacity, find_contained_blob, is_admissible, quantum_blob, section_area
from .domination import (DominationCertificate, HardyFit, compact_support_flag,
                         fit_dominating_gaussian, hardy_fit, domination_verdict)
from .fixtures import (moment_p4, narcowich_oconnell_grid, no_default_axis,
                       p4_series_reference, truncated_bump_grid)
from .klm import KLMReport, KLMWitness, klm_check, klm_matrix, witness_quadratic_form
from .states import (AxisGrid, KernelMatrix, PhaseSpaceContext, WaveFunctionGrid,
                     WignerGrid, default_axis, fock_state, fourier_momentum_axis,
                     fourier_wavefunction, gaussian_wavepacket, kernel_from_wigner,
                     load_wigner_manifest, mixture_wigner, operator_spectrum_oracle,
                     rescale, save_wigner_manifest, symplectic_fourier, trace,
                     wigner_gaussian, wigner_momentum_axis, wigner_of_pure)
from .symplectic import (WilliamsonFactorization, is_symplectic, random_symplectic,
                         symplectic_form, symplectic_product, symplectic_spectrum,
                         williamson)
from .uncertainty import (CovarianceMatrix, RSInequality, UncertaintyReport,
                          check_quantum_psd, check_rs, check_williamson_criterion,
                          covariance_from_grid, hbar_sweep, lambda_star,
                          rescale_covariance, uncertainty_report)
