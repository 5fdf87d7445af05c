# focklib - Composition operators on the Segal-Bargmann space

from .errors import *
from .numerics import (
    Tolerances, DEFAULT_TOLERANCES, LeastSquares, as_matrix, as_vector,
    hermitian_eig, svd, spectral_norm, min_norm_solve
)
from .affine import (
    AffineMap, NormCertificate, StructureReport, Membership, apply_map, compose_maps,
    defect_sqrt, defect_kernel, range_membership, minimal_norm_vector,
    composition_norm, cms_condition_check, classify_structure, kernel_norm_ratio,
    noncompact_witness, compact_factorization, linear_functional_image_norm,
    adjoint_products
)
from .kernel import (
    SamplePlan, QuadraticKernelSpec, PsdResult, QuadraticInfimum, ClosureReport,
    bargmann_kernel, phi_gram, psd_certify, norm_lower_bound, random_plan,
    structured_plan, quadratic_kernel_gram, quadratic_form_infimum, descent_minimum,
    schur_closure_check
)
from .fock import (
    TruncatedBasis, PolyCoeffs, enumerate_basis, degree_slice, poly_inner, poly_norm,
    compose_poly, matrix_of_composition, truncated_norm, homogeneous_block_norm,
    evaluate_poly, kernel_coeffs, reproducing_check, adjoint_kernel_residual,
    gaussian_decay, decay_radius
)
from .diagonal import (
    DiagonalModel, SeriesResult, DiagNorm, GapRow, series_terms, series_criterion,
    diag_norm, counterexample_gap, gap_table, truncate, cms_vacuous
)
from .toolkit import Toolkit, Outcome, command
from .report import ReportWriter
from . import problem


__version__ = "1.0.0"
