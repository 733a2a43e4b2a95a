"""Exact Fourier analysis of Boolean functions and non-adaptive parity decision trees."""

from .affine import (AffineSubspace, Bucket, CosetDecomposition, decompose, eval_bucket,
                     leaf_spectrum, materialize, nonzero_fraction)
from .constant_subspace import (ConstantSubspaceResult, Strategy, exact_min_codim,
                                greedy_constant_subspace, validate_constant)
from .gf2 import Gf2Basis, coset_partition, extend_to_full_basis, in_span, rank, row_reduce, solve_affine_point
from .pdt import (NadtCertificate, ProcedureTrace, Selector, assert_lemmas, brute_force_min_nadt,
                  build_optimal_nadt, depth_bound_report, run_procedure, verify_certificate)
from .spectrum import (BooleanFunction, Spectrum, check_norm_sparsity, dimension, evaluate,
                       evaluate_character, inverse_wht, sparsity, spectral_norm, support, wht)

__all__ = [
    "AffineSubspace", "Bucket", "CosetDecomposition", "decompose", "eval_bucket", "leaf_spectrum",
    "materialize", "nonzero_fraction", "ConstantSubspaceResult", "Strategy", "exact_min_codim",
    "greedy_constant_subspace", "validate_constant", "Gf2Basis", "coset_partition",
    "extend_to_full_basis", "in_span", "rank", "row_reduce", "solve_affine_point",
    "NadtCertificate", "ProcedureTrace", "Selector", "assert_lemmas", "brute_force_min_nadt",
    "build_optimal_nadt", "depth_bound_report", "run_procedure", "verify_certificate",
    "BooleanFunction", "Spectrum", "check_norm_sparsity", "dimension", "evaluate",
    "evaluate_character", "inverse_wht", "sparsity", "spectral_norm", "support", "wht",
]
