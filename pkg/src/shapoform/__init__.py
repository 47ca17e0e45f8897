"""Exact inverse Shapovalov forms and singular vectors for quantum groups of small rank."""
from .scalars import AffineExponent, PoleError, ScalarRational, phi, q_int, specialize
from .rootsys import RootSystem, build_root_system, eta, kostant_partition
from .uqmodules import (
    TruncationError,
    WeightModule,
    dual_verma_truncated,
    finite_dim_module,
    tensor_module,
    verma_truncated,
)
from .shapovalov import antipode_on_word, inverse_blocks, pairing, pairing_block
from .rmatrix import GradedTensorOperator, f_tensor, quasi_r
from .routesum import FHatMatrix, RouteDiagram, a_coeff, fhat_matrix, hasse
from .abrr import abrr_identity_check, fk_series
from .singular import denominator_audit, singular_vector, verify_inverse

__all__ = [
    "AffineExponent", "PoleError", "ScalarRational", "phi", "q_int", "specialize",
    "RootSystem", "build_root_system", "eta", "kostant_partition",
    "TruncationError", "WeightModule", "dual_verma_truncated", "finite_dim_module", "tensor_module",
    "verma_truncated", "antipode_on_word", "inverse_blocks", "pairing", "pairing_block",
    "GradedTensorOperator", "f_tensor", "quasi_r", "FHatMatrix", "RouteDiagram", "a_coeff",
    "fhat_matrix", "hasse", "abrr_identity_check", "fk_series", "denominator_audit",
    "singular_vector", "verify_inverse",
]
