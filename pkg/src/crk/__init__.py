"""Exact tools for constant-rank affine spaces of antisymmetric matrices."""

from .constructions import max_dim_antisym, witness_subspace
from .matrix_core import MatrixQ, det, pfaffian, rank, skew_normal_form, symmetric_signature
from .subspace import AffineMatrixSubspace, CertificationReport, certify_constant_rank

__all__ = [
    "AffineMatrixSubspace",
    "CertificationReport",
    "MatrixQ",
    "certify_constant_rank",
    "det",
    "max_dim_antisym",
    "pfaffian",
    "rank",
    "skew_normal_form",
    "symmetric_signature",
    "witness_subspace",
]
