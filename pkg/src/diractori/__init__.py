"""Dirac tori: constant mean curvature half-density tori from plane spinors."""
from __future__ import annotations

from .classify import Verdict, VerdictKind, classify, classify_rectangular
from .closing import REFERENCE_COEFFS, closing_residuals, construct_coefficients
from .kernels import BACKEND
from .lattice import LatticeBasis, SpinStructure, dual_basis
from .quatalg import Quaternion
from .spectral import spectral_set, spectrum_search
from .spinor import SpinorField, SurfaceImmersion, synthesize
from .surface import export_mesh, verify, willmore_energy

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "LatticeBasis", "REFERENCE_COEFFS", "Quaternion", "SpinStructure", "SpinorField",
    "SurfaceImmersion", "Verdict", "VerdictKind", "classify", "classify_rectangular",
    "closing_residuals", "construct_coefficients", "dual_basis", "export_mesh", "spectral_set",
    "spectrum_search", "synthesize", "verify", "willmore_energy",
]
