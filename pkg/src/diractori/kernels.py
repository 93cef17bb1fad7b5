"""Evaluation of finite trigonometric sums on the plane.

``trig_sum(nu, coeffs, z, derivs)`` returns ``out[d, n, c]``, the
``derivs[d]``-th partial derivative (orders along x and y) of

    sum_k coeffs[k, c] exp(i <nu_k, z_n>),   <nu, z> = Re(conj(nu) z).

The compiled extension is used when it was built; otherwise the numpy
version is selected at import.  Setting ``DIRACTORI_BACKEND=numpy`` forces
the fallback.  ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

import numpy as np

from . import _fallback

try:
    from ._ext import _trig as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
if os.environ.get("DIRACTORI_BACKEND") == "numpy":
    BACKEND = "numpy"

VALUE = (0, 0)
DX, DY = (1, 0), (0, 1)
DXX, DXY, DYY = (2, 0), (1, 1), (0, 2)


def available_backends() -> list[str]:
    return ["numpy"] + (["cython"] if _compiled is not None else [])


def trig_sum(nu, coeffs, z, derivs=(VALUE,), backend: str | None = None) -> np.ndarray:
    nu = np.ascontiguousarray(nu, dtype=np.complex128).ravel()
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if coeffs.ndim == 1:
        coeffs = coeffs[:, None]
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128).ravel()
    d = np.ascontiguousarray(derivs, dtype=np.int64).reshape(-1, 2)
    if coeffs.shape[0] != nu.shape[0]:
        raise ValueError("coeffs must have one row per frequency")
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return _compiled.trig_sum(nu, coeffs, z, d)
    if backend == "numpy":
        return _fallback.trig_sum(nu, coeffs, z, d)
    raise ValueError(f"unknown backend {backend!r}")
