"""numpy implementation of the trigonometric-sum kernel."""
from __future__ import annotations

import numpy as np

_CHUNK = 4096


def trig_sum(nu: np.ndarray, coeffs: np.ndarray, z: np.ndarray, derivs: np.ndarray) -> np.ndarray:
    nx, ny = nu.real, nu.imag
    weights = np.stack([coeffs * ((1j * nx) ** ax * (1j * ny) ** ay)[:, None]
                        for ax, ay in derivs])
    out = np.empty((len(derivs), len(z), coeffs.shape[1]), dtype=np.complex128)
    for start in range(0, len(z), _CHUNK):
        zz = z[start:start + _CHUNK]
        ex = np.exp(1j * (zz.real[:, None] * nx[None, :] + zz.imag[:, None] * ny[None, :]))
        out[:, start:start + _CHUNK, :] = np.einsum("nk,dkc->dnc", ex, weights)
    return out
