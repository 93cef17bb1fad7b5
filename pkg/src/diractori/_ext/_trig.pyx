# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trigonometric-sum kernel (see diractori.kernels for the contract)."""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport cos, sin

cnp.import_array()


def trig_sum(const double complex[::1] nu, const double complex[:, ::1] coeffs,
             const double complex[::1] z, const cnp.int64_t[:, ::1] derivs):
    cdef Py_ssize_t K = nu.shape[0]
    cdef Py_ssize_t C = coeffs.shape[1]
    cdef Py_ssize_t N = z.shape[0]
    cdef Py_ssize_t D = derivs.shape[0]
    out_arr = np.zeros((D, N, C), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_arr
    # weights[d, k, c] = coeffs[k, c] * (i nu_x)^ax * (i nu_y)^ay
    w_arr = np.empty((D, K, C), dtype=np.complex128)
    cdef double complex[:, :, ::1] w = w_arr
    cdef Py_ssize_t d, k, c, n, e
    cdef double complex fx, fy, f
    for d in range(D):
        for k in range(K):
            fx = 1j * nu[k].real
            fy = 1j * nu[k].imag
            f = 1.0
            for e in range(derivs[d, 0]):
                f = f * fx
            for e in range(derivs[d, 1]):
                f = f * fy
            for c in range(C):
                w[d, k, c] = coeffs[k, c] * f
    cdef double x, y, ph
    cdef double complex ex
    # points are independent, so the sum per point keeps a fixed order
    for n in prange(N, nogil=True, schedule="static"):
        x = z[n].real
        y = z[n].imag
        for k in range(K):
            ph = nu[k].real * x + nu[k].imag * y
            ex = cos(ph) + 1j * sin(ph)
            for d in range(D):
                for c in range(C):
                    out[d, n, c] = out[d, n, c] + w[d, k, c] * ex
    return out_arr
