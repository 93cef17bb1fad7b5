import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diractori import kernels
from diractori.kernels import DX, DXX, DXY, DY, DYY, VALUE, available_backends, trig_sum

ORDERS = (VALUE, DX, DY, DXX, DXY, DYY)


def direct(nu, coeffs, z, order):
    # sum_k c_k (i Re nu_k)^a (i Im nu_k)^b exp(i Re(conj(nu_k) z))
    a, b = order
    ph = np.exp(1j * (np.conj(nu)[None, :] * z[:, None]).real)
    w = (1j * nu.real) ** a * (1j * nu.imag) ** b
    return (ph * w[None, :]) @ coeffs


@pytest.mark.parametrize("backend", available_backends())
@settings(max_examples=20, deadline=None)
@given(st.integers(1, 7), st.integers(1, 3), st.integers(1, 30), st.integers(0, 2 ** 20))
def test_against_direct_sum(backend, k, c, n, seed):
    rng = np.random.default_rng(seed)
    nu = rng.normal(size=k) * 3 + 1j * rng.normal(size=k) * 3
    coeffs = rng.normal(size=(k, c)) + 1j * rng.normal(size=(k, c))
    z = rng.normal(size=n) * 5 + 1j * rng.normal(size=n) * 5
    out = trig_sum(nu, coeffs, z, ORDERS, backend=backend)
    assert out.shape == (len(ORDERS), n, c)
    for d, order in enumerate(ORDERS):
        ref = direct(nu, coeffs, z, order)
        np.testing.assert_allclose(out[d], ref, rtol=1e-11, atol=1e-11 * np.abs(ref).max())


def test_backends_agree():
    if len(available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(3)
    nu = rng.normal(size=20) + 1j * rng.normal(size=20)
    coeffs = rng.normal(size=(20, 4)) + 0j
    z = rng.normal(size=5000) + 1j * rng.normal(size=5000)
    a = trig_sum(nu, coeffs, z, ORDERS, backend="numpy")
    b = trig_sum(nu, coeffs, z, ORDERS, backend="cython")
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


def test_backend_selected():
    assert kernels.BACKEND in available_backends()


def test_bad_inputs():
    with pytest.raises(ValueError):
        trig_sum([1, 2], [[1]], [0])
    with pytest.raises(ValueError):
        trig_sum([1], [1], [0], backend="fortran")


def test_one_dimensional_coeffs():
    out = trig_sum([1 + 0j], [2.0], [0j, np.pi])
    np.testing.assert_allclose(out[0, :, 0], [2, -2], atol=1e-15)


def test_env_forces_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, DIRACTORI_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", "from diractori import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
