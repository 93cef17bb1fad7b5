import numpy as np
import pytest
from hypothesis import given, strategies as st

from diractori.quatalg import (I, J, K, ONE, NonImaginary, Quaternion, conj, mul, norm,
                               sandwich, to_r3)

finite = st.floats(-10, 10, allow_nan=False)
quats = st.builds(lambda a, b, c, d: Quaternion(complex(a, b), complex(c, d)),
                  finite, finite, finite, finite)
imag_quats = st.builds(lambda a, c, d: Quaternion(complex(0, a), complex(c, d)), finite, finite, finite)


def close(a, b, tol=1e-12):
    return abs(a.p - b.p) <= tol and abs(a.q - b.q) <= tol


def test_unit_relations():
    assert close(mul(J, J), -ONE)
    assert close(mul(I, J), K)
    assert close(mul(J, I), -K)
    assert close(mul(I, I), -ONE)
    assert close(mul(K, K), -ONE)
    assert close(mul(mul(I, J), K), -ONE)


def test_j_commutation_rule():
    c = 0.3 - 1.7j
    lhs = mul(J, Quaternion(c, 0j))
    rhs = mul(Quaternion(np.conj(c), 0j), J)
    assert close(lhs, rhs)


def test_identity_spin_transform():
    assert close(sandwich(ONE, J), J)


def test_conj_examples():
    assert close(conj(J), -J)
    assert close(conj(I), -I)


@pytest.mark.parametrize("q, expected", [(J, (0, 1, 0)), (I, (1, 0, 0)), (mul(J, I), (0, 0, -1))])
def test_to_r3(q, expected):
    np.testing.assert_allclose(to_r3(q), expected, atol=0)


def test_to_r3_rejects_real_part():
    with pytest.raises(NonImaginary):
        to_r3(Quaternion(1 + 0j, 0j))


def test_scalar_multiplication_sides():
    c = 2 - 1j
    q = Quaternion(0.5j, 1 + 2j)
    assert close(q * c, mul(q, Quaternion(c, 0j)))
    assert close(c * q, mul(Quaternion(c, 0j), q))


@given(quats, quats)
def test_norm_multiplicative(a, b):
    assert abs(norm(mul(a, b)) - norm(a) * norm(b)) <= 1e-12 * max(1.0, norm(a) * norm(b))


@given(quats, quats)
def test_conj_anti_automorphism(a, b):
    assert close(conj(mul(a, b)), mul(conj(b), conj(a)), 1e-10)


@given(quats, quats, quats)
def test_associative(a, b, c):
    assert close(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-9)


@given(imag_quats)
def test_r3_isometry(v):
    assert abs(np.linalg.norm(to_r3(v)) - norm(v)) <= 1e-12


@given(imag_quats, imag_quats)
def test_product_is_cross_minus_dot(u, v):
    # for imaginary quaternions uv = -u.v + u x v
    w = mul(u, v)
    a, b = to_r3(u), to_r3(v)
    assert abs(w.p.real + a @ b) <= 1e-9
    np.testing.assert_allclose(to_r3(Quaternion(1j * w.p.imag, w.q)), np.cross(a, b), atol=1e-9)


@given(quats, imag_quats)
def test_sandwich_is_stretch_rotation(lam, v):
    w = sandwich(lam, v)
    assert abs(w.p.real) <= 1e-9 * max(1.0, norm(lam) ** 2 * norm(v))
    assert abs(norm(w) - norm(lam) ** 2 * norm(v)) <= 1e-9 * max(1.0, norm(lam) ** 2 * norm(v))


def test_vectorized_inputs():
    rng = np.random.default_rng(0)
    p = rng.normal(size=5) + 1j * rng.normal(size=5)
    q = rng.normal(size=5) + 1j * rng.normal(size=5)
    a = Quaternion(p, q)
    prod = mul(a, conj(a))
    np.testing.assert_allclose(prod.p, np.abs(p) ** 2 + np.abs(q) ** 2)
    np.testing.assert_allclose(prod.q, 0, atol=1e-12)
