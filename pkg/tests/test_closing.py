import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st
from scipy.optimize import minimize

from diractori.closing import (REFERENCE_COEFFS, DegeneratePicks, InvalidPicks,
                               KeyOutsideSpectralSet, auto_picks, closing_residuals,
                               coefficients_from_json, coefficients_to_json,
                               construct_coefficients, nontrivial_solution_space_dim)
from diractori.lattice import LatticeBasis, SpinStructure, dual_basis
from diractori.spectral import spectral_set, spectrum_search

SQUARE = dual_basis(LatticeBasis.from_tau(1j))


def test_reference_coefficients_close(ref_set):
    r = closing_residuals(ref_set, REFERENCE_COEFFS)
    assert r.max_abs() <= 1e-12


def test_reference_coefficients_squares(ref_set):
    a = REFERENCE_COEFFS
    assert abs(a[(2, 1)] ** 2 - 3j) < 1e-12
    assert abs(a[(2, -1)] ** 2 - (-4 - 3j)) < 1e-12
    assert abs(a[(1, -2)] ** 2 - 4) < 1e-12
    for c in [(2, 1), (2, -1), (1, -2)]:
        assert a[ref_set.partner(c)] == 1j * a[c]


def test_residual_rejects_foreign_key(ref_set):
    with pytest.raises(KeyOutsideSpectralSet):
        closing_residuals(ref_set, {(0, 0): 1})


def test_recipe_reproduces_reference_up_to_branch(ref_set):
    a = construct_coefficients(ref_set, [(2, 1), (2, -1), (1, -2)], 1 / 2j)
    for c, v in REFERENCE_COEFFS.items():
        if v != 0:
            assert abs(a[c] ** 2 - v ** 2) < 1e-12


@pytest.mark.parametrize("picks, exc", [
    ([(2, 1), (2, -1)], InvalidPicks),
    ([(2, 1), (2, 1), (1, -2)], DegeneratePicks),
    ([(2, 1), (3, 3), (1, -2)], KeyOutsideSpectralSet),
    ([(2, 1), (-2, 1), (1, -2)], InvalidPicks),
])
def test_invalid_picks(ref_set, picks, exc):
    with pytest.raises(exc):
        construct_coefficients(ref_set, picks)


def test_orbit_sharing_rejected(ref_set):
    # (1, 2) and (-1, -2) are partners
    with pytest.raises(InvalidPicks):
        construct_coefficients(ref_set, [(1, 2), (-1, -2), (2, 1)], right_half=False)


def test_too_small_set():
    s = spectral_set(SQUARE, SpinStructure(), 1.0, mu_sq=Fraction(1))
    with pytest.raises(InvalidPicks):
        construct_coefficients(s, [(1, 0), (0, 1), (-1, 0)])


def test_json_round_trip(ref_set):
    a = construct_coefficients(ref_set, auto_picks(ref_set))
    assert coefficients_from_json(coefficients_to_json(ref_set, a)) == a


def _scale(s, a):
    return max(abs(v) for v in a.values()) ** 2 * s.mu ** 3


def _rect_sets():
    # dual lattice (1, i t) with t^2 = p/q rational: six vectors of length p + q
    out = []
    for p, q in [(1, 2), (2, 1), (3, 1), (1, 5), (4, 9), (5, 3)]:
        t = math.sqrt(p / q)
        L = LatticeBasis.from_tau(1j / t)
        out.append(spectral_set(dual_basis(L), SpinStructure(), float(p + q)))
    return out


def test_recipe_on_many_sets():
    sets = _rect_sets()
    sets.append(spectral_set(SQUARE, SpinStructure(Fraction(1, 2), Fraction(1, 2)),
                             math.sqrt(12.5), mu_sq=Fraction(25, 2)))
    hexd = dual_basis(LatticeBasis.from_tau(0.5 + math.sqrt(3) / 2 * 1j))
    ln = spectrum_search(hexd, SpinStructure(), 3.0)[0]
    sets.append(spectral_set(hexd, SpinStructure(), ln.mu))
    for s in sets:
        assert len(s) >= 6
        for picks in itertools.combinations([c for c in s.coords if s.value(c).real >= -1e-12], 3):
            for seed in (1, 0.3 - 2j, cmath.exp(0.7j)):
                try:
                    a = construct_coefficients(s, picks, seed)
                except InvalidPicks:
                    continue
                assert closing_residuals(s, a).max_abs() <= 1e-12 * _scale(s, a)


def _admissible_square_sets():
    out = []
    for spin2 in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        spin = SpinStructure(Fraction(spin2[0], 2), Fraction(spin2[1], 2))
        for k in range(1, 120):
            mu2 = Fraction(k, 4)
            s = spectral_set(SQUARE, spin, math.sqrt(mu2), mu_sq=mu2)
            if len(s) >= 6:
                out.append(s)
    return out


ADMISSIBLE = _admissible_square_sets()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ADMISSIBLE), st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_recipe_property(s, seed):
    a = construct_coefficients(s, auto_picks(s), seed)
    assert closing_residuals(s, a).max_abs() <= 1e-12 * _scale(s, a)
    assert nontrivial_solution_space_dim(s) >= 1


def test_reference_solution_space():
    s = spectral_set(SQUARE, SpinStructure(), math.sqrt(5), mu_sq=Fraction(5))
    assert nontrivial_solution_space_dim(s) == 2


# --- triviality for #Gamma' in {2, 4} ------------------------------------------

def _small_set(tau, m, n, spin2):
    d = dual_basis(LatticeBasis.from_tau(tau))
    spin = SpinStructure(Fraction(spin2[0], 2), Fraction(spin2[1], 2))
    kappa = d.point(m + spin.s1, n + spin.s2)
    if abs(kappa) < 1e-9:
        return None
    return spectral_set(d, spin, abs(kappa))


def _trivial_by_linear_algebra(s) -> bool:
    """Independent oracle.

    With x_o = a_w a_w' per orbit o = {w, w'} (kappa_w' = -kappa_w), r2 and r3
    read sum x_o = 0 and sum x_o conj(kappa_o)^2 = 0.  If that system has only
    the zero solution, each orbit carries at most one nonzero coefficient and
    r1 = sum |a|^2 kappa = 0 must have no nonnegative nontrivial solution.
    """
    orbits = s.pairs()
    k = np.array([s.shifted(c) for c, _ in orbits])
    M = np.vstack([np.ones(len(k)), np.conj(k) ** 2])
    if np.linalg.matrix_rank(M, tol=1e-9) < len(k):
        return False
    for signs in itertools.product((1, -1), repeat=len(k)):
        v = np.array([signs[i] * k[i] for i in range(len(k))])
        R = np.vstack([v.real, v.imag])
        if len(k) == 1:
            continue  # a single nonzero kappa can never sum to zero
        # nonnegative combination of two vectors vanishing means they are opposite
        if np.linalg.matrix_rank(R, tol=1e-9 * s.mu) < 2 and np.dot(v[0].conjugate(), v[1]).real < 0:
            return False
    return True


def _min_normalized_residual(s, rng) -> float:
    coords = s.coords
    n = len(coords)

    def obj(x):
        a = x[:n] + 1j * x[n:]
        a = a / np.linalg.norm(a)
        r = closing_residuals(s, dict(zip(coords, a)))
        return (abs(r.r1) ** 2 + abs(r.r2) ** 2 + abs(r.r3) ** 2) / s.mu ** 2

    best = math.inf
    for _ in range(6):
        res = minimize(obj, rng.normal(size=2 * n), method="BFGS")
        best = min(best, res.fun)
    return best


small_sets = st.builds(
    _small_set,
    st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.6, 2.0)),
    st.integers(-3, 3), st.integers(-3, 3),
    st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1)]),
)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(small_sets)
def test_no_closed_solution_for_small_sets(s):
    assume(s is not None and len(s) in (2, 4))
    assert nontrivial_solution_space_dim(s) == 0
    assert _trivial_by_linear_algebra(s)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(st.builds(lambda t, m, n: _small_set(1j * t, m, n, (0, 0)),
                 st.floats(0.6, 2.0), st.integers(1, 3), st.integers(1, 3)), st.integers(0, 2 ** 16))
def test_optimizer_cannot_close_four_element_sets(s, seed):
    assume(len(s) == 4)
    assert _min_normalized_residual(s, np.random.default_rng(seed)) > 1e-6


def test_four_element_sets_on_square_lattice():
    for mu2 in (1, 2, 4, 8, 9):
        s = spectral_set(SQUARE, SpinStructure(), math.sqrt(mu2), mu_sq=Fraction(mu2))
        assert len(s) == 4
        assert _trivial_by_linear_algebra(s)
        assert nontrivial_solution_space_dim(s) == 0
        assert _min_normalized_residual(s, np.random.default_rng(mu2)) > 1e-6


def test_oracle_detects_six_element_closure(ref_set):
    assert not _trivial_by_linear_algebra(ref_set)
