import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from diractori.lattice import LatticeBasis, SpinStructure, dual_basis
from diractori.spectral import NotInSet, involution, set_to_json, spectral_set, spectrum_search

SQUARE = dual_basis(LatticeBasis.from_tau(1j))
spins = st.sampled_from([SpinStructure(Fraction(a), Fraction(b))
                         for a in (0, Fraction(1, 2)) for b in (0, Fraction(1, 2))])


def test_ref_set_exact(ref_set):
    expected = {(2, 1), (2, -1), (1, 2), (1, -2), (-2, 1), (-2, -1), (-1, 2), (-1, -2)}
    assert set(ref_set.coords) == expected
    for c in ref_set.coords:
        assert ref_set.value(c) == complex(*c)


def test_float_path_agrees_with_exact_path(ref_set):
    s = spectral_set(SQUARE, SpinStructure(), math.sqrt(5))
    assert s.coords == ref_set.coords


def test_shifted_spin_set():
    # |(m + 1/2) + i (n + 1/2)|^2 = 50/4 has 12 solutions
    s = spectral_set(SQUARE, SpinStructure(Fraction(1, 2), Fraction(1, 2)), math.sqrt(12.5),
                     mu_sq=Fraction(25, 2))
    assert len(s) == 12
    for c in s.coords:
        assert abs(abs(s.shifted(c)) ** 2 - 12.5) < 1e-12


@settings(max_examples=30, deadline=None)
@given(spins, st.integers(1, 60))
def test_involution_properties(spin, k):
    mu = math.sqrt(k / 4)
    s = spectral_set(SQUARE, spin, mu, mu_sq=Fraction(k, 4))
    w0 = s.omega0
    for c in s.coords:
        p = involution(s, c)
        assert p in s
        assert involution(s, p) == c
        assert abs(s.value(p) + s.value(c) + 2 * w0) < 1e-12
    assert len(s) % 2 == 0


@settings(max_examples=30, deadline=None)
@given(spins, st.integers(1, 60))
def test_set_matches_brute_force(spin, k):
    mu2 = Fraction(k, 4)
    s = spectral_set(SQUARE, spin, math.sqrt(mu2), mu_sq=mu2)
    brute = sorted((m, n) for m in range(-10, 11) for n in range(-10, 11)
                   if (m + spin.s1) ** 2 + (n + spin.s2) ** 2 == mu2)
    assert sorted(s.coords) == brute


def test_not_in_set(ref_set):
    with pytest.raises(NotInSet):
        involution(ref_set, (0, 0))


def test_spectrum_search_minimum():
    lines = spectrum_search(SQUARE, SpinStructure(), 10.0, min_card=6)
    assert lines[0].mu_sq == 5 and lines[0].cardinality == 8
    assert [ln.mu for ln in lines] == sorted(ln.mu for ln in lines)
    brute = {}
    for m in range(-11, 12):
        for n in range(-11, 12):
            r = m * m + n * n
            if 0 < r <= 100:
                brute[r] = brute.get(r, 0) + 1
    assert {ln.mu_sq for ln in lines} == {r for r, c in brute.items() if c >= 6}


def test_spectrum_search_float_path():
    tilted = dual_basis(LatticeBasis.from_tau(math.sqrt(2) * 1j))
    lines = spectrum_search(tilted, SpinStructure(), 6.0, min_card=6)
    for ln in lines:
        s = spectral_set(tilted, SpinStructure(), ln.mu)
        assert len(s) == ln.cardinality


def test_generic_lattice_has_two():
    d = dual_basis(LatticeBasis.from_tau(0.31 + 1.137j))
    s = spectral_set(d, SpinStructure(), abs(d.point(1, 1)))
    assert len(s) == 2


def test_json(ref_set):
    out = set_to_json(ref_set)
    assert out["mu_squared"] == "5"
    assert len(out["elements"]) == 8
