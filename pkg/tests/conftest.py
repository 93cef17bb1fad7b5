import math
from fractions import Fraction

import pytest

from diractori.closing import REFERENCE_COEFFS
from diractori.lattice import LatticeBasis, SpinStructure, dual_basis
from diractori.spectral import spectral_set
from diractori.spinor import SpinorField, synthesize

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def square_lattice():
    return LatticeBasis.from_tau(1j)


@pytest.fixture(scope="session")
def ref_set(square_lattice):
    return spectral_set(dual_basis(square_lattice), SpinStructure(), math.sqrt(5), mu_sq=Fraction(5))


@pytest.fixture(scope="session")
def ref_spinor(ref_set):
    return SpinorField(ref_set, dict(REFERENCE_COEFFS))


@pytest.fixture(scope="session")
def ref_surface(ref_spinor, square_lattice):
    return synthesize(ref_spinor, square_lattice)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}")
