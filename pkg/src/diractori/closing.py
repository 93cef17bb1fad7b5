"""Closing conditions for eigen-spinor tori and the three-pick coefficient recipe.

With kappa = w + w0 and partner(w) = -w - 2 w0 the surface closes iff

    r1 = sum |a_w|^2 kappa_w                               = 0
    r2 = sum a_w a_partner(w)                              = 0
    r3 = sum a_w a_partner(w) conj(kappa_w)^2              = 0

Coefficient vectors are plain dicts from lattice coordinates to complex.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass

import numpy as np

from .spectral import Coords, SpectralSet

EQUAL_REL_TOL = 1e-10


class KeyOutsideSpectralSet(KeyError):
    pass


class InvalidPicks(ValueError):
    pass


class DegeneratePicks(InvalidPicks):
    pass


@dataclass(frozen=True)
class ClosingResiduals:
    r1: complex
    r2: complex
    r3: complex

    def max_abs(self) -> float:
        return max(abs(self.r1), abs(self.r2), abs(self.r3))

    def __iter__(self):
        return iter((self.r1, self.r2, self.r3))


def closing_residuals(s: SpectralSet, a: dict[Coords, complex]) -> ClosingResiduals:
    for c in a:
        if tuple(c) not in s:
            raise KeyOutsideSpectralSet(c)
    r1 = r2 = r3 = 0j
    for c in s.coords:
        aw = a.get(c, 0j)
        if aw == 0:
            continue
        kappa = s.shifted(c)
        prod = aw * a.get(s.partner(c), 0j)
        r1 += abs(aw) ** 2 * kappa
        r2 += prod
        r3 += prod * kappa.conjugate() ** 2
    return ClosingResiduals(r1, r2, r3)


def construct_coefficients(s: SpectralSet, picks, seed_scale: complex = 1,
                           right_half: bool = True) -> dict[Coords, complex]:
    """Closed coefficients supported on three picks and their partners.

    v2 = (conj(kappa_i)^2), v0 = (1, 1, 1) x v2; a_i = sqrt(seed_scale v0_i)
    on the picks and i a_i on the partners.  Then sum a_i^2 and
    sum a_i^2 conj(kappa_i)^2 vanish identically, which is r2 = r3 = 0; the
    partner rule kills r1.
    """
    picks = [tuple(p) for p in picks]
    if len(picks) != 3:
        raise InvalidPicks("exactly three picks are required")
    if len(s) < 6:
        raise InvalidPicks(f"spectral set has {len(s)} elements, need at least 6")
    for p in picks:
        if p not in s:
            raise KeyOutsideSpectralSet(p)
        if right_half and s.value(p).real < -1e-12:
            raise InvalidPicks(f"pick {p} has negative real part")
    if len(set(picks)) < 3:
        raise DegeneratePicks(f"picks are not distinct: {picks}")
    orbit = set(picks) | {s.partner(p) for p in picks}
    if len(orbit) < 6:
        raise InvalidPicks(f"picks {picks} share an involution orbit")

    w = [s.shifted(p).conjugate() ** 2 for p in picks]
    scale = max(abs(x) for x in w)
    for i, j in itertools.combinations(range(3), 2):
        if abs(w[i] - w[j]) < EQUAL_REL_TOL * scale:
            raise DegeneratePicks(f"picks {picks[i]} and {picks[j]} give equal conj(kappa)^2")
    v0 = (w[2] - w[1], w[0] - w[2], w[1] - w[0])
    out: dict[Coords, complex] = {}
    for p, v in zip(picks, v0):
        ai = cmath.sqrt(seed_scale * v)
        out[p] = ai
        out[s.partner(p)] = 1j * ai
    return out


def auto_picks(s: SpectralSet) -> list[Coords]:
    """First admissible triple in coordinate order (right half plane only)."""
    cands = sorted(c for c in s.coords if s.value(c).real >= -1e-12)
    for triple in itertools.combinations(cands, 3):
        try:
            construct_coefficients(s, triple)
        except InvalidPicks:
            continue
        return list(triple)
    raise InvalidPicks("no admissible triple of picks in the spectral set")


def _constraint_matrix(s: SpectralSet) -> np.ndarray:
    # conditions (2), (3) are linear in the pair products x_p = a_w a_partner(w)
    pairs = s.pairs()
    rows = np.ones((2, len(pairs)), dtype=complex)
    for k, (c, _) in enumerate(pairs):
        rows[1, k] = s.shifted(c).conjugate() ** 2
    return rows


def nontrivial_solution_space_dim(s: SpectralSet) -> int:
    """Complex dimension of admissible pair-product vectors.

    Each involution orbit contributes one product x_p; conditions (2) and
    (3) are two linear equations on them, so the answer is
    ``#orbits - rank``.  For two or fewer orbits this is zero and then
    condition (1) forces every coefficient to vanish.
    """
    if len(s) == 0:
        return 0
    m = _constraint_matrix(s)
    sv = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    return m.shape[1] - rank


def coefficients_to_json(s: SpectralSet, a: dict[Coords, complex]) -> list[dict]:
    return [{"coords": list(c), "a": [a[c].real, a[c].imag]} for c in s.coords if c in a]


def coefficients_from_json(items: list[dict]) -> dict[Coords, complex]:
    return {tuple(int(x) for x in it["coords"]): complex(*it["a"]) for it in items}


REFERENCE_COEFFS = {
    (2, 1): (1.5 ** 0.5) * (1 + 1j),
    (2, -1): (1 - 3j) / 2 ** 0.5,
    (1, -2): 2 + 0j,
    (-2, -1): 1j * (1.5 ** 0.5) * (1 + 1j),
    (-2, 1): 1j * (1 - 3j) / 2 ** 0.5,
    (-1, 2): 2j,
    (1, 2): 0j,
    (-1, -2): 0j,
}
"""Coefficients of the square-lattice torus at mu = sqrt(5), omega0 = 0."""
