"""Which conformal classes carry Dirac tori.

A torus exists for the dual lattice exactly when it contains a rectangular
sublattice spanned by orthogonal w1, w2 with |w1|^2 / |w2|^2 rational.  For
rectangular lattices (1, i tau) this is the rationality of tau^2 and an
explicit set of six equal-length vectors is available; for general lattices
the search below is bounded and therefore only a semi-decision.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .exact import ExactComplex, QuadraticScalar, squarefree_decomposition
from .lattice import DegenerateLattice, DualBasis, SpinStructure
from .spectral import spectrum_search


class NonRectangularInput(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class VerdictKind(str, enum.Enum):
    EXISTS_WITNESS = "ExistsWitness"
    NOT_FOUND = "NotFoundUpToBound"
    NO = "NoRectangularCase"


@dataclass(frozen=True)
class ExactLatticeBasis:
    """Dual-lattice generators with components in a common Q(sqrt d)."""
    omega1: ExactComplex
    omega2: ExactComplex

    def __post_init__(self):
        if self.omega1.cross(self.omega2) == 0:
            raise DegenerateLattice("generators are linearly dependent")

    def point(self, m: int, n: int) -> ExactComplex:
        return self.omega1.scale(m) + self.omega2.scale(n)


@dataclass
class Verdict:
    kind: VerdictKind
    witness: tuple[ExactComplex, ExactComplex, Fraction] | None = None
    search_bound: int | None = None
    coords: tuple[tuple[int, int], tuple[int, int]] | None = None
    vectors: list[ExactComplex] = field(default_factory=list)

    @property
    def exists(self) -> bool:
        return self.kind is VerdictKind.EXISTS_WITNESS

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "search_bound": self.search_bound}
        if self.witness is not None:
            w1, w2, b = self.witness
            out["witness"] = {"omega1": w1.to_json(), "omega2": w2.to_json(), "b": str(b)}
            if self.coords is not None:
                out["witness"]["coords"] = [list(c) for c in self.coords]
        if self.vectors:
            out["vectors"] = [v.to_json() for v in self.vectors]
            out["vectors_norm_sq"] = str(self.vectors[0].norm_sq())
        return out


def check_witness(w1: ExactComplex, w2: ExactComplex, b: Fraction) -> bool:
    """Exact re-verification: orthogonal and |w1|^2 den(b) = num(b) |w2|^2."""
    return (w1.dot(w2) == 0
            and w1.norm_sq() * b.denominator == w2.norm_sq() * b.numerator)


def _upper(v: ExactComplex) -> bool:
    # one representative per +-v pair
    s = v.im.sign()
    return s > 0 or (s == 0 and v.re.sign() > 0)


def classify(basis: ExactLatticeBasis, coeff_bound: int) -> Verdict:
    """Bounded search for an orthogonal pair with rational squared-length ratio.

    Candidates m w1 + n w2 with |m|, |n| <= coeff_bound are taken up to sign
    and ordered by exact length, then by argument, then by coordinates; the
    first pair (u, v), u before v, that qualifies is returned, so b <= 1.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    cands = []
    for m, n in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=2):
        v = basis.point(m, n)
        if not v.is_zero() and _upper(v):
            cands.append(((m, n), v, v.norm_sq(), math.atan2(float(v.im), float(v.re))))

    def order(x, y):
        c = (x[2] > y[2]) - (x[2] < y[2])
        if c:
            return c
        return (x[3] > y[3]) - (x[3] < y[3]) or (x[0] > y[0]) - (x[0] < y[0])

    cands.sort(key=cmp_to_key(order))
    for i, (cu, u, nu, _) in enumerate(cands):
        for cv, v, nv, _ in cands[i + 1:]:
            if u.dot(v) != 0:
                continue
            ratio = nu / nv
            if ratio.is_rational:
                b = ratio.rational()
                assert check_witness(u, v, b)
                return Verdict(VerdictKind.EXISTS_WITNESS, (u, v, b), coeff_bound, (cu, cv))
    return Verdict(VerdictKind.NOT_FOUND, None, coeff_bound)


def sqrt_of_rational(x: Fraction) -> QuadraticScalar:
    """Exact square root of a positive rational inside some Q(sqrt s)."""
    if x <= 0:
        raise ValueError("need a positive rational")
    p, q = x.numerator, x.denominator
    k, s = squarefree_decomposition(p * q)
    return QuadraticScalar(0, Fraction(k, q), s) if s > 1 else QuadraticScalar(Fraction(k, q))


def rectangular_witness(p: int, q: int, tau_sq) -> list[ExactComplex]:
    """Six vectors of the lattice (1, i tau) with equal squared length.

    With q tau^2 = p they are +-(p - q) +- 2 q tau i and +-(p + q), all of
    squared length (p + q)^2 since (p - q)^2 + 4 q^2 tau^2 = (p + q)^2.  When
    p = q (the square lattice) that family collapses to four vectors, and the
    Pythagorean family +-3q +- 4q i, +-5q is returned instead.
    """
    tau_sq = Fraction(tau_sq) if not isinstance(tau_sq, QuadraticScalar) else tau_sq.rational()
    if p < 1 or q < 1 or q * tau_sq != p:
        raise PreconditionViolated(f"need positive p, q with q * tau^2 = p, got p={p}, q={q}, tau^2={tau_sq}")
    if p == q:
        vecs = [ExactComplex(sx * 3 * q, sy * 4 * q) for sx in (1, -1) for sy in (1, -1)]
        vecs += [ExactComplex(5 * q, 0), ExactComplex(-5 * q, 0)]
        target = Fraction(25 * q * q)
    else:
        tau = sqrt_of_rational(tau_sq)
        y = tau * (2 * q)
        vecs = [ExactComplex(QuadraticScalar(sx * (p - q)), y * sy) for sx in (1, -1) for sy in (1, -1)]
        vecs += [ExactComplex(p + q, 0), ExactComplex(-(p + q), 0)]
        target = Fraction((p + q) ** 2)
    assert len(set(vecs)) == 6
    assert all(v.norm_sq() == target for v in vecs)
    return vecs


def classify_rectangular(tau_sq: QuadraticScalar) -> Verdict:
    """Total decision for the rectangular lattice (1, i tau): yes iff tau^2 is rational."""
    tau_sq = QuadraticScalar.coerce(tau_sq) if not isinstance(tau_sq, QuadraticScalar) else tau_sq
    if tau_sq.sign() <= 0:
        raise NonRectangularInput(f"tau^2 must be positive, got {tau_sq}")
    if not tau_sq.is_rational:
        return Verdict(VerdictKind.NO)
    t2 = tau_sq.rational()
    p, q = t2.numerator, t2.denominator
    tau = sqrt_of_rational(t2)
    w1, w2 = ExactComplex(1, 0), ExactComplex(0, tau)
    b = Fraction(1) / t2
    assert check_witness(w1, w2, b)
    return Verdict(VerdictKind.EXISTS_WITNESS, (w1, w2, b), None, ((1, 0), (0, 1)),
                   rectangular_witness(p, q, t2))


def min_torus_eigenvalue(dual: DualBasis, spin: SpinStructure, mu_max: float) -> float | None:
    """Smallest mu <= mu_max whose spectral set has at least six points."""
    lines = spectrum_search(dual, spin, mu_max, min_card=6)
    return lines[0].mu if lines else None


def rectangular_basis(tau: QuadraticScalar) -> ExactLatticeBasis:
    return ExactLatticeBasis(ExactComplex(1, 0), ExactComplex(0, tau))
