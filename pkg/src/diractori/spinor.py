"""Eigen-spinors of the plane Dirac operator and the surfaces they generate.

A spinor lambda = lambda1 + j lambda2 is a finite Fourier sum over the
shifted frequencies kappa = w + w0 of a spectral set:

    lambda1 = sum a_w e^{i<kappa, z>},   lambda2 = -(1/mu) sum a_w conj(kappa) e^{i<kappa, z>}

so that 2i d lambda1 = mu lambda2 and 2i dbar lambda2 = mu lambda1.  These
are the eigen-equations of the Dirac operator of the reference plane
f0 = j conj(z); the surface is the spin transform

    df = conj(lambda) j dzbar lambda
       = (j lambda2^2 - conj(lambda1) lambda2) dz + (j lambda1^2 + lambda1 conj(lambda2)) dzbar.

1-forms are stored mode by mode as ``(P + jR) dz + (Q + jS) dzbar``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .kernels import DX, DY, VALUE
from .lattice import DualBasis, LatticeBasis, lattice_to_json, parse_lattice, dual_basis
from .quatalg import Quaternion
from .spectral import Coords, SpectralSet

CLOSED_TOL = 1e-9
PERIODIC_TOL = 1e-10


class NotClosedForm(ValueError):
    pass


class NonPeriodic(ValueError):
    pass


@dataclass(frozen=True)
class SpinorField:
    set: SpectralSet
    coeffs: dict

    def __post_init__(self):
        for c in self.coeffs:
            if tuple(c) not in self.set:
                raise KeyError(f"coefficient key {c} is not in the spectral set")

    @cached_property
    def support(self) -> list[Coords]:
        return [c for c in self.set.coords if self.coeffs.get(c, 0) != 0]

    @cached_property
    def kappa(self) -> np.ndarray:
        return np.array([self.set.shifted(c) for c in self.support], dtype=complex)

    @cached_property
    def a(self) -> np.ndarray:
        return np.array([self.coeffs[c] for c in self.support], dtype=complex)

    @cached_property
    def b(self) -> np.ndarray:
        """Fourier coefficients of lambda2."""
        return -self.a * np.conj(self.kappa) / self.set.mu

    def _channels(self) -> np.ndarray:
        return np.stack([self.a, self.b], axis=1)


def eval_spinor(s: SpinorField, z):
    """(lambda1, lambda2) at z (scalar or array)."""
    scalar = np.isscalar(z)
    if len(s.support) == 0:
        zero = np.zeros(np.shape(np.atleast_1d(z)), dtype=complex)
        return (0j, 0j) if scalar else (zero, zero.copy())
    out = kernels.trig_sum(s.kappa, s._channels(), z)[0]
    if scalar:
        return complex(out[0, 0]), complex(out[0, 1])
    return out[:, 0], out[:, 1]


def pde_residual(s: SpinorField, z):
    """|2i d lambda1 - mu lambda2| + |2i dbar lambda2 - mu lambda1|, from the modes."""
    scalar = np.isscalar(z)
    if len(s.support) == 0:
        return 0.0 if scalar else np.zeros(np.shape(np.atleast_1d(z)))
    v, dx, dy = kernels.trig_sum(s.kappa, s._channels(), z, (VALUE, DX, DY))
    d = 0.5 * (dx - 1j * dy)
    dbar = 0.5 * (dx + 1j * dy)
    mu = s.set.mu
    res = np.abs(2j * d[:, 0] - mu * v[:, 1]) + np.abs(2j * dbar[:, 1] - mu * v[:, 0])
    return float(res[0]) if scalar else res


def period_signs(s: SpinorField, basis: LatticeBasis) -> tuple[int, int]:
    """lambda(z + gamma_k) = sign_k lambda(z); -1 marks antiperiodicity.

    Every frequency differs from w0 by a dual vector, so the sign is
    exp(i <w0, gamma_k>) = +-1.
    """
    w0 = s.set.omega0
    out = []
    for g in (basis.gamma1, basis.gamma2):
        ph = np.exp(1j * (w0.conjugate() * g).real)
        out.append(int(round(ph.real)))
    return out[0], out[1]


@dataclass
class FourierForm:
    """Quaternionic 1-form sum_nu [(P + jR) dz + (Q + jS) dzbar] e^{i<nu, z>}.

    ``modes`` maps integer dual coordinates of nu to ``array([P, Q, R, S])``.
    """
    dual: DualBasis
    modes: dict = field(default_factory=dict)

    def frequency(self, coords: Coords) -> complex:
        return self.dual.point(*coords)

    def add(self, coords: Coords, slot: int, value: complex) -> None:
        m = self.modes.get(coords)
        if m is None:
            m = self.modes[coords] = np.zeros(4, dtype=complex)
        m[slot] += value

    def zero_mode(self) -> np.ndarray:
        return self.modes.get((0, 0), np.zeros(4, dtype=complex))

    def _arrays(self):
        keys = sorted(self.modes)
        nu = np.array([self.frequency(c) for c in keys], dtype=complex)
        coef = np.array([self.modes[c] for c in keys], dtype=complex).reshape(-1, 4)
        return nu, coef

    def evaluate(self, z) -> tuple[Quaternion, Quaternion]:
        """df(d/dx) and df(d/dy) as quaternion arrays."""
        nu, coef = self._arrays()
        if len(nu) == 0:
            zero = np.zeros(np.atleast_1d(z).shape, dtype=complex)
            return Quaternion(zero, zero), Quaternion(zero, zero)
        P, Q, R, S = np.moveaxis(kernels.trig_sum(nu, coef, z)[0], 1, 0)
        fx = Quaternion(P + Q, R + S)
        fy = Quaternion(1j * (P - Q), 1j * (R - S))
        return fx, fy


def differential_modes(s: SpinorField) -> FourierForm:
    """Expand df into Fourier modes by convolving the spinor coefficients."""
    form = FourierForm(s.set.dual)
    d1, d2 = s.set.spin.doubled
    sup = s.support
    a, b = s.a, s.b
    for i, ci in enumerate(sup):
        for k, ck in enumerate(sup):
            diff = (ci[0] - ck[0], ci[1] - ck[1])
            summ = (ci[0] + ck[0] + d1, ci[1] + ck[1] + d2)
            form.add(diff, 0, -np.conj(a[k]) * b[i])   # -conj(lambda1) lambda2
            form.add(diff, 1, a[i] * np.conj(b[k]))    # lambda1 conj(lambda2)
            form.add(summ, 2, b[i] * b[k])             # lambda2^2
            form.add(summ, 3, a[i] * a[k])             # lambda1^2
    return form


def check_closedness(form: FourierForm) -> float:
    """max_nu |P nu - Q conj(nu)| + |R nu - S conj(nu)| (zero iff d(form) = 0)."""
    worst = 0.0
    for c, (P, Q, R, S) in form.modes.items():
        nu = form.frequency(c)
        worst = max(worst, abs(P * nu - Q * nu.conjugate()) + abs(R * nu - S * nu.conjugate()))
    return float(worst)


@dataclass
class SurfaceImmersion:
    """f(z) = constant + A z + B conj(z) + sum_nu C_nu e^{i<nu, z>}.

    Complex factors multiply the quaternions from the right.  The linear
    part (A, B) vanishes for closed tori.
    """
    lattice: LatticeBasis
    mu: float
    constant: Quaternion
    modes: dict
    linear: tuple = (Quaternion(0j, 0j), Quaternion(0j, 0j))
    spinor: SpinorField | None = None

    @cached_property
    def dual(self) -> DualBasis:
        return dual_basis(self.lattice)

    @cached_property
    def _arrays(self):
        keys = sorted(self.modes)
        nu = np.array([self.dual.point(*c) for c in keys], dtype=complex)
        coef = np.array([[self.modes[c].p, self.modes[c].q] for c in keys],
                        dtype=complex).reshape(-1, 2)
        return nu, coef

    @property
    def has_linear_part(self) -> bool:
        A, B = self.linear
        return any(abs(x) > 0 for x in (A.p, A.q, B.p, B.q))

    def derivatives(self, z, derivs=(VALUE,)) -> list[Quaternion]:
        """Partial derivatives of f at z, one quaternion array per entry of derivs."""
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        nu, coef = self._arrays
        if len(nu):
            raw = kernels.trig_sum(nu, coef, z, derivs)
        else:
            raw = np.zeros((len(derivs), len(z), 2), dtype=complex)
        A, B = self.linear
        out = []
        for d, order in enumerate(derivs):
            p, q = raw[d, :, 0].copy(), raw[d, :, 1].copy()
            if order == VALUE:
                p += self.constant.p + A.p * z + B.p * np.conj(z)
                q += self.constant.q + A.q * z + B.q * np.conj(z)
            elif order == DX:
                p += A.p + B.p
                q += A.q + B.q
            elif order == DY:
                p += 1j * (A.p - B.p)
                q += 1j * (A.q - B.q)
            out.append(Quaternion(p, q))
        return out

    def __call__(self, z) -> Quaternion:
        return self.derivatives(z)[0]

    @property
    def mean_metric(self) -> float:
        """Torus average of E = |f_x|^2 (Parseval over the modes)."""
        nu, coef = self._arrays
        A, B = self.linear
        total = float(np.sum((np.abs(coef) ** 2).sum(axis=1) * nu.real ** 2)) if len(nu) else 0.0
        return total + abs(A.p + B.p) ** 2 + abs(A.q + B.q) ** 2


def integrate(form: FourierForm, lattice: LatticeBasis, mu: float,
              allow_linear: bool = False) -> SurfaceImmersion:
    """Analytic primitive of a closed form, normalized to f(0) = 0 and f in Im H."""
    defect = check_closedness(form)
    if defect > CLOSED_TOL:
        raise NotClosedForm(f"closedness defect {defect:.3e}")
    P0, Q0, R0, S0 = form.zero_mode()
    if max(abs(P0), abs(Q0), abs(R0), abs(S0)) > PERIODIC_TOL and not allow_linear:
        raise NonPeriodic(f"zero-frequency part of df is {max(abs(P0), abs(R0), abs(Q0), abs(S0)):.3e}")
    linear = (Quaternion(P0, R0), Quaternion(Q0, S0)) if allow_linear else \
        (Quaternion(0j, 0j), Quaternion(0j, 0j))
    modes = {}
    const_p = const_q = 0j
    for c in sorted(form.modes):
        if c == (0, 0):
            continue
        P, _, R, _ = form.modes[c]
        nu = form.frequency(c)
        factor = 2.0 / (1j * nu.conjugate())
        C = Quaternion(P * factor, R * factor)
        modes[c] = C
        const_p -= C.p
        const_q -= C.q
    constant = Quaternion(1j * const_p.imag, const_q)
    return SurfaceImmersion(lattice, float(mu), constant, modes, linear)


def differentiate(f: SurfaceImmersion) -> FourierForm:
    """The 1-form df of an immersion, mode by mode."""
    form = FourierForm(f.dual)
    for c, C in f.modes.items():
        nu = f.dual.point(*c)
        d, dbar = 0.5j * nu.conjugate(), 0.5j * nu
        form.add(c, 0, C.p * d)
        form.add(c, 1, C.p * dbar)
        form.add(c, 2, C.q * d)
        form.add(c, 3, C.q * dbar)
    A, B = f.linear
    if f.has_linear_part:
        for slot, v in enumerate((A.p, B.p, A.q, B.q)):
            form.add((0, 0), slot, v)
    return form


def synthesize(s: SpinorField, lattice: LatticeBasis, allow_linear: bool = False) -> SurfaceImmersion:
    f = integrate(differential_modes(s), lattice, s.set.mu, allow_linear=allow_linear)
    f.spinor = s
    return f


def _q4(q: Quaternion) -> list[float]:
    return [q.p.real, q.p.imag, q.q.real, q.q.imag]


def _from4(v) -> Quaternion:
    return Quaternion(complex(v[0], v[1]), complex(v[2], v[3]))


def immersion_to_json(f: SurfaceImmersion) -> dict:
    out = {
        "mu": f.mu,
        "lattice": lattice_to_json(f.lattice),
        "constant": _q4(f.constant),
        "linear": [_q4(f.linear[0]), _q4(f.linear[1])],
        "modes": [],
    }
    for c in sorted(f.modes):
        nu = f.dual.point(*c)
        out["modes"].append({"coords": list(c), "nu": [nu.real, nu.imag], "C": _q4(f.modes[c])})
    if f.spinor is not None:
        s = f.spinor.set
        out["spinor"] = {
            "spin": [str(s.spin.s1), str(s.spin.s2)],
            "mu_squared": None if s.mu_sq is None else str(s.mu_sq),
            "coefficients": [{"coords": list(c), "a": [f.spinor.coeffs[c].real, f.spinor.coeffs[c].imag]}
                             for c in s.coords if c in f.spinor.coeffs],
        }
    return out


def immersion_from_json(obj: dict) -> SurfaceImmersion:
    from fractions import Fraction
    from .lattice import SpinStructure
    from .spectral import spectral_set

    allowed = {"mu", "lattice", "constant", "linear", "modes", "spinor"}
    extra = set(obj) - allowed
    if extra:
        raise ValueError(f"unknown keys in immersion: {sorted(extra)}")
    lattice = parse_lattice(obj["lattice"])
    dual = dual_basis(lattice)
    mu = float(obj["mu"])
    modes = {}
    for m in obj.get("modes", []):
        if "coords" in m:
            c = (int(m["coords"][0]), int(m["coords"][1]))
        else:
            t = np.linalg.solve(dual.matrix, m["nu"])
            c = (int(round(t[0])), int(round(t[1])))
        modes[c] = _from4(m["C"])
    constant = _from4(obj.get("constant", [0, 0, 0, 0]))
    lin = obj.get("linear", [[0] * 4, [0] * 4])
    f = SurfaceImmersion(lattice, mu, constant, modes, (_from4(lin[0]), _from4(lin[1])))
    sp = obj.get("spinor")
    if sp is not None:
        spin = SpinStructure(Fraction(sp["spin"][0]), Fraction(sp["spin"][1]))
        mu_sq = None if sp.get("mu_squared") is None else Fraction(sp["mu_squared"])
        sset = spectral_set(dual, spin, mu, mu_sq=mu_sq)
        coeffs = {tuple(int(x) for x in it["coords"]): complex(*it["a"]) for it in sp["coefficients"]}
        f.spinor = SpinorField(sset, coeffs)
    return f
