"""Differential geometry of synthesized immersions, verification and OBJ export.

All derivatives come from the Fourier modes, never from the mesh.
"""
from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .kernels import DX, DXX, DXY, DY, DYY, VALUE
from .lattice import fundamental_grid
from .spinor import (SpinorField, SurfaceImmersion, check_closedness, differential_modes,
                     differentiate, eval_spinor, pde_residual)

DEGENERACY_REL = 1e-8


class DegeneratePoint(ValueError):
    pass


class DegenerateSurface(ValueError):
    pass


class IOFailure(OSError):
    pass


@dataclass
class GeometrySample:
    z: complex
    position: np.ndarray
    f_x: np.ndarray
    f_y: np.ndarray
    E: float
    F: float
    G: float
    H: float
    half_density: float
    conformal_defect: float
    lambda_norm_sq: float


@dataclass
class GridGeometry:
    """Vectorized geometry on a set of points (arrays aligned with ``z``)."""
    z: np.ndarray
    position: np.ndarray
    f_x: np.ndarray
    f_y: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    half_density: np.ndarray
    conformal_defect: np.ndarray
    lambda_norm_sq: np.ndarray
    degenerate: np.ndarray
    real_part: np.ndarray


def _vec(q):
    # derivatives of an Im H valued map; the real part is identically zero
    return np.stack([np.imag(q.p), np.real(q.q), -np.imag(q.q)], axis=-1)


def degeneracy_eps(f: SurfaceImmersion) -> float:
    return DEGENERACY_REL * f.mean_metric


def sample_grid(f: SurfaceImmersion, z, eps: float | None = None) -> GridGeometry:
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if eps is None:
        eps = degeneracy_eps(f)
    raw = f.derivatives(z, (VALUE, DX, DY, DXX, DXY, DYY))
    # corrupted data can leave Im H; measure that instead of failing
    real_part = np.max(np.abs([np.real(q.p) for q in raw[:3]]), axis=0)
    val, fx, fy, fxx, fxy, fyy = (_vec(q) for q in raw)
    E = np.einsum("ni,ni->n", fx, fx)
    F = np.einsum("ni,ni->n", fx, fy)
    G = np.einsum("ni,ni->n", fy, fy)
    det = E * G - F * F
    degenerate = ~(det >= eps * eps) | (det <= 0)
    cross = np.cross(fx, fy)
    with np.errstate(divide="ignore", invalid="ignore"):
        normal = cross / np.linalg.norm(cross, axis=1)[:, None]
        e = np.einsum("ni,ni->n", normal, fxx)
        ff = np.einsum("ni,ni->n", normal, fxy)
        g = np.einsum("ni,ni->n", normal, fyy)
        H = (e * G - 2 * ff * F + g * E) / (2 * det)
        conformal = (np.abs(E - G) + 2 * np.abs(F)) / (E + G)
    H = np.where(degenerate, np.nan, H)
    half = np.abs(H) * np.sqrt(E)
    if f.spinor is not None:
        l1, l2 = eval_spinor(f.spinor, z)
        lam = np.abs(l1) ** 2 + np.abs(l2) ** 2
    else:
        # |df(d/dx)| = |lambda|^2 for a spin transform of the unit-speed plane
        lam = np.sqrt(E)
    return GridGeometry(z, val, fx, fy, E, F, G, H, half, conformal, lam, degenerate, real_part)


def sample_geometry(f: SurfaceImmersion, z: complex, eps: float | None = None) -> GeometrySample:
    g = sample_grid(f, [z], eps)
    if g.degenerate[0]:
        raise DegeneratePoint(f"first fundamental form degenerates at z = {z}")
    return GeometrySample(complex(z), g.position[0], g.f_x[0], g.f_y[0], float(g.E[0]),
                          float(g.F[0]), float(g.G[0]), float(g.H[0]),
                          float(g.half_density[0]), float(g.conformal_defect[0]),
                          float(g.lambda_norm_sq[0]))


def willmore_energy(f: SurfaceImmersion, n: int) -> float:
    """Riemann sum of H^2 dA over an n x n lattice grid (spectrally accurate)."""
    if n < 16:
        raise ValueError("n must be >= 16")
    g = sample_grid(f, fundamental_grid(f.lattice, n))
    if g.degenerate.any():
        raise DegenerateSurface(f"{int(g.degenerate.sum())} degenerate grid points")
    return _riemann_willmore(g, f.lattice.volume, n)


def _riemann_willmore(g: GridGeometry, volume: float, n: int) -> float:
    area = np.sqrt(g.E * g.G - g.F ** 2)
    return float(np.sum(g.H ** 2 * area) * volume / n ** 2)


def periodicity_defect(f: SurfaceImmersion, n: int) -> float:
    z = fundamental_grid(f.lattice, n)
    base = f(z)
    worst = 0.0
    for gamma in (f.lattice.gamma1, f.lattice.gamma2):
        moved = f(z + gamma)
        d = np.sqrt(np.abs(moved.p - base.p) ** 2 + np.abs(moved.q - base.q) ** 2)
        worst = max(worst, float(d.max()))
    return worst


@dataclass
class Tolerances:
    pde: float = 1e-10
    closedness: float = 1e-10
    period: float = 1e-9
    conformal: float = 1e-8
    half_density: float = 1e-6  # relative to mu
    imaginary: float = 1e-9


@dataclass
class VerificationReport:
    n: int
    mu: float
    max_pde_residual: float | None
    max_closedness_residual: float
    max_period_defect: float
    max_conformal_defect: float
    max_real_part: float
    max_half_density_error: float
    half_density_mean: float
    half_density_spread: float
    willmore_numeric: float
    willmore_mu2_vol: float
    willmore_mu_vol: float
    willmore_match: str
    degenerate_points: list = field(default_factory=list)
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def passes(self) -> bool:
        t = self.tolerances
        checks = [
            self.max_pde_residual is None or self.max_pde_residual <= t.pde,
            self.max_closedness_residual <= t.closedness,
            self.max_period_defect <= t.period,
            self.max_conformal_defect <= t.conformal,
            self.max_real_part <= t.imaginary,
            self.max_half_density_error <= t.half_density,
            not self.degenerate_points,
        ]
        return all(checks)

    def to_json(self) -> dict:
        out = asdict(self)
        out["degenerate_points"] = [[z.real, z.imag] for z in self.degenerate_points]
        out["passes"] = self.passes
        out["willmore_note"] = willmore_note(self)
        for k, v in out.items():
            if isinstance(v, float) and not math.isfinite(v):
                out[k] = None
        return out


def willmore_note(r: VerificationReport) -> str:
    if r.willmore_match == "mu^2*vol":
        return (f"quadrature {r.willmore_numeric:.9g} agrees with mu^2*vol; "
                f"mu*vol = {r.willmore_mu_vol:.9g} is off by the factor mu = {r.mu:.9g}")
    if r.willmore_match == "mu*vol":
        return f"quadrature {r.willmore_numeric:.9g} agrees with mu*vol"
    return f"quadrature {r.willmore_numeric} matches neither mu*vol nor mu^2*vol"


def _nan_max(x) -> float:
    x = np.asarray(x, dtype=float)
    return float("inf") if x.size == 0 or np.isnan(x).all() else float(np.nanmax(x))


def verify(f: SurfaceImmersion, spinor: SpinorField | None = None, n: int = 128,
           tolerances: Tolerances | None = None) -> VerificationReport:
    """Evaluate every check on an n x n grid.  Failures land in the report."""
    tol = tolerances or Tolerances()
    spinor = spinor if spinor is not None else f.spinor
    z = fundamental_grid(f.lattice, n)
    g = sample_grid(f, z)
    mu = f.mu
    good = ~g.degenerate

    pde = float(np.max(pde_residual(spinor, z))) if spinor is not None else None
    form = differential_modes(spinor) if spinor is not None else differentiate(f)
    closed = check_closedness(form)
    period = periodicity_defect(f, n)

    conf = _nan_max(g.conformal_defect[good])
    half = g.half_density[good]
    if half.size:
        half_err = float(np.max(np.abs(half - mu)) / mu)
        half_mean = float(np.mean(half))
        spread = float((half.max() - half.min()) / half_mean) if half_mean > 0 else float("inf")
    else:
        half_err = half_mean = spread = float("inf")

    if good.all():
        w_num = _riemann_willmore(g, f.lattice.volume, n)
    else:
        w_num = float("nan")
    vol = f.lattice.volume
    w_mu2, w_mu = mu * mu * vol, mu * vol
    if math.isfinite(w_num):
        rel2, rel1 = abs(w_num - w_mu2) / w_mu2, abs(w_num - w_mu) / w_mu
        match = "mu^2*vol" if rel2 <= 1e-6 else ("mu*vol" if rel1 <= 1e-6 else "neither")
    else:
        match = "undetermined"

    return VerificationReport(
        n=n, mu=mu, max_pde_residual=pde, max_closedness_residual=closed,
        max_period_defect=period, max_conformal_defect=conf,
        max_real_part=float(np.max(g.real_part)),
        max_half_density_error=half_err, half_density_mean=half_mean,
        half_density_spread=spread, willmore_numeric=w_num, willmore_mu2_vol=w_mu2,
        willmore_mu_vol=w_mu, willmore_match=match,
        degenerate_points=[complex(v) for v in z[g.degenerate]], tolerances=tol,
    )


@dataclass
class SurfaceMesh:
    n: int
    vertices: np.ndarray
    faces: np.ndarray
    geometry: GridGeometry | None = None

    @property
    def euler_characteristic(self) -> int:
        edges = set()
        for quad in self.faces:
            for a, b in zip(quad, np.roll(quad, -1)):
                edges.add((min(a, b), max(a, b)))
        return len(self.vertices) - len(edges) + len(self.faces)


def torus_faces(n: int) -> np.ndarray:
    """Quads (i,j) (i+1,j) (i+1,j+1) (i,j+1) with wraparound, 0-based, row-major."""
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    i, j = i.ravel(), j.ravel()
    ip, jp = (i + 1) % n, (j + 1) % n
    return np.stack([i * n + j, ip * n + j, ip * n + jp, i * n + jp], axis=1)


def build_mesh(f: SurfaceImmersion, n: int) -> SurfaceMesh:
    if n < 3:
        raise ValueError("n must be >= 3")
    g = sample_grid(f, fundamental_grid(f.lattice, n))
    return SurfaceMesh(n, g.position, torus_faces(n), g)


def format_obj(mesh: SurfaceMesh) -> str:
    lines = [f"# torus grid {mesh.n}x{mesh.n}"]
    for x, y, z in mesh.vertices:
        lines.append(f"v {x + 0.0:.9g} {y + 0.0:.9g} {z + 0.0:.9g}")
    for quad in mesh.faces:
        lines.append("f " + " ".join(str(int(k) + 1) for k in quad))
    return "\n".join(lines) + "\n"


def export_mesh(f: SurfaceImmersion, n: int, path, force: bool = False,
                spinor: SpinorField | None = None) -> SurfaceMesh:
    """Write the n x n torus grid as Wavefront OBJ.

    Unless ``force`` is set the surface must pass :func:`verify` at the same
    resolution first.
    """
    mesh = build_mesh(f, n)
    if not force:
        if mesh.geometry.degenerate.any():
            raise DegenerateSurface(f"{int(mesh.geometry.degenerate.sum())} degenerate vertices")
        report = verify(f, spinor, n)
        if not report.passes:
            raise DegenerateSurface("surface fails verification; pass force=True to export anyway")
    if not np.all(np.isfinite(mesh.vertices)):
        raise DegenerateSurface("non-finite vertex coordinates")
    try:
        with open(os.fspath(path), "w", newline="\n") as fh:
            fh.write(format_obj(mesh))
    except OSError as exc:
        raise IOFailure(str(exc)) from exc
    return mesh
