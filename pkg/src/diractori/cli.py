"""Command-line entry point: ``diractori {spectrum,synth,verify,export,classify}``.

Exit codes: 0 success, 1 classify found nothing, 2 malformed input,
3 no closed torus at the requested eigenvalue, 4 verification failed.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from .classify import (ExactLatticeBasis, classify, classify_rectangular,
                       min_torus_eigenvalue)
from .closing import (REFERENCE_COEFFS, InvalidPicks, KeyOutsideSpectralSet, auto_picks,
                      closing_residuals, construct_coefficients)
from .exact import ExactComplex, QuadraticScalar, parse_exact_complex, parse_scalar
from .lattice import LatticeBasis, SpinStructure, dual_basis, parse_lattice
from .spectral import set_to_json, spectral_set, spectrum_search
from .spinor import SpinorField, immersion_from_json, immersion_to_json, synthesize
from .surface import DegenerateSurface, IOFailure, Tolerances, export_mesh, verify

EXIT_OK, EXIT_NONE, EXIT_INPUT, EXIT_NO_TORUS, EXIT_VERIFY = 0, 1, 2, 3, 4
OUT_DIR_ENV = "DIRACTORI_OUT_DIR"

CONFIG_KEYS = {"lattice", "spin", "mu", "mu_max", "min_card", "picks", "seed_scale",
               "n", "tolerances", "out_dir", "force"}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- parsing helpers ---------------------------------------------------------

def parse_complex(text) -> complex:
    if isinstance(text, (list, tuple)):
        re_, im = text
        return complex(float(re_), float(im))
    if isinstance(text, (int, float)):
        return complex(text)
    s = str(text).replace(" ", "")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_mu(text) -> tuple[float, Fraction | None]:
    """'sqrt5', 'sqrt(5)' or a decimal; the square is kept exact."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        fr = Fraction(str(text))
        return float(fr), fr * fr
    s = str(text).strip()
    m = re.fullmatch(r"sqrt\(?(\d+(?:/\d+)?)\)?", s)
    if m:
        sq = Fraction(m.group(1))
        return math.sqrt(sq), sq
    try:
        fr = Fraction(s)
    except ValueError:
        raise UsageError(f"cannot parse mu {text!r}") from None
    return float(fr), fr * fr


def parse_spin(text) -> SpinStructure:
    parts = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        return SpinStructure(*(Fraction(str(p).strip()) for p in parts))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad spin structure {text!r}: {exc}") from None


def parse_picks(text):
    if text is None or text == "auto":
        return "auto"
    if isinstance(text, list):
        return [tuple(int(x) for x in p) for p in text]
    try:
        picks = [tuple(int(x) for x in p.split(",")) for p in str(text).split(";")]
    except ValueError:
        raise UsageError(f"cannot parse picks {text!r}") from None
    if len(picks) != 3 or any(len(p) != 2 for p in picks):
        raise UsageError("picks must be three coordinate pairs 'm,n;m,n;m,n'")
    return picks


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _pick(args, cfg, name, default=None):
    v = getattr(args, name, None)
    return v if v is not None else cfg.get(name, default)


def resolve_lattice(args, cfg) -> LatticeBasis:
    try:
        if getattr(args, "tau", None) is not None:
            return LatticeBasis.from_tau(parse_complex(args.tau))
        if getattr(args, "gamma1", None) is not None or getattr(args, "gamma2", None) is not None:
            if args.gamma1 is None or args.gamma2 is None:
                raise UsageError("--gamma1 and --gamma2 go together")
            return LatticeBasis(parse_complex(args.gamma1), parse_complex(args.gamma2))
        if getattr(args, "lattice", None) is not None:
            return parse_lattice(json.loads(args.lattice))
        if "lattice" in cfg:
            return parse_lattice(cfg["lattice"])
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"bad lattice: {exc}") from None
    raise UsageError("no lattice given (use --tau, --gamma1/--gamma2, --lattice or a config)")


def resolve_tolerances(args, cfg) -> Tolerances:
    given = cfg.get("tolerances", {})
    unknown = set(given) - set(vars(Tolerances()))
    if unknown:
        raise UsageError(f"unknown tolerance keys in config: {sorted(unknown)}")
    tol = Tolerances(**{k: float(v) for k, v in given.items()})
    for name in vars(Tolerances()):
        v = getattr(args, f"tol_{name}", None)
        if v is not None:
            setattr(tol, name, v)
    return tol


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _dual_json(dual) -> dict:
    return {"omega1": [dual.omega1.real, dual.omega1.imag],
            "omega2": [dual.omega2.real, dual.omega2.imag]}


# -- subcommands ---------------------------------------------------------------

def cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    lattice = resolve_lattice(args, cfg)
    dual = dual_basis(lattice)
    spin = parse_spin(_pick(args, cfg, "spin", "0,0"))
    out = {"dual": _dual_json(dual)}
    mu_text = _pick(args, cfg, "mu")
    if mu_text is not None:
        mu, mu_sq = parse_mu(mu_text)
        if mu <= 0:
            raise UsageError("mu must be positive")
        s = spectral_set(dual, spin, mu, mu_sq=mu_sq)
        out.update(set_to_json(s))
        out["cardinality"] = len(s)
    else:
        mu_max = float(_pick(args, cfg, "mu_max", 10.0))
        min_card = int(_pick(args, cfg, "min_card", 6))
        lines = spectrum_search(dual, spin, mu_max, min_card)
        out["spectrum"] = [{"mu": ln.mu, "mu_squared": None if ln.mu_sq is None else str(ln.mu_sq),
                            "cardinality": ln.cardinality} for ln in lines]
    sys.stdout.write(dumps(out))
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = load_config(args.config)
    tol = resolve_tolerances(args, cfg)
    n = int(_pick(args, cfg, "n", 128))
    if n < 3:
        raise UsageError("grid size n must be >= 3")
    out_dir = Path(args.out_dir or cfg.get("out_dir") or os.environ.get(OUT_DIR_ENV, "."))
    force = bool(args.force or cfg.get("force", False))

    if args.reference:
        lattice = LatticeBasis.from_tau(1j)
        spin = SpinStructure()
        mu, mu_sq = math.sqrt(5), Fraction(5)
    else:
        lattice = resolve_lattice(args, cfg)
        spin = parse_spin(_pick(args, cfg, "spin", "0,0"))
        mu_text = _pick(args, cfg, "mu")
        if mu_text is None:
            raise UsageError("--mu is required (a value, sqrtN, or auto-min)")
        if mu_text == "auto-min":
            mu_max = float(_pick(args, cfg, "mu_max", 10.0))
            found = min_torus_eigenvalue(dual_basis(lattice), spin, mu_max)
            if found is None:
                sys.stderr.write(f"no eigenvalue <= {mu_max} has at least 6 frequencies\n")
                return EXIT_NO_TORUS
            lines = spectrum_search(dual_basis(lattice), spin, mu_max)
            mu, mu_sq = found, lines[0].mu_sq
        else:
            mu, mu_sq = parse_mu(mu_text)
    dual = dual_basis(lattice)
    s = spectral_set(dual, spin, mu, mu_sq=mu_sq)
    if len(s) < 6:
        sys.stderr.write(f"no closed Dirac torus at this mu: the spectral set has {len(s)} "
                         "elements and closing needs at least 6\n")
        return EXIT_NO_TORUS

    if args.reference:
        coeffs = dict(REFERENCE_COEFFS)
    else:
        picks = parse_picks(_pick(args, cfg, "picks", "auto"))
        seed = parse_complex(_pick(args, cfg, "seed_scale", "1"))
        try:
            if picks == "auto":
                picks = auto_picks(s)
            coeffs = construct_coefficients(s, picks, seed)
        except (InvalidPicks, KeyOutsideSpectralSet) as exc:
            raise UsageError(f"bad picks: {exc}") from None

    spinor = SpinorField(s, coeffs)
    f = synthesize(spinor, lattice)
    report = verify(f, spinor, n, tol)
    out_dir.mkdir(parents=True, exist_ok=True)
    imm = immersion_to_json(f)
    imm_path, rep_path, obj_path = (out_dir / "immersion.json", out_dir / "report.json",
                                    out_dir / "torus.obj")
    imm_path.write_text(dumps(imm))
    rep = report.to_json()
    rep["closing_residuals"] = [[r.real, r.imag] for r in closing_residuals(s, coeffs)]
    rep_path.write_text(dumps(rep))
    if report.passes or force:
        export_mesh(f, n, obj_path, force=True)
    sys.stdout.write(dumps({"passes": report.passes, "immersion": str(imm_path),
                            "report": str(rep_path),
                            "mesh": str(obj_path) if (report.passes or force) else None}))
    return EXIT_OK if report.passes else EXIT_VERIFY


def _load_immersion(path):
    try:
        return immersion_from_json(json.loads(Path(path).read_text()))
    except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
        raise UsageError(f"cannot read immersion {path}: {exc}") from None


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    f = _load_immersion(args.immersion)
    tol = resolve_tolerances(args, cfg)
    report = verify(f, None, int(_pick(args, cfg, "n", 128)), tol)
    sys.stdout.write(dumps(report.to_json()))
    return EXIT_OK if report.passes else EXIT_VERIFY


def cmd_export(args) -> int:
    f = _load_immersion(args.immersion)
    try:
        mesh = export_mesh(f, args.n, args.out, force=args.force)
    except DegenerateSurface as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VERIFY
    except IOFailure as exc:
        sys.stderr.write(f"cannot write {args.out}: {exc}\n")
        return EXIT_NONE
    sys.stdout.write(dumps({"mesh": str(args.out), "vertices": len(mesh.vertices),
                            "faces": len(mesh.faces)}))
    return EXIT_OK


def _exact_tau_dual(tau: ExactComplex) -> ExactLatticeBasis:
    # dual of 2 pi (1, tau): (1 - i tx/ty, i/ty)
    tx, ty = tau.re, tau.im
    if ty == 0:
        raise UsageError("tau must not be real")
    return ExactLatticeBasis(ExactComplex(1, -(tx / ty)), ExactComplex(0, QuadraticScalar(1) / ty))


def cmd_classify(args) -> int:
    d = args.d
    try:
        if args.rect_tau_sq is not None:
            verdict = classify_rectangular(parse_scalar(args.rect_tau_sq, d))
        else:
            if args.dual is not None:
                parts = args.dual.split(";")
                if len(parts) != 2:
                    raise UsageError("--dual takes 're,im;re,im'")
                gens = []
                for p in parts:
                    re_, im = p.split(",")
                    gens.append(ExactComplex(parse_scalar(re_, d), parse_scalar(im, d)))
                basis = ExactLatticeBasis(*gens)
            elif args.tau is not None:
                basis = _exact_tau_dual(parse_exact_complex(args.tau, d))
            else:
                raise UsageError("give one of --rect-tau-sq, --tau or --dual")
            verdict = classify(basis, args.bound)
    except UsageError:
        raise
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(f"malformed exact input: {exc}") from None
    sys.stdout.write(dumps(verdict.to_json()))
    return EXIT_OK if verdict.exists else EXIT_NONE


# -- argument parser -------------------------------------------------------------

def _add_lattice_flags(p):
    p.add_argument("--tau", help="lattice 2 pi (1, tau), e.g. 'i' or '0.5+0.8i'")
    p.add_argument("--gamma1", help="first lattice generator (complex)")
    p.add_argument("--gamma2", help="second lattice generator (complex)")
    p.add_argument("--lattice", help='JSON {"gamma1": [re, im], "gamma2": [re, im]} or {"tau": [re, im]}')
    p.add_argument("--spin", help="spin structure 's1,s2' with entries 0 or 1/2")
    p.add_argument("--config", help="JSON config file; explicit flags win")


def _add_tolerance_flags(p):
    for name in vars(Tolerances()):
        p.add_argument(f"--tol-{name.replace('_', '-')}", dest=f"tol_{name}", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diractori", description="Construct, verify, export and classify Dirac tori.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="spectral set or eigenvalue table")
    _add_lattice_flags(p)
    p.add_argument("--mu", help="eigenvalue: decimal or sqrtN")
    p.add_argument("--mu-max", dest="mu_max", type=float)
    p.add_argument("--min-card", dest="min_card", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("synth", help="build, verify and export a torus")
    _add_lattice_flags(p)
    p.add_argument("--mu", help="eigenvalue: decimal, sqrtN or auto-min")
    p.add_argument("--mu-max", dest="mu_max", type=float)
    p.add_argument("--picks", help="'m,n;m,n;m,n' or auto")
    p.add_argument("--seed-scale", dest="seed_scale", help="complex scale of the cross-product solution")
    p.add_argument("--n", type=int, help="grid resolution (default 128)")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--force", action="store_true", default=None)
    p.add_argument("--example-paper", dest="reference", action="store_true",
                   help="square lattice, mu = sqrt 5, the reference coefficients")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="verify an immersion JSON file")
    p.add_argument("immersion")
    p.add_argument("--n", type=int)
    p.add_argument("--config")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write an immersion JSON file as OBJ")
    p.add_argument("immersion")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("classify", help="decide existence of Dirac tori for a conformal class")
    p.add_argument("--rect-tau-sq", dest="rect_tau_sq", help="exact tau^2 of the rectangular lattice (1, i tau)")
    p.add_argument("--tau", help="exact tau of the lattice 2 pi (1, tau), e.g. 'i' or '1/2+sqrt(3)/2*i'")
    p.add_argument("--dual", help="exact dual generators 're,im;re,im'")
    p.add_argument("-d", type=int, default=None, help="squarefree d of the field Q(sqrt d)")
    p.add_argument("--bound", type=int, default=4)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
