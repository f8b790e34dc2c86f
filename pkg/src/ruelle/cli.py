"""Command-line front end.

Subcommands: spectrum, trace, det, scan, julia, homotopy-check.  Outputs
are deterministic CSV/JSON/PGM files that embed the resolved configuration;
exit codes: 0 success, 1 usage or input error, 2 numerical warning.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import julia as julia_mod
from .lifts import build_homotopy, find_expansive_annulus
from .maps import Annulus, MobiusFamilyMap, from_descriptor, min_expansion, to_descriptor
from .operators import assemble_dual
from .spectra import converged_spectrum, decay_fit, order_estimate
from .traces import (
    det_from_spectrum,
    det_from_traces,
    det_product_formula,
    log_abs_det_product,
    trace_report,
    _closed_form_multiplier,
)

__all__ = ["main"]


def _parse_map(text: str):
    try:
        if text.lstrip().startswith("{"):
            obj = json.loads(text)
        else:
            with open(text) as fh:
                obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read map descriptor {text!r}: {exc}") from exc
    return from_descriptor(obj)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected 're' or 're,im', got {text!r}")


def _parse_annulus(text: str) -> Annulus:
    r, R = (float(p) for p in text.split(","))
    return Annulus(r, R)


def _parse_grid(text: str) -> np.ndarray:
    lo, hi, count = text.split(":")
    grid = np.linspace(float(lo), float(hi), int(count))
    if grid.size == 0:
        raise ValueError("empty grid")
    return grid


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_dict(args, **extra) -> dict:
    # output paths are not part of the numerical configuration: identical
    # configs must produce byte-identical artifacts wherever they land
    skip = {"func", "out", "dump_matrix"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    cfg.update(extra)
    return cfg


def _spectrum_rows(spec) -> str:
    lines = ["n,re,im,modulus,converged"]
    cc = spec.converged_count or 0
    for i, lam in enumerate(spec.eigenvalues, start=1):
        lines.append(f"{i},{lam.real:.16g},{lam.imag:.16g},{abs(lam):.16g},{int(i <= cc)}")
    return "\n".join(lines) + "\n"


def cmd_spectrum(args) -> int:
    m = _parse_map(args.map)
    ann = _parse_annulus(args.annulus) if args.annulus else find_expansive_annulus(m)
    code = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = converged_spectrum(m, ann, tol=args.tol, max_order=args.N)
        if caught:
            code = 2
    lead = spec.eigenvalues[0]
    second = abs(spec.eigenvalues[1]) if len(spec.eigenvalues) > 1 else 0.0
    try:
        beta = decay_fit(spec).beta
    except ValueError:
        beta = None
    rho = order_estimate(spec)
    config = _config_dict(args, annulus=[ann.r, ann.R], map=to_descriptor(m))
    if args.format == "json":
        doc = {
            "config": config,
            "eigenvalues": [[l.real, l.imag] for l in spec.eigenvalues],
            "converged_count": spec.converged_count,
            "truncation": list(spec.truncation),
        }
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        _emit(f"# config: {json.dumps(config)}\n" + _spectrum_rows(spec), args.out)
    if args.dump_matrix:
        T = assemble_dual(m, ann, spec.truncation[0], spec.truncation[1])
        rows = ["row,col,re,im"]
        for (i, j), v in np.ndenumerate(T.matrix):
            rows.append(f"{i},{j},{v.real:.16g},{v.imag:.16g}")
        with open(args.dump_matrix, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    beta_text = "n/a" if beta is None else f"{beta:.4f}"
    print(
        f"lambda1={lead.real:+.9f}{lead.imag:+.3e}j |lambda2|={second:.3e} "
        f"beta={beta_text} rho_hat={rho:.3f} converged={spec.converged_count}",
        file=sys.stderr,
    )
    return code


def cmd_trace(args) -> int:
    m = _parse_map(args.map)
    ann = _parse_annulus(args.annulus) if args.annulus else find_expansive_annulus(m)
    rep = trace_report(m, ann, nplus=args.N)
    doc = {
        "config": _config_dict(args, annulus=[ann.r, ann.R], map=to_descriptor(m)),
        "contour": [rep.contour.real, rep.contour.imag],
        "eigensum": [rep.eigensum.real, rep.eigensum.imag],
        "maxPairwiseDiff": rep.max_pairwise_diff,
    }
    if rep.closed_form is not None:
        doc["closedForm"] = [rep.closed_form.real, rep.closed_form.imag]
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return 0


def cmd_det(args) -> int:
    m = _parse_map(args.map)
    ann = _parse_annulus(args.annulus) if args.annulus else find_expansive_annulus(m)
    info = _closed_form_multiplier(m)

    if args.zeta_scan:
        grid = _parse_grid(args.zeta_scan)
        spec = None if info is not None else converged_spectrum(m, ann)
        config = _config_dict(args, annulus=[ann.r, ann.R], map=to_descriptor(m))
        lines = ["# config: " + json.dumps(config), "zeta_re,zeta_im,logabsZ"]
        for zeta in grid:
            if info is not None:
                val = float(log_abs_det_product(info[0], info[1], complex(zeta)))
            else:
                val = float(np.log(abs(det_from_spectrum(spec, complex(zeta)).value)))
            lines.append(f"{zeta:.16g},0,{val:.16g}")
        _emit("\n".join(lines) + "\n", args.out)
        return 0

    if args.z is None:
        raise ValueError("need --z (or --zeta-scan) for the det command")
    z = _parse_complex(args.z)
    spec = converged_spectrum(m, ann)
    zeta = np.log(z) if z != 0 else -745.0  # e^zeta below double tiny at z=0
    routes = {"spectrum": det_from_spectrum(spec, zeta)}
    if abs(z) <= 0.5:
        routes["traces"] = det_from_traces(m, ann, z, nmax=args.nmax)
    if info is not None:
        routes["product"] = det_product_formula(info[0], info[1], z)
    doc = {"config": _config_dict(args, annulus=[ann.r, ann.R], map=to_descriptor(m))}
    for name, res in routes.items():
        doc[name] = {"value": [res.value.real, res.value.imag], "tail": res.tail}
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return 0


def _scan_members(args):
    grid = _parse_grid(args.grid)
    if args.family == "mobius":
        for w in grid:
            yield float(w), MobiusFamilyMap(complex(w))
    else:
        if not (args.map0 and args.map1):
            raise ValueError("homotopy scan needs --map0 and --map1")
        fam = build_homotopy(
            _parse_map(args.map0),
            _parse_map(args.map1),
            epsilon=getattr(args, "epsilon", None),
            eta_cap=getattr(args, "eta", None),
        )
        for w in grid:
            yield float(w), fam.member(complex(w))


def cmd_scan(args) -> int:
    rows = []
    in_band = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        members = sorted(_scan_members(args), key=lambda t: t[0])
        for w, m in members:
            ann = (
                _parse_annulus(args.annulus)
                if args.annulus
                else (m.family.annulus() if hasattr(m, "family") else find_expansive_annulus(m))
            )
            spec = converged_spectrum(m, ann, tol=args.tol)
            second = abs(spec.eigenvalues[1]) if len(spec.eigenvalues) > 1 else 0.0
            try:
                beta = decay_fit(spec).beta
            except ValueError:
                beta = float("nan")
            rho = order_estimate(spec)
            if 1.8 <= rho <= 2.2:
                in_band += 1
            rows.append(
                f"{w:.6g},{second:.12g},{beta:.6g},{rho:.6g},{spec.converged_count},"
                f"{min_expansion(m):.6g}"
            )
    config = _config_dict(args)
    body = "# config: " + json.dumps(config) + "\n"
    body += "w,lambda2_abs,beta,rho_hat,converged,min_expansion\n"
    body += "\n".join(rows) + "\n"
    frac = in_band / len(rows)
    body += f"# fraction with rho_hat in [1.8, 2.2]: {frac:.3f}\n"
    _emit(body, args.out)
    return 0


def cmd_julia(args) -> int:
    w = _parse_complex(args.w)
    width, height = (int(p) for p in args.size.split("x"))
    viewport = tuple(float(p) for p in args.viewport.split(","))
    raster = julia_mod.render(
        w, viewport, width, height, max_iter=args.max_iter, epsilon=args.epsilon
    )
    julia_mod.write_pgm(raster, args.out, mode=args.mode)
    undecided = float(np.mean(raster.basin == julia_mod.BASIN_UNDECIDED))
    print(f"wrote {args.out} ({width}x{height}, undecided {undecided:.2%})", file=sys.stderr)
    return 0


def cmd_homotopy_check(args) -> int:
    map0, map1 = _parse_map(args.map0), _parse_map(args.map1)
    fam = build_homotopy(map0, map1, epsilon=args.epsilon, eta_cap=args.eta)
    # sup distance between the endpoint map and the member at real w = eta,
    # against the first-order bound eta * sup |d T / d w|
    b = np.exp(1j * 2 * np.pi * np.arange(512) / 512)
    pts = np.concatenate([fam.r0 * b, b, fam.R0 * b])
    member0, member_eta = fam.member(0.0), fam.member(min(fam.eta, 1.0))
    sup_dist = float(np.max(np.abs(member0.eval(pts) - member_eta.eval(pts))))
    theta = -1j * np.log(pts)
    dT_dw = np.abs(member0.eval(pts)) * np.abs(
        fam.lift1.eval(theta) - fam.lift0.eval(theta)
    )
    bound = min(fam.eta, 1.0) * float(dT_dw.max())
    doc = {
        "config": _config_dict(args, map0=to_descriptor(map0), map1=to_descriptor(map1)),
        "degree": fam.d,
        "epsilon": fam.epsilon,
        "eta": fam.eta,
        "annuli": {"r0": fam.r0, "R0": fam.R0, "r1": fam.r1, "R1": fam.R1},
        "margins": {"inner": fam.margin_inner, "outer": fam.margin_outer},
        "sup_distance_at_eta": sup_dist,
        "first_order_bound": bound,
    }
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ruelle", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, with_map=True):
        if with_map:
            p.add_argument("--map", required=True, help="JSON descriptor (inline or file path)")
        p.add_argument("--annulus", help="r,R override")
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("spectrum", help="converged eigenvalue sequence")
    common(p)
    p.add_argument("--N", type=int, default=256, help="max truncation order")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--dump-matrix", help="also write the assembled matrix as CSV")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("trace", help="trace by contour, matrix, and closed form")
    common(p)
    p.add_argument("--N", type=int, default=48)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("det", help="Fredholm determinant routes at a point")
    common(p)
    p.add_argument("--z", help="evaluation point re[,im]")
    p.add_argument("--nmax", type=int, default=24)
    p.add_argument(
        "--zeta-scan",
        help="instead scan log|det(I - e^zeta L)| over real zeta lo:hi:count "
        "-> CSV (zeta_re,zeta_im,logabsZ)",
    )
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("scan", help="spectral scan over a parameter grid")
    p.add_argument("--family", choices=("mobius", "homotopy"), default="mobius")
    p.add_argument("--map0", help="homotopy endpoint descriptor")
    p.add_argument("--map1", help="homotopy endpoint descriptor")
    p.add_argument("--grid", required=True, help="lo:hi:count")
    p.add_argument("--annulus", help="r,R override")
    p.add_argument("--epsilon", type=float, help="homotopy strip half-width override")
    p.add_argument("--eta", type=float, help="homotopy neighbourhood ceiling")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("julia", help="filled Julia set raster (PGM)")
    p.add_argument("--w", required=True, help="family parameter re[,im]")
    p.add_argument("--size", default="512x512")
    p.add_argument("--viewport", default="-1.6,1.6,-1.6,1.6")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--mode", choices=("basin", "steps"), default="basin")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_julia)

    p = sub.add_parser("homotopy-check", help="certify a homotopy and report margins")
    p.add_argument("--map0", required=True)
    p.add_argument("--map1", required=True)
    p.add_argument("--epsilon", type=float, help="strip half-width override")
    p.add_argument("--eta", type=float, help="parameter-neighbourhood ceiling")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_homotopy_check)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
