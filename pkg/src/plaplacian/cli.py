"""Command line front end.

Subcommands: spectrum, weyl, check, pack, sandwich.  Inputs and outputs
use the JSON/CSV schemas of the library modules; JSON payloads go to
--output (or stdout), human-readable status lines go to stderr, so runs
with a fixed config and seed are byte-identical.

Exit codes: 0 pass, 1 inequality violation, 2 unsupported request,
3 degenerate range, 4 solver failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .discrete import assemble_fd, eigensolve_p2, min_p_rayleigh, trusted_count_threshold
from .domains import (
    _frac, domain_from_json, interval, pack_cubes, packing_to_json,
    partition_cubes, rasterize, volume,
)
from .errors import (
    ArgumentError, EstimationError, PackingError, ResourceError, SolverError,
    UnsupportedError, ValidationError,
)
from .exact import Spectrum, exact_spectrum, spectrum_to_json
from .weyl import (
    ExactProvider, check_constant_equality, check_cutoff_inequality,
    check_friedlander_bounds, check_scaling, counting_curve, curve_to_csv,
    estimate_weyl_constant, log_grid, report_to_json, sandwich_weyl,
    sweep_cutoff, sweep_dirichlet_monotonicity, sweep_energy_split,
    sweep_neumann_monotonicity, sweep_scaling, weyl_estimate_to_json,
)

CHECK_STATEMENTS = ("ddm", "ndm", "scaling", "cutoff", "friedlander",
                    "constant-equality", "energy-split")


class RunConfig:
    """Config file values with command line overrides.

    Flags that were given explicitly win; everything else falls back to
    the JSON file named by --config, then to the built-in default.
    """

    def __init__(self, namespace):
        self._ns = namespace
        self._file = {}
        path = getattr(namespace, "config", None)
        if path:
            try:
                with open(path) as fh:
                    self._file = json.load(fh)
            except OSError as e:
                raise ArgumentError(f"cannot read config {path}: {e}")
            except json.JSONDecodeError as e:
                raise ArgumentError(f"config {path} is not valid JSON: {e}")
            if not isinstance(self._file, dict):
                raise ArgumentError(f"config {path} must hold a JSON object")

    def get(self, key, default=None):
        val = getattr(self._ns, key.replace("-", "_"), None)
        if val is not None:
            return val
        return self._file.get(key, default)

    def require(self, key):
        val = self.get(key)
        if val is None:
            raise ArgumentError(f"missing required option --{key}")
        return val


def _load_domain(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise ArgumentError(f"cannot read domain file {path}: {e}")
    except json.JSONDecodeError as e:
        raise ArgumentError(f"domain file {path} is not valid JSON: {e}")
    return domain_from_json(obj)


def _emit_json(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_text(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _status(msg):
    print(msg, file=sys.stderr)


def _get_p(cfg, default=2.0):
    p = float(cfg.get("p", default))
    if p <= 1:
        raise ArgumentError("p must exceed 1")
    return p


def _grid_from(cfg, lam_max):
    lam_min = float(cfg.get("lambda-min", 1.0))
    points = cfg.get("points")
    if not (0 < lam_min < lam_max):
        raise ArgumentError("need 0 < lambda-min < lambda-max")
    return log_grid(lam_min, lam_max, points=None if points is None else int(points))


def _rasterized(cfg, d):
    if d.kind == "grid-mask":
        return d
    return rasterize(d, float(cfg.get("h", 1.0 / 32)))


def cmd_spectrum(cfg) -> int:
    d = _load_domain(cfg.require("domain"))
    p = _get_p(cfg)
    bc = cfg.get("bc", "dirichlet")
    if cfg.get("first-eigenvalue"):
        if bc != "dirichlet":
            raise UnsupportedError(
                "the variational solver handles the dirichlet ground state only")
        dm = _rasterized(cfg, d)
        lam, _ = min_p_rayleigh(dm, p, bc="dirichlet",
                                tol=float(cfg.get("tol", 1e-8)))
        s = Spectrum([lam], [1], p, bc, d.n, volume(d), "variational",
                     meta={"h": dm.h, "solver": "min_p_rayleigh"})
        _emit_json(spectrum_to_json(s), cfg.get("output"))
        return 0
    lam_max = float(cfg.require("lambda-max"))
    if lam_max <= 0:
        raise ArgumentError("lambda-max must be positive")
    try:
        s = exact_spectrum(d, p, bc, lam_max)
    except UnsupportedError as e:
        if d.kind not in ("box-union", "grid-mask"):
            raise
        if p != 2:
            raise UnsupportedError(
                f"{e}; nearest supported: --p 2 for the discrete spectrum of "
                "this domain, an interval domain at this p, or "
                "--first-eigenvalue for the variational ground state")
        dm = _rasterized(cfg, d)
        op = assemble_fd(dm, bc)
        full = eigensolve_p2(op)
        keep = full.values < lam_max
        if not keep.any():
            raise EstimationError("no discrete eigenvalues below lambda-max")
        s = Spectrum(full.values[keep], full.mults[keep], 2.0, bc, d.n,
                     full.domain_volume, "discrete",
                     meta={"h": op.h, "dim": op.dim,
                           "trusted_below": trusted_count_threshold(op, 0.02)})
    _emit_json(spectrum_to_json(s), cfg.get("output"))
    return 0


def cmd_weyl(cfg) -> int:
    d = _load_domain(cfg.require("domain"))
    p = _get_p(cfg)
    bc = cfg.get("bc", "dirichlet")
    lam_max = float(cfg.require("lambda-max"))
    grid = _grid_from(cfg, lam_max)
    s = exact_spectrum(d, p, bc, lam_max * 1.0000001)
    curve = counting_curve(s, grid)
    est = estimate_weyl_constant(curve,
                                 float(cfg.get("window-fraction", 0.5)))
    if cfg.get("curve-out"):
        _emit_text(curve_to_csv(curve), cfg.get("curve-out"))
    _emit_json(weyl_estimate_to_json(est), cfg.get("output"))
    _status(f"c_hat={est.c_hat!r} spread={est.spread!r} "
            f"window=[{est.window[0]!r}, {est.window[1]!r}]")
    return 0


def _check_report(cfg, statement):
    sweep = cfg.get("sweep")
    seed = int(cfg.get("seed", 0))
    points = int(cfg.get("points", 1000))
    lam_hi = float(cfg.get("lambda-max", 10 ** 4))
    if statement == "ddm":
        return sweep_dirichlet_monotonicity(
            int(sweep or 100), seed, kind=cfg.get("kind", "interval"),
            grid_points=points, lam_hi=lam_hi)
    if statement == "ndm":
        return sweep_neumann_monotonicity(
            int(sweep or 100), seed, kind=cfg.get("kind", "interval"),
            grid_points=points, lam_hi=lam_hi)
    if statement == "scaling":
        if sweep:
            return sweep_scaling(int(sweep), seed, grid_points=points,
                                 lam_hi=lam_hi)
        d = interval(1) if cfg.get("domain") is None \
            else _load_domain(cfg.get("domain"))
        a = _frac(cfg.get("a", 2))
        return check_scaling(d, a, cfg.get("bc", "dirichlet"),
                             log_grid(1.0, lam_hi, points=points),
                             ExactProvider(_get_p(cfg)))
    if statement == "cutoff":
        if sweep:
            return sweep_cutoff(int(sweep), seed)
        d = interval(1) if cfg.get("domain") is None \
            else _load_domain(cfg.get("domain"))
        return check_cutoff_inequality(d, float(cfg.get("eps", 0.25)),
                                       float(cfg.get("lam1", 10.0)),
                                       float(cfg.get("lam2", 10.0)),
                                       _get_p(cfg))
    if statement == "friedlander":
        d = _load_domain(cfg.require("domain"))
        lam_max = float(cfg.require("lambda-max"))
        s = exact_spectrum(d, _get_p(cfg), cfg.get("bc", "dirichlet"),
                           lam_max * 1.0000001)
        curve = counting_curve(s, _grid_from(cfg, lam_max))
        lo = cfg.get("lambda-lo")
        return check_friedlander_bounds(curve,
                                        None if lo is None else float(lo))
    if statement == "constant-equality":
        d = interval(1) if cfg.get("domain") is None \
            else _load_domain(cfg.get("domain"))
        p = _get_p(cfg)
        lam_max = float(cfg.require("lambda-max"))
        grid = _grid_from(cfg, lam_max)
        wf = float(cfg.get("window-fraction", 0.5))
        ests = {}
        for bc in ("dirichlet", "neumann"):
            s = exact_spectrum(d, p, bc, lam_max * 1.0000001)
            ests[bc] = estimate_weyl_constant(counting_curve(s, grid), wf)
        return check_constant_equality(ests["dirichlet"], ests["neumann"],
                                       float(cfg.get("tol", 0.02)))
    if statement == "energy-split":
        return sweep_energy_split(int(sweep or 100), seed)
    raise UnsupportedError(f"unknown statement {statement!r}")


def cmd_check(cfg) -> int:
    rep = _check_report(cfg, cfg.require("statement"))
    _emit_json(report_to_json(rep), cfg.get("output"))
    _status(f"{rep.statement}: {rep.verdict} (worst_margin={rep.worst_margin!r})")
    return 0 if rep.verdict == "pass" else 1


def cmd_pack(cfg) -> int:
    d = _load_domain(cfg.require("domain"))
    if cfg.get("partition") is not None:
        pk = partition_cubes(d, int(cfg.get("partition")))
    else:
        eps = _frac(str(cfg.require("epsilon")))
        try:
            pk = pack_cubes(d, eps, depth_cap=int(cfg.get("depth-cap", 12)))
        except PackingError as e:
            raise PackingError(
                f"{e}; raise --depth-cap or relax --epsilon",
                achieved=e.achieved)
    _emit_json(packing_to_json(pk), cfg.get("output"))
    _status(f"{len(pk.items)} pieces, scaled volume {float(pk.scaled_volume()):.6g}")
    return 0


def cmd_sandwich(cfg) -> int:
    d = _load_domain(cfg.require("domain"))
    lam_max = float(cfg.require("lambda-max"))
    grid = _grid_from(cfg, lam_max)
    lower, upper, est = sandwich_weyl(
        d, grid, window_fraction=float(cfg.get("window-fraction", 0.5)))
    if cfg.get("lower-out"):
        _emit_text(curve_to_csv(lower), cfg.get("lower-out"))
    if cfg.get("upper-out"):
        _emit_text(curve_to_csv(upper), cfg.get("upper-out"))
    _emit_json(weyl_estimate_to_json(est), cfg.get("output"))
    _status(f"c_hat={est.c_hat!r} spread={est.spread!r} "
            f"f_lower(end)={float(lower.f[-1])!r} f_upper(end)={float(upper.f[-1])!r}")
    return 0


def _add_common(sp):
    sp.add_argument("--config", help="JSON file of defaults for this command")
    sp.add_argument("--domain", help="domain JSON file")
    sp.add_argument("--p", type=float)
    sp.add_argument("--bc", choices=["dirichlet", "neumann", "periodic"])
    sp.add_argument("--lambda-max", type=float)
    sp.add_argument("--output", help="write the JSON payload here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="plaplacian",
        description="spectra and Weyl-law checks for the p-Laplacian on boxes")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalues of one domain")
    _add_common(sp)
    sp.add_argument("--first-eigenvalue", action="store_true", default=None,
                    help="variational ground state (general p, dirichlet)")
    sp.add_argument("--h", type=float, help="grid spacing for discrete solves")
    sp.add_argument("--tol", type=float)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("weyl", help="counting curve and Weyl constant estimate")
    _add_common(sp)
    sp.add_argument("--lambda-min", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--window-fraction", type=float)
    sp.add_argument("--curve-out", help="write the counting curve CSV here")
    sp.set_defaults(func=cmd_weyl)

    sp = sub.add_parser("check", help="verify a counting-function property")
    sp.add_argument("statement", choices=list(CHECK_STATEMENTS))
    _add_common(sp)
    sp.add_argument("--sweep", type=int, help="number of randomized instances")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--kind", choices=["interval", "box", "square"])
    sp.add_argument("--points", type=int)
    sp.add_argument("--lambda-min", type=float)
    sp.add_argument("--lambda-lo", type=float)
    sp.add_argument("--window-fraction", type=float)
    sp.add_argument("--a", help="scale factor for the scaling check")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--lam1", type=float)
    sp.add_argument("--lam2", type=float)
    sp.add_argument("--tol", type=float)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("pack", help="dyadic cube packing or partition of a domain")
    sp.add_argument("--config")
    sp.add_argument("--domain")
    sp.add_argument("--epsilon", help="volume defect target (exact rational)")
    sp.add_argument("--depth-cap", type=int)
    sp.add_argument("--partition", type=int, help="exact k-refinement partition")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_pack)

    sp = sub.add_parser("sandwich", help="two-sided Weyl data for a box union")
    _add_common(sp)
    sp.add_argument("--lambda-min", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--window-fraction", type=float)
    sp.add_argument("--lower-out")
    sp.add_argument("--upper-out")
    sp.set_defaults(func=cmd_sandwich)
    return ap


def _apply_thread_cap():
    cap = os.environ.get("PLAPLACIAN_THREADS")
    if not cap:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, cap)


def main(argv=None) -> int:
    _apply_thread_cap()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = RunConfig(ns)
        return ns.func(cfg)
    except (UnsupportedError, ArgumentError, ValidationError, PackingError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except EstimationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (SolverError, ResourceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
