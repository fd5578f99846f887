"""Command line front-end.

    maslovqm gen phase --theta 6.2831853 --n 1 --out loop.json
    maslovqm mu --in loop.json
    maslovqm report --config run.json --out report.json

Every command prints one JSON object (CSV for tabular defect dumps).  Exit
codes: 0 success, 1 property failure, 2 invalid input, 3 resolution failure.
"""
import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import cover, qm
from .errors import MaslovError, RefinementNeeded, Singular, NoConvergence
from .rotation import lifted_angle, loop_index
from .symplectic import random_spd_symplectic, symplectic_residual

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_RESOLUTION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(x):
    if isinstance(x, (bool, np.bool_)) or x is None:
        return json.dumps(None if x is None else bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(str(x))
        return "%.17g" % x
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj):
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    return _fmt(obj)


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_path(path):
    return cover.from_json(_read_json(path))


@dataclass
class RunConfig:
    n: int = 1
    seed: int = 0
    sizes: dict = field(default_factory=dict)
    tol: float = 1e-6
    det_tol: float = 1e-8
    m_max: int = 12
    d_hat: float = None
    scale: float = 1.0
    defect_kind: str = "mixed"
    include_mu: bool = False
    format: str = "json"
    input: str = None
    output: str = None

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**obj)
        if "det_tol" not in obj and "tol" in obj:
            cfg.det_tol = min(cfg.det_tol, cfg.tol)
        cfg.validate()
        return cfg

    def validate(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise UsageError("n must be a positive integer")
        if not isinstance(self.sizes, dict):
            raise UsageError("sizes must be an object")
        allowed = set(qm.DEFAULT_SIZES) | {"defect"}
        for k, v in self.sizes.items():
            if k not in allowed:
                raise UsageError(f"unknown corpus size {k!r}")
            if not isinstance(v, int) or v < 1:
                raise UsageError(f"size {k} must be an integer >= 1")
        if self.tol < 0 or self.det_tol < 0:
            raise UsageError("tolerances must be non-negative")
        if not isinstance(self.m_max, int) or not 0 <= self.m_max <= 20:
            raise UsageError("m_max must be an integer in [0, 20]")
        if self.d_hat is not None and self.d_hat <= 0:
            raise UsageError("d_hat must be positive")
        if self.scale <= 0:
            raise UsageError("scale must be positive")
        if self.defect_kind not in qm.FAMILIES:
            raise UsageError(f"defect_kind must be one of {sorted(qm.FAMILIES)}")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")


# -- commands -----------------------------------------------------------------

SNAP = 1e-6


def snap_turns(theta):
    """Round angles typed within 1e-6 of a multiple of 2pi onto it.

    ``--theta 6.2831853`` then produces an exact loop instead of a path that
    misses the identity by 1e-8.
    """
    out = []
    for t in theta:
        k = round(t / (2 * math.pi))
        out.append(2 * math.pi * k if abs(t - 2 * math.pi * k) <= SNAP else t)
    return out


def cmd_gen(args):
    m = args.samples
    if m is not None and m < 2:
        raise UsageError("--samples must be at least 2")
    if args.kind == "phase":
        if not args.theta:
            raise UsageError("gen phase needs --theta")
        if args.n is not None and args.n != len(args.theta):
            raise UsageError(f"--n {args.n} does not match {len(args.theta)} theta values")
        g = cover.gen_phase_path(snap_turns(args.theta), m)
    elif args.kind == "spd":
        g = cover.iota(random_spd_symplectic(args.n or 1, args.scale, args.seed), m)
    elif args.kind == "hamiltonian":
        g = cover.gen_hamiltonian_path(cover.random_hamiltonian(args.n or 1, args.scale, args.seed), m)
    elif args.kind == "shear":
        g = cover.gen_shear_path(args.n or 1, m)
    elif args.kind == "unitary":
        g = cover.gen_unitary_path(args.n or 1, args.seed, m)
    else:
        g = cover.identity_path(args.n or 1, m)
    _write(dumps(cover.to_json(g)), args.out)
    return EXIT_OK


def cmd_validate(args):
    g = _load_path(args.infile)
    res = symplectic_residual(g.samples)
    angle = lifted_angle(g)
    _write(dumps({"valid": True, "n": g.n, "steps": g.steps,
                  "max_symplectic_residual": float(res.max()),
                  "max_step": angle.max_step, "refinable": g.closure is not None}), args.out)
    return EXIT_OK


def cmd_rho(args):
    g = _load_path(args.infile)
    a = lifted_angle(g)
    _write(dumps({"value": a.value, "step_count": a.step_count, "max_step": a.max_step,
                  "expected_angle": g.expected_angle}), args.out)
    return EXIT_OK


def cmd_mu(args):
    g = _load_path(args.infile)
    value = qm.mu(g, m_max=args.m_max, tol=args.tol, d_hat=args.d_hat, method=args.method)
    _write(dumps(value.to_dict()), args.out)
    return EXIT_OK


def cmd_loop(args):
    g = _load_path(args.infile)
    _write(dumps({"index": loop_index(g), "lifted_angle": lifted_angle(g).value}), args.out)
    return EXIT_OK


def _config(args):
    return RunConfig.from_dict(_read_json(args.config)) if args.config else RunConfig()


def cmd_defect(args):
    cfg = _config(args)
    count = cfg.sizes.get("defect", 1000)
    scan = qm.defect_scan(cfg.n, count, cfg.seed, cfg.defect_kind, cfg.scale,
                          include_mu=cfg.include_mu, m_max=cfg.m_max)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g_seed", "h_seed", "defect", "cocycle", "mu_defect"])
        for s in scan.samples:
            w.writerow([s.g_seed, s.h_seed, "%.17g" % s.defect, "%.17g" % s.cocycle,
                        "" if s.mu_defect is None else "%.17g" % s.mu_defect])
        text = buf.getvalue().rstrip("\n")
    else:
        text = dumps(scan.to_dict())
    _write(text, args.out or cfg.output)
    return EXIT_OK


def cmd_report(args):
    cfg = _config(args)
    sizes = {k: v for k, v in cfg.sizes.items() if k != "defect"}
    report = qm.run_suite(cfg.n, cfg.seed, sizes, cfg.m_max, cfg.d_hat, cfg.tol,
                          cfg.det_tol, cfg.scale)
    _write(dumps(report.to_dict()), args.out or cfg.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="maslovqm", description="Homogenized Maslov quasimorphism on the universal cover of Sp(2n).")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a path file")
    g.add_argument("kind", choices=["phase", "spd", "hamiltonian", "shear", "unitary", "identity"])
    g.add_argument("--theta", type=float, nargs="+")
    g.add_argument("--n", type=int)
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--samples", type=int, help="grid steps (default: 256, doubled as needed)")
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    for name, func, extra in (("validate", cmd_validate, False), ("rho", cmd_rho, False),
                              ("mu", cmd_mu, True), ("loop", cmd_loop, False)):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--out", default="-")
        if extra:
            p.add_argument("--m-max", type=int, default=12)
            p.add_argument("--tol", type=float, default=1e-6)
            p.add_argument("--d-hat", type=float)
            p.add_argument("--method", choices=["cocycle", "power"], default="cocycle")
        p.set_defaults(func=func)

    for name, func in (("defect", cmd_defect), ("report", cmd_report)):
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--out")
        p.set_defaults(func=func)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (RefinementNeeded, Singular, NoConvergence) as exc:
        sys.stderr.write(f"resolution failure: {exc}\n")
        return EXIT_RESOLUTION
    except (UsageError, MaslovError, ValueError, TypeError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
