"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .errors import IoFailure, ModelError
from .lindblad import build_liouvillian, steady_state
from .mirror_em import Direction, radiative_correction
from .params import DEFAULT_CONFIG, MirrorConfig, atom_params_from, dump_config, load_config, validate, validate_mirror
from .steady_closed import p3_closed
from .sweep import OUTPUTS, PRESETS, VARIABLES, SweepSpec, format_csv, format_json, run_sweep, saturation_study
from .verify import MUTATIONS, verify_all


def _grid(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("parameters (angular MHz; r in units of lambda31)")
    for key in ("r", "omega1", "omega2", "delta1", "delta2", "gamma1", "gamma2", "theta", "phi"):
        g.add_argument(f"--{key}", type=float, default=None)
    p.add_argument("--config", help="flat key=value file; flags override its values")
    p.add_argument("--dump-config", action="store_true", help="print the effective parameters and exit")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="atom-mirror", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("steady", parents=[common], help="steady state at one parameter point")
    sw = sub.add_parser("sweep", parents=[common], help="sweep one parameter")
    sw.add_argument("--var", choices=VARIABLES, default="r")
    sw.add_argument("--grid", type=_grid, default=(1.0, 6.0, 1200), help="lo:hi:n")
    sw.add_argument("--outputs", default=",".join(OUTPUTS), help="comma-separated subset of " + ",".join(OUTPUTS))
    sw.add_argument("--cross-check", action="store_true", help="add the Liouvillian steady-state population")
    pr = sub.add_parser("preset", parents=[common], help="reproduce a figure")
    pr.add_argument("name", choices=sorted(PRESETS))
    pr.add_argument("--summary", action="store_true", help="print the derived metrics instead of the table")
    sub.add_parser("saturation", parents=[common], help="modulation amplitude at saturation vs 3x saturation")
    ve = sub.add_parser("verify", parents=[common], help="run every cross-check")
    ve.add_argument("--mutate", choices=MUTATIONS, help=argparse.SUPPRESS)
    return parser


def _config(args) -> dict[str, float]:
    cfg = dict(DEFAULT_CONFIG)
    if args.config:
        cfg.update(load_config(args.config))
    for key in cfg:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    return cfg


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _steady(cfg, args) -> int:
    p = validate(atom_params_from(cfg))
    mirror = validate_mirror(MirrorConfig(cfg["r"]))
    rc = radiative_correction(mirror.k31r, p)
    rho = steady_state(build_liouvillian(p, rc))
    doc = {
        "params": p.as_dict(), "r": mirror.r, "k31r": mirror.k31r,
        "gamma_bar_1": rc.gamma_bar_1, "shift": rc.shift,
        "P3": p3_closed(p, rc), "P3_liouvillian": float(rho[2, 2].real),
        "rho_real": rho.real.tolist(), "rho_imag": rho.imag.tolist(),
    }
    if args.format == "json":
        _write(_json(doc), args.out)
    else:
        lines = [f"{k},{float(doc[k])!r}" for k in ("r", "k31r", "gamma_bar_1", "shift", "P3", "P3_liouvillian")]
        lines += [f"rho[{i}{j}],{float(rho[i, j].real)!r},{float(rho[i, j].imag)!r}" for i in range(3) for j in range(3)]
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _table(result, args) -> int:
    _write(format_json(result) if args.format == "json" else format_csv(result), args.out)
    return 0


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return 0
    if args.command == "steady":
        return _steady(cfg, args)
    if args.command == "sweep":
        lo, hi, n = args.grid
        outputs = tuple(o for o in args.outputs.split(",") if o)
        spec = SweepSpec(args.var, lo, hi, n, params=atom_params_from(cfg), mirror=MirrorConfig(cfg["r"]),
                         outputs=outputs, detector_1=Direction(cfg["theta"], cfg["phi"]),
                         detector_2=Direction(cfg["theta"], cfg["phi"]), cross_check=args.cross_check)
        return _table(run_sweep(spec), args)
    if args.command == "preset":
        res = PRESETS[args.name]()
        if args.summary:
            _write(_json(res.summary), args.out)
            return 0
        return _table(res.table, args)
    if args.command == "saturation":
        base = atom_params_from(cfg) if args.config or any(
            getattr(args, k) is not None for k in ("omega1", "omega2", "delta1", "delta2", "gamma1", "gamma2")) \
            else None
        res = saturation_study(base) if base is not None else saturation_study()
        _write(_json({"omega_sat": res.omega_sat, "amplitude_sat": res.amplitude_sat,
                      "amplitude_triple": res.amplitude_triple, "ratio": res.ratio,
                      "definition": res.definition}), args.out)
        return 0
    if args.command == "verify":
        report = verify_all(args.mutate)
        _write(report.to_json() + "\n", args.out)
        sys.stderr.write(str(report) + "\n")
        return 0 if report.passed else 1
    return 2


def main(argv=None) -> int:
    try:
        code = run(argv)
    except (ModelError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        code = 2
    except IoFailure as e:
        sys.stderr.write(f"error: {e}\n")
        code = 2
    return code


if __name__ == "__main__":
    sys.exit(main())
