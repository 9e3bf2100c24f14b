"""Command-line interface.

Exit codes: 0 success, 2 validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

import numpy as np

from . import bell, embedding, positive_maps, simplex, tomography
from .documents import canonical_float, dumps, load, to_document
from .errors import NumericalError, ValidationError
from .hermitian import random_unitary

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return f"{canonical_float(x):.15g}"


def parse_radians(text: str) -> float:
    """A bare number in radians.  Anything with a unit suffix is rejected."""
    t = text.strip()
    if re.search(r"(deg|°|grad|rad)", t, re.IGNORECASE):
        raise ValidationError(f"angle {text!r}: give a bare number in radians (no units)")
    try:
        return float(t)
    except ValueError as exc:
        raise ValidationError(f"angle {text!r} is not a number") from exc


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_doc(args, obj, kind=None):
    _emit(args, dumps(to_document(obj, kind)))


def _state(args):
    return load(args.state, "density") if args.state else bell.bell_state()


def _need(args, name, count=None):
    val = getattr(args, name)
    if not val or (count is not None and len(val) != count):
        flag = "--" + name.replace("_", "-")
        need = f"{count} x {flag}" if count else flag
        raise ValidationError(f"{args.command}: requires {need}")
    return val


def cmd_decompose(args):
    _emit_doc(args, positive_maps.decompose(load(_need(args, "state"), "density")))


def cmd_recompose(args):
    _emit_doc(args, positive_maps.recompose(load(_need(args, "pair"), "pair")))


def cmd_tomogram(args):
    rho = load(_need(args, "state"), "density")
    (u,) = _need(args, "unitary", 1)
    _emit_doc(args, tomography.tomogram(rho, load(u, "unitary")).probabilities)


def cmd_joint_tomogram(args):
    rho = load(_need(args, "state"), "density")
    uh, uk = _need(args, "unitary", 2)
    _emit_doc(args, tomography.joint_tomogram(rho, load(uh, "unitary"), load(uk, "unitary")).probabilities)


def cmd_ostoch(args):
    u, u0 = _need(args, "unitary", 2)
    _emit_doc(args, tomography.orthostochastic_from(load(u, "unitary"), load(u0, "unitary")))


def cmd_reconstruct(args):
    samples = load(_need(args, "input")[0], "samples")
    dim = args.dim or samples[0].frame.dim
    result = tomography.reconstruct(samples, dim)
    print(
        f"residual={_fmt(result.residual)} projection_distance={_fmt(result.projection_distance)}",
        file=sys.stderr,
    )
    _emit_doc(args, result.state)


def cmd_map(args):
    if args.pair:
        pair = load(args.pair, "pair")
    else:
        pair = positive_maps.decompose(load(_need(args, "state"), "density"))
    (v,) = _need(args, "unitary", 1)
    spec = positive_maps.PositiveMapSpec(load(v, "unitary"), load(_need(args, "matrix"), "stochastic"))
    _emit_doc(args, positive_maps.apply_positive_map(pair, spec))


def cmd_perron(args):
    _emit_doc(args, simplex.perron_vector(load(_need(args, "matrix"), "stochastic"), tol=args.tol))


def cmd_cesaro(args):
    if args.n < 1:
        raise ValidationError("cesaro: --n must be >= 1")
    _emit_doc(args, simplex.cesaro_limit(load(_need(args, "matrix"), "stochastic"), args.n), "real")


def cmd_power_limit(args):
    result = simplex.power_limit(load(_need(args, "matrix"), "stochastic"), tol=args.tol, max_k=args.max_k)
    print(f"steps={result.steps}", file=sys.stderr)
    _emit_doc(args, result.matrix)


def cmd_embed(args):
    _emit_doc(args, embedding.embed(load(_need(args, "matrix"), ("stochastic", "real"))))


def cmd_extract(args):
    block = load(_need(args, "input")[0], "affine")
    _emit_doc(args, embedding.extract(block), "real")


def cmd_orbit_check(args):
    v_path, w_path = _need(args, "input", 2)
    inside = simplex.bistochastic_orbit_contains(load(v_path, "probability"), load(w_path, "probability"))
    _emit(args, ("true" if inside else "false") + "\n")


def cmd_bell_state(args):
    _emit_doc(args, bell.bell_state())


def _setting_from_args(args):
    if args.angles:
        az = [parse_radians(x) for x in args.angles.split(",")]
        if len(az) != 4:
            raise ValidationError("--angles needs four comma-separated azimuths a,b,c,d")
        po = [np.pi / 2] * 4
        if args.polars:
            po = [parse_radians(x) for x in args.polars.split(",")]
            if len(po) != 4:
                raise ValidationError("--polars needs four comma-separated values a,b,c,d")
        return bell.BellSetting.from_angles(az, po)
    frames = _need(args, "unitary", 4)
    return bell.BellSetting(*(load(f, "unitary") for f in frames))


def cmd_setting_matrix(args):
    _emit_doc(args, bell.setting_matrix(_state(args), _setting_from_args(args)))


def cmd_bell_number(args):
    _emit(args, _fmt(bell.bell_number(load(_need(args, "matrix"), ("stochastic", "real")))) + "\n")


def cmd_bell_scan(args):
    result = bell.chsh_scan(_state(args), args.grid, refine=args.refine, full=args.full)
    header = ["phi_a", "phi_b", "phi_c", "phi_d"]
    if args.full:
        header += ["theta_a", "theta_b", "theta_c", "theta_d"]
    lines = [",".join(header + ["B"])]

    def row(az, po, b):
        vals = list(az) + (list(po) if args.full else [])
        return ",".join(_fmt(x) for x in vals + [b])

    lines.append(row(result.grid_azimuths, result.grid_polars, result.grid_b))
    if args.refine:
        lines.append(row(result.azimuths, result.polars, result.max_b))
    lines.append(f"# max_B={_fmt(result.max_b)} cirelson={_fmt(bell.CIRELSON)} grid={args.grid} refined={str(args.refine).lower()}")
    _emit(args, "\n".join(lines) + "\n")


def cmd_universal(args):
    _emit_doc(args, bell.universal_matrix())


def cmd_random_unitary(args):
    seed = args.seed
    if seed is None:
        env = os.environ.get("QTOMO_SEED")
        if env is None:
            raise ValidationError("random-unitary: pass --seed or set QTOMO_SEED")
        try:
            seed = int(env)
        except ValueError as exc:
            raise ValidationError(f"QTOMO_SEED={env!r} is not an integer") from exc
    _emit_doc(args, random_unitary(args.dim, seed))


COMMANDS = {
    "decompose": cmd_decompose,
    "recompose": cmd_recompose,
    "tomogram": cmd_tomogram,
    "joint-tomogram": cmd_joint_tomogram,
    "ostoch": cmd_ostoch,
    "reconstruct": cmd_reconstruct,
    "map": cmd_map,
    "perron": cmd_perron,
    "cesaro": cmd_cesaro,
    "power-limit": cmd_power_limit,
    "embed": cmd_embed,
    "extract": cmd_extract,
    "orbit-check": cmd_orbit_check,
    "bell-state": cmd_bell_state,
    "setting-matrix": cmd_setting_matrix,
    "bell-number": cmd_bell_number,
    "bell-scan": cmd_bell_scan,
    "universal": cmd_universal,
    "random-unitary": cmd_random_unitary,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtomo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--in", dest="input", action="append", help="input document")
        p.add_argument("--state", help="density document")
        p.add_argument("--unitary", action="append", help="unitary document (repeatable)")
        p.add_argument("--matrix", help="stochastic or real matrix document")
        p.add_argument("--pair", help="spectral pair document")
        if name in ("perron",):
            p.add_argument("--tol", type=float, default=simplex.PERRON_TOL)
        if name == "power-limit":
            p.add_argument("--tol", type=float, default=1e-10)
            p.add_argument("--max-k", type=int, default=10_000)
        if name == "cesaro":
            p.add_argument("--n", type=int, required=True)
        if name == "reconstruct":
            p.add_argument("--dim", type=int)
        if name == "setting-matrix":
            p.add_argument("--angles", help="azimuths a,b,c,d in radians")
            p.add_argument("--polars", help="polar angles a,b,c,d in radians (default pi/2)")
        if name == "bell-scan":
            p.add_argument("--grid", type=int, default=64)
            p.add_argument("--refine", action="store_true")
            p.add_argument("--full", action="store_true", help="scan polar angles as well")
        if name == "random-unitary":
            p.add_argument("--dim", type=int, required=True)
            p.add_argument("--seed", type=int)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
