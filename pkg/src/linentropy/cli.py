"""Command-line interface.

Exit codes: 0 success, 1 a bound is violated, 2 invalid input or
unusable output path, 3 numerical failure.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, extremal, verify
from .errors import LinentropyError, NumericalError
from .states import Tolerances, load_state, marginal_entropies, save_state, state_to_json

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
FORMS = ("linear", "renyi", "purity", "inverted")


class UsageError(LinentropyError):
    pass


def parse_dims(text):
    """``"NxM"`` or ``"NxMxK"`` -> tuple of ints >= 2."""
    parts = str(text).lower().split("x")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 2x3 or 2x2x2, got {text!r}")
    if len(dims) not in (2, 3) or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError(f"dims must be 2 or 3 factors >= 2, got {text!r}")
    return dims


def _bipartite(dims):
    if len(dims) != 2:
        raise UsageError(f"this command needs bipartite dims, got {'x'.join(map(str, dims))}")
    return dims


# ---------------------------------------------------------------------------
# surfaces

def _grid(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [min(lo + i * step, hi) for i in range(n + 1)]


def surface_rows(dims, step, form="linear"):
    """Rows ``(x, y, bound, branch)`` of the chosen bound on a rectangular grid.

    Except for the inverted form, the switching curve is appended as well,
    traced by the line family at ``alpha`` in multiples of ``step`` and
    marked with branch ``"omega"``.
    """
    if form not in FORMS:
        raise UsageError(f"unknown form {form!r}")
    if not step > 0:
        raise UsageError(f"grid step must be positive, got {step}")
    d = bounds.as_dims(dims)
    if form == "renyi":
        xs, ys = _grid(0.0, math.log2(d.d_a), step), _grid(0.0, math.log2(d.d_b), step)
    elif form == "purity":
        xs, ys = _grid(1.0 / d.d_a, 1.0, step), _grid(1.0 / d.d_b, 1.0, step)
    else:
        xs, ys = _grid(0.0, d.D_a, step), _grid(0.0, d.D_b, step)
    x, y = (a.ravel() for a in np.meshgrid(xs, ys, indexing="ij"))

    if form == "linear":
        val, tag = bounds.sharp_f(x, y, d)
    elif form == "renyi":
        val, tag = bounds.renyi_f(x, y, d)
    elif form == "purity":
        val = bounds.purity_f(x, y, d)
        tag = bounds.branch_tag(1.0 - x, 1.0 - y, d)
    else:
        val, tag = bounds.inverted_lower_f(x, y, d)
    rows = [(float(a), float(b), float(v), str(t)) for a, b, v, t in zip(x, y, val, tag)]

    if form != "inverted":
        alphas = np.array(_grid(0.0, 1.0, step))
        ox, oy, oz = (np.asarray(v) for v in extremal.isa_family_entropies(alphas, d))
        if form == "renyi":
            ox, oy, oz = -np.log2(1 - ox), -np.log2(1 - oy), -np.log2(1 - oz)
        elif form == "purity":
            ox, oy, oz = 1 - ox, 1 - oy, 1 - oz
        rows += [(float(a), float(b), float(v), bounds.OMEGA) for a, b, v in zip(ox, oy, oz)]
    return rows


def _write_csv(header, rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])


# ---------------------------------------------------------------------------
# subcommands

def _emit(text, output):
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _tolerances(args):
    return Tolerances(herm=args.tol_herm, trace=Tolerances().trace, psd=args.tol_psd)


def _fmt(v):
    return "n/a" if v is None else f"{v:.6g}"


def cmd_check(args):
    rho = load_state(args.state, _tolerances(args))
    _bipartite(rho.dims)
    report = bounds.evaluate_all(rho)
    if args.format == "json" or args.output:
        _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
              args.output)
    if args.format != "json":
        print(f"dims {report.dims}  S_A={report.x:.6g}  S_B={report.y:.6g}  S_AB={report.z:.6g}")
        for r in report.records:
            mark = "ok" if r.satisfied else "VIOLATED"
            branch = f" [{r.branch}]" if r.branch else ""
            print(f"  {r.name:<14}{r.kind:<6} bound={_fmt(r.value)} slack={_fmt(r.slack)}"
                  f"{branch} {mark}")
        print(f"  nonclassical witness: {'yes' if report.witness else 'no'}")
    return EXIT_OK if report.all_satisfied else EXIT_VIOLATION


def cmd_witness(args):
    rho = load_state(args.state, _tolerances(args))
    _bipartite(rho.dims)
    x, y, z = marginal_entropies(rho)
    witness = x > z or y > z
    if args.format == "json":
        print(json.dumps({"x": x, "y": y, "z": z, "witness": witness}, sort_keys=True))
    else:
        verdict = "nonclassical" if witness else "no witness"
        print(f"{verdict}: S_A={x:.6g} S_B={y:.6g} S_AB={z:.6g}")
    return EXIT_OK


def cmd_sample(args):
    config = verify.SamplerConfig(
        dims=args.dims, ensemble=args.ensemble, samples=args.samples, seed=args.seed,
        workers=args.workers, rank=args.rank, inject=args.inject)
    out = args.output or "linentropy-run"
    report = verify.run_campaign(config, out)
    print(f"{config.samples + config.inject} samples, {report.violations} violations, "
          f"min slack {report.min_slack:.3e}; records in {out}")
    if report.io_error:
        print(f"error: output incomplete: {report.io_error}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if report.violations == 0 else EXIT_VIOLATION


def cmd_surface(args):
    dims = _bipartite(args.dims)
    rows = surface_rows(dims, args.grid, args.form)
    if args.format == "json":
        text = json.dumps([dict(zip(("x", "y", "bound", "branch"), r)) for r in rows]) + "\n"
    else:
        buf = io.StringIO()
        _write_csv(("x", "y", "bound", "branch"), rows, buf)
        text = buf.getvalue()
    _emit(text, args.output)
    return EXIT_OK


def cmd_extremal(args):
    dims = _bipartite(args.dims)
    if args.sweep is not None:
        rows = extremal.family_sweep(args.family, dims, args.sweep, beta=args.beta)
        buf = io.StringIO()
        _write_csv(("alpha", "beta", "x", "y", "z", "slack"), rows, buf)
        _emit(buf.getvalue(), args.output)
        bad = any(r[-1] < -bounds.VIOLATION_TOL for r in rows)
        return EXIT_VIOLATION if bad else EXIT_OK
    if args.alpha is None:
        raise UsageError("--alpha is required unless --sweep is given")
    rho = extremal.family_state(extremal.ExtremalParams(args.family, args.alpha, args.beta), dims)
    x, y, z = marginal_entropies(rho)
    f, tag = bounds.sharp_f(x, y, dims)
    slack = f - z
    if args.output:
        try:
            save_state(rho, args.output)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc}") from exc
    elif args.format == "json":
        print(json.dumps(state_to_json(rho)))
    print(f"{args.family} alpha={args.alpha} beta={args.beta}: point ({x:.10g}, {y:.10g}, "
          f"{z:.10g}), sharp bound {f:.10g} [{tag}], slack {slack:.3e}",
          file=sys.stderr if args.format == "json" and not args.output else sys.stdout)
    return EXIT_OK if slack >= -bounds.VIOLATION_TOL else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys supply defaults for the flags")
    common.add_argument("--tol-herm", type=float, default=1e-10)
    common.add_argument("--tol-psd", type=float, default=1e-10)
    common.add_argument("--output", "-o")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = argparse.ArgumentParser(prog="linentropy",
                                description="Linear-entropy bounds for bipartite states.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="evaluate every bound on a state file")
    c.add_argument("state")
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("witness", parents=[common], help="nonclassicality verdict for a state")
    w.add_argument("state")
    w.set_defaults(func=cmd_witness)

    s = sub.add_parser("sample", parents=[common], help="random-state verification campaign")
    s.add_argument("--dims", type=parse_dims, required=True)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--ensemble", choices=verify.ENSEMBLES, default="hs")
    s.add_argument("--rank", type=int)
    s.add_argument("--inject", type=int, default=0,
                   help="extra boundary states from the extremal families")
    s.set_defaults(func=cmd_sample)

    f = sub.add_parser("surface", parents=[common], help="CSV grid of a bound")
    f.add_argument("--dims", type=parse_dims, required=True)
    f.add_argument("--grid", type=float, default=0.05)
    f.add_argument("--form", choices=FORMS, default="linear")
    f.set_defaults(func=cmd_surface)

    e = sub.add_parser("extremal", parents=[common], help="build a boundary-saturating state")
    e.add_argument("--dims", type=parse_dims, required=True)
    e.add_argument("--family", choices=(extremal.ISA_LINE, extremal.DSSA_SIMPLEX,
                                        extremal.MIX_LINE), required=True)
    e.add_argument("--alpha", type=float)
    e.add_argument("--beta", type=float, default=0.0)
    e.add_argument("--sweep", type=float, help="grid step; emit the CSV sweep instead")
    e.set_defaults(func=cmd_extremal)
    return p


def _parse(parser, argv):
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    subparsers = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in subparsers), None)
    if known.config and command:
        try:
            cfg = json.loads(Path(known.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {known.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        sub = subparsers[command]
        actions = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in cfg.items():
            dest = key.replace("-", "_")
            if dest not in actions or dest in ("help", "config"):
                raise UsageError(f"unknown config key {key!r} for {command}")
            if dest == "dims" and isinstance(value, str):
                value = parse_dims(value)
            defaults[dest] = value
            actions[dest].required = False
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    try:
        args = _parse(parser, argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (LinentropyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
