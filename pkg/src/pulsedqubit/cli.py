"""Command-line entry point: ``pulsedqubit {evolve,measure,figure,validate,plot}``.

Drive and state parameters come from flags, optionally preceded by a flat
TOML table given with ``--config`` (keys mirror the flag names). Explicit
flags win over the config file. Angles accept expressions such as ``pi/4``.
"""
from __future__ import annotations

import argparse
import ast
import csv
import math
import operator
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import harness, svgplot, validation
from .errors import PulsedQubitError
from .harness import RunSpec, fmt
from .measures import DEFAULT_EXCHANGE, ExchangeMode, Measure

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
        ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text) -> float:
    """Float from a literal or a small arithmetic expression in ``pi``."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression: {text!r}")

    try:
        return ev(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"bad number {text!r}: {e}") from e
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


# flag dest -> (config key, built-in default)
PARAMS = {
    "omega": ("omega", 1.0),
    "delta": ("delta", 0.0),
    "omega_l": ("omega-l", 1.0),
    "lam": ("lambda", 0.0),
    "pulse_duration": ("pulse-duration", None),
    "theta": ("theta", math.pi / 2),
    "phi": ("phi", math.pi / 2),
    "tau_start": ("tau-start", 0.0),
    "tau_end": ("tau-end", 15.0),
    "n_points": ("n-points", 2001),
    "scheme": ("scheme", "RWA"),
    "exchange_mode": ("exchange-mode", DEFAULT_EXCHANGE.value),
    "out": ("out", "."),
}


def load_config(path) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as f:
        raw = tomllib.load(f)
    known = {key: dest for dest, (key, _) in PARAMS.items()}
    known.update({dest: dest for dest in PARAMS})
    cfg = {}
    for k, v in raw.items():
        if k not in known:
            raise PulsedQubitError(f"{path}: unknown config key {k!r}")
        cfg[known[k]] = v
    return cfg


def resolve(args, name):
    v = getattr(args, name, None)
    if v is not None:
        return v
    v = args.config_values.get(name)
    if v is None:
        return PARAMS[name][1]
    if name == "n_points":
        return int(v)
    if name in ("scheme", "exchange_mode", "out"):
        return v
    return parse_number(v)


def _add_common(p, grid=True, params=True):
    p.add_argument("--config", help="flat TOML table mirroring the flag names")
    p.add_argument("--out", help="output directory (default: .)")
    if params:
        p.add_argument("--omega", type=parse_number, help="Rabi frequency Omega")
        p.add_argument("--delta", type=parse_number, help="detuning Delta = omega_a - omega_l")
        p.add_argument("--omega-l", dest="omega_l", type=parse_number, help="laser frequency omega_l")
        p.add_argument("--lambda", dest="lam", type=parse_number, help="counter-rotating parameter lambda")
        p.add_argument("--pulse-duration", type=parse_number, help="pulse length T (default tau_end/Omega)")
        p.add_argument("--theta", type=parse_number, help="polar angle of the initial coherent state")
        p.add_argument("--phi", type=parse_number, help="phase of the initial coherent state")
        p.add_argument("--scheme", choices=harness.SCHEMES)
    if grid:
        p.add_argument("--tau-start", type=parse_number)
        p.add_argument("--tau-end", type=parse_number)
        p.add_argument("--n-points", type=int)


def _spec_kwargs(args):
    keys = ("omega", "delta", "omega_l", "lam", "pulse_duration", "theta", "phi", "tau_start", "tau_end", "n_points", "scheme")
    return {k: resolve(args, k) for k in keys}


def cmd_evolve(args):
    spec = RunSpec(**_spec_kwargs(args), name=args.name or "evolve")
    taus, states, _ = harness.evolve_variant(spec, {})
    out = Path(resolve(args, "out"))
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{spec.name}.csv"
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# run={spec.name}\n# scheme={spec.scheme}\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["tau", "ux", "uy", "uz"])
        for tau, u in zip(taus, states):
            w.writerow([fmt(tau)] + [fmt(x) for x in u])
    print(path)


def _measures(args, mode: ExchangeMode):
    kinds = args.measure or ["fidelity"]
    out = []
    for k in kinds:
        if k == "overlap":
            pairs = [(i, j) for i in (1, 2) for j in (1, 2)] if args.all_overlaps else [tuple(int(c) for c in args.overlap)]
            out += [Measure("overlap", i=i, j=j) for i, j in pairs]
        else:
            out.append(Measure(k, exchange_mode=mode))
    return tuple(out)


def _note_mode(measures, mode):
    if any(m.kind == "exchange" for m in measures):
        print(f"exchange mode: {mode.value}", file=sys.stderr)


def cmd_measure(args):
    mode = ExchangeMode(resolve(args, "exchange_mode"))
    measures = _measures(args, mode)
    _note_mode(measures, mode)
    spec = RunSpec(**_spec_kwargs(args), measures=measures, name=args.name or "measure")
    for path in harness.run(spec, resolve(args, "out"), log2=args.log2):
        print(path)


def cmd_figure(args):
    mode = ExchangeMode(resolve(args, "exchange_mode"))
    names = harness.FIGURE_PRESETS if args.preset == "all" else [args.preset]
    # a bare figure number selects all its panels
    if args.preset not in harness.PRESETS and args.preset != "all":
        names = [n for n in harness.FIGURE_PRESETS if n[:-1] == args.preset] or [args.preset]
    overrides = {k: resolve(args, k) for k in ("tau_end", "n_points") if getattr(args, k) is not None or k in args.config_values}
    out = resolve(args, "out")
    for name in names:
        spec = harness.preset_spec(name, all_overlaps=args.all_overlaps, exchange_mode=mode, **overrides)
        _note_mode(spec.measures, mode)
        for path in harness.run(spec, out, log2=args.log2):
            print(path)
            if args.svg:
                print(svgplot.plot(path, path.with_suffix(".svg")))


def cmd_validate(args):
    checks = validation.validate(args.level)
    print(validation.format_report(checks))
    return 1 if any(c.passed is False for c in checks) else 0


def cmd_plot(args):
    print(svgplot.plot(args.csv, args.svg))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulsedqubit", description="Driven two-level system: closed-form Bloch propagators, RK4 oracle, figure presets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="Bloch-vector trajectory to CSV")
    _add_common(p)
    p.add_argument("--name")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("measure", help="fidelity / exchange / overlap series to CSV")
    _add_common(p)
    p.add_argument("--measure", action="append", choices=("fidelity", "exchange", "overlap"))
    p.add_argument("--exchange-mode", choices=[m.value for m in ExchangeMode])
    p.add_argument("--overlap", default="11", choices=("11", "12", "21", "22"), help="Sp_ij component")
    p.add_argument("--all-overlaps", action="store_true")
    p.add_argument("--log2", action="store_true", help="report exchange information in bits")
    p.add_argument("--name")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("figure", help="reproduce the data behind a figure panel")
    p.add_argument("preset", help=f"one of {', '.join(harness.PRESETS)}, a figure (fig1..fig7) or 'all'")
    _add_common(p, params=False)
    p.add_argument("--exchange-mode", choices=[m.value for m in ExchangeMode])
    p.add_argument("--all-overlaps", action="store_true")
    p.add_argument("--log2", action="store_true")
    p.add_argument("--svg", action="store_true", help="also write an SVG next to each CSV")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="closed forms vs RK4 oracle report")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_validate, config=None)

    p = sub.add_parser("plot", help="SVG line chart from a run CSV")
    p.add_argument("csv")
    p.add_argument("svg")
    p.set_defaults(func=cmd_plot, config=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.config_values = load_config(args.config)
        return args.func(args) or 0
    except (PulsedQubitError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
