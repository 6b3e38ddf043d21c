"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage or configuration parse
error.  Diagnostics go to stderr; data to files or stdout.
"""

import argparse
import io
import sys
from importlib import resources

from . import __version__
from .calibrate import calibrate, load_anchors
from .config import parse_config_file
from .errors import ConfigError, QkdMetroError
from .keyrate import optimize_mu
from .network import evaluate_link, with_overrides, build_light_path
from .optical_path import path_loss
from .sweep import aes_rekey, run_sweep, write_csv
from .svgchart import sweep_svg


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qkdmetro",
        description="QKD feasibility planner for shared metro optical networks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a distance sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output CSV path, or - for stdout")
    p.add_argument("--svg", help="also write a dual-axis SVG chart")
    p.add_argument("--strict", action="store_true",
                   help="abort on per-point errors instead of recording zero rate")

    p = sub.add_parser("calibrate", help="fit noise parameters to anchors")
    p.add_argument("--config", required=True)
    p.add_argument("--anchors", default=None,
                   help="anchor CSV file (default: bundled measured anchors)")
    p.add_argument("--out", required=True, help="fitted parameter file, or -")
    p.add_argument("--free", default="rho,launch_dbm",
                   help="comma-separated free parameters (default rho,launch_dbm)")

    p = sub.add_parser("optimize-mu", help="search the optimal signal intensity")
    p.add_argument("--config", required=True)
    p.add_argument("--length-km", type=float, default=0.0)

    p = sub.add_parser("rekey", help="bits encrypted per AES key")
    p.add_argument("--total-bps", type=float, required=True)
    p.add_argument("--key-rate", type=float, required=True)
    p.add_argument("--key-bits", type=int, required=True)

    p = sub.add_parser("path-loss", help="path loss at a wavelength")
    p.add_argument("--config", required=True)
    p.add_argument("--wavelength", type=float, required=True)
    p.add_argument("--length-km", type=float, default=0.0)
    return parser


def _cmd_sweep(args):
    scenario, spec = parse_config_file(args.config)
    records = run_sweep(scenario, spec, strict=args.strict)
    if args.out == "-":
        write_csv(records, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_csv(records, fh)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(sweep_svg(records, title=f"{scenario.kind} sweep"))
    return 0


def _cmd_calibrate(args):
    scenario, _ = parse_config_file(args.config)
    if args.anchors is None:
        text = resources.files("qkdmetro").joinpath("data/measured_anchors.csv").read_text()
        anchors = load_anchors(io.StringIO(text))
    else:
        with open(args.anchors, encoding="utf-8") as fh:
            anchors = load_anchors(fh)
    free = [name.strip() for name in args.free.split(",") if name.strip()]
    result = calibrate(scenario, anchors, free)
    lines = [f"{name} = {value!r}" for name, value in sorted(result.params.items())]
    lines.append(f"# weighted residual = {result.residual!r}")
    for anchor, res in zip(result.anchors, result.residuals):
        lines.append(f"# anchor {anchor.scenario} {anchor.observable}"
                     f"@{anchor.length_km} km: residual {res:.6g}")
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _cmd_optimize_mu(args):
    scenario, _ = parse_config_file(args.config)
    ratio = scenario.decoy.nu / scenario.decoy.mu

    def rate_of_mu(mu):
        s = with_overrides(scenario, mu=mu, nu=mu * ratio)
        return evaluate_link(s, args.length_km, on_collapse="zero").rates.secret_bps

    mu_star = optimize_mu(rate_of_mu)
    print(repr(mu_star))
    return 0


def _cmd_rekey(args):
    print(repr(aes_rekey(args.total_bps, args.key_rate, args.key_bits)))
    return 0


def _cmd_path_loss(args):
    scenario, _ = parse_config_file(args.config)
    path = build_light_path(scenario, args.length_km)
    print(repr(path_loss(path, args.wavelength)))
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "calibrate": _cmd_calibrate,
    "optimize-mu": _cmd_optimize_mu,
    "rekey": _cmd_rekey,
    "path-loss": _cmd_path_loss,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QkdMetroError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
