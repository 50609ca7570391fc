"""Command line front end.

Three commands: `eval` prints the closed-form EVM of one configuration
(optionally with a Monte Carlo cross-check), `verify` runs the full
verification suite, and `sweep` produces the built-in comparison tables
with gnuplot companions.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 numerical
failure (divergent moment, series out of range, quadrature accuracy),
3 verification found a disagreement.
"""

import argparse
import json
import sys
from pathlib import Path

from .model import ConfigError, Fading, NumericalError, SelectionRule, SystemConfig
from .simulate import DEFAULT_SEED, estimate_evm
from .sweep import (analytic_formula, emit_csv, emit_plot_script, formula_name,
                    preset, run_sweep)
from .verify import run_verification

_EVAL_DEFAULTS = {
    "L": 2, "M": 1, "rule": "max-sir", "fading": "rayleigh",
    "md": 1.0, "rho": 0.0, "samples": 200000, "seed": DEFAULT_SEED,
}


class _Parser(argparse.ArgumentParser):
    # surface usage mistakes through the same exit code as any other
    # invalid configuration
    def error(self, message):
        raise ConfigError(message)


def _add_config_flags(parser):
    parser.add_argument("--L", type=int, default=None, dest="L",
                        help="number of receive antennas")
    parser.add_argument("--M", type=int, default=None, dest="M",
                        help="number of interferers")
    parser.add_argument("--rule", choices=("max-sir", "max-signal"), default=None,
                        help="antenna selection rule")
    parser.add_argument("--fading", choices=("rayleigh", "nakagami"), default=None,
                        help="desired-channel fading law")
    parser.add_argument("--md", type=float, default=None,
                        help="Nakagami shape of the desired channel")
    parser.add_argument("--rho", type=float, default=None,
                        help="antenna correlation coefficient (two antennas)")


def build_parser():
    parser = _Parser(prog="scevm",
                     description="EVM of an interference-limited "
                                 "selection-combining receiver")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("eval", help="evaluate one configuration")
    _add_config_flags(cmd)
    cmd.add_argument("--config", default=None,
                     help="JSON file with the same keys as the flags; "
                          "flags take precedence")
    cmd.add_argument("--mc", action="store_true",
                     help="also run the channel simulator")
    cmd.add_argument("--samples", type=int, default=None,
                     help="Monte Carlo draws for --mc")
    cmd.add_argument("--seed", type=int, default=None, help="Monte Carlo seed")

    cmd = commands.add_parser("verify", help="run every verification layer")
    cmd.add_argument("--samples", type=int, default=1000000,
                     help="Monte Carlo draws per grid point")
    cmd.add_argument("--seed", type=int, default=DEFAULT_SEED)
    cmd.add_argument("--out", default=None,
                     help="write the Monte Carlo grid as CSV")

    cmd = commands.add_parser("sweep", help="run a built-in sweep family")
    cmd.add_argument("--preset", required=True, choices=("fig1", "fig2", "fig3"))
    cmd.add_argument("--samples", type=int, default=200000,
                     help="Monte Carlo draws per sweep point")
    cmd.add_argument("--seed", type=int, default=DEFAULT_SEED)
    cmd.add_argument("--out", default=None,
                     help="write CSV here plus a gnuplot script alongside")
    return parser


def _load_config_file(path):
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config file must hold a JSON object")
    unknown = sorted(set(data) - set(_EVAL_DEFAULTS))
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {unknown}; "
                          f"known keys are {sorted(_EVAL_DEFAULTS)}")
    return data


def _resolve_eval_settings(args):
    settings = dict(_EVAL_DEFAULTS)
    if args.config is not None:
        settings.update(_load_config_file(args.config))
    for key in _EVAL_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    return settings


def _system_config(settings):
    rule_token = str(settings["rule"]).replace("-", "_")
    try:
        rule = SelectionRule(rule_token)
    except ValueError:
        raise ConfigError(
            f"unknown rule {settings['rule']!r}; "
            f"choose max-sir or max-signal") from None
    kind = settings["fading"]
    shape = float(settings["md"])
    if kind == "rayleigh":
        if shape != 1.0:
            raise ConfigError("md is a nakagami parameter; rayleigh fixes it at 1")
        fading = Fading.rayleigh()
    elif kind == "nakagami":
        fading = Fading.nakagami(shape)
    else:
        raise ConfigError(f"unknown fading {kind!r}; choose rayleigh or nakagami")
    return SystemConfig(settings["L"], settings["M"], rule, fading,
                        float(settings["rho"]))


def _cmd_eval(args):
    settings = _resolve_eval_settings(args)
    cfg = _system_config(settings)
    exact = analytic_formula(cfg)
    print(f"L={cfg.antennas} M={cfg.interferers} rule={cfg.rule.value} "
          f"fading={cfg.fading.kind} m={cfg.fading.m:g} rho={cfg.rho:g}")
    if exact is None and not args.mc:
        raise ConfigError("no closed form covers this configuration; "
                          "re-run with --mc for a simulated value")
    if exact is None:
        print("analytic evm: none (configuration not covered by a closed form)")
    else:
        print(f"analytic evm: {exact:.15g} [{formula_name(cfg)}]")
    if args.mc:
        estimate = estimate_evm(cfg, int(settings["samples"]),
                                seed=int(settings["seed"]))
        line = (f"mc evm: {estimate.mean:.15g} +- {estimate.std_error:.3g} "
                f"({estimate.samples} samples")
        if exact is not None and estimate.std_error > 0.0:
            line += f", z = {(estimate.mean - exact) / estimate.std_error:+.2f}"
        print(line + ")")
    return 0


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _cmd_verify(args):
    print(f"grid samples per cell: {args.samples} "
          f"(std error scales as 1/sqrt(samples); pass line stays |z| <= 3)")
    report = run_verification(samples=args.samples, seed=args.seed)
    for check in report.checks:
        print(f"{'PASS' if check.passed else 'FAIL'} {check.name} | {check.detail}")
    if args.out is not None:
        _write_text(args.out, emit_csv(report.rows))
        print(f"wrote {args.out}")
    total = len(report.checks)
    good = sum(1 for check in report.checks if check.passed)
    print(f"{good}/{total} checks passed")
    return 0 if report.passed else 3


def _cmd_sweep(args):
    specs = preset(args.preset, samples=args.samples, seed=args.seed)
    rows = [row for spec in specs for row in run_sweep(spec)]
    csv_text = emit_csv(rows)
    if args.out is None:
        sys.stdout.write(csv_text)
        return 0
    _write_text(args.out, csv_text)
    plot_path = Path(args.out).with_suffix(".plot")
    _write_text(plot_path, emit_plot_script(specs, csv_name=Path(args.out).name))
    print(f"wrote {args.out} and {plot_path}")
    return 0


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_sweep(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
