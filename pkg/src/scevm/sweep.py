"""Parameter sweeps comparing closed-form EVM against Monte Carlo.

A sweep varies one axis of a base configuration, evaluates whichever
closed form covers each point, runs the channel simulator at the same
point with a seed derived from everything except the selection rule (so
rule comparisons share channel draws), and reports one row per point with
a z score. Rows serialize to CSV and to a gnuplot script for quick looks.
"""

import dataclasses
from dataclasses import dataclass

from . import analytic
from .model import (
    ConfigError,
    DivergentMomentError,
    Fading,
    SelectionRule,
    SystemConfig,
)
from .simulate import DEFAULT_SEED, derive_seed, estimate_evm

SWEEP_AXES = ("L", "M", "m_d", "rho")
CSV_HEADER = "L,M,rule,m_d,rho,analytic,mc_mean,mc_stderr,z_score,status"

STATUS_OK = "ok"
STATUS_UNSUPPORTED = "unsupported"
STATUS_DIVERGED = "diverged"


@dataclass(frozen=True)
class SweepSpec:
    """One swept curve: an axis, its values, and the fixed remainder."""

    axis: str
    values: tuple
    base: SystemConfig
    engines: tuple = ("analytic", "mc")
    samples: int = 200000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        values = tuple(self.values)
        if not values:
            raise ConfigError("values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"values must be strictly increasing, got {values}")
        object.__setattr__(self, "values", values)
        if not isinstance(self.base, SystemConfig):
            raise ConfigError("base must be a SystemConfig")
        engines = tuple(self.engines)
        if not engines or any(e not in ("analytic", "mc") for e in engines):
            raise ConfigError(
                f"engines must be a non-empty subset of ('analytic', 'mc'), got {engines}")
        object.__setattr__(self, "engines", engines)
        if not isinstance(self.samples, int) or self.samples < 2:
            raise ConfigError(f"samples must be an integer >= 2, got {self.samples!r}")


@dataclass(frozen=True)
class SweepRow:
    """One evaluated sweep point."""

    antennas: int
    interferers: int
    rule: str
    shape: float
    rho: float
    analytic: float = None
    mc_mean: float = None
    mc_stderr: float = None
    z_score: float = None
    status: str = STATUS_OK


def cell_seed(seed, cfg):
    """Per-point seed that deliberately ignores the selection rule.

    Sweeps and verification grids that differ only in the rule then see
    identical channel draws, so rule-ordering comparisons hold draw by
    draw instead of only in expectation.
    """
    return derive_seed(seed, cfg.antennas, cfg.interferers,
                       cfg.fading.kind, cfg.fading.m, cfg.rho)


def _dispatch(cfg):
    if not isinstance(cfg, SystemConfig):
        raise ConfigError("cfg must be a SystemConfig")
    if cfg.rho == 1.0:
        return "evm_fully_correlated", (cfg.interferers,)
    if cfg.rho > 0.0:
        if cfg.rule is SelectionRule.MAX_SIR:
            if cfg.interferers != 1:
                return None
            return "evm_max_sir_correlated", (cfg.rho,)
        return "evm_max_signal_correlated", (cfg.rho, cfg.interferers)
    if cfg.fading.is_rayleigh_equivalent:
        if cfg.rule is SelectionRule.MAX_SIR:
            return "evm_max_sir_rayleigh", (cfg.antennas, cfg.interferers)
        return "evm_max_signal_rayleigh", (cfg.antennas, cfg.interferers)
    if cfg.rule is SelectionRule.MAX_SIR:
        if cfg.interferers != 2:
            return None
        return "evm_max_sir_nakagami", (cfg.antennas, cfg.fading.m)
    if cfg.antennas != 2:
        return None
    return "evm_max_signal_nakagami", (cfg.fading.m, cfg.interferers)


def formula_name(cfg):
    """Name of the closed form covering cfg, or None when none does."""
    found = _dispatch(cfg)
    return None if found is None else found[0]


def analytic_formula(cfg):
    """Closed-form EVM for cfg, or None when no result covers it.

    Raises:
        DivergentMomentError: a formula covers cfg but the EVM is infinite.
    """
    found = _dispatch(cfg)
    if found is None:
        return None
    name, args = found
    # resolved per call so test hooks on the analytic module are honoured
    return getattr(analytic, name)(*args)


def _apply_axis(base, axis, value):
    if axis == "L":
        return dataclasses.replace(base, antennas=value)
    if axis == "M":
        return dataclasses.replace(base, interferers=value)
    if axis == "m_d":
        return dataclasses.replace(base, fading=Fading.nakagami(value))
    return dataclasses.replace(base, rho=value)


def run_sweep(spec):
    """Evaluate every point of a SweepSpec.

    Points whose configuration is invalid come back as `unsupported` with
    the swept coordinate filled in; points whose EVM is provably infinite
    come back as `diverged` and skip the simulator.  Valid points with no
    closed form stay `ok` with an empty analytic column, so the simulator
    still covers them.
    """
    rows = []
    for value in spec.values:
        try:
            cfg = _apply_axis(spec.base, spec.axis, value)
        except (ConfigError, ValueError):
            placeholder = {"L": spec.base.antennas, "M": spec.base.interferers,
                           "m_d": spec.base.fading.m, "rho": spec.base.rho}
            placeholder[spec.axis] = value
            rows.append(SweepRow(
                antennas=placeholder["L"], interferers=placeholder["M"],
                rule=spec.base.rule.value, shape=placeholder["m_d"],
                rho=placeholder["rho"], status=STATUS_UNSUPPORTED))
            continue
        status = STATUS_OK
        exact = None
        try:
            exact = analytic_formula(cfg)
        except DivergentMomentError:
            status = STATUS_DIVERGED
        mc_mean = mc_stderr = z_score = None
        if "mc" in spec.engines and status != STATUS_DIVERGED:
            estimate = estimate_evm(cfg, spec.samples, seed=cell_seed(spec.seed, cfg))
            mc_mean, mc_stderr = estimate.mean, estimate.std_error
            if exact is not None and mc_stderr > 0.0:
                z_score = (mc_mean - exact) / mc_stderr
        rows.append(SweepRow(
            antennas=cfg.antennas, interferers=cfg.interferers,
            rule=cfg.rule.value, shape=cfg.fading.m, rho=cfg.rho,
            analytic=exact if "analytic" in spec.engines else None,
            mc_mean=mc_mean, mc_stderr=mc_stderr, z_score=z_score,
            status=status))
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(value, ".12g")


def emit_csv(rows):
    """Serialize sweep rows to CSV text with a fixed header and '\\n' endings."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_cell(v) for v in (
            row.antennas, row.interferers, row.rule, row.shape, row.rho,
            row.analytic, row.mc_mean, row.mc_stderr, row.z_score, row.status)))
    return "\n".join(lines) + "\n"


_AXIS_COLUMN = {"L": 1, "M": 2, "m_d": 4, "rho": 5}


def _spec_label(spec):
    parts = [spec.base.rule.value]
    if spec.axis != "L" and spec.base.antennas != 2:
        parts.append(f"L={spec.base.antennas}")
    if spec.axis != "M":
        parts.append(f"M={spec.base.interferers}")
    if spec.axis != "m_d" and spec.base.fading.kind == "nakagami":
        parts.append(f"m={spec.base.fading.m:g}")
    if spec.axis != "rho" and spec.base.rho > 0.0:
        parts.append(f"rho={spec.base.rho:g}")
    return " ".join(parts)


def emit_plot_script(specs, csv_name="sweep.csv"):
    """Gnuplot commands for the CSV produced from `specs` by emit_csv.

    Assumes the CSV concatenates the specs' rows in order. Each spec
    becomes an analytic line plus Monte Carlo error bars.
    """
    specs = list(specs)
    if not specs:
        raise ConfigError("specs must be non-empty")
    axes = {spec.axis for spec in specs}
    if len(axes) != 1:
        raise ConfigError(f"specs plot on a common axis, got {sorted(axes)}")
    axis = specs[0].axis
    column = _AXIS_COLUMN[axis]
    lines = [
        "set datafile separator ','",
        f"set xlabel '{axis}'",
        "set ylabel 'EVM'",
        "set key top left",
        "plot \\",
    ]
    clauses = []
    first_row = 1  # data line 0 is the header
    for spec in specs:
        last_row = first_row + len(spec.values) - 1
        label = _spec_label(spec)
        span = f"every ::{first_row}::{last_row}"
        clauses.append(f"  '{csv_name}' {span} using {column}:6 "
                       f"with lines title '{label}'")
        if "mc" in spec.engines:
            clauses.append(f"  '{csv_name}' {span} using {column}:7:8 "
                           f"with yerrorbars notitle")
        first_row = last_row + 1
    lines.append(", \\\n".join(clauses))
    return "\n".join(lines) + "\n"


def preset(name, samples=200000, seed=DEFAULT_SEED):
    """Built-in sweep families; returns a list of SweepSpec.

    fig1: EVM against antenna count under max-SIR selection, two
        interferers, desired-channel shapes 0.5, 1, 2.
    fig2: EVM against antenna correlation for both rules, two antennas,
        one interferer.
    fig3: EVM against the desired-channel shape under max-signal
        selection, two antennas, 1, 2, and 4 interferers.
    """
    if name == "fig1":
        return [SweepSpec(axis="L", values=(1, 2, 3, 4, 5, 6),
                          base=SystemConfig(1, 2, SelectionRule.MAX_SIR,
                                            Fading.nakagami(m)),
                          samples=samples, seed=seed)
                for m in (0.5, 1.0, 2.0)]
    if name == "fig2":
        rhos = (0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9, 0.95, 0.99)
        return [SweepSpec(axis="rho", values=rhos,
                          base=SystemConfig(2, 1, rule),
                          samples=samples, seed=seed)
                for rule in (SelectionRule.MAX_SIR, SelectionRule.MAX_SIGNAL)]
    if name == "fig3":
        shapes = (0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0)
        return [SweepSpec(axis="m_d", values=shapes,
                          base=SystemConfig(2, m_count, SelectionRule.MAX_SIGNAL,
                                            Fading.nakagami(1.0)),
                          samples=samples, seed=seed)
                for m_count in (1, 2, 4)]
    raise ConfigError(f"unknown preset {name!r}; choose fig1, fig2, or fig3")
