"""Self-contained verification of every closed form in this package.

Checks are layered from cheap to expensive: exact anchor values, closed
form against closed form where parameter ranges overlap, closed form
against direct quadrature of the defining integral, shape properties
(monotonicity, rule ordering, the many-interferer asymptote), then a
Monte Carlo grid over all supported configuration families, and finally
the symbol-level simulator that re-derives EVM from demodulated
waveforms rather than channel powers.

The Monte Carlo grid seeds each point from everything but the selection
rule, so the two rules are compared on identical channel draws and the
max-SIR rule must win draw by draw, not merely on average.
"""

import math
from dataclasses import dataclass

from . import analytic
from .model import Fading, SelectionRule, SystemConfig
from .quadrature import integrate_semi_infinite
from .simulate import (
    DEFAULT_SEED,
    derive_seed,
    estimate_evm,
    estimate_evm_symbol_level,
)
from .sweep import SweepRow, analytic_formula, cell_seed

_ANCHOR_TOL = 1e-10
_Z_LIMIT = 3.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple
    rows: tuple
    passed: bool


def _close(name, got, want, tol):
    err = abs(got - want)
    return CheckResult(name, err <= tol,
                       f"got {got:.12g}, want {want:.12g}, |err| {err:.3g} <= {tol:g}")


def anchor_checks():
    """Closed forms at parameters where the EVM is an exact constant."""
    quarter = math.pi / 4.0
    return [
        _close("anchor max_sir L=1 M=1",
               analytic.evm_max_sir_rayleigh(1, 1), 2.0 * quarter, _ANCHOR_TOL),
        _close("anchor max_sir L=2 M=1",
               analytic.evm_max_sir_rayleigh(2, 1), quarter, _ANCHOR_TOL),
        _close("anchor max_signal L=1 M=1",
               analytic.evm_max_signal_rayleigh(1, 1), 2.0 * quarter, _ANCHOR_TOL),
        _close("anchor max_signal L=2 M=1",
               analytic.evm_max_signal_rayleigh(2, 1),
               math.pi * (1.0 - 1.0 / math.sqrt(2.0)), _ANCHOR_TOL),
    ]


def quadrature_identity_checks():
    """Alternating-sum closed form against its defining integral.

    The EVM equals the integral over x of the selected-SIR CDF at x^-2;
    evaluating that integral numerically exercises none of the term
    rearrangement behind the closed form.
    """
    checks = []
    fading = Fading.rayleigh()
    for antennas in (1, 2, 3):
        for interferers in (1, 2, 4):
            closed = analytic.evm_max_sir_rayleigh(antennas, interferers)

            def integrand(x, _l=antennas, _m=interferers):
                if x == 0.0:
                    return 1.0
                return analytic.sir_cdf_single_antenna(x ** -2.0, _m, fading) ** _l

            direct = integrate_semi_infinite(integrand).value
            checks.append(_close(
                f"defining-integral max_sir L={antennas} M={interferers}",
                direct, closed, 1e-7))
    return checks


def reduction_checks():
    """Each general result against the special case it must contain."""
    checks = []
    for antennas in (1, 2, 3, 4):
        checks.append(_close(
            f"reduction nakagami-sir m=1 L={antennas}",
            analytic.evm_max_sir_nakagami(antennas, 1.0),
            analytic.evm_max_sir_rayleigh(antennas, 2), 1e-6))
    for interferers in (1, 2, 4):
        checks.append(_close(
            f"reduction nakagami-signal m=1 M={interferers}",
            analytic.evm_max_signal_nakagami(1.0, interferers),
            analytic.evm_max_signal_rayleigh(2, interferers), 1e-8))
    checks.append(_close(
        "reduction correlated-sir rho=0",
        analytic.evm_max_sir_correlated(0.0),
        analytic.evm_max_sir_rayleigh(2, 1), 1e-6))
    for interferers in (1, 2, 4):
        checks.append(_close(
            f"reduction correlated-signal rho=0 M={interferers}",
            analytic.evm_max_signal_correlated(0.0, interferers),
            analytic.evm_max_signal_rayleigh(2, interferers), 1e-6))
    return checks


def _strict(name, values, direction):
    pairs = zip(values, values[1:])
    ok = all(b < a for a, b in pairs) if direction == "decreasing" \
        else all(b > a for a, b in zip(values, values[1:]))
    listing = ", ".join(f"{v:.6g}" for v in values)
    return CheckResult(name, ok, f"{direction}: {listing}")


def monotonicity_checks():
    """EVM must fall with diversity and rise with interference and correlation."""
    checks = []
    for interferers in (1, 2):
        checks.append(_strict(
            f"monotone max_sir antennas M={interferers}",
            [analytic.evm_max_sir_rayleigh(l, interferers) for l in range(1, 7)],
            "decreasing"))
        checks.append(_strict(
            f"monotone max_signal antennas M={interferers}",
            [analytic.evm_max_signal_rayleigh(l, interferers) for l in range(1, 7)],
            "decreasing"))
    for antennas in (1, 2):
        checks.append(_strict(
            f"monotone max_sir interferers L={antennas}",
            [analytic.evm_max_sir_rayleigh(antennas, m) for m in range(1, 6)],
            "increasing"))
        checks.append(_strict(
            f"monotone max_signal interferers L={antennas}",
            [analytic.evm_max_signal_rayleigh(antennas, m) for m in range(1, 6)],
            "increasing"))
    checks.append(_strict(
        "monotone nakagami-sir antennas m=0.8",
        [analytic.evm_max_sir_nakagami(l, 0.8) for l in range(1, 5)],
        "decreasing"))
    checks.append(_strict(
        "monotone nakagami-sir shape L=2",
        [analytic.evm_max_sir_nakagami(2, m) for m in (0.5, 0.75, 1.0, 1.5, 2.0, 3.0)],
        "decreasing"))
    checks.append(_strict(
        "monotone nakagami-signal shape M=1",
        [analytic.evm_max_signal_nakagami(m, 1)
         for m in (0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0)],
        "decreasing"))
    checks.append(_strict(
        "monotone nakagami-signal interferers m=1.5",
        [analytic.evm_max_signal_nakagami(1.5, m) for m in range(1, 5)],
        "increasing"))
    rhos = (0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9, 0.95, 0.99)
    checks.append(_strict(
        "monotone correlated-sir rho",
        [analytic.evm_max_sir_correlated(r) for r in rhos], "increasing"))
    checks.append(_strict(
        "monotone correlated-signal rho M=1",
        [analytic.evm_max_signal_correlated(r, 1) for r in rhos], "increasing"))
    checks.append(_strict(
        "monotone fully-correlated interferers",
        [analytic.evm_fully_correlated(m) for m in (1, 2, 4, 8)], "increasing"))
    return checks


def rule_ordering_checks():
    """Max-SIR selection can only beat max-signal selection, never lose."""
    checks = []
    for antennas in (2, 3, 4, 6):
        for interferers in (1, 2, 4):
            sir = analytic.evm_max_sir_rayleigh(antennas, interferers)
            signal = analytic.evm_max_signal_rayleigh(antennas, interferers)
            checks.append(CheckResult(
                f"ordering analytic L={antennas} M={interferers}",
                sir < signal, f"max_sir {sir:.9g} < max_signal {signal:.9g}"))
    return checks


def asymptotic_checks():
    """Fully correlated EVM approaches sqrt(pi M) from below at rate 1/(8M)."""
    checks = []
    for interferers in (16, 64, 256):
        value = analytic.evm_fully_correlated(interferers)
        deviation = abs(value / math.sqrt(math.pi * interferers) - 1.0)
        bound = 1.0 / (8.0 * interferers) + 1e-3
        checks.append(CheckResult(
            f"asymptote fully-correlated M={interferers}",
            deviation <= bound,
            f"relative deviation {deviation:.3g} <= {bound:.3g}"))
    return checks


def _grid_cells():
    both = (SelectionRule.MAX_SIR, SelectionRule.MAX_SIGNAL)
    cells = []
    for antennas in (1, 2, 4):
        for interferers in (1, 2, 4):
            cells.append((antennas, interferers, Fading.rayleigh(), 0.0, both))
    for m in (0.5, 1.0, 2.0, 3.0):
        cells.append((2, 2, Fading.nakagami(m), 0.0, (SelectionRule.MAX_SIR,)))
    for m in (1.0, 2.0, 3.0):
        cells.append((2, 2, Fading.nakagami(m), 0.0, (SelectionRule.MAX_SIGNAL,)))
    for rho in (0.3, 0.6, 0.9):
        cells.append((2, 1, Fading.rayleigh(), rho, both))
    return cells


def mc_grid(samples, seed=DEFAULT_SEED):
    """Monte Carlo z test of every supported configuration family.

    A point failing |z| <= 3 is granted one deterministic re-run under a
    derived fresh seed; 31 three-sigma tests are expected to trip roughly
    once per ten grids, so a single honest retry keeps the grid usable
    without masking real disagreement.

    Returns:
        (checks, rows): CheckResults including draw-by-draw rule ordering,
        and SweepRows for CSV emission.
    """
    checks = []
    rows = []
    first_estimates = {}
    for antennas, interferers, fading, rho, rules in _grid_cells():
        for rule in rules:
            cfg = SystemConfig(antennas, interferers, rule, fading, rho)
            exact = analytic_formula(cfg)
            base_seed = cell_seed(seed, cfg)
            estimate = estimate_evm(cfg, samples, seed=base_seed)
            first_estimates[(antennas, interferers, fading.m, rho, rule)] = estimate
            z = (estimate.mean - exact) / estimate.std_error
            retried = False
            if abs(z) > _Z_LIMIT:
                retried = True
                estimate = estimate_evm(cfg, samples,
                                        seed=derive_seed(base_seed, "retry"))
                z = (estimate.mean - exact) / estimate.std_error
            name = (f"grid {rule.value} L={antennas} M={interferers} "
                    f"m={fading.m:g} rho={rho:g}")
            detail = (f"exact {exact:.9g}, mc {estimate.mean:.9g} "
                      f"+- {estimate.std_error:.2g}, z {z:+.2f}")
            if retried:
                detail += " (after one re-run)"
            checks.append(CheckResult(name, abs(z) <= _Z_LIMIT, detail))
            rows.append(SweepRow(
                antennas=antennas, interferers=interferers, rule=rule.value,
                shape=fading.m, rho=rho, analytic=exact,
                mc_mean=estimate.mean, mc_stderr=estimate.std_error,
                z_score=z, status="ok"))
    identities = sorted({key[:4] for key in first_estimates})
    for antennas, interferers, m, rho in identities:
        if antennas < 2:
            continue
        key = (antennas, interferers, m, rho)
        sir = first_estimates.get(key + (SelectionRule.MAX_SIR,))
        signal = first_estimates.get(key + (SelectionRule.MAX_SIGNAL,))
        if sir is None or signal is None:
            continue
        checks.append(CheckResult(
            f"ordering shared-draws L={antennas} M={interferers} "
            f"m={m:g} rho={rho:g}",
            sir.mean < signal.mean,
            f"max_sir {sir.mean:.9g} < max_signal {signal.mean:.9g} "
            f"on identical channel draws"))
    return checks, rows


def symbol_level_checks(slots, blocks, seed=DEFAULT_SEED):
    """Waveform-level estimator against the closed forms at L=2, M=1."""
    checks = []
    for rule, exact in (
            (SelectionRule.MAX_SIR, analytic.evm_max_sir_rayleigh(2, 1)),
            (SelectionRule.MAX_SIGNAL, analytic.evm_max_signal_rayleigh(2, 1))):
        cfg = SystemConfig(2, 1, rule)
        estimate = estimate_evm_symbol_level(cfg, slots, blocks, seed=seed)
        z = (estimate.mean - exact) / estimate.std_error
        checks.append(CheckResult(
            f"symbol-level {rule.value} L=2 M=1",
            abs(z) <= _Z_LIMIT,
            f"exact {exact:.9g}, waveform mc {estimate.mean:.9g} "
            f"+- {estimate.std_error:.2g}, z {z:+.2f}"))
    return checks


def run_verification(samples=1000000, seed=DEFAULT_SEED,
                     include_symbol_level=True, slots=2000, blocks=2000):
    """Run every verification layer and collect the verdict.

    Args:
        samples: Monte Carlo draws per grid point.
        seed: base seed; identical arguments give identical reports.
        include_symbol_level: also run the waveform-level estimator.
        slots: symbols per fading block for the waveform check.
        blocks: fading blocks for the waveform check.

    Returns:
        VerificationReport with all checks, the grid rows, and the
        overall pass flag.
    """
    checks = []
    checks.extend(anchor_checks())
    checks.extend(reduction_checks())
    checks.extend(quadrature_identity_checks())
    checks.extend(monotonicity_checks())
    checks.extend(rule_ordering_checks())
    checks.extend(asymptotic_checks())
    grid_checks, rows = mc_grid(samples, seed=seed)
    checks.extend(grid_checks)
    if include_symbol_level:
        checks.extend(symbol_level_checks(slots, blocks, seed=seed))
    return VerificationReport(checks=tuple(checks), rows=tuple(rows),
                              passed=all(c.passed for c in checks))
