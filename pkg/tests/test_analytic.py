"""Closed-form EVM against frozen independent evaluations.

Every table below was produced before the implementation existed, by
evaluating the defining half-inverse moment with 30 to 40 digit mpmath
arithmetic (series where available, direct integration of the selected-SIR
CDF otherwise), then frozen here verbatim.
"""

import math

import pytest

from scevm import analytic
from scevm.model import (
    DivergentMomentError,
    Fading,
    NumericalError,
    SelectionRule,
    SeriesRangeError,
    SystemConfig,
    UnsupportedDomainError,
)

MAX_SIR_RAYLEIGH = {
    (1, 1): 1.570796326794896619231,
    (2, 1): 0.7853981633974483096157,
    (1, 2): 2.356194490192344928847,
    (2, 2): 1.276272015520853503125,
    (3, 1): 0.5890486225480862322117,
    (3, 4): 1.577953905119620831922,
    (4, 2): 0.881271962640300886473,
    (2, 4): 1.936650744705622052519,
}

MAX_SIGNAL_RAYLEIGH = {
    (1, 1): 1.570796326794896619231,
    (2, 1): 0.9201511845106101149547,
    (2, 2): 1.380226776765915172432,
    (3, 1): 0.7687636194984672630613,
    (2, 4): 2.012830716116959626463,
    (4, 3): 1.304512545975003001837,
}

MAX_SIR_NAKAGAMI = {
    (1, 2.0): 1.666081101809387342631,
    (2, 0.5): 1.770211170672474051545,
    (2, 2.0): 1.145430757493953798059,
    (3, 1.5): 0.9763700373331549062744,
    (2, 3.0): 1.111926319236357671592,
    (4, 2.0): 0.8592764471612135647724,
}

MAX_SIGNAL_NAKAGAMI = {
    (0.6, 1): 1.101412983055380299645,
    (0.75, 1): 0.9966406089749324517846,
    (1.5, 1): 0.8660254037844386467637,
    (2.0, 1): 0.8469946831336485816805,
    (3.0, 1): 0.8343763487811951561284,
    (5.0, 1): 0.8310770909917820879411,
    (0.6, 2): 1.652119474583070449467,
    (0.6, 4): 2.409340900433644405473,
    (1.5, 2): 1.299038105676657970146,
    (1.5, 4): 1.894430570778459539796,
    (2.0, 2): 1.270492024700472872521,
    (2.0, 4): 1.852800869354856272426,
    (3.0, 2): 1.251564523171792734193,
    (3.0, 4): 1.825198262958864404031,
    (5.0, 2): 1.246615636487673131912,
    (5.0, 4): 1.817981136544523317371,
    (0.75, 2): 1.494960913462398677677,
    (0.75, 4): 2.180151332132664738279,
}

MAX_SIR_CORRELATED = {
    0.0: 0.7853981633974483096157,
    0.3: 0.8038060186268291527978,
    0.5: 0.8408450109417270169241,
    0.6: 0.8704948056285956076412,
    0.8: 0.9722054934954778029255,
    0.9: 1.073762165286716302444,
    0.95: 1.166430952978880825966,
    0.99: 1.334042939933573266664,
}

MAX_SIGNAL_CORRELATED = {
    (0.0, 1): 0.92015118451061,
    (0.0, 2): 1.38022677676592,
    (0.0, 4): 2.01283071611696,
    (0.3, 1): 0.933224591925723,
    (0.3, 2): 1.39983688788858,
    (0.3, 4): 2.04142879483752,
    (0.5, 1): 0.959873871135931,
    (0.5, 2): 1.4398108067039,
    (0.5, 4): 2.09972409310985,
    (0.6, 1): 0.981534538776766,
    (0.6, 2): 1.47230180816515,
    (0.6, 4): 2.14710680357418,
    (0.8, 1): 1.05800850383408,
    (0.8, 2): 1.58701275575112,
    (0.8, 4): 2.31439360213705,
    (0.9, 1): 1.13761305968058,
    (0.9, 2): 1.70641958952087,
    (0.9, 4): 2.48852856805127,
    (0.99, 1): 1.35549568727695,
}

NAKAGAMI_CDF_TWO_INTERFERERS = {
    (0.5, 0.3): 0.51818258502135438589,
    (0.5, 1.0): 0.76980035891950101935,
    (0.5, 4.0): 0.95257934441568037152,
    (1.0, 0.3): 0.40828402366863905325,
    (1.0, 1.0): 0.75,
    (1.0, 4.0): 0.96,
    (2.0, 0.3): 0.31640625,
    (2.0, 1.0): 0.74074074074074074074,
    (2.0, 4.0): 0.96570644718792866941,
    (3.7, 0.3): 0.25570758700132806712,
    (3.7, 1.0): 0.73750629706578352375,
    (3.7, 4.0): 0.96897963508557763059,
}


@pytest.mark.parametrize("args,want", sorted(MAX_SIR_RAYLEIGH.items()))
def test_max_sir_rayleigh_frozen(args, want):
    assert analytic.evm_max_sir_rayleigh(*args) == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("args,want", sorted(MAX_SIGNAL_RAYLEIGH.items()))
def test_max_signal_rayleigh_frozen(args, want):
    assert analytic.evm_max_signal_rayleigh(*args) == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("args,want", sorted(MAX_SIR_NAKAGAMI.items()))
def test_max_sir_nakagami_frozen(args, want):
    assert analytic.evm_max_sir_nakagami(*args) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("args,want", sorted(MAX_SIGNAL_NAKAGAMI.items()))
def test_max_signal_nakagami_frozen(args, want):
    assert analytic.evm_max_signal_nakagami(*args) == pytest.approx(want, rel=1e-10)


@pytest.mark.parametrize("rho,want", sorted(MAX_SIR_CORRELATED.items()))
def test_max_sir_correlated_frozen(rho, want):
    assert analytic.evm_max_sir_correlated(rho) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("args,want", sorted(MAX_SIGNAL_CORRELATED.items()))
def test_max_signal_correlated_frozen(args, want):
    assert analytic.evm_max_signal_correlated(*args) == pytest.approx(want, abs=1e-9)


def test_fully_correlated_values():
    assert analytic.evm_fully_correlated(1) == pytest.approx(
        0.5 * math.pi, rel=1e-13)
    for interferers in (1, 2, 4, 16, 64):
        want = math.sqrt(math.pi) * math.exp(
            math.lgamma(interferers + 0.5) - math.lgamma(interferers))
        assert analytic.evm_fully_correlated(interferers) == pytest.approx(
            want, rel=1e-12)


def test_exact_anchor_constants():
    assert analytic.evm_max_sir_rayleigh(1, 1) == pytest.approx(
        math.pi / 2.0, abs=1e-10)
    assert analytic.evm_max_sir_rayleigh(2, 1) == pytest.approx(
        math.pi / 4.0, abs=1e-10)
    assert analytic.evm_max_signal_rayleigh(2, 1) == pytest.approx(
        math.pi * (1.0 - 1.0 / math.sqrt(2.0)), abs=1e-10)


def test_reductions_between_families():
    for antennas in (1, 2, 3, 4):
        assert analytic.evm_max_sir_nakagami(antennas, 1.0) == pytest.approx(
            analytic.evm_max_sir_rayleigh(antennas, 2), abs=1e-6)
    for interferers in (1, 2, 4):
        assert analytic.evm_max_signal_nakagami(1.0, interferers) == pytest.approx(
            analytic.evm_max_signal_rayleigh(2, interferers), abs=1e-8)
        assert analytic.evm_max_signal_correlated(0.0, interferers) == pytest.approx(
            analytic.evm_max_signal_rayleigh(2, interferers), abs=1e-6)
    assert analytic.evm_max_sir_correlated(0.0) == pytest.approx(
        analytic.evm_max_sir_rayleigh(2, 1), abs=1e-6)


def test_correlation_approaches_no_selection_limit():
    # as rho -> 1 both correlated results climb toward the single-antenna
    # value; convergence is sqrt(1-rho^2)-slow, so even 0.99 sits well away
    single = analytic.evm_fully_correlated(1)
    sir_gap = abs(analytic.evm_max_sir_correlated(0.9999) / single - 1.0)
    signal_gap = abs(analytic.evm_max_signal_correlated(0.9999, 1) / single - 1.0)
    assert sir_gap < 0.03
    assert signal_gap < 0.03
    assert abs(analytic.evm_max_sir_correlated(0.99) / single - 1.0) > 0.10


@pytest.mark.parametrize("antennas,m", [(1, 0.5), (1, 0.2), (2, 0.25), (3, 1.0 / 6.0)])
def test_sir_divergence_boundary(antennas, m):
    with pytest.raises(DivergentMomentError):
        analytic.evm_max_sir_nakagami(antennas, m)


@pytest.mark.parametrize("m", [0.5, 0.3, 0.1])
def test_signal_divergence_boundary(m):
    with pytest.raises(DivergentMomentError):
        analytic.evm_max_signal_nakagami(m, 1)


def test_series_range_guard():
    with pytest.raises(SeriesRangeError):
        analytic.evm_max_sir_rayleigh(76, 2)
    with pytest.raises(SeriesRangeError):
        analytic.evm_max_sir_rayleigh(151, 1)


@pytest.mark.parametrize("call", [
    lambda: analytic.evm_max_sir_rayleigh(0, 1),
    lambda: analytic.evm_max_sir_rayleigh(2, 0),
    lambda: analytic.evm_max_signal_rayleigh(-1, 1),
    lambda: analytic.evm_max_sir_nakagami(2, 0.0),
    lambda: analytic.evm_max_signal_nakagami(2.0, 0),
    lambda: analytic.evm_max_sir_correlated(-0.1),
    lambda: analytic.evm_max_sir_correlated(1.0),
    lambda: analytic.evm_max_signal_correlated(1.0, 2),
    lambda: analytic.evm_fully_correlated(0),
])
def test_domain_validation(call):
    with pytest.raises(UnsupportedDomainError):
        call()


def test_single_antenna_cdf_rayleigh():
    fading = Fading.rayleigh()
    for interferers in (1, 2, 5):
        for x in (0.01, 0.5, 1.0, 7.0):
            want = 1.0 - (1.0 + x) ** -interferers
            got = analytic.sir_cdf_single_antenna(x, interferers, fading)
            assert got == pytest.approx(want, rel=1e-14)
    assert analytic.sir_cdf_single_antenna(0.0, 3, fading) == 0.0
    assert analytic.sir_cdf_single_antenna(math.inf, 3, fading) == 1.0


@pytest.mark.parametrize("args,want", sorted(NAKAGAMI_CDF_TWO_INTERFERERS.items()))
def test_single_antenna_cdf_nakagami_frozen(args, want):
    m, x = args
    got = analytic.sir_cdf_single_antenna(x, 2, Fading.nakagami(m))
    assert got == pytest.approx(want, rel=1e-13)


def test_single_antenna_cdf_nakagami_needs_two_interferers():
    with pytest.raises(UnsupportedDomainError):
        analytic.sir_cdf_single_antenna(1.0, 3, Fading.nakagami(2.0))


def test_cdf_shape_properties():
    for fading, interferers in ((Fading.rayleigh(), 3), (Fading.nakagami(2.5), 2)):
        previous = 0.0
        for exponent in range(-6, 7):
            x = 10.0 ** exponent
            value = analytic.sir_cdf_single_antenna(x, interferers, fading)
            assert 0.0 <= value <= 1.0
            assert value >= previous
            previous = value
        assert previous > 1.0 - 1e-4


def test_best_antenna_cdf_independent_is_a_power():
    cfg = SystemConfig(3, 2, SelectionRule.MAX_SIR)
    for x in (0.05, 0.7, 3.0):
        single = analytic.sir_cdf_single_antenna(x, 2, cfg.fading)
        assert analytic.sir_cdf_best_antenna(x, cfg) == pytest.approx(
            single ** 3, rel=1e-13)


def test_best_antenna_cdf_correlated_limits():
    # rho -> 0 recovers the squared single-antenna law; rho = 1 collapses
    # selection entirely
    for x in (0.05, 0.4, 1.0, 9.0):
        nearly_free = analytic.sir_cdf_best_antenna(
            x, SystemConfig(2, 1, SelectionRule.MAX_SIR, rho=1e-12))
        squared = (x / (1.0 + x)) ** 2
        assert nearly_free == pytest.approx(squared, rel=1e-9)
        locked = analytic.sir_cdf_best_antenna(
            x, SystemConfig(2, 1, SelectionRule.MAX_SIR, rho=1.0))
        assert locked == pytest.approx(x / (1.0 + x), rel=1e-12)


def test_best_antenna_cdf_correlated_shape():
    cfg = SystemConfig(2, 1, SelectionRule.MAX_SIR, rho=0.7)
    previous = -1.0
    for exponent in range(-8, 9):
        x = 10.0 ** exponent
        value = analytic.sir_cdf_best_antenna(x, cfg)
        assert 0.0 <= value <= 1.0
        assert value >= previous
        previous = value
    assert analytic.sir_cdf_best_antenna(0.0, cfg) == 0.0


def test_best_antenna_cdf_tail_reaches_one():
    for cfg in (SystemConfig(1, 1, SelectionRule.MAX_SIR),
                SystemConfig(3, 4, SelectionRule.MAX_SIR),
                SystemConfig(2, 2, SelectionRule.MAX_SIR, Fading.nakagami(2.5)),
                SystemConfig(2, 1, SelectionRule.MAX_SIR, rho=0.8)):
        assert analytic.sir_cdf_best_antenna(1e8, cfg) >= 1.0 - 1e-6


def test_best_antenna_cdf_correlated_guards():
    with pytest.raises(UnsupportedDomainError):
        analytic.sir_cdf_best_antenna(
            1.0, SystemConfig(2, 1, SelectionRule.MAX_SIGNAL, rho=0.5))
    with pytest.raises(UnsupportedDomainError):
        analytic.sir_cdf_best_antenna(
            1.0, SystemConfig(2, 2, SelectionRule.MAX_SIR, rho=0.5))


def test_signal_rule_closed_form_is_cross_checked(monkeypatch):
    # the max-signal shape-family result re-derives itself by quadrature on
    # every call; breaking one route must be caught, not returned
    import scevm.analytic as module

    broken = lambda a, b, c, z: 0.9
    monkeypatch.setattr(module, "gauss_2f1", broken)
    with pytest.raises(NumericalError):
        module.evm_max_signal_nakagami(2.0, 1)


def test_rule_ordering_analytic():
    for antennas in (2, 3, 4):
        for interferers in (1, 2, 4):
            assert (analytic.evm_max_sir_rayleigh(antennas, interferers)
                    < analytic.evm_max_signal_rayleigh(antennas, interferers))


def test_rules_coincide_with_one_antenna():
    # nothing to select from, so both rules and the no-selection result
    # are the same half-inverse-moment expression
    for interferers in (1, 2, 4, 8):
        sir = analytic.evm_max_sir_rayleigh(1, interferers)
        assert sir == pytest.approx(
            analytic.evm_max_signal_rayleigh(1, interferers), rel=1e-13)
        assert sir == pytest.approx(
            analytic.evm_fully_correlated(interferers), rel=1e-13)


def test_monotone_in_each_parameter():
    sir_in_l = [analytic.evm_max_sir_rayleigh(l, 2) for l in range(1, 7)]
    assert all(b < a for a, b in zip(sir_in_l, sir_in_l[1:]))
    signal_in_m = [analytic.evm_max_signal_rayleigh(2, m) for m in range(1, 6)]
    assert all(b > a for a, b in zip(signal_in_m, signal_in_m[1:]))
    in_shape = [analytic.evm_max_signal_nakagami(m, 1)
                for m in (0.6, 0.8, 1.0, 1.5, 2.0, 4.0)]
    assert all(b < a for a, b in zip(in_shape, in_shape[1:]))
    in_rho = [analytic.evm_max_sir_correlated(r)
              for r in (0.0, 0.2, 0.4, 0.6, 0.8, 0.95)]
    assert all(b > a for a, b in zip(in_rho, in_rho[1:]))
