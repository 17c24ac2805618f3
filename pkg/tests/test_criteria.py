"""Verdict engines: the main series criterion, the discrete-measure corollary
family, Hall's integral test and the log-convex (Carleson) dichotomy."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from charseq_kit import (CharacteristicSequence, CharEntry, DiscreteMeasure,
                         GeneratorSpec, InputError, materialize)
from charseq_kit.criteria import (carleson_verdict, cw_discrete_criterion,
                                  hall_criterion, l1_criterion,
                                  log_convexity_check, lp_criterion,
                                  main_criterion, nondegenerate_simplified,
                                  poisson_log_integral, run_gates,
                                  weighted_sup_norm, DENSE, NOT_DENSE)
from charseq_kit.weights import (WeightSpec, discrete_reciprocal, exp_power,
                                 exp_power_log, discrete_support, tabulated)

PI = math.pi
SQRT3 = math.sqrt(3.0)


def cubes(count):
    """Two-sided cube lattice: balanced, zero density, gates pass at
    count >= 2000 per side."""
    return materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                     two_sided=True, count=count))


def synthetic_P(seq, p_of):
    entries = {}
    for n in seq.indices():
        lam = seq.point(n)
        entries[n] = CharEntry(n=n, lam=lam, p=p_of(n, lam), err=0.0,
                               N=seq.count, method="synthetic", window_pairs=0)
    return CharacteristicSequence(seq=seq, entries=entries)


@pytest.fixture(scope="module")
def gate_seq():
    return cubes(2000)


@pytest.fixture(scope="module")
def gate_pack(gate_seq):
    return run_gates(gate_seq)


class TestSupNorm:
    def test_f_equals_w(self):
        w = exp_power(1.0, 0.5)
        samples = [(x, w.value(x)) for x in (0.0, 1.0, 4.0)]
        assert weighted_sup_norm(samples, w) == pytest.approx(1.0, rel=1e-14)

    def test_zero(self):
        w = exp_power(1.0, 0.5)
        assert weighted_sup_norm([(0.0, 0.0), (2.0, 0.0)], w) == 0.0

    def test_linear_against_root_exp(self):
        w = exp_power(1.0, 0.5)
        samples = [(x, x) for x in (0.0, 1.0, 4.0)]
        # max(0, 1/e, 4/e^2) = 4/e^2
        assert weighted_sup_norm(samples, w) == \
            pytest.approx(4.0 / math.e ** 2, rel=1e-14)


class TestMainCriterion:
    def test_gate_pack_passes(self, gate_pack):
        assert gate_pack.passed

    def test_decaying_p_witnessed(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -2.0 * (abs(n) + 1.0))
        w = exp_power(0.5, 1.0 / 3.0)   # log W(lam_n) = 0.5 (|n|+1)-ish
        v = main_criterion(w, gate_seq, P, gates=gate_pack)
        assert v.witnessed and v.claim == NOT_DENSE

    def test_growing_terms_not_witnessed(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -1.0 * (abs(n) + 1.0))
        w = exp_power(2.0, 1.0 / 3.0)   # dominates the decay of p
        v = main_criterion(w, gate_seq, P, gates=gate_pack)
        assert not v.witnessed

    def test_infinite_weight_on_sequence(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -2.0 * (abs(n) + 1.0))
        w = discrete_support([0.0], [1.0])      # +inf off the single point
        v = main_criterion(w, gate_seq, P, gates=gate_pack)
        assert not v.witnessed
        assert "infinite_weight_at" in v.evidence

    def test_failed_gates_block_witness(self):
        # growing harmonic-type support: not balanced, gates must veto
        pts = tuple(float(n) for n in range(1, 4097))
        seq = materialize(GeneratorSpec(kind="explicit", points=pts))
        P = synthetic_P(seq, lambda n, lam: -2.0 * (abs(n) + 1.0))
        v = main_criterion(exp_power(0.1, 0.5), seq, P)
        assert not v.witnessed
        assert not v.evidence["gates"]["balanced"]

    def test_monotonicity_in_the_weight(self, gate_seq, gate_pack):
        """W1 <= W2 pointwise and W2 witnessed implies W1 witnessed."""
        P = synthetic_P(gate_seq, lambda n, lam: -SQRT3 * PI * (abs(n) + 1.0))
        w2 = exp_power(0.9 * SQRT3 * PI, 1.0 / 3.0)
        w1 = exp_power(0.45 * SQRT3 * PI, 1.0 / 3.0)
        v2 = main_criterion(w2, gate_seq, P, gates=gate_pack)
        v1 = main_criterion(w1, gate_seq, P, gates=gate_pack)
        assert v2.witnessed
        assert v1.witnessed


class TestSimplified:
    def test_exact_cancellation_fits_zero(self, gate_seq):
        P = synthetic_P(gate_seq, lambda n, lam: -2.0 * (abs(n) + 1.0))
        w = WeightSpec("exp_power", {}, False, True,
                       lambda x: 2.0 * (abs(x) ** (1.0 / 3.0)))
        # log W(lam_n) = 2 (|n|+1) on the lattice: g == 0 up to lattice rounding
        v = nondegenerate_simplified(w, gate_seq, P)
        assert v.witnessed
        assert v.evidence["c_bound"] == pytest.approx(0.0, abs=1e-9)

    def test_log_excess_fits_three(self, gate_seq):
        P = synthetic_P(gate_seq, lambda n, lam: -2.0 * (abs(n) + 1.0))

        def lw(x):
            return 2.0 * abs(x) ** (1.0 / 3.0) + 3.0 * math.log(max(abs(x), 1.0))

        w = WeightSpec("custom", {}, False, True, lw)
        v = nondegenerate_simplified(w, gate_seq, P)
        assert v.witnessed
        assert v.evidence["slope_fit"] == pytest.approx(3.0, rel=0.1)

    def test_sqrt_excess_rejected(self, gate_seq):
        P = synthetic_P(gate_seq, lambda n, lam: -2.0 * (abs(n) + 1.0))

        def lw(x):
            return 2.0 * abs(x) ** (1.0 / 3.0) + math.sqrt(abs(x))

        w = WeightSpec("custom", {}, False, True, lw)
        v = nondegenerate_simplified(w, gate_seq, P)
        assert not v.witnessed

    def test_degenerate_weight_rejected(self, gate_seq):
        P = synthetic_P(gate_seq, lambda n, lam: -1.0)
        with pytest.raises(InputError):
            nondegenerate_simplified(discrete_support([0.0], [1.0]),
                                     gate_seq, P)


def positive_measure_on(seq, logmass_of):
    idx = list(seq.indices())
    t = np.array([seq.point(n) for n in idx])
    logm = np.array([logmass_of(n, seq.point(n)) for n in idx])
    return DiscreteMeasure(t=t, signs=np.ones_like(t), logm=logm,
                           is_truncation=True)


class TestCorollaryCriteria:
    def test_lp_exponent_algebra_p2(self, gate_seq, gate_pack):
        """p = 2 gives q = 2: summand is exp(2 p_n) / mass_n."""
        mu = positive_measure_on(gate_seq, lambda n, lam: -0.1 * (abs(n) + 1.0))
        P = synthetic_P(gate_seq, lambda n, lam: -1.0 * (abs(n) + 1.0))
        sub = list(gate_seq.indices())
        v = lp_criterion(mu, 2.0, sub, P=P, gates=gate_pack)
        assert v.evidence["q"] == pytest.approx(2.0)
        assert v.witnessed     # sum exp(-2n + 0.1 n) converges

    def test_lp_reduces_to_mass_series_when_mass_is_exp_p(self, gate_seq,
                                                          gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -0.7 * (abs(n) + 1.0))
        mu = positive_measure_on(gate_seq, lambda n, lam: -0.7 * (abs(n) + 1.0))
        sub = list(gate_seq.indices())
        v = lp_criterion(mu, 3.0, sub, P=P, gates=gate_pack)
        # summand reduces to exp(p_n): same geometric series either way
        assert v.witnessed

    def test_lp_divergent_not_witnessed(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -0.1 * (abs(n) + 1.0))
        mu = positive_measure_on(gate_seq, lambda n, lam: -1.0 * (abs(n) + 1.0))
        v = lp_criterion(mu, 2.0, list(gate_seq.indices()), P=P,
                         gates=gate_pack)
        assert not v.witnessed    # exp(-0.2 n + n) grows

    def test_lp_validation(self, gate_seq):
        mu = positive_measure_on(gate_seq, lambda n, lam: -1.0)
        with pytest.raises(InputError):
            lp_criterion(mu, 1.0, [0, 1])
        with pytest.raises(InputError):
            lp_criterion(mu, math.inf, [0, 1])

    def test_l1_exact_ratio_witnessed(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -0.5 * (abs(n) + 1.0))
        mu = positive_measure_on(gate_seq, lambda n, lam: -0.5 * (abs(n) + 1.0))
        v = l1_criterion(mu, list(gate_seq.indices()), P=P, gates=gate_pack)
        assert v.witnessed     # ratio identically 1

    def test_l1_growing_ratio_rejected(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -0.5 * (abs(n) + 1.0))
        mu = positive_measure_on(
            gate_seq,
            lambda n, lam: -0.5 * (abs(n) + 1.0) - math.log(abs(n) + 2.0))
        v = l1_criterion(mu, list(gate_seq.indices()), P=P, gates=gate_pack)
        assert not v.witnessed    # ratio = n + 2 unbounded

    def test_cw_discrete_parallel(self, gate_seq, gate_pack):
        P = synthetic_P(gate_seq, lambda n, lam: -1.0 * (abs(n) + 1.0))
        mu = positive_measure_on(gate_seq, lambda n, lam: -0.3 * (abs(n) + 1.0))
        v = cw_discrete_criterion(mu, list(gate_seq.indices()), P=P,
                                  gates=gate_pack)
        assert v.witnessed     # exp(-0.7 n) summable

    def test_scaling_invariance(self, gate_seq, gate_pack):
        """Scaling the measure by 7.3 never changes corollary outcomes."""
        P = synthetic_P(gate_seq, lambda n, lam: -0.8 * (abs(n) + 1.0))
        mu = positive_measure_on(gate_seq, lambda n, lam: -0.4 * (abs(n) + 1.0))
        scaled = mu.scale(7.3)
        sub = list(gate_seq.indices())
        for crit, kw in ((lp_criterion, {"p": 2.0}), (l1_criterion, {}),
                         (cw_discrete_criterion, {})):
            a = crit(mu, sub, P=P, gates=gate_pack, **kw) if crit is not lp_criterion \
                else crit(mu, kw["p"], sub, P=P, gates=gate_pack)
            b = crit(scaled, sub, P=P, gates=gate_pack, **kw) if crit is not lp_criterion \
                else crit(scaled, kw["p"], sub, P=P, gates=gate_pack)
            assert a.outcome == b.outcome

    def test_main_discrete_weight_agrees_with_cw(self, gate_seq, gate_pack):
        """W(lam_n) = 1/mass_n reproduces the discrete criterion exactly."""
        P = synthetic_P(gate_seq, lambda n, lam: -1.0 * (abs(n) + 1.0))
        mu = positive_measure_on(gate_seq, lambda n, lam: -0.3 * (abs(n) + 1.0))
        w = discrete_reciprocal(mu)
        a = main_criterion(w, gate_seq, P, gates=gate_pack)
        b = cw_discrete_criterion(mu, list(gate_seq.indices()), P=P,
                                  gates=gate_pack)
        assert a.outcome == b.outcome
        assert a.evidence["log_total"] == pytest.approx(
            b.evidence["log_total"], rel=1e-13)


class TestHall:
    def test_root_weight_witnessed_with_tail_match(self):
        w = exp_power(1.0, 0.5)
        v = hall_criterion(w)
        assert v.witnessed
        r_last = v.evidence["radii"][-1]
        # independent oracle for the remaining tail: substitute u = 1/x so the
        # improper integral becomes int_0^{1/R} u^{-1/2}/(1+u^2) du
        analytic = 2.0 * quad(lambda u: u ** -0.5 / (1 + u * u),
                              0.0, 1.0 / r_last, limit=400)[0]
        assert v.evidence["tail_model"] == pytest.approx(analytic, rel=0.01)

    def test_linear_weight_divergent(self):
        v = hall_criterion(exp_power(1.0, 1.0))
        assert not v.witnessed
        assert v.evidence["classification"] == "divergent"

    def test_slow_divergence_flagged(self):
        # exp(|x| / log(e+|x|)): integrand ~ 1/(x log x), divergent but slowly
        v = hall_criterion(exp_power_log(1.0, 1.0, 1.0))
        assert not v.witnessed
        assert v.evidence["classification"] in ("divergent", "undecided")

    def test_infinite_weight_inside_block(self):
        w = tabulated([(-1.0, 1.0), (1.0, 1.0)])    # +inf outside [-1, 1]
        v = hall_criterion(w)
        assert not v.witnessed


class TestConvexity:
    def test_exp_power_passes(self):
        grid = [2.0 ** j for j in range(-3, 12)]
        rep = log_convexity_check(exp_power(1.0, 0.7), grid)
        assert rep.passed

    def test_dent_detected(self):
        base = exp_power(1.0, 0.5)

        def lw(x):
            v = base.log_value(x)
            if 3.9 < abs(x) < 4.1:
                return v + 0.8          # local bump breaks convexity nearby
            return v

        w = WeightSpec("dented", {}, False, True, lw)
        grid = [3.5, 3.9, 4.0, 4.1, 4.5, 6.0]
        rep = log_convexity_check(w, grid)
        assert not rep.passed
        assert rep.violation_at is not None

    def test_linear_in_t_zero_margin(self):
        w = WeightSpec("powerlaw", {}, False, True,
                       lambda x: 2.0 * math.log(max(abs(x), 1e-300)) if abs(x) >= 1 else 0.0)
        rep = log_convexity_check(w, [1.0, 2.0, 4.0, 8.0])
        assert rep.passed
        assert rep.max_violation == pytest.approx(0.0, abs=1e-12)


class TestCarleson:
    def test_root_weight_not_dense(self):
        v = carleson_verdict(exp_power(2.0, 0.5))
        assert v.witnessed and v.claim == NOT_DENSE

    def test_linear_weight_dense(self):
        v = carleson_verdict(exp_power(1.0, 1.0))
        assert v.witnessed and v.claim == DENSE

    def test_slowly_modulated_dense(self):
        v = carleson_verdict(exp_power_log(1.0, 1.0, 1.0))
        assert v.claim == DENSE

    def test_odd_weight_rejected(self):
        w = WeightSpec("odd", {}, False, False,
                       lambda x: abs(x) + (0.5 if x > 0 else 0.0))
        with pytest.raises(InputError):
            carleson_verdict(w)

    def test_agrees_with_hall_on_not_dense(self):
        for w in (exp_power(1.0, 0.5), exp_power(3.0, 0.25)):
            h = hall_criterion(w)
            c = carleson_verdict(w)
            assert h.witnessed == (c.claim == NOT_DENSE)
