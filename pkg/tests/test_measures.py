"""Discrete measures: transforms, moments, decay, finiteness, extreme bundle."""

import cmath
import math

import numpy as np
import pytest

from charseq_kit import (CollisionError, DiscreteMeasure, GeneratorSpec,
                         InputError, annihilation_report, cauchy_transform,
                         cauchy_transform_logpolar, char_sequence,
                         decay_profile, extreme_property_check,
                         masses_from_charseq, materialize,
                         modified_cauchy_transform, moment,
                         moment_shift_identity, w_finiteness)
from charseq_kit.measures import shifted_measure
from charseq_kit.weights import discrete_support, tabulated

PI = math.pi
HALF_LN2 = 0.5 * math.log(2.0)


def delta(location, mass=1.0):
    return DiscreteMeasure.from_masses([location], [mass])


def dipole():
    """delta_1 - delta_{-1}."""
    return DiscreteMeasure.from_masses([-1.0, 1.0], [-1.0, 1.0])


class TestConstruction:
    def test_from_charseq_toy(self):
        seq = materialize(GeneratorSpec(kind="explicit", points=(0.0, 1.0)))
        P = char_sequence(seq, N=10)
        mu = masses_from_charseq(seq, P)
        assert mu.normalized
        assert mu.t.tolist() == [0.0, 1.0]
        assert mu.signs.tolist() == [1.0, -1.0]
        masses = mu.masses()
        assert masses[0] == pytest.approx(0.5, rel=1e-14)
        assert masses[1] == pytest.approx(-0.5, rel=1e-14)

    def test_uniform_p_gives_uniform_alternating(self):
        seq = materialize(GeneratorSpec(kind="explicit",
                                        points=(-1.0, 0.5, 2.0, 3.5)))
        P = char_sequence(seq, N=10)
        entries = {n: e for n, e in P.entries.items()}
        for n, e in entries.items():
            object.__setattr__(e, "p", 1.25)
        mu = masses_from_charseq(seq, P)
        assert np.allclose(np.abs(mu.masses()), 0.25, rtol=1e-14)
        assert mu.signs.tolist() == [-1.0, 1.0, -1.0, 1.0]

    def test_coverage_mismatch(self):
        seq = materialize(GeneratorSpec(kind="explicit", points=(0.0, 1.0, 2.0)))
        P = char_sequence(seq, indices=[0, 1], N=10)
        with pytest.raises(InputError):
            masses_from_charseq(seq, P)

    def test_normalization_invariant(self):
        mu = DiscreteMeasure.from_masses([0.0, 1.0, 2.0], [3.0, -4.0, 5.0])
        nu = mu.normalize()
        assert math.fsum(np.exp(nu.logm)) == pytest.approx(1.0, rel=1e-12)


class TestCauchyTransform:
    def test_single_atom_exact(self):
        # K(delta_a)(z) = 1/(pi (a - z))
        rng = np.random.default_rng(3)
        for _ in range(10):
            a = float(rng.uniform(-5, 5))
            z = complex(rng.uniform(-5, 5), rng.uniform(0.2, 4))
            expect = 1.0 / (PI * (a - z))
            got = cauchy_transform(delta(a), z)
            assert got == pytest.approx(expect, rel=1e-14)

    def test_dipole_at_zero(self):
        assert cauchy_transform(dipole(), 0.0 + 0.0j) == \
            pytest.approx(2.0 / PI, rel=1e-14)

    def test_dipole_far_field(self):
        # K(iy) ~ (2/pi)/(iy)^2 after the constant moment cancels
        for y in (1e3, 1e4):
            val = cauchy_transform(dipole(), complex(0, y))
            assert abs(val) * y * y == pytest.approx(2.0 / PI, rel=1e-5)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(8)
        mu = DiscreteMeasure.from_masses([-2.0, 0.3, 1.7], [0.5, -1.5, 2.5])
        for _ in range(10):
            z = complex(rng.uniform(-4, 4), rng.uniform(0.1, 3))
            a = cauchy_transform(mu, z.conjugate())
            b = cauchy_transform(mu, z).conjugate()
            assert a == pytest.approx(b, rel=1e-14)

    def test_linearity(self):
        t = [-1.0, 0.5, 2.0]
        m1 = DiscreteMeasure.from_masses(t, [1.0, 2.0, -1.0])
        m2 = DiscreteMeasure.from_masses(t, [0.5, -1.0, 3.0])
        msum = DiscreteMeasure.from_masses(t, [1.5, 1.0, 2.0])
        z = 0.7 + 1.3j
        assert cauchy_transform(msum, z) == pytest.approx(
            cauchy_transform(m1, z) + cauchy_transform(m2, z), rel=1e-13)

    def test_collision_guard(self):
        with pytest.raises(CollisionError):
            cauchy_transform(dipole(), 1.0 + 0.0j)

    def test_logpolar_matches_linear(self):
        mu = dipole()
        z = 0.3 + 0.9j
        log_abs, phase = cauchy_transform_logpolar(mu, z)
        val = cauchy_transform(mu, z)
        assert log_abs == pytest.approx(math.log(abs(val)), rel=1e-13)
        assert phase == pytest.approx(cmath.phase(val), rel=1e-13)


class TestModifiedTransform:
    def test_offset_is_constant(self):
        mu = DiscreteMeasure.from_masses([-1.5, 0.5, 3.0], [1.0, -2.0, 0.7])
        z1, z2 = 0.2 + 1.1j, -2.0 + 0.4j
        d1 = modified_cauchy_transform(mu, z1) - cauchy_transform(mu, z1)
        d2 = modified_cauchy_transform(mu, z2) - cauchy_transform(mu, z2)
        assert d1 == pytest.approx(d2, rel=1e-13)
        expect = -sum(m * t / (1 + t * t)
                      for t, m in zip(mu.t, mu.masses())) / PI
        assert d1 == pytest.approx(expect, rel=1e-13)

    def test_atom_at_origin_unchanged(self):
        mu = delta(0.0)
        z = 1.0 + 2.0j
        assert modified_cauchy_transform(mu, z) == cauchy_transform(mu, z)

    def test_single_atom_value(self):
        # for delta_1 at z=i: K - 1/(2 pi) = i/(2 pi)
        got = modified_cauchy_transform(delta(1.0), 1j)
        assert got == pytest.approx(1j / (2 * PI), rel=1e-14)


class TestMoments:
    def test_dipole(self):
        assert moment(dipole(), 0).value == pytest.approx(0.0, abs=1e-15)
        assert moment(dipole(), 1).value == pytest.approx(2.0, rel=1e-14)

    def test_toy_half_masses(self):
        mu = DiscreteMeasure.from_masses([0.0, 1.0], [0.5, -0.5])
        assert moment(mu, 0).value == pytest.approx(0.0, abs=1e-15)
        assert moment(mu, 1).value == pytest.approx(-0.5, rel=1e-14)

    def test_normalized_positive_zeroth(self):
        mu = DiscreteMeasure.from_masses([0.0, 2.0, 5.0],
                                         [0.2, 0.3, 0.5]).normalize()
        res = moment(mu, 0)
        assert res.value == pytest.approx(1.0, rel=1e-13)
        assert res.scale == pytest.approx(1.0, rel=1e-13)

    def test_annihilation_report_rows(self):
        rep = annihilation_report(dipole(), 3)
        assert [r.k for r in rep.rows] == [0, 1, 2, 3]
        assert rep.rows[0].residual < 1e-15
        assert rep.rows[1].residual == pytest.approx(1.0)
        assert not rep.consistent


class TestShiftIdentity:
    def test_k0_identity_zero(self):
        assert moment_shift_identity(dipole(), 0, 0.5 + 1j) == 0.0

    def test_single_atom_k1(self):
        assert moment_shift_identity(delta(1.0), 1, 1j) < 1e-14

    def test_dipole_k2(self):
        assert moment_shift_identity(dipole(), 2, 2j) < 1e-14

    def test_random_measures_up_to_k6(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            t = np.sort(rng.uniform(-3, 3, size=n))
            if np.any(np.diff(t) < 1e-2):
                continue
            m = rng.uniform(-2, 2, size=n)
            m[m == 0] = 1.0
            mu = DiscreteMeasure.from_masses(t, m)
            z = complex(rng.uniform(-2, 2), rng.uniform(0.5, 2))
            for k in range(7):
                assert moment_shift_identity(mu, k, z) < 1e-12

    def test_shifted_measure_drops_origin(self):
        mu = DiscreteMeasure.from_masses([0.0, 1.0], [0.5, -0.5])
        nu = shifted_measure(mu, 2)
        assert nu.t.tolist() == [1.0]


class TestDecayProfile:
    def test_single_atom_no_decay_order(self):
        prof = decay_profile(delta(1.0), [2.0 ** j for j in range(12)], nmax=2)
        assert prof.decay_order() == 0
        assert not prof.consistent
        # y |K(iy)| approaches 1/pi from below: peak at the end, flag down
        assert not prof.order_flags[0]

    def test_dipole_exactly_one_order(self):
        prof = decay_profile(dipole(), [2.0 ** j for j in range(12)], nmax=3)
        assert prof.order_flags[0]
        assert not prof.order_flags[1]      # y^2|K| climbs to 2/pi
        assert prof.decay_order() == 1

    def test_extreme_measure_four_orders(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=200))
        P = char_sequence(seq, N=2 * seq.count)
        mu = masses_from_charseq(seq, P)
        prof = decay_profile(mu, [2.0 ** j for j in range(15)], nmax=4)
        assert prof.consistent
        assert prof.trusted_until is not None


class TestWFiniteness:
    def test_constant_weight_total(self):
        mu = DiscreteMeasure.from_masses([-1.0, 0.5, 2.0],
                                         [0.25, 0.5, 0.25])
        w = tabulated([(-10.0, 1.0), (10.0, 1.0)])
        rep = w_finiteness(mu, w)
        assert rep.consistent
        assert rep.log_partial_sums[-1] == pytest.approx(0.0, abs=1e-12)

    def test_infinite_weight_atom(self):
        mu = DiscreteMeasure.from_masses([0.0, 1.0], [0.5, 0.5])
        w = discrete_support([0.0], [1.0])        # +inf at t=1
        rep = w_finiteness(mu, w)
        assert not rep.consistent
        assert rep.infinite_weight_atom == 1.0

    def test_exp_power_on_extreme_measure(self):
        from charseq_kit.weights import exp_power
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=300))
        P = char_sequence(seq, N=2 * seq.count)
        mu = masses_from_charseq(seq, P)
        # c below the critical constant pi |tan(pi/6 - pi/2)| = sqrt(3) pi
        rep = w_finiteness(mu, exp_power(0.5 * math.sqrt(3.0) * PI, 1.0 / 3.0))
        assert rep.consistent
        rep2 = w_finiteness(mu, exp_power(2.0 * math.sqrt(3.0) * PI, 1.0 / 3.0))
        assert not rep2.consistent


class TestExtremeBundle:
    def test_toy_alternation(self):
        seq = materialize(GeneratorSpec(kind="explicit", points=(0.0, 1.0)))
        P = char_sequence(seq, N=10)
        mu = masses_from_charseq(seq, P)
        rep = extreme_property_check(mu, [1j, 1 + 2j], kmax=0)
        assert rep.signs_alternate
        assert "outerness" in rep.outerness_note

    def test_no_alternation_detected(self):
        mu = DiscreteMeasure.from_masses([-1.0, 1.0], [1.0, 1.0])
        rep = extreme_property_check(mu, [1j], kmax=1)
        assert not rep.signs_alternate

    def test_grid_zero_freeness_on_preset(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=200))
        P = char_sequence(seq, N=2 * seq.count)
        mu = masses_from_charseq(seq, P)
        grid = [complex(x, y) for x in np.linspace(-3, 3, 5)
                for y in (-1.0, -0.3, 0.3, 1.0)]
        rep = extreme_property_check(mu, grid, kmax=4)
        assert math.isfinite(rep.min_log_abs_k)
        assert rep.signs_alternate
        assert rep.annihilation.consistent
