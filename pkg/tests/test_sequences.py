"""Sequence materialization, natural-order indexing, density and balance."""

import math

import numpy as np
import pytest

from charseq_kit import (DiscreteSequence, GeneratorSpec, InputError,
                         balance_partial_sums, doubling_schedule, materialize,
                         upper_density)


def seq_of(*points):
    return materialize(GeneratorSpec(kind="explicit", points=tuple(points)))


class TestMaterialize:
    def test_explicit_natural_order(self):
        seq = seq_of(-2.0, -1.0, 0.5, 3.0)
        assert seq.point(-2) == -2.0
        assert seq.point(-1) == -1.0
        assert seq.point(0) == 0.5
        assert seq.point(1) == 3.0
        assert seq.index_min == -2 and seq.index_max == 1

    def test_one_sided_power(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=0.5, count=3))
        assert seq.points.tolist() == [1.0, 4.0, 9.0]
        assert seq.point(0) == 1.0

    def test_two_sided_power(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=0.5,
                                        two_sided=True, count=3))
        assert seq.points.tolist() == [-9.0, -4.0, -1.0, 1.0, 4.0, 9.0]
        assert seq.point(0) == 1.0 and seq.point(-1) == -1.0

    def test_even_mirror(self):
        seq = materialize(GeneratorSpec(kind="even_mirror",
                                        positive_points=(0.5, 1.5)))
        assert seq.points.tolist() == [-1.5, -0.5, 0.5, 1.5]
        assert seq.point(0) == 0.5 and seq.point(-1) == -0.5
        assert seq.is_even_mirror()

    def test_geometric(self):
        seq = materialize(GeneratorSpec(kind="geometric", ratio=2.0, count=5))
        assert seq.points.tolist() == [1.0, 2.0, 4.0, 8.0, 16.0]

    def test_rejects_bad_input(self):
        with pytest.raises(InputError):
            seq_of(1.0, 1.0)
        with pytest.raises(InputError):
            seq_of(2.0, 1.0)
        with pytest.raises(InputError):
            materialize(GeneratorSpec(kind="power", alpha=-1.0, count=5))
        with pytest.raises(InputError):
            materialize(GeneratorSpec(kind="geometric", ratio=0.5, count=5))

    def test_reindexing_invariance(self):
        """Same point set from different descriptions: same index map."""
        a = materialize(GeneratorSpec(kind="even_mirror",
                                      positive_points=(1.0, 4.0, 9.0)))
        b = materialize(GeneratorSpec(kind="power", alpha=0.5,
                                      two_sided=True, count=3))
        for n in a.indices():
            assert a.point(n) == b.point(n)

    def test_even_mirror_symmetry_identity(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=20))
        for n in range(0, 20):
            assert seq.point(-n - 1) == -seq.point(n)


class TestUpperDensity:
    def test_unit_spacing(self):
        k = 50
        pts = [float(x) for x in range(-k, 0)] + [float(x) for x in range(1, k + 1)]
        seq = seq_of(*pts)
        rep = upper_density(seq, [k / 4, k / 2, float(k)])
        # open window (-K, K) holds 2K - 2 of the points
        assert rep.counts[-1] == 2 * k - 2
        assert rep.ratios[-1] == pytest.approx(1.0, rel=0.05)
        assert not rep.zero_density_consistent

    def test_squares(self):
        k = 40
        seq = materialize(GeneratorSpec(kind="power", alpha=0.5, count=k))
        rep = upper_density(seq, [float(k * k)])
        assert rep.counts[0] == k - 1            # n^2 < K^2 strictly
        assert rep.ratios[0] == pytest.approx((k - 1) / (2.0 * k * k))

    def test_cubes_window_1e6(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        count=200))
        rep = upper_density(seq, [1e6])
        # direct count oracle: n^3 < 1e6 iff n <= 99
        assert rep.counts[0] == sum(1 for n in range(1, 201) if n ** 3 < 1e6)
        assert rep.counts[0] == 99
        assert rep.ratios[0] == pytest.approx(99 / 2e6)

    def test_zero_density_consistent_on_cubes(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=500))
        extent = seq.points[-1]
        rep = upper_density(seq, [extent * 2.0 ** (-j) for j in range(8, -1, -1)])
        assert rep.zero_density_consistent

    def test_schedule_validation(self):
        seq = seq_of(0.0, 1.0)
        with pytest.raises(InputError):
            upper_density(seq, [])
        with pytest.raises(InputError):
            upper_density(seq, [2.0, 1.0])


class TestBalance:
    def test_even_single_unpaired_term_bound(self):
        seq = materialize(GeneratorSpec(
            kind="even_mirror",
            positive_points=tuple(n + 0.5 for n in range(64))))
        rep = balance_partial_sums(seq, [2, 4, 8, 16, 32, 64])
        for N, s in zip(rep.n_schedule, rep.partial_sums):
            lam = seq.point(N - 1)
            assert abs(s) <= abs(lam) / (1.0 + lam * lam)   # exact bound
        # gaps still ~1/N at this truncation: honestly not yet witnessed
        assert not rep.balanced_consistent

    def test_even_cubes_witnessed_at_depth(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=2000))
        rep = balance_partial_sums(seq, doubling_schedule(2048))
        assert rep.balanced_consistent

    def test_geometric_converges_to_direct_sum(self):
        seq = materialize(GeneratorSpec(kind="geometric", ratio=2.0, count=80))
        rep = balance_partial_sums(seq, doubling_schedule(80))
        # independent oracle: direct full sum at machine precision
        total = math.fsum(x / (1.0 + x * x) for x in seq.points)
        assert rep.partial_sums[-1] == pytest.approx(total, rel=1e-14)
        assert rep.balanced_consistent

    def test_integers_diverge(self):
        pts = tuple(float(n) for n in range(1, 4097))
        seq = seq_of(*pts)
        rep = balance_partial_sums(seq, [16, 32, 64, 128, 256, 512, 1024, 2048])
        assert not rep.balanced_consistent
        # gaps approach log 2, the harmonic doubling increment
        assert rep.cauchy_gaps[-1] == pytest.approx(math.log(2.0), rel=0.05)

    def test_saturation_is_not_convergence(self):
        pts = tuple(float(n) for n in range(1, 40))
        seq = seq_of(*pts)
        rep = balance_partial_sums(seq, [8, 16, 32, 64, 128])
        assert rep.saturated_from is not None
        assert not rep.balanced_consistent
