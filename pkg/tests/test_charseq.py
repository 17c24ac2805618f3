"""Characteristic values: defining sums, symmetry, insertion, acceleration."""

import math

import numpy as np
import pytest

from charseq_kit import (GeneratorSpec, InputError, NearCollisionWarning,
                         char_sequence, char_value, insertion_delta,
                         materialize)

HALF_LN2 = 0.5 * math.log(2.0)


def seq_of(*points):
    return materialize(GeneratorSpec(kind="explicit", points=tuple(points)))


def brute_force_p(seq, n):
    """Independent oracle: same defining sum, sorted by point distance and
    fed to exact summation."""
    lam = seq.point(n)
    terms = sorted((math.log1p(seq.point(k) ** 2)
                    - 2.0 * math.log(abs(seq.point(k) - lam))
                    for k in seq.indices() if k != n),
                   key=abs)
    return 0.5 * (math.log1p(lam * lam) + math.fsum(terms))


class TestCharValue:
    def test_two_point_toy(self):
        seq = seq_of(0.0, 1.0)
        p0, _ = char_value(seq, 0, N=10)
        p1, _ = char_value(seq, 1, N=10)
        assert p0 == pytest.approx(HALF_LN2, rel=1e-15)
        assert p1 == pytest.approx(HALF_LN2, rel=1e-15)

    def test_full_window_matches_brute_force(self):
        rng = np.random.default_rng(123)
        for trial in range(50):
            size = int(rng.integers(3, 41))
            pts = np.sort(rng.uniform(-100, 100, size=size))
            while np.any(np.diff(pts) < 1e-3):
                pts = np.sort(rng.uniform(-100, 100, size=size))
            seq = seq_of(*pts)
            n = int(rng.integers(seq.index_min, seq.index_max + 1))
            p, _ = char_value(seq, n, N=2 * size)
            assert p == pytest.approx(brute_force_p(seq, n), rel=1e-12, abs=1e-12)

    def test_even_mirror_exact_equality(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=30))
        for n in (0, 3, 11, 29):
            p_pos, _ = char_value(seq, n, N=100)
            p_neg, _ = char_value(seq, -n - 1, N=100)
            assert p_pos == p_neg       # bitwise, by pairwise accumulation

    def test_window_semantics(self):
        # window 0<|n-k|<N: N=2 takes only the immediate neighbours
        seq = seq_of(0.0, 1.0, 3.0)
        p, _ = char_value(seq, 0, N=2)
        expected = 0.5 * (math.log1p(0.0) + math.log1p(1.0) - 2.0 * math.log(1.0))
        assert p == pytest.approx(expected, rel=1e-15)

    def test_errors(self):
        seq = seq_of(0.0, 1.0)
        with pytest.raises(InputError):
            char_value(seq, 5, N=10)
        with pytest.raises(InputError):
            char_value(seq, 0, N=1)


class TestCharSequence:
    def test_batch_matches_single(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=0.5,
                                        two_sided=True, count=20))
        P = char_sequence(seq, N=100)
        for n in seq.indices():
            p, e = char_value(seq, n, N=100)
            assert P.p(n) == p
            assert P[n].err == e

    def test_empty_range(self):
        seq = seq_of(0.0, 1.0)
        P = char_sequence(seq, indices=[], N=10)
        assert len(P) == 0

    def test_thread_determinism(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=1.0 / 3.0,
                                        two_sided=True, count=40))
        a = char_sequence(seq, N=200, threads=1)
        b = char_sequence(seq, N=200, threads=4)
        assert list(a.indices()) == list(b.indices())
        for n in a.indices():
            assert a.p(n) == b.p(n)


class TestAcceleration:
    def test_saturated_window_reports_exact(self):
        seq = seq_of(0.0, 1.0, 2.0)
        p_raw, _ = char_value(seq, 0, N=50)
        p_acc, err = char_value(seq, 0, N=50, accelerate=True)
        assert p_acc == p_raw
        assert err == 0.0

    def test_acceleration_on_slow_tail(self):
        seq = materialize(GeneratorSpec(kind="power", alpha=0.5,
                                        two_sided=True, count=4000))
        full, _ = char_value(seq, 5, N=2 * seq.count)
        p_raw, _ = char_value(seq, 5, N=200)
        p_acc, _ = char_value(seq, 5, N=200, accelerate=True)
        assert abs(p_acc - full) < abs(p_raw - full)

    def test_error_estimates_shrink_with_doubling(self):
        for spec in (GeneratorSpec(kind="power", alpha=0.5, two_sided=True,
                                   count=2048),
                     GeneratorSpec(kind="geometric", ratio=2.0, count=60)):
            seq = materialize(spec)
            errs = []
            for N in (64, 128, 256, 512):
                _, err = char_value(seq, 0, N=N)
                errs.append(err)
            assert all(b <= a for a, b in zip(errs, errs[1:]))


class TestInsertionDelta:
    def test_formula(self):
        seq = seq_of(0.0, 1.0)
        assert insertion_delta(seq, 0, 3.0) == \
            pytest.approx(0.5 * math.log(10.0 / 9.0), rel=1e-12)

    def test_far_insertion_vanishes(self):
        seq = seq_of(0.0, 1.0)
        d3 = insertion_delta(seq, 0, 1e3)
        d5 = insertion_delta(seq, 0, 1e5)
        assert 0.0 < d5 < d3 < 1e-5
        # beyond float resolution the limit value 0 is reached exactly
        assert insertion_delta(seq, 0, 1e9) == 0.0

    def test_collision_paths(self):
        seq = seq_of(0.0, 1.0)
        with pytest.raises(InputError):
            insertion_delta(seq, 0, 1.0)          # existing point
        with pytest.warns(NearCollisionWarning):
            insertion_delta(seq, 0, 1e-5)         # within 1e-3 of the gap scale

    def test_consistency_with_recomputation(self):
        """Inserting a point changes p_n by exactly the predicted delta."""
        rng = np.random.default_rng(5)
        for trial in range(20):
            size = int(rng.integers(3, 20))
            pts = np.sort(rng.uniform(-50, 50, size=size))
            if np.any(np.diff(pts) < 1e-2):
                continue
            seq = seq_of(*pts)
            n = int(rng.integers(seq.index_min, seq.index_max + 1))
            lam = seq.point(n)
            a = float(rng.uniform(51, 80))
            delta = insertion_delta(seq, n, a)
            seq2 = seq_of(*sorted([*pts, a]))
            n2 = next(m for m in seq2.indices() if seq2.point(m) == lam)
            p_before, _ = char_value(seq, n, N=4 * size)
            p_after, _ = char_value(seq2, n2, N=4 * size)
            assert p_after - p_before == pytest.approx(delta, rel=1e-12,
                                                       abs=1e-12)
