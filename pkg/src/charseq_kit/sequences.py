"""Discrete real sequences with natural-order indexing plus density and
balancedness diagnostics.

A sequence here is a finite, strictly increasing truncation of a conceptually
infinite point set.  Natural-order indexing assigns index 0 to the smallest
non-negative point and index -1 to the largest negative point, so a point's
index never changes as the truncation grows.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._accum import Neumaier
from .errors import InputError

DEFAULT_BALANCE_TOL = 1e-8
DEFAULT_DENSITY_THRESHOLD = 0.05


@dataclass(frozen=True)
class GeneratorSpec:
    """Rule that produced (and can extend) a materialized sequence."""

    kind: str                         # explicit | power | even_mirror | geometric
    alpha: Optional[float] = None     # power: points n^(1/alpha)
    two_sided: bool = False
    ratio: Optional[float] = None     # geometric: points ratio^n
    count: Optional[int] = None
    positive_points: Optional[tuple] = None
    points: Optional[tuple] = None


@dataclass(frozen=True)
class DiscreteSequence:
    points: np.ndarray               # ascending float64, immutable by convention
    neg_count: int                   # number of negative points
    generator: Optional[GeneratorSpec] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size < 1:
            raise InputError("a sequence needs at least one point")
        if not np.all(np.diff(pts) > 0):
            raise InputError("points must be strictly increasing with no duplicates")
        if not np.all(np.isfinite(pts)):
            raise InputError("points must be finite")
        object.__setattr__(self, "points", pts)
        expected_neg = int(np.searchsorted(pts, 0.0, side="left"))
        if self.neg_count != expected_neg:
            raise InputError("neg_count does not match the point data")

    # -- indexing ---------------------------------------------------------
    @property
    def count(self) -> int:
        return int(self.points.size)

    @property
    def index_min(self) -> int:
        return -self.neg_count

    @property
    def index_max(self) -> int:
        return self.count - self.neg_count - 1

    def position(self, n: int) -> int:
        """Array position of natural index n."""
        pos = n + self.neg_count
        if not 0 <= pos < self.count:
            raise InputError(f"index {n} outside materialized range "
                             f"[{self.index_min}, {self.index_max}]")
        return pos

    def point(self, n: int) -> float:
        return float(self.points[self.position(n)])

    def indices(self) -> range:
        return range(self.index_min, self.index_max + 1)

    def contains_point(self, x: float) -> bool:
        i = bisect_left(self.points.tolist(), x)
        return i < self.count and self.points[i] == x

    def local_gap(self, n: int) -> float:
        """Smallest gap to a neighbouring point; the local resolution scale."""
        pos = self.position(n)
        gaps = []
        if pos > 0:
            gaps.append(self.points[pos] - self.points[pos - 1])
        if pos + 1 < self.count:
            gaps.append(self.points[pos + 1] - self.points[pos])
        return float(min(gaps)) if gaps else math.inf

    def gap_near(self, x: float) -> float:
        """Local inter-point gap around an arbitrary location x."""
        pts = self.points
        i = int(np.searchsorted(pts, x))
        lo = max(0, i - 1)
        hi = min(self.count - 1, i + 1)
        if hi == lo:
            return math.inf
        return float(min(np.diff(pts[lo:hi + 1])))

    def is_even_mirror(self) -> bool:
        pts = self.points
        return bool(pts.size % 2 == 0 and np.array_equal(pts, -pts[::-1]))

    # Which sides does the conceptually infinite sequence continue on?
    # Explicit truncations are conservatively assumed to continue both ways.
    @property
    def extends_above(self) -> bool:
        gen = self.generator
        if gen is None or gen.kind == "explicit":
            return True
        return True          # every generator here is unbounded above

    @property
    def extends_below(self) -> bool:
        gen = self.generator
        if gen is None or gen.kind == "explicit":
            return True
        if gen.kind in ("even_mirror", "power") and \
                (gen.kind == "even_mirror" or gen.two_sided):
            return True
        return False         # one-sided power and geometric stay bounded below


def materialize(spec: GeneratorSpec) -> DiscreteSequence:
    """Build a DiscreteSequence from a generator description."""
    kind = spec.kind
    if kind == "explicit":
        if not spec.points:
            raise InputError("explicit generator needs points")
        pts = np.asarray(spec.points, dtype=np.float64)
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise InputError("explicit points must be strictly increasing")
    elif kind == "power":
        if spec.alpha is None or spec.alpha <= 0:
            raise InputError("power generator requires alpha > 0")
        if spec.count is None or spec.count < 2:
            raise InputError("power generator requires count >= 2")
        n = np.arange(1, spec.count + 1, dtype=np.float64)
        side = n ** (1.0 / spec.alpha)
        pts = np.concatenate([-side[::-1], side]) if spec.two_sided else side
    elif kind == "even_mirror":
        if not spec.positive_points:
            raise InputError("even_mirror generator needs positive_points")
        side = np.asarray(spec.positive_points, dtype=np.float64)
        if np.any(side <= 0) or (side.size > 1 and not np.all(np.diff(side) > 0)):
            raise InputError("positive_points must be strictly increasing and > 0")
        pts = np.concatenate([-side[::-1], side])
    elif kind == "geometric":
        if spec.ratio is None or spec.ratio <= 1.0:
            raise InputError("geometric generator requires ratio > 1")
        if spec.count is None or spec.count < 2:
            raise InputError("geometric generator requires count >= 2")
        pts = spec.ratio ** np.arange(spec.count, dtype=np.float64)
    else:
        raise InputError(f"unknown generator kind {kind!r}")
    neg = int(np.searchsorted(pts, 0.0, side="left"))
    return DiscreteSequence(points=pts, neg_count=neg, generator=spec)


# -- density ---------------------------------------------------------------

@dataclass(frozen=True)
class DensityReport:
    radii: tuple
    counts: tuple
    ratios: tuple
    tail_sup: float
    threshold: float
    zero_density_consistent: bool

    def __post_init__(self):
        if any(r < 0 for r in self.ratios):
            raise InputError("ratios must be non-negative")


def upper_density(seq: DiscreteSequence, schedule: Sequence[float],
                  threshold: float = DEFAULT_DENSITY_THRESHOLD) -> DensityReport:
    """Counting ratios #[seq ∩ (-A, A)] / (2A) over a window schedule.

    The verdict flag is truncation-qualified: it only states that the ratios
    fall and stay below ``threshold`` on the tail of the schedule.  Radii
    beyond the materialized extent are rejected since counts would saturate
    artificially.
    """
    sched = [float(a) for a in schedule]
    if not sched:
        raise InputError("empty density schedule")
    if any(a <= 0 for a in sched) or any(b <= a for a, b in zip(sched, sched[1:])):
        raise InputError("density schedule must be positive and increasing")
    extent = float(max(abs(seq.points[0]), abs(seq.points[-1])))
    if sched[-1] > extent:
        raise InputError(f"schedule radius {sched[-1]} exceeds materialized extent {extent}")
    pts = seq.points
    counts = []
    for a in sched:
        counts.append(int(bisect_left(pts.tolist(), a) - bisect_right(pts.tolist(), -a)))
    ratios = [cnt / (2.0 * a) for cnt, a in zip(counts, sched)]
    tail = ratios[len(ratios) // 2:]
    tail_sup = max(tail)
    consistent = tail_sup < threshold and tail[-1] <= tail[0]
    return DensityReport(tuple(sched), tuple(counts), tuple(ratios),
                         tail_sup, threshold, consistent)


# -- balancedness -----------------------------------------------------------

@dataclass(frozen=True)
class BalanceReport:
    n_schedule: tuple
    partial_sums: tuple
    cauchy_gaps: tuple        # |S_{2N} - S_N| for consecutive doubling entries
    saturated_from: Optional[int]   # first schedule entry whose window saturated
    tolerance: float
    balanced_consistent: bool


def _balance_partial_sums(seq: DiscreteSequence, n_schedule: Sequence[int]):
    """S_N = sum over |n| < N of lam_n/(1+lam_n^2), accumulated in symmetric
    pairs (n, -n-1) so that even-mirror cancellation is float-exact."""
    pts = seq.points
    neg = seq.neg_count
    total = seq.count
    sums = []
    saturated_from = None
    for N in n_schedule:
        covered = 0
        acc = Neumaier()
        for i in range(N):
            pos_hi = neg + i          # natural index +i
            pos_lo = neg - i - 1      # natural index -i-1
            hi_ok = pos_hi < total and i < N
            lo_ok = pos_lo >= 0 and i + 1 < N
            if hi_ok and lo_ok:
                x_hi = pts[pos_hi]
                x_lo = pts[pos_lo]
                acc.add(x_hi / (1.0 + x_hi * x_hi) + x_lo / (1.0 + x_lo * x_lo))
                covered += 2
            elif hi_ok:
                x_hi = pts[pos_hi]
                acc.add(x_hi / (1.0 + x_hi * x_hi))
                covered += 1
            elif lo_ok:
                x_lo = pts[pos_lo]
                acc.add(x_lo / (1.0 + x_lo * x_lo))
                covered += 1
            else:
                break
        window_size = min(N - 1, seq.index_max) - max(-(N - 1), seq.index_min) + 1
        if covered < window_size:
            raise AssertionError("window accounting bug")
        hit_top = N - 1 > seq.index_max and seq.extends_above
        hit_bottom = -(N - 1) < seq.index_min and seq.extends_below
        if saturated_from is None and (hit_top or hit_bottom):
            saturated_from = N
        sums.append(acc.total)
    return sums, saturated_from


def balance_partial_sums(seq: DiscreteSequence, n_schedule: Sequence[int],
                         tolerance: float = DEFAULT_BALANCE_TOL) -> BalanceReport:
    """Index-symmetric partial sums of lam/(1+lam^2) and their Cauchy gaps.

    The verdict is "balanced-consistent at truncation": the gaps |S_{2N}-S_N|
    must fall below the tolerance before the window saturates the materialized
    range (a saturated window freezes the sums and says nothing about the
    limit).
    """
    sched = [int(n) for n in n_schedule]
    if not sched or any(n <= 0 for n in sched) or \
            any(b <= a for a, b in zip(sched, sched[1:])):
        raise InputError("n-schedule must be positive and increasing")
    sums, saturated_from = _balance_partial_sums(seq, sched)
    by_n = dict(zip(sched, sums))
    gaps = []
    gap_ns = []
    for n in sched:
        if 2 * n in by_n:
            gaps.append(abs(by_n[2 * n] - by_n[n]))
            gap_ns.append(n)
    trusted = [g for n, g in zip(gap_ns, gaps)
               if saturated_from is None or 2 * n < saturated_from]
    consistent = bool(trusted) and trusted[-1] < tolerance
    return BalanceReport(tuple(sched), tuple(sums), tuple(gaps),
                         saturated_from, tolerance, consistent)


def doubling_schedule(limit: int, start: int = 2) -> list:
    """start, 2*start, ... up to (and including one value >= ) limit."""
    if limit < start:
        return [start]
    out = []
    n = start
    while n < limit:
        out.append(n)
        n *= 2
    out.append(n)
    return out
