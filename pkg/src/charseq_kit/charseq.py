"""Characteristic sequences: principal-value log sums attached to each point.

For a point lam_n of a discrete sequence the characteristic value is

    p_n = 1/2 [ log(1+lam_n^2) + sum_{0<|n-k|<N} log((1+lam_k^2)/(lam_k-lam_n)^2) ]

with the window limit taken in increasing index distance |n-k| (the sum is
conditionally convergent; the pairing order is part of the definition, not an
implementation detail).  Values are reported together with the truncation
order and an error estimate; an optional Aitken delta-squared step
extrapolates the partial sums sampled at doubling windows.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from . import _kernels
from .errors import InputError
from .sequences import DiscreteSequence

DEFAULT_TRUNCATION = 10_000


def _thread_count(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("CHARSEQ_KIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


@dataclass(frozen=True)
class CharEntry:
    n: int
    lam: float
    p: float
    err: float
    N: int
    method: str          # raw | aitken | aitken-fallback
    window_pairs: int    # largest index distance actually summed

    def as_row(self):
        return (self.n, self.lam, self.p, self.err, self.N, self.method)


@dataclass(frozen=True)
class CharacteristicSequence:
    seq: DiscreteSequence
    entries: dict                    # n -> CharEntry, insertion-ordered by n

    def __getitem__(self, n: int) -> CharEntry:
        return self.entries[n]

    def __contains__(self, n: int) -> bool:
        return n in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def p(self, n: int) -> float:
        return self.entries[n].p

    def indices(self):
        return self.entries.keys()

    def covers(self, indices: Iterable[int]) -> bool:
        return all(n in self.entries for n in indices)


def _partial_sums(seq: DiscreteSequence, n: int, windows):
    pos = seq.position(n)
    sums, reached = _kernels.char_partial_sums(
        seq.points, pos, 0, seq.count - 1,
        np.asarray(list(windows), dtype=np.int64))
    return sums, reached


def char_value(seq: DiscreteSequence, n: int, N: int = DEFAULT_TRUNCATION,
               accelerate: bool = False) -> Tuple[float, float]:
    """Characteristic value p_n and its error estimate.

    Raw mode evaluates the window sums at N/2 and N and reports
    |p^(N) - p^(N/2)|.  Accelerated mode samples N, 2N, 4N and applies Aitken
    delta-squared to the p-values, guarded against non-contracting input (the
    guard falls back to the raw value at 4N; a fully saturated window reports
    error 0, meaning "exact at this truncation").
    """
    entry = _char_entry(seq, n, N, accelerate)
    return entry.p, entry.err


def _char_entry(seq: DiscreteSequence, n: int, N: int,
                accelerate: bool) -> CharEntry:
    if seq.count < 2:
        raise InputError("characteristic values need at least two points")
    if N < 2:
        raise InputError("truncation order N must be >= 2 (window 0<|n-k|<N)")
    lam = seq.point(n)
    base = 0.5 * math.log1p(lam * lam)
    if accelerate:
        windows = [N, 2 * N, 4 * N]
        sums, reached = _partial_sums(seq, n, windows)
        p1, p2, p3 = (base + 0.5 * s for s in sums)
        d1 = p2 - p1
        d2 = p3 - p2
        if d2 == 0.0:
            # saturated (or exactly converged) window
            return CharEntry(n, lam, p3, 0.0, N, "aitken", reached)
        if d1 == 0.0 or abs(d2) >= abs(d1):
            return CharEntry(n, lam, p3, abs(d2), N, "aitken-fallback", reached)
        acc = p3 - d2 * d2 / (d2 - d1)
        return CharEntry(n, lam, acc, abs(acc - p3), N, "aitken", reached)
    half = max(2, (N + 1) // 2)
    windows = [half, N] if half < N else [N]
    sums, reached = _partial_sums(seq, n, windows)
    if reached == 0:
        raise InputError(f"empty summation window around index {n}")
    p_final = base + 0.5 * sums[-1]
    err = abs(0.5 * (sums[-1] - sums[0])) if len(sums) == 2 else 0.0
    return CharEntry(n, lam, p_final, err, N, "raw", reached)


def char_sequence(seq: DiscreteSequence, indices: Optional[Iterable[int]] = None,
                  N: int = DEFAULT_TRUNCATION, accelerate: bool = False,
                  threads: Optional[int] = None) -> CharacteristicSequence:
    """Batch char_value over an index range (default: every materialized index).

    Deterministic regardless of worker count: each index is computed
    independently and results are assembled in index order.
    """
    if indices is None:
        idx = list(seq.indices())
    else:
        idx = sorted(set(int(i) for i in indices))
    workers = _thread_count(threads)
    if workers == 1 or len(idx) < 4:
        entries = [_char_entry(seq, n, N, accelerate) for n in idx]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(lambda n: _char_entry(seq, n, N, accelerate), idx))
    return CharacteristicSequence(seq=seq, entries={e.n: e for e in entries})


def insertion_delta(seq: DiscreteSequence, n: int, a: float,
                    collision_factor: float = 1e-3) -> float:
    """Exact change of p_n caused by inserting a new point ``a``:
    1/2 log((1+a^2)/(lam_n-a)^2), valid at any truncation whose window
    covers ``a``."""
    lam = seq.point(n)
    if seq.contains_point(a):
        raise InputError(f"point {a} already belongs to the sequence")
    gap = seq.gap_near(a)
    dist = abs(lam - a)
    if dist == 0.0:
        raise InputError("insertion point collides with lam_n")
    if math.isfinite(gap) and dist < collision_factor * gap:
        import warnings

        from .errors import NearCollisionWarning
        warnings.warn(f"insertion point {a} within {collision_factor} of the "
                      f"local gap around index {n}", NearCollisionWarning,
                      stacklevel=2)
    return 0.5 * math.log1p(a * a) - math.log(dist)
