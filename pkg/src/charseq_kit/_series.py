"""Log-domain partial sums of positive series and the shared convergence rule.

Every "< infinity" condition in the toolkit reduces to the same question: do
the partial sums of a positive series look convergent at this truncation?  The
uniform rule (stated in every verdict): chunk the terms at doubling counts;
the chunk increments must decay by a factor >= GEOMETRIC_FACTOR across the
last three doublings and the geometric extrapolation of the remaining tail
must stay below TAIL_FRACTION of the accumulated sum.  Increments that vanish
at float resolution count as converged provided the preceding finite
increments were already decaying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from ._accum import logaddexp, logdiffexp

GEOMETRIC_FACTOR = 1.5
TAIL_FRACTION = 1e-6


@dataclass(frozen=True)
class SeriesReport:
    log_partial_sums: tuple      # at doubling checkpoints (and the final count)
    log_increments: tuple
    log_total: float
    log_tail_estimate: float
    n_terms: int
    converged: bool
    reason: str


def analyze_log_series(log_terms: Sequence[float],
                       geometric_factor: float = GEOMETRIC_FACTOR,
                       tail_fraction: float = TAIL_FRACTION) -> SeriesReport:
    """Feed the log-magnitudes of a positive series in its defining order."""
    if len(log_terms) == 0:
        return SeriesReport((), (), -math.inf, -math.inf, 0, True,
                            "empty series")
    total = -math.inf
    checkpoints = []
    mark = 2
    for i, lt in enumerate(log_terms):
        total = logaddexp(total, lt)
        if i + 1 == mark:
            checkpoints.append(total)
            mark *= 2
    if not checkpoints or checkpoints[-1] != total:
        checkpoints.append(total)
    incs = [checkpoints[0]]
    incs += [logdiffexp(b, a) for a, b in zip(checkpoints, checkpoints[1:])]
    n = len(log_terms)
    if math.isinf(total) and total > 0:
        return SeriesReport(tuple(checkpoints), tuple(incs), total, math.inf,
                            n, False, "sum overflowed")
    if len(incs) < 4:
        return SeriesReport(tuple(checkpoints), tuple(incs), total, math.inf,
                            n, False, "too few doublings to judge convergence")
    log_factor = math.log(geometric_factor)
    last = incs[-3:]
    if last[-1] == -math.inf:
        finite = [x for x in incs if x != -math.inf]
        if not finite:
            return SeriesReport(tuple(checkpoints), tuple(incs), total,
                                -math.inf, n, True, "all increments vanished")
        decaying = len(finite) >= 2 and finite[-2] - finite[-1] >= log_factor
        small = finite[-1] <= total + math.log(tail_fraction)
        ok = decaying and small
        return SeriesReport(
            tuple(checkpoints), tuple(incs), total, -math.inf, n, ok,
            "tail vanished at float resolution" if ok else
            "tail vanished before geometric decay was established")
    if any(x == -math.inf for x in last[:-1]):
        return SeriesReport(tuple(checkpoints), tuple(incs), total, math.inf,
                            n, False, "non-monotone saturation pattern")
    for a, b in zip(last, last[1:]):
        if a - b < log_factor:
            return SeriesReport(tuple(checkpoints), tuple(incs), total,
                                math.inf, n, False,
                                f"increments not decaying by {geometric_factor}x")
    rho = math.exp(last[-1] - last[-2])
    log_tail = last[-1] + math.log(rho / (1.0 - rho))
    if log_tail >= total + math.log(tail_fraction):
        return SeriesReport(tuple(checkpoints), tuple(incs), total, log_tail,
                            n, False, "extrapolated tail above tolerance")
    return SeriesReport(tuple(checkpoints), tuple(incs), total, log_tail, n,
                        True, "geometric decay with negligible tail")


@dataclass(frozen=True)
class BoundednessReport:
    head_max: float
    tail_max: float
    slack: float
    bounded: bool


def analyze_log_boundedness(log_values: Sequence[float],
                            slack: float = 0.1) -> BoundednessReport:
    """Is a sequence (given in log domain) bounded along its tail?

    Splits at two thirds; bounded means the tail maximum does not exceed the
    head maximum by more than ``slack`` log-units.
    """
    vals = list(log_values)
    if len(vals) < 6:
        return BoundednessReport(-math.inf, -math.inf, slack, False)
    cut = max(1, (2 * len(vals)) // 3)
    head = max(vals[:cut])
    tail = max(vals[cut:])
    return BoundednessReport(head, tail, slack, tail <= head + slack)
