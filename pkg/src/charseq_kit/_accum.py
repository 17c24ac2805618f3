"""Compensated summation and overflow-safe log-domain helpers.

The Neumaier accumulator here is the reference semantics for every ordered sum
in the package; the compiled kernels replicate it operation for operation so
that both backends produce bit-identical results.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence


class Neumaier:
    """Kahan-Babuska (Neumaier) compensated accumulator."""

    __slots__ = ("s", "c")

    def __init__(self) -> None:
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        s = self.s
        t = s + x
        if abs(s) >= abs(x):
            self.c += (s - t) + x
        else:
            self.c += (x - t) + s
        self.s = t

    @property
    def total(self) -> float:
        return self.s + self.c


def compensated_sum(terms: Iterable[float]) -> float:
    acc = Neumaier()
    for x in terms:
        acc.add(x)
    return acc.total


def logsumexp(values: Sequence[float]) -> float:
    """log(sum(exp(v))) with the common-scale factored out; -inf for empty."""
    if len(values) == 0:
        return -math.inf
    m = max(values)
    if m == -math.inf:
        return -math.inf
    if math.isinf(m):
        return m
    total = math.fsum(math.exp(v - m) for v in values)
    return m + math.log(total)


def logaddexp(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def logdiffexp(a: float, b: float) -> float:
    """log(exp(a) - exp(b)) for a >= b; -inf when they agree to the last bit."""
    if b == -math.inf:
        return a
    if b >= a:
        return -math.inf
    return a + math.log1p(-math.exp(b - a))


def signed_scaled_sum(exponents: Sequence[float], signs: Sequence[float]):
    """Sum of sign_k * exp(e_k) with the max exponent factored out.

    Returns (signed_total_scaled, abs_total_scaled, max_exponent) so that the
    true values are total_scaled * exp(max_exponent).  Entries with e = -inf
    contribute nothing.
    """
    m = max(exponents, default=-math.inf)
    if m == -math.inf:
        return 0.0, 0.0, -math.inf
    val = math.fsum(s * math.exp(e - m) for e, s in zip(exponents, signs))
    scale = math.fsum(math.exp(e - m) for e in exponents)
    return val, scale, m
