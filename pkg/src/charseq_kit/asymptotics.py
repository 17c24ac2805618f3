"""Closed-form harmonic-conjugate values for the power-lattice presets and the
comparison of computed characteristic values against them.

For the one-sided lattice {n^(1/alpha)} (0 < alpha < 1/2) the conjugate of
u = pi x^alpha 1_{x>0} evaluates on the lattice to -pi n tan(alpha pi - pi/2);
for the symmetric lattice {+-n^(1/alpha)} (0 < alpha < 1) the odd extension
gives -pi n tan(alpha pi/2 - pi/2).  Which sign relates these values to the
characteristic sequence is settled empirically by the comparison report (the
realized sign on these presets is -1: p_n tracks minus the conjugate), and the
residual carries an O(log lambda_n) term whose fitted size is reported, never
assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .charseq import CharacteristicSequence, char_sequence
from .criteria import (SequenceGates, Verdict, main_criterion, run_gates,
                       WITNESSED)
from .errors import InputError
from .sequences import DiscreteSequence, GeneratorSpec, materialize
from .weights import exp_power

INTERIOR_MARGIN = 10   # requested indices should sit count/margin inside the edge


@dataclass(frozen=True)
class ConjugateModel:
    kind: str          # one_sided | two_sided
    alpha: float

    def __post_init__(self):
        if self.kind == "one_sided":
            if not 0.0 < self.alpha < 0.5:
                raise InputError("one-sided conjugate model needs alpha in (0, 1/2)")
        elif self.kind == "two_sided":
            if not 0.0 < self.alpha < 1.0:
                raise InputError("two-sided conjugate model needs alpha in (0, 1)")
        else:
            raise InputError(f"unknown conjugate model {self.kind!r}")

    def u_tilde(self, n: int) -> float:
        if self.kind == "one_sided":
            return conjugate_one_sided(self.alpha, n)
        return conjugate_two_sided(self.alpha, n)

    def lattice_point(self, n: int) -> float:
        return float(n) ** (1.0 / self.alpha)


def conjugate_one_sided(alpha: float, n: int) -> float:
    """Conjugate value at the lattice point n^(1/alpha) of the one-sided
    power profile: -pi n tan(alpha pi - pi/2)."""
    if not 0.0 < alpha < 0.5:
        raise InputError("alpha must lie in (0, 1/2)")
    if n < 1:
        raise InputError("lattice label n must be >= 1")
    return -math.pi * n * math.tan(alpha * math.pi - 0.5 * math.pi)


def conjugate_two_sided(alpha: float, n: int) -> float:
    """Conjugate value at +-n^(1/alpha) of the symmetric power profile:
    -pi n tan(alpha pi/2 - pi/2); even in the lattice point."""
    if not 0.0 < alpha < 1.0:
        raise InputError("alpha must lie in (0, 1)")
    if n < 1:
        raise InputError("lattice label n must be >= 1")
    return -math.pi * n * math.tan(0.5 * alpha * math.pi - 0.5 * math.pi)


def preset_sequence(model: ConjugateModel, count: int) -> DiscreteSequence:
    return materialize(GeneratorSpec(kind="power", alpha=model.alpha,
                                     two_sided=model.kind == "two_sided",
                                     count=count))


@dataclass(frozen=True)
class ComparisonRow:
    n: int               # natural-order index in the materialized sequence
    lattice_n: int       # label of the lattice point (lam = lattice_n^(1/alpha))
    lam: float
    p: float
    conj: float
    residual_plus: float     # |p + u~|
    residual_minus: float    # |p - u~|


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple
    realized_sign: int          # s minimizing |p - s*u~| across the rows
    log_coefficient: float      # lstsq fit of |p - s*u~| against log lam
    log_fit_exponent: float     # growth exponent of the residual in lam
    ratio_range: Tuple[float, float]   # min/max of |p| / |u~|
    edge_warning: Optional[str]

    def ratios(self):
        return [abs(r.p) / abs(r.conj) for r in self.rows if r.conj != 0.0]


def compare_p_vs_conjugate(model: ConjugateModel, n_range: Sequence[int],
                           N: int, count: int, accelerate: bool = True,
                           threads: Optional[int] = None) -> ComparisonReport:
    """Characteristic values on a power preset against the closed-form
    conjugate, with the empirical sign and the residual's log fit.

    ``n_range`` addresses natural-order indices of the materialized sequence;
    the lattice label of index n is n+1 (the lattice starts at the point
    1^(1/alpha), which gets index 0).
    """
    indices = sorted(set(int(n) for n in n_range))
    if not indices:
        raise InputError("empty index range")
    seq = preset_sequence(model, count)
    if any(n < seq.index_min or n > seq.index_max for n in indices):
        raise InputError("requested indices not materialized")
    edge_warning = None
    margin = count // INTERIOR_MARGIN
    if any(abs(n) > count - margin for n in indices):
        edge_warning = (f"indices within {margin} of the truncation edge are "
                        f"systematically biased; results there are untrusted")
        import warnings
        warnings.warn(edge_warning, stacklevel=2)
    P = char_sequence(seq, indices, N=N, accelerate=accelerate, threads=threads)
    rows = []
    for n in indices:
        lam = seq.point(n)
        lattice_n = abs(n) + 1 if n >= 0 or model.kind == "one_sided" else abs(n)
        conj = model.u_tilde(lattice_n)
        p = P.p(n)
        rows.append(ComparisonRow(n, lattice_n, lam, p, conj,
                                  abs(p + conj), abs(p - conj)))
    sum_plus = math.fsum(r.residual_plus for r in rows)
    sum_minus = math.fsum(r.residual_minus for r in rows)
    sign = -1 if sum_plus <= sum_minus else +1
    resid = np.array([abs(r.p - sign * r.conj) for r in rows])
    loglam = np.array([math.log(abs(r.lam)) for r in rows])
    coef = float(np.linalg.lstsq(
        np.column_stack([loglam, np.ones_like(loglam)]), resid, rcond=None)[0][0])
    mask = resid > 0
    if np.count_nonzero(mask) >= 2:
        expo = float(np.polyfit(loglam[mask], np.log(resid[mask]), 1)[0])
    else:
        expo = 0.0
    ratios = [abs(r.p) / abs(r.conj) for r in rows if r.conj != 0.0]
    return ComparisonReport(tuple(rows), sign, coef, expo,
                            (min(ratios), max(ratios)), edge_warning)


@dataclass(frozen=True)
class PowerWeightDemo:
    alpha: float
    c: float
    verdict: Verdict
    critical_estimate: float
    closed_form_candidate: float
    relative_gap: float


def power_weight_demo(c: float, alpha: float, count: int = 10 ** 5,
                      p_index_limit: int = 512,
                      bisection_steps: int = 40,
                      threads: Optional[int] = None) -> PowerWeightDemo:
    """Runs the main criterion for W = exp(c |x|^alpha) on the symmetric
    power-alpha lattice and locates the empirical critical constant where the
    verdict flips, against the closed-form candidate pi |tan(alpha pi/2 - pi/2)|.

    The characteristic values (computed once, full window) and the sequence
    gates are shared across the bisection.
    """
    model = ConjugateModel("two_sided", alpha)
    seq = preset_sequence(model, count)
    limit = min(p_index_limit, count - 1)
    indices = list(range(-limit, limit))
    P = char_sequence(seq, indices, N=2 * count + 1, accelerate=False,
                      threads=threads)
    gates = run_gates(seq)

    def verdict_at(cc: float) -> Verdict:
        return main_criterion(exp_power(cc, alpha), seq, P, gates=gates)

    verdict = verdict_at(c)
    lo, hi = 1e-3, 4.0 * math.pi
    if verdict_at(lo).witnessed and not verdict_at(hi).witnessed:
        for _ in range(bisection_steps):
            mid = 0.5 * (lo + hi)
            if verdict_at(mid).witnessed:
                lo = mid
            else:
                hi = mid
        critical = 0.5 * (lo + hi)
    else:
        critical = math.nan
    candidate = math.pi * abs(math.tan(0.5 * alpha * math.pi - 0.5 * math.pi))
    gap = abs(critical - candidate) / candidate if math.isfinite(critical) else math.inf
    return PowerWeightDemo(alpha, c, verdict, critical, candidate, gap)
