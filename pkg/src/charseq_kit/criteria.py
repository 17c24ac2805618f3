"""Density and non-density verdict engines.

Every verdict is truncation-qualified: "witnessed" certifies numerical
consistency of a limit condition at the materialized truncation, never a
proof.  Each Verdict carries the evidence series, the truncation metadata and
the convergence rule it applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from ._series import (BoundednessReport, SeriesReport, analyze_log_boundedness,
                      analyze_log_series)
from .charseq import CharacteristicSequence, char_sequence
from .errors import InputError, NumericError
from .measures import DiscreteMeasure
from .sequences import (BalanceReport, DensityReport, DiscreteSequence,
                        balance_partial_sums, doubling_schedule, materialize,
                        upper_density, GeneratorSpec)
from .weights import WeightSpec

WITNESSED = "witnessed"
NOT_WITNESSED = "not-witnessed-at-truncation"

NOT_DENSE = "polynomials-not-dense"
DENSE = "polynomials-dense"
NO_CLAIM = "no-claim"


@dataclass(frozen=True)
class Verdict:
    criterion: str
    outcome: str                  # witnessed | not-witnessed-at-truncation
    claim: str                    # what a witnessed outcome asserts
    evidence: dict
    truncation: dict
    tolerance: dict

    @property
    def witnessed(self) -> bool:
        return self.outcome == WITNESSED

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "outcome": self.outcome,
                "claim": self.claim, "evidence": self.evidence,
                "truncation": self.truncation, "tolerance": self.tolerance}


# -- gates ----------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceGates:
    density: DensityReport
    balance: BalanceReport

    @property
    def passed(self) -> bool:
        return self.density.zero_density_consistent and \
            self.balance.balanced_consistent


def run_gates(seq: DiscreteSequence,
              density_threshold: float = 0.05) -> SequenceGates:
    """Zero-density and balancedness consistency checks a sequence must pass
    before any series criterion is meaningful."""
    extent = float(max(abs(seq.points[0]), abs(seq.points[-1])))
    radii = [extent * 2.0 ** (-j) for j in range(10, -1, -1)]
    radii = [r for r in radii if r > 0]
    density = upper_density(seq, radii, threshold=density_threshold)
    n_sched = doubling_schedule(max(4, seq.count))
    balance = balance_partial_sums(seq, n_sched)
    return SequenceGates(density, balance)


def _series_evidence(series: SeriesReport) -> dict:
    return {"log_partial_sums": list(series.log_partial_sums),
            "log_increments": list(series.log_increments),
            "log_total": series.log_total,
            "log_tail_estimate": series.log_tail_estimate,
            "n_terms": series.n_terms,
            "reason": series.reason}


def _tolerance_dict() -> dict:
    return {"geometric_factor": 1.5, "tail_fraction": 1e-6}


def _ordered_indices(seq: DiscreteSequence, P) -> list:
    idx = [n for n in P.indices()]
    return sorted(idx, key=lambda n: (abs(seq.point(n)), seq.point(n)))


# -- the main series criterion ----------------------------------------------------

def main_criterion(weight: WeightSpec, seq: DiscreteSequence,
                   P: CharacteristicSequence,
                   gates: Optional[SequenceGates] = None) -> Verdict:
    """Non-density is witnessed when sum W(lam_n) exp(p_n) converges per the
    shared rule and the sequence passes the zero-density and balancedness
    gates (re-run and attached to the verdict)."""
    if gates is None:
        gates = run_gates(seq)
    logterms = []
    infinite_at = None
    for n in _ordered_indices(seq, P):
        lw = weight.log_value(seq.point(n))
        if math.isinf(lw):
            infinite_at = seq.point(n)
            break
        logterms.append(lw + P.p(n))
    truncation = {"indices": len(P), "char_N": max(e.N for e in P.entries.values())}
    if infinite_at is not None:
        return Verdict(
            "main", NOT_WITNESSED, NOT_DENSE,
            {"infinite_weight_at": infinite_at,
             "note": "W = +inf on the candidate sequence; condition cannot hold"},
            truncation, _tolerance_dict())
    series = analyze_log_series(logterms)
    ev = _series_evidence(series)
    ev["gates"] = {"zero_density": gates.density.zero_density_consistent,
                   "balanced": gates.balance.balanced_consistent}
    outcome = WITNESSED if series.converged and gates.passed else NOT_WITNESSED
    return Verdict("main", outcome, NOT_DENSE, ev, truncation, _tolerance_dict())


def nondegenerate_simplified(weight: WeightSpec, seq: DiscreteSequence,
                             P: CharacteristicSequence,
                             fit_indices: Optional[Sequence[int]] = None) -> Verdict:
    """Simplified condition for non-degenerate weights: log W(lam_n) + p_n must
    admit a bound C (log|lam_n| + 1) with C stable along the tail.

    Reports both the minimal bounding constant and a least-squares slope of
    the excess against log|lam_n|.
    """
    if weight.degenerate:
        raise InputError("simplified criterion requires a non-degenerate weight; "
                         "use the main criterion")
    idx = sorted(fit_indices) if fit_indices is not None else sorted(P.indices())
    idx = sorted(idx, key=lambda n: (abs(seq.point(n)), seq.point(n)))
    if len(idx) < 8:
        raise InputError("fit range too short")
    g = []
    loglam = []
    for n in idx:
        lam = seq.point(n)
        lw = weight.log_value(lam)
        if math.isinf(lw):
            raise InputError("non-degenerate weight is infinite on the sequence")
        g.append(lw + P.p(n))
        loglam.append(math.log(max(abs(lam), math.e)))
    denom = np.array(loglam)
    gn = np.array(g)
    ratios = np.maximum(gn, 0.0) / denom
    c_full = float(np.max(ratios))
    cut = max(1, (2 * len(idx)) // 3)
    c_head = float(np.max(ratios[:cut]))
    slope, intercept = np.polyfit(denom, gn, 1)
    stable = c_full <= c_head + max(0.1, 0.05 * abs(c_head))
    outcome = WITNESSED if stable else NOT_WITNESSED
    ev = {"c_bound": c_full, "c_bound_head": c_head,
          "slope_fit": float(slope), "intercept_fit": float(intercept),
          "n_fit": len(idx)}
    return Verdict("simplified", outcome, NOT_DENSE, ev,
                   {"indices": len(idx)}, {"stability_slack": 0.1})


# -- discrete-measure corollary criteria ------------------------------------------

def _subsequence(mu: DiscreteMeasure, subseq: Sequence[int]):
    """Resolve natural indices of mu's support into (points, log-masses),
    re-enumerated in their own natural order."""
    neg = mu.neg_count
    positions = []
    for n in subseq:
        pos = int(n) + neg
        if not 0 <= pos < mu.size:
            raise InputError(f"subsequence index {n} outside the support")
        positions.append(pos)
    positions = sorted(set(positions))
    pts = mu.t[positions]
    logm = mu.logm[positions]
    gamma = DiscreteSequence(points=pts,
                             neg_count=int(np.searchsorted(pts, 0.0)),
                             generator=None)
    return gamma, logm


def _subseq_charseq(gamma: DiscreteSequence, P: Optional[CharacteristicSequence],
                    N: Optional[int]) -> CharacteristicSequence:
    if P is not None:
        if not P.covers(gamma.indices()):
            raise InputError("characteristic sequence does not cover the subsequence")
        return P
    return char_sequence(gamma, N=N or max(2, gamma.count))


def lp_criterion(mu: DiscreteMeasure, p: float, subseq: Sequence[int],
                 P: Optional[CharacteristicSequence] = None,
                 N: Optional[int] = None,
                 gates: Optional[SequenceGates] = None) -> Verdict:
    """L^p (1<p<inf) non-density witness: sum mass_n^{1-q} exp(q p_n) over the
    re-indexed subsequence converges, 1/p + 1/q = 1."""
    if not mu.is_positive():
        raise InputError("L^p criteria need a positive measure")
    if not 1.0 < p < math.inf:
        raise InputError("p must lie in (1, inf)")
    q = p / (p - 1.0)
    gamma, logm = _subsequence(mu, subseq)
    Pg = _subseq_charseq(gamma, P, N)
    if gates is None:
        gates = run_gates(gamma)
    order = np.lexsort((gamma.points, np.abs(gamma.points)))
    logterms = [(1.0 - q) * float(logm[i]) + q * Pg.p(int(i) - gamma.neg_count)
                for i in order]
    series = analyze_log_series(logterms)
    ev = _series_evidence(series)
    ev["q"] = q
    ev["gates"] = {"zero_density": gates.density.zero_density_consistent,
                   "balanced": gates.balance.balanced_consistent}
    outcome = WITNESSED if series.converged and gates.passed else NOT_WITNESSED
    return Verdict("lp", outcome, NOT_DENSE, ev,
                   {"subsequence": len(subseq), "p": p}, _tolerance_dict())


def l1_criterion(mu: DiscreteMeasure, subseq: Sequence[int],
                 P: Optional[CharacteristicSequence] = None,
                 N: Optional[int] = None,
                 gates: Optional[SequenceGates] = None,
                 slack: float = 0.1) -> Verdict:
    """L^1 witness: exp(p_n) = O(mass_n), tested as boundedness of
    p_n - log mass_n along the tail."""
    if not mu.is_positive():
        raise InputError("L^1 criterion needs a positive measure")
    gamma, logm = _subsequence(mu, subseq)
    Pg = _subseq_charseq(gamma, P, N)
    if gates is None:
        gates = run_gates(gamma)
    order = np.lexsort((gamma.points, np.abs(gamma.points)))
    logratios = [Pg.p(int(i) - gamma.neg_count) - float(logm[i]) for i in order]
    bound = analyze_log_boundedness(logratios, slack=slack)
    ok = bound.bounded and gates.passed
    ev = {"log_ratio_head_max": bound.head_max,
          "log_ratio_tail_max": bound.tail_max,
          "gates": {"zero_density": gates.density.zero_density_consistent,
                    "balanced": gates.balance.balanced_consistent}}
    return Verdict("l1", WITNESSED if ok else NOT_WITNESSED, NOT_DENSE, ev,
                   {"subsequence": len(subseq)}, {"boundedness_slack": slack})


def cw_discrete_criterion(mu: DiscreteMeasure, subseq: Sequence[int],
                          P: Optional[CharacteristicSequence] = None,
                          N: Optional[int] = None,
                          gates: Optional[SequenceGates] = None) -> Verdict:
    """Degenerate-weight witness: sum exp(p_n)/mass_n over the subsequence
    converges."""
    if not mu.is_positive():
        raise InputError("the discrete-weight criterion needs a positive measure")
    gamma, logm = _subsequence(mu, subseq)
    Pg = _subseq_charseq(gamma, P, N)
    if gates is None:
        gates = run_gates(gamma)
    order = np.lexsort((gamma.points, np.abs(gamma.points)))
    logterms = [Pg.p(int(i) - gamma.neg_count) - float(logm[i]) for i in order]
    series = analyze_log_series(logterms)
    ev = _series_evidence(series)
    ev["gates"] = {"zero_density": gates.density.zero_density_consistent,
                   "balanced": gates.balance.balanced_consistent}
    outcome = WITNESSED if series.converged and gates.passed else NOT_WITNESSED
    return Verdict("cw-discrete", outcome, NOT_DENSE, ev,
                   {"subsequence": len(subseq)}, _tolerance_dict())


# -- integral criteria --------------------------------------------------------------

@dataclass(frozen=True)
class PoissonIntegralReport:
    radii: tuple
    block_integrals: tuple
    partial_totals: tuple
    block_ratio: float
    tail_model: float           # extrapolated remaining tail
    extrapolated_total: float
    classification: str         # converged | divergent | undecided
    reason: str

    @property
    def converged(self) -> bool:
        return self.classification == "converged"


def poisson_log_integral(weight: WeightSpec, r_max_exp: int = 22,
                         ratio_cap: float = 0.97,
                         total_stability: float = 1e-3) -> PoissonIntegralReport:
    """Integral of log W against dx/(1+x^2) over [-R, R] with R doubling.

    Dyadic block ratios classify the tail: geometrically decaying blocks with
    stable extrapolated totals mean "converged"; ratios at/above ratio_cap or
    ratios climbing towards 1 while the extrapolated total drifts mean
    "divergent" (this catches slow, log-type divergence); anything else is
    "undecided".
    """
    def integrand(x: float) -> float:
        lw = weight.log_value(x)
        if math.isinf(lw):
            raise NumericError("infinite weight inside a quadrature block; "
                               "integral diverges trivially")
        return lw / (1.0 + x * x)

    radii = [0.0] + [2.0 ** j for j in range(0, r_max_exp + 1)]
    blocks = []
    for a, b in zip(radii, radii[1:]):
        right, _ = quad(integrand, a, b, limit=200)
        left, _ = quad(integrand, -b, -a, limit=200)
        blocks.append(right + left)
    totals = list(np.cumsum(blocks))

    def ratio(a: float, b: float) -> float:
        if a == 0.0:
            return 1.0 if b == 0.0 else math.inf
        return b / a

    ratios = [ratio(a, b) for a, b in zip(blocks, blocks[1:])]
    tail_ratios = ratios[-3:]
    rho = tail_ratios[-1]
    extrap = []
    for i in (-2, -1):
        r = ratios[i]
        if 0 <= r < 1:
            extrap.append(totals[i] + blocks[i] * r / (1.0 - r))
        else:
            extrap.append(math.inf)
    tail_model = blocks[-1] * rho / (1.0 - rho) if 0 <= rho < 1 else math.inf
    drifting = (not all(map(math.isfinite, extrap)) or
                abs(extrap[-1] - extrap[-2]) > total_stability *
                max(abs(extrap[-1]), 1e-300))
    climbing = all(b >= a for a, b in zip(tail_ratios, tail_ratios[1:]))
    if any(r >= ratio_cap for r in tail_ratios):
        cls, reason = "divergent", f"block ratio {rho:.4f} >= {ratio_cap}"
    elif not drifting:
        cls, reason = "converged", "dyadic blocks decay geometrically"
    elif climbing:
        cls, reason = "divergent", ("block ratios climbing towards 1 with "
                                    "drifting totals (slow divergence)")
    else:
        cls, reason = "undecided", "extrapolated total still drifting"
    return PoissonIntegralReport(tuple(radii[1:]), tuple(blocks), tuple(totals),
                                 rho, tail_model,
                                 extrap[-1] if math.isfinite(extrap[-1]) else math.inf,
                                 cls, reason)


def hall_criterion(weight: WeightSpec, r_max_exp: int = 22) -> Verdict:
    """Classical integral test: summability of log W against the Poisson
    measure witnesses non-density."""
    try:
        report = poisson_log_integral(weight, r_max_exp=r_max_exp)
    except NumericError as exc:
        return Verdict("hall", NOT_WITNESSED, NOT_DENSE, {"note": str(exc)},
                       {"r_max": 2.0 ** r_max_exp}, {"ratio_cap": 0.97})
    ev = {"radii": list(report.radii), "blocks": list(report.block_integrals),
          "partial_totals": list(report.partial_totals),
          "block_ratio": report.block_ratio,
          "tail_model": report.tail_model,
          "extrapolated_total": report.extrapolated_total,
          "classification": report.classification,
          "reason": report.reason}
    outcome = WITNESSED if report.converged else NOT_WITNESSED
    return Verdict("hall", outcome, NOT_DENSE, ev,
                   {"r_max": 2.0 ** r_max_exp},
                   {"ratio_cap": 0.97, "total_stability": 1e-3})


@dataclass(frozen=True)
class ConvexityReport:
    grid: tuple
    max_violation: float
    violation_at: Optional[float]
    passed: bool


def log_convexity_check(weight: WeightSpec, grid: Sequence[float],
                        tol: float = 1e-9) -> ConvexityReport:
    """Midpoint convexity of g(t) = log W(e^t) on a positive grid.

    Checks the second divided differences of g on consecutive grid triples in
    t = log x; a negative value below -tol is a violation.
    """
    xs = sorted(float(x) for x in grid)
    if len(xs) < 3:
        raise InputError("convexity grid needs at least 3 points")
    if xs[0] <= 0:
        raise InputError("convexity grid must be positive")
    ts = [math.log(x) for x in xs]
    gs = [weight.log_value(x) for x in xs]
    if any(math.isinf(g) for g in gs):
        raise InputError("weight is infinite on the convexity grid")
    worst = 0.0
    where = None
    for i in range(len(ts) - 2):
        t0, t1, t2 = ts[i], ts[i + 1], ts[i + 2]
        g0, g1, g2 = gs[i], gs[i + 1], gs[i + 2]
        dd = ((g2 - g1) / (t2 - t1) - (g1 - g0) / (t1 - t0)) / (t2 - t0)
        if dd < worst:
            worst = dd
            where = xs[i + 1]
    return ConvexityReport(tuple(xs), -worst, where, worst >= -tol)


def carleson_verdict(weight: WeightSpec, grid: Optional[Sequence[float]] = None,
                     r_max_exp: int = 22) -> Verdict:
    """Even log-convex weights: Poisson summability of log W decides density
    both ways.  This is the only criterion here that can witness density.
    """
    sample = grid if grid is not None else [2.0 ** j for j in range(-4, 21)]
    for x in sample:
        a, b = weight.log_value(x), weight.log_value(-x)
        if not math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12):
            raise InputError(f"weight is not even at x = {x}")
    convexity = log_convexity_check(weight, sample)
    if not convexity.passed:
        raise InputError(f"weight is not log-convex on the grid "
                         f"(violation {convexity.max_violation} at "
                         f"{convexity.violation_at})")
    report = poisson_log_integral(weight, r_max_exp=r_max_exp)
    ev = {"block_ratio": report.block_ratio,
          "partial_totals": list(report.partial_totals),
          "extrapolated_total": report.extrapolated_total,
          "convexity_margin": convexity.max_violation,
          "classification": report.classification,
          "reason": report.reason}
    if report.classification == "converged":
        outcome, claim = WITNESSED, NOT_DENSE
    elif report.classification == "divergent":
        outcome, claim = WITNESSED, DENSE
    else:
        outcome, claim = NOT_WITNESSED, NO_CLAIM
    return Verdict("carleson", outcome, claim, ev,
                   {"r_max": 2.0 ** r_max_exp},
                   {"ratio_cap": 0.97, "total_stability": 1e-3})


def weighted_sup_norm(samples: Sequence[Tuple[float, float]],
                      weight: WeightSpec) -> float:
    """Grid lower bound of sup |f| / W; W = +inf contributes zero."""
    if not samples:
        raise InputError("no samples")
    best = 0.0
    for x, fx in samples:
        lw = weight.log_value(x)
        if math.isinf(lw):
            continue
        best = max(best, abs(fx) * math.exp(-lw))
    return best
