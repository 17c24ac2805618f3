"""Canonical products over a discrete zero set, their residues, the product =
const * Cauchy-transform identity, and the zero-set classification for the two
classes of zero-type entire functions with real simple zeros.

All products are evaluated in log/phase domain; on the real axis the sign is
tracked exactly as a crossing parity, never through exponentials.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._accum import logsumexp
from ._series import analyze_log_series, SeriesReport
from .errors import CollisionError, InputError, NumericError
from .measures import (DiscreteMeasure, cauchy_transform_logpolar,
                       masses_from_charseq)
from .sequences import DiscreteSequence

POINT_EXCLUSION_FACTOR = 1e-12


@dataclass(frozen=True)
class ProductEvaluation:
    z: complex
    log_abs: float
    sign: Optional[int]         # +-1 for real z off the zero set
    phase: Optional[float]      # continuous argument for complex z
    window: Tuple[int, int]     # natural-index window [n_lo, n_hi]

    @property
    def value(self) -> complex:
        mag = math.exp(self.log_abs)
        if self.sign is not None:
            return complex(mag * self.sign, 0.0)
        return cmath.rect(mag, self.phase)


def _resolve_window(seq: DiscreteSequence, N: Optional[int],
                    window: Optional[Tuple[int, int]]) -> Tuple[int, int]:
    if window is not None:
        n_lo, n_hi = int(window[0]), int(window[1])
    elif N is not None:
        n_lo, n_hi = -int(N), int(N)
    else:
        n_lo, n_hi = seq.index_min, seq.index_max
    n_lo = max(n_lo, seq.index_min)
    n_hi = min(n_hi, seq.index_max)
    if n_lo > n_hi:
        raise InputError("empty product window")
    return n_lo, n_hi


def _check_off_points(seq: DiscreteSequence, z: complex) -> None:
    pts = seq.points
    x = z.real
    i = int(np.searchsorted(pts, x))
    for k in (i - 1, i):
        if 0 <= k < pts.size:
            dist = math.hypot(pts[k] - x, z.imag)
            gap = seq.gap_near(float(pts[k]))
            limit = POINT_EXCLUSION_FACTOR * gap if math.isfinite(gap) else 0.0
            if dist <= limit or dist == 0.0:
                raise CollisionError(f"{z} collides with sequence point {pts[k]}")


def product_eval(seq: DiscreteSequence, z: complex, N: Optional[int] = None,
                 window: Optional[Tuple[int, int]] = None) -> ProductEvaluation:
    """Partial canonical product (-1)^{n_hi} prod sqrt(1+lam^2)/(z - lam) over
    the index window, in log/phase form.

    The (-1)^{n_hi} prefactor generalizes the symmetric-window convention (for
    a window [-N, N] it is (-1)^N) and makes every residue carry sign (-1)^n
    exactly, for any window.
    """
    z = complex(z)
    n_lo, n_hi = _resolve_window(seq, N, window)
    _check_off_points(seq, z)
    lo = seq.position(n_lo)
    hi = seq.position(n_hi)
    prefactor_odd = n_hi % 2 != 0
    if z.imag == 0.0:
        log_abs, n_above = _kernels.product_sum_real(seq.points, lo, hi, z.real)
        sign = -1 if (n_above % 2 != 0) != prefactor_odd else 1
        return ProductEvaluation(z, log_abs, sign, None, (n_lo, n_hi))
    log_abs, phase = _kernels.product_sum_complex(seq.points, lo, hi,
                                                  z.real, z.imag)
    if prefactor_odd:
        phase += math.pi
    return ProductEvaluation(z, log_abs, None, phase, (n_lo, n_hi))


def residue_log(seq: DiscreteSequence, n: int, N: Optional[int] = None,
                window: Optional[Tuple[int, int]] = None) -> Tuple[float, int]:
    """(log |Res_{lam_n}|, sign) of the windowed product at its pole lam_n.

    log|Res| = 1/2 log(1+lam_n^2) + sum_{k != n} 1/2 log((1+lam_k^2)/(lam_n-lam_k)^2),
    accumulated with the same pairwise kernel as the characteristic values, so
    at matched windows the two agree bit for bit.  The sign is (-1)^n exactly.
    """
    n_lo, n_hi = _resolve_window(seq, N, window)
    if not n_lo <= n <= n_hi:
        raise InputError(f"index {n} outside window [{n_lo}, {n_hi}]")
    pos = seq.position(n)
    lo = seq.position(n_lo)
    hi = seq.position(n_hi)
    span = max(pos - lo, hi - pos) + 1
    sums, _ = _kernels.char_partial_sums(
        seq.points, pos, lo, hi, np.asarray([span + 1], dtype=np.int64))
    lam = seq.point(n)
    log_res = 0.5 * math.log1p(lam * lam) + 0.5 * sums[0]
    sign = 1 if n % 2 == 0 else -1
    return log_res, sign


@dataclass(frozen=True)
class RatioPoint:
    z: complex
    log_ratio: float
    phase_ratio: float


@dataclass(frozen=True)
class IdentityReport:
    points: tuple
    max_pairwise_deviation: float
    log_const: float           # realized |const| in product = const * K mu
    const_sign: int
    tolerance: float
    consistent: bool


def _wrap_phase(p: float) -> float:
    return math.remainder(p, 2.0 * math.pi)


def identity_F_equals_cK(seq: DiscreteSequence, P, zs: Sequence[complex],
                         tolerance: float = 1e-6,
                         mu: Optional[DiscreteMeasure] = None) -> IdentityReport:
    """Ratio product/K-transform at several points; at matched truncation the
    ratio is a single constant, so the pairwise deviation of the ratios is the
    identity residual.

    The measure defaults to the extreme construction from (seq, P); pass a
    pre-built one to reuse it.  Points should avoid the real axis, where the
    transform's phase jumps.
    """
    if len(zs) < 2:
        raise InputError("need at least two evaluation points")
    if mu is None:
        mu = masses_from_charseq(seq, P)
    ratios = []
    for z in zs:
        z = complex(z)
        fe = product_eval(seq, z)
        f_phase = fe.phase if fe.phase is not None else (0.0 if fe.sign > 0 else math.pi)
        try:
            k_log, k_phase = cauchy_transform_logpolar(mu, z)
        except NumericError:
            ratios.append(RatioPoint(z, math.inf, 0.0))
            continue
        ratios.append(RatioPoint(z, fe.log_abs - k_log,
                                 _wrap_phase(f_phase - k_phase)))
    finite = [r for r in ratios if math.isfinite(r.log_ratio)]
    if len(finite) < 2:
        raise NumericError("transform vanished at too many test points")
    dev = 0.0
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            dla = finite[i].log_ratio - finite[j].log_ratio
            dph = math.remainder(finite[i].phase_ratio - finite[j].phase_ratio,
                                 2.0 * math.pi)
            dev = max(dev, abs(cmath.exp(complex(dla, dph)) - 1.0))
    log_c = finite[0].log_ratio
    sign = 1 if abs(_wrap_phase(finite[0].phase_ratio)) < math.pi / 2 else -1
    return IdentityReport(tuple(ratios), dev, log_c, sign, tolerance,
                          dev < tolerance)


# -- zero-set classification ----------------------------------------------------

@dataclass(frozen=True)
class ZeroSetClass:
    classification: str            # hamburger | krein | neither
    log_ratio_evidence: tuple      # log|lam_n| / p_n over the tail indices
    mass_series: SeriesReport      # partial sums of sum exp(p_n)
    ratio_threshold: float
    hamburger_consistent: bool
    krein_consistent: bool


def classify_zero_set(seq: DiscreteSequence, P,
                      tail: Optional[Sequence[int]] = None,
                      ratio_threshold: float = 0.1) -> ZeroSetClass:
    """Truncation-qualified classification of the zero set.

    hamburger-consistent: p_n -> -inf with log|lam_n|/p_n -> 0 on the tail;
    krein-consistent: sum exp(p_n) converges per the shared series rule.  The
    class containment (hamburger implies krein) is enforced: the hamburger
    label additionally requires the krein evidence.
    """
    indices = sorted(tail) if tail is not None else sorted(P.indices())
    if len(indices) < 8:
        raise InputError("tail range too short to classify")
    by_abs = sorted(indices, key=lambda n: (abs(seq.point(n)), seq.point(n)))
    log_terms = [P.p(n) for n in by_abs]
    series = analyze_log_series(log_terms)
    krein = series.converged
    ratios = []
    negative = True
    for n in by_abs:
        lam = abs(seq.point(n))
        p = P.p(n)
        if p >= 0:
            negative = False
            break
        ratios.append(math.log(max(lam, 2.0)) / p)
    hamburger = False
    if negative and len(ratios) >= 6:
        cut = max(1, len(ratios) // 3)
        head = max(abs(r) for r in ratios[:cut])
        tail_max = max(abs(r) for r in ratios[-cut:])
        hamburger = tail_max <= ratio_threshold and tail_max <= head + 1e-12
    hamburger = hamburger and krein
    label = "hamburger" if hamburger else ("krein" if krein else "neither")
    return ZeroSetClass(label, tuple(ratios), series, ratio_threshold,
                        hamburger, krein)


def hamburger_eval(seq: DiscreteSequence, P, z: complex,
                   mu: Optional[DiscreteMeasure] = None,
                   log_underflow: float = -700.0):
    """F(z) = const / K mu(z) in log/phase form, with the unit-total-variation
    constant realized by the measure construction."""
    if mu is None:
        mu = masses_from_charseq(seq, P)
    z = complex(z)
    k_log, k_phase = cauchy_transform_logpolar(mu, z)
    if k_log < log_underflow:
        raise NumericError(f"K mu({z}) below the underflow guard")
    return -k_log, -k_phase


def log_abs_vS(seq: DiscreteSequence, x: float, N: Optional[int] = None,
               window: Optional[Tuple[int, int]] = None) -> float:
    """v_S(x) = 1/2 sum log((s_n - x)^2 / (1+s_n^2)) over the window.

    Equal to -log|product(x)| term by term; evaluated through the same kernel
    (negated once at the end) so the relation is exact by construction.
    """
    ev = product_eval(seq, complex(float(x), 0.0), N=N, window=window)
    return -ev.log_abs
