"""Discrete measures in sign/log-magnitude form and their Cauchy transforms.

Atom masses are stored as (location, sign, log-magnitude) because the extreme
annihilating measures have masses exp(p_n) spanning hundreds of log-units.
Every sum factors out the common scale before exponentiating.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._accum import logsumexp, signed_scaled_sum
from .errors import CollisionError, InputError, NumericError
from .sequences import DiscreteSequence
from ._series import SeriesReport, analyze_log_series

ATOM_EXCLUSION_FACTOR = 1e-12
OUTERNESS_NOTE = ("outerness is not decided numerically; this report provides "
                  "zero-freeness, sign, annihilation and decay evidence only")


@dataclass(frozen=True)
class DiscreteMeasure:
    t: np.ndarray          # ascending atom locations
    signs: np.ndarray      # +-1 per atom
    logm: np.ndarray       # log |mass| per atom
    normalized: bool = False
    is_truncation: bool = False   # atoms truncate a conceptually infinite measure

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64)
        signs = np.asarray(self.signs, dtype=np.float64)
        logm = np.asarray(self.logm, dtype=np.float64)
        if not (t.size == signs.size == logm.size) or t.size == 0:
            raise InputError("atom arrays must be non-empty and congruent")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise InputError("atom locations must be strictly increasing")
        if not np.all(np.abs(signs) == 1.0):
            raise InputError("atom signs must be +-1")
        if not np.all(np.isfinite(logm)):
            raise InputError("log-magnitudes must be finite")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "logm", logm)

    # -- construction ------------------------------------------------------
    @classmethod
    def from_masses(cls, locations: Sequence[float], masses: Sequence[float],
                    **kw) -> "DiscreteMeasure":
        t = np.asarray(locations, dtype=np.float64)
        m = np.asarray(masses, dtype=np.float64)
        if np.any(m == 0):
            raise InputError("zero masses are not representable")
        return cls(t=t, signs=np.sign(m), logm=np.log(np.abs(m)), **kw)

    @property
    def size(self) -> int:
        return int(self.t.size)

    @property
    def neg_count(self) -> int:
        return int(np.searchsorted(self.t, 0.0, side="left"))

    def natural_sign_pattern(self) -> np.ndarray:
        """(-1)^n over the atoms' natural-order indices."""
        n = np.arange(self.size) - self.neg_count
        return np.where(n % 2 == 0, 1.0, -1.0)

    def log_total_variation(self) -> float:
        return logsumexp(self.logm.tolist())

    def normalize(self) -> "DiscreteMeasure":
        """Rescale to unit total variation (fixes the free positive constant)."""
        ltv = self.log_total_variation()
        return DiscreteMeasure(t=self.t, signs=self.signs, logm=self.logm - ltv,
                               normalized=True, is_truncation=self.is_truncation)

    def scale(self, factor: float) -> "DiscreteMeasure":
        if factor <= 0:
            raise InputError("scale factor must be positive")
        return DiscreteMeasure(t=self.t, signs=self.signs,
                               logm=self.logm + math.log(factor),
                               normalized=False, is_truncation=self.is_truncation)

    def is_positive(self) -> bool:
        return bool(np.all(self.signs > 0))

    def masses(self) -> np.ndarray:
        """Linear-domain masses; may underflow for deep log-domain atoms."""
        return self.signs * np.exp(self.logm)

    def scaled_weights(self) -> Tuple[np.ndarray, float]:
        """(sign * exp(logm - L), L) with L = max logm."""
        L = float(np.max(self.logm))
        return self.signs * np.exp(self.logm - L), L

    def gap_near(self, x: float) -> float:
        t = self.t
        if t.size < 2:
            return math.inf
        i = int(np.searchsorted(t, x))
        lo = max(0, i - 1)
        hi = min(t.size - 1, i + 1)
        if hi == lo:
            return math.inf
        return float(np.min(np.diff(t[lo:hi + 1])))


def masses_from_charseq(seq: DiscreteSequence, P) -> DiscreteMeasure:
    """Extreme-measure construction: atom at lam_n with sign (-1)^n and
    log-magnitude p_n, normalized to unit total variation."""
    missing = [n for n in seq.indices() if n not in P]
    if missing:
        raise InputError(f"characteristic sequence does not cover indices {missing[:5]}")
    idx = list(seq.indices())
    t = np.array([seq.point(n) for n in idx])
    signs = np.array([1.0 if n % 2 == 0 else -1.0 for n in idx])
    logm = np.array([P.p(n) for n in idx])
    return DiscreteMeasure(t=t, signs=signs, logm=logm,
                           is_truncation=True).normalize()


# -- Cauchy transforms -------------------------------------------------------

def _check_off_atoms(mu: DiscreteMeasure, z: complex) -> None:
    t = mu.t
    x = z.real
    i = int(np.searchsorted(t, x))
    for k in (i - 1, i):
        if 0 <= k < t.size:
            dist = math.hypot(t[k] - x, z.imag)
            gap = mu.gap_near(float(t[k]))
            limit = ATOM_EXCLUSION_FACTOR * gap if math.isfinite(gap) else 0.0
            if dist <= limit or dist == 0.0:
                raise CollisionError(f"evaluation point {z} collides with atom "
                                     f"at {t[k]}")


def _cauchy_parts(mu: DiscreteMeasure, z: complex):
    """Returns (sum_re, sum_im, L): K = exp(L)/pi * (sum_re + i sum_im)."""
    _check_off_atoms(mu, z)
    w, L = mu.scaled_weights()
    re, im = _kernels.cauchy_sum(mu.t, w, z.real, z.imag)
    return re, im, L


def cauchy_transform(mu: DiscreteMeasure, z: complex) -> complex:
    """K mu (z) = (1/pi) sum m_k / (t_k - z)."""
    re, im, L = _cauchy_parts(mu, complex(z))
    s = math.exp(L) / math.pi
    return complex(re * s, im * s)


def cauchy_transform_logpolar(mu: DiscreteMeasure, z: complex):
    """(log|K mu(z)|, arg K mu(z)) without underflow in the magnitude."""
    re, im, L = _cauchy_parts(mu, complex(z))
    mag = math.hypot(re, im)
    if mag == 0.0:
        raise NumericError(f"Cauchy transform vanished to rounding at {z}")
    return L - math.log(math.pi) + math.log(mag), math.atan2(im, re)


def modified_cauchy_transform(mu: DiscreteMeasure, z: complex) -> complex:
    """Poisson-finite variant: kernel 1/(t-z) - t/(1+t^2).

    For finite measures it differs from cauchy_transform by the z-independent
    constant -(1/pi) sum m_k t_k/(1+t_k^2).
    """
    return cauchy_transform(mu, z) - _modified_offset(mu)


def _modified_offset(mu: DiscreteMeasure) -> complex:
    w, L = mu.scaled_weights()
    t = mu.t
    total = math.fsum(w * t / (1.0 + t * t))
    return complex(total * math.exp(L) / math.pi, 0.0)


# -- moments and annihilation -------------------------------------------------

@dataclass(frozen=True)
class MomentResult:
    k: int
    value: float
    scale: float          # sum |t|^k |mass|, the bound used for relative residuals
    residual: float       # |value| / scale


def moment(mu: DiscreteMeasure, k: int) -> MomentResult:
    """sum m_j t_j^k computed in the common-scale log domain."""
    if k < 0:
        raise InputError("moment order must be >= 0")
    if k == 0:
        expo = mu.logm
        signs = mu.signs
    else:
        with np.errstate(divide="ignore"):
            expo = mu.logm + k * np.log(np.abs(mu.t))
        signs = mu.signs * np.where(mu.t < 0, (-1.0) ** k, 1.0)
    val, scl, L = signed_scaled_sum(expo.tolist(), signs.tolist())
    if scl == 0.0:
        return MomentResult(k, 0.0, 0.0, 0.0)
    factor = math.exp(L)
    return MomentResult(k, val * factor, scl * factor, abs(val) / scl)


@dataclass(frozen=True)
class AnnihilationReport:
    rows: tuple            # MomentResult per k
    tolerance: float
    consistent: bool

    def residuals(self):
        return [r.residual for r in self.rows]


def annihilation_report(mu: DiscreteMeasure, kmax: int,
                        tolerance: float = 1e-6) -> AnnihilationReport:
    rows = tuple(moment(mu, k) for k in range(kmax + 1))
    consistent = all(r.residual <= tolerance for r in rows)
    return AnnihilationReport(rows, tolerance, consistent)


# -- decay along the imaginary axis -------------------------------------------

@dataclass(frozen=True)
class DecayRow:
    y: float
    log_abs_k: float
    trusted: bool


@dataclass(frozen=True)
class DecayProfile:
    rows: tuple
    nmax: int
    order_flags: tuple        # flag[n-1]: y^n |K(iy)| non-increasing past its peak
    trusted_until: Optional[float]
    consistent: bool          # all orders up to nmax hold on the trusted tail

    def decay_order(self) -> int:
        order = 0
        for i, ok in enumerate(self.order_flags):
            if ok:
                order = i + 1
            else:
                break
        return order


def _tail_log_bound(mu: DiscreteMeasure) -> float:
    """Log of an omitted-tail mass estimate via geometric extrapolation of the
    outermost atom magnitudes (grouped by |t|, so mirrored pairs count as one
    shell); -inf when the measure is complete."""
    if not mu.is_truncation or mu.size < 4:
        return -math.inf
    shells: dict = {}
    for t, lm in zip(np.abs(mu.t), mu.logm):
        key = float(t)
        shells[key] = logsumexp([shells[key], float(lm)]) if key in shells \
            else float(lm)
    mags = [shells[k] for k in sorted(shells)]
    if len(mags) < 2:
        return -math.inf
    last, prev = mags[-1], mags[-2]
    if last >= prev:
        return math.inf       # magnitudes not decaying: tail unbounded
    r = math.exp(last - prev)
    return last + math.log(r / (1.0 - r))


def decay_profile(mu: DiscreteMeasure, y_schedule: Sequence[float],
                  nmax: int = 4, float_floor: float = 1e-13) -> DecayProfile:
    """|K mu(iy)| against the schedule with y^n growth checks.

    A row is trusted while the computed magnitude exceeds both the omitted-tail
    bound and the cancellation floor float_floor * TV / (pi y).  Order n is
    consistent when y^n |K(iy)| is non-increasing after its peak and the peak
    is not at the trusted tail's end.
    """
    ys = [float(y) for y in y_schedule]
    if not ys or any(y <= 0 for y in ys) or any(b <= a for a, b in zip(ys, ys[1:])):
        raise InputError("y-schedule must be positive and increasing")
    ltv = mu.log_total_variation()
    ltail = _tail_log_bound(mu)
    logpi = math.log(math.pi)
    rows = []
    trusted_until = None
    for y in ys:
        log_k, _ = cauchy_transform_logpolar(mu, complex(0.0, y))
        floor = max(ltail - math.log(y) - logpi,
                    ltv + math.log(float_floor) - math.log(y) - logpi)
        ok = log_k > floor
        if ok:
            trusted_until = y
        rows.append(DecayRow(y=y, log_abs_k=log_k, trusted=ok))
    trusted = [r for r in rows if r.trusted]
    flags = []
    for n in range(1, nmax + 1):
        vals = [n * math.log(r.y) + r.log_abs_k for r in trusted]
        if len(vals) < 3:
            flags.append(False)
            continue
        peak = max(range(len(vals)), key=lambda i: vals[i])
        tail = vals[peak:]
        flags.append(peak < len(vals) - 1 and
                     all(b <= a + 1e-12 for a, b in zip(tail, tail[1:])))
    return DecayProfile(tuple(rows), nmax, tuple(flags), trusted_until,
                        all(flags))


# -- algebraic identity of shifted transforms ---------------------------------

def shifted_measure(mu: DiscreteMeasure, k: int) -> DiscreteMeasure:
    """The measure t^k mu; atoms at t=0 drop out for k >= 1."""
    if k == 0:
        return mu
    keep = mu.t != 0.0
    if not np.any(keep):
        raise InputError("t^k mu has no atoms left")
    t = mu.t[keep]
    signs = (mu.signs[keep] * np.where(t < 0, (-1.0) ** k, 1.0))
    logm = mu.logm[keep] + k * np.log(np.abs(t))
    return DiscreteMeasure(t=t, signs=signs, logm=logm,
                           is_truncation=mu.is_truncation)


def moment_shift_identity(mu: DiscreteMeasure, k: int, z: complex) -> float:
    """Residual of K(t^k mu)(z) - z^k K mu(z) - (1/pi) sum_{j<k} z^j m_{k-1-j},
    which vanishes identically in exact arithmetic.  Reported relative to the
    largest intermediate magnitude (the power amplification z^k is part of the
    computation's scale, not of the defect)."""
    z = complex(z)
    lhs = cauchy_transform(shifted_measure(mu, k), z)
    shifted = (z ** k) * cauchy_transform(mu, z)
    poly = complex(0.0, 0.0)
    for j in range(k):                   # Horner: sum_j z^{k-1-j} m_j
        poly = poly * z + moment(mu, j).value
    poly /= math.pi
    rhs = shifted + poly
    denom = max(abs(lhs), abs(shifted), abs(poly), 1e-300)
    return abs(lhs - rhs) / denom


# -- weighted finiteness -------------------------------------------------------

@dataclass(frozen=True)
class WFinitenessReport:
    log_partial_sums: tuple
    series: Optional[SeriesReport]
    infinite_weight_atom: Optional[float]
    consistent: bool


def w_finiteness(mu: DiscreteMeasure, weight) -> WFinitenessReport:
    """Partial sums of sum W(t_k)|m_k| in increasing |t| order (log domain).

    A +inf weight value at an atom yields an immediately negative verdict: the
    measure cannot be finite against that weight.
    """
    order = np.lexsort((mu.t, np.abs(mu.t)))
    logterms = []
    for i in order:
        lw = weight.log_value(float(mu.t[i]))
        if math.isinf(lw):
            return WFinitenessReport((), None, float(mu.t[i]), False)
        logterms.append(lw + float(mu.logm[i]))
    series = analyze_log_series(logterms)
    # a complete (non-truncated) measure has an exact finite sum: no tail to judge
    consistent = series.converged or not mu.is_truncation
    return WFinitenessReport(tuple(series.log_partial_sums), series, None,
                             consistent)


# -- extreme-measure property bundle -------------------------------------------

@dataclass(frozen=True)
class ExtremeCheckReport:
    min_log_abs_k: float
    min_abs_location: complex
    signs_alternate: bool
    annihilation: AnnihilationReport
    decay: DecayProfile
    outerness_note: str = OUTERNESS_NOTE


def extreme_property_check(mu: DiscreteMeasure, grid: Sequence[complex],
                           kmax: int = 4,
                           annihilation_tol: float = 1e-6,
                           y_schedule: Optional[Sequence[float]] = None
                           ) -> ExtremeCheckReport:
    """Evidence bundle for the extreme-measure conclusions: grid zero-freeness
    of K mu, alternating atom signs, polynomial annihilation, and decay along
    the upper imaginary axis.  Outerness itself is never decided."""
    if not grid:
        raise InputError("empty evaluation grid")
    best = math.inf
    best_z = None
    for z in grid:
        log_k, _ = cauchy_transform_logpolar(mu, complex(z))
        if log_k < best:
            best = log_k
            best_z = complex(z)
    alternate = bool(np.all(mu.signs[1:] * mu.signs[:-1] == -1.0))
    ann = annihilation_report(mu, kmax, annihilation_tol)
    ys = y_schedule if y_schedule is not None else [2.0 ** j for j in range(17)]
    decay = decay_profile(mu, ys, nmax=kmax)
    return ExtremeCheckReport(best, best_z, alternate, ann, decay)
