"""Weight functions W >= 1 (lower semi-continuous, possibly +inf-valued).

Evaluation happens in the log domain throughout: log W is what every
criterion consumes, and +inf is a legal value (it encodes approximation on
subsets of the line).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

from .errors import InputError


@dataclass(frozen=True)
class WeightSpec:
    kind: str                       # exp_power | exp_power_log | tabulated | discrete
    params: dict
    degenerate: bool                # finite only on a discrete set
    even: bool
    _log_value: Callable[[float], float]

    def log_value(self, x: float) -> float:
        """log W(x); returns +inf where W is infinite."""
        return self._log_value(float(x))

    def value(self, x: float) -> float:
        lw = self.log_value(x)
        return math.inf if math.isinf(lw) else math.exp(lw)

    def describe(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params),
                "degenerate": self.degenerate, "even": self.even}


def exp_power(c: float, alpha: float) -> WeightSpec:
    """W(x) = exp(c |x|^alpha); grows faster than every polynomial (c, alpha > 0)."""
    if c <= 0 or alpha <= 0:
        raise InputError("exp_power weight requires c > 0 and alpha > 0")

    def lw(x: float) -> float:
        return c * abs(x) ** alpha

    return WeightSpec("exp_power", {"c": c, "alpha": alpha}, False, True, lw)


def exp_power_log(c: float, alpha: float, beta: float) -> WeightSpec:
    """W(x) = exp(c |x|^alpha / log(e+|x|)^beta); the slowly-modulated family
    used for borderline summability examples."""
    if c <= 0 or alpha <= 0 or beta < 0:
        raise InputError("exp_power_log requires c > 0, alpha > 0, beta >= 0")

    def lw(x: float) -> float:
        ax = abs(x)
        return c * ax ** alpha / math.log(math.e + ax) ** beta

    return WeightSpec("exp_power_log", {"c": c, "alpha": alpha, "beta": beta},
                      False, True, lw)


def tabulated(entries: Sequence[Tuple[float, float]]) -> WeightSpec:
    """Weight from (x, W(x)) pairs, W >= 1 or +inf ("inf").

    log W is interpolated linearly between consecutive finite entries; outside
    the table and across +inf entries the weight is +inf (the lower
    semi-continuous envelope of the data).
    """
    if len(entries) < 1:
        raise InputError("tabulated weight needs entries")
    xs = [float(x) for x, _ in entries]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise InputError("tabulated abscissae must be strictly increasing")
    lws = []
    for _, w in entries:
        w = float(w)
        if w != math.inf and w < 1.0:
            raise InputError("weights must satisfy W >= 1")
        lws.append(math.inf if w == math.inf else math.log(w))

    def lw(x: float) -> float:
        i = bisect_left(xs, x)
        if i < len(xs) and xs[i] == x:
            return lws[i]
        if i == 0 or i == len(xs):
            return math.inf
        a, b = lws[i - 1], lws[i]
        if math.isinf(a) or math.isinf(b):
            return math.inf
        frac = (x - xs[i - 1]) / (xs[i] - xs[i - 1])
        return a + frac * (b - a)

    even = all(-x in xs for x in xs)
    return WeightSpec("tabulated", {"entries": [(x, w) for x, w in entries]},
                      False, even, lw)


def discrete_support(points: Sequence[float], values: Sequence[float]) -> WeightSpec:
    """Degenerate weight: finite values on a discrete point set, +inf elsewhere."""
    pts = [float(p) for p in points]
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise InputError("support points must be strictly increasing")
    if len(pts) != len(values):
        raise InputError("points and values must align")
    vals = [float(v) for v in values]
    if any(v < 1.0 for v in vals):
        raise InputError("weights must satisfy W >= 1")
    logv = [math.log(v) for v in vals]

    def lw(x: float) -> float:
        i = bisect_left(pts, x)
        if i < len(pts) and pts[i] == x:
            return logv[i]
        return math.inf

    return WeightSpec("discrete", {"points": pts, "values": vals}, True, False, lw)


def discrete_reciprocal(mu) -> WeightSpec:
    """W(t_n) = 1/mass_n on the support of a positive measure, +inf elsewhere.

    The degenerate weight whose density question matches the discrete-measure
    criterion; masses must be <= 1 so that W >= 1.
    """
    if not mu.is_positive():
        raise InputError("reciprocal weight needs a positive measure")
    if any(lm > 0 for lm in mu.logm):
        raise InputError("masses must be <= 1 for the reciprocal weight")
    pts = [float(x) for x in mu.t]
    logv = [-float(lm) for lm in mu.logm]

    def lw(x: float) -> float:
        i = bisect_left(pts, x)
        if i < len(pts) and pts[i] == x:
            return logv[i]
        return math.inf

    return WeightSpec("discrete", {"points": pts, "log_values": logv}, True,
                      False, lw)
