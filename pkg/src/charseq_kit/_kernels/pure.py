"""Pure-Python summation kernels.

Reference implementation of the hot inner loops.  The compiled backend in
``_cy.pyx`` mirrors these loops operation for operation (same term formulas,
same Neumaier updates, same pair ordering), so results are bit-identical
between backends.  Keep the two files in sync.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple

BACKEND = "pure"


def char_partial_sums(lam: Sequence[float], pos: int, lo: int, hi: int,
                      windows: Sequence[int]) -> Tuple[list, int]:
    """Principal-value partial sums of the characteristic-value log series.

    Terms log(1+lam_k^2) - 2 log|lam_k - lam_pos| are accumulated over array
    positions k in [lo, hi], k != pos, in increasing pair distance j = |k-pos|.
    When both pair members exist their (commutative) plain sum enters the
    compensated accumulator as one update, which makes mirror-symmetric
    evaluations bit-exact.  ``windows[w]`` is a window size N meaning
    0 < |k-pos| < N.  Returns the partial sum after each window plus the
    largest pair distance actually consumed.
    """
    lc = lam[pos]
    s = 0.0
    c = 0.0
    out = []
    j = 1
    saturated = False
    for n_win in windows:
        while not saturated and j < n_win:
            kl = pos - j
            kh = pos + j
            has_l = kl >= lo
            has_h = kh <= hi
            if has_l:
                xl = lam[kl]
                tl = math.log1p(xl * xl) - 2.0 * math.log(abs(xl - lc))
            if has_h:
                xh = lam[kh]
                th = math.log1p(xh * xh) - 2.0 * math.log(abs(xh - lc))
            if has_l and has_h:
                x = tl + th
            elif has_l:
                x = tl
            elif has_h:
                x = th
            else:
                saturated = True
                break
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
            j += 1
        out.append(s + c)
    return out, j - 1


def cauchy_sum(t: Sequence[float], w: Sequence[float],
               zx: float, zy: float) -> Tuple[float, float]:
    """sum_k w_k / (t_k - z) for z = zx + i*zy, split into (re, im).

    1/(t-z) = ((t-zx) + i*zy) / ((t-zx)^2 + zy^2); real and imaginary parts
    carry separate Neumaier compensations, atoms in array order.
    """
    sr = cr = si = ci = 0.0
    for k in range(len(t)):
        dx = t[k] - zx
        d = dx * dx + zy * zy
        xr = w[k] * dx / d
        xi = w[k] * zy / d
        tt = sr + xr
        if abs(sr) >= abs(xr):
            cr += (sr - tt) + xr
        else:
            cr += (xr - tt) + sr
        sr = tt
        tt = si + xi
        if abs(si) >= abs(xi):
            ci += (si - tt) + xi
        else:
            ci += (xi - tt) + si
        si = tt
    return sr + cr, si + ci


def product_sum_real(lam: Sequence[float], lo: int, hi: int,
                     x: float) -> Tuple[float, int]:
    """log|prod sqrt(1+lam_k^2)/(x-lam_k)| over positions [lo, hi], plus the
    number of points above x (for exact sign bookkeeping)."""
    s = c = 0.0
    n_above = 0
    for k in range(lo, hi + 1):
        lk = lam[k]
        term = 0.5 * math.log1p(lk * lk) - math.log(abs(x - lk))
        t = s + term
        if abs(s) >= abs(term):
            c += (s - t) + term
        else:
            c += (term - t) + s
        s = t
        if lk > x:
            n_above += 1
    return s + c, n_above


def product_sum_complex(lam: Sequence[float], lo: int, hi: int,
                        zx: float, zy: float) -> Tuple[float, float]:
    """(log|prod sqrt(1+lam_k^2)/(z-lam_k)|, accumulated phase) for complex z."""
    sa = ca = sp = cp = 0.0
    for k in range(lo, hi + 1):
        lk = lam[k]
        dx = zx - lk
        term = 0.5 * math.log1p(lk * lk) - 0.5 * math.log(dx * dx + zy * zy)
        ph = -math.atan2(zy, dx)
        t = sa + term
        if abs(sa) >= abs(term):
            ca += (sa - t) + term
        else:
            ca += (term - t) + sa
        sa = t
        t = sp + ph
        if abs(sp) >= abs(ph):
            cp += (sp - t) + ph
        else:
            cp += (ph - t) + sp
        sp = t
    return sa + ca, sp + cp
