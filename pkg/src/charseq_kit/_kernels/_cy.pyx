# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled summation kernels.

Mirrors charseq_kit._kernels.pure operation for operation; both backends must
stay bit-identical.  Compile with -ffp-contract=off so the compiler cannot
fuse the compensation arithmetic.
"""

from libc.math cimport atan2, fabs, log, log1p


cdef inline void _neum(double* s, double* c, double x) nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def char_partial_sums(double[::1] lam, Py_ssize_t pos, Py_ssize_t lo,
                      Py_ssize_t hi, long[::1] windows):
    cdef double s = 0.0, c = 0.0, lc = lam[pos], tl = 0.0, th = 0.0, x, xl, xh
    cdef Py_ssize_t j = 1, w = 0, nw = windows.shape[0], kl, kh
    cdef bint has_l, has_h, saturated = False
    out = [0.0] * nw
    with nogil:
        for w in range(nw):
            while not saturated and j < windows[w]:
                kl = pos - j
                kh = pos + j
                has_l = kl >= lo
                has_h = kh <= hi
                if has_l:
                    xl = lam[kl]
                    tl = log1p(xl * xl) - 2.0 * log(fabs(xl - lc))
                if has_h:
                    xh = lam[kh]
                    th = log1p(xh * xh) - 2.0 * log(fabs(xh - lc))
                if has_l and has_h:
                    x = tl + th
                elif has_l:
                    x = tl
                elif has_h:
                    x = th
                else:
                    saturated = True
                    break
                _neum(&s, &c, x)
                j += 1
            with gil:
                out[w] = s + c
    return out, j - 1


def cauchy_sum(double[::1] t, double[::1] w, double zx, double zy):
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0, dx, d
    cdef Py_ssize_t k, n = t.shape[0]
    with nogil:
        for k in range(n):
            dx = t[k] - zx
            d = dx * dx + zy * zy
            _neum(&sr, &cr, w[k] * dx / d)
            _neum(&si, &ci, w[k] * zy / d)
    return sr + cr, si + ci


def product_sum_real(double[::1] lam, Py_ssize_t lo, Py_ssize_t hi, double x):
    cdef double s = 0.0, c = 0.0, lk
    cdef Py_ssize_t k, n_above = 0
    with nogil:
        for k in range(lo, hi + 1):
            lk = lam[k]
            _neum(&s, &c, 0.5 * log1p(lk * lk) - log(fabs(x - lk)))
            if lk > x:
                n_above += 1
    return s + c, n_above


def product_sum_complex(double[::1] lam, Py_ssize_t lo, Py_ssize_t hi,
                        double zx, double zy):
    cdef double sa = 0.0, ca = 0.0, sp = 0.0, cp = 0.0, lk, dx
    cdef Py_ssize_t k
    with nogil:
        for k in range(lo, hi + 1):
            lk = lam[k]
            dx = zx - lk
            _neum(&sa, &ca, 0.5 * log1p(lk * lk) - 0.5 * log(dx * dx + zy * zy))
            _neum(&sp, &cp, -atan2(zy, dx))
    return sa + ca, sp + cp
