"""Benchmark the compiled kernels against the pure-Python fallback.

Run as ``python -m charseq_kit.bench``.  Both backends execute identical
operation sequences, so the comparison is purely about dispatch overhead and
compiled-loop speed; results are asserted bit-identical along the way.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ._kernels import compiled, get_backend, pure


def _time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(count: int = 20000, n_indices: int = 16, n_points: int = 64,
        repeat: int = 3) -> list:
    k = np.arange(1, count + 1, dtype=np.float64)
    lam = np.concatenate([-(k[::-1] ** 3), k ** 3])
    windows = np.asarray([count // 2, count, 2 * count], dtype=np.int64)
    positions = np.linspace(count // 2, 3 * count // 2, n_indices).astype(int)
    logm = -np.abs(np.arange(lam.size) - count) * 0.5
    w = np.exp(logm - logm.max())
    zs = [complex(0.3 * j, 1.0 + 0.1 * j) for j in range(n_points)]

    backends = [("pure", pure)]
    if compiled:
        backends.append(("compiled", get_backend("compiled")))

    rows = []
    reference: dict = {}
    for name, impl in backends:
        def bench_char():
            return [impl.char_partial_sums(lam, int(p), 0, lam.size - 1, windows)
                    for p in positions]

        def bench_cauchy():
            return [impl.cauchy_sum(lam, w, z.real, z.imag) for z in zs]

        def bench_product():
            return [impl.product_sum_complex(lam, 0, lam.size - 1, z.real, z.imag)
                    for z in zs]

        for label, fn in (("char_partial_sums", bench_char),
                          ("cauchy_sum", bench_cauchy),
                          ("product_sum", bench_product)):
            result = fn()
            if label in reference:
                assert result == reference[label], \
                    f"{label}: backends disagree bitwise"
            else:
                reference[label] = result
            rows.append((label, name, _time(fn, repeat)))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20000,
                    help="points per side of the test sequence")
    ap.add_argument("--indices", type=int, default=16)
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rows = run(args.count, args.indices, args.points, args.repeat)
    by_label: dict = {}
    for label, backend, secs in rows:
        by_label.setdefault(label, {})[backend] = secs
    print(f"{'kernel':<20} {'pure [s]':>12} {'compiled [s]':>14} {'speedup':>9}")
    for label, t in by_label.items():
        pure_t = t.get("pure", float("nan"))
        comp_t = t.get("compiled")
        if comp_t:
            print(f"{label:<20} {pure_t:>12.4f} {comp_t:>14.4f} "
                  f"{pure_t / comp_t:>8.1f}x")
        else:
            print(f"{label:<20} {pure_t:>12.4f} {'n/a':>14} {'n/a':>9}")
    if not compiled:
        print("compiled backend unavailable; showing pure timings only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
