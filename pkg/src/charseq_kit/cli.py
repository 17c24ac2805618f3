"""Command-line front end.

Exit-code contract: 0 = the command ran (verdict outcomes are data, never exit
codes), 2 = input error, 3 = numeric failure.  Identical inputs and options
produce byte-identical reports; the embedded timestamp can be suppressed with
--no-timestamp.  Every report embeds the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, aintegral, asymptotics, criteria, entire, measures
from .charseq import char_sequence, char_value
from .errors import InputError, NumericError
from .measures import masses_from_charseq
from .sequences import balance_partial_sums, doubling_schedule, upper_density
from . import serialize
from .serialize import (charseq_to_csv, charseq_to_dict, dump_json, load_json,
                        measure_from_csv, measure_from_dict, measure_to_csv,
                        measure_to_dict, sequence_from_dict, weight_from_dict)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _read_json(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    with p.open() as fh:
        return load_json(fh)


def _load_sequence(path: str):
    return sequence_from_dict(_read_json(path))


def _load_measure(path: str):
    if path.endswith(".csv"):
        p = Path(path)
        if not p.exists():
            raise InputError(f"no such file: {path}")
        return measure_from_csv(p.read_text())
    return measure_from_dict(_read_json(path))


def _load_weight(path: str):
    return weight_from_dict(_read_json(path))


def _parse_range(text: str):
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise InputError(f"range must look like 'lo:hi', got {text!r}") from None
    if hi < lo:
        raise InputError("empty index range")
    return list(range(lo, hi + 1))


def _parse_floats(text: str):
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise InputError(f"cannot parse float list {text!r}") from None


def _parse_complex_list(text: str):
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(complex(part))
        except ValueError:
            raise InputError(f"cannot parse complex number {part!r}") from None
    return out


def _emit(args, payload: dict) -> None:
    report = {"command": payload.pop("_command"),
              "config": payload.pop("_config"),
              "result": payload}
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    text_result = payload.pop("_text", None)
    out = Path(args.output) if args.output else None
    if args.format == "csv" and text_result is not None:
        if out:
            out.write_text(text_result)
        else:
            sys.stdout.write(text_result)
        return
    if out:
        with out.open("w") as fh:
            dump_json(report, fh)
    else:
        dump_json(report, sys.stdout)


def _config_of(args) -> dict:
    skip = {"func", "output", "format", "no_timestamp"}
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and not k.startswith("_")}


# -- subcommand implementations ---------------------------------------------------

def cmd_charseq(args) -> dict:
    seq = _load_sequence(args.sequence)
    indices = _parse_range(args.range) if args.range else None
    P = char_sequence(seq, indices, N=args.N, accelerate=args.accelerate,
                      threads=args.threads)
    return {"_command": "charseq", "_config": _config_of(args),
            "charseq": charseq_to_dict(P), "_text": charseq_to_csv(P)}


def cmd_balance(args) -> dict:
    seq = _load_sequence(args.sequence)
    sched = [int(n) for n in _parse_floats(args.schedule)] if args.schedule \
        else doubling_schedule(max(4, seq.count))
    rep = balance_partial_sums(seq, sched, tolerance=args.tolerance)
    return {"_command": "balance", "_config": _config_of(args),
            "report": serialize.jsonable(rep)}


def cmd_density(args) -> dict:
    mode = args.density_mode
    if mode == "main":
        v = criteria.main_criterion(
            _load_weight(args.weight), *(_seq_and_charseq(args)))
    elif mode == "simplified":
        seq, P = _seq_and_charseq(args)
        idx = _parse_range(args.range) if args.range else None
        v = criteria.nondegenerate_simplified(_load_weight(args.weight), seq, P,
                                              fit_indices=idx)
    elif mode == "lp":
        v = criteria.lp_criterion(_load_measure(args.measure), args.p,
                                  _subseq(args), N=args.N)
    elif mode == "l1":
        v = criteria.l1_criterion(_load_measure(args.measure), _subseq(args),
                                  N=args.N)
    elif mode == "cw":
        v = criteria.cw_discrete_criterion(_load_measure(args.measure),
                                           _subseq(args), N=args.N)
    elif mode == "hall":
        v = criteria.hall_criterion(_load_weight(args.weight))
    elif mode == "carleson":
        v = criteria.carleson_verdict(_load_weight(args.weight))
    else:  # pragma: no cover - argparse guards
        raise InputError(f"unknown density mode {mode}")
    return {"_command": f"density {mode}", "_config": _config_of(args),
            "verdict": v.as_dict()}


def _seq_and_charseq(args):
    seq = _load_sequence(args.sequence)
    P = char_sequence(seq, None, N=args.N, accelerate=getattr(args, "accelerate", False),
                      threads=getattr(args, "threads", None))
    return seq, P


def _subseq(args):
    data = _read_json(args.subseq)
    if not isinstance(data, list):
        raise InputError("subsequence file must be a JSON list of indices")
    return [int(n) for n in data]


def cmd_measure(args) -> dict:
    mode = args.measure_mode
    if mode == "build":
        seq, P = _seq_and_charseq(args)
        mu = masses_from_charseq(seq, P)
        return {"_command": "measure build", "_config": _config_of(args),
                "measure": measure_to_dict(mu), "_text": measure_to_csv(mu)}
    mu = _load_measure(args.measure)
    if mode == "cauchy":
        rows = []
        for z in _parse_complex_list(args.z):
            val = measures.cauchy_transform(mu, z)
            log_abs, phase = measures.cauchy_transform_logpolar(mu, z)
            rows.append({"z": z, "value": val, "log_abs": log_abs,
                         "phase": phase})
        return {"_command": "measure cauchy", "_config": _config_of(args),
                "rows": serialize.jsonable(rows)}
    if mode == "moments":
        rep = measures.annihilation_report(mu, args.kmax, args.tolerance)
        return {"_command": "measure moments", "_config": _config_of(args),
                "report": serialize.jsonable(rep)}
    raise InputError(f"unknown measure mode {mode}")  # pragma: no cover


def cmd_entire(args) -> dict:
    mode = args.entire_mode
    seq = _load_sequence(args.sequence)
    if mode == "eval":
        rows = []
        evs = []
        for z in _parse_complex_list(args.z):
            ev = entire.product_eval(seq, z, N=args.N)
            evs.append(ev)
            rows.append(serialize.jsonable(ev))
        return {"_command": "entire eval", "_config": _config_of(args),
                "rows": rows, "_text": _product_csv(evs)}
    if mode == "residues":
        indices = _parse_range(args.range) if args.range else list(seq.indices())
        rows = []
        for n in indices:
            log_res, sign = entire.residue_log(seq, n, N=args.N)
            rows.append({"n": n, "log_res": log_res, "sign": sign})
        return {"_command": "entire residues", "_config": _config_of(args),
                "rows": rows}
    P = char_sequence(seq, None, N=args.N or max(2, seq.count))
    if mode == "identity":
        zs = _parse_complex_list(args.points) if args.points else \
            [complex(0.0, 2.0), complex(1.0, 2.0), complex(-1.5, 1.0)]
        rep = entire.identity_F_equals_cK(seq, P, zs, tolerance=args.tolerance)
        return {"_command": "entire identity", "_config": _config_of(args),
                "report": serialize.jsonable(rep)}
    if mode == "classify":
        rep = entire.classify_zero_set(seq, P)
        return {"_command": "entire classify", "_config": _config_of(args),
                "report": serialize.jsonable(rep)}
    raise InputError(f"unknown entire mode {mode}")  # pragma: no cover


def cmd_verify(args) -> dict:
    mode = args.verify_mode
    if mode == "annihilation":
        seq, P = _seq_and_charseq(args)
        mu = masses_from_charseq(seq, P)
        rep = measures.annihilation_report(mu, args.kmax, args.tolerance)
        return {"_command": "verify annihilation", "_config": _config_of(args),
                "report": serialize.jsonable(rep)}
    if mode == "decay":
        if args.measure:
            mu = _load_measure(args.measure)
        else:
            seq, P = _seq_and_charseq(args)
            mu = masses_from_charseq(seq, P)
        ys = _parse_floats(args.y_schedule) if args.y_schedule else \
            [2.0 ** j for j in range(17)]
        rep = measures.decay_profile(mu, ys, nmax=args.nmax)
        return {"_command": "verify decay", "_config": _config_of(args),
                "report": serialize.jsonable(rep)}
    if mode == "aintegral":
        if args.pair != "step":
            raise InputError("only the built-in 'step' pair is available")
        lam = args.lam
        sched = _parse_floats(args.A_schedule) if args.A_schedule else \
            list(aintegral.DEFAULT_A_SCHEDULE)
        h, hc = aintegral.step_conjugate_pair(lam)
        tit = aintegral.titchmarsh_check(h, hc, sched)
        uly = aintegral.ulyanov_check(h, hc,
                                      [complex(0, 1), complex(1, 1), complex(0, 2)],
                                      sched)
        return {"_command": "verify aintegral", "_config": _config_of(args),
                "titchmarsh": serialize.jsonable(tit),
                "ulyanov": serialize.jsonable(uly)}
    if mode == "asymptotics":
        model = asymptotics.ConjugateModel(
            "one_sided" if args.one_sided else "two_sided", args.alpha)
        indices = _parse_range(args.range)
        rep = asymptotics.compare_p_vs_conjugate(model, indices, N=args.N,
                                                 count=args.count,
                                                 threads=args.threads)
        text = _comparison_csv(rep)
        return {"_command": "verify asymptotics", "_config": _config_of(args),
                "report": serialize.jsonable(rep), "_text": text}
    if mode == "extreme":
        seq, P = _seq_and_charseq(args)
        mu = masses_from_charseq(seq, P)
        grid = _parse_complex_list(args.grid) if args.grid else \
            [complex(x, y) for x in (-2.0, -0.5, 0.5, 2.0)
             for y in (-1.5, -0.5, 0.5, 1.5)]
        rep = measures.extreme_property_check(mu, grid, kmax=args.kmax)
        return {"_command": "verify extreme", "_config": _config_of(args),
                "report": serialize.jsonable(rep)}
    raise InputError(f"unknown verify mode {mode}")  # pragma: no cover


def _product_csv(evs) -> str:
    import csv
    import io
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["z_re", "z_im", "log_abs", "phase_or_sign", "N"])
    for ev in evs:
        ps = ev.sign if ev.sign is not None else ev.phase
        w.writerow([serialize.CSV_FMT.format(ev.z.real),
                    serialize.CSV_FMT.format(ev.z.imag),
                    serialize.CSV_FMT.format(ev.log_abs),
                    serialize.CSV_FMT.format(ps),
                    ev.window[1] - ev.window[0] + 1])
    return buf.getvalue()


def _comparison_csv(rep) -> str:
    import csv
    import io
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["n", "lambda", "p", "conj", "residual_plus", "residual_minus",
                "logfit"])
    for r in rep.rows:
        w.writerow([r.n, serialize.CSV_FMT.format(r.lam),
                    serialize.CSV_FMT.format(r.p),
                    serialize.CSV_FMT.format(r.conj),
                    serialize.CSV_FMT.format(r.residual_plus),
                    serialize.CSV_FMT.format(r.residual_minus),
                    serialize.CSV_FMT.format(rep.log_coefficient)])
    return buf.getvalue()


def cmd_demo(args) -> dict:
    if args.demo_mode != "power-weight":
        raise InputError(f"unknown demo {args.demo_mode}")  # pragma: no cover
    rep = asymptotics.power_weight_demo(args.c, args.alpha, count=args.count,
                                        threads=args.threads)
    return {"_command": "demo power-weight", "_config": _config_of(args),
            "report": serialize.jsonable(rep)}


# -- parser ------------------------------------------------------------------------

def _add_common(p) -> None:
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp for byte-reproducible reports")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (default: CHARSEQ_KIT_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="charseq-kit",
        description="characteristic sequences, Cauchy transforms, and "
                    "polynomial-density criteria for weighted approximation")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charseq", help="characteristic values of a sequence")
    p.add_argument("--sequence", required=True)
    p.add_argument("--range", help="index range lo:hi (default: all)")
    p.add_argument("--N", type=int, default=10000)
    p.add_argument("--accelerate", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_charseq)

    p = sub.add_parser("balance", help="balancedness partial sums")
    p.add_argument("--sequence", required=True)
    p.add_argument("--schedule", help="comma-separated window sizes")
    p.add_argument("--tolerance", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("density", help="density/non-density criteria")
    dsub = p.add_subparsers(dest="density_mode", required=True)
    for mode in ("main", "simplified"):
        q = dsub.add_parser(mode)
        q.add_argument("--weight", required=True)
        q.add_argument("--sequence", required=True)
        q.add_argument("--N", type=int, default=10000)
        if mode == "simplified":
            q.add_argument("--range")
        _add_common(q)
        q.set_defaults(func=cmd_density)
    for mode in ("lp", "l1", "cw"):
        q = dsub.add_parser(mode)
        q.add_argument("--measure", required=True)
        q.add_argument("--subseq", required=True,
                       help="JSON list of natural indices into the support")
        q.add_argument("--N", type=int, default=None)
        if mode == "lp":
            q.add_argument("--p", type=float, required=True)
        _add_common(q)
        q.set_defaults(func=cmd_density)
    for mode in ("hall", "carleson"):
        q = dsub.add_parser(mode)
        q.add_argument("--weight", required=True)
        _add_common(q)
        q.set_defaults(func=cmd_density)

    p = sub.add_parser("measure", help="build and evaluate discrete measures")
    msub = p.add_subparsers(dest="measure_mode", required=True)
    q = msub.add_parser("build")
    q.add_argument("--sequence", required=True)
    q.add_argument("--N", type=int, default=10000)
    q.add_argument("--accelerate", action="store_true")
    _add_common(q)
    q.set_defaults(func=cmd_measure)
    q = msub.add_parser("cauchy")
    q.add_argument("--measure", required=True)
    q.add_argument("--z", required=True, help="semicolon-separated complex points")
    _add_common(q)
    q.set_defaults(func=cmd_measure)
    q = msub.add_parser("moments")
    q.add_argument("--measure", required=True)
    q.add_argument("--kmax", type=int, default=4)
    q.add_argument("--tolerance", type=float, default=1e-6)
    _add_common(q)
    q.set_defaults(func=cmd_measure)

    p = sub.add_parser("entire", help="canonical products and classification")
    esub = p.add_subparsers(dest="entire_mode", required=True)
    q = esub.add_parser("eval")
    q.add_argument("--sequence", required=True)
    q.add_argument("--z", required=True)
    q.add_argument("--N", type=int, default=None)
    _add_common(q)
    q.set_defaults(func=cmd_entire)
    q = esub.add_parser("residues")
    q.add_argument("--sequence", required=True)
    q.add_argument("--range")
    q.add_argument("--N", type=int, default=None)
    _add_common(q)
    q.set_defaults(func=cmd_entire)
    q = esub.add_parser("identity")
    q.add_argument("--sequence", required=True)
    q.add_argument("--points", help="semicolon-separated complex points")
    q.add_argument("--N", type=int, default=None)
    q.add_argument("--tolerance", type=float, default=1e-6)
    _add_common(q)
    q.set_defaults(func=cmd_entire)
    q = esub.add_parser("classify")
    q.add_argument("--sequence", required=True)
    q.add_argument("--N", type=int, default=None)
    _add_common(q)
    q.set_defaults(func=cmd_entire)

    p = sub.add_parser("verify", help="self-contained verification suites")
    vsub = p.add_subparsers(dest="verify_mode", required=True)
    q = vsub.add_parser("annihilation")
    q.add_argument("--sequence", required=True)
    q.add_argument("--kmax", type=int, default=5)
    q.add_argument("--N", type=int, default=2000)
    q.add_argument("--tolerance", type=float, default=1e-6)
    _add_common(q)
    q.set_defaults(func=cmd_verify)
    q = vsub.add_parser("decay")
    q.add_argument("--measure")
    q.add_argument("--sequence")
    q.add_argument("--N", type=int, default=2000)
    q.add_argument("--nmax", type=int, default=4)
    q.add_argument("--y-schedule", dest="y_schedule")
    _add_common(q)
    q.set_defaults(func=cmd_verify)
    q = vsub.add_parser("aintegral")
    q.add_argument("--pair", default="step")
    q.add_argument("--lambda", dest="lam", type=float, default=1.0)
    q.add_argument("--A-schedule", dest="A_schedule")
    _add_common(q)
    q.set_defaults(func=cmd_verify)
    q = vsub.add_parser("asymptotics")
    q.add_argument("--alpha", type=float, required=True)
    side = q.add_mutually_exclusive_group()
    side.add_argument("--one-sided", dest="one_sided", action="store_true")
    side.add_argument("--two-sided", dest="one_sided", action="store_false")
    q.set_defaults(one_sided=True)
    q.add_argument("--range", required=True)
    q.add_argument("--N", type=int, default=100000)
    q.add_argument("--count", type=int, default=100000)
    _add_common(q)
    q.set_defaults(func=cmd_verify)
    q = vsub.add_parser("extreme")
    q.add_argument("--sequence", required=True)
    q.add_argument("--N", type=int, default=2000)
    q.add_argument("--kmax", type=int, default=4)
    q.add_argument("--grid", help="semicolon-separated complex points")
    _add_common(q)
    q.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="worked demonstrations")
    dsub2 = p.add_subparsers(dest="demo_mode", required=True)
    q = dsub2.add_parser("power-weight")
    q.add_argument("--c", type=float, required=True)
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--count", type=int, default=100000)
    _add_common(q)
    q.set_defaults(func=cmd_demo)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        payload = args.func(args)
        _emit(args, payload)
        return EXIT_OK
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
