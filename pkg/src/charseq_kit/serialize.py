"""File formats: JSON/CSV readers and writers for every domain object.

JSON floats go through Python's shortest round-trip representation (exact
reconstruction); sequence points additionally accept and emit decimal strings
so externally produced files survive the round trip digit for digit.  CSV is
the human view and carries 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Optional, Sequence

import numpy as np

from .aintegral import SampledFunction, TailModel
from .charseq import CharacteristicSequence, CharEntry
from .errors import InputError
from .measures import DiscreteMeasure
from .sequences import DiscreteSequence, GeneratorSpec, materialize
from .weights import (WeightSpec, discrete_support, exp_power, exp_power_log,
                      tabulated)

CSV_FMT = "{:.12g}"


def _float(x, what: str) -> float:
    try:
        return float(x)
    except (TypeError, ValueError):
        raise InputError(f"cannot parse {what}: {x!r}") from None


# -- sequences ---------------------------------------------------------------

def sequence_from_dict(d: dict) -> DiscreteSequence:
    if not isinstance(d, dict) or "kind" not in d:
        raise InputError("sequence spec must be an object with a 'kind'")
    kind = d["kind"]
    if kind == "explicit":
        pts = tuple(_float(p, "point") for p in d.get("points", []))
        spec = GeneratorSpec(kind="explicit", points=pts)
    elif kind == "power":
        spec = GeneratorSpec(kind="power", alpha=_float(d.get("alpha"), "alpha"),
                             two_sided=bool(d.get("two_sided", False)),
                             count=int(d.get("count", 0)))
    elif kind == "even_mirror":
        spec = GeneratorSpec(kind="even_mirror", positive_points=tuple(
            _float(p, "point") for p in d.get("positive_points", [])))
    elif kind == "geometric":
        spec = GeneratorSpec(kind="geometric", ratio=_float(d.get("ratio"), "ratio"),
                             count=int(d.get("count", 0)))
    else:
        raise InputError(f"unknown sequence kind {kind!r}")
    return materialize(spec)


def sequence_to_dict(seq: DiscreteSequence) -> dict:
    gen = seq.generator
    if gen is None or gen.kind == "explicit":
        return {"kind": "explicit",
                "points": [repr(float(p)) for p in seq.points]}
    if gen.kind == "power":
        return {"kind": "power", "alpha": gen.alpha, "two_sided": gen.two_sided,
                "count": gen.count}
    if gen.kind == "even_mirror":
        return {"kind": "even_mirror",
                "positive_points": [repr(float(p)) for p in gen.positive_points]}
    if gen.kind == "geometric":
        return {"kind": "geometric", "ratio": gen.ratio, "count": gen.count}
    raise InputError(f"unknown generator {gen.kind!r}")


# -- measures ----------------------------------------------------------------

def measure_from_dict(d: dict) -> DiscreteMeasure:
    atoms = d.get("atoms")
    if not atoms:
        raise InputError("measure spec needs a non-empty 'atoms' list")
    t = [_float(a["t"], "atom location") for a in atoms]
    signs = [float(int(a.get("sign", 1))) for a in atoms]
    logm = [_float(a["logmass"], "logmass") for a in atoms]
    return DiscreteMeasure(t=np.array(t), signs=np.array(signs),
                           logm=np.array(logm),
                           normalized=bool(d.get("normalized", False)),
                           is_truncation=bool(d.get("is_truncation", False)))


def measure_to_dict(mu: DiscreteMeasure) -> dict:
    return {"atoms": [{"t": float(t), "sign": int(s), "logmass": float(lm)}
                      for t, s, lm in zip(mu.t, mu.signs, mu.logm)],
            "normalized": mu.normalized,
            "is_truncation": mu.is_truncation}


def measure_to_csv(mu: DiscreteMeasure) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["t", "sign", "logmass"])
    for t, s, lm in zip(mu.t, mu.signs, mu.logm):
        w.writerow([CSV_FMT.format(t), int(s), CSV_FMT.format(lm)])
    return buf.getvalue()


def measure_from_csv(text: str) -> DiscreteMeasure:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:3] != ["t", "sign", "logmass"]:
        raise InputError("measure CSV must start with header t,sign,logmass")
    t, signs, logm = [], [], []
    for row in rows[1:]:
        if not row:
            continue
        t.append(_float(row[0], "t"))
        signs.append(float(int(row[1])))
        logm.append(_float(row[2], "logmass"))
    return DiscreteMeasure(t=np.array(t), signs=np.array(signs),
                           logm=np.array(logm))


# -- weights -----------------------------------------------------------------

def weight_from_dict(d: dict) -> WeightSpec:
    kind = d.get("kind")
    if kind == "exp_power":
        return exp_power(_float(d.get("c"), "c"), _float(d.get("alpha"), "alpha"))
    if kind == "exp_power_log":
        return exp_power_log(_float(d.get("c"), "c"),
                             _float(d.get("alpha"), "alpha"),
                             _float(d.get("beta"), "beta"))
    if kind == "tabulated":
        entries = []
        for pair in d.get("entries", []):
            x = _float(pair[0], "abscissa")
            w = math.inf if pair[1] in ("inf", "+inf", None) else _float(pair[1], "weight")
            entries.append((x, w))
        return tabulated(entries)
    if kind == "discrete":
        seq = sequence_from_dict(d["sequence"])
        values = [_float(v, "weight value") for v in d.get("values", [])]
        return discrete_support([float(p) for p in seq.points], values)
    raise InputError(f"unknown weight kind {kind!r}")


def weight_to_dict(w: WeightSpec) -> dict:
    d = {"kind": w.kind}
    d.update({k: (v if not isinstance(v, float) or math.isfinite(v) else "inf")
              for k, v in w.params.items()})
    return d


# -- characteristic sequences ---------------------------------------------------

def charseq_to_csv(P: CharacteristicSequence) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["index", "lambda", "p", "err", "N", "method"])
    for e in P.entries.values():
        w.writerow([e.n, CSV_FMT.format(e.lam), CSV_FMT.format(e.p),
                    CSV_FMT.format(e.err), e.N, e.method])
    return buf.getvalue()


def charseq_to_dict(P: CharacteristicSequence) -> dict:
    return {"sequence": sequence_to_dict(P.seq),
            "entries": [{"n": e.n, "lambda": e.lam, "p": e.p, "err": e.err,
                         "N": e.N, "method": e.method}
                        for e in P.entries.values()]}


def charseq_from_dict(d: dict) -> CharacteristicSequence:
    seq = sequence_from_dict(d["sequence"])
    entries = {}
    for row in d.get("entries", []):
        e = CharEntry(n=int(row["n"]), lam=_float(row["lambda"], "lambda"),
                      p=_float(row["p"], "p"), err=_float(row["err"], "err"),
                      N=int(row["N"]), method=str(row.get("method", "raw")),
                      window_pairs=int(row.get("window_pairs", 0)))
        entries[e.n] = e
    return CharacteristicSequence(seq=seq, entries=entries)


# -- sampled functions ------------------------------------------------------------

def _tail_from_dict(d: Optional[dict]) -> Optional[TailModel]:
    if d is None:
        return None
    return TailModel(kind=d["kind"], params=tuple(_float(p, "tail param")
                                                  for p in d.get("params", [])))


def sampled_from_dict(d: dict) -> SampledFunction:
    grid = [_float(x, "grid point") for x in d.get("grid", [])]
    values = [_float(x, "sample value") for x in d.get("values", [])]
    tail = d.get("tail")
    left = right = None
    if tail is not None:
        if tail.get("kind") == "split":
            left = _tail_from_dict(tail.get("left"))
            right = _tail_from_dict(tail.get("right"))
        else:
            left = right = _tail_from_dict(tail)
    return SampledFunction(grid=np.array(grid), values=np.array(values),
                           tail_left=left, tail_right=right)


def sampled_to_dict(h: SampledFunction) -> dict:
    def tail_dict(t: Optional[TailModel]):
        return None if t is None else {"kind": t.kind, "params": list(t.params)}

    if h.tail_left is h.tail_right or \
            (h.tail_left and h.tail_right and h.tail_left == h.tail_right):
        tail = tail_dict(h.tail_left)
    else:
        tail = {"kind": "split", "left": tail_dict(h.tail_left),
                "right": tail_dict(h.tail_right)}
    return {"grid": [float(x) for x in h.grid],
            "values": [float(v) for v in h.values],
            "tail": tail}


# -- generic report plumbing --------------------------------------------------------

def jsonable(obj):
    """Recursively convert dataclasses/numpy/complex into JSON-ready values."""
    import dataclasses
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, complex):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if isinstance(obj, (np.floating, np.integer)):
        return jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, range)):
        return [jsonable(v) for v in obj]
    return repr(obj)


def dump_json(obj, fh) -> None:
    json.dump(jsonable(obj), fh, indent=2, sort_keys=False)
    fh.write("\n")


def load_json(fh) -> dict:
    try:
        return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
