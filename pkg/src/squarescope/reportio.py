"""Deterministic JSON/CSV report serialization and input-file loaders.

Reports must be byte-identical across runs: floats are rendered with 17
significant digits (round-trip exact for IEEE doubles), dictionaries keep
insertion order, and nothing time- or locale-dependent is ever written.
Complex numbers appear as [re, im] pairs everywhere, matching the input
file formats.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math

import numpy as np

from .spirals import MultiplierRelation, OriginPath1D, SplitPair
from .trochoid import TrochoidInstance


def fmt17(x: float) -> str:
    """Render a float with 17 significant digits, JSON-compatible."""
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(float(x), ".17g")
    # ".17g" can produce bare exponents like "1e+300"; json accepts them
    return s


def _emit(obj, indent: int, out: list) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}  {json.dumps(str(k))}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        simple = all(
            isinstance(v, (int, float, str, bool)) or v is None for v in seq
        )
        if simple and len(seq) <= 8:
            parts = []
            for v in seq:
                sub: list = []
                _emit(v, 0, sub)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt17(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        out.append(f"[{fmt17(c.real)}, {fmt17(c.imag)}]")
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), indent, out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def dumps(data: dict) -> str:
    """Serialize a report dictionary to deterministic, indented JSON."""
    out: list = []
    _emit(data, 0, out)
    out.append("\n")
    return "".join(out)


def write_report(data: dict, path) -> str:
    text = dumps(data)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return text


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def write_csv(path, header: list[str], rows: list[list]) -> None:
    """Delimited companion output; floats rendered like the JSON report."""
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(
                [fmt17(v) if isinstance(v, (float, np.floating)) else v for v in row]
            )


# ---------------------------------------------------------------------------
# input-file loaders; all raise ValueError with a diagnostic on bad content


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def _as_complex(pair, what: str) -> complex:
    _require(
        isinstance(pair, (list, tuple)) and len(pair) == 2,
        f"{what} must be a [re, im] pair",
    )
    return complex(float(pair[0]), float(pair[1]))


def load_json(path) -> dict:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    _require(isinstance(data, dict), f"{path}: top level must be an object")
    return data


def load_origin_path(path) -> OriginPath1D:
    """Path file: {"samples": [[t, re, im], ...]}."""
    data = load_json(path)
    samples = data.get("samples")
    _require(isinstance(samples, list) and len(samples) >= 2,
             f"{path}: needs a 'samples' list of at least 2 entries")
    t, z = [], []
    for row in samples:
        _require(isinstance(row, list) and len(row) == 3,
                 f"{path}: each sample must be [t, re, im]")
        t.append(float(row[0]))
        z.append(complex(float(row[1]), float(row[2])))
    return OriginPath1D(np.array(t), np.array(z))


def save_origin_path(p: OriginPath1D, path) -> None:
    rows = [[float(t), float(z.real), float(z.imag)] for t, z in zip(p.t, p.z)]
    write_report({"samples": rows}, path)


def load_relation(path) -> MultiplierRelation:
    """Relation file: {"multipliers": [[re, im], ...]}."""
    data = load_json(path)
    mults = data.get("multipliers")
    _require(isinstance(mults, list) and len(mults) >= 1,
             f"{path}: needs a nonempty 'multipliers' list")
    return MultiplierRelation(
        np.array([_as_complex(m, f"{path}: multiplier") for m in mults])
    )


def save_relation(rel: MultiplierRelation, path) -> None:
    rows = [[float(a.real), float(a.imag)] for a in np.atleast_1d(rel.multipliers)]
    write_report({"multipliers": rows}, path)


def load_split_pair(path) -> SplitPair:
    """Pair file: {"p": [re, im], "q": [re, im]}."""
    data = load_json(path)
    _require("p" in data and "q" in data, f"{path}: needs 'p' and 'q' entries")
    return SplitPair(_as_complex(data["p"], f"{path}: p"),
                     _as_complex(data["q"], f"{path}: q"))


def save_split_pair(sp: SplitPair, path) -> None:
    write_report(
        {"p": [sp.p.real, sp.p.imag], "q": [sp.q.real, sp.q.imag]}, path
    )


def load_offsets(path) -> list[tuple[complex, int]]:
    """Offsets file: {"offsets": [[re, im, k], ...]} (k an integer index)."""
    data = load_json(path)
    rows = data.get("offsets")
    _require(isinstance(rows, list), f"{path}: needs an 'offsets' list")
    offs = []
    for row in rows:
        _require(isinstance(row, list) and len(row) == 3,
                 f"{path}: each offset must be [re, im, k]")
        offs.append((complex(float(row[0]), float(row[1])), int(row[2])))
    return offs


def load_area_spec(path) -> tuple[tuple[complex, complex], complex]:
    """Area file: {"x": [[re, im], [re, im]], "a": [re, im]}."""
    data = load_json(path)
    x = data.get("x")
    _require(isinstance(x, list) and len(x) == 2,
             f"{path}: needs 'x' as a pair of [re, im] values")
    a = _as_complex(data.get("a"), f"{path}: a")
    return (_as_complex(x[0], f"{path}: x[0]"), _as_complex(x[1], f"{path}: x[1]")), a


def load_trochoid_instance(path) -> TrochoidInstance:
    """Instance file with all nine parameters; complex ones as [re, im]."""
    data = load_json(path)
    for key in ("alpha1", "alpha2", "beta1", "beta2", "t0", "p", "lambda", "r1", "r2"):
        _require(key in data, f"{path}: missing '{key}'")
    try:
        return TrochoidInstance(
            alpha1=_as_complex(data["alpha1"], f"{path}: alpha1"),
            alpha2=_as_complex(data["alpha2"], f"{path}: alpha2"),
            beta1=_as_complex(data["beta1"], f"{path}: beta1"),
            beta2=_as_complex(data["beta2"], f"{path}: beta2"),
            t0=float(data["t0"]),
            p=float(data["p"]),
            lam=float(data["lambda"]),
            r1=float(data["r1"]),
            r2=float(data["r2"]),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: invalid instance ({exc})") from exc


def save_trochoid_instance(inst: TrochoidInstance, path) -> None:
    write_report(
        {
            "alpha1": [complex(inst.alpha1).real, complex(inst.alpha1).imag],
            "alpha2": [complex(inst.alpha2).real, complex(inst.alpha2).imag],
            "beta1": [complex(inst.beta1).real, complex(inst.beta1).imag],
            "beta2": [complex(inst.beta2).real, complex(inst.beta2).imag],
            "t0": inst.t0,
            "p": inst.p,
            "lambda": inst.lam,
            "r1": inst.r1,
            "r2": inst.r2,
        },
        path,
    )
