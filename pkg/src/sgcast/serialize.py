"""JSON load/save for instances, schemes and reports.

Output is canonical: sorted keys, integers in decimal, rationals as "a/b"
strings, one trailing newline. Saving a loaded value reproduces the bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaError
from .keymodel import Instance, make_instance
from .scheme import LinearScheme


def jsonable(obj):
    """Recursively convert numpy values, Fractions and tuples for json.dumps."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [[int(x) for x in row] for row in obj] if obj.ndim == 2 else [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(jsonable(v) for v in obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _field(obj: dict, name: str, kind, where: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    if name not in obj:
        raise SchemaError(f"{where}: missing field {name!r}")
    value = obj[name]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"{where}: field {name!r} must be an integer")
    if kind is list and not isinstance(value, list):
        raise SchemaError(f"{where}: field {name!r} must be a list")
    return value


def _matrix(value, p: int, cols: int | None, where: str) -> np.ndarray:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise SchemaError(f"{where}: expected a list of rows")
    widths = {len(r) for r in value}
    if len(widths) > 1:
        raise SchemaError(f"{where}: ragged rows")
    width = widths.pop() if widths else (cols or 0)
    if cols is not None and width != cols:
        raise SchemaError(f"{where}: rows have {width} entries, expected {cols}")
    for r in value:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < p:
                raise SchemaError(f"{where}: entry {x!r} is not a residue in [0, {p})")
    dt = np.int64 if p < 1 << 31 else object
    out = np.zeros((len(value), width), dtype=dt)
    for i, r in enumerate(value):
        for j, x in enumerate(r):
            out[i, j] = x
    return out


# ----------------------------------------------------------------------------
# Instances


def instance_to_dict(inst: Instance) -> dict:
    out = {"p": inst.p, "m": inst.m, "N": inst.N, "keys": [H for H in inst.keys]}
    if inst.diagonal:
        out["diagonal"] = True
    if inst.label:
        out["label"] = inst.label
    return out


def instance_from_dict(obj: dict) -> Instance:
    p = _field(obj, "p", int, "instance")
    m = _field(obj, "m", int, "instance")
    N = _field(obj, "N", int, "instance")
    keys = _field(obj, "keys", list, "instance")
    mats = [_matrix(H, p, m, f"instance.keys[{k}]") for k, H in enumerate(keys)]
    try:
        return make_instance(p, m, N, mats, diagonal=bool(obj.get("diagonal", False)), label=str(obj.get("label", "")))
    except ValueError as exc:
        raise SchemaError(f"instance: {exc}") from None


def dumps_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def loads_instance(text: str) -> Instance:
    return instance_from_dict(_loads(text))


def save_instance(inst: Instance, path) -> None:
    _write(path, dumps_instance(inst))


def load_instance(path) -> Instance:
    return loads_instance(_read(path))


# ----------------------------------------------------------------------------
# Schemes


def scheme_to_dict(sch: LinearScheme, embed_instance: bool = True) -> dict:
    out = {
        "p": sch.p,
        "L": sch.L,
        "L_W": sch.L_W,
        "L_X": sch.L_X,
        "V_W": sch.V_W,
        "V": sch.V,
        "provenance": sch.provenance,
    }
    if embed_instance:
        out["instance"] = instance_to_dict(sch.inst)
    return out


def scheme_from_dict(obj: dict, inst: Instance | None = None) -> LinearScheme:
    p = _field(obj, "p", int, "scheme")
    L = _field(obj, "L", int, "scheme")
    L_W = _field(obj, "L_W", int, "scheme")
    L_X = _field(obj, "L_X", int, "scheme")
    if inst is None:
        if "instance" not in obj:
            raise SchemaError("scheme: no embedded 'instance' and none supplied")
        inst = instance_from_dict(obj["instance"])
    if inst.p != p:
        raise SchemaError(f"scheme: p={p} but the instance has p={inst.p}")
    V = _matrix(_field(obj, "V", list, "scheme"), p, inst.m, "scheme.V")
    V_W = _matrix(_field(obj, "V_W", list, "scheme"), p, L_W if L_X else None, "scheme.V_W")
    if V.shape[0] != L_X:
        raise SchemaError(f"scheme: V has {V.shape[0]} rows but L_X={L_X}")
    if V_W.shape[0] != L_X:
        raise SchemaError(f"scheme: V_W has {V_W.shape[0]} rows but L_X={L_X}")
    if L_X == 0:
        V_W = np.zeros((0, L_W), dtype=V.dtype)
    provenance = obj.get("provenance", {})
    if not isinstance(provenance, dict):
        raise SchemaError("scheme: 'provenance' must be an object")
    try:
        return LinearScheme(inst=inst, V_W=V_W, V=V, L=L, provenance=provenance)
    except ValueError as exc:
        raise SchemaError(f"scheme: {exc}") from None


def dumps_scheme(sch: LinearScheme, embed_instance: bool = True) -> str:
    return dumps(scheme_to_dict(sch, embed_instance))


def loads_scheme(text: str, inst: Instance | None = None) -> LinearScheme:
    return scheme_from_dict(_loads(text), inst)


def save_scheme(sch: LinearScheme, path, embed_instance: bool = True) -> None:
    _write(path, dumps_scheme(sch, embed_instance))


def load_scheme(path, inst: Instance | None = None) -> LinearScheme:
    return loads_scheme(_read(path), inst)
