"""CSV / JSON serialization of grid functions, spectra and kernels.

CSV layout::

    # orbitx function algebra=A2 M=3 kind=C
    s0,s1,s2,re,im
    3,0,0,0.5,0
    ...

Spectra use ``t0,t1,t2`` columns and the ``spectrum`` tag, kernels the
``kernel`` tag plus ``name=`` and ``normalization=`` fields. E-kind files carry
an extra ``sector`` column (``F`` or ``reflected``). Rows follow the grid
enumeration order; readers reject files whose rows do not.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .convolution import Kernel
from .grids import EvenGridPoint, EvenLabelPoint
from .transforms import DiscreteFunction, Spectrum, grid_labels, grid_points

TAGS = ("function", "spectrum", "kernel")


class FormatError(ValueError):
    pass


def _fmt(v: float) -> str:
    return repr(float(v))


def _coords(item) -> tuple[tuple[int, int, int], str]:
    if isinstance(item, EvenGridPoint):
        return item.base.s, item.sector
    if isinstance(item, EvenLabelPoint):
        return item.base.t, item.sector
    return (item.s if hasattr(item, "s") else item.t), "F"


def _rows(obj):
    if isinstance(obj, Spectrum):
        return obj.labels, obj.coeffs, "t"
    return obj.points, obj.values, "s"


def _unpack(obj):
    if isinstance(obj, Kernel):
        meta = {"name": obj.name, "normalization": obj.normalization}
        return "kernel", obj.function, meta
    if isinstance(obj, Spectrum):
        return "spectrum", obj, {}
    return "function", obj, {}


def to_csv(obj) -> str:
    tag, body, meta = _unpack(obj)
    items, values, prefix = _rows(body)
    header = f"# orbitx {tag} algebra={body.algebra.value} M={body.M} kind={body.kind}"
    for k, v in meta.items():
        header += f" {k}={v}"
    buf = io.StringIO()
    buf.write(header + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    cols = [f"{prefix}0", f"{prefix}1", f"{prefix}2"]
    even = body.kind == "E"
    writer.writerow(cols + (["sector"] if even else []) + ["re", "im"])
    for item, v in zip(items, values):
        c, sector = _coords(item)
        writer.writerow([*c, *([sector] if even else []), _fmt(v.real), _fmt(v.imag)])
    return buf.getvalue()


def to_json(obj) -> str:
    tag, body, meta = _unpack(obj)
    items, values, prefix = _rows(body)
    rows = []
    for item, v in zip(items, values):
        c, sector = _coords(item)
        row = {prefix: list(c), "re": float(v.real), "im": float(v.imag)}
        if body.kind == "E":
            row["sector"] = sector
        rows.append(row)
    doc = {"type": tag, "algebra": body.algebra.value, "M": body.M, "kind": body.kind, **meta}
    doc["rows"] = rows
    return json.dumps(doc, indent=1) + "\n"


def _build(tag: str, meta: dict, keys: list, values: np.ndarray):
    try:
        algebra, M, kind = meta["algebra"], int(meta["M"]), meta["kind"]
    except (KeyError, ValueError):
        raise FormatError("header must carry algebra, M and kind") from None
    try:
        if tag == "spectrum":
            expected = grid_labels(algebra, M, kind)
        else:
            expected = grid_points(algebra, M, kind)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    want = [_coords(p) for p in expected]
    if keys != want:
        raise FormatError(
            f"rows do not match the {algebra} M={M} kind={kind} grid "
            f"(expected {len(want)} rows in enumeration order, got {len(keys)})"
        )
    if tag == "spectrum":
        return Spectrum(algebra, M, kind, values)
    fn = DiscreteFunction(algebra, M, kind, values)
    if tag == "kernel":
        return Kernel(fn, meta.get("name", "custom"), meta.get("normalization", "sum-preserving"))
    return fn


def from_csv(text: str):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# orbitx "):
        raise FormatError("missing '# orbitx' header line")
    parts = lines[0][len("# orbitx ") :].split()
    tag = parts[0] if parts else ""
    if tag not in TAGS:
        raise FormatError(f"unknown object type {tag!r}")
    meta = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    reader = csv.DictReader(lines[1:])
    prefix = "t" if tag == "spectrum" else "s"
    keys, values = [], []
    try:
        for row in reader:
            c = tuple(int(row[f"{prefix}{i}"]) for i in range(3))
            keys.append((c, row.get("sector") or "F"))
            values.append(complex(float(row["re"]), float(row["im"])))
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"malformed row: {exc}") from None
    return _build(tag, meta, keys, np.array(values, dtype=complex))


def from_json(text: str):
    try:
        doc = json.loads(text)
        tag = doc["type"]
        prefix = "t" if tag == "spectrum" else "s"
        keys = [(tuple(int(v) for v in r[prefix]), r.get("sector", "F")) for r in doc["rows"]]
        values = np.array([complex(r["re"], r["im"]) for r in doc["rows"]], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed JSON document: {exc}") from None
    if tag not in TAGS:
        raise FormatError(f"unknown object type {tag!r}")
    return _build(tag, doc, keys, values)


def dumps(obj, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(obj)
    if fmt == "json":
        return to_json(obj)
    raise FormatError(f"unsupported format {fmt!r}")


def loads(text: str, fmt: str | None = None):
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    return from_json(text) if fmt == "json" else from_csv(text)


def read(path, fmt: str | None = None):
    if fmt is None and str(path).endswith(".json"):
        fmt = "json"
    return loads(Path(path).read_text(), fmt)


def write(obj, path, fmt: str = "csv") -> None:
    Path(path).write_text(dumps(obj, fmt))
