"""JSON documents for the four index kinds.

Every document is ``{"format_version", "kind", "header", "buckets", ...}``
written with sorted keys and no whitespace, so equal indexes give equal
bytes.  Floats are written in shortest round-trip form and load back
bit-exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .anns_asym import AsymIndex
from .anns_sym import SymIndex
from .asrs import AsrsIndex, SubcurveRange
from .errors import FormatError
from .grid import build_grid, parse_path_key, path_key
from .twd import TwdIndex

FORMAT_VERSION = 1
KINDS = ("asym", "sym", "asrs", "twd")


def kind_of(index):
    for kind, cls in (("asym", AsymIndex), ("sym", SymIndex), ("asrs", AsrsIndex), ("twd", TwdIndex)):
        if isinstance(index, cls):
            return kind
    raise TypeError(f"not an index: {type(index).__name__}")


def _grid_doc(g):
    return {
        "origin": [float(x) for x in g.origin],
        "side": float(g.side),
        "cell": float(g.cell),
        "cells_per_axis": g.cells_per_axis,
    }


def _grid_from(doc):
    return build_grid(doc["origin"], doc["side"], doc["cell"])


def _curves_doc(curves):
    return {cid: np.asarray(v, dtype=float).tolist() for cid, v in curves.items()}


def _curves_from(doc):
    out = {}
    for cid, pts in doc.items():
        v = np.array(pts, dtype=float)
        v.setflags(write=False)
        out[cid] = v
    return out


def to_document(index):
    kind = kind_of(index)
    doc = {"format_version": FORMAT_VERSION, "kind": kind}
    if kind == "asym":
        doc["header"] = {
            "metric": index.metric,
            "d": index.dim,
            "delta": index.delta,
            "eps": index.eps,
            "k": index.k,
            "grid": _grid_doc(index.grid),
            "diameter_estimate": index.diameter_estimate,
        }
        doc["buckets"] = {path_key(k): list(v) for k, v in index.buckets.items()}
        doc["curves"] = _curves_doc(index.curves)
    elif kind == "sym":
        doc["header"] = {
            "d": index.dim,
            "delta": index.delta,
            "eps": index.eps,
            "eps_internal": index.eps_internal,
            "cell": index.cell,
            "r_outer": index.r_outer,
            "mu": index.mu,
        }
        doc["buckets"] = {path_key(k): list(v) for k, v in index.buckets.items()}
        doc["curves"] = _curves_doc(index.curves)
    elif kind == "asrs":
        doc["header"] = {
            "d": index.dim,
            "delta": index.delta,
            "eps": index.eps,
            "k": index.k,
            "grid": _grid_doc(index.grid),
            "diameter_estimate": index.diameter_estimate,
            "curve_id": index.curve_id,
        }
        doc["buckets"] = {path_key(k): [r.text() for r in v] for k, v in index.buckets.items()}
        doc["curve"] = np.asarray(index.curve, dtype=float).tolist()
    else:
        doc["header"] = {
            "theta": index.theta,
            "eps": index.eps,
            "t_min": index.t_min,
            "t_max": index.t_max,
            "shift": index.shift,
            "step": index.step,
            "subintervals": index.subintervals,
            "time_offset": index.time_offset,
            "time_scale": index.time_scale,
        }
        doc["endpoints"] = [float(c) for c in index.endpoints]
        doc["buckets"] = {f"{i}-{j}": list(v) for (i, j), v in index.buckets.items()}
        doc["points"] = {r: [float(t) for t in ts] for r, ts in index.region_times.items()}
    return doc


def dumps(index):
    return json.dumps(to_document(index), sort_keys=True, separators=(",", ":"), allow_nan=False)


def from_document(doc):
    try:
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(f"unsupported format_version {doc.get('format_version')!r}")
        kind = doc["kind"]
        h = doc["header"]
        if kind == "asym":
            return AsymIndex(
                delta=h["delta"], eps=h["eps"], k=h["k"], metric=h["metric"],
                grid=_grid_from(h["grid"]),
                diameter_estimate=h["diameter_estimate"],
                buckets={parse_path_key(k): tuple(v) for k, v in doc["buckets"].items()},
                curves=_curves_from(doc["curves"]),
            )
        if kind == "sym":
            curves = _curves_from(doc["curves"])
            return SymIndex(
                delta=h["delta"], eps=h["eps"], dim=h["d"],
                buckets={parse_path_key(k): tuple(v) for k, v in doc["buckets"].items()},
                curve_lengths={cid: len(v) for cid, v in curves.items()},
                curves=curves,
            )
        if kind == "asrs":
            curve = np.array(doc["curve"], dtype=float)
            curve.setflags(write=False)
            return AsrsIndex(
                delta=h["delta"], eps=h["eps"], k=h["k"],
                grid=_grid_from(h["grid"]),
                diameter_estimate=h["diameter_estimate"],
                buckets={
                    parse_path_key(k): tuple(SubcurveRange.parse(r) for r in v)
                    for k, v in doc["buckets"].items()
                },
                curve_id=h["curve_id"],
                curve=curve,
            )
        if kind == "twd":
            buckets = {}
            for key, v in doc["buckets"].items():
                i, j = key.split("-")
                buckets[(int(i), int(j))] = tuple(v)
            return TwdIndex(
                theta=h["theta"], eps=h["eps"], t_min=h["t_min"], t_max=h["t_max"],
                endpoints=np.array(doc["endpoints"], dtype=float),
                buckets=buckets,
                region_times={r: np.array(ts, dtype=float) for r, ts in doc["points"].items()},
                time_offset=h["time_offset"], time_scale=h["time_scale"],
            )
        raise FormatError(f"unknown index kind {kind!r}")
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed index document: {exc}") from exc


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("index document must be a JSON object")
    return from_document(doc)


def save(index, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(index))
        fh.write("\n")


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
