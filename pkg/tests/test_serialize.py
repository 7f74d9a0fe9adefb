import json

import numpy as np
import pytest

from frechetgrid import serialize
from frechetgrid.anns_asym import build_asym_index, query_asym
from frechetgrid.anns_sym import build_sym_index, query_sym
from frechetgrid.asrs import build_asrs_index, query_asrs
from frechetgrid.errors import FormatError
from frechetgrid.geometry import Curve
from frechetgrid.twd import build_twd, query_twd


def _indexes():
    rng = np.random.default_rng(3)
    curves = [Curve(f"c{i}", rng.uniform(0, 0.5, (int(rng.integers(1, 4)), 2))) for i in range(4)]
    pts = [(f"r{int(rng.integers(3))}", float(rng.uniform(0, 0.9))) for _ in range(20)]
    return {
        "asym": build_asym_index(curves, 2, 2.5, 2.0),
        "asym_discrete": build_asym_index(curves, 1, 1.0, 0.7, metric="discrete"),
        "sym": build_sym_index([Curve("s", [[0.1, 0.2], [30.0, 1.0 / 3.0]])], 1.0, 12.0),
        "asrs": build_asrs_index(curves[0], 2, 2.5, 2.5),
        "twd": build_twd(pts, 2, 0.05),
    }


INDEXES = _indexes()


@pytest.mark.parametrize("name", sorted(INDEXES))
def test_round_trip_byte_identical(name, tmp_path):
    idx = INDEXES[name]
    text = serialize.dumps(idx)
    again = serialize.loads(text)
    assert serialize.dumps(again) == text
    path = tmp_path / "index.json"
    serialize.save(idx, path)
    assert serialize.dumps(serialize.load(path)) == text


@pytest.mark.parametrize("name", sorted(INDEXES))
def test_document_shape(name):
    doc = json.loads(serialize.dumps(INDEXES[name]))
    assert doc["format_version"] == serialize.FORMAT_VERSION
    assert doc["kind"] in serialize.KINDS
    assert "header" in doc and "buckets" in doc


def test_loaded_indexes_answer_alike(rng):
    a = INDEXES["asym"]
    a2 = serialize.loads(serialize.dumps(a))
    for _ in range(20):
        Q = rng.uniform(-0.5, 1.0, (2, 2))
        assert query_asym(a, Q) == query_asym(a2, Q)
    s = INDEXES["sym"]
    s2 = serialize.loads(serialize.dumps(s))
    assert query_sym(s, [[0.1, 0.2], [30.0, 0.3]]) == query_sym(s2, [[0.1, 0.2], [30.0, 0.3]])
    r = INDEXES["asrs"]
    r2 = serialize.loads(serialize.dumps(r))
    for _ in range(20):
        Q = rng.uniform(-0.5, 1.0, (2, 2))
        assert query_asrs(r, Q) == query_asrs(r2, Q)
    t = INDEXES["twd"]
    t2 = serialize.loads(serialize.dumps(t))
    for _ in range(20):
        q1, q2 = np.sort(rng.uniform(0, 1, 2))
        assert query_twd(t, q1, q2) == query_twd(t2, q1, q2)


def test_float_bits_preserved():
    s2 = serialize.loads(serialize.dumps(INDEXES["sym"]))
    assert s2.curves["s"][1, 1] == 1.0 / 3.0
    assert s2.cell == INDEXES["sym"].cell


def test_key_formats():
    doc = json.loads(serialize.dumps(INDEXES["twd"]))
    assert all(len(k.split("-")) == 2 for k in doc["buckets"])
    doc = json.loads(serialize.dumps(INDEXES["asrs"]))
    assert all("|" in k for k in doc["buckets"])
    assert all(":" in r for v in doc["buckets"].values() for r in v)


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"format_version": 99, "kind": "asym"}',
    '{"format_version": 1, "kind": "mystery", "header": {}}',
    '{"format_version": 1, "kind": "asym", "header": {}}',
])
def test_malformed(text):
    with pytest.raises(FormatError):
        serialize.loads(text)


def test_not_an_index():
    with pytest.raises(TypeError):
        serialize.kind_of(object())
