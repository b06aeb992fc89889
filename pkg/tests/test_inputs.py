import json

import pytest

from lmatrix.errors import IndexOutOfRange, InputError, LengthMismatch, NotSymmetrizable
from lmatrix.gim import Ordering
from lmatrix.inputs import dump_json, load_matrix, parse_ordering, parse_sequence, resolve_matrix, seed_to_json
from lmatrix.matrix_core import apply_sequence


def test_load_json_with_symmetrizer(tmp_path):
    p = tmp_path / "rank3.json"
    p.write_text(json.dumps({"n": 3, "B": [[0, 3, -3], [-2, 0, 2], [2, -2, 0]], "D": [3, 2, 2]}), encoding="utf-8")
    b = load_matrix(p)
    assert b.d == (3, 2, 2)
    assert b.name == "rank3"


def test_load_yaml_computes_symmetrizer(tmp_path):
    p = tmp_path / "m.yaml"
    p.write_text("name: running\nB: [[0, 1, -3], [-2, 0, -2], [3, 1, 0]]\n", encoding="utf-8")
    b = load_matrix(p)
    assert b.d == (1, 2, 1)
    assert b.name == "running"


def test_load_errors(tmp_path):
    with pytest.raises(InputError):
        load_matrix(tmp_path / "missing.json")
    p = tmp_path / "bad.yaml"
    p.write_text("[1, 2]\n", encoding="utf-8")
    with pytest.raises(InputError):
        load_matrix(p)
    p.write_text("B: [[0, x], [1, 0]]\n", encoding="utf-8")
    with pytest.raises(InputError):
        load_matrix(p)
    p.write_text("n: 3\nB: [[0, 1], [-1, 0]]\n", encoding="utf-8")
    with pytest.raises(InputError):
        load_matrix(p)
    p.write_text("B: [[0, 1], [1, 0]]\n", encoding="utf-8")
    with pytest.raises(NotSymmetrizable):
        load_matrix(p)
    p.write_text("B: [[0, 1], [-1, 0]]\nD: [2, 1]\n", encoding="utf-8")
    with pytest.raises(NotSymmetrizable):
        load_matrix(p)


def test_resolve_matrix_needs_exactly_one_source(tmp_path):
    assert resolve_matrix(None, "running").name == "running"
    with pytest.raises(InputError):
        resolve_matrix(None, "")
    with pytest.raises(InputError):
        resolve_matrix(tmp_path / "x.json", "running")


def test_parse_sequence():
    assert parse_sequence("", 3) == ()
    assert parse_sequence("[2, 3, 2]", 3) == (2, 3, 2)
    assert parse_sequence("1,1", 3) == (1, 1)
    with pytest.raises(IndexOutOfRange, match="index 4 out of range 1..3"):
        parse_sequence("1,4", 3)
    with pytest.raises(InputError, match="cannot parse sequence"):
        parse_sequence("1,a", 3)


def test_parse_ordering():
    assert parse_ordering("", 3) == Ordering.natural(3)
    assert parse_ordering("1>2>3", 3).chain == (3, 2, 1)
    with pytest.raises(LengthMismatch):
        parse_ordering("1<2", 3)


def test_dump_json_writes_file(tmp_path, running):
    out = tmp_path / "nested" / "seed.json"
    text = dump_json(seed_to_json(apply_sequence(running, (2,))), out)
    assert json.loads(out.read_text(encoding="utf-8")) == json.loads(text)
    assert json.loads(text)["Bw"][0] == [0, -1, -3]
