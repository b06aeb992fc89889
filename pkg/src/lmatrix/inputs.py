from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

import yaml

from .catalog import get_example
from .errors import InputError
from .gim import Ordering
from .matrix_core import MutationSeq, Seed, SkewMatrix, check_sequence


def load_matrix(path: Path) -> SkewMatrix:
    """Read {"n", "B", optional "D", optional "name"} from a JSON or YAML file."""
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except yaml.YAMLError as e:
        raise InputError(f"cannot parse {path}: {e}") from None
    if not isinstance(raw, dict) or "B" not in raw:
        raise InputError(f"{path}: expected a mapping with key 'B'")
    try:
        b = tuple(tuple(int(x) for x in row) for row in raw["B"])
        d = tuple(int(x) for x in raw.get("D") or ())
    except (TypeError, ValueError):
        raise InputError(f"{path}: B and D must contain integers") from None
    n = raw.get("n")
    if n is not None and int(n) != len(b):
        raise InputError(f"{path}: n={n} but B has {len(b)} rows")
    return SkewMatrix(b=b, d=d, name=str(raw.get("name") or Path(path).stem))


def resolve_matrix(input_path: Optional[Path], example: str) -> SkewMatrix:
    if input_path is not None and example:
        raise InputError("pass either --input or --example, not both")
    if input_path is not None:
        return load_matrix(input_path)
    if example:
        return get_example(example).matrix()
    raise InputError("one of --input or --example is required")


def parse_sequence(text: str, n: int) -> MutationSeq:
    raw = "".join((text or "").split()).strip("[]")
    if not raw:
        return ()
    try:
        letters = [int(x) for x in raw.split(",") if x]
    except ValueError:
        raise InputError(f"cannot parse sequence {text!r}") from None
    return check_sequence(letters, n)


def parse_ordering(text: str, n: int) -> Ordering:
    if not (text or "").strip():
        return Ordering.natural(n)
    return Ordering.parse(text, n)


def matrix_to_json(m) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]


def seed_to_json(seed: Seed) -> dict[str, Any]:
    return {"w": list(seed.w), "Bw": matrix_to_json(seed.bw), "Cw": matrix_to_json(seed.cw)}


def dump_json(obj: Any, path: Optional[Path] = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
