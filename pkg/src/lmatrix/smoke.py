from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

from .catalog import get_example
from .config import AppConfig
from .coxeter_words import word_to_string
from .errors import LMatrixError
from .gim import Ordering, find_admissible_ordering, gim_from_ordering, ordering_satisfies_parity
from .lambda_engine import check_C1, check_C2, run_sequence
from .matrix_core import apply_sequence
from .mutation_reflections import l_matrix, reflection_state


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _symmetrizer() -> CheckResult:
    d = get_example("rank3-exchange").matrix().d
    return CheckResult("symmetrizer", d == (3, 2, 2), f"d={list(d)}")


def _c_matrix() -> CheckResult:
    e = get_example("rank3-exchange")
    seed = apply_sequence(e.matrix(), e.seq)
    want = ((5, 18, 15), (-2, -7, -6), (0, -2, -1))
    return CheckResult("c-matrix", seed.cw == want, f"C={[list(r) for r in seed.cw]}")


def _reflections() -> CheckResult:
    e = get_example("rank3-exchange")
    st = reflection_state(e.matrix(), e.seq)
    got = [word_to_string(r, compact=True) for r in st.r]
    want = ["32123232123232123", "32123232123", "232"]
    return CheckResult("r-words", got == want, " ".join(got))


def _l_matrix() -> CheckResult:
    e = get_example("rank3-exchange")
    base = e.matrix()
    lm = l_matrix(reflection_state(base, e.seq), gim_from_ordering(base, Ordering.parse(e.ordering, base.n)))
    lm.check_form()
    return CheckResult("l-matrix", lm.rows == ((5, 18, 15), (2, 7, 6), (0, 2, 1)), f"L={[list(r) for r in lm.rows]}")


def _lambda() -> CheckResult:
    e = get_example("running")
    base = e.matrix()
    st = run_sequence(base, Ordering.parse(e.ordering, base.n), e.seq)
    ok = bool(check_C1(st)) and bool(check_C2(st))
    return CheckResult("lambda", ok, f"lambda={[list(v) for v in st.lam]}")


def _ordering_search() -> CheckResult:
    base = get_example("spanning-tree").matrix()
    o = find_admissible_ordering(base)
    ok = o is not None and ordering_satisfies_parity(base, o)
    return CheckResult("ordering-search", ok, str(o) if o is not None else "none found")


def _run_log(cfg: AppConfig) -> CheckResult:
    p = cfg.run_log_path
    parent = p.parent
    while not parent.exists() and parent != parent.parent:
        parent = parent.parent
    ok = os.access(parent, os.W_OK)
    return CheckResult("run-log", ok, str(p))


def smoke_checks(cfg: AppConfig) -> list[CheckResult]:
    checks: list[Callable[[], CheckResult]] = [
        _symmetrizer,
        _c_matrix,
        _reflections,
        _l_matrix,
        _lambda,
        _ordering_search,
    ]
    results: list[CheckResult] = []
    for fn in checks:
        name = fn.__name__.lstrip("_").replace("_", "-")
        try:
            results.append(fn())
        except LMatrixError as e:
            results.append(CheckResult(name, False, f"error: {e}"))
    results.append(_run_log(cfg))
    return results
