from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional, Sequence, TypeVar

from .algebra_a import DEFAULT_TERM_CAP, Representation
from .coxeter_words import Word, iter_reduced_words
from .errors import InvariantViolation
from .gim import Gim, Ordering, all_orderings, find_real_loesung_witness, gim_from_ordering, is_loesung, ordering_satisfies_parity
from .lambda_engine import LambdaState, advance, check_C1, check_C2, check_C3, iter_states, run_sequence
from .matrix_core import (
    Matrix,
    MutationSeq,
    Seed,
    SkewMatrix,
    Vector,
    apply_sequence,
    c_vector_step,
    check_sequence,
    check_sign_coherent,
)
from .mutation_reflections import (
    DEFAULT_WORD_LENGTH_CAP,
    MISMATCH,
    LMatrix,
    ReflectionState,
    compare_L_up_to_row_sign,
    l_matrix,
    pi_reflections,
    reflection_state,
)

CONJECTURE = "conjecture"
THEOREM = "theorem"
SCAN = "scan"
CANDIDATE_NOTE = (
    "violations are counterexample candidates pending manual review; "
    "a defect in any layer would show up the same way"
)

Progress = Optional[Callable[[int], None]]
S = TypeVar("S", Seed, ReflectionState)


def enumerate_sequences(n: int, max_len: int) -> Iterator[MutationSeq]:
    """Sequences over 1..n without consecutive repeats, by length then lexicographically."""
    for w in iter_reduced_words(n, max_len):
        yield w.letters


def _walk(root: S, max_len: int, step: Callable[[S, int], S]) -> Iterator[S]:
    # Level by level so states come out in enumerate_sequences order.
    n = root.n
    level = [root]
    yield root
    for _ in range(max_len):
        nxt = [step(st, k) for st in level for k in range(1, n + 1) if not st.w or st.w[-1] != k]
        yield from nxt
        level = nxt


def iter_seeds(base: SkewMatrix, max_len: int) -> Iterator[Seed]:
    return _walk(Seed.initial(base), max_len, lambda st, k: st.mutate(k))


def iter_reflection_states(
    base: SkewMatrix,
    max_len: int,
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
) -> Iterator[ReflectionState]:
    return _walk(ReflectionState.initial(base), max_len, lambda st, k: st.mutate(k, word_length_cap))


@dataclass(frozen=True)
class Witness:
    r: tuple[Word, ...]
    pi: tuple[Matrix, ...]
    l: LMatrix


@dataclass
class SeedClass:
    key: Matrix
    members: list[MutationSeq] = field(default_factory=list)
    witnesses: dict[MutationSeq, Witness] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class Report:
    command: str
    label: str
    config: dict[str, Any]
    runs: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    errors: list[dict[str, Any]] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def exit_code(self) -> int:
        if self.errors:
            return 3
        if self.violations:
            return 2
        return 0

    def summary(self) -> str:
        return f"runs={self.runs} violations={len(self.violations)} errors={len(self.errors)} elapsed_s={self.elapsed_s:.2f}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "label": self.label,
            "config": self.config,
            "runs": self.runs,
            "violations": self.violations,
            "errors": self.errors,
            "stats": self.stats,
            "notes": self.notes,
            "elapsed_s": round(self.elapsed_s, 3),
        }


def _config(base: SkewMatrix, ordering: Optional[Ordering], max_len: Optional[int], **extra: Any) -> dict[str, Any]:
    out: dict[str, Any] = {"name": base.name, "B": [list(r) for r in base.b], "D": list(base.d)}
    if ordering is not None:
        out["ordering"] = str(ordering)
    if max_len is not None:
        out["max_len"] = max_len
    out.update(extra)
    return out


def _reproducer(base: SkewMatrix, ordering: Optional[Ordering], w: Sequence[int], message: str) -> dict[str, Any]:
    return {
        "B": [list(r) for r in base.b],
        "ordering": str(ordering) if ordering is not None else None,
        "sequence": list(w),
        "message": message,
    }


def group_seed_classes(
    base: SkewMatrix,
    max_len: int,
    gim: Optional[Gim] = None,
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
) -> list[SeedClass]:
    """Enumerated seeds grouped by C-matrix, in order of first appearance."""
    rep = Representation(gim.a) if gim is not None else None
    classes: dict[Matrix, SeedClass] = {}
    for st in iter_reflection_states(base, max_len, word_length_cap):
        key = st.seed.cw
        cls = classes.get(key)
        if cls is None:
            cls = classes[key] = SeedClass(key=key)
        cls.members.append(st.w)
        if gim is not None and rep is not None:
            cls.witnesses[st.w] = Witness(r=st.r, pi=pi_reflections(st, rep), l=l_matrix(st, gim))
    return list(classes.values())


def class_size_statistics(classes: Sequence[SeedClass]) -> dict[str, Any]:
    sizes = Counter(len(c) for c in classes)
    return {
        "classes": len(classes),
        "max_size": max(sizes) if sizes else 0,
        "histogram": {str(k): sizes[k] for k in sorted(sizes)},
    }


def _probe(
    command: str,
    statement: str,
    base: SkewMatrix,
    ordering: Ordering,
    max_len: int,
    word_length_cap: int,
    compare: Callable[[Witness, Witness], list[dict[str, Any]]],
) -> Report:
    t0 = time.perf_counter()
    gim = gim_from_ordering(base, ordering)
    hypothesis = ordering_satisfies_parity(base, ordering)
    classes = group_seed_classes(base, max_len, gim, word_length_cap)
    report = Report(
        command=command,
        label=CONJECTURE,
        config=_config(base, ordering, max_len, word_length_cap=word_length_cap),
        runs=sum(len(c) for c in classes),
    )
    pairs = 0
    outside = 0
    for cls in classes:
        ref = cls.members[0]
        for other in cls.members[1:]:
            pairs += 1
            diffs = compare(cls.witnesses[ref], cls.witnesses[other])
            if not diffs:
                continue
            if not hypothesis:
                outside += 1
                continue
            for d in diffs:
                report.violations.append(
                    {"label": CONJECTURE, "statement": statement, "C": [list(r) for r in cls.key], "w": list(ref), "v": list(other), **d}
                )
    report.stats = {
        **class_size_statistics(classes),
        "pairs_compared": pairs,
        "ordering_satisfies_parity": hypothesis,
        "mismatches_outside_hypothesis": outside,
    }
    report.notes.append(CANDIDATE_NOTE)
    if not hypothesis:
        report.notes.append(
            f"ordering {ordering} gives an even number of positive entries along some oriented chordless cycle; "
            "the conjecture makes no claim for it, so mismatches are only counted"
        )
    report.elapsed_s = time.perf_counter() - t0
    return report


def _compare_pi(x: Witness, y: Witness) -> list[dict[str, Any]]:
    return [
        {"i": i, "r_w": str(x.r[i - 1]), "r_v": str(y.r[i - 1]), "pi_w": x.pi[i - 1], "pi_v": y.pi[i - 1]}
        for i in range(1, len(x.pi) + 1)
        if x.pi[i - 1] != y.pi[i - 1]
    ]


def _compare_l(x: Witness, y: Witness) -> list[dict[str, Any]]:
    signs = compare_L_up_to_row_sign(x.l, y.l)
    return [
        {"i": i, "l_w": x.l.rows[i - 1], "l_v": y.l.rows[i - 1]}
        for i, s in enumerate(signs, start=1)
        if s == MISMATCH
    ]


def probe_conjecture_C_equal_implies_pi_equal(
    base: SkewMatrix,
    ordering: Ordering,
    max_len: int,
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
) -> Report:
    """Equal C-matrices should give equal pi(r_i) for an ordering with the parity property."""
    return _probe(
        "verify-conj/pi",
        "C^w = C^v implies pi(r_i^w) = pi(r_i^v)",
        base,
        ordering,
        max_len,
        word_length_cap,
        _compare_pi,
    )


def probe_l_matrices(
    base: SkewMatrix,
    ordering: Ordering,
    max_len: int,
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
) -> Report:
    """L^w should depend only on the seed, up to the signs of its rows."""
    return _probe(
        "verify-conj/l-matrix",
        "C^w = C^v implies L^w = L^v up to row signs",
        base,
        ordering,
        max_len,
        word_length_cap,
        _compare_l,
    )


def loesung_scan(
    base: SkewMatrix,
    max_len: int,
    ordering: Optional[Ordering] = None,
    witness_len: int = 0,
) -> Report:
    """is_loesung for every enumerated c-vector under every ordering GIM (or just one)."""
    t0 = time.perf_counter()
    orderings = [ordering] if ordering is not None else list(all_orderings(base.n))
    gims = [gim_from_ordering(base, o) for o in orderings]

    first_seen: dict[Vector, MutationSeq] = {}
    runs = 0
    for seed in iter_seeds(base, max_len):
        runs += 1
        for c in seed.cw:
            first_seen.setdefault(tuple(c), seed.w)

    fails_all: list[dict[str, Any]] = []
    passing = Counter()
    witnessed = 0
    for c, w in first_seen.items():
        ok = [g for g in gims if is_loesung(g, c)]
        passing[len(ok)] += 1
        if not ok:
            fails_all.append({"c": list(c), "w": list(w), "q": [is_loesung(g, c).value for g in gims]})
        elif witness_len and ordering is not None and find_real_loesung_witness(gims[0], c, witness_len):
            witnessed += 1

    report = Report(
        command="loesung",
        label=SCAN,
        config=_config(base, ordering, max_len, orderings=len(orderings), witness_len=witness_len),
        runs=runs,
    )
    report.stats = {
        "c_vectors": len(first_seen),
        "fails_all": fails_all,
        "passing_gims_histogram": {str(k): passing[k] for k in sorted(passing)},
    }
    if witness_len and ordering is not None:
        report.stats["real_witnesses"] = witnessed
    report.elapsed_s = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# Full verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceResult:
    w: MutationSeq
    failed: tuple[str, ...] = ()
    message: str = ""

    @property
    def ok(self) -> bool:
        return not self.failed


def _verify_state(lam: LambdaState, refl: ReflectionState, gim: Gim, parent: Optional[Seed]) -> SequenceResult:
    failed: list[str] = []
    detail: list[str] = []
    for outcome in (check_C1(lam), check_C2(lam), check_C3(lam, refl)):
        if not outcome:
            failed.append(outcome.name)
            detail.extend(outcome.detail[:2])
    checks: list[tuple[str, Callable[[], None]]] = [
        ("sign_coherence", lambda: check_sign_coherent(lam.seed)),
        ("reflections", refl.check),
        ("q_form", l_matrix(refl, gim).check_form),
    ]
    for name, fn in checks:
        try:
            fn()
        except InvariantViolation as e:
            failed.append(name)
            detail.append(str(e))
    if parent is not None and c_vector_step(parent.bw, parent.cw, lam.w[-1]) != lam.seed.cw:
        failed.append("c_vector_step")
        detail.append("c-vector recursion disagrees with extended-matrix mutation")
    return SequenceResult(w=lam.w, failed=tuple(failed), message="; ".join(detail))


def _verify_subtree(
    base: SkewMatrix,
    ordering: Ordering,
    prefix: MutationSeq,
    max_len: int,
    check: bool,
    term_cap: int,
    word_length_cap: int,
) -> list[SequenceResult]:
    """Depth-first over all sequences extending prefix up to max_len."""
    n = base.n
    gim = gim_from_ordering(base, ordering)
    try:
        lam = run_sequence(base, ordering, prefix, check, term_cap)
    except InvariantViolation as e:
        return [SequenceResult(w=tuple(prefix), failed=("step",), message=str(e))]
    refl = reflection_state(base, prefix, word_length_cap)
    parent = apply_sequence(base, prefix[:-1]) if prefix else None

    out: list[SequenceResult] = []
    stack: list[tuple[LambdaState, ReflectionState, Optional[Seed]]] = [(lam, refl, parent)]
    while stack:
        lam, refl, parent = stack.pop()
        out.append(_verify_state(lam, refl, gim, parent))
        if len(lam.w) >= max_len:
            continue
        for k in range(n, 0, -1):
            if lam.w and lam.w[-1] == k:
                continue
            try:
                child = advance(lam, k, check)
            except InvariantViolation as e:
                out.append(SequenceResult(w=lam.w + (k,), failed=("step",), message=str(e)))
                continue
            stack.append((child, refl.mutate(k, word_length_cap), lam.seed))
    out.sort(key=lambda r: (len(r.w), r.w))
    return out


def run_full_verification(
    base: SkewMatrix,
    ordering: Ordering,
    max_len: int,
    check: bool = True,
    jobs: int = 1,
    term_cap: int = DEFAULT_TERM_CAP,
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
    progress: Progress = None,
) -> Report:
    """Every enumerated sequence: lambda run, C1/C2/C3, L-matrix forms, sign coherence."""
    t0 = time.perf_counter()
    args = (check, term_cap, word_length_cap)
    tasks: list[tuple[MutationSeq, int]] = [((), 0)]
    if max_len > 0:
        tasks += [((k,), max_len) for k in range(1, base.n + 1)]

    results: list[SequenceResult] = []
    if jobs <= 1:
        for prefix, depth in tasks:
            part = _verify_subtree(base, ordering, prefix, depth, *args)
            results.extend(part)
            if progress:
                progress(len(part))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {pool.submit(_verify_subtree, base, ordering, prefix, depth, *args): prefix for prefix, depth in tasks}
            for fut in as_completed(futs):
                part = fut.result()
                results.extend(part)
                if progress:
                    progress(len(part))
    results.sort(key=lambda r: (len(r.w), r.w))

    report = Report(
        command="verify-theorem",
        label=THEOREM,
        config=_config(base, ordering, max_len, relation_checks=check, term_cap=term_cap, word_length_cap=word_length_cap),
        runs=len(results),
    )
    failures = Counter(name for r in results for name in r.failed)
    report.errors = [_reproducer(base, ordering, r.w, f"{','.join(r.failed)}: {r.message}") for r in results if not r.ok]
    report.stats = {"failures": {k: failures[k] for k in sorted(failures)}, "ordering_satisfies_parity": ordering_satisfies_parity(base, ordering)}
    report.elapsed_s = time.perf_counter() - t0
    return report


def verify_sequence(
    base: SkewMatrix,
    ordering: Ordering,
    w: Sequence[int],
    check: bool = True,
    term_cap: int = DEFAULT_TERM_CAP,
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
) -> Report:
    """Per-prefix C1/C2/C3 verdicts along a single sequence."""
    t0 = time.perf_counter()
    seq = check_sequence(w, base.n)
    gim = gim_from_ordering(base, ordering)
    report = Report(command="verify-theorem", label=THEOREM, config=_config(base, ordering, None, sequence=list(seq)))
    steps: list[dict[str, Any]] = []
    refl = ReflectionState.initial(base)
    parent: Optional[Seed] = None
    try:
        for lam in iter_states(base, ordering, seq, check, term_cap):
            if len(lam.w) > len(refl.w):
                parent = refl.seed
                refl = refl.mutate(lam.w[-1], word_length_cap)
            res = _verify_state(lam, refl, gim, parent)
            steps.append({"w": list(lam.w), "ok": res.ok, "failed": list(res.failed), "lambda": [list(v) for v in lam.lam]})
            if not res.ok:
                report.errors.append(_reproducer(base, ordering, lam.w, f"{','.join(res.failed)}: {res.message}"))
    except InvariantViolation as e:
        report.errors.append(_reproducer(base, ordering, seq[: len(steps)], str(e)))
    report.runs = len(steps)
    report.stats = {"steps": steps}
    report.elapsed_s = time.perf_counter() - t0
    return report


__all__ = [
    "CANDIDATE_NOTE",
    "CONJECTURE",
    "Report",
    "SCAN",
    "SeedClass",
    "SequenceResult",
    "THEOREM",
    "Witness",
    "class_size_statistics",
    "enumerate_sequences",
    "group_seed_classes",
    "iter_reflection_states",
    "iter_seeds",
    "loesung_scan",
    "probe_conjecture_C_equal_implies_pi_equal",
    "probe_l_matrices",
    "run_full_verification",
    "verify_sequence",
]
