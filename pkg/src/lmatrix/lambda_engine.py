"""The lambda-recursion: vectors lambda_i^w together with elements s_i^w, e_i^w and
tau_i^w of the algebra, advanced one mutation at a time.

At a boundary state v and next index k the step is:

1. pair sets P_s(v, v[k]) and P_tau(v, v[k]) from (lambda^v, s_k^v);
2. tau_i^v = s_i^v + 2 (1 - s_i^v) e_tau,i, summing e_j^v over P_tau partners;
3. lambda_i is replaced by tau_k^v(lambda_i) when i = k or the branch condition
   holds: lambda_i < s_k(lambda_i) with k before i, or lambda_i > s_k(lambda_i)
   with k after i;
4. e_i -> tau_k e_i tau_k under the same condition, then e_k -> e_k - e_k e_+;
5. s_i -> t + 2 (1 - t) e_s,i with t = tau_k tau_i tau_k under the condition
   and t = tau_i otherwise, summing the new e_j over P_s partners.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .algebra_a import Algebra, AlgebraElement, DEFAULT_TERM_CAP, Representation, from_word, mod2_equal, render_applied
from .errors import InputError, InvariantViolation
from .gim import Gim, Ordering, gim_from_ordering
from .matrix_core import Seed, SkewMatrix, VecOrder, Vector, check_index, check_sequence, row_sign, unit_vector, vec_cmp
from .mutation_reflections import ReflectionState


@dataclass(frozen=True)
class PairSet:
    kind: str
    pairs: frozenset[tuple[int, int]] = frozenset()

    def partners(self, i: int) -> list[int]:
        out = {b for a, b in self.pairs if a == i} | {a for a, b in self.pairs if b == i}
        return sorted(out)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class LambdaState:
    base: SkewMatrix
    gim: Gim
    w: tuple[int, ...]
    lam: tuple[Vector, ...]
    s: tuple[AlgebraElement, ...]
    e: tuple[AlgebraElement, ...]
    expr: tuple[AlgebraElement, ...]
    seed: Seed
    # tau used by the step that produced this state; empty for the initial state
    tau: tuple[AlgebraElement, ...] = ()
    algebra: Algebra = field(default=None, compare=False, repr=False)  # type: ignore[assignment]
    rep: Representation = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def ordering(self) -> Ordering:
        return self.gim.ordering


def init_state(base: SkewMatrix, ordering: Ordering, term_cap: int = DEFAULT_TERM_CAP) -> LambdaState:
    gim = gim_from_ordering(base, ordering)
    alg = Algebra(base.n, term_cap)
    n = base.n
    e = tuple(alg.e(i) for i in range(1, n + 1))
    return LambdaState(
        base=base,
        gim=gim,
        w=(),
        lam=tuple(unit_vector(n, i) for i in range(1, n + 1)),
        s=tuple(alg.s(i) for i in range(1, n + 1)),
        e=e,
        expr=e,
        seed=Seed.initial(base),
        algebra=alg,
        rep=Representation(gim.a),
    )


def _comparisons(state: LambdaState, k: int) -> list[VecOrder]:
    sk = state.s[k - 1]
    return [vec_cmp(lam, state.rep.act(sk, lam)) for lam in state.lam]


def first_step_pairs(state: LambdaState, k: int) -> tuple[PairSet, PairSet]:
    """Pair sets for the first mutation, read directly off the initial state."""
    if state.w:
        raise InputError("first_step_pairs applies to the initial state only")
    check_index(k, state.n)
    o = state.ordering
    cmp = _comparisons(state, k)
    gt = [c is VecOrder.GREATER for c in cmp]
    lt = [c is VecOrder.LESS for c in cmp]
    ps: set[tuple[int, int]] = set()
    pt: set[tuple[int, int]] = set()
    idx = range(1, state.n + 1)
    for i in idx:
        for j in idx:
            if i == j:
                continue
            between = (o.precedes(k, i) and o.precedes(i, j)) or (o.precedes(i, j) and o.precedes(j, k))
            shared = gt[i - 1] and lt[j - 1] and between
            if shared or (lt[j - 1] and i == k and o.precedes(k, j)):
                ps.add((i, j))
            if shared or (gt[j - 1] and i == k and o.precedes(j, k)):
                pt.add((i, j))
    return PairSet("s", frozenset(ps)), PairSet("tau", frozenset(pt))


def step_pairs(state: LambdaState, k: int) -> tuple[PairSet, PairSet]:
    """P_s and P_tau for mutating the state at k; reduces to first_step_pairs initially."""
    check_index(k, state.n)
    o = state.ordering
    cmp = _comparisons(state, k)
    gt = [c is VecOrder.GREATER for c in cmp]
    lt = [c is VecOrder.LESS for c in cmp]
    positive = row_sign(state.lam[k - 1]) == 1
    ps: set[tuple[int, int]] = set()
    pt: set[tuple[int, int]] = set()
    idx = range(1, state.n + 1)
    for i in idx:
        for j in idx:
            if i == j:
                continue
            between = (o.precedes(k, i) and o.precedes(i, j)) or (o.precedes(i, j) and o.precedes(j, k))
            shared = between and gt[i - 1] and lt[j - 1]
            above = i == k and o.precedes(j, k) and gt[j - 1]
            below = i == k and o.precedes(k, j) and lt[j - 1]
            if shared or (above and not positive) or (below and positive):
                ps.add((i, j))
            if shared or (above and positive) or (below and not positive):
                pt.add((i, j))
    return PairSet("s", frozenset(ps)), PairSet("tau", frozenset(pt))


def _partner_sum(state: LambdaState, e: tuple[AlgebraElement, ...], pairs: PairSet, i: int) -> AlgebraElement:
    return state.algebra.sum(e[j - 1] for j in pairs.partners(i))


def _with_correction(alg: Algebra, t: AlgebraElement, corr: AlgebraElement) -> AlgebraElement:
    """t + 2 (1 - t) corr."""
    if corr.is_zero():
        return t
    return t + 2 * (corr - alg.mul(t, corr))


def make_tau(state: LambdaState, pairs: PairSet) -> tuple[AlgebraElement, ...]:
    alg = state.algebra
    return tuple(
        _with_correction(alg, state.s[i - 1], _partner_sum(state, state.e, pairs, i))
        for i in range(1, state.n + 1)
    )


def _updates(o: Ordering, k: int, i: int, cmp: VecOrder) -> bool:
    if i == k:
        return False
    return (cmp is VecOrder.LESS and o.precedes(k, i)) or (cmp is VecOrder.GREATER and o.precedes(i, k))


def advance(state: LambdaState, k: int, check: bool = True) -> LambdaState:
    check_index(k, state.n)
    alg, rep, o, n = state.algebra, state.rep, state.ordering, state.n
    p_s, p_tau = step_pairs(state, k)
    tau = make_tau(state, p_tau)
    if check:
        _raise_on(check_tau_relations(state, tau), state, k)

    tk = tau[k - 1]
    cond = [_updates(o, k, i, c) for i, c in enumerate(_comparisons(state, k), start=1)]

    lam = list(state.lam)
    expr = list(state.expr)
    e = list(state.e)
    for i in range(1, n + 1):
        if cond[i - 1] or i == k:
            lam[i - 1] = rep.act(tk, state.lam[i - 1])
            expr[i - 1] = alg.mul(tk, state.expr[i - 1])
        if cond[i - 1]:
            e[i - 1] = alg.mul(tk, state.e[i - 1], tk)

    e_plus = alg.sum(e[j - 1] for j in range(1, n + 1) if j != k and lam[j - 1] != state.lam[j - 1])
    ek = state.e[k - 1]
    e[k - 1] = ek - alg.mul(ek, e_plus)
    e_t = tuple(e)

    s = []
    for i in range(1, n + 1):
        t = alg.mul(tk, tau[i - 1], tk) if cond[i - 1] else tau[i - 1]
        s.append(_with_correction(alg, t, _partner_sum(state, e_t, p_s, i)))

    new = LambdaState(
        base=state.base,
        gim=state.gim,
        w=state.w + (k,),
        lam=tuple(lam),
        s=tuple(s),
        e=e_t,
        expr=tuple(expr),
        seed=state.seed.mutate(k),
        tau=tau,
        algebra=alg,
        rep=rep,
    )
    if check:
        problems = check_relations(new)
        if lam[k - 1] != tuple(-x for x in state.lam[k - 1]):
            problems.append(f"lambda_{k} was not negated by the mutation at {k}")
        for i in range(1, n + 1):
            if rep.act(expr[i - 1], unit_vector(n, i)) != lam[i - 1]:
                problems.append(f"symbolic lambda_{i} does not evaluate to {lam[i - 1]}")
        c1 = check_C1(new)
        if not c1:
            problems.extend(c1.detail)
        _raise_on(problems, new, None)
    return new


def _raise_on(problems: list[str], state: LambdaState, k: Optional[int]) -> None:
    if problems:
        where = f"w={list(state.w)}" + (f" before mutating at {k}" if k is not None else "")
        raise InvariantViolation(f"{where}: " + "; ".join(problems[:5]))


def check_relations(state: LambdaState) -> list[str]:
    """Relations among s^w and e^w that every state satisfies."""
    alg, n = state.algebra, state.n
    one = alg.one()
    bad: list[str] = []
    if alg.sum(state.e) != one:
        bad.append("sum e_i != 1")
    for i in range(1, n + 1):
        ei, si = state.e[i - 1], state.s[i - 1]
        if alg.mul(si, si) != one:
            bad.append(f"s_{i}^2 != 1")
        if alg.mul(si, ei) != -ei:
            bad.append(f"s_{i} e_{i} != -e_{i}")
        for j in range(1, n + 1):
            if alg.mul(ei, state.e[j - 1]) != (ei if i == j else alg.zero()):
                bad.append(f"e_{i} e_{j} != delta e_{i}")
            want = si + ei - one if i == j else ei
            if alg.mul(ei, state.s[j - 1]) != want:
                bad.append(f"e_{i} s_{j} relation fails")
    return bad


def check_tau_relations(state: LambdaState, tau: tuple[AlgebraElement, ...]) -> list[str]:
    """Relations between the pending tau^v and e^v."""
    alg, n = state.algebra, state.n
    one = alg.one()
    bad: list[str] = []
    for i in range(1, n + 1):
        ei, ti = state.e[i - 1], tau[i - 1]
        if alg.mul(ti, ti) != one:
            bad.append(f"tau_{i}^2 != 1")
        if alg.mul(ti, ei) != -ei:
            bad.append(f"tau_{i} e_{i} != -e_{i}")
        for j in range(1, n + 1):
            want = ti + ei - one if i == j else ei
            if alg.mul(ei, tau[j - 1]) != want:
                bad.append(f"e_{i} tau_{j} relation fails")
    return bad


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    ok: bool
    detail: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def check_C1(state: LambdaState) -> CheckOutcome:
    """Lambda^w = C^w."""
    detail = tuple(
        f"lambda_{i}={lam} but c_{i}={c}"
        for i, (lam, c) in enumerate(zip(state.lam, state.seed.cw), start=1)
        if tuple(lam) != tuple(c)
    )
    return CheckOutcome("C1", not detail, detail)


def check_C2(state: LambdaState) -> CheckOutcome:
    """s_i^w and e_i^w act on the lambda_j^w through the mutated matrix B^w."""
    rep, o, bw, n = state.rep, state.ordering, state.seed.bw, state.n
    detail: list[str] = []
    for i in range(1, n + 1):
        li = state.lam[i - 1]
        for j in range(1, n + 1):
            lj = state.lam[j - 1]
            bji = bw[j - 1][i - 1]
            if i == j:
                want = tuple(-x for x in lj)
            elif o.precedes(i, j):
                want = tuple(a + bji * b for a, b in zip(lj, li))
            else:
                want = tuple(a - bji * b for a, b in zip(lj, li))
            got = rep.act(state.s[i - 1], lj)
            if got != want:
                detail.append(f"s_{i}(lambda_{j})={got}, expected {want}")
            got_e = rep.act(state.e[i - 1], lj)
            want_e = lj if i == j else tuple(0 for _ in lj)
            if got_e != tuple(want_e):
                detail.append(f"e_{i}(lambda_{j})={got_e}, expected {tuple(want_e)}")
    return CheckOutcome("C2", not detail, tuple(detail))


def check_C3(state: LambdaState, refl: ReflectionState) -> CheckOutcome:
    """s_i^w = r_i^w modulo 2."""
    if tuple(refl.w) != tuple(state.w):
        raise InputError(f"reflection state w={list(refl.w)} does not match lambda state w={list(state.w)}")
    n = state.n
    detail = tuple(
        f"s_{i} and r_{i}={refl.r[i - 1]} differ modulo 2"
        for i in range(1, n + 1)
        if not mod2_equal(state.s[i - 1], from_word(n, refl.r[i - 1]))
    )
    return CheckOutcome("C3", not detail, detail)


def iter_states(
    base: SkewMatrix,
    ordering: Ordering,
    w: Iterable[int],
    check: bool = True,
    term_cap: int = DEFAULT_TERM_CAP,
) -> Iterator[LambdaState]:
    """Initial state followed by the state after each mutation of w."""
    seq = check_sequence(w, base.n)
    state = init_state(base, ordering, term_cap)
    yield state
    for k in seq:
        state = advance(state, k, check)
        yield state


def run_sequence(
    base: SkewMatrix,
    ordering: Ordering,
    w: Iterable[int],
    check: bool = True,
    term_cap: int = DEFAULT_TERM_CAP,
) -> LambdaState:
    state = None
    for state in iter_states(base, ordering, w, check, term_cap):
        pass
    assert state is not None
    return state


def lambda_expression(state: LambdaState, i: int) -> str:
    return render_applied(state.expr[i - 1], i)


__all__ = [
    "CheckOutcome",
    "LambdaState",
    "PairSet",
    "advance",
    "check_C1",
    "check_C2",
    "check_C3",
    "check_relations",
    "check_tau_relations",
    "first_step_pairs",
    "init_state",
    "iter_states",
    "lambda_expression",
    "make_tau",
    "run_sequence",
    "step_pairs",
]
