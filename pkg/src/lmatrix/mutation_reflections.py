from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .algebra_a import Representation
from .coxeter_words import Word, act_word, concatenate, conjugate, is_reflection
from .errors import InvariantViolation, LengthMismatch, RankTooLarge, WordLengthExceeded
from .gim import Gim, quadratic_form
from .matrix_core import Matrix, Seed, SkewMatrix, check_sequence, row_sign, sgn, unit_vector

DEFAULT_WORD_LENGTH_CAP = 10_000
FACTORIZATION_MAX_RANK = 6
MISMATCH = "mismatch"

RowSign = Union[int, str]


def coset_representative(g: Word, i: int) -> Word:
    """Shortest element of g<s_i>: g with a trailing s_i dropped. g s_i g^-1 is unchanged."""
    if g.last() == i:
        return Word(g.letters[:-1])
    return g


@dataclass(frozen=True)
class ReflectionState:
    seed: Seed
    r: tuple[Word, ...]
    g: tuple[Word, ...]

    @classmethod
    def initial(cls, base: SkewMatrix) -> "ReflectionState":
        n = base.n
        return cls(
            seed=Seed.initial(base),
            r=tuple(Word((i,)) for i in range(1, n + 1)),
            g=tuple(Word(()) for _ in range(n)),
        )

    @property
    def n(self) -> int:
        return self.seed.n

    @property
    def w(self) -> tuple[int, ...]:
        return self.seed.w

    def mutate(self, k: int, word_length_cap: int = DEFAULT_WORD_LENGTH_CAP) -> "ReflectionState":
        """r_i -> r_k r_i r_k when b_ik c_k > 0, read as b_ik != 0 and sgn(b_ik) row_sign(c_k) = +1."""
        seed = self.seed
        bw, ck = seed.bw, seed.c_vector(k)
        sk = row_sign(ck)
        rk = self.r[k - 1]
        g = list(self.g)
        r = list(self.r)
        for i in range(1, self.n + 1):
            bik = bw[i - 1][k - 1]
            if bik != 0 and sgn(bik) * sk == 1:
                g[i - 1] = coset_representative(concatenate(rk, self.g[i - 1]), i)
                r[i - 1] = conjugate(g[i - 1], i)
                if len(r[i - 1]) > word_length_cap:
                    raise WordLengthExceeded(
                        f"r_{i} reached length {len(r[i - 1])} after w={list(seed.w) + [k]} (cap {word_length_cap})"
                    )
        return ReflectionState(seed=seed.mutate(k), r=tuple(r), g=tuple(g))

    def check(self) -> None:
        for i, (ri, gi) in enumerate(zip(self.r, self.g), start=1):
            if not is_reflection(ri):
                raise InvariantViolation(f"r_{i}={ri} is not a reflection word (w={list(self.w)})")
            if conjugate(gi, i) != ri:
                raise InvariantViolation(f"r_{i} != g_{i} s_{i} g_{i}^-1 (w={list(self.w)})")
            if gi.last() == i:
                raise InvariantViolation(f"g_{i}={gi} ends in s_{i} (w={list(self.w)})")


def reflection_state(
    base: SkewMatrix,
    w: Iterable[int],
    word_length_cap: int = DEFAULT_WORD_LENGTH_CAP,
) -> ReflectionState:
    state = ReflectionState.initial(base)
    for k in check_sequence(w, base.n):
        state = state.mutate(k, word_length_cap)
    return state


@dataclass(frozen=True)
class LMatrix:
    rows: Matrix
    gim: Gim

    def check_form(self) -> None:
        d = self.gim.d
        for i, row in enumerate(self.rows, start=1):
            q = quadratic_form(self.gim, row)
            if q != 2 * d[i - 1]:
                raise InvariantViolation(f"q(l_{i})={q} but 2*d_{i}={2 * d[i - 1]} for l_{i}={row}")


def l_matrix(state: ReflectionState, gim: Gim) -> LMatrix:
    """l_i = g_i(alpha_i) under pi of the given GIM."""
    if gim.n != state.n:
        raise LengthMismatch(f"rank-{gim.n} GIM for a rank-{state.n} state")
    n = state.n
    rows = tuple(act_word(gim.a, state.g[i - 1], unit_vector(n, i)) for i in range(1, n + 1))
    return LMatrix(rows=rows, gim=gim)


def l_matrix_sign_coherent(lm: LMatrix) -> tuple[bool, ...]:
    return tuple(all(x >= 0 for x in row) or all(x <= 0 for x in row) for row in lm.rows)


def compare_L_up_to_row_sign(x: LMatrix, y: LMatrix) -> tuple[RowSign, ...]:
    if len(x.rows) != len(y.rows):
        raise LengthMismatch("L-matrices of different rank")
    out: list[RowSign] = []
    for a, b in zip(x.rows, y.rows):
        if a == b:
            out.append(1)
        elif tuple(-v for v in a) == tuple(b):
            out.append(-1)
        else:
            out.append(MISMATCH)
    return tuple(out)


def pi_reflections(state: ReflectionState, rep: Representation) -> tuple[Matrix, ...]:
    return tuple(rep.word_matrix(ri.letters) for ri in state.r)


def _product(words: Sequence[Word]) -> Word:
    out = Word(())
    for w in words:
        out = out * w
    return out


@dataclass(frozen=True)
class FactorizationReport:
    pairs_checked: int
    word_equal: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    pi_equal: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    ordering: Optional[str] = None

    @property
    def any_equal(self) -> bool:
        return bool(self.word_equal or self.pi_equal)


def product_factorization_scan(state: ReflectionState, gim: Optional[Gim] = None) -> FactorizationReport:
    """Compare prod_i r_sigma(i) with prod_i s_sigma~(i) over all permutation pairs."""
    n = state.n
    if n > FACTORIZATION_MAX_RANK:
        raise RankTooLarge(f"factorization scan is limited to n <= {FACTORIZATION_MAX_RANK}, got {n}")
    perms = list(itertools.permutations(range(1, n + 1)))
    r_prod = {p: _product([state.r[i - 1] for i in p]) for p in perms}
    s_prod = {p: Word(p) for p in perms}

    by_word: dict[Word, list[tuple[int, ...]]] = {}
    for p, w in s_prod.items():
        by_word.setdefault(w, []).append(p)
    word_equal = [(p, q) for p, w in r_prod.items() for q in by_word.get(w, [])]

    pi_equal: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    if gim is not None:
        rep = Representation(gim.a)
        by_mat: dict[Matrix, list[tuple[int, ...]]] = {}
        for p, w in s_prod.items():
            by_mat.setdefault(rep.word_matrix(w.letters), []).append(p)
        for p, w in r_prod.items():
            pi_equal.extend((p, q) for q in by_mat.get(rep.word_matrix(w.letters), []))

    return FactorizationReport(
        pairs_checked=len(perms) ** 2,
        word_equal=tuple(word_equal),
        pi_equal=tuple(pi_equal),
        ordering=str(gim.ordering) if gim is not None else None,
    )


__all__ = [
    "FactorizationReport",
    "LMatrix",
    "MISMATCH",
    "ReflectionState",
    "compare_L_up_to_row_sign",
    "coset_representative",
    "l_matrix",
    "l_matrix_sign_coherent",
    "pi_reflections",
    "product_factorization_scan",
    "reflection_state",
]
