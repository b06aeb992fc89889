from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import IndexOutOfRange, InputError, SearchBudgetExceeded
from .matrix_core import Matrix, Vector, identity

DEFAULT_NODE_CAP = 1_000_000


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    # Free reduction: a stack gives the unique normal form in one pass.
    out: list[int] = []
    for x in letters:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True, order=True)
class Word:
    """Element of the universal Coxeter group, stored as its reduced word."""

    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", free_reduce(int(x) for x in self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __str__(self) -> str:
        return word_to_string(self)

    def inverse(self) -> "Word":
        return Word(tuple(reversed(self.letters)))

    def last(self) -> Optional[int]:
        return self.letters[-1] if self.letters else None

    @property
    def is_reflection(self) -> bool:
        return is_reflection(self)


def reduce(letters: Iterable[int], n: Optional[int] = None) -> Word:
    seq = tuple(int(x) for x in letters)
    if n is not None:
        bad = [x for x in seq if not 1 <= x <= n]
        if bad:
            raise IndexOutOfRange(f"letters {bad} out of range 1..{n}")
    elif any(x < 1 for x in seq):
        raise IndexOutOfRange(f"letters must be positive, got {list(seq)}")
    return Word(seq)


def is_reduced(letters: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(letters, letters[1:]))


def is_reflection(w: Word) -> bool:
    x = w.letters
    return len(x) % 2 == 1 and x == x[::-1]


def conjugate(g: Word, i: int) -> Word:
    """g s_i g^-1."""
    return Word(g.letters + (int(i),) + tuple(reversed(g.letters)))


def concatenate(a: Word, b: Word) -> Word:
    """Freely reduced product ab."""
    return a * b


def word_to_string(w: Word, compact: bool = False) -> str:
    if compact and all(x < 10 for x in w.letters):
        return "".join(str(x) for x in w.letters)
    return ",".join(str(x) for x in w.letters)


def parse_word(text: str, n: Optional[int] = None) -> Word:
    """Parse "3,4,1,3" or the digit form "3413"; whitespace is ignored."""
    raw = "".join((text or "").split())
    if raw in {"", "[]", "e"}:
        return reduce((), n)
    try:
        if "," in raw:
            letters = [int(x) for x in raw.strip("[]").split(",") if x]
        else:
            letters = [int(ch) for ch in raw]
    except ValueError:
        raise InputError(f"cannot parse word {text!r}") from None
    return reduce(letters, n)


# ---------------------------------------------------------------------------
# Word-level representation pi. Rows are vectors; the j-th row of pi(s_i) is
# lambda_j - a_ji lambda_i, and pi(u_1...u_m) = pi(s_um) ... pi(s_u1).
# ---------------------------------------------------------------------------


def reflection_matrix(a: Sequence[Sequence[int]], i: int) -> Matrix:
    n = len(a)
    ii = i - 1
    return tuple(
        tuple(int(j == m) - (a[j][ii] if m == ii else 0) for m in range(n)) for j in range(n)
    )


def extend_right(mat: Matrix, a: Sequence[Sequence[int]], j: int) -> Matrix:
    """pi(u s_j) from pi(u): row m becomes R_m - a_mj R_j, row j becomes -R_j."""
    jj = j - 1
    rj = mat[jj]
    out = []
    for m, row in enumerate(mat):
        if m == jj:
            out.append(tuple(-x for x in rj))
            continue
        c = a[m][jj]
        out.append(tuple(x - c * y for x, y in zip(row, rj)) if c else row)
    return tuple(out)


def word_matrix(a: Sequence[Sequence[int]], w: Word | Sequence[int]) -> Matrix:
    mat = identity(len(a))
    for j in w:
        mat = extend_right(mat, a, j)
    return mat


def act_word(a: Sequence[Sequence[int]], w: Word | Sequence[int], v: Sequence[int]) -> Vector:
    """u(v) for a word u; s_i changes only coordinate i: v_i -> v_i - sum_j v_j a_ji."""
    out = [int(x) for x in v]
    n = len(a)
    for i in reversed(tuple(w)):
        ii = i - 1
        out[ii] = out[ii] - sum(out[j] * a[j][ii] for j in range(n))
    return tuple(out)


def iter_reduced_words(n: int, max_len: int) -> Iterator[Word]:
    """All reduced words of length <= max_len, shortest first, then lexicographic."""
    level: list[tuple[int, ...]] = [()]
    yield Word(())
    for _ in range(max_len):
        nxt = [w + (x,) for w in level for x in range(1, n + 1) if not w or w[-1] != x]
        for w in nxt:
            yield Word(w)
        level = nxt


def search_pi_equivalent(
    target: Word,
    a: Sequence[Sequence[int]],
    max_len: int,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[Word]:
    """Reduced words u with len(u) <= max_len and pi(u) = pi(target).

    Depth-first over the reduced-word tree with incremental matrix updates;
    results sorted by (length, letters).
    """
    n = len(a)
    goal = word_matrix(a, target)
    found: list[Word] = []
    visited = 0

    stack: list[tuple[tuple[int, ...], Matrix]] = [((), identity(n))]
    while stack:
        letters, mat = stack.pop()
        visited += 1
        if visited > node_cap:
            raise SearchBudgetExceeded(
                f"pi-search visited more than {node_cap} words (max_len={max_len}); lower max_len or raise the cap"
            )
        if mat == goal:
            found.append(Word(letters))
        if len(letters) == max_len:
            continue
        last = letters[-1] if letters else None
        for j in range(n, 0, -1):
            if j != last:
                stack.append((letters + (j,), extend_right(mat, a, j)))

    found.sort(key=lambda w: (len(w), w.letters))
    return found


__all__ = [
    "Word",
    "act_word",
    "free_reduce",
    "concatenate",
    "conjugate",
    "extend_right",
    "is_reduced",
    "is_reflection",
    "iter_reduced_words",
    "parse_word",
    "reduce",
    "reflection_matrix",
    "search_pi_equivalent",
    "word_matrix",
    "word_to_string",
]
