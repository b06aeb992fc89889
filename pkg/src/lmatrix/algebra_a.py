"""Exact arithmetic in the algebra generated by s_i, e_i (1 <= i <= n) with

    s_i^2 = 1,  sum_i e_i = 1,  e_i e_j = delta_ij e_i,  s_i e_i = -e_i,
    e_i s_j = e_i (i != j),  e_i s_i = s_i + e_i - 1.

Normal form: every element is an integer combination of monomials u*e_i where u
is a reduced word not ending in i. Since sum_i e_i = 1, x = sum_i x*e_i, and the
e_i s_i rule moves each idempotent to the far right of a product.

Rendering uses the equivalent display basis {u : u not ending in n} together
with {u*e_i : i < n}, obtained by eliminating e_n = 1 - sum_{i<n} e_i.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .coxeter_words import Word, extend_right, free_reduce
from .errors import IndexOutOfRange, LengthMismatch, TermBudgetExceeded
from .matrix_core import Matrix, Vector, identity

DEFAULT_TERM_CAP = 100_000


class Monomial(NamedTuple):
    word: tuple[int, ...]
    cap: int

    @property
    def sort_key(self) -> tuple:
        return (len(self.word), self.word, self.cap)


def _normal(letters: tuple[int, ...], cap: int) -> tuple[int, Monomial]:
    w = free_reduce(letters)
    if w and w[-1] == cap:
        # u' s_j e_j = -u' e_j
        return -1, Monomial(w[:-1], cap)
    return 1, Monomial(w, cap)


def _word_str(word: Sequence[int]) -> str:
    return "*".join(f"s{x}" for x in word)


def _format(terms: Iterable[tuple[str, int]]) -> str:
    out: list[str] = []
    for body, c in terms:
        mag = abs(c)
        if body == "1":
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        if not out:
            out.append(piece if c > 0 else f"-{piece}")
        else:
            out.append(f"+ {piece}" if c > 0 else f"- {piece}")
    return " ".join(out) if out else "0"


@dataclass(frozen=True)
class AlgebraElement:
    n: int
    terms: tuple[tuple[Monomial, int], ...] = ()

    @classmethod
    def from_mapping(cls, n: int, coeffs: Mapping[Monomial, int]) -> "AlgebraElement":
        items = [(m, c) for m, c in coeffs.items() if c]
        items.sort(key=lambda t: t[0].sort_key)
        return cls(n=n, terms=tuple(items))

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "AlgebraElement") -> None:
        if other.n != self.n:
            raise LengthMismatch(f"cannot combine elements of rank {self.n} and {other.n}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        acc: dict[Monomial, int] = defaultdict(int, self.terms)
        for m, c in other.terms:
            acc[m] += c
        return AlgebraElement.from_mapping(self.n, acc)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.n, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, k: int) -> "AlgebraElement":
        if k == 0:
            return AlgebraElement(self.n)
        return AlgebraElement(self.n, tuple((m, k * c) for m, c in self.terms))

    def __rmul__(self, k: int) -> "AlgebraElement":
        return self.scale(int(k))

    def __mul__(self, other: "AlgebraElement | int") -> "AlgebraElement":
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    def __str__(self) -> str:
        return render(self)


def multiply(x: AlgebraElement, y: AlgebraElement, term_cap: int = DEFAULT_TERM_CAP) -> AlgebraElement:
    """(u e_i)(v e_j) = u [e_i + sum_{q: v_q = i} (s_i v_{>q} - v_{>q})] e_j."""
    x._check(y)
    acc: dict[Monomial, int] = defaultdict(int)
    for (u, i), a in x.terms:
        for (v, j), b in y.terms:
            c = a * b
            if i == j:
                acc[Monomial(u, i)] += c
            for q, letter in enumerate(v):
                if letter != i:
                    continue
                tail = v[q + 1 :]
                sign, m = _normal(u + (i,) + tail, j)
                acc[m] += sign * c
                sign, m = _normal(u + tail, j)
                acc[m] -= sign * c
    out = AlgebraElement.from_mapping(x.n, acc)
    if len(out) > term_cap:
        raise TermBudgetExceeded(f"product has {len(out)} terms (cap {term_cap})")
    return out


def _check_gen(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"generator index {i} out of range 1..{n}")


def zero(n: int) -> AlgebraElement:
    return AlgebraElement(n)


def one(n: int) -> AlgebraElement:
    return AlgebraElement.from_mapping(n, {Monomial((), i): 1 for i in range(1, n + 1)})


def gen_e(n: int, i: int) -> AlgebraElement:
    _check_gen(n, i)
    return AlgebraElement.from_mapping(n, {Monomial((), i): 1})


def from_word(n: int, word: Word | Sequence[int]) -> AlgebraElement:
    letters = tuple(word)
    for x in letters:
        _check_gen(n, x)
    acc: dict[Monomial, int] = defaultdict(int)
    for j in range(1, n + 1):
        sign, m = _normal(letters, j)
        acc[m] += sign
    return AlgebraElement.from_mapping(n, acc)


def gen_s(n: int, i: int) -> AlgebraElement:
    return from_word(n, (i,))


def sum_elements(n: int, xs: Iterable[AlgebraElement]) -> AlgebraElement:
    acc: dict[Monomial, int] = defaultdict(int)
    for x in xs:
        for m, c in x.terms:
            acc[m] += c
    return AlgebraElement.from_mapping(n, acc)


def term_count(x: AlgebraElement) -> int:
    return len(x.terms)


def mod2_equal(x: AlgebraElement, y: AlgebraElement) -> bool:
    return all(c % 2 == 0 for _, c in (x - y).terms)


def display_terms(x: AlgebraElement) -> list[tuple[tuple[int, ...], Optional[int], int]]:
    """(word, cap or None, coeff) in the display basis, sorted."""
    n = x.n
    acc: dict[tuple[tuple[int, ...], int], int] = defaultdict(int)
    for (u, cap), c in x.terms:
        if cap != n:
            acc[(u, cap)] += c
            continue
        # u e_n = u - sum_{i<n} u e_i
        acc[(u, 0)] += c
        for i in range(1, n):
            if u and u[-1] == i:
                acc[(u[:-1], i)] += c
            else:
                acc[(u, i)] -= c
    items = [(u, cap or None, c) for (u, cap), c in acc.items() if c]
    items.sort(key=lambda t: (len(t[0]), t[0], t[1] or 0))
    return items


def render(x: AlgebraElement) -> str:
    pieces = []
    for u, cap, c in display_terms(x):
        parts = [f"s{a}" for a in u] + ([f"e{cap}"] if cap else [])
        pieces.append(("*".join(parts) or "1", c))
    return _format(pieces)


def render_applied(x: AlgebraElement, i: int) -> str:
    """x(lambda_i): only the u*e_i terms survive, each contributing u(lambda_i)."""
    pieces = [(_word_str(u) or "1", c) for (u, cap), c in x.terms if cap == i]
    return f"({_format(pieces)})(λ{i})"


class Algebra:
    """Rank-n factory carrying the term budget used by every product."""

    def __init__(self, n: int, term_cap: int = DEFAULT_TERM_CAP) -> None:
        self.n = n
        self.term_cap = term_cap

    def one(self) -> AlgebraElement:
        return one(self.n)

    def zero(self) -> AlgebraElement:
        return zero(self.n)

    def s(self, i: int) -> AlgebraElement:
        return gen_s(self.n, i)

    def e(self, i: int) -> AlgebraElement:
        return gen_e(self.n, i)

    def word(self, w: Word | Sequence[int]) -> AlgebraElement:
        return from_word(self.n, w)

    def mul(self, *xs: AlgebraElement) -> AlgebraElement:
        out = xs[0]
        for y in xs[1:]:
            out = multiply(out, y, self.term_cap)
        return out

    def sum(self, xs: Iterable[AlgebraElement]) -> AlgebraElement:
        return sum_elements(self.n, xs)


# ---------------------------------------------------------------------------
# Representation pi (row vectors, right action)
# ---------------------------------------------------------------------------


class Representation:
    """pi for a fixed GIM, caching word matrices by prefix."""

    def __init__(self, a: Sequence[Sequence[int]]) -> None:
        self.a = tuple(tuple(int(x) for x in row) for row in a)
        self.n = len(self.a)
        self._cache: dict[tuple[int, ...], Matrix] = {(): identity(self.n)}

    def word_matrix(self, word: Sequence[int]) -> Matrix:
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        p = len(word)
        while word[:p] not in self._cache:
            p -= 1
        mat = self._cache[word[:p]]
        for q in range(p, len(word)):
            mat = extend_right(mat, self.a, word[q])
            self._cache[word[: q + 1]] = mat
        return mat

    def evaluate(self, x: AlgebraElement) -> Matrix:
        """pi(u e_i) keeps row i of pi(u) and zeroes the rest."""
        rows = [[0] * self.n for _ in range(self.n)]
        for (u, i), c in x.terms:
            src = self.word_matrix(u)[i - 1]
            dst = rows[i - 1]
            for m in range(self.n):
                dst[m] += c * src[m]
        return tuple(tuple(r) for r in rows)

    def act(self, x: AlgebraElement, v: Sequence[int]) -> Vector:
        if len(v) != self.n:
            raise LengthMismatch(f"vector of length {len(v)} for rank {self.n}")
        out = [0] * self.n
        for (u, i), c in x.terms:
            vi = v[i - 1]
            if not vi:
                continue
            src = self.word_matrix(u)[i - 1]
            for m in range(self.n):
                out[m] += c * vi * src[m]
        return tuple(out)


def evaluate_pi(x: AlgebraElement, a: Sequence[Sequence[int]]) -> Matrix:
    return Representation(a).evaluate(x)


def act(x: AlgebraElement, v: Sequence[int], a: Sequence[Sequence[int]]) -> Vector:
    return Representation(a).act(x, v)


def matmul(p: Matrix, q: Matrix) -> Matrix:
    n, inner, m = len(p), len(q), len(q[0]) if q else 0
    return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(inner)) for j in range(m)) for i in range(n))


__all__ = [
    "Algebra",
    "AlgebraElement",
    "Monomial",
    "Representation",
    "act",
    "display_terms",
    "evaluate_pi",
    "from_word",
    "gen_e",
    "gen_s",
    "matmul",
    "mod2_equal",
    "multiply",
    "one",
    "render",
    "render_applied",
    "sum_elements",
    "term_count",
    "zero",
]
