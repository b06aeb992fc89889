from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import IndexOutOfRange, LengthMismatch, NotSignCoherent, NotSymmetrizable

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]
MutationSeq = tuple[int, ...]


def sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def as_object_array(rows: Iterable[Iterable[int]]) -> np.ndarray:
    """Exact integer array: numpy object dtype holding Python ints."""
    arr = np.array([[int(x) for x in row] for row in rows], dtype=object)
    if arr.ndim != 2:
        raise LengthMismatch("expected a rectangular integer matrix")
    return arr


def matrix_key(arr: np.ndarray | Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in arr)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def unit_vector(n: int, i: int) -> Vector:
    """α_i (1-based i)."""
    return tuple(int(j == i - 1) for j in range(n))


def abs_vec(c: Sequence[int]) -> Vector:
    return tuple(abs(int(x)) for x in c)


def check_index(k: int, n: int) -> int:
    """Validate a 1-based index and return it 0-based."""
    if not isinstance(k, (int, np.integer)) or not 1 <= int(k) <= n:
        raise IndexOutOfRange(f"index {k} out of range 1..{n}")
    return int(k) - 1


def check_sequence(w: Iterable[int], n: int) -> MutationSeq:
    seq = tuple(int(k) for k in w)
    for k in seq:
        check_index(k, n)
    return seq


def _check_square(b: Sequence[Sequence[int]]) -> Matrix:
    rows = matrix_key(b)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise LengthMismatch(f"B must be a non-empty square matrix, got {n} rows")
    return rows


def _check_sign_pattern(b: Matrix) -> None:
    n = len(b)
    for i in range(n):
        if b[i][i] != 0:
            raise NotSymmetrizable(f"diagonal entry b[{i + 1}][{i + 1}]={b[i][i]} is not 0")
        for j in range(i + 1, n):
            if sgn(b[i][j]) != -sgn(b[j][i]):
                raise NotSymmetrizable(
                    f"b[{i + 1}][{j + 1}]={b[i][j]} and b[{j + 1}][{i + 1}]={b[j][i]} do not have opposite signs"
                )


def support_graph(b: Sequence[Sequence[int]]) -> nx.Graph:
    """Undirected graph on 1..n with an edge wherever b[i][j] != 0."""
    n = len(b)
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from((i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if b[i][j] != 0)
    return g


def compute_symmetrizer(b: Sequence[Sequence[int]]) -> Vector:
    """Positive integral D with BD skew-symmetric (b_ij d_j = -b_ji d_i).

    Each connected component of the nonzero pattern gets its minimal integral
    solution; components are independent, so the global gcd is then 1.
    """
    rows = _check_square(b)
    _check_sign_pattern(rows)
    n = len(rows)
    ratio: dict[int, Fraction] = {}
    g = support_graph(rows)
    d = [0] * n
    for comp in nx.connected_components(g):
        root = min(comp)
        ratio[root] = Fraction(1)
        for u, v in nx.bfs_edges(g, root):
            # d_v / d_u = |b_vu| / |b_uv|
            ratio[v] = ratio[u] * Fraction(abs(rows[v - 1][u - 1]), abs(rows[u - 1][v - 1]))
        for u, v in g.subgraph(comp).edges():
            if rows[u - 1][v - 1] * ratio[v] != -rows[v - 1][u - 1] * ratio[u]:
                raise NotSymmetrizable(f"no positive symmetrizer: cycle through ({u},{v}) is inconsistent")
        denom = math.lcm(*(ratio[v].denominator for v in comp))
        ints = [int(ratio[v] * denom) for v in sorted(comp)]
        common = math.gcd(*ints)
        for v, x in zip(sorted(comp), ints):
            d[v - 1] = x // common
    return tuple(d)


def validate_symmetrizer(b: Sequence[Sequence[int]], d: Sequence[int]) -> None:
    rows = _check_square(b)
    n = len(rows)
    if len(d) != n:
        raise LengthMismatch(f"D has length {len(d)}, expected {n}")
    if any(int(x) < 1 for x in d):
        raise NotSymmetrizable(f"D={tuple(d)} must be positive")
    if math.gcd(*(int(x) for x in d)) != 1:
        raise NotSymmetrizable(f"D={tuple(d)} must have gcd 1")
    for i in range(n):
        for j in range(n):
            if rows[i][j] * d[j] != -rows[j][i] * d[i]:
                raise NotSymmetrizable(f"BD is not skew-symmetric at ({i + 1},{j + 1}) with D={tuple(d)}")


@dataclass(frozen=True)
class SkewMatrix:
    b: Matrix
    d: Vector = ()
    name: str = ""

    def __post_init__(self) -> None:
        rows = _check_square(self.b)
        object.__setattr__(self, "b", rows)
        if self.d:
            d = tuple(int(x) for x in self.d)
            validate_symmetrizer(rows, d)
        else:
            d = compute_symmetrizer(rows)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.b)

    def entry(self, i: int, j: int) -> int:
        """1-based b_ij."""
        return self.b[i - 1][j - 1]


def mutate_extended(m: Sequence[Sequence[int]] | np.ndarray, k: int) -> Matrix:
    """Mutation of an n x 2n extended matrix at the 1-based index k."""
    arr = m if isinstance(m, np.ndarray) and m.dtype == object else as_object_array(m)
    n, width = arr.shape
    if width < n:
        raise LengthMismatch(f"extended matrix must be n x 2n, got {n} x {width}")
    kk = check_index(k, n)

    col = arr[:, kk]
    row = arr[kk, :]
    prod = col[:, None] * row[None, :]
    pos = np.where(prod > 0, prod, 0)
    signs = np.array([sgn(x) for x in col], dtype=object)
    out = arr + signs[:, None] * pos
    out[kk, :] = -row
    out[:, kk] = -col
    return matrix_key(out)


@dataclass(frozen=True)
class Seed:
    base: SkewMatrix
    w: MutationSeq = ()
    bw: Matrix = ()
    cw: Matrix = ()

    @classmethod
    def initial(cls, base: SkewMatrix) -> "Seed":
        return cls(base=base, w=(), bw=base.b, cw=identity(base.n))

    @property
    def n(self) -> int:
        return self.base.n

    def extended(self) -> Matrix:
        return tuple(tuple(self.bw[i]) + tuple(self.cw[i]) for i in range(self.n))

    def c_vector(self, i: int) -> Vector:
        return self.cw[i - 1]

    def mutate(self, k: int) -> "Seed":
        m = mutate_extended(self.extended(), k)
        n = self.n
        return Seed(
            base=self.base,
            w=self.w + (int(k),),
            bw=tuple(r[:n] for r in m),
            cw=tuple(r[n:] for r in m),
        )


def apply_sequence(base: SkewMatrix, w: Iterable[int]) -> Seed:
    seed = Seed.initial(base)
    for k in check_sequence(w, base.n):
        seed = seed.mutate(k)
    return seed


def c_vector_step(bw: Sequence[Sequence[int]], cw: Sequence[Sequence[int]], k: int) -> Matrix:
    """c-vector recursion alone: c_k -> -c_k; c_i += |b_ik| c_k when b_ik c_k > 0."""
    n = len(bw)
    kk = check_index(k, n)
    ck = cw[kk]
    sk = row_sign(ck)
    out: list[Vector] = []
    for i in range(n):
        if i == kk:
            out.append(tuple(-x for x in ck))
            continue
        bik = bw[i][kk]
        if bik != 0 and sgn(bik) * sk == 1:
            out.append(tuple(cw[i][j] + sgn(bik) * bik * ck[j] for j in range(len(ck))))
        else:
            out.append(tuple(cw[i]))
    return tuple(out)


def row_sign(c: Sequence[int]) -> int:
    if all(x >= 0 for x in c) and any(x > 0 for x in c):
        return 1
    if all(x <= 0 for x in c) and any(x < 0 for x in c):
        return -1
    raise NotSignCoherent(f"vector {tuple(c)} is not sign-coherent")


def check_sign_coherent(seed: Seed) -> None:
    for i, c in enumerate(seed.cw, start=1):
        try:
            row_sign(c)
        except NotSignCoherent as e:
            raise NotSignCoherent(f"c_{i} after w={list(seed.w)}: {e}") from None


class VecOrder(enum.Enum):
    LESS = "Less"
    GREATER = "Greater"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def vec_cmp(v: Sequence[int], w: Sequence[int]) -> VecOrder:
    if len(v) != len(w):
        raise LengthMismatch(f"cannot compare vectors of length {len(v)} and {len(w)}")
    diff = [int(b) - int(a) for a, b in zip(v, w)]
    if not any(diff):
        return VecOrder.EQUAL
    if all(x >= 0 for x in diff):
        return VecOrder.LESS
    if all(x <= 0 for x in diff):
        return VecOrder.GREATER
    return VecOrder.INCOMPARABLE


__all__ = [
    "Matrix",
    "MutationSeq",
    "Seed",
    "SkewMatrix",
    "VecOrder",
    "Vector",
    "abs_vec",
    "apply_sequence",
    "c_vector_step",
    "check_sign_coherent",
    "compute_symmetrizer",
    "mutate_extended",
    "row_sign",
    "validate_symmetrizer",
    "vec_cmp",
]
