from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import networkx as nx
from networkx.utils import UnionFind

from .coxeter_words import Word, act_word, iter_reduced_words
from .errors import InputError, LengthMismatch, RankTooLarge
from .matrix_core import Matrix, SkewMatrix, Vector, support_graph, unit_vector

BRUTE_FORCE_MAX_RANK = 8


@dataclass(frozen=True)
class Ordering:
    """Linear ordering on 1..n; `chain` lists indices from smallest to largest."""

    chain: tuple[int, ...]

    def __post_init__(self) -> None:
        chain = tuple(int(x) for x in self.chain)
        if sorted(chain) != list(range(1, len(chain) + 1)):
            raise InputError(f"ordering {chain} is not a permutation of 1..{len(chain)}")
        object.__setattr__(self, "chain", chain)

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "Ordering":
        raw = "".join((text or "").split())
        if ">" in raw and "<" in raw:
            raise InputError(f"ordering {text!r} mixes '<' and '>'")
        try:
            if ">" in raw:
                chain = tuple(reversed([int(x) for x in raw.split(">")]))
            else:
                chain = tuple(int(x) for x in raw.split("<"))
        except ValueError:
            raise InputError(f"cannot parse ordering {text!r}") from None
        o = cls(chain)
        if n is not None and o.n != n:
            raise LengthMismatch(f"ordering {text!r} has {o.n} indices, expected {n}")
        return o

    @classmethod
    def natural(cls, n: int) -> "Ordering":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.chain)

    @property
    def rank(self) -> tuple[int, ...]:
        """rank[i - 1] = position of i along the chain."""
        pos = [0] * self.n
        for p, i in enumerate(self.chain):
            pos[i - 1] = p
        return tuple(pos)

    def precedes(self, i: int, j: int) -> bool:
        r = self.rank
        return r[i - 1] < r[j - 1]

    def __str__(self) -> str:
        return "<".join(str(i) for i in self.chain)


def all_orderings(n: int) -> Iterator[Ordering]:
    if n > BRUTE_FORCE_MAX_RANK:
        raise RankTooLarge(f"refusing to enumerate {n}! orderings (n > {BRUTE_FORCE_MAX_RANK})")
    for perm in itertools.permutations(range(1, n + 1)):
        yield Ordering(perm)


@dataclass(frozen=True)
class Gim:
    a: Matrix
    ordering: Ordering
    source: SkewMatrix

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def d(self) -> Vector:
        return self.source.d


def gim_from_ordering(b: SkewMatrix, o: Ordering) -> Gim:
    if o.n != b.n:
        raise LengthMismatch(f"ordering on {o.n} indices for a rank-{b.n} matrix")
    r = o.rank
    n = b.n
    a = tuple(
        tuple(
            2 if i == j else (b.b[i][j] if r[i] < r[j] else -b.b[i][j])
            for j in range(n)
        )
        for i in range(n)
    )
    return Gim(a=a, ordering=o, source=b)


def is_generalized_cartan(g: Gim) -> bool:
    return all(g.a[i][j] <= 0 for i in range(g.n) for j in range(g.n) if i != j)


def quadratic_form(g: Gim, m: Sequence[int]) -> int:
    """sum_ij d_j a_ij m_i m_j."""
    if len(m) != g.n:
        raise LengthMismatch(f"vector of length {len(m)} for a rank-{g.n} GIM")
    d = g.d
    return sum(d[j] * g.a[i][j] * m[i] * m[j] for i in range(g.n) for j in range(g.n))


@dataclass(frozen=True)
class LoesungCheck:
    value: int
    k: Optional[int]
    positive: bool

    def __bool__(self) -> bool:
        return self.k is not None


def is_loesung(g: Gim, m: Sequence[int]) -> LoesungCheck:
    """Smallest k with q(m) = 2 d_k, if any, plus positivity of m."""
    if not any(m):
        raise InputError("the zero vector is never a Lösung")
    q = quadratic_form(g, m)
    k = next((i + 1 for i, di in enumerate(g.d) if q == 2 * di), None)
    return LoesungCheck(value=q, k=k, positive=all(x >= 0 for x in m))


def find_real_loesung_witness(g: Gim, m: Sequence[int], max_len: int) -> Optional[tuple[Word, int]]:
    """Shortest (word u, k) with u(alpha_k) = m, searching words up to max_len."""
    target = tuple(int(x) for x in m)
    check = is_loesung(g, target)
    if not check:
        return None
    ks = [i + 1 for i, di in enumerate(g.d) if 2 * di == check.value]
    units = {k: unit_vector(g.n, k) for k in ks}
    for u in iter_reduced_words(g.n, max_len):
        for k in ks:
            if act_word(g.a, u, units[k]) == target:
                return u, k
    return None


# ---------------------------------------------------------------------------
# Chordless cycles and orderings with the odd-positive-entry property.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChordlessCycle:
    vertices: tuple[int, ...]
    oriented: bool

    def edges(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[j], v[(j + 1) % len(v)]) for j in range(len(v))]

    def edge_keys(self) -> set[frozenset[int]]:
        return {frozenset(e) for e in self.edges()}


def _rotate(cycle: Sequence[int]) -> tuple[int, ...]:
    """Start at the smallest vertex; of the two directions take the lexicographically smaller."""
    p = cycle.index(min(cycle))
    forward = tuple(cycle[p:]) + tuple(cycle[:p])
    backward = forward[:1] + forward[:0:-1]
    return min(forward, backward)


def _is_oriented(cycle: Sequence[int], arrow: dict[frozenset[int], tuple[int, int]]) -> bool:
    steps = [(cycle[j], cycle[(j + 1) % len(cycle)]) for j in range(len(cycle))]
    forward = [arrow[frozenset(e)] == e for e in steps]
    return all(forward) or not any(forward)


def _arrows(b: Sequence[Sequence[int]]) -> dict[frozenset[int], tuple[int, int]]:
    """Undirected edge -> arrow (i, j) with b_ij < 0."""
    n = len(b)
    out: dict[frozenset[int], tuple[int, int]] = {}
    for i in range(n):
        for j in range(n):
            if b[i][j] < 0:
                out[frozenset((i + 1, j + 1))] = (i + 1, j + 1)
    return out


def _cycles_of(graph: nx.Graph) -> dict[frozenset[int], tuple[int, ...]]:
    out: dict[frozenset[int], tuple[int, ...]] = {}
    for c in nx.chordless_cycles(graph):
        if len(c) < 3:
            continue
        key = frozenset(c)
        if key not in out:
            out[key] = _rotate(c)
    return out


def chordless_cycles(b: SkewMatrix) -> list[ChordlessCycle]:
    arrow = _arrows(b.b)
    cycles = _cycles_of(support_graph(b.b))
    out = [ChordlessCycle(vertices=c, oriented=_is_oriented(c, arrow)) for c in cycles.values()]
    out.sort(key=lambda c: (len(c.vertices), c.vertices))
    return out


def positive_entries_along(g: Gim, cycle: ChordlessCycle) -> int:
    return sum(1 for i, j in cycle.edges() if g.a[i - 1][j - 1] > 0)


def ordering_satisfies_parity(b: SkewMatrix, o: Ordering, cycles: Optional[list[ChordlessCycle]] = None) -> bool:
    g = gim_from_ordering(b, o)
    cycles = chordless_cycles(b) if cycles is None else cycles
    return all(positive_entries_along(g, c) % 2 == 1 for c in cycles if c.oriented)


def brute_force_ordering_search(b: SkewMatrix) -> list[Ordering]:
    cycles = chordless_cycles(b)
    return [o for o in all_orderings(b.n) if ordering_satisfies_parity(b, o, cycles)]


def _spanning_forests(graph: nx.Graph) -> Iterator[tuple[tuple[int, int], ...]]:
    """Spanning forests in edge-lexicographic order."""
    edges = sorted(tuple(sorted(e)) for e in graph.edges())
    size = graph.number_of_nodes() - nx.number_connected_components(graph)
    for combo in itertools.combinations(edges, size):
        uf = UnionFind(graph.nodes())
        ok = True
        for u, v in combo:
            if uf[u] == uf[v]:
                ok = False
                break
            uf.union(u, v)
        if ok:
            yield combo


def _chordless_in(full: nx.Graph, vertices: Sequence[int]) -> bool:
    return full.subgraph(vertices).number_of_edges() == len(vertices)


class _OrderingSearch:
    """Spanning-tree construction of an ordering with an odd number of positive
    GIM entries on every oriented chordless cycle."""

    def __init__(self, b: SkewMatrix, node_cap: int) -> None:
        self.b = b
        self.graph = support_graph(b.b)
        self.arrow = _arrows(b.b)
        self.cycles = chordless_cycles(b)
        self.oriented = [c for c in self.cycles if c.oriented]
        self.node_cap = node_cap
        self.nodes = 0

    def _tick(self) -> bool:
        self.nodes += 1
        return self.nodes <= self.node_cap

    def run(self) -> Optional[Ordering]:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(1, self.b.n + 1))
        digraph.add_edges_from(self.arrow.values())
        if not self.oriented:
            if nx.is_directed_acyclic_graph(digraph):
                return Ordering(tuple(nx.lexicographical_topological_sort(digraph)))
            return None

        for forest in _spanning_forests(self.graph):
            if not self._tick():
                return None
            keys = {frozenset(e) for e in forest}
            if not all(c.edge_keys() & keys for c in self.oriented):
                continue
            extra = sorted(tuple(sorted(e)) for e in self.graph.edges() if frozenset(e) not in keys)
            prefix = nx.Graph()
            prefix.add_nodes_from(self.graph.nodes())
            prefix.add_edges_from(forest)
            found = self._order_extra(prefix, extra, [])
            if found is not None:
                return found
            if self.nodes > self.node_cap:
                return None
        return None

    def _order_extra(
        self,
        prefix: nx.Graph,
        remaining: list[tuple[int, int]],
        reversed_arrows: list[tuple[int, int]],
    ) -> Optional[Ordering]:
        if not self._tick():
            return None
        if not remaining:
            return self._finish(reversed_arrows)

        before = _cycles_of(prefix)
        for idx, edge in enumerate(remaining):
            prefix.add_edge(*edge)
            after = _cycles_of(prefix)
            new = [c for key, c in after.items() if key not in before]
            if new and all(_chordless_in(self.graph, c) for c in after.values()):
                chosen = self._select(edge, new, reversed_arrows)
                rev = reversed_arrows + ([self.arrow[frozenset(edge)]] if chosen else [])
                found = self._order_extra(prefix, remaining[:idx] + remaining[idx + 1 :], rev)
                if found is not None:
                    prefix.remove_edge(*edge)
                    return found
            prefix.remove_edge(*edge)
            if self.nodes > self.node_cap:
                return None
        return None

    def _select(self, edge: tuple[int, int], new: list[tuple[int, ...]], reversed_arrows: list[tuple[int, int]]) -> bool:
        flipped = dict(self.arrow)
        for i, j in reversed_arrows:
            flipped[frozenset((i, j))] = (j, i)
        rev_keys = {frozenset(e) for e in reversed_arrows}
        for c in new:
            # (1) oriented once earlier selections are reversed
            if _is_oriented(c, flipped):
                return True
            # (2) oriented in G with an even number of earlier selections on it
            if _is_oriented(c, self.arrow):
                on_cycle = sum(1 for e in ChordlessCycle(c, True).edge_keys() if e in rev_keys)
                if on_cycle % 2 == 0:
                    return True
        return False

    def _finish(self, reversed_arrows: list[tuple[int, int]]) -> Optional[Ordering]:
        h = nx.DiGraph()
        h.add_nodes_from(range(1, self.b.n + 1))
        rev = set(reversed_arrows)
        for arrow in self.arrow.values():
            h.add_edge(*(arrow[::-1] if arrow in rev else arrow))
        if not nx.is_directed_acyclic_graph(h):
            return None
        o = Ordering(tuple(nx.lexicographical_topological_sort(h)))
        if ordering_satisfies_parity(self.b, o, self.cycles):
            return o
        return None


def find_admissible_ordering(b: SkewMatrix, node_cap: int = 1_000_000) -> Optional[Ordering]:
    return _OrderingSearch(b, node_cap).run()


def is_symmetrized(g: Gim) -> bool:
    """AD symmetric for the symmetrizer D of the source matrix."""
    d = g.d
    return all(g.a[i][j] * d[j] == g.a[j][i] * d[i] for i in range(g.n) for j in range(g.n))


__all__ = [
    "ChordlessCycle",
    "Gim",
    "LoesungCheck",
    "Ordering",
    "all_orderings",
    "brute_force_ordering_search",
    "chordless_cycles",
    "find_admissible_ordering",
    "find_real_loesung_witness",
    "gim_from_ordering",
    "is_generalized_cartan",
    "is_loesung",
    "is_symmetrized",
    "ordering_satisfies_parity",
    "quadratic_form",
]
