"""m-separation queries, implied independences, and maximality.

A path m-connects two vertices given a conditioning set C when every
non-endpoint vertex at which both incident edges carry an arrowhead (a
collider) is an ancestor of C, and every other non-endpoint vertex is
outside C.  Queries are answered by reachability over (vertex, entering
mark) states, which visits each directed edge at most twice instead of
enumerating paths.

Separating-set search, maximality checking, and completion enumerate
conditioning sets exhaustively and are therefore exponential in the
vertex count; they refuse graphs above ``max_vertices``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import GraphTooLarge, OverlappingSets
from .graph import AncestralGraph

TAIL = 0
ARROW = 1


@dataclass(frozen=True)
class SeparationQuery:
    """A triple (A, B, C) of pairwise disjoint vertex sets, A and B nonempty."""

    a: frozenset
    b: frozenset
    c: frozenset

    def __post_init__(self):
        a = frozenset(self.a)
        b = frozenset(self.b)
        c = frozenset(self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if not a or not b:
            raise ValueError("query sets A and B must be nonempty")
        if a & b or a & c or b & c:
            raise OverlappingSets("query sets must be pairwise disjoint")


@dataclass(frozen=True)
class IndependenceStatement:
    """A pairwise independence record produced by the implied-model scan.

    ``holds`` is False when no conditioning set separates the pair, in
    which case ``c`` is empty and meaningless.
    """

    a: frozenset
    b: frozenset
    c: frozenset
    holds: bool


def _steps(g: AncestralGraph, v: int):
    """Yield (w, mark_at_v, mark_at_w) for every edge incident to ``v``."""
    for w in g.ne(v):
        yield w, TAIL, TAIL
    for w in g.ch(v):
        yield w, TAIL, ARROW
    for w in g.pa(v):
        yield w, ARROW, TAIL
    for w in g.sp(v):
        yield w, ARROW, ARROW


def m_connecting_path_exists(g: AncestralGraph, i, j, c=frozenset()) -> bool:
    """True when some path m-connects ``i`` and ``j`` given ``c``.

    Walk-based reachability over (vertex, entering mark) states; a walk
    that m-connects can always be shortened to a path that does, so the
    answer matches path enumeration.
    """
    i = g._check_vertex(i)
    j = g._check_vertex(j)
    c = frozenset(g._check_vertex(x) for x in c)
    if i == j or i in c or j in c:
        raise OverlappingSets("endpoints must be distinct and outside C")

    anc_c = g.ancestors(c) if c else frozenset()
    seen = set()
    stack = []
    for w, _, mark_w in _steps(g, i):
        state = (w, mark_w)
        if state not in seen:
            seen.add(state)
            stack.append(state)
    while stack:
        v, mark_in = stack.pop()
        if v == j:
            return True
        for w, mark_v, mark_w in _steps(g, v):
            if mark_in == ARROW and mark_v == ARROW:
                if v not in anc_c:
                    continue
            else:
                if v in c:
                    continue
            state = (w, mark_w)
            if state not in seen:
                seen.add(state)
                stack.append(state)
    return False


def m_separated(g: AncestralGraph, a, b, c=frozenset()) -> bool:
    """True when every pair across A and B is m-separated given C."""
    if isinstance(a, (int,)) or isinstance(b, (int,)):
        raise TypeError("A and B must be vertex sets")
    q = SeparationQuery(frozenset(a), frozenset(b), frozenset(c))
    return not any(
        m_connecting_path_exists(g, i, j, q.c) for i in q.a for j in q.b
    )


def _guard_size(g: AncestralGraph, max_vertices: int):
    if g.n > max_vertices:
        raise GraphTooLarge(
            f"exhaustive search over conditioning sets refused for {g.n} vertices "
            f"(limit {max_vertices})"
        )


def separating_set(g: AncestralGraph, i, j, *, max_vertices: int = 16):
    """Smallest separating set for a non-adjacent pair, or None.

    Candidates are scanned by size and then lexicographically, so the
    returned set is the first one in that order.  Returns None when no
    subset of the remaining vertices separates the pair.
    """
    _guard_size(g, max_vertices)
    i = g._check_vertex(i)
    j = g._check_vertex(j)
    if g.is_adjacent(i, j):
        return None
    rest = [v for v in range(g.n) if v != i and v != j]
    for size in range(len(rest) + 1):
        for cand in combinations(rest, size):
            if not m_connecting_path_exists(g, i, j, frozenset(cand)):
                return frozenset(cand)
    return None


def implied_pairwise_independences(
    g: AncestralGraph, *, max_vertices: int = 16
) -> tuple:
    """One record per non-adjacent pair, scanned in index order.

    Each record carries the smallest separating set (by size, then
    lexicographic order) or ``holds=False`` when the pair cannot be
    separated.
    """
    _guard_size(g, max_vertices)
    out = []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if g.is_adjacent(i, j):
                continue
            c = separating_set(g, i, j, max_vertices=max_vertices)
            out.append(
                IndependenceStatement(
                    a=frozenset((i,)),
                    b=frozenset((j,)),
                    c=c if c is not None else frozenset(),
                    holds=c is not None,
                )
            )
    return tuple(out)


def is_maximal(g: AncestralGraph, *, max_vertices: int = 16) -> bool:
    """True when every non-adjacent pair admits some separating set."""
    _guard_size(g, max_vertices)
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if g.is_adjacent(i, j):
                continue
            if separating_set(g, i, j, max_vertices=max_vertices) is None:
                return False
    return True


def maximal_completion(g: AncestralGraph, *, max_vertices: int = 16) -> AncestralGraph:
    """Add bidirected edges between inseparable pairs until maximal.

    The completed graph represents the same collection of m-separation
    statements as the input; the graph is rebuilt (and revalidated) after
    each round of additions.
    """
    _guard_size(g, max_vertices)
    current = g
    while True:
        missing = [
            (i, j)
            for i in range(current.n)
            for j in range(i + 1, current.n)
            if not current.is_adjacent(i, j)
            and separating_set(current, i, j, max_vertices=max_vertices) is None
        ]
        if not missing:
            return current
        current = AncestralGraph(
            current.n,
            undirected=current.undirected_pairs,
            directed=current.directed_pairs,
            bidirected=list(current.bidirected_pairs) + missing,
            labels=current.labels,
        )
