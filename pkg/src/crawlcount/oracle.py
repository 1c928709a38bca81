"""Exhaustive ground truth: enumeration, chain counts, degeneracy, bounds.

Everything here may read the graph without metering; it exists to verify
what the sampling estimator only approximates.  Feasible on graphs small
enough to enumerate, which is what the work budget protects.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush

from .graph import Graph, QueryLedger
from .instances import Instance, assign, seg_degree
from .patterns import LevelGraph, Pattern, Segmentation, _bits_isomorphic


class EnumerationBudgetError(RuntimeError):
    """The enumeration search tree outgrew the configured work budget."""


DEFAULT_BUDGET = 100_000_000


def _connected_sets(g: Graph, size: int, budget: int):
    """Yield every connected vertex set of the given size exactly once.

    Grow-only enumeration rooted at each vertex: a set is found from its
    smallest vertex, extensions draw on exclusive new neighbors above the
    root, so no set appears twice.  Raises when the number of search nodes
    passes the budget (the branching estimate of the work bound).
    """
    n = g.vertex_count
    nodes = 0

    def extend(sub: list[int], ext: list[int], closed: set[int], root: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationBudgetError(
                f"enumeration exceeded {budget} search nodes; "
                "use a smaller graph or raise the budget"
            )
        if len(sub) == size:
            yield tuple(sorted(sub))
            return
        while ext:
            w = ext.pop()
            new_closed = closed | g.raw_neighbor_set(w)
            new_ext = ext + [
                u for u in g.raw_neighbor_set(w) if u > root and u not in closed
            ]
            sub.append(w)
            yield from extend(sub, new_ext, new_closed, root)
            sub.pop()

    for v in range(n):
        if size == 1:
            yield (v,)
            continue
        nbrs = g.raw_neighbor_set(v)
        ext = [u for u in nbrs if u > v]
        closed = set(nbrs) | {v}
        yield from extend([v], ext, closed, v)


def _local_bits_raw(g: Graph, verts: tuple[int, ...]) -> list[int]:
    n = len(verts)
    bits = [0] * n
    for i in range(n):
        u = verts[i]
        for j in range(i):
            if g.has_edge(u, verts[j]):
                bits[i] |= 1 << j
                bits[j] |= 1 << i
    return bits


def _copies(g: Graph, target: LevelGraph, budget: int) -> list[Instance]:
    out = []
    for verts in _connected_sets(g, target.size, budget):
        if _bits_isomorphic(_local_bits_raw(g, verts), target):
            out.append(Instance(verts))
    out.sort(key=lambda inst: inst.vertices)
    return out


def enumerate_instances(
    g: Graph,
    pattern: Pattern,
    seg: Segmentation,
    level: int,
    budget: int = DEFAULT_BUDGET,
) -> list[Instance]:
    """All copies of the given segmentation level, sorted by vertex tuple."""
    return _copies(g, seg.level(level), budget)


def exact_count(g: Graph, pattern: Pattern, budget: int = DEFAULT_BUDGET) -> int:
    """Exact number of copies of the pattern in the graph."""
    return len(_copies(g, pattern.level_graph, budget))


@dataclass
class CountProfile:
    """Exact copy counts and assignment-chain tallies per level.

    ``f_tables[i]`` maps a level-i vertex tuple to the number of full-size
    copies whose assignment chain passes through it; each table sums to the
    total, because every copy owns exactly one chain.
    """

    total: int
    per_level_counts: dict[int, int]
    f_tables: dict[int, dict[tuple[int, ...], int]]
    f_max_per_level: dict[int, int]
    f_max: int


def count_profile(
    g: Graph, pattern: Pattern, seg: Segmentation, budget: int = DEFAULT_BUDGET
) -> CountProfile:
    """Enumerate every copy and walk its assignment chain down to level 2."""
    k = pattern.size
    per_level: dict[int, list[Instance]] = {}
    level_sets: dict[int, set[tuple[int, ...]]] = {}
    for i in range(2, k + 1):
        found = enumerate_instances(g, pattern, seg, i, budget=budget)
        per_level[i] = found
        level_sets[i] = {inst.vertices for inst in found}
    copies = per_level[k]
    f_tables: dict[int, dict[tuple[int, ...], int]] = {
        i: {} for i in range(2, k + 1)
    }
    scratch = QueryLedger()
    for copy in copies:
        cur = copy
        f_tables[k][cur.vertices] = f_tables[k].get(cur.vertices, 0) + 1
        for lvl in range(k, 2, -1):
            cur = assign(g, scratch, cur, seg)
            assert cur.vertices in level_sets[lvl - 1], (
                "assignment chain left the copy set"
            )
            f_tables[lvl - 1][cur.vertices] = (
                f_tables[lvl - 1].get(cur.vertices, 0) + 1
            )
    total = len(copies)
    for i in range(2, k + 1):
        assert sum(f_tables[i].values()) == total, "chain tallies must sum to total"
    f_max_per_level = {
        i: (max(f_tables[i].values()) if f_tables[i] else 0) for i in range(2, k + 1)
    }
    return CountProfile(
        total=total,
        per_level_counts={i: len(per_level[i]) for i in range(2, k + 1)},
        f_tables=f_tables,
        f_max_per_level=f_max_per_level,
        f_max=max(f_max_per_level.values()) if f_max_per_level else 0,
    )


@dataclass(frozen=True)
class DegeneracyResult:
    value: int
    order: tuple[int, ...]


def degeneracy(g: Graph) -> DegeneracyResult:
    """Max min-degree over the peeling order (smallest id breaks ties).

    Trees give 1, cycles 2, the complete graph on n vertices n-1.  The
    value upper-bounds arboricity, so it is the plug-in for density-based
    bounds when the true arboricity is out of reach.
    """
    n = g.vertex_count
    deg = [g.raw_degree(v) for v in range(n)]
    removed = [False] * n
    heap = [(deg[v], v) for v in range(n)]
    heapify(heap)
    order: list[int] = []
    value = 0
    while heap:
        d, v = heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        if d > value:
            value = d
        for w in g.raw_neighbors(v):
            if not removed[w]:
                deg[w] -= 1
                heappush(heap, (deg[w], w))
    return DegeneracyResult(value=value, order=tuple(order))


def seg_degree_total(
    g: Graph,
    pattern: Pattern,
    seg: Segmentation,
    level: int,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Sum of sampling weights over every copy of the given level."""
    scratch = QueryLedger()
    return sum(
        seg_degree(g, scratch, inst, pattern.slack)
        for inst in enumerate_instances(g, pattern, seg, level, budget=budget)
    )


@dataclass(frozen=True)
class ArboricityBound:
    """Exact left side vs the density upper bound, both integers."""

    lhs: int
    rhs: int
    holds: bool
    degeneracy_used: int


def check_arboricity_bound(
    g: Graph,
    pattern: Pattern,
    seg: Segmentation,
    level: int,
    budget: int = DEFAULT_BUDGET,
) -> ArboricityBound:
    """Check sum of weights at a level against 2m ((c+1) a)^(i-1-c) n^c.

    The bound holds with a equal to the arboricity; degeneracy is at least
    that, so it is a safe substitute on the right-hand side.
    """
    c = pattern.slack
    if level < c + 1:
        raise ValueError(f"level {level} has no representative at slack {c}")
    lhs = seg_degree_total(g, pattern, seg, level, budget=budget)
    a = degeneracy(g).value
    rhs = 2 * g.edge_count * ((c + 1) * a) ** (level - 1 - c) * g.vertex_count**c
    return ArboricityBound(lhs=lhs, rhs=rhs, holds=lhs <= rhs, degeneracy_used=a)
