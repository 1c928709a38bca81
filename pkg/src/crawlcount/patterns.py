"""Pattern graphs, density slack, and insertion orders.

A pattern is a small connected graph on k vertices (3 <= k <= 8) together
with a slack value c.  A segmentation is an insertion order of the pattern
vertices; the prefix of the first i vertices is called level i.  The order
is feasible for slack c when every level is connected and every vertex of
level i has at least i-1-c neighbors inside that level.  Cliques work with
c = 0, a clique missing one edge with c = 1, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import IO, Iterable, Sequence


@dataclass(frozen=True)
class LevelGraph:
    """Adjacency of one segmentation level, on local indices 0..size-1.

    ``bits[i]`` is the neighbor bitmask of local vertex i.
    """

    size: int
    bits: tuple[int, ...]
    degrees: tuple[int, ...]
    degree_multiset: tuple[int, ...]
    edge_total: int

    @staticmethod
    def from_bits(bits: Sequence[int]) -> "LevelGraph":
        degs = tuple(b.bit_count() for b in bits)
        return LevelGraph(
            size=len(bits),
            bits=tuple(bits),
            degrees=degs,
            degree_multiset=tuple(sorted(degs)),
            edge_total=sum(degs) // 2,
        )


def _bits_connected(bits: Sequence[int], size: int) -> bool:
    if size == 0:
        return False
    seen = 1
    frontier = 1
    full = (1 << size) - 1
    while frontier:
        nxt = 0
        i = 0
        f = frontier
        while f:
            if f & 1:
                nxt |= bits[i]
            f >>= 1
            i += 1
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def _bits_isomorphic(cand: Sequence[int], target: LevelGraph) -> bool:
    """Exact induced-subgraph equality up to relabeling, by backtracking.

    Degree multisets act as a cheap prefilter; the search then demands that
    edges and non-edges both match.
    """
    k = target.size
    cdegs = [b.bit_count() for b in cand]
    if sorted(cdegs) != list(target.degree_multiset):
        return False
    tbits = target.bits
    tdegs = target.degrees
    perm = [0] * k

    def place(i: int, used: int) -> bool:
        if i == k:
            return True
        row = cand[i]
        for t in range(k):
            bit = 1 << t
            if used & bit or tdegs[t] != cdegs[i]:
                continue
            trow = tbits[t]
            ok = True
            for j in range(i):
                if ((row >> j) & 1) != ((trow >> perm[j]) & 1):
                    ok = False
                    break
            if ok:
                perm[i] = t
                if place(i + 1, used | bit):
                    return True
        return False

    return place(0, 0)


class Pattern:
    """Connected pattern graph with a declared density slack."""

    __slots__ = ("size", "slack", "edges", "bits", "_level_graph")

    def __init__(self, size: int, edges: Iterable[tuple[int, int]], slack: int = 0):
        if not 3 <= size <= 8:
            raise ValueError("pattern size must be between 3 and 8")
        if slack < 0:
            raise ValueError("slack must be nonnegative")
        eset: set[tuple[int, int]] = set()
        for a, b in edges:
            if a == b:
                raise ValueError("pattern may not contain self-loops")
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"pattern edge ({a}, {b}) out of range")
            eset.add((a, b) if a < b else (b, a))
        bits = [0] * size
        for a, b in eset:
            bits[a] |= 1 << b
            bits[b] |= 1 << a
        if not _bits_connected(bits, size):
            raise ValueError("pattern must be connected")
        self.size = size
        self.slack = slack
        self.edges = frozenset(eset)
        self.bits = tuple(bits)
        self._level_graph = LevelGraph.from_bits(bits)

    def degree(self, v: int) -> int:
        return self.bits[v].bit_count()

    @property
    def level_graph(self) -> LevelGraph:
        """The whole pattern as a :class:`LevelGraph`."""
        return self._level_graph

    def adjacency_matrix(self) -> list[list[int]]:
        return [
            [(self.bits[i] >> j) & 1 for j in range(self.size)]
            for i in range(self.size)
        ]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Pattern(size={self.size}, edges={len(self.edges)}, slack={self.slack})"


class Segmentation:
    """Insertion order of pattern vertices; level i is the first i of them."""

    __slots__ = ("pattern", "order", "_levels")

    def __init__(self, pattern: Pattern, order: Sequence[int]):
        k = pattern.size
        if sorted(order) != list(range(k)):
            raise ValueError("order must be a permutation of the pattern vertices")
        self.pattern = pattern
        self.order = tuple(order)
        levels: dict[int, LevelGraph] = {}
        for i in range(2, k + 1):
            chosen = self.order[:i]
            pos = {v: idx for idx, v in enumerate(chosen)}
            bits = [0] * i
            for idx, v in enumerate(chosen):
                row = pattern.bits[v]
                for w in chosen:
                    if (row >> w) & 1:
                        bits[idx] |= 1 << pos[w]
            levels[i] = LevelGraph.from_bits(bits)
        self._levels = levels

    def level(self, i: int) -> LevelGraph:
        if i not in self._levels:
            raise ValueError(f"level {i} outside 2..{self.pattern.size}")
        return self._levels[i]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Segmentation(order={self.order})"


@dataclass(frozen=True)
class SegmentationReport:
    """Outcome of validating an insertion order.

    ``min_slack`` is the smallest slack the order supports, or None when
    some level is disconnected (no slack can repair that).
    """

    min_slack: int | None
    disconnected_levels: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.disconnected_levels

    def feasible_for(self, slack: int) -> bool:
        return self.ok and self.min_slack is not None and self.min_slack <= slack


def validate_segmentation(pattern: Pattern, seg: Segmentation) -> SegmentationReport:
    """Report the minimal feasible slack and any disconnected levels."""
    if seg.pattern is not pattern and seg.pattern.bits != pattern.bits:
        raise ValueError("segmentation belongs to a different pattern")
    bad: list[int] = []
    worst = 0
    for i in range(2, pattern.size + 1):
        lg = seg.level(i)
        if not _bits_connected(lg.bits, lg.size):
            bad.append(i)
            continue
        deficit = (i - 1) - min(lg.degrees)
        if deficit > worst:
            worst = deficit
    if bad:
        return SegmentationReport(min_slack=None, disconnected_levels=tuple(bad))
    return SegmentationReport(min_slack=worst, disconnected_levels=())


def _order_slack(pbits: Sequence[int], order: Sequence[int]) -> int | None:
    """Minimal slack of one order, or None if some prefix is disconnected.

    A prefix chain is fully connected exactly when each added vertex has a
    neighbor among the earlier ones, so one incremental pass suffices.
    """
    k = len(order)
    mask = 1 << order[0]
    local_deg = {order[0]: 0}
    worst = 0
    for i in range(1, k):
        v = order[i]
        row = pbits[v] & mask
        if row == 0:
            return None
        mask |= 1 << v
        local_deg[v] = row.bit_count()
        w = row
        while w:
            low = w & -w
            local_deg[low.bit_length() - 1] += 1
            w ^= low
        level = i + 1
        deficit = (level - 1) - min(local_deg[u] for u in order[: i + 1])
        if deficit > worst:
            worst = deficit
    return worst


def auto_segment(pattern: Pattern) -> Segmentation:
    """Exhaustively pick the order minimizing the needed slack.

    Ties go to the lexicographically smallest order; permutations are
    visited in lexicographic order so the first strict improvement wins.
    """
    best_order: tuple[int, ...] | None = None
    best_slack: int | None = None
    for order in permutations(range(pattern.size)):
        s = _order_slack(pattern.bits, order)
        if s is None:
            continue
        if best_slack is None or s < best_slack:
            best_slack = s
            best_order = order
    if best_order is None:
        raise ValueError("pattern admits no connected insertion order")
    return Segmentation(pattern, best_order)


def induced_isomorphic(adj: Sequence[Sequence[int]], target: LevelGraph | Pattern) -> bool:
    """True when the given adjacency matrix matches the target up to relabeling.

    Edges and non-edges both have to agree.  A degree-multiset mismatch
    short-circuits before any permutation is tried.
    """
    if isinstance(target, Pattern):
        target = target.level_graph
    k = len(adj)
    if k != target.size:
        raise ValueError(
            f"dimension mismatch: adjacency is {k}x{k}, target has {target.size} vertices"
        )
    bits = [0] * k
    for i, row in enumerate(adj):
        if len(row) != k:
            raise ValueError("adjacency matrix must be square")
        for j, val in enumerate(row):
            if val:
                bits[i] |= 1 << j
    for i in range(k):
        if (bits[i] >> i) & 1:
            raise ValueError("adjacency matrix may not have self-loops")
        for j in range(i):
            if ((bits[i] >> j) & 1) != ((bits[j] >> i) & 1):
                raise ValueError("adjacency matrix must be symmetric")
    return _bits_isomorphic(bits, target)


_BUILTINS: dict[str, tuple[int, int, tuple[tuple[int, int], ...], tuple[int, ...]]] = {
    # name: (size, slack, edges, order)
    "g33": (3, 0, ((0, 1), (0, 2), (1, 2)), (0, 1, 2)),
    "g45": (4, 1, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)), (0, 1, 2, 3)),
    "g46": (4, 0, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (0, 1, 2, 3)),
    "g59": (
        5,
        1,
        ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)),
        (0, 1, 2, 3, 4),
    ),
    "g510": (
        5,
        0,
        ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)),
        (0, 1, 2, 3, 4),
    ),
}


def builtin_pattern(name: str) -> tuple[Pattern, Segmentation]:
    """Named library of small clique and near-clique patterns.

    g33: triangle.  g46: 4-clique.  g45: 4-clique minus an edge.
    g510: 5-clique.  g59: 5-clique minus an edge.
    """
    try:
        size, slack, edges, order = _BUILTINS[name]
    except KeyError:
        valid = ", ".join(sorted(_BUILTINS))
        raise ValueError(f"unknown pattern {name!r}; valid names: {valid}") from None
    p = Pattern(size, edges, slack=slack)
    return p, Segmentation(p, order)


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def parse_pattern(
    source: Iterable[str] | IO[str], strict: bool = True
) -> tuple[Pattern, Segmentation]:
    """Read a pattern file.

    Line 1 is ``k c``.  Line 2 may be ``order v_1 ... v_k``; if absent the
    order is chosen by :func:`auto_segment`.  Every other line is one edge
    ``a b`` on 0-based vertex ids.  '#' lines and blank lines are skipped.
    With ``strict`` set (the default) an order that cannot meet the declared
    slack is rejected; validators pass ``strict=False`` to inspect it anyway.
    """
    lines = []
    for raw in source:
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append(s)
    if not lines:
        raise ValueError("pattern file is empty")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("pattern file line 1 must be 'k c'")
    try:
        size, slack = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError("pattern file line 1 must be 'k c'") from None
    order: tuple[int, ...] | None = None
    rest = lines[1:]
    if rest and rest[0].split()[0] == "order":
        toks = rest[0].split()[1:]
        if len(toks) != size:
            raise ValueError(f"order line must list {size} vertices")
        order = tuple(int(t) for t in toks)
        rest = rest[1:]
    edges = []
    for s in rest:
        parts = s.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {s!r}")
        edges.append((int(parts[0]), int(parts[1])))
    p = Pattern(size, edges, slack=slack)
    seg = Segmentation(p, order) if order is not None else auto_segment(p)
    if strict:
        report = validate_segmentation(p, seg)
        if not report.ok:
            raise ValueError(
                f"segmentation has disconnected levels {report.disconnected_levels}"
            )
        if report.min_slack > slack:
            raise ValueError(
                f"order needs slack {report.min_slack}, but the pattern declares {slack}"
            )
    return p, seg


def load_pattern_path(path: str) -> tuple[Pattern, Segmentation]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pattern(fh)
