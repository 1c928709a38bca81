"""Shared graphs and independent reference implementations for tests.

The reference implementations here are deliberately naive (subset scans,
permutation checks, fraction-exact chain algebra) so that package code is
verified against something that cannot share its bugs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from random import Random

from crawlcount import Graph

# ---- named graphs ----


def triangle() -> Graph:
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


def path3() -> Graph:
    return Graph(3, [(0, 1), (1, 2)])


def star4() -> Graph:
    return Graph(4, [(0, 1), (0, 2), (0, 3)])


def k4() -> Graph:
    return Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


def k5() -> Graph:
    return Graph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])


def k6() -> Graph:
    return Graph(6, [(i, j) for i in range(6) for j in range(i + 1, 6)])


def c5() -> Graph:
    return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


def bowtie() -> Graph:
    """Two triangles sharing vertex 2."""
    return Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def diamond_graph() -> Graph:
    """One 4-clique missing the 2-3 edge."""
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


def bowtie_plus() -> Graph:
    """Bowtie with the extra 0-3 edge; has two diamonds."""
    return Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4), (0, 3)])


def tree7() -> Graph:
    return Graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])


# ---- deterministic random graphs (generation is ours, not a library's) ----


def er_graph(n: int, p: float, seed: int) -> Graph:
    rng = Random(seed)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def pa_graph(n: int, attach: int, seed: int) -> Graph:
    """Preferential attachment: each new vertex links to ``attach`` targets
    drawn proportionally to degree (repeated-endpoint urn), seeded start.
    """
    if n <= attach:
        raise ValueError("need more vertices than attachments")
    rng = Random(seed)
    edges: list[tuple[int, int]] = []
    urn: list[int] = list(range(attach))
    for v in range(attach, n):
        targets: set[int] = set()
        while len(targets) < attach:
            if urn:
                cand = urn[rng.randrange(len(urn))]
            else:
                cand = rng.randrange(v)
            targets.add(cand)
        for t in targets:
            edges.append((v, t))
            urn.append(v)
            urn.append(t)
    return Graph(n, edges)


def connected_er_graph(n: int, p: float, seed: int) -> Graph:
    """First seed at or above ``seed`` whose sample is connected."""
    s = seed
    while True:
        g = er_graph(n, p, s)
        if g.edge_count > 0 and is_connected(g):
            return g
        s += 1


def is_connected(g: Graph) -> bool:
    n = g.vertex_count
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.raw_neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


# ---- naive reference implementations ----


def naive_matrix(g: Graph, verts: tuple[int, ...]) -> list[list[int]]:
    return [
        [1 if a != b and g.has_edge(a, b) else 0 for b in verts] for a in verts
    ]


def matrices_isomorphic(a: list[list[int]], b: list[list[int]]) -> bool:
    if len(a) != len(b):
        return False
    n = len(a)
    for perm in permutations(range(n)):
        if all(
            a[i][j] == b[perm[i]][perm[j]] for i in range(n) for j in range(n)
        ):
            return True
    return False


def set_connected(g: Graph, verts: tuple[int, ...]) -> bool:
    vs = set(verts)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in g.raw_neighbors(v):
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def naive_copies(g: Graph, target_matrix: list[list[int]]) -> list[tuple[int, ...]]:
    """All connected induced copies of the target, by scanning every subset."""
    k = len(target_matrix)
    found = []
    for verts in combinations(range(g.vertex_count), k):
        if not set_connected(g, verts):
            continue
        if matrices_isomorphic(naive_matrix(g, verts), target_matrix):
            found.append(verts)
    return found


def brute_representative(g: Graph, verts: tuple[int, ...], slack: int) -> tuple[int, ...]:
    """Independent argmin over (slack+1)-subsets, first minimum wins."""
    best = None
    best_size = None
    for sub in combinations(sorted(verts), slack + 1):
        hood = set()
        for v in sub:
            hood |= set(g.raw_neighbors(v))
        if best_size is None or len(hood) < best_size:
            best = sub
            best_size = len(hood)
    return best


def brute_seg_degree(g: Graph, verts: tuple[int, ...], slack: int) -> int:
    rep = brute_representative(g, verts, slack)
    hood = set()
    for v in rep:
        hood |= set(g.raw_neighbors(v))
    return len(hood)


def brute_min_slack(size: int, edges, order) -> int | None:
    """Slack needed by one insertion order, recomputed from scratch."""
    eset = {tuple(sorted(e)) for e in edges}

    def adj(a, b):
        return tuple(sorted((a, b))) in eset

    worst = 0
    for i in range(2, size + 1):
        chosen = order[:i]
        comp = {chosen[0]}
        grew = True
        while grew:
            grew = False
            for a in chosen:
                if a not in comp and any(adj(a, b) for b in comp):
                    comp.add(a)
                    grew = True
        if len(comp) != i:
            return None
        mind = min(sum(1 for b in chosen if b != a and adj(a, b)) for a in chosen)
        worst = max(worst, (i - 1) - mind)
    return worst


def exact_walk_expectation(
    g: Graph, f2: dict[tuple[int, int], int], burn_in: int, length: int
) -> Fraction:
    """Exact E of (m/length) * sum of f2 over walk edges, uniform start.

    Transition-matrix powers in rational arithmetic; the independent route
    to the estimator's expectation for 3-vertex patterns.
    """
    n = g.vertex_count
    dist = [Fraction(1, n)] * n

    def step(d):
        out = [Fraction(0)] * n
        for v in range(n):
            if d[v] == 0:
                continue
            share = d[v] / g.raw_degree(v)
            for w in g.raw_neighbors(v):
                out[w] += share
        return out

    for _ in range(burn_in):
        dist = step(dist)
    total = Fraction(0)
    for _ in range(length):
        for v in range(n):
            if dist[v] == 0:
                continue
            share = dist[v] / g.raw_degree(v)
            for w in g.raw_neighbors(v):
                e = (v, w) if v < w else (w, v)
                total += share * f2.get(e, 0)
        dist = step(dist)
    return Fraction(g.edge_count, length) * total


def acceptance_corpus() -> list[tuple[str, Graph]]:
    """The named-plus-seeded graph collection the acceptance criteria sweep."""
    graphs: list[tuple[str, Graph]] = [
        ("triangle", triangle()),
        ("path3", path3()),
        ("star4", star4()),
        ("k4", k4()),
        ("k5", k5()),
        ("k6", k6()),
        ("c5", c5()),
        ("bowtie", bowtie()),
        ("bowtie_plus", bowtie_plus()),
        ("diamond", diamond_graph()),
        ("tree7", tree7()),
    ]
    for idx, (n, p) in enumerate(
        [(12, 0.3), (15, 0.25), (18, 0.25), (20, 0.2), (22, 0.2), (25, 0.18),
         (25, 0.3), (30, 0.15), (35, 0.12), (40, 0.1)]
    ):
        graphs.append((f"er{idx}", er_graph(n, p, seed=100 + idx)))
    return graphs
