"""Random walks over the metered oracle, plus collision-based edge counting.

A long enough walk visits each edge with probability 1/m per step, which
is what makes walk edges usable as near-uniform edge samples.  The same
fact powers the edge-count estimator: among s spaced samples the expected
number of colliding pairs is close to C(s, 2) / m.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from random import Random

from .graph import Graph, QueryLedger, neighbors


class CollisionShortfallError(RuntimeError):
    """Raised when repeated sample doubling still yields zero collisions."""


def default_burn_in(n: int) -> int:
    """Heuristic mixing allowance: ceil(10 * log2 n)."""
    if n < 2:
        return 0
    return math.ceil(10 * math.log2(n))


@dataclass
class WalkConfig:
    """Parameters of one walk.

    ``burn_in`` of None means the size-based default.  ``seed`` of None
    lets the caller derive one; the walk itself requires a concrete seed.
    ``lazy`` makes the walk stay put with probability 1/2 each step, which
    trades speed for aperiodicity on near-bipartite graphs.
    """

    length: int
    seed: int | None = None
    burn_in: int | None = None
    start: int | None = None
    lazy: bool = False

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("walk length must be at least 1")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")


def _pick_start(g: Graph, rng: Random, start: int | None) -> int:
    if g.edge_count == 0:
        raise ValueError("graph has no edges; every vertex is isolated")
    v = start if start is not None else rng.randrange(g.vertex_count)
    while g.raw_degree(v) == 0:
        v = rng.randrange(g.vertex_count)
    return v


def simple_random_walk(
    g: Graph, ledger: QueryLedger, cfg: WalkConfig
) -> list[tuple[int, int]]:
    """Run the walk and return the last ``length`` traversed edges, in order.

    Every step issues exactly one neighbors query, so with ``lazy`` off the
    ledger grows by burn_in + length calls.  Isolated start vertices are
    resampled before the walk begins (setup, not crawling).
    """
    if cfg.seed is None:
        raise ValueError("walk requires a concrete seed")
    rng = Random(cfg.seed)
    burn = cfg.burn_in if cfg.burn_in is not None else default_burn_in(g.vertex_count)
    cur = _pick_start(g, rng, cfg.start)
    for _ in range(burn):
        nbrs = neighbors(g, ledger, cur)
        if cfg.lazy and rng.random() < 0.5:
            continue
        cur = nbrs[rng.randrange(len(nbrs))]
    edges: list[tuple[int, int]] = []
    while len(edges) < cfg.length:
        nbrs = neighbors(g, ledger, cur)
        if cfg.lazy and rng.random() < 0.5:
            continue
        nxt = nbrs[rng.randrange(len(nbrs))]
        edges.append((cur, nxt) if cur < nxt else (nxt, cur))
        cur = nxt
    return edges


@dataclass(frozen=True)
class EdgeCountEstimate:
    """Result of collision counting: the estimate plus how it was earned."""

    edge_estimate: float
    samples_used: int
    collisions: int
    attempts: int


def estimate_edge_count(
    g: Graph,
    ledger: QueryLedger,
    samples: int,
    spacing: int,
    seed: int,
    burn_in: int | None = None,
    start: int | None = None,
    max_attempts: int = 6,
) -> EdgeCountEstimate:
    """Estimate the edge count from colliding walk samples.

    Takes one edge sample every ``spacing`` steps and counts unordered
    sample pairs that hit the same edge.  With X collisions among s samples
    the estimate is C(s, 2) / X.  Zero collisions double the sample count
    and continue the walk, up to ``max_attempts`` rounds.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if spacing < 1:
        raise ValueError("spacing must be at least 1")
    rng = Random(seed)
    burn = burn_in if burn_in is not None else default_burn_in(g.vertex_count)
    cur = _pick_start(g, rng, start)
    for _ in range(burn):
        nbrs = neighbors(g, ledger, cur)
        cur = nbrs[rng.randrange(len(nbrs))]

    counts: Counter[tuple[int, int]] = Counter()
    taken = 0
    target = samples
    attempts = 0
    while True:
        attempts += 1
        while taken < target:
            for _ in range(spacing):
                nbrs = neighbors(g, ledger, cur)
                nxt = nbrs[rng.randrange(len(nbrs))]
                edge = (cur, nxt) if cur < nxt else (nxt, cur)
                cur = nxt
            counts[edge] += 1
            taken += 1
        collisions = sum(c * (c - 1) // 2 for c in counts.values())
        if collisions > 0:
            pairs = taken * (taken - 1) // 2
            return EdgeCountEstimate(
                edge_estimate=pairs / collisions,
                samples_used=taken,
                collisions=collisions,
                attempts=attempts,
            )
        if attempts >= max_attempts:
            raise CollisionShortfallError(
                f"no collisions after {attempts} rounds ({taken} samples); "
                "the graph is likely far larger than the sample budget"
            )
        target *= 2
