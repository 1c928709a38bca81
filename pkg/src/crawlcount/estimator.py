"""Layered sampling estimator for pattern counts over the metered oracle.

The sampler materializes a chain of layers.  Level 2 is the multiset of
edges collected by a random walk.  Each next level is filled by repeated
trials: pick a member with probability proportional to its weight (the
size of its representative neighborhood), pick a uniform vertex from that
neighborhood, and keep the grown instance only if it is a copy of the next
level whose assignment maps back to the sampled member.  The last level is
never stored; its trials only count successes Y.

Every accepted instance at a given level is reachable by exactly one
(member, vertex) pair, so a single trial lands on any fixed copy with
probability 1 / c_i, where the scaling constant c_i is the walk and layer
normalization.  That makes Y * c_k / l_k an unbiased estimate of the total
pattern count, degenerate early exits included (they contribute zero).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import accumulate
from random import Random
from typing import Sequence

from .graph import Graph, QueryLedger, edges_observed_fraction
from .instances import Instance, check_extension, seg_degree, seg_neighborhood
from .patterns import Pattern, Segmentation, validate_segmentation
from .walk import WalkConfig, default_burn_in, estimate_edge_count, simple_random_walk


class DegenerateLayerError(ValueError):
    """Sampling from a layer with zero total weight."""


@dataclass
class LayerState:
    """One materialized layer: members with cached weights and prefix sums."""

    level: int
    members: list[Instance]
    member_degrees: list[int]
    total_degree: int
    prefix_weights: list[int]
    trials: int

    @staticmethod
    def build(level: int, members: list[Instance], degrees: list[int], trials: int) -> "LayerState":
        prefix = list(accumulate(degrees))
        total = prefix[-1] if prefix else 0
        return LayerState(
            level=level,
            members=members,
            member_degrees=degrees,
            total_degree=total,
            prefix_weights=prefix,
            trials=trials,
        )

    def __len__(self) -> int:
        return len(self.members)


def _sample_index(layer: LayerState, rng: Random) -> int:
    if layer.total_degree <= 0:
        raise DegenerateLayerError(f"degenerate layer at level {layer.level}")
    x = rng.randrange(layer.total_degree)
    return bisect_right(layer.prefix_weights, x)


def weighted_sample(layer: LayerState, rng: Random) -> Instance:
    """Draw a member with probability proportional to its weight."""
    return layer.members[_sample_index(layer, rng)]


@dataclass
class EstimateConfig:
    """Knobs for one estimation run.

    ``layer_sizes`` lists the trial counts l_3..l_k, so its length must be
    pattern size minus 2.  ``epsilon`` feeds sample-size recommendations
    and niceness reports only; the estimator itself never reads it.
    """

    layer_sizes: Sequence[int]
    walk: WalkConfig
    edge_count_mode: str = "exact-m"
    epsilon: float = 0.5
    seed: int = 0
    edge_count_samples: int | None = None
    edge_count_gap: int = 10

    def __post_init__(self) -> None:
        if self.edge_count_mode not in ("exact-m", "estimated-m"):
            raise ValueError("edge_count_mode must be 'exact-m' or 'estimated-m'")
        if any(l < 1 for l in self.layer_sizes):
            raise ValueError("every layer size must be at least 1")


def _derive_seeds(cfg: EstimateConfig) -> tuple[int, int, int]:
    root = Random(cfg.seed)
    walk_seed = root.getrandbits(63)
    trial_seed = root.getrandbits(63)
    edge_seed = root.getrandbits(63)
    return walk_seed, trial_seed, edge_seed


def _check_setup(g: Graph, pattern: Pattern, seg: Segmentation, cfg: EstimateConfig) -> None:
    if len(cfg.layer_sizes) != pattern.size - 2:
        raise ValueError(
            f"pattern of size {pattern.size} needs {pattern.size - 2} layer sizes "
            f"(l_3..l_{pattern.size}), got {len(cfg.layer_sizes)}"
        )
    if pattern.slack >= 2:
        raise ValueError(
            "slack >= 2 is outside the sampler's reach: a 2-vertex instance "
            "has no representative subset of that size"
        )
    report = validate_segmentation(pattern, seg)
    if not report.ok:
        raise ValueError(
            f"segmentation has disconnected levels {report.disconnected_levels}"
        )
    if report.min_slack > pattern.slack:
        raise ValueError(
            f"segmentation needs slack {report.min_slack}, pattern declares {pattern.slack}"
        )


def initial_layer(
    g: Graph, ledger: QueryLedger, edges: Sequence[tuple[int, int]], slack: int
) -> LayerState:
    """Wrap walk edges (a multiset, order preserved) as the level-2 layer."""
    members = [Instance(e) for e in edges]
    cache: dict[tuple[int, ...], int] = {}
    degrees = []
    for inst in members:
        d = cache.get(inst.vertices)
        if d is None:
            d = seg_degree(g, ledger, inst, slack)
            cache[inst.vertices] = d
        degrees.append(d)
    return LayerState.build(2, members, degrees, trials=len(members))


def _trial(
    g: Graph,
    ledger: QueryLedger,
    layer: LayerState,
    seg: Segmentation,
    rng: Random,
    hood_cache: dict[tuple[int, ...], tuple[int, ...]],
) -> Instance | None:
    """One extension trial; returns the accepted instance or None."""
    idx = _sample_index(layer, rng)
    member = layer.members[idx]
    hood = hood_cache.get(member.vertices)
    if hood is None:
        hood = seg_neighborhood(g, ledger, member, seg.pattern.slack)
        hood_cache[member.vertices] = hood
    assert len(hood) == layer.member_degrees[idx]
    u = hood[rng.randrange(len(hood))]
    return check_extension(g, ledger, member, u, seg)


def final_level_successes(
    g: Graph,
    ledger: QueryLedger,
    layer: LayerState,
    seg: Segmentation,
    trials: int,
    rng: Random,
    hood_cache: dict[tuple[int, ...], tuple[int, ...]] | None = None,
) -> int:
    """Run the last-level loop against a frozen layer and count successes."""
    if hood_cache is None:
        hood_cache = {}
    hits = 0
    for _ in range(trials):
        if _trial(g, ledger, layer, seg, rng, hood_cache) is not None:
            hits += 1
    return hits


@dataclass
class LayerBuild:
    """Everything a build produced: layers 2..k-1, final successes, ledger."""

    layers: list[LayerState]
    successes: int
    final_trials: int
    ledger: QueryLedger
    warnings: list[str] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return bool(self.warnings)


def build_layers(
    g: Graph,
    pattern: Pattern,
    seg: Segmentation,
    cfg: EstimateConfig,
    ledger: QueryLedger | None = None,
) -> LayerBuild:
    """Walk, then grow layers 3..k-1, then run the final counting loop.

    A layer that ends up empty stops the build with zero successes and a
    warning; that outcome is a legitimate sample, not an error.
    """
    _check_setup(g, pattern, seg, cfg)
    if ledger is None:
        ledger = QueryLedger()
    k = pattern.size
    walk_seed, trial_seed, _ = _derive_seeds(cfg)
    wcfg = cfg.walk if cfg.walk.seed is not None else replace(cfg.walk, seed=walk_seed)
    edges = simple_random_walk(g, ledger, wcfg)
    rng = Random(trial_seed)
    hood_cache: dict[tuple[int, ...], tuple[int, ...]] = {}

    layers = [initial_layer(g, ledger, edges, pattern.slack)]
    warnings: list[str] = []
    final_trials = cfg.layer_sizes[-1]
    for level in range(3, k):
        trials = cfg.layer_sizes[level - 3]
        cur = layers[-1]
        if cur.total_degree <= 0:
            warnings.append(f"degenerate layer at level {cur.level}")
            return LayerBuild(layers, 0, final_trials, ledger, warnings)
        members: list[Instance] = []
        for _ in range(trials):
            got = _trial(g, ledger, cur, seg, rng, hood_cache)
            if got is not None:
                members.append(got)
        degrees = []
        dcache: dict[tuple[int, ...], int] = {}
        for inst in members:
            d = dcache.get(inst.vertices)
            if d is None:
                d = seg_degree(g, ledger, inst, pattern.slack)
                dcache[inst.vertices] = d
            degrees.append(d)
        layers.append(LayerState.build(level, members, degrees, trials=trials))

    last = layers[-1]
    if last.total_degree <= 0:
        warnings.append(f"degenerate layer at level {last.level}")
        return LayerBuild(layers, 0, final_trials, ledger, warnings)
    successes = final_level_successes(
        g, ledger, last, seg, final_trials, rng, hood_cache
    )
    return LayerBuild(layers, successes, final_trials, ledger, warnings)


def scaling_constant(
    level: int,
    edge_total: int | float,
    walk_length: int,
    layer_sizes: Sequence[int],
    layer_degrees: Sequence[int],
) -> Fraction:
    """Exact normalization constant c_i for the given realized layer degrees.

    c_i = (m / walk_length) * product over j in 3..i-1 of (D_{j-1} / l_j)
    times D_{i-1}.  ``layer_sizes`` holds l_3..l_{i-1} and ``layer_degrees``
    holds D_2..D_{i-1}.  Kept as a Fraction so the recursion
    c_i = c_{i-1} * D_{i-1} / l_{i-1} is an exact identity.
    """
    if level < 3:
        raise ValueError("scaling constant is defined for levels 3 and up")
    if walk_length < 1:
        raise ValueError("walk length must be positive")
    if edge_total <= 0:
        raise ValueError("edge total must be positive")
    need_sizes = level - 3
    need_degrees = level - 2
    if len(layer_sizes) != need_sizes:
        raise ValueError(f"expected {need_sizes} layer sizes l_3..l_{level - 1}")
    if len(layer_degrees) != need_degrees:
        raise ValueError(f"expected {need_degrees} layer degrees D_2..D_{level - 1}")
    if any(d <= 0 for d in layer_degrees):
        raise ValueError("zero layer degree: the scaling constant is undefined")
    if any(l < 1 for l in layer_sizes):
        raise ValueError("layer sizes must be positive")
    c = Fraction(edge_total) / walk_length
    for j in range(3, level):
        c = c * layer_degrees[j - 3] / layer_sizes[j - 3]
    return c * layer_degrees[level - 3]


@dataclass(frozen=True)
class LayerDiagnostic:
    level: int
    size: int
    total_degree: int | None
    trials: int
    acceptance_rate: float | None


@dataclass
class EstimateResult:
    """Outcome of one estimation run plus the cost of obtaining it."""

    estimate: float
    successes: int
    scaling: float | None
    final_trials: int
    walk_length: int
    edge_total_used: float
    per_layer: list[LayerDiagnostic]
    oracle_calls: int
    edges_observed: float
    warnings: list[str]
    ledger: QueryLedger


def estimate_count(
    g: Graph, pattern: Pattern, seg: Segmentation, cfg: EstimateConfig
) -> EstimateResult:
    """One full estimation run: walk, layers, final loop, normalization."""
    _check_setup(g, pattern, seg, cfg)
    ledger = QueryLedger()
    _, _, edge_seed = _derive_seeds(cfg)
    if cfg.edge_count_mode == "exact-m":
        edge_total: float = float(g.edge_count)
    else:
        n = g.vertex_count
        samples = cfg.edge_count_samples
        if samples is None:
            samples = max(200, math.ceil(10 * math.sqrt(n)))
        est = estimate_edge_count(
            g, ledger, samples, cfg.edge_count_gap, seed=edge_seed
        )
        edge_total = est.edge_estimate

    build = build_layers(g, pattern, seg, cfg, ledger=ledger)
    k = pattern.size
    diags = [
        LayerDiagnostic(
            level=ls.level,
            size=len(ls),
            total_degree=ls.total_degree,
            trials=ls.trials,
            acceptance_rate=None if ls.level == 2 else len(ls) / ls.trials,
        )
        for ls in build.layers
    ]
    warnings = list(build.warnings)
    if build.degenerate:
        estimate = 0.0
        scaling = None
    else:
        degrees = [ls.total_degree for ls in build.layers]
        sizes = list(cfg.layer_sizes[: k - 3])
        c_k = scaling_constant(k, edge_total, cfg.walk.length, sizes, degrees)
        scaling = float(c_k)
        estimate = float(Fraction(build.successes) * c_k / build.final_trials)
    diags.append(
        LayerDiagnostic(
            level=k,
            size=build.successes,
            total_degree=None,
            trials=build.final_trials,
            acceptance_rate=(
                build.successes / build.final_trials if not build.degenerate else None
            ),
        )
    )
    return EstimateResult(
        estimate=estimate,
        successes=build.successes,
        scaling=scaling,
        final_trials=build.final_trials,
        walk_length=cfg.walk.length,
        edge_total_used=edge_total,
        per_layer=diags,
        oracle_calls=ledger.oracle_calls,
        edges_observed=edges_observed_fraction(ledger, g),
        warnings=warnings,
        ledger=ledger,
    )


@dataclass(frozen=True)
class SampleSizeRecommendation:
    walk_length: int
    layer_sizes: dict[int, int]


def recommend_sample_sizes(
    n: int,
    m: int,
    alpha: int,
    c: int,
    k: int,
    eps: float,
    t_guess: float,
    fmax_guess: float,
) -> SampleSizeRecommendation:
    """Advisory trial counts under which layers stay representative whp.

    Middle layers: l_i >= (ln n)^3 / (eps^3 (1-eps)^i) * F * 2m * n^c
    * ((c+1) alpha)^(i-(c+1)) / T.  Final layer swaps the (ln n)^3 * F
    factor for 3 (ln n)^2.  Walk length: tau_mix + tau_rel * (ln n / eps^2)
    * F * m / T, with both tau values defaulting to ceil(10 log2 n).
    These are ceilings to aim for, not enforced minimums.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    if n < 2 or m < 1:
        raise ValueError("graph must have at least 2 vertices and 1 edge")
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if k < 3:
        raise ValueError("pattern size must be at least 3")
    if c < 0:
        raise ValueError("slack must be nonnegative")
    if t_guess <= 0:
        raise ValueError("t_guess must be positive")
    if fmax_guess < 1:
        raise ValueError("fmax_guess must be at least 1")
    ln = math.log(n)
    base = 2.0 * m * (n**c)
    sizes: dict[int, int] = {}
    for i in range(3, k):
        val = (
            (ln**3)
            / (eps**3 * (1 - eps) ** i)
            * fmax_guess
            * base
            * ((c + 1) * alpha) ** (i - (c + 1))
            / t_guess
        )
        sizes[i] = max(1, math.ceil(val))
    final = (
        3
        * (ln**2)
        / (eps**3 * (1 - eps) ** k)
        * base
        * ((c + 1) * alpha) ** (k - (c + 1))
        / t_guess
    )
    sizes[k] = max(1, math.ceil(final))
    tau = math.ceil(10 * math.log2(n))
    walk = tau + tau * (ln / eps**2) * (fmax_guess * m / t_guess)
    return SampleSizeRecommendation(
        walk_length=max(1, math.ceil(walk)), layer_sizes=sizes
    )


@dataclass(frozen=True)
class LayerNiceness:
    """Diagnostic verdicts for one realized layer.

    ``nice_range`` asks whether the layer's share of assignment chains sits
    inside (1 +/- eps)^i of its expectation; ``nice_ratio`` asks whether
    chains per unit of sampling weight did not collapse.
    """

    level: int
    f_value: int
    range_low: float
    range_high: float
    nice_range: bool
    ratio_lhs: float
    ratio_rhs: float
    nice_ratio: bool

    @property
    def nice(self) -> bool:
        return self.nice_range and self.nice_ratio


def niceness_report(
    g: Graph,
    pattern: Pattern,
    seg: Segmentation,
    layers: Sequence[LayerState],
    profile,
    eps: float,
) -> list[LayerNiceness]:
    """Judge realized layers against exact chain counts.

    Needs a full CountProfile; this is a verification tool for graphs small
    enough to enumerate, not part of the estimator proper.
    """
    from .oracle import seg_degree_total

    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    if not layers:
        raise ValueError("no layers to report on")
    t = profile.total
    m = g.edge_count
    ln_n = math.log(max(g.vertex_count, 2))
    walk_length = layers[0].trials
    out = []
    for pos, layer in enumerate(layers):
        i = layer.level
        table = profile.f_tables.get(i)
        if table is None:
            raise ValueError(f"profile is missing exact chain counts for level {i}")
        f_val = sum(table.get(inst.vertices, 0) for inst in layer.members)
        if i == 2:
            factor = Fraction(walk_length, m)
        else:
            sizes = [layers[p].trials for p in range(1, pos)]  # l_3..l_{i-1}
            degrees = [layers[p].total_degree for p in range(pos)]  # D_2..D_{i-1}
            c_i = scaling_constant(i, m, walk_length, sizes, degrees)
            factor = Fraction(layer.trials) / c_i
        range_low = (1 - eps) ** i * float(factor) * t
        range_high = (1 + eps) ** i * float(factor) * t
        nice_range = range_low <= f_val <= range_high
        degtotal = seg_degree_total(g, pattern, seg, i)
        ratio_lhs = f_val / layer.total_degree if layer.total_degree > 0 else 0.0
        ratio_rhs = (
            (1 - eps) ** i * (eps / ln_n) * (t / degtotal) if degtotal > 0 else 0.0
        )
        nice_ratio = ratio_lhs >= ratio_rhs
        out.append(
            LayerNiceness(
                level=i,
                f_value=f_val,
                range_low=range_low,
                range_high=range_high,
                nice_range=nice_range,
                ratio_lhs=ratio_lhs,
                ratio_rhs=ratio_rhs,
                nice_ratio=nice_ratio,
            )
        )
    return out
