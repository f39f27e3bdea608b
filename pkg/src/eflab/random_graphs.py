"""Sparse G(n, p) sampling and Monte Carlo experiments.

Every trial draws from its own Philox stream seeded by ``(seed, trial)``,
so results do not depend on the order in which trials are run.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .graphs import (
    Graph,
    automorphism_count,
    connected_components,
    count_copies,
    is_strictly_balanced,
    is_tree,
    tree_canonical_code,
)

__all__ = [
    "SampleConfig",
    "CensusReport",
    "TReport",
    "PoissonReport",
    "ContainmentReport",
    "RegimeWarning",
    "trial_rng",
    "sample",
    "sample_edges",
    "component_census",
    "verify_T_properties",
    "poisson_experiment",
    "containment_probability",
    "connectivity_frequency",
    "connectivity_trials",
    "falling_factorial",
]

GENERATOR = "numpy.Philox(SeedSequence([seed, trial]))"


class RegimeWarning(UserWarning):
    """The edge exponent lies outside the regime a check is meant for."""


@dataclass(frozen=True)
class SampleConfig:
    n: int
    alpha: float | None = None
    p: float | None = None
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if (self.alpha is None) == (self.p is None):
            raise ValueError("give exactly one of alpha and p")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError(f"edge probability {self.edge_probability} outside [0, 1]")

    @property
    def edge_probability(self) -> float:
        if self.p is not None:
            return float(self.p)
        return float(self.n) ** (-float(self.alpha))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "p": self.edge_probability,
            "seed": self.seed,
            "trials": self.trials,
            "generator": GENERATOR,
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


def _decode_pairs(idx: np.ndarray) -> np.ndarray:
    # pair (u, v) with u < v sits at index v(v-1)/2 + u
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    base = v * (v - 1) // 2
    v = np.where(base > idx, v - 1, v)
    base = v * (v - 1) // 2
    v = np.where(idx - base >= v, v + 1, v)
    base = v * (v - 1) // 2
    return np.stack([idx - base, v], axis=1)


def sample_edges(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Edges of G(n, p) as an ``(m, 2)`` array, sampled with geometric skips
    over the linearised pair index."""
    total = n * (n - 1) // 2
    if total == 0 or p <= 0.0:
        return np.zeros((0, 2), dtype=np.int64)
    if p >= 1.0:
        return _decode_pairs(np.arange(total, dtype=np.int64))
    chunks = []
    pos = -1
    batch = int(total * p + 5 * math.sqrt(total * p) + 16)
    while True:
        # numpy saturates huge gaps at the int64 maximum; anything past the
        # end is equivalent, and clipping keeps the running sum from wrapping
        gaps = np.minimum(rng.geometric(p, size=batch), total + 1).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            chunks.append(idx[idx < total])
            break
        chunks.append(idx)
        pos = int(idx[-1])
    return _decode_pairs(np.concatenate(chunks))


def sample(config: SampleConfig, trial: int = 0) -> Graph:
    """One draw of G(n, p) for the given trial index."""
    edges = sample_edges(config.n, config.edge_probability, trial_rng(config.seed, trial))
    return Graph(config.n, frozenset(map(tuple, edges.tolist())))


# ---------------------------------------------------------------------------
# census


@dataclass
class CensusReport:
    """Components of one graph.  ``counts`` maps a tree canonical code to
    its number of components; components with cycles are listed by order
    in ``non_tree_orders``."""

    n: int
    counts: dict
    non_tree_orders: list
    representatives: dict = field(repr=False, default_factory=dict)

    @property
    def is_forest(self) -> bool:
        return not self.non_tree_orders

    @property
    def max_component_order(self) -> int:
        orders = [len(c) // 2 for c in self.counts] + list(self.non_tree_orders)
        return max(orders, default=0)

    @property
    def component_count(self) -> int:
        return sum(self.counts.values()) + len(self.non_tree_orders)

    def contains(self, code: bytes) -> bool:
        return self.counts.get(code, 0) > 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "is_forest": self.is_forest,
            "max_component_order": self.max_component_order,
            "counts": {c.decode(): m for c, m in sorted(self.counts.items())},
            "non_tree_orders": sorted(self.non_tree_orders),
        }


def _find(parent: list, x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def component_census(g: Graph) -> CensusReport:
    """Tree census via union-find over the edges; isolated vertices are
    counted without building components."""
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
    groups: dict[int, list[int]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    edges_in: Counter = Counter()
    for u, _ in g.edges:
        edges_in[find(u)] += 1
    counts: Counter = Counter()
    reps: dict = {}
    non_tree = []
    for root, verts in groups.items():
        if edges_in[root] != len(verts) - 1:
            non_tree.append(len(verts))
            continue
        comp = g.induced(sorted(verts))
        code = tree_canonical_code(comp)
        counts[code] += 1
        reps.setdefault(code, comp)
    isolated = g.vertex_count - len(parent)
    if isolated:
        k1 = Graph(1, frozenset())
        code = tree_canonical_code(k1)
        counts[code] += isolated
        reps.setdefault(code, k1)
    return CensusReport(g.vertex_count, dict(counts), non_tree, reps)


# ---------------------------------------------------------------------------
# structural properties of the sparse regime


@dataclass
class TReport:
    config: SampleConfig
    l: int
    forest: list
    small_components: list
    min_tree_count: list
    in_regime: bool

    @property
    def forest_frequency(self) -> float:
        return sum(self.forest) / len(self.forest)

    @property
    def small_frequency(self) -> float:
        return sum(self.small_components) / len(self.small_components)

    def rows(self) -> list[dict]:
        return [
            {"trial": i, "forest": int(a), "small_components": int(b), "min_tree_count": c}
            for i, (a, b, c) in enumerate(zip(self.forest, self.small_components, self.min_tree_count))
        ]

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "l": self.l,
            "in_regime": self.in_regime,
            "forest_frequency": self.forest_frequency,
            "small_component_frequency": self.small_frequency,
            "min_tree_count_min": min(self.min_tree_count),
            "min_tree_count_mean": sum(self.min_tree_count) / len(self.min_tree_count),
        }


def _t3_regime(alpha: float, l: int) -> bool:
    return 1 + 1 / (l + 1) < alpha < 1 + 1 / l


def verify_T_properties(config: SampleConfig, l: int) -> TReport:
    """Per trial: is the graph a forest, are all components of order at most
    ``l + 1``, and the smallest number of copies (as components) of any tree
    on at most ``l + 1`` vertices."""
    from .constructions import enumerate_trees

    if l < 1:
        raise ValueError("l must be positive")
    alpha = config.alpha
    in_regime = alpha is not None and _t3_regime(alpha, l)
    if not in_regime:
        warnings.warn(
            f"alpha={alpha} is outside ({1 + 1 / (l + 1):.4g}, {1 + 1 / l:.4g}) for l={l}",
            RegimeWarning,
            stacklevel=2,
        )
    codes = [tree_canonical_code(t) for t in enumerate_trees(l + 1).trees]
    forest, small, mins = [], [], []
    for trial in range(config.trials):
        census = component_census(sample(config, trial))
        forest.append(census.is_forest)
        small.append(census.max_component_order <= l + 1)
        mins.append(min(census.counts.get(c, 0) for c in codes))
    return TReport(config, l, forest, small, mins, in_regime)


# ---------------------------------------------------------------------------
# Poisson limit


def falling_factorial(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _poisson_pmf(lam: float, k: int) -> float:
    if lam == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))


@dataclass
class PoissonReport:
    pattern: Graph
    c: float
    n: int
    trials: int
    seed: int
    p: float
    counts: list
    automorphisms: int
    target_mean: float
    exact_mean: float

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.counts).items()))

    @property
    def mean(self) -> float:
        return sum(self.counts) / self.trials

    @property
    def variance(self) -> float:
        m = self.mean
        return sum((x - m) ** 2 for x in self.counts) / max(self.trials - 1, 1)

    @property
    def standard_error(self) -> float:
        """Standard error of the mean; uses the exact mean as the Poisson
        variance when the sample variance is degenerate."""
        var = max(self.variance, self.exact_mean)
        return math.sqrt(var / self.trials)

    def mean_z(self) -> float:
        se = self.standard_error
        return 0.0 if se == 0 else (self.mean - self.exact_mean) / se

    def total_variation(self) -> float:
        """TV distance to Poisson(target) over {0..max observed}, with the
        Poisson tail beyond the largest observation counted as mismatch."""
        top = max(self.counts, default=0)
        hist = self.histogram
        tv = 0.0
        mass = 0.0
        for k in range(top + 1):
            q = _poisson_pmf(self.target_mean, k)
            mass += q
            tv += abs(hist.get(k, 0) / self.trials - q)
        tv += max(0.0, 1.0 - mass)
        return tv / 2

    def rows(self) -> list[dict]:
        return [{"trial": i, "count": c} for i, c in enumerate(self.counts)]

    def to_json(self) -> dict:
        return {
            "pattern_vertices": self.pattern.vertex_count,
            "pattern_edges": self.pattern.edge_count,
            "automorphisms": self.automorphisms,
            "c": self.c,
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in self.histogram.items()},
            "target_mean": self.target_mean,
            "exact_mean": self.exact_mean,
            "empirical_mean": self.mean,
            "empirical_variance": self.variance,
            "mean_z": self.mean_z(),
            "total_variation": self.total_variation(),
        }


def _copies_by_component(g: Graph, pattern: Graph) -> int:
    """Copies of a connected pattern, counted inside each component of ``g``
    that has at least as many vertices as the pattern."""
    census_parent: dict[int, int] = {}
    for u, v in g.edges:
        census_parent.setdefault(u, u)
        census_parent.setdefault(v, v)
        a, b = _find(census_parent, u), _find(census_parent, v)
        if a != b:
            census_parent[a] = b
    groups: dict[int, list[int]] = {}
    for v in census_parent:
        groups.setdefault(_find(census_parent, v), []).append(v)
    total = 0
    for verts in groups.values():
        if len(verts) >= pattern.vertex_count:
            total += count_copies(g.induced(sorted(verts)), pattern)
    return total


def poisson_experiment(pattern: Graph, c: float, n: int, trials: int, seed: int = 0) -> PoissonReport:
    """Copy counts of a strictly balanced pattern in G(n, c n^(-v/e))."""
    v, e = pattern.vertex_count, pattern.edge_count
    if e == 0:
        raise ValueError("pattern needs at least one edge")
    if not is_strictly_balanced(pattern):
        raise ValueError("pattern is not strictly balanced")
    p = c * float(n) ** (-v / e)
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    aut = automorphism_count(pattern, brute_force_limit=0 if is_tree(pattern) else 8)
    config = SampleConfig(n, p=p, seed=seed, trials=trials)
    connected = len(connected_components(pattern)) == 1
    counts = []
    for t in range(trials):
        g = sample(config, t)
        counts.append(_copies_by_component(g, pattern) if connected else count_copies(g, pattern))
    target = c**e / aut
    exact = falling_factorial(n, v) / aut * p**e
    return PoissonReport(pattern, c, n, trials, seed, p, counts, aut, target, exact)


# ---------------------------------------------------------------------------
# containment and connectivity


@dataclass
class ContainmentReport:
    l: int
    tree: Graph
    n: int
    trials: int
    seed: int
    hits: list
    automorphisms: int

    @property
    def frequency(self) -> float:
        return sum(self.hits) / self.trials

    @property
    def standard_error(self) -> float:
        f = self.frequency
        return math.sqrt(max(f * (1 - f), 1e-12) / self.trials)

    @property
    def target(self) -> float:
        return 1 - math.exp(-1 / self.automorphisms)

    def rows(self) -> list[dict]:
        return [{"trial": i, "contains": int(h)} for i, h in enumerate(self.hits)]

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "alpha": 1 + 1 / self.l,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "automorphisms": self.automorphisms,
            "frequency": self.frequency,
            "standard_error": self.standard_error,
            "target": self.target,
        }


def containment_probability(l: int, tree: Graph, n: int, trials: int, seed: int = 0) -> ContainmentReport:
    """Frequency with which G(n, n^(-1-1/l)) has a component isomorphic to
    ``tree`` (a tree on ``l + 1`` vertices)."""
    if l < 1:
        raise ValueError("l must be positive")
    if not is_tree(tree):
        raise ValueError("pattern must be a tree")
    if tree.vertex_count != l + 1:
        raise ValueError(f"tree has {tree.vertex_count} vertices, expected l + 1 = {l + 1}")
    code = tree_canonical_code(tree)
    config = SampleConfig(n, alpha=1 + 1 / l, seed=seed, trials=trials)
    hits = [component_census(sample(config, t)).contains(code) for t in range(trials)]
    return ContainmentReport(l, tree, n, trials, seed, hits, automorphism_count(tree))


def _connected(n: int, edges: np.ndarray) -> bool:
    if n <= 1:
        return True
    if len(edges) < n - 1:
        return False
    parent = list(range(n))
    pieces = n
    for u, v in edges.tolist():
        a, b = _find(parent, u), _find(parent, v)
        if a != b:
            parent[a] = b
            pieces -= 1
            if pieces == 1:
                return True
    return pieces == 1


def connectivity_trials(config: SampleConfig) -> list[bool]:
    return [
        _connected(config.n, sample_edges(config.n, config.edge_probability, trial_rng(config.seed, t)))
        for t in range(config.trials)
    ]


def connectivity_frequency(config: SampleConfig) -> float:
    """Fraction of trials in which G(n, p) is connected."""
    hits = connectivity_trials(config)
    return sum(hits) / len(hits)
