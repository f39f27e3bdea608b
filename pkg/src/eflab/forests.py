"""Forests as multisets of component classes.

A disjoint union is determined up to ``k``-equivalence by the classes of
its components, and each multiplicity only matters up to a threshold
beyond which extra copies are invisible.  A :class:`ForestSignature`
records exactly that: component class ids with multiplicities capped.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .game import FO, GRAPH, GameEngine, SizeGuardError, _check_logic, default_engine
from .graphs import Forest, Graph, components, disjoint_union, is_tree, tree_canonical_code

__all__ = [
    "ThresholdCertificate",
    "ClassPool",
    "ForestSignature",
    "SignatureMismatch",
    "component_key",
    "find_union_threshold",
    "union_congruence_check",
    "forest_signature",
    "signature_from_counts",
    "signatures_equal",
]


class SignatureMismatch(ValueError):
    """Signatures built with different (k, logic, cap) were compared."""


def component_key(g: Graph):
    """Isomorphism-invariant key: the canonical code for trees, the sorted
    edge list otherwise (isomorphic non-trees may then get separate keys,
    which only costs an extra game)."""
    if is_tree(g):
        return ("tree", tree_canonical_code(g))
    return ("graph", g.vertex_count, tuple(sorted(g.edges)))


@dataclass(frozen=True)
class ThresholdCertificate:
    structure: Graph
    k: int
    logic: str
    threshold: int | None
    probes_verified: int
    max_probe: int = 8

    @property
    def found(self) -> bool:
        return self.threshold is not None

    def to_json(self) -> dict:
        from .graphs import format_graph

        return {
            "structure": format_graph(self.structure),
            "k": self.k,
            "logic": self.logic,
            "threshold": self.threshold,
            "probes_verified": self.probes_verified,
            "max_probe": self.max_probe,
            "found": self.found,
        }


def find_union_threshold(
    g: Graph,
    k: int,
    logic: str = FO,
    max_probe: int = 8,
    probes: int = 3,
    max_vertices: int | None = None,
    engine: GameEngine | None = None,
) -> ThresholdCertificate:
    """Smallest ``a <= max_probe`` with ``a*g`` equivalent to ``(a+j)*g`` for
    ``j = 1..probes``.

    Unions that exceed the vertex limit are not probed; ``probes_verified``
    counts the probes that were actually played.  If no ``a`` passes, the
    certificate has ``threshold=None``.
    """
    logic = _check_logic(logic)
    eng = engine or default_engine(logic, GRAPH, max_vertices)
    limit = eng.max_vertices
    n = g.vertex_count
    if n == 0:
        return ThresholdCertificate(g, k, logic, 1, probes, max_probe)
    unions: dict[int, Graph] = {}

    def copies(c: int) -> Graph:
        if c not in unions:
            unions[c] = disjoint_union([g] * c)
        return unions[c]

    for a in range(1, max_probe + 1):
        if a * n > limit:
            break
        base = eng.value(copies(a), (), (), k)
        played = 0
        ok = True
        for j in range(1, probes + 1):
            if (a + j) * n > limit:
                break
            played += 1
            if eng.value(copies(a + j), (), (), k) != base:
                ok = False
                break
        if ok and played:
            return ThresholdCertificate(g, k, logic, a, played, max_probe)
    return ThresholdCertificate(g, k, logic, None, 0, max_probe)


def union_congruence_check(h1: Graph, h2: Graph, g1: Graph, g2: Graph, k: int, logic: str = FO,
                           engine: GameEngine | None = None) -> bool:
    """Whether ``h1 + g1`` and ``h2 + g2`` are ``k``-equivalent."""
    logic = _check_logic(logic)
    eng = engine or default_engine(logic, GRAPH)
    return eng.equivalent(disjoint_union([h1, g1]), disjoint_union([h2, g2]), k)


class ClassPool:
    """Shared registry of component classes for one (k, logic).

    Class ids are issued in first-seen order, so the id of a class is the
    index of its first representative in :attr:`representatives`.
    """

    def __init__(self, k: int, logic: str = FO, max_vertices: int | None = None,
                 engine: GameEngine | None = None, max_probe: int = 8, probes: int = 3):
        self.k = k
        self.logic = _check_logic(logic)
        self.engine = engine or GameEngine(self.logic, GRAPH, max_vertices)
        self.max_probe = max_probe
        self.probes = probes
        self.representatives: list[Graph] = []
        self._by_key: dict = {}
        self._by_value: dict[int, int] = {}
        self._thresholds: dict[int, ThresholdCertificate] = {}

    def __len__(self) -> int:
        return len(self.representatives)

    def class_id(self, g: Graph) -> int:
        key = component_key(g)
        cid = self._by_key.get(key)
        if cid is not None:
            return cid
        value = self.engine.value(g, (), (), self.k)
        cid = self._by_value.get(value)
        if cid is None:
            cid = len(self.representatives)
            self.representatives.append(g)
            self._by_value[value] = cid
        self._by_key[key] = cid
        return cid

    def certificate(self, cid: int) -> ThresholdCertificate:
        if cid not in self._thresholds:
            self._thresholds[cid] = find_union_threshold(
                self.representatives[cid], self.k, self.logic, self.max_probe, self.probes,
                engine=self.engine,
            )
        return self._thresholds[cid]

    def threshold(self, cid: int) -> int:
        cert = self.certificate(cid)
        if cert.threshold is None:
            raise SizeGuardError(
                f"no union threshold <= {self.max_probe} certified for class {cid}"
            )
        return cert.threshold

    def uniform_cap(self, ids: Iterable[int] | None = None) -> int:
        """Largest threshold over ``ids`` (default: every class seen).  A
        multiplicity that is at least some class's threshold stays so under
        any larger cap, so the maximum is a valid common cap."""
        ids = range(len(self)) if ids is None else ids
        return max((self.threshold(c) for c in ids), default=1)


@dataclass(frozen=True)
class ForestSignature:
    """Capped multiplicities per component class.  A stored multiplicity
    equal to ``cap`` means "at least ``cap``"."""

    entries: tuple
    cap: int
    k: int
    logic: str
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("cap must be positive")
        for _, m in self.entries:
            if not 1 <= m <= self.cap:
                raise ValueError("multiplicities must lie in [1, cap]")

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "logic": self.logic,
            "cap": self.cap,
            "entries": {
                str(c): (f">={self.cap}" if m == self.cap else m) for c, m in self.entries
            },
        }


def signature_from_counts(counts: Mapping[Graph, int] | Iterable[tuple[Graph, int]], k: int,
                          logic: str = FO, pool: ClassPool | None = None,
                          cap: int | None = None) -> ForestSignature:
    """Signature from component multiplicities.

    Without an explicit ``cap`` the largest certified threshold among the
    classes present is used.
    """
    logic = _check_logic(logic)
    pool = ClassPool(k, logic) if pool is None else pool
    if pool.k != k or pool.logic != logic:
        raise SignatureMismatch("class pool built for different (k, logic)")
    items = counts.items() if isinstance(counts, Mapping) else counts
    per_class: Counter = Counter()
    for g, m in items:
        if m:
            per_class[pool.class_id(g)] += m
    if cap is None:
        cap = pool.uniform_cap(per_class)
    entries = tuple(sorted((c, min(m, cap)) for c, m in per_class.items()))
    return ForestSignature(entries, cap, k, logic)


def forest_signature(f: Forest | Graph, k: int, logic: str = FO, pool: ClassPool | None = None,
                     cap: int | None = None) -> ForestSignature:
    """Signature of a forest.  Components are first grouped by canonical
    code so each isomorphism type is classified once."""
    g = f.to_graph() if isinstance(f, Forest) else f
    by_key: dict = {}
    for comp in components(g):
        key = component_key(comp)
        if key in by_key:
            by_key[key][1] += 1
        else:
            by_key[key] = [comp, 1]
    return signature_from_counts([(c, m) for c, m in by_key.values()], k, logic, pool, cap)


def signatures_equal(s1: ForestSignature, s2: ForestSignature) -> bool:
    if (s1.k, s1.logic, s1.cap) != (s2.k, s2.logic, s2.cap):
        raise SignatureMismatch(
            f"cannot compare signatures with parameters {(s1.k, s1.logic, s1.cap)} "
            f"and {(s2.k, s2.logic, s2.cap)}"
        )
    return s1.entries == s2.entries
