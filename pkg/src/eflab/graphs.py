"""Graphs, rooted trees and forests, plus the metric and counting helpers
used throughout the package.

Vertices are always ``0 .. vertex_count - 1``.  All structures are frozen
dataclasses, so they can be hashed, shared between threads and used as
cache keys.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Sequence

__all__ = [
    "Graph",
    "RootedTree",
    "Forest",
    "Metrics",
    "UNREACHABLE",
    "components",
    "connected_components",
    "disjoint_union",
    "metrics",
    "canonical_code",
    "tree_canonical_code",
    "is_tree",
    "automorphism_count",
    "density",
    "is_strictly_balanced",
    "count_copies",
    "count_injective_homomorphisms",
    "contains_copy",
    "subtree",
    "path_graph",
    "star_graph",
    "complete_graph",
    "empty_graph",
    "enumerate_graphs",
    "parse_graph",
    "format_graph",
    "parse_rooted_tree",
    "format_rooted_tree",
]

#: Distance between vertices of different components.
UNREACHABLE = math.inf

#: Default vertex limit for the exponential subgraph checks.
BALANCE_LIMIT = 10
#: Default vertex limit for patterns in :func:`count_copies`.
PATTERN_LIMIT = 8


class GraphError(ValueError):
    """Raised for malformed structures or violated size guards."""


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices ``0 .. vertex_count - 1``."""

    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        normalized = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge {e} out of range for {self.vertex_count} vertices")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        edges = list(edges)
        keyed = {(min(u, v), max(u, v)) for u, v in edges}
        if len(keyed) != len(edges):
            raise GraphError("multiple edges are not allowed")
        return cls(vertex_count, frozenset(keyed))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhoods as bitmasks."""
        out = [0] * self.vertex_count
        for u, v in self.edges:
            out[u] |= 1 << v
            out[v] |= 1 << u
        return tuple(out)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertex ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        sub = [
            (index[u], index[v])
            for u, v in self.edges
            if u in index and v in index
        ]
        return Graph(len(vertices), frozenset(sub))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.vertex_count, frozenset((perm[u], perm[v]) for u, v in self.edges))

    def __repr__(self):
        return f"Graph({self.vertex_count}, {sorted(self.edges)})"


@dataclass(frozen=True)
class RootedTree:
    """A tree with a distinguished root.

    ``parent[v]`` is the parent of ``v``; ``parent[root]`` is ``None``.
    """

    vertex_count: int
    root: int
    parent: tuple

    def __post_init__(self):
        n = self.vertex_count
        parent = tuple(self.parent)
        object.__setattr__(self, "parent", parent)
        if n < 1:
            raise GraphError("a rooted tree needs at least one vertex")
        if len(parent) != n:
            raise GraphError("parent map must cover every vertex")
        if not 0 <= self.root < n:
            raise GraphError("root out of range")
        roots = [v for v in range(n) if parent[v] is None]
        if roots != [self.root]:
            raise GraphError("exactly the root must lack a parent")
        for v in range(n):
            p = parent[v]
            if p is not None and not 0 <= p < n:
                raise GraphError(f"parent of {v} out of range")
        # every parent chain must reach the root within n steps
        for v in range(n):
            steps, u = 0, v
            while u != self.root:
                u = parent[u]
                steps += 1
                if steps > n:
                    raise GraphError("parent map contains a cycle")

    @classmethod
    def from_graph(cls, g: Graph, root: int) -> "RootedTree":
        if not is_tree(g):
            raise GraphError("graph is not a tree")
        parent: list = [None] * g.vertex_count
        seen = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    queue.append(w)
        return cls(g.vertex_count, root, tuple(parent))

    @classmethod
    def from_edges(cls, vertex_count: int, root: int, edges: Iterable[tuple[int, int]]) -> "RootedTree":
        """Build from parent -> child pairs."""
        parent: list = [None] * vertex_count
        for p, c in edges:
            if parent[c] is not None:
                raise GraphError(f"vertex {c} has two parents")
            parent[c] = p
        return cls(vertex_count, root, tuple(parent))

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for v, p in enumerate(self.parent):
            if p is not None:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def order(self) -> tuple[int, ...]:
        """Vertices in BFS order from the root."""
        out = [self.root]
        for u in out:
            out.extend(self.children[u])
        return tuple(out)

    @cached_property
    def depths(self) -> tuple[int, ...]:
        d = [0] * self.vertex_count
        for u in self.order:
            for w in self.children[u]:
                d[w] = d[u] + 1
        return tuple(d)

    @property
    def depth(self) -> int:
        """Eccentricity of the root."""
        return max(self.depths)

    def parent_edges(self) -> list[tuple[int, int]]:
        return sorted((p, v) for v, p in enumerate(self.parent) if p is not None)

    def to_graph(self) -> Graph:
        return Graph(self.vertex_count, frozenset(self.parent_edges()))

    def relabel(self, perm: Sequence[int]) -> "RootedTree":
        parent: list = [None] * self.vertex_count
        for v, p in enumerate(self.parent):
            parent[perm[v]] = None if p is None else perm[p]
        return RootedTree(self.vertex_count, perm[self.root], tuple(parent))


@dataclass(frozen=True)
class Forest:
    """An ordered collection of tree components."""

    components: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            if not is_tree(c):
                raise GraphError("every forest component must be a tree")

    @classmethod
    def from_graph(cls, g: Graph) -> "Forest":
        return cls(tuple(components(g)))

    @property
    def vertex_count(self) -> int:
        return sum(c.vertex_count for c in self.components)

    def to_graph(self) -> Graph:
        return disjoint_union(self.components)

    def __len__(self):
        return len(self.components)


@dataclass(frozen=True)
class Metrics:
    distances: tuple
    eccentricities: tuple
    radius: float
    diameter: float
    centers: tuple


# ---------------------------------------------------------------------------
# constructors


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def disjoint_union(graphs: Iterable[Graph]) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.vertex_count
    return Graph(offset, frozenset(edges))


# ---------------------------------------------------------------------------
# components and metrics


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Vertex sets of the components, each sorted, ordered by least vertex."""
    seen = [False] * g.vertex_count
    out = []
    for s in range(g.vertex_count):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        for u in comp:
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
        out.append(tuple(sorted(comp)))
    return out


def components(g: Graph) -> list[Graph]:
    """Components as induced subgraphs.

    Local vertex ``i`` of the ``j``-th component is original vertex
    ``connected_components(g)[j][i]``.
    """
    return [g.induced(c) for c in connected_components(g)]


def _bfs(g: Graph, source: int) -> list:
    dist: list = [UNREACHABLE] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def metrics(g: Graph) -> Metrics:
    """All-pairs distances, eccentricities, radius, diameter and centers.

    Vertices in different components are at distance ``UNREACHABLE``
    (``math.inf``), so a disconnected graph has infinite radius and
    diameter and every vertex is central.  The graph on zero vertices
    gets radius and diameter 0 and no centers.
    """
    dist = tuple(tuple(_bfs(g, v)) for v in range(g.vertex_count))
    ecc = tuple(max(row) for row in dist)
    if not ecc:
        return Metrics((), (), 0, 0, ())
    r = min(ecc)
    return Metrics(dist, ecc, r, max(ecc), tuple(v for v in range(g.vertex_count) if ecc[v] == r))


def is_tree(g: Graph) -> bool:
    if g.vertex_count == 0 or g.edge_count != g.vertex_count - 1:
        return False
    return len(connected_components(g)) == 1


# ---------------------------------------------------------------------------
# canonical forms


def _rooted_codes(children: Sequence[Sequence[int]], root: int) -> dict[int, bytes]:
    order = [root]
    for u in order:
        order.extend(children[u])
    codes: dict[int, bytes] = {}
    for u in reversed(order):
        codes[u] = b"(" + b"".join(sorted(codes[w] for w in children[u])) + b")"
    return codes


def canonical_code(t: RootedTree) -> bytes:
    """AHU code of a rooted tree: equal iff the trees are rooted-isomorphic."""
    return _rooted_codes(t.children, t.root)[t.root]


def subtree_codes(t: RootedTree) -> tuple[bytes, ...]:
    """Canonical code of ``T(v)`` for every vertex ``v``."""
    codes = _rooted_codes(t.children, t.root)
    return tuple(codes[v] for v in range(t.vertex_count))


def _children_from(g: Graph, root: int) -> list[list[int]]:
    children: list[list[int]] = [[] for _ in range(g.vertex_count)]
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in seen:
                seen.add(w)
                children[u].append(w)
                queue.append(w)
    return children


def tree_centers(g: Graph) -> tuple[int, ...]:
    """Centers of a tree by repeated leaf stripping (one or two vertices)."""
    n = g.vertex_count
    if n <= 2:
        return tuple(range(n))
    deg = [g.degree(v) for v in range(n)]
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for u in layer:
            for w in g.adjacency[u]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return tuple(sorted(layer))


def tree_canonical_code(t: Graph) -> bytes:
    """Canonical code of an unrooted tree: the least rooted code over its centers."""
    if not is_tree(t):
        raise GraphError("tree_canonical_code needs a tree")
    return min(_rooted_codes(_children_from(t, c), c)[c] for c in tree_centers(t))


# ---------------------------------------------------------------------------
# automorphisms and counting


def _rooted_aut(children: Sequence[Sequence[int]], root: int) -> int:
    codes = _rooted_codes(children, root)
    total = 1
    for u in range(len(children)):
        if u not in codes:
            continue
        groups = Counter(codes[w] for w in children[u])
        for mult in groups.values():
            total *= math.factorial(mult)
    return total


def automorphism_count(t: Graph, brute_force_limit: int = 0) -> int:
    """Number of automorphisms of a tree.

    Uses the product over repeated isomorphic child subtrees of the tree
    rooted at its center (or at its central edge).  Non-trees are rejected
    unless ``brute_force_limit`` admits an exhaustive count.
    """
    if not is_tree(t):
        if t.vertex_count <= brute_force_limit:
            return count_injective_homomorphisms(t, t)
        raise GraphError("automorphism_count needs a tree")
    centers = tree_centers(t)
    if len(centers) == 1:
        return _rooted_aut(_children_from(t, centers[0]), centers[0])
    a, b = centers
    # cut the central edge and count both halves
    cut = Graph(t.vertex_count, t.edges - {(a, b)})
    ca, cb = _children_from(cut, a), _children_from(cut, b)
    swap = 2 if _rooted_codes(ca, a)[a] == _rooted_codes(cb, b)[b] else 1
    return _rooted_aut(ca, a) * _rooted_aut(cb, b) * swap


def density(g: Graph) -> Fraction:
    if g.vertex_count == 0:
        raise GraphError("density of the empty graph is undefined")
    return Fraction(g.edge_count, g.vertex_count)


def is_strictly_balanced(g: Graph, limit: int = BALANCE_LIMIT) -> bool:
    """Every proper subgraph with at least one vertex is strictly sparser.

    A proper subgraph on all of ``V`` has fewer edges, so it is enough to
    scan induced subgraphs on proper nonempty vertex subsets.
    """
    n = g.vertex_count
    if n == 0:
        raise GraphError("strict balance needs at least one vertex")
    if n > limit:
        raise GraphError(f"strict-balance check limited to {limit} vertices")
    rho = density(g)
    for size in range(1, n):
        for sub in combinations(range(n), size):
            if density(g.induced(sub)) >= rho:
                return False
    return True


def _search_order(pattern: Graph) -> list[int]:
    """Pattern vertices so that each one after the first of its component
    has an earlier neighbour."""
    order: list[int] = []
    placed = set()
    for start in sorted(range(pattern.vertex_count), key=lambda v: -pattern.degree(v)):
        if start in placed:
            continue
        placed.add(start)
        order.append(start)
        i = len(order) - 1
        while i < len(order):
            for w in pattern.adjacency[order[i]]:
                if w not in placed:
                    placed.add(w)
                    order.append(w)
            i += 1
    return order


def _injective_homs(host: Graph, pattern: Graph, stop_at: int | None = None) -> int:
    order = _search_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    # earlier neighbours of each pattern vertex, in search order
    back = [[pos[w] for w in pattern.adjacency[v] if pos[w] < i] for i, v in enumerate(order)]
    need = [pattern.degree(v) for v in order]
    host_adj = host.adjacency
    host_set = [set(a) for a in host_adj] if host.vertex_count else []
    image = [0] * len(order)
    used: set[int] = set()
    count = 0

    def extend(i: int) -> bool:
        nonlocal count
        if i == len(order):
            count += 1
            return stop_at is not None and count >= stop_at
        if back[i]:
            first, rest = back[i][0], back[i][1:]
            candidates = host_adj[image[first]]
        else:
            rest = []
            candidates = range(host.vertex_count)
        for h in candidates:
            if h in used or len(host_adj[h]) < need[i]:
                continue
            if any(image[j] not in host_set[h] for j in rest):
                continue
            image[i] = h
            used.add(h)
            done = extend(i + 1)
            used.discard(h)
            if done:
                return True
        return False

    extend(0)
    return count


def count_injective_homomorphisms(host: Graph, pattern: Graph) -> int:
    """Injective maps V(pattern) -> V(host) sending edges to edges."""
    return _injective_homs(host, pattern)


def count_copies(host: Graph, pattern: Graph, limit: int = PATTERN_LIMIT) -> int:
    """Number of (not necessarily induced) subgraphs of ``host`` isomorphic
    to ``pattern``: injective homomorphisms divided by ``a(pattern)``."""
    if pattern.vertex_count > limit:
        raise GraphError(f"pattern has more than {limit} vertices")
    if pattern.vertex_count == 0:
        return 1
    homs = _injective_homs(host, pattern)
    aut = _injective_homs(pattern, pattern)
    return homs // aut


def contains_copy(host: Graph, pattern: Graph, limit: int = 16) -> bool:
    if pattern.vertex_count > limit:
        raise GraphError(f"pattern has more than {limit} vertices")
    if pattern.vertex_count == 0:
        return True
    return _injective_homs(host, pattern, stop_at=1) > 0


def subtree(t: RootedTree, v: int) -> RootedTree:
    """``T(v)``: descendants of ``v`` rooted at ``v``, renumbered in BFS order."""
    if not 0 <= v < t.vertex_count:
        raise GraphError(f"vertex {v} not in tree")
    order = [v]
    for u in order:
        order.extend(t.children[u])
    index = {u: i for i, u in enumerate(order)}
    parent = [None] + [index[t.parent[u]] for u in order[1:]]
    return RootedTree(len(order), 0, tuple(parent))


# ---------------------------------------------------------------------------
# small-graph enumeration (brute force, used by tests and the CLI)


def _brute_canonical(g: Graph) -> tuple:
    best = None
    for perm in permutations(range(g.vertex_count)):
        key = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges))
        if best is None or key < best:
            best = key
    return best or ()


def enumerate_graphs(order: int) -> list[Graph]:
    """One graph per isomorphism class on exactly ``order`` vertices (order <= 6)."""
    if order > 6:
        raise GraphError("brute-force graph enumeration limited to 6 vertices")
    pairs = list(combinations(range(order), 2))
    seen = {}
    for mask in range(1 << len(pairs)):
        g = Graph(order, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))
        key = _brute_canonical(g)
        if key not in seen:
            seen[key] = Graph(order, frozenset(key))
    return list(seen.values())


# ---------------------------------------------------------------------------
# text format


def format_graph(g: Graph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def _data_lines(text: str) -> list[list[str]]:
    return [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _header(rows: list[list[str]]) -> tuple[int, int]:
    if not rows or len(rows[0]) != 2:
        raise GraphError("expected header line 'n m'")
    try:
        return int(rows[0][0]), int(rows[0][1])
    except ValueError as exc:
        raise GraphError(f"bad header: {' '.join(rows[0])}") from exc


def _pairs(rows: list[list[str]], m: int) -> list[tuple[int, int]]:
    if len(rows) != m:
        raise GraphError(f"expected {m} edge lines, found {len(rows)}")
    out = []
    for row in rows:
        if len(row) != 2:
            raise GraphError(f"bad edge line: {' '.join(row)}")
        out.append((int(row[0]), int(row[1])))
    return out


def parse_graph(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v`` (0-based)."""
    rows = _data_lines(text)
    n, m = _header(rows)
    return Graph.from_edges(n, _pairs(rows[1:], m))


def format_rooted_tree(t: RootedTree) -> str:
    edges = t.parent_edges()
    lines = [f"{t.vertex_count} {len(edges)}", f"root {t.root}"]
    lines += [f"{p} {c}" for p, c in edges]
    return "\n".join(lines) + "\n"


def parse_rooted_tree(text: str) -> RootedTree:
    """Parse the graph format with an extra ``root r`` line; edges are parent -> child."""
    rows = _data_lines(text)
    n, m = _header(rows)
    if len(rows) < 2 or rows[1][0] != "root" or len(rows[1]) != 2:
        raise GraphError("expected 'root r' after the header")
    return RootedTree.from_edges(n, int(rows[1][1]), _pairs(rows[2:], m))
